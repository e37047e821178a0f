#pragma once

#include <functional>

#include "fpt/monte_carlo.hpp"

namespace fpt {

double normal_pdf(double x);
double normal_cdf(double x);

// Psi(y) = 2 * integral_0^y of the standard normal density = erf(y / sqrt(2)).
double psi(double y);

// P(tau_x^{bm} > t) = Psi(x / sqrt(t)) for Brownian motion and the constant
// barrier -x started at 0 (equivalently started at x > 0 with barrier 0).
double bm_constant_survival(double x, double t);

// Brownian meander endpoint CDF 1 - e^{-v^2 / 2}.
double meander_endpoint_cdf(double v);

// Euler scheme with per-step Brownian-bridge crossing correction
// exp(-2 d1 d2 / step) against the locally frozen boundary.
McEstimate bm_moving_boundary_mc(const std::function<double(double)>& g, double t, double step,
                                 const McConfig& cfg);

}  // namespace fpt
