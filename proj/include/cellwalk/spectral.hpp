#pragma once

#include <string>
#include <vector>

#include "cellwalk/operators.hpp"

namespace cellwalk {

/// Sampled spectral density function F(lambda) of d_{k+1}^*: the averaged
/// count of upper-Laplacian eigenvalues <= lambda^2 over the torus grid
/// (or the plain count for the trivial group).
struct DensityCurve {
    std::vector<double> lambda;  // includes lambda = 0 as the first entry
    std::vector<double> F;
    int quad_m = 0;
    double kernel_tol = 0.0;
    int orbit_count = 0;
};

/// Geometric lambda grid with a leading zero for the kernel count.
std::vector<double> density_lambda_grid(double lo, double hi, int points);

DensityCurve spectral_density(const GCWComplex& x, int k, const std::vector<double>& lambda_grid,
                              int quad_m);

/// L2-Betti number b^(2)(d_{k+1}^*) = F(0) by kernel-rank counting.
double l2_betti(const DensityCurve& density);

struct NsiEstimate {
    double alpha_hat = 0.0;
    double b2_hat = 0.0;
    double slope_stderr = 0.0;
    double window_lo = 0.0, window_hi = 0.0;
    bool spectral_gap = false;  // F constant on the window: alpha = +infinity convention
    std::string method;         // "density" or "walk"
};

/// Least-squares slope of log(F(lambda) - F(0)) against log(lambda) over the
/// window; approximates the liminf defining the spectral-decay exponent.
NsiEstimate nsi_from_density(const DensityCurve& density, double window_lo, double window_hi);

/// Exponent fit from the return series: slope -a of
/// log(C1^n p(n) - b2) vs log(n) over n in [n_lo, n_hi]; returns 2a.
/// Requires an upper k-regular complex (C1 constant).
NsiEstimate nsi_from_walk(const std::vector<double>& p, double c1, double b2, int n_lo, int n_hi);

/// p_q(n) = identity_trace(B_q^n) for n = 0..n_max. Exact rationals up to
/// n_exact, then a dense float convolution path (Z^d) or dense float matrix
/// powers (trivial group) up to n_max.
ReturnSeries trace_power_series(const OperatorRep& walk_op, int n_max, int n_exact = 64);

}  // namespace cellwalk
