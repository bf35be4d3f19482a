#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cellwalk/group_ring.hpp"

namespace cellwalk {

/// Pointwise Fourier transform of a Z^d group-ring matrix:
/// entry (i,j) at theta is sum_g M_ij(g) exp(i <theta, g>).
template <class S>
Eigen::MatrixXcd fourier_evaluate(const GroupRingMatrix<S>& m, std::span<const double> theta) {
    if (m.group().is_trivial())
        throw DomainError("fourier evaluation requires a free abelian group");
    if (static_cast<int>(theta.size()) != m.group().rank)
        throw DimensionError("theta dimension does not match the group rank");
    Eigen::MatrixXcd out(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            std::complex<double> v = 0.0;
            for (const auto& [g, c] : m.at(i, j).terms()) {
                double phase = 0.0;
                for (int k = 0; k < g.rank(); ++k) phase += theta[static_cast<std::size_t>(k)] * g[k];
                v += ScalarTraits<S>::to_double(c) * std::polar(1.0, phase);
            }
            out(i, j) = v;
        }
    }
    return out;
}

/// Midpoint points of the M-point torus rule in one dimension.
std::vector<double> midpoint_angles(int quad_m);

/// (2 pi)^-d integral of tr(M-hat(theta)^n) for all n = 0..n_max by midpoint
/// quadrature with quad_m points per dimension, via eigenvalues of M-hat.
/// The integrand is a trigonometric polynomial, so the rule is exact once
/// quad_m exceeds the support width.
std::vector<double> quadrature_trace_powers(const GroupRingMatrix<double>& m, int n_max,
                                            int quad_m);

inline std::vector<double> quadrature_trace_powers(const GroupRingMatrix<Rational>& m, int n_max,
                                                   int quad_m) {
    return quadrature_trace_powers(to_float(m), n_max, quad_m);
}

/// All eigenvalues of the Hermitian matrix H-hat(theta) collected over the
/// full midpoint grid (quad_m^d points), in ascending order.
std::vector<double> hermitian_spectrum_over_torus(const GroupRingMatrix<double>& m, int quad_m);

}  // namespace cellwalk
