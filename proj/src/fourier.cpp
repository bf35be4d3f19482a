#include "cellwalk/fourier.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "cellwalk/threads.hpp"

namespace cellwalk {

std::vector<double> midpoint_angles(int quad_m) {
    if (quad_m < 2) throw DomainError("quadrature resolution must be at least 2");
    std::vector<double> t(static_cast<std::size_t>(quad_m));
    const double step = 2.0 * M_PI / quad_m;
    for (int i = 0; i < quad_m; ++i) t[static_cast<std::size_t>(i)] = (i + 0.5) * step;
    return t;
}

namespace {

// Iterate theta over the tensor midpoint grid in row-major order; linear
// index -> angles.
void theta_at(const std::vector<double>& angles, int d, long index, std::vector<double>& out) {
    const long m = static_cast<long>(angles.size());
    for (int i = d - 1; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = angles[static_cast<std::size_t>(index % m)];
        index /= m;
    }
}

}  // namespace

std::vector<double> quadrature_trace_powers(const GroupRingMatrix<double>& m, int n_max,
                                            int quad_m) {
    if (m.rows() != m.cols()) throw DimensionError("trace quadrature requires a square matrix");
    const int d = m.group().rank;
    const auto angles = midpoint_angles(quad_m);
    long points = 1;
    for (int i = 0; i < d; ++i) points *= quad_m;

    constexpr long kChunk = 1024;
    const long n_chunks = (points + kChunk - 1) / kChunk;
    std::vector<std::vector<double>> partial(static_cast<std::size_t>(n_chunks));

    parallel_chunks(points, kChunk, 0, [&](long chunk, long begin, long end) {
        std::vector<double> sums(static_cast<std::size_t>(n_max) + 1, 0.0);
        std::vector<double> theta(static_cast<std::size_t>(d));
        for (long p = begin; p < end; ++p) {
            theta_at(angles, d, p, theta);
            Eigen::MatrixXcd hat = fourier_evaluate(m, theta);
            Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(hat, false);
            const auto& ev = es.eigenvalues();
            std::vector<std::complex<double>> pw(static_cast<std::size_t>(ev.size()),
                                                 std::complex<double>(1.0, 0.0));
            for (int n = 0; n <= n_max; ++n) {
                std::complex<double> tr = 0.0;
                for (Eigen::Index i = 0; i < ev.size(); ++i) {
                    tr += pw[static_cast<std::size_t>(i)];
                    pw[static_cast<std::size_t>(i)] *= ev(i);
                }
                sums[static_cast<std::size_t>(n)] += tr.real();
            }
        }
        partial[static_cast<std::size_t>(chunk)] = std::move(sums);
    });

    std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
    for (long c = 0; c < n_chunks; ++c)
        for (int n = 0; n <= n_max; ++n)
            out[static_cast<std::size_t>(n)] += partial[static_cast<std::size_t>(c)]
                                                        [static_cast<std::size_t>(n)];
    for (auto& v : out) v /= static_cast<double>(points);
    return out;
}

std::vector<double> hermitian_spectrum_over_torus(const GroupRingMatrix<double>& m, int quad_m) {
    if (m.rows() != m.cols())
        throw DimensionError("spectrum collection requires a square matrix");
    const int d = m.group().rank;
    const auto angles = midpoint_angles(quad_m);
    long points = 1;
    for (int i = 0; i < d; ++i) points *= quad_m;

    constexpr long kChunk = 1024;
    const long n_chunks = (points + kChunk - 1) / kChunk;
    std::vector<std::vector<double>> partial(static_cast<std::size_t>(n_chunks));

    parallel_chunks(points, kChunk, 0, [&](long chunk, long begin, long end) {
        std::vector<double> vals;
        vals.reserve(static_cast<std::size_t>((end - begin) * m.rows()));
        std::vector<double> theta(static_cast<std::size_t>(d));
        for (long p = begin; p < end; ++p) {
            theta_at(angles, d, p, theta);
            Eigen::MatrixXcd hat = fourier_evaluate(m, theta);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hat, Eigen::EigenvaluesOnly);
            for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
                vals.push_back(es.eigenvalues()(i));
        }
        partial[static_cast<std::size_t>(chunk)] = std::move(vals);
    });

    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(points * m.rows()));
    for (auto& p : partial) out.insert(out.end(), p.begin(), p.end());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace cellwalk
