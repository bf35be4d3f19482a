#include "cellwalk/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "cellwalk/fourier.hpp"

namespace cellwalk {

namespace detail {

/// Dense coefficient box over Z^d for the float convolution fast path:
/// coefficients stored on an axis-aligned box, row-major.
struct Box {
    std::vector<int> lo;    // per-dimension lower corner
    std::vector<int> dims;  // per-dimension extent (0 means empty)
    std::vector<double> a;

    bool empty() const { return a.empty(); }

    double at(const std::vector<int>& g) const {
        if (empty()) return 0.0;
        long idx = 0;
        for (std::size_t i = 0; i < lo.size(); ++i) {
            const int off = g[i] - lo[i];
            if (off < 0 || off >= dims[i]) return 0.0;
            idx = idx * dims[i] + off;
        }
        return a[static_cast<std::size_t>(idx)];
    }
};

/// y += sum over terms (shift, coeff) of coeff * (x translated by shift).
/// The destination box must already cover every translate.
void accumulate_translates(Box& y, const Box& x,
                           const std::vector<std::pair<std::vector<int>, double>>& terms) {
    if (x.empty()) return;
    const std::size_t d = x.lo.size();
    std::vector<long> xstride(d, 1), ystride(d, 1);
    for (std::size_t i = d; i-- > 1;) {
        xstride[i - 1] = xstride[i] * x.dims[i];
        ystride[i - 1] = ystride[i] * y.dims[i];
    }
    for (const auto& [shift, coeff] : terms) {
        if (coeff == 0.0) continue;
        long ybase = 0;
        for (std::size_t i = 0; i < d; ++i) ybase += (x.lo[i] + shift[i] - y.lo[i]) * ystride[i];
        const double c = coeff;
        auto rec = [&](auto&& self, std::size_t dim, long xoff, long yoff) -> void {
            if (dim + 1 == d) {
                for (int j = 0; j < x.dims[dim]; ++j)
                    y.a[static_cast<std::size_t>(yoff + j)] +=
                        c * x.a[static_cast<std::size_t>(xoff + j)];
                return;
            }
            for (int i = 0; i < x.dims[dim]; ++i)
                self(self, dim + 1, xoff + i * xstride[dim], yoff + i * ystride[dim]);
        };
        rec(rec, 0, 0, ybase);
    }
}

struct SparseEntry {
    std::vector<std::pair<std::vector<int>, double>> terms;
};

/// Matrix of boxes advanced one step per multiplication with a fixed sparse
/// group-ring matrix. Used for long float power series over Z^d.
class DensePowerTracer {
public:
    explicit DensePowerTracer(const GroupRingMatrix<double>& m)
        : d_(m.group().rank), n_(m.rows()) {
        step_.resize(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_));
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) {
                auto& entry = step_[static_cast<std::size_t>(i * n_ + j)];
                for (const auto& [g, c] : m.at(i, j).terms()) {
                    std::vector<int> shift(static_cast<std::size_t>(d_));
                    for (int t = 0; t < d_; ++t) shift[static_cast<std::size_t>(t)] = g[t];
                    entry.terms.emplace_back(std::move(shift), c);
                }
            }
        // identity power
        cur_.resize(step_.size());
        for (int i = 0; i < n_; ++i) {
            Box& b = cur_[static_cast<std::size_t>(i * n_ + i)];
            b.lo.assign(static_cast<std::size_t>(d_), 0);
            b.dims.assign(static_cast<std::size_t>(d_), 1);
            b.a = {1.0};
        }
        for (auto& b : cur_)
            if (b.a.empty()) {
                b.lo.assign(static_cast<std::size_t>(d_), 0);
                b.dims.assign(static_cast<std::size_t>(d_), 0);
            }
    }

    double identity_trace() const {
        std::vector<int> origin(static_cast<std::size_t>(d_), 0);
        double t = 0.0;
        for (int i = 0; i < n_; ++i) t += cur_[static_cast<std::size_t>(i * n_ + i)].at(origin);
        return t;
    }

    void advance() {
        std::vector<Box> next(cur_.size());
        for (int i = 0; i < n_; ++i) {
            for (int j = 0; j < n_; ++j) {
                Box& out = next[static_cast<std::size_t>(i * n_ + j)];
                // bounding box of all contributions
                std::vector<int> lo, hi;
                bool any = false;
                for (int k = 0; k < n_; ++k) {
                    const Box& src = cur_[static_cast<std::size_t>(i * n_ + k)];
                    const auto& entry = step_[static_cast<std::size_t>(k * n_ + j)];
                    if (src.empty() || entry.terms.empty()) continue;
                    for (const auto& [shift, coeff] : entry.terms) {
                        (void)coeff;
                        if (!any) {
                            lo.assign(static_cast<std::size_t>(d_), 0);
                            hi.assign(static_cast<std::size_t>(d_), 0);
                            for (int t = 0; t < d_; ++t) {
                                lo[static_cast<std::size_t>(t)] =
                                    src.lo[static_cast<std::size_t>(t)] +
                                    shift[static_cast<std::size_t>(t)];
                                hi[static_cast<std::size_t>(t)] =
                                    lo[static_cast<std::size_t>(t)] +
                                    src.dims[static_cast<std::size_t>(t)] - 1;
                            }
                            any = true;
                        } else {
                            for (int t = 0; t < d_; ++t) {
                                const int l = src.lo[static_cast<std::size_t>(t)] +
                                              shift[static_cast<std::size_t>(t)];
                                const int h = l + src.dims[static_cast<std::size_t>(t)] - 1;
                                lo[static_cast<std::size_t>(t)] =
                                    std::min(lo[static_cast<std::size_t>(t)], l);
                                hi[static_cast<std::size_t>(t)] =
                                    std::max(hi[static_cast<std::size_t>(t)], h);
                            }
                        }
                    }
                }
                if (!any) {
                    out.lo.assign(static_cast<std::size_t>(d_), 0);
                    out.dims.assign(static_cast<std::size_t>(d_), 0);
                    continue;
                }
                out.lo = lo;
                out.dims.assign(static_cast<std::size_t>(d_), 0);
                long volume = 1;
                for (int t = 0; t < d_; ++t) {
                    out.dims[static_cast<std::size_t>(t)] =
                        hi[static_cast<std::size_t>(t)] - lo[static_cast<std::size_t>(t)] + 1;
                    volume *= out.dims[static_cast<std::size_t>(t)];
                }
                if (static_cast<std::size_t>(volume) > support_cap().load())
                    throw SupportCapError("float power support exceeded the cap");
                out.a.assign(static_cast<std::size_t>(volume), 0.0);
                for (int k = 0; k < n_; ++k)
                    accumulate_translates(out, cur_[static_cast<std::size_t>(i * n_ + k)],
                                          step_[static_cast<std::size_t>(k * n_ + j)].terms);
            }
        }
        cur_ = std::move(next);
    }

private:
    int d_;
    int n_;
    std::vector<SparseEntry> step_;
    std::vector<Box> cur_;
};

Eigen::MatrixXd to_dense_trivial(const GroupRingMatrix<Rational>& m) {
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            out(i, j) = m.at(i, j).identity_coefficient().get_d();
    return out;
}

}  // namespace detail

ReturnSeries trace_power_series(const OperatorRep& walk_op, int n_max, int n_exact) {
    const auto& m = walk_op.matrix;
    if (m.rows() != m.cols()) throw DimensionError("trace series requires a square operator");
    if (n_max < 0) throw DomainError("n_max must be non-negative");

    ReturnSeries series;
    series.method = ReturnSeries::Method::exact;

    const int exact_upto = std::min(n_max, n_exact);
    {
        auto power = GroupRingMatrix<Rational>::identity(m.group(), m.rows());
        for (int n = 0; n <= exact_upto; ++n) {
            if (n > 0) power = power * m;
            Rational tr = power.identity_trace();
            tr.canonicalize();
            series.exact_p.push_back(tr);
            series.p.push_back(tr.get_d());
        }
    }
    if (exact_upto >= n_max) return series;

    if (m.group().is_trivial()) {
        Eigen::MatrixXd dense = detail::to_dense_trivial(m);
        Eigen::MatrixXd power = dense;
        for (int n = 1; n <= n_max; ++n) {
            if (n > 1) power = power * dense;
            if (n > exact_upto) series.p.push_back(power.trace());
        }
        return series;
    }

    detail::DensePowerTracer tracer(to_float(m));
    for (int n = 1; n <= n_max; ++n) {
        tracer.advance();
        if (n > exact_upto) series.p.push_back(tracer.identity_trace());
    }
    return series;
}

std::vector<double> density_lambda_grid(double lo, double hi, int points) {
    if (!(lo > 0.0) || !(hi > lo) || points < 2)
        throw DomainError("density grid requires 0 < lo < hi and >= 2 points");
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(points) + 1);
    grid.push_back(0.0);
    const double ratio = std::log(hi / lo) / (points - 1);
    for (int i = 0; i < points; ++i) grid.push_back(lo * std::exp(ratio * i));
    return grid;
}

DensityCurve spectral_density(const GCWComplex& x, int k, const std::vector<double>& lambda_grid,
                              int quad_m) {
    if (quad_m < 2) throw DomainError("quadrature resolution must be at least 2");
    auto lap = build_upper_laplacian(x, k);
    const long spectral_bound =
        (k + 1 <= x.dim) ? degree_quantities(x, k, /*allow_absorbing=*/true).spectral_bound : 0;

    DensityCurve curve;
    curve.quad_m = quad_m;
    curve.orbit_count = x.orbit_count(k);
    curve.kernel_tol = 1e-9 * std::max<double>(1.0, static_cast<double>(spectral_bound));
    curve.lambda = lambda_grid;

    std::vector<double> spectrum;
    double weight = 1.0;
    if (x.group.is_trivial()) {
        Eigen::MatrixXd dense = detail::to_dense_trivial(lap.matrix);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense, Eigen::EigenvaluesOnly);
        spectrum.assign(es.eigenvalues().data(),
                        es.eigenvalues().data() + es.eigenvalues().size());
        std::sort(spectrum.begin(), spectrum.end());
    } else {
        spectrum = hermitian_spectrum_over_torus(to_float(lap.matrix), quad_m);
        long points = 1;
        for (int i = 0; i < x.group.rank; ++i) points *= quad_m;
        weight = 1.0 / static_cast<double>(points);
    }

    curve.F.reserve(lambda_grid.size());
    for (double lam : lambda_grid) {
        // kernel eigenvalues are counted at the tolerance even for lam = 0
        const double cut = std::max(lam * lam, curve.kernel_tol);
        const auto it = std::upper_bound(spectrum.begin(), spectrum.end(), cut);
        curve.F.push_back(static_cast<double>(it - spectrum.begin()) * weight);
    }
    return curve;
}

double l2_betti(const DensityCurve& density) {
    if (density.F.empty()) throw DomainError("empty density curve");
    if (density.lambda.front() != 0.0)
        throw DomainError("density curve must include lambda = 0");
    return density.F.front();
}

namespace {

struct FitResult {
    double slope = 0.0;
    double stderr_ = 0.0;
    int points = 0;
};

FitResult loglog_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
    const int n = static_cast<int>(xs.size());
    double sx = 0, sy = 0;
    for (int i = 0; i < n; ++i) {
        sx += xs[static_cast<std::size_t>(i)];
        sy += ys[static_cast<std::size_t>(i)];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        const double dx = xs[static_cast<std::size_t>(i)] - mx;
        sxx += dx * dx;
        sxy += dx * (ys[static_cast<std::size_t>(i)] - my);
    }
    FitResult fit;
    fit.points = n;
    fit.slope = sxy / sxx;
    double ss = 0;
    for (int i = 0; i < n; ++i) {
        const double e = ys[static_cast<std::size_t>(i)] - my -
                         fit.slope * (xs[static_cast<std::size_t>(i)] - mx);
        ss += e * e;
    }
    fit.stderr_ = n > 2 ? std::sqrt(ss / (n - 2) / sxx) : 0.0;
    return fit;
}

}  // namespace

NsiEstimate nsi_from_density(const DensityCurve& density, double window_lo, double window_hi) {
    if (!(window_lo > 0.0) || !(window_hi > window_lo))
        throw DomainError("invalid NSI fit window");
    const double f0 = l2_betti(density);
    std::vector<double> xs, ys;
    int in_window = 0;
    for (std::size_t i = 0; i < density.lambda.size(); ++i) {
        const double lam = density.lambda[i];
        if (lam < window_lo || lam > window_hi) continue;
        ++in_window;
        const double r = density.F[i] - f0;
        if (r <= 0.0) continue;
        xs.push_back(std::log(lam));
        ys.push_back(std::log(r));
    }
    if (in_window == 0) throw DomainError("no density samples fall inside the fit window");
    NsiEstimate est;
    est.method = "density";
    est.b2_hat = f0;
    est.window_lo = window_lo;
    est.window_hi = window_hi;
    if (xs.empty()) {
        // F == F(0) throughout the window: spectral gap, alpha = +infinity.
        est.spectral_gap = true;
        est.alpha_hat = std::numeric_limits<double>::infinity();
        return est;
    }
    if (xs.size() < 2) throw DomainError("NSI window contains fewer than two usable points");
    auto fit = loglog_fit(xs, ys);
    est.alpha_hat = fit.slope;
    est.slope_stderr = fit.stderr_;
    return est;
}

NsiEstimate nsi_from_walk(const std::vector<double>& p, double c1, double b2, int n_lo,
                          int n_hi) {
    if (n_lo < 1 || n_hi <= n_lo) throw DomainError("invalid NSI step window");
    if (static_cast<std::size_t>(n_hi) >= p.size())
        throw DomainError("return series does not cover the fit window");
    std::vector<double> xs, ys;
    double scale = std::pow(c1, n_lo);
    for (int n = n_lo; n <= n_hi; ++n) {
        const double r = scale * p[static_cast<std::size_t>(n)] - b2;
        if (r <= 0.0)
            throw DomainError(
                "nonpositive residual in the fit window: b2 estimate too large or n too small");
        xs.push_back(std::log(static_cast<double>(n)));
        ys.push_back(std::log(r));
        scale *= c1;
    }
    auto fit = loglog_fit(xs, ys);
    NsiEstimate est;
    est.method = "walk";
    est.b2_hat = b2;
    est.window_lo = n_lo;
    est.window_hi = n_hi;
    est.alpha_hat = -2.0 * fit.slope;
    est.slope_stderr = 2.0 * fit.stderr_;
    return est;
}

}  // namespace cellwalk
