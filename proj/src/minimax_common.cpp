#include "minimax_common.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "gapinterp/grid.hpp"
#include "gapinterp/interpolator.hpp"
#include "gapinterp/kernels.hpp"

namespace gapinterp {

std::string to_string(Mechanism m) {
    switch (m) {
        case Mechanism::ClosedForm: return "closed_form";
        case Mechanism::DegenerateAR: return "degenerate_ar";
        case Mechanism::Newton: return "newton";
        case Mechanism::Numerical: return "numerical";
    }
    return "unknown";
}

namespace detail {

namespace {

double mean(std::span<const double> x) {
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

// Smallest tau in [lo, hi] with phi(tau) >= target for a nondecreasing phi.
template <class F>
double bisect(F phi, double target, double lo, double hi) {
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (phi(mid) >= target) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

}  // namespace

CVector positive_weights(const ObservationPattern& p, const FunctionalWeights& w) {
    CVector a = weight_vector(w, p);
    const auto t = p.missing_indices();
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (!(a(i).real() > 0.0) || a(i).imag() != 0.0) {
            fail(ErrorCode::WeightsNotPositive, "a(" + std::to_string(t[static_cast<std::size_t>(i)]) +
                                                    ") must be real and strictly positive");
        }
    }
    return a;
}

std::vector<double> values_on(const SpectralDensity& f, std::size_t n) {
    const std::size_t native = f.native_grid();
    if (native == 0 || native == n) return f.values(n);
    if (native % n != 0) {
        fail(ErrorCode::GridMismatch, "tabulated density of size " + std::to_string(native) +
                                          " cannot be sampled on " + std::to_string(n) + " points");
    }
    const auto full = f.values(native);
    std::vector<double> out(n);
    const std::size_t stride = native / n;
    for (std::size_t k = 0; k < n; ++k) out[k] = full[k * stride];
    return out;
}

bool inverse_positive(std::span<const double> inv, double b0) {
    const double mn = *std::min_element(inv.begin(), inv.end());
    return mn > kPositivityTolerance * std::abs(b0);
}

void finish_from_solution(LeastFavourableResult& r, const CVector& c, std::span<const double> inv_grid) {
    r.f0 = SpectralDensity(InversePolynomial{r.b0});
    const std::size_t G = inv_grid.size();
    const auto A = kernels::trig_sum(r.indices, to_std(r.a), G);
    const auto C = kernels::trig_sum(r.indices, to_std(c), G);
    r.h0_grid.resize(G);
    for (std::size_t k = 0; k < G; ++k) r.h0_grid[k] = A[k] - C[k] * inv_grid[k];
    r.delta0 = r.a.dot(c).real();
}

void finish_by_solve(LeastFavourableResult& r, std::span<const double> inv_grid) {
    const auto s = solve_system(r.indices, r.a, r.b0, inv_grid);
    r.f0 = SpectralDensity(InversePolynomial{r.b0});
    r.h0_grid = s.h_grid;
    r.delta0 = s.delta;
}

std::vector<double> project_mean_floor(std::span<const double> y, double p, double eps) {
    std::vector<double> z(y.size());
    auto fill = [&](double tau) {
        for (std::size_t k = 0; k < y.size(); ++k) z[k] = std::max(y[k] + tau, eps);
        return mean(z);
    };
    if (fill(0.0) >= p) return z;
    const double lo = 0.0;
    const double hi = p - *std::min_element(y.begin(), y.end()) + eps;
    fill(bisect(fill, p, lo, hi));
    return z;
}

std::vector<double> project_box_mean(std::span<const double> y, std::span<const double> lo,
                                     std::span<const double> hi, double p) {
    std::vector<double> z(y.size());
    auto fill = [&](double tau) {
        for (std::size_t k = 0; k < y.size(); ++k) z[k] = std::clamp(y[k] + tau, lo[k], hi[k]);
        return mean(z);
    };
    double tlo = std::numeric_limits<double>::infinity();
    double thi = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < y.size(); ++k) {
        tlo = std::min(tlo, lo[k] - y[k]);
        thi = std::max(thi, hi[k] - y[k]);
    }
    if (!(thi > tlo)) {
        fill(tlo);
        return z;
    }
    fill(bisect(fill, p, tlo, thi));
    return z;
}

std::vector<double> project_moments_floor(std::span<const double> y, std::span<const double> b, double eps) {
    const std::size_t n = y.size();
    const auto W = static_cast<Eigen::Index>(b.size()) - 1;
    Eigen::MatrixXd Psi(static_cast<Eigen::Index>(n), W + 1);
    for (std::size_t k = 0; k < n; ++k) {
        const double l = grid::lambda(k, n);
        for (Eigen::Index m = 0; m <= W; ++m) Psi(static_cast<Eigen::Index>(k), m) = std::cos(static_cast<double>(m) * l);
    }
    Eigen::VectorXd ys(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) ys(static_cast<Eigen::Index>(k)) = 0.5 * (y[k] + y[(n - k) % n]);
    const Eigen::Map<const Eigen::VectorXd> bv(b.data(), W + 1);
    const double nd = static_cast<double>(n);
    const double scale = std::max(1.0, bv.cwiseAbs().maxCoeff());

    // semismooth Newton on the dual: x(mu) = max(ys - Psi mu, eps), F(mu) = Psi^T x / n - b
    // start from the affine projection, exact when it stays above the floor
    Eigen::VectorXd mu = (Psi.transpose() * ys / nd - bv).cwiseQuotient(Psi.colwise().squaredNorm().transpose() / nd);
    auto primal = [&](const Eigen::VectorXd& m) { return (ys - Psi * m).cwiseMax(eps).eval(); };
    auto residual = [&](const Eigen::VectorXd& x) { return (Psi.transpose() * x / nd - bv).eval(); };
    Eigen::VectorXd x = primal(mu);
    Eigen::VectorXd F = residual(x);
    for (int it = 0; it < 200 && F.cwiseAbs().maxCoeff() > 1e-15 * scale; ++it) {
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(W + 1, W + 1);
        for (Eigen::Index k = 0; k < ys.size(); ++k) {
            if (ys(k) - Psi.row(k).dot(mu) > eps) J.noalias() += Psi.row(k).transpose() * Psi.row(k);
        }
        J /= nd;
        const Eigen::VectorXd step = J.completeOrthogonalDecomposition().solve(F);
        double s = 1.0;
        const double f0 = F.norm();
        bool moved = false;
        for (int h = 0; h < 60; ++h, s *= 0.5) {
            const Eigen::VectorXd m2 = mu + s * step;
            const Eigen::VectorXd x2 = primal(m2);
            const Eigen::VectorXd F2 = residual(x2);
            if (F2.norm() < f0) {
                mu = m2;
                x = x2;
                F = F2;
                moved = true;
                break;
            }
        }
        if (!moved) break;
    }
    if (F.cwiseAbs().maxCoeff() > 1e-10 * scale) fail(ErrorCode::NotConverged, "moment projection failed");
    return {x.data(), x.data() + x.size()};
}

}  // namespace detail

}  // namespace gapinterp
