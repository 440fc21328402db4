#include <algorithm>
#include <functional>
#include <limits>
#include <cmath>
#include <numeric>
#include <string>

#include "gapinterp/grid.hpp"
#include "gapinterp/interpolator.hpp"
#include "gapinterp/kernels.hpp"
#include "minimax_common.hpp"

namespace gapinterp {

namespace {

// Delta(g) = <B(g)^-1 a, a> with B built from the node coefficients of g = 1/f.
struct Objective {
    std::vector<int> t;
    CVector a;
    int span = 0;

    double value(std::span<const double> g, CVector& c) const {
        FourierCoeffs b(grid::fourier_coeffs(g, span));
        c = solve_hermitian(build_gram(t, b).B, a);
        return a.dot(c).real();
    }

    // dDelta/dg_k up to the positive factor 1/n
    std::vector<double> gradient(const CVector& c, std::size_t n) const {
        const auto C = kernels::trig_sum(t, detail::to_std(c), n);
        std::vector<double> d(n);
        for (std::size_t k = 0; k < n; ++k) d[k] = -std::norm(C[k]);
        return d;
    }
};

double rms(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s / static_cast<double>(x.size()));
}

struct Feasible {
    std::function<std::vector<double>(std::span<const double>)> project;
    std::vector<double> start;
    std::vector<double> lo, hi;  // DVU bounds on g at the nodes
};

Feasible make_feasible(const DensityClass& cls, std::size_t n) {
    Feasible fs;
    if (const auto* d = std::get_if<D0Minus>(&cls)) {
        const double p = d->p;
        const double eps = 1e-6 * p;
        fs.project = [p, eps](std::span<const double> y) { return detail::project_mean_floor(y, p, eps); };
        fs.start.assign(n, p);
        return fs;
    }
    if (const auto* d = std::get_if<DW>(&cls)) {
        const std::vector<double> b = d->b;
        const double eps = 1e-6 * b[0];
        fs.project = [b, eps](std::span<const double> y) { return detail::project_moments_floor(y, b, eps); };
        fs.start = FourierCoeffs::from_nonnegative(std::span<const double>(b)).evaluate_real(n);
        return fs;
    }
    const auto& d = std::get<DVU>(cls);
    const auto v = detail::values_on(d.v, n);
    const auto u = detail::values_on(d.u, n);
    fs.lo.resize(n);
    fs.hi.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        fs.lo[k] = 1.0 / u[k];
        fs.hi[k] = 1.0 / v[k];
    }
    const double p = d.p;
    fs.project = [lo = fs.lo, hi = fs.hi, p](std::span<const double> y) {
        return detail::project_box_mean(y, lo, hi, p);
    };
    fs.start = fs.project(std::vector<double>(n, p));
    return fs;
}

}  // namespace

LeastFavourableResult numerical_lf(const ObservationPattern& p, const FunctionalWeights& w, const DensityClass& cls,
                                   const MinimaxOptions& opts) {
    const std::size_t n = opts.nodes;
    if (n < 8 || !grid::is_power_of_two(n) || opts.grid % n != 0) {
        fail(ErrorCode::InvalidParameters, "node count must be a power of two dividing the grid");
    }
    validate(cls, n);
    validate(cls, opts.grid);

    Objective obj;
    obj.t = p.missing_indices();
    obj.a = weight_vector(w, p);
    obj.span = detail::span_of(obj.t);
    if (2 * static_cast<std::size_t>(obj.span) + 2 > n) {
        fail(ErrorCode::LagOutOfRange, "pattern span " + std::to_string(obj.span) + " needs more than " +
                                           std::to_string(n) + " nodes");
    }
    if (std::holds_alternative<DW>(cls)) {
        for (Eigen::Index i = 0; i < obj.a.size(); ++i) {
            if (obj.a(i).imag() != 0.0) fail(ErrorCode::InvalidParameters, "DW needs real weights");
        }
    }

    LeastFavourableResult r;
    r.mechanism = Mechanism::Numerical;
    r.grid = opts.grid;
    r.indices = obj.t;
    r.a = obj.a;
    NumericalDiagnostics diag;
    diag.nodes = n;

    const auto fs = make_feasible(cls, n);
    std::vector<double> g = fs.project(fs.start);
    CVector c;
    double delta = obj.value(g, c);
    bool converged = false;

    const auto* dw = std::get_if<DW>(&cls);
    if (dw && dw_degenerate(p, dw->W())) {
        r.validity.degenerate = true;
        converged = true;
    } else {
        auto d = obj.gradient(c, n);
        double dmax = 0.0;
        for (double x : d) dmax = std::max(dmax, std::abs(x));
        const double gmean = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(n);
        double s = dmax > 0.0 ? 0.1 * gmean / dmax : 1.0;
        std::vector<double> y(n), step(n);
        CVector c2;
        int it = 0;
        for (; it < opts.max_iterations; ++it) {
            for (std::size_t k = 0; k < n; ++k) y[k] = g[k] + s * d[k];
            std::vector<double> z;
            try {
                z = fs.project(y);
            } catch (const Error&) {
                s *= 0.5;
                continue;
            }
            for (std::size_t k = 0; k < n; ++k) step[k] = (z[k] - g[k]) / s;
            const double rd = rms(d);
            diag.projected_gradient = rd > 0.0 ? rms(step) / rd : 0.0;
            if (diag.projected_gradient < opts.tolerance) {
                converged = true;
                break;
            }
            double dz;
            try {
                dz = obj.value(z, c2);
            } catch (const Error&) {
                dz = -1.0;
            }
            if (dz > delta) {
                g = std::move(z);
                delta = dz;
                c = c2;
                d = obj.gradient(c, n);
                s *= 2.0;
            } else {
                s *= 0.5;
                if (s * rms(d) < 1e-18 * gmean) break;
            }
        }
        diag.iterations = it;
    }

    r.b0 = FourierCoeffs(grid::interpolating_coeffs(g));
    const auto inv = r.b0.evaluate_real(opts.grid);
    r.validity.positivity_ok = detail::inverse_positive(inv, r.b0.value(0).real());
    r.validity.converged = converged;
    r.validity.bounds_ok = true;
    if (!fs.lo.empty()) {
        for (std::size_t k = 0; k < n; ++k) {
            const double f = 1.0 / g[k];
            const double v = 1.0 / fs.hi[k], u = 1.0 / fs.lo[k];
            if (f < v * (1.0 - 1e-9) || f > u * (1.0 + 1e-9)) r.validity.bounds_ok = false;
            if (f <= v * (1.0 + 1e-9)) r.lower_active.push_back(k);
            if (f >= u * (1.0 - 1e-9)) r.upper_active.push_back(k);
        }
        const auto& dvu = std::get<DVU>(cls);
        const auto vf = detail::values_on(dvu.v, opts.grid);
        const auto uf = detail::values_on(dvu.u, opts.grid);
        for (std::size_t k = 0; k < inv.size(); ++k) {
            if (!(inv[k] > 0.0)) {
                diag.max_bound_violation_fine = std::numeric_limits<double>::infinity();
                break;
            }
            const double f = 1.0 / inv[k];
            diag.max_bound_violation_fine =
                std::max({diag.max_bound_violation_fine, (vf[k] - f) / vf[k], (f - uf[k]) / uf[k]});
        }
    }
    detail::finish_by_solve(r, inv);
    r.numerical = diag;
    if (!converged) {
        throw LfConvergenceError(ErrorCode::NotConverged,
                                 "projected gradient " + std::to_string(diag.projected_gradient) + " after " +
                                     std::to_string(diag.iterations) + " iterations",
                                 r);
    }
    return r;
}

}  // namespace gapinterp
