#include <cmath>
#include <string>

#include "gapinterp/grid.hpp"
#include "minimax_common.hpp"

namespace gapinterp {

namespace {

std::size_t check_grid(const SpectralDensity& f, std::size_t G) { return f.native_grid() ? f.native_grid() : G; }

double mean_inverse(const std::vector<double>& f) {
    double s = 0.0;
    for (double x : f) s += 1.0 / x;
    return s / static_cast<double>(f.size());
}

}  // namespace

void validate(const DensityClass& cls, std::size_t grid_size) {
    if (const auto* d = std::get_if<D0Minus>(&cls)) {
        if (!(d->p > 0.0) || !std::isfinite(d->p)) fail(ErrorCode::InvalidParameters, "D0Minus needs p > 0");
        return;
    }
    if (const auto* d = std::get_if<DW>(&cls)) {
        if (d->b.empty()) fail(ErrorCode::InvalidParameters, "DW needs b(0..W)");
        for (double x : d->b) {
            if (!std::isfinite(x)) fail(ErrorCode::InvalidParameters, "DW moments must be finite");
        }
        if (!(d->b[0] > 0.0)) fail(ErrorCode::InvalidParameters, "DW needs b(0) > 0");
        if (2 * static_cast<std::size_t>(d->W()) + 1 > grid_size) {
            fail(ErrorCode::InvalidParameters, "W too large for the grid");
        }
        const auto g = FourierCoeffs::from_nonnegative(std::span<const double>(d->b)).evaluate_real(grid_size);
        if (!detail::inverse_positive(g, d->b[0])) {
            fail(ErrorCode::NonPositiveDensity, "sum b(|n|) exp(i n lambda) is not positive on the grid");
        }
        return;
    }
    const auto& d = std::get<DVU>(cls);
    if (!(d.p > 0.0) || !std::isfinite(d.p)) fail(ErrorCode::InvalidParameters, "DVU needs p > 0");
    check_positive(d.v, check_grid(d.v, grid_size));
    check_positive(d.u, check_grid(d.u, grid_size));
    const auto v = detail::values_on(d.v, grid_size);
    const auto u = detail::values_on(d.u, grid_size);
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (v[k] > u[k] * (1.0 + 1e-12)) fail(ErrorCode::InvalidParameters, "v exceeds u on the grid");
    }
    const double lo = mean_inverse(u);
    const double hi = mean_inverse(v);
    if (d.p < lo * (1.0 - 1e-10) || d.p > hi * (1.0 + 1e-10)) {
        fail(ErrorCode::InfeasibleClass, "p = " + std::to_string(d.p) + " outside [" + std::to_string(lo) + ", " +
                                             std::to_string(hi) + "]");
    }
}

int d0_anchor(const ObservationPattern& p) {
    switch (p.kind()) {
        case PatternKind::S1:
        case PatternKind::S4: return p.N();
        case PatternKind::S2:
        case PatternKind::S5: return 0;
        case PatternKind::S6:
            if (p.N2() < 1) fail(ErrorCode::InvalidParameters, "S6 closed form needs N2 >= 1");
            return p.N() + p.M2() + p.N2();
        case PatternKind::S3: break;
    }
    fail(ErrorCode::InvalidParameters, "S3 has no closed form; use numerical_lf");
}

std::vector<int> d0_gamma_mask(const ObservationPattern& p) {
    std::vector<int> m;
    auto range = [&](int lo, int hi) {
        for (int n = lo; n <= hi; ++n) m.push_back(n);
    };
    const int N = p.N();
    switch (p.kind()) {
        case PatternKind::S1:
        case PatternKind::S4: range(N + 1, N + p.M1()); break;
        case PatternKind::S2:
        case PatternKind::S5: range(N + 1, N + p.M2()); break;
        case PatternKind::S6: {
            const int top = N + p.M2() + p.N2();
            range(p.N2(), p.M2() + p.N2() - 1);
            range(top + 1, top + p.M1());
            break;
        }
        case PatternKind::S3: break;
    }
    return m;
}

LeastFavourableResult lf_d0minus(const ObservationPattern& p, const FunctionalWeights& w, const D0Minus& cls,
                                 const MinimaxOptions& opts) {
    validate(cls, opts.grid);
    const int anchor = d0_anchor(p);
    LeastFavourableResult r;
    r.mechanism = Mechanism::ClosedForm;
    r.grid = opts.grid;
    r.indices = p.missing_indices();
    r.a = detail::positive_weights(p, w);
    r.anchor = anchor;

    Eigen::Index ia = -1;
    int L = 0;
    for (std::size_t u = 0; u < r.indices.size(); ++u) {
        if (r.indices[u] == anchor) ia = static_cast<Eigen::Index>(u);
        L = std::max(L, std::abs(r.indices[u] - anchor));
    }
    if (2 * static_cast<std::size_t>(L) + 1 > opts.grid) fail(ErrorCode::InvalidParameters, "grid too small");
    const double a_anchor = r.a(ia).real();
    std::vector<cplx> vals(2 * static_cast<std::size_t>(L) + 1);
    for (std::size_t u = 0; u < r.indices.size(); ++u) {
        const int lag = r.indices[u] - anchor;
        const double v = lag == 0 ? cls.p : cls.p * r.a(static_cast<Eigen::Index>(u)).real() / a_anchor;
        vals[static_cast<std::size_t>(L + lag)] = v;
        vals[static_cast<std::size_t>(L - lag)] = v;
    }
    r.b0 = FourierCoeffs(std::move(vals));

    const auto inv = r.b0.evaluate_real(opts.grid);
    r.validity.closed_form_applicable = true;
    r.validity.positivity_ok = detail::inverse_positive(inv, cls.p);
    r.validity.bounds_ok = r.b0.value(0).real() == cls.p;

    const double alpha = a_anchor / cls.p;
    CVector c = CVector::Zero(r.a.size());
    c(ia) = alpha;
    r.lagrange = {alpha};
    detail::finish_from_solution(r, c, inv);

    if (r.validity.positivity_ok) {
        try {
            r.factorization = factorize_inverse(r.b0, d0_gamma_mask(p), opts.grid);
            r.validity.factorization_ok = true;
        } catch (const Error&) {
            r.validity.factorization_ok = false;
        }
    }
    return r;
}

LeastFavourableResult lf_dvu(const ObservationPattern& p, const FunctionalWeights& w, const DVU& cls,
                             const MinimaxOptions& opts) {
    validate(cls, opts.grid);
    auto r = lf_d0minus(p, w, D0Minus{cls.p}, opts);
    bool ok = r.validity.positivity_ok;
    if (ok) {
        const auto v = detail::values_on(cls.v, opts.grid);
        const auto u = detail::values_on(cls.u, opts.grid);
        const auto inv = r.b0.evaluate_real(opts.grid);
        for (std::size_t k = 0; k < inv.size() && ok; ++k) {
            const double f = 1.0 / inv[k];
            ok = f >= v[k] * (1.0 - 1e-9) && f <= u[k] * (1.0 + 1e-9);
        }
        if (ok) {
            for (std::size_t k = 0; k < inv.size(); ++k) {
                const double f = 1.0 / inv[k];
                if (f <= v[k] * (1.0 + 1e-9)) r.lower_active.push_back(k);
                if (f >= u[k] * (1.0 - 1e-9)) r.upper_active.push_back(k);
            }
        }
    }
    r.validity.bounds_ok = ok;
    if (ok) return r;
    auto num = numerical_lf(p, w, cls, opts);
    num.validity.closed_form_applicable = false;
    return num;
}

}  // namespace gapinterp
