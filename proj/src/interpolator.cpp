#include "gapinterp/interpolator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gapinterp/grid.hpp"
#include "gapinterp/kernels.hpp"

namespace gapinterp {

namespace {

int span_of(std::span<const int> t) {
    if (t.empty()) return 0;
    const auto [lo, hi] = std::minmax_element(t.begin(), t.end());
    return *hi - *lo;
}

std::vector<cplx> to_std(const CVector& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

GramMatrix build_gram(std::span<const int> t, const FourierCoeffs& b) {
    const int span = span_of(t);
    if (span > b.half_length()) {
        fail(ErrorCode::LagOutOfRange, "Gram matrix needs lag " + std::to_string(span) + " but b has L=" +
                                           std::to_string(b.half_length()));
    }
    const auto n = static_cast<Eigen::Index>(t.size());
    GramMatrix g{CMatrix(n, n), {t.begin(), t.end()}};
    for (Eigen::Index u = 0; u < n; ++u) {
        g.B(u, u) = b.value(0).real();
        for (Eigen::Index v = 0; v < u; ++v) {
            const cplx x = b.value(t[u] - t[v]);
            g.B(u, v) = x;
            g.B(v, u) = std::conj(x);
        }
    }
    return g;
}

GramMatrix build_gram(const ObservationPattern& p, const FourierCoeffs& b) {
    const auto t = p.missing_indices();
    return build_gram(std::span<const int>(t), b);
}

CVector solve_hermitian(const CMatrix& B, const CVector& a) {
    if (B.rows() != a.size()) fail(ErrorCode::InvalidParameters, "system size mismatch");
    if (a.size() == 0) return a;
    Eigen::LLT<CMatrix> llt(B);
    if (llt.info() == Eigen::Success) return llt.solve(a);
    Eigen::LDLT<CMatrix> ldlt(B);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || (ldlt.vectorD().real().array() <= 0.0).any()) {
        fail(ErrorCode::NotPositiveDefinite, "Gram matrix is not positive definite");
    }
    return ldlt.solve(a);
}

cplx InterpolationSolution::h_coeff(int j) const noexcept {
    if (j < -h_half_length || j > h_half_length) return {};
    return h_coeffs[static_cast<std::size_t>(j + h_half_length)];
}

double InterpolationSolution::max_missing_coeff() const noexcept {
    double m = 0.0;
    for (int j : indices) m = std::max(m, std::abs(h_coeff(j)));
    return m;
}

InterpolationSolution solve_system(std::span<const int> t, const CVector& a, const FourierCoeffs& b,
                                   std::span<const double> inv_f_grid) {
    if (static_cast<std::size_t>(a.size()) != t.size()) fail(ErrorCode::InvalidParameters, "weights/index mismatch");
    const std::size_t G = inv_f_grid.size();
    InterpolationSolution s;
    s.indices.assign(t.begin(), t.end());
    s.a = a;
    const auto gram = build_gram(t, b);
    s.c = solve_hermitian(gram.B, a);
    const cplx inner = a.dot(s.c);  // sum c_i conj(a_i)
    s.delta = inner.real();
    s.delta_imag = inner.imag();

    const auto c_std = to_std(s.c);
    const auto a_std = to_std(a);
    const auto A = kernels::trig_sum(t, a_std, G);
    const auto C = kernels::trig_sum(t, c_std, G);
    s.h_grid.resize(G);
    for (std::size_t k = 0; k < G; ++k) s.h_grid[k] = A[k] - C[k] * inv_f_grid[k];

    int max_abs = 0;
    for (int j : t) max_abs = std::max(max_abs, std::abs(j));
    s.h_half_length = std::min(2 * max_abs + 64, static_cast<int>((G - 1) / 2));
    s.h_coeffs = grid::fourier_coeffs(std::span<const cplx>(s.h_grid), s.h_half_length);
    return s;
}

InterpolationSolution solve(const ObservationPattern& p, const FunctionalWeights& w, const SpectralDensity& f,
                            const SolveOptions& opts) {
    const auto t = p.missing_indices();
    const CVector a = weight_vector(w, p);
    const std::size_t G = f.native_grid() ? f.native_grid() : opts.grid;
    const int L = std::max(opts.truncation, span_of(t));
    const auto b = inverse_fourier_coeffs(f, L, G);
    const auto inv = f.inverse_values(G);
    return solve_system(t, a, b, inv);
}

TruncatedSolution solve_truncated(const ObservationPattern& p, const FunctionalWeights& w, const SpectralDensity& f,
                                  const std::vector<int>& schedule, const SolveOptions& opts) {
    if (!p.infinite()) fail(ErrorCode::InvalidParameters, "solve_truncated needs an S1-S3 pattern");
    if (schedule.size() < 2 || !std::is_sorted(schedule.begin(), schedule.end()) ||
        std::adjacent_find(schedule.begin(), schedule.end()) != schedule.end() || schedule.front() < 1) {
        fail(ErrorCode::InvalidParameters, "truncation schedule must be at least two increasing values >= 1");
    }
    TruncatedSolution out;
    for (int T : schedule) {
        out.solution = solve(p.with_truncation(T), w, f, opts);
        out.report.truncations.push_back(T);
        out.report.deltas.push_back(out.solution.delta);
    }
    const auto& d = out.report.deltas;
    const double last = d.back();
    const double diff = std::abs(last - d[d.size() - 2]);
    out.report.relative_change = last != 0.0 ? diff / std::abs(last) : diff;
    out.report.converged = diff <= 1e-8 * std::abs(last);
    if (!out.report.converged) {
        throw ConvergenceError("delta changed by relative " + std::to_string(out.report.relative_change) +
                                   " at the largest truncation",
                               out.report);
    }
    return out;
}

double mse_of_characteristic(std::span<const cplx> h_grid, std::span<const int> t, const CVector& a,
                             std::span<const double> f_grid) {
    if (h_grid.size() != f_grid.size()) fail(ErrorCode::GridMismatch, "h and f live on different grids");
    const auto A = kernels::trig_sum(t, to_std(a), h_grid.size());
    std::vector<cplx> diff(h_grid.size());
    for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = A[k] - h_grid[k];
    return kernels::weighted_energy(diff, f_grid);
}

double mse_of_characteristic(std::span<const cplx> h_grid, const ObservationPattern& p, const FunctionalWeights& w,
                             const SpectralDensity& f, std::size_t grid_size) {
    if (h_grid.size() != grid_size) fail(ErrorCode::GridMismatch, "h grid size differs from the requested grid");
    const auto t = p.missing_indices();
    const auto fv = f.values(grid_size);
    return mse_of_characteristic(h_grid, t, weight_vector(w, p), fv);
}

}  // namespace gapinterp
