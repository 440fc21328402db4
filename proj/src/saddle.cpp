#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "gapinterp/grid.hpp"
#include "gapinterp/interpolator.hpp"
#include "gapinterp/kernels.hpp"
#include "minimax_common.hpp"

namespace gapinterp {

namespace {

// sum_m r_m cos(m lambda + phi_m), m = lo..hi, with sum |r_m| = 1
std::vector<double> random_cosines(std::mt19937_64& rng, int lo, int hi, bool even, std::size_t G) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<double> r(static_cast<std::size_t>(hi - lo + 1)), phi(r.size());
    double total = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] = U(rng) - 0.5;
        phi[i] = even ? 0.0 : 2.0 * kPi * U(rng);
        total += std::abs(r[i]);
    }
    std::vector<double> out(G, 0.0);
    for (std::size_t k = 0; k < G; ++k) {
        const double l = grid::lambda(k, G);
        for (std::size_t i = 0; i < r.size(); ++i) out[k] += r[i] / total * std::cos((lo + static_cast<int>(i)) * l + phi[i]);
    }
    return out;
}

}  // namespace

std::vector<std::vector<double>> sample_class(const DensityClass& cls, std::size_t count, std::size_t grid_size,
                                              std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::uniform_int_distribution<int> degree(1, 6);
    std::vector<std::vector<double>> out;
    out.reserve(count);
    if (const auto* d = std::get_if<D0Minus>(&cls)) {
        for (std::size_t s = 0; s < count; ++s) {
            const auto wave = random_cosines(rng, 1, degree(rng), false, grid_size);
            const double amp = 0.9 * U(rng);
            const double level = d->p * (1.0 + 0.5 * U(rng));
            std::vector<double> g(grid_size);
            for (std::size_t k = 0; k < grid_size; ++k) g[k] = level * (1.0 + amp * wave[k]);
            out.push_back(std::move(g));
        }
        return out;
    }
    if (const auto* d = std::get_if<DW>(&cls)) {
        const auto base = FourierCoeffs::from_nonnegative(std::span<const double>(d->b)).evaluate_real(grid_size);
        const double floor = *std::min_element(base.begin(), base.end());
        for (std::size_t s = 0; s < count; ++s) {
            const int W = d->W();
            const auto wave = random_cosines(rng, W + 1, W + degree(rng), true, grid_size);
            const double amp = 0.7 * floor * (0.2 + 0.8 * U(rng));
            std::vector<double> g(grid_size);
            for (std::size_t k = 0; k < grid_size; ++k) g[k] = base[k] + amp * wave[k];
            out.push_back(std::move(g));
        }
        return out;
    }
    const auto& d = std::get<DVU>(cls);
    const auto v = detail::values_on(d.v, grid_size);
    const auto u = detail::values_on(d.u, grid_size);
    std::vector<double> lo(grid_size), hi(grid_size);
    for (std::size_t k = 0; k < grid_size; ++k) {
        lo[k] = 1.0 / u[k];
        hi[k] = 1.0 / v[k];
    }
    for (std::size_t s = 0; s < count; ++s) {
        const auto wave = random_cosines(rng, 1, degree(rng), false, grid_size);
        std::vector<double> y(grid_size);
        for (std::size_t k = 0; k < grid_size; ++k) y[k] = lo[k] + (0.5 + 0.5 * wave[k]) * (hi[k] - lo[k]);
        out.push_back(detail::project_box_mean(y, lo, hi, d.p));
    }
    return out;
}

SaddleReport saddle_check(const LeastFavourableResult& result, std::span<const cplx> h_grid,
                          const ObservationPattern& p, const DensityClass& cls, std::size_t n_samples,
                          std::uint64_t seed) {
    SaddleReport rep;
    rep.samples = n_samples;
    rep.max_upper_excess = -std::numeric_limits<double>::infinity();
    rep.min_lower_margin = std::numeric_limits<double>::infinity();
    const std::size_t G = result.grid;
    const auto& t = result.indices;
    const double d0 = result.delta0;
    const double upper_tol = kSaddleUpperTolerance * std::max(1.0, std::abs(d0));
    const double lower_tol = kSaddleLowerTolerance * std::max(1.0, std::abs(d0));
    const bool usable = std::holds_alternative<DVU>(cls) ? result.validity.bounds_ok && result.validity.positivity_ok
                                                         : result.validity.positivity_ok;
    if (!usable || h_grid.size() != G) {
        rep.max_upper_excess = std::numeric_limits<double>::infinity();
        rep.min_lower_margin = -std::numeric_limits<double>::infinity();
        return rep;
    }

    // Delta(h; f) <= delta0 over class members
    const auto members = sample_class(cls, n_samples, G, seed);
    std::vector<double> f(G);
    for (const auto& g : members) {
        for (std::size_t k = 0; k < G; ++k) f[k] = 1.0 / g[k];
        const double excess = mse_of_characteristic(h_grid, t, result.a, f) - d0;
        rep.max_upper_excess = std::max(rep.max_upper_excess, excess);
        if (excess <= upper_tol) ++rep.upper_pass;
    }

    // Delta(h + e dh; f0) >= delta0 for dh supported on the observed set
    const auto inv0 = result.b0.evaluate_real(G);
    for (std::size_t k = 0; k < G; ++k) f[k] = 1.0 / inv0[k];
    const auto [lo_it, hi_it] = std::minmax_element(t.begin(), t.end());
    std::vector<int> observed;
    for (int j = *lo_it - 8; j <= *hi_it + 8; ++j) {
        if (!p.is_missing(j)) observed.push_back(j);
    }
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> nd;
    const double scale = 1e-2 * std::max(1e-300, result.a.norm());
    std::vector<cplx> coef(observed.size());
    std::vector<cplx> h(G);
    for (std::size_t s = 0; s < n_samples; ++s) {
        for (auto& x : coef) x = scale * cplx(nd(rng), nd(rng));
        const auto dh = kernels::trig_sum(observed, coef, G);
        for (std::size_t k = 0; k < G; ++k) h[k] = h_grid[k] + dh[k];
        const double margin = mse_of_characteristic(h, t, result.a, f) - d0;
        rep.min_lower_margin = std::min(rep.min_lower_margin, margin);
        if (margin >= -lower_tol) ++rep.lower_pass;
    }
    return rep;
}

SaddleReport saddle_check(const LeastFavourableResult& result, const ObservationPattern& p, const DensityClass& cls,
                          std::size_t n_samples, std::uint64_t seed) {
    return saddle_check(result, result.h0_grid, p, cls, n_samples, seed);
}

}  // namespace gapinterp
