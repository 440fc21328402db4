#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "gapinterp/minimax.hpp"

namespace gapinterp::detail {

inline std::vector<cplx> to_std(const CVector& v) { return {v.data(), v.data() + v.size()}; }

inline int span_of(std::span<const int> t) {
    if (t.empty()) return 0;
    const auto [lo, hi] = std::minmax_element(t.begin(), t.end());
    return *hi - *lo;
}

// a in canonical order; every a(j) real and > 0, else WeightsNotPositive.
CVector positive_weights(const ObservationPattern& p, const FunctionalWeights& w);

// Values of f on an n-point grid; tabulated densities are subsampled when their grid is a multiple of n.
std::vector<double> values_on(const SpectralDensity& f, std::size_t n);

// min(1/f) > kPositivityTolerance * b(0) on the grid.
bool inverse_positive(std::span<const double> inv, double b0);

// Fills f0, b0, h0 = A - C/f0 and delta0 = Re <c, a> from a known solution c of B0 c = a.
void finish_from_solution(LeastFavourableResult& r, const CVector& c, std::span<const double> inv_grid);

// Fills f0, b0, h0 and delta0 by solving the Gram system of b0.
void finish_by_solve(LeastFavourableResult& r, std::span<const double> inv_grid);

// Euclidean projections used by the ascent and by the class sampler.
// D0Minus: {g >= eps, mean(g) >= p}
std::vector<double> project_mean_floor(std::span<const double> y, double p, double eps);
// DVU: {lo <= g <= hi, mean(g) = p}
std::vector<double> project_box_mean(std::span<const double> y, std::span<const double> lo,
                                     std::span<const double> hi, double p);
// DW: {g even, (1/n) sum g_k cos(m lambda_k) = b(m) for m <= W, g >= eps}
std::vector<double> project_moments_floor(std::span<const double> y, std::span<const double> b, double eps);

}  // namespace gapinterp::detail
