#pragma once

#include <cmath>
#include <vector>

#include "gapinterp/error.hpp"
#include "gapinterp/kernels.hpp"

namespace gapinterp::kernels::detail {

// exp(2 pi i j / G) for j = 0..G-1
inline std::vector<cplx> twiddles(std::size_t grid_size) {
    std::vector<cplx> tw(grid_size);
    for (std::size_t j = 0; j < grid_size; ++j) {
        tw[j] = std::polar(1.0, 2.0 * kPi * static_cast<double>(j) / static_cast<double>(grid_size));
    }
    return tw;
}

// exp(i t lambda_k) = (-1)^t exp(2 pi i (t k mod G) / G)
inline cplx phase(const std::vector<cplx>& tw, long t, std::size_t k) {
    const long g = static_cast<long>(tw.size());
    long r = (t % g) * static_cast<long>(k) % g;
    if (r < 0) r += g;
    const cplx z = tw[static_cast<std::size_t>(r)];
    return (t % 2 == 0) ? z : -z;
}

inline cplx trig_point(const std::vector<cplx>& tw, std::span<const int> t, std::span<const cplx> coef,
                       std::size_t k) {
    cplx s{};
    for (std::size_t u = 0; u < t.size(); ++u) s += coef[u] * phase(tw, t[u], k);
    return s;
}

inline double apply(const PathFunctional& fn, std::span<const double> x) {
    double s = 0.0;
    for (std::size_t u = 0; u < fn.positions.size(); ++u) s += fn.weights[u] * x[fn.positions[u]];
    return s;
}

inline void check_functional(const PathFunctional& fn, std::size_t length) {
    if (fn.positions.size() != fn.weights.size()) fail(ErrorCode::InvalidParameters, "functional size mismatch");
    for (auto p : fn.positions) {
        if (p >= length) fail(ErrorCode::IndexOutOfPath, "functional index outside the simulated path");
    }
}

// Fixed block count so that block partial sums do not depend on the thread count.
inline constexpr std::size_t kBlocks = 64;

}  // namespace gapinterp::kernels::detail
