#include "kernels_common.hpp"

namespace gapinterp::kernels {

std::mt19937_64 replicate_engine(std::uint64_t seed, std::uint64_t replicate) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(replicate), static_cast<std::uint32_t>(replicate >> 32)};
    return std::mt19937_64(seq);
}

namespace serial {

std::vector<cplx> trig_sum(std::span<const int> t, std::span<const cplx> coef, std::size_t grid_size) {
    if (t.size() != coef.size()) fail(ErrorCode::InvalidParameters, "trig_sum size mismatch");
    const auto tw = detail::twiddles(grid_size);
    std::vector<cplx> y(grid_size);
    for (std::size_t k = 0; k < grid_size; ++k) y[k] = detail::trig_point(tw, t, coef, k);
    return y;
}

double weighted_energy(std::span<const cplx> x, std::span<const double> w) {
    if (x.size() != w.size() || x.empty()) fail(ErrorCode::GridMismatch, "weighted_energy size mismatch");
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += std::norm(x[k]) * w[k];
    return s / static_cast<double>(x.size());
}

void replicate_sq_errors(const PathGenerator& gen, std::size_t length, const PathFunctional& target,
                         const PathFunctional& estimate, std::uint64_t seed, std::span<double> out) {
    detail::check_functional(target, length);
    detail::check_functional(estimate, length);
    std::vector<double> path(length);
    for (std::size_t r = 0; r < out.size(); ++r) {
        auto eng = replicate_engine(seed, r);
        gen(eng, path);
        const double e = detail::apply(target, path) - detail::apply(estimate, path);
        out[r] = e * e;
    }
}

void generate_paths(const PathGenerator& gen, std::size_t length, std::size_t n_replicates, std::uint64_t seed,
                    std::span<double> paths) {
    if (paths.size() != length * n_replicates) fail(ErrorCode::InvalidParameters, "path buffer size mismatch");
    for (std::size_t r = 0; r < n_replicates; ++r) {
        auto eng = replicate_engine(seed, r);
        gen(eng, paths.subspan(r * length, length));
    }
}

}  // namespace serial

}  // namespace gapinterp::kernels
