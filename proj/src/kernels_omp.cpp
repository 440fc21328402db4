#include "kernels_common.hpp"

namespace gapinterp::kernels {

std::vector<cplx> trig_sum(std::span<const int> t, std::span<const cplx> coef, std::size_t grid_size) {
    if (t.size() != coef.size()) fail(ErrorCode::InvalidParameters, "trig_sum size mismatch");
    const auto tw = detail::twiddles(grid_size);
    std::vector<cplx> y(grid_size);
    const long n = static_cast<long>(grid_size);
#pragma omp parallel for schedule(static) if (grid_size * t.size() > 16384)
    for (long k = 0; k < n; ++k) y[k] = detail::trig_point(tw, t, coef, static_cast<std::size_t>(k));
    return y;
}

double weighted_energy(std::span<const cplx> x, std::span<const double> w) {
    if (x.size() != w.size() || x.empty()) fail(ErrorCode::GridMismatch, "weighted_energy size mismatch");
    const std::size_t n = x.size();
    double partial[detail::kBlocks] = {};
#pragma omp parallel for schedule(static) if (n > 8192)
    for (long b = 0; b < static_cast<long>(detail::kBlocks); ++b) {
        const std::size_t lo = n * static_cast<std::size_t>(b) / detail::kBlocks;
        const std::size_t hi = n * static_cast<std::size_t>(b + 1) / detail::kBlocks;
        double s = 0.0;
        for (std::size_t k = lo; k < hi; ++k) s += std::norm(x[k]) * w[k];
        partial[b] = s;
    }
    double s = 0.0;
    for (double p : partial) s += p;
    return s / static_cast<double>(n);
}

void replicate_sq_errors(const PathGenerator& gen, std::size_t length, const PathFunctional& target,
                         const PathFunctional& estimate, std::uint64_t seed, std::span<double> out) {
    detail::check_functional(target, length);
    detail::check_functional(estimate, length);
    const long n = static_cast<long>(out.size());
#pragma omp parallel
    {
        std::vector<double> path(length);
#pragma omp for schedule(dynamic, 256)
        for (long r = 0; r < n; ++r) {
            auto eng = replicate_engine(seed, static_cast<std::uint64_t>(r));
            gen(eng, path);
            const double e = detail::apply(target, path) - detail::apply(estimate, path);
            out[r] = e * e;
        }
    }
}

void generate_paths(const PathGenerator& gen, std::size_t length, std::size_t n_replicates, std::uint64_t seed,
                    std::span<double> paths) {
    if (paths.size() != length * n_replicates) fail(ErrorCode::InvalidParameters, "path buffer size mismatch");
    const long n = static_cast<long>(n_replicates);
#pragma omp parallel for schedule(dynamic, 64)
    for (long r = 0; r < n; ++r) {
        auto eng = replicate_engine(seed, static_cast<std::uint64_t>(r));
        gen(eng, paths.subspan(static_cast<std::size_t>(r) * length, length));
    }
}

}  // namespace gapinterp::kernels
