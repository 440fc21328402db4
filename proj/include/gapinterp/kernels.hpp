#pragma once

// Data-parallel grid and Monte Carlo kernels. The default namespace holds the OpenMP
// versions; kernels::serial holds single-threaded references with identical results
// up to floating-point summation order.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "gapinterp/types.hpp"

namespace gapinterp::kernels {

// y_k = sum_u coef_u exp(i t_u lambda_k), lambda_k = -pi + 2 pi k / G
std::vector<cplx> trig_sum(std::span<const int> t, std::span<const cplx> coef, std::size_t grid_size);

// (1/G) sum_k |x_k|^2 w_k
double weighted_energy(std::span<const cplx> x, std::span<const double> w);

// Linear functional sum_u w_u x[pos_u] of a real path.
struct PathFunctional {
    std::vector<std::size_t> positions;
    std::vector<double> weights;
};

// Fills one replicate path; called with a generator seeded from (seed, replicate).
using PathGenerator = std::function<void(std::mt19937_64&, std::span<double>)>;

std::mt19937_64 replicate_engine(std::uint64_t seed, std::uint64_t replicate);

// out[r] = (target(x_r) - estimate(x_r))^2 for replicate paths x_r of the given length.
void replicate_sq_errors(const PathGenerator& gen, std::size_t length, const PathFunctional& target,
                         const PathFunctional& estimate, std::uint64_t seed, std::span<double> out);

// Row-major paths[r * length + t].
void generate_paths(const PathGenerator& gen, std::size_t length, std::size_t n_replicates, std::uint64_t seed,
                    std::span<double> paths);

namespace serial {

std::vector<cplx> trig_sum(std::span<const int> t, std::span<const cplx> coef, std::size_t grid_size);
double weighted_energy(std::span<const cplx> x, std::span<const double> w);
void replicate_sq_errors(const PathGenerator& gen, std::size_t length, const PathFunctional& target,
                         const PathFunctional& estimate, std::uint64_t seed, std::span<double> out);
void generate_paths(const PathGenerator& gen, std::size_t length, std::size_t n_replicates, std::uint64_t seed,
                    std::span<double> paths);

}  // namespace serial

}  // namespace gapinterp::kernels
