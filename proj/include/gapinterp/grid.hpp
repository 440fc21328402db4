#pragma once

// Uniform frequency grid lambda_k = -pi + 2*pi*k/G, k = 0..G-1, and the FFT-based
// quadrature used everywhere in the library. All transforms carry the 1/(2*pi)
// integral normalization, which on the grid becomes a plain 1/G.

#include <cstddef>
#include <span>
#include <vector>

#include "gapinterp/types.hpp"

namespace gapinterp::grid {

double lambda(std::size_t k, std::size_t size);
std::vector<double> lambdas(std::size_t size);

// c(m) = (1/G) sum_k x_k exp(-i m lambda_k) for m = -L..L, returned at index m + L.
// Requires 2L + 1 <= G.
std::vector<cplx> fourier_coeffs(std::span<const cplx> values, int half_length);
std::vector<cplx> fourier_coeffs(std::span<const double> values, int half_length);

// All G coefficients of a real grid function as a Hermitian sequence on m = -G/2..G/2
// (index m + G/2), with the Nyquist term split evenly between +G/2 and -G/2 so that the
// trigonometric interpolant is real and reproduces the samples exactly. G must be even.
std::vector<cplx> interpolating_coeffs(std::span<const double> values);

// y_k = sum_{m=-L}^{L} c(m) exp(i m lambda_k). Any L is allowed; terms alias onto the grid.
std::vector<cplx> synthesize(std::span<const cplx> coeffs, int half_length, std::size_t size);

// Unnormalized in-place DFT. sign = -1 is forward (exp(-2 pi i jk/n)), +1 is backward.
void dft(std::span<cplx> data, int sign);

// Reusable plan; execute() may be called concurrently on distinct buffers of the planned size.
class FftPlan {
public:
    FftPlan(std::size_t size, int sign);
    ~FftPlan();
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;

    std::size_t size() const noexcept { return size_; }
    void execute(std::span<cplx> data) const;

private:
    std::size_t size_;
    void* plan_;
};

bool is_power_of_two(std::size_t n) noexcept;
std::size_t next_power_of_two(std::size_t n) noexcept;

}  // namespace gapinterp::grid
