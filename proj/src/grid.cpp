#include "gapinterp/grid.hpp"

#include <mutex>

#include <fftw3.h>

#include "gapinterp/error.hpp"

namespace gapinterp::grid {

namespace {

// FFTW planning and plan destruction are not thread-safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

double parity(int m) { return (m % 2 == 0) ? 1.0 : -1.0; }

std::size_t wrap(long m, std::size_t n) {
    const long r = m % static_cast<long>(n);
    return static_cast<std::size_t>(r < 0 ? r + static_cast<long>(n) : r);
}

}  // namespace

double lambda(std::size_t k, std::size_t size) {
    return -kPi + 2.0 * kPi * static_cast<double>(k) / static_cast<double>(size);
}

std::vector<double> lambdas(std::size_t size) {
    std::vector<double> out(size);
    for (std::size_t k = 0; k < size; ++k) out[k] = lambda(k, size);
    return out;
}

FftPlan::FftPlan(std::size_t size, int sign) : size_(size), plan_(nullptr) {
    if (size == 0) return;
    std::vector<cplx> scratch(size);
    auto* ptr = reinterpret_cast<fftw_complex*>(scratch.data());
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_dft_1d(static_cast<int>(size), ptr, ptr, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
}

FftPlan::~FftPlan() {
    if (!plan_) return;
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
}

void FftPlan::execute(std::span<cplx> data) const {
    if (data.size() != size_) fail(ErrorCode::InvalidParameters, "FFT buffer size does not match plan");
    if (!plan_) return;
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(static_cast<fftw_plan>(plan_), ptr, ptr);
}

void dft(std::span<cplx> data, int sign) {
    if (data.empty()) return;
    FftPlan(data.size(), sign).execute(data);
}

std::vector<cplx> fourier_coeffs(std::span<const cplx> values, int half_length) {
    const std::size_t n = values.size();
    if (half_length < 0 || static_cast<std::size_t>(2 * half_length + 1) > n) {
        fail(ErrorCode::InvalidParameters, "fourier_coeffs: 2L+1 exceeds grid size");
    }
    std::vector<cplx> work(values.begin(), values.end());
    dft(work, -1);
    std::vector<cplx> out(2 * half_length + 1);
    const double scale = 1.0 / static_cast<double>(n);
    for (int m = -half_length; m <= half_length; ++m) {
        out[m + half_length] = parity(m) * scale * work[wrap(m, n)];
    }
    return out;
}

std::vector<cplx> fourier_coeffs(std::span<const double> values, int half_length) {
    std::vector<cplx> tmp(values.begin(), values.end());
    return fourier_coeffs(std::span<const cplx>(tmp), half_length);
}

std::vector<cplx> interpolating_coeffs(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2 || n % 2 != 0) fail(ErrorCode::InvalidParameters, "interpolating_coeffs: grid size must be even");
    const int half = static_cast<int>(n / 2);
    std::vector<cplx> work(values.begin(), values.end());
    dft(work, -1);
    const double scale = 1.0 / static_cast<double>(n);
    std::vector<cplx> out(n + 1);
    for (int m = -half + 1; m < half; ++m) out[m + half] = parity(m) * scale * work[wrap(m, n)];
    const cplx nyquist = parity(half) * scale * work[static_cast<std::size_t>(half)];
    out[0] = 0.5 * nyquist;
    out[n] = 0.5 * nyquist;
    return out;
}

std::vector<cplx> synthesize(std::span<const cplx> coeffs, int half_length, std::size_t size) {
    if (coeffs.size() != static_cast<std::size_t>(2 * half_length + 1)) {
        fail(ErrorCode::InvalidParameters, "synthesize: coefficient count does not match half-length");
    }
    std::vector<cplx> work(size, cplx{});
    for (int m = -half_length; m <= half_length; ++m) {
        work[wrap(m, size)] += parity(m) * coeffs[m + half_length];
    }
    dft(work, +1);
    return work;
}

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) noexcept {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace gapinterp::grid
