#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "gapinterp/types.hpp"

namespace gapinterp {

inline constexpr std::size_t kDefaultGrid = 4096;
inline constexpr int kDefaultTruncation = 256;
inline constexpr double kTailThreshold = 1e-10;
inline constexpr double kPositivityTolerance = 1e-9;

// Hermitian sequence b(m), m = -L..L. Lags beyond L are treated as unavailable.
class FourierCoeffs {
public:
    FourierCoeffs() : values_{cplx{}} {}

    // values[m + L] = b(m); length must be odd. Hermitian symmetry is enforced by averaging.
    explicit FourierCoeffs(std::vector<cplx> values);

    // b(0..L) given, b(-m) = conj(b(m)).
    static FourierCoeffs from_nonnegative(std::span<const cplx> nonneg);
    static FourierCoeffs from_nonnegative(std::span<const double> nonneg);

    int half_length() const noexcept { return static_cast<int>(values_.size() / 2); }

    // Throws LagOutOfRange when |m| > L.
    cplx at(int m) const;
    // Zero when |m| > L.
    cplx value(int m) const noexcept;

    std::span<const cplx> values() const noexcept { return values_; }

    // sum_m b(m) exp(i m lambda_k) on the grid (complex, imaginary part is roundoff).
    std::vector<cplx> evaluate(std::size_t grid_size) const;
    std::vector<double> evaluate_real(std::size_t grid_size) const;

    // Smallest L' <= L with |b(m)| <= tol for all |m| > L'.
    int effective_half_length(double tol = 0.0) const noexcept;

    FourierCoeffs padded(int half_length) const;

private:
    std::vector<cplx> values_;
};

// f(lambda) = sigma2 / |1 - sum_k alpha_k exp(-i k lambda)|^2
struct RationalAR {
    std::vector<cplx> alpha;
    double sigma2 = 1.0;
};

// 1/f(lambda) = sum_m b(m) exp(i m lambda)
struct InversePolynomial {
    FourierCoeffs b;
};

// f on the uniform grid of its own size
struct Tabulated {
    std::vector<double> values;
};

class SpectralDensity {
public:
    using Variant = std::variant<RationalAR, InversePolynomial, Tabulated>;

    SpectralDensity(RationalAR ar);
    SpectralDensity(InversePolynomial ip);
    SpectralDensity(Tabulated tab);

    static SpectralDensity white_noise(double level = 1.0);
    static SpectralDensity ar1(cplx alpha, double sigma2 = 1.0);

    const Variant& variant() const noexcept { return v_; }
    bool is_tabulated() const noexcept { return std::holds_alternative<Tabulated>(v_); }
    bool is_real() const noexcept;  // f even in lambda, i.e. real covariances

    // Grid size this density must be evaluated on, or 0 when any grid works.
    std::size_t native_grid() const noexcept;

    std::vector<double> values(std::size_t grid_size) const;
    std::vector<double> inverse_values(std::size_t grid_size) const;

private:
    Variant v_;
};

// Throws NonPositiveDensity unless f and 1/f are positive on the grid (relative tolerance).
void check_positive(const SpectralDensity& f, std::size_t grid_size = kDefaultGrid);

// Fourier coefficients of 1/f on [-L, L]. Exact for RationalAR and InversePolynomial.
FourierCoeffs inverse_fourier_coeffs(const SpectralDensity& f, int half_length = kDefaultTruncation,
                                     std::size_t grid_size = kDefaultGrid);

// (1/2pi) int 1/f
double minimality_value(const SpectralDensity& f, std::size_t grid_size = kDefaultGrid);

// r(n) = (1/2pi) int exp(i n lambda) f(lambda) d lambda
cplx covariance(const SpectralDensity& f, int lag, std::size_t grid_size = kDefaultGrid);
// r(0..max_lag)
std::vector<cplx> covariances(const SpectralDensity& f, int max_lag, std::size_t grid_size = kDefaultGrid);

struct Factorization {
    std::vector<cplx> gamma;  // gamma_0 real positive
    std::vector<int> mask;
    double reconstruction_error = 0.0;  // max relative error on the grid
};

// 1/f = |sum_n gamma_n exp(-i n lambda)|^2 with gamma minimum phase.
// Throws NotPositive or MaskViolation.
Factorization factorize_inverse(const FourierCoeffs& b, std::span<const int> mask = {},
                                std::size_t grid_size = kDefaultGrid);

}  // namespace gapinterp
