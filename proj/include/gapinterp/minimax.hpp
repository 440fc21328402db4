#pragma once

// Least-favourable densities and minimax characteristics for three uncertainty classes:
//   D0Minus: (1/2pi) int 1/f >= p
//   DW:      (1/2pi) int cos(n lambda)/f = b(n), n = 0..W  (even densities)
//   DVU:     v <= f <= u and (1/2pi) int 1/f = p

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gapinterp/error.hpp"
#include "gapinterp/patterns.hpp"
#include "gapinterp/spectral.hpp"

namespace gapinterp {

struct D0Minus {
    double p = 1.0;
};

struct DW {
    std::vector<double> b;  // b(0..W)
    int W() const noexcept { return static_cast<int>(b.size()) - 1; }
};

struct DVU {
    SpectralDensity v;
    SpectralDensity u;
    double p = 1.0;
};

using DensityClass = std::variant<D0Minus, DW, DVU>;

// Throws InvalidParameters, NonPositiveDensity or InfeasibleClass.
void validate(const DensityClass& cls, std::size_t grid_size = kDefaultGrid);

enum class Mechanism { ClosedForm, DegenerateAR, Newton, Numerical };
std::string to_string(Mechanism m);

struct Validity {
    bool closed_form_applicable = false;
    bool positivity_ok = false;
    bool bounds_ok = false;
    bool factorization_ok = false;  // gamma zero-mask of the factorization holds
    bool degenerate = false;
    bool converged = true;
};

struct NumericalDiagnostics {
    int iterations = 0;
    double projected_gradient = 0.0;  // relative RMS at exit
    std::size_t nodes = 0;
    double max_bound_violation_fine = 0.0;  // DVU: relative overshoot of the interpolant on the fine grid
};

struct NewtonDiagnostics {
    int iterations = 0;
    double residual = 0.0;
    int W_k = 0;
    std::vector<int> unknown_lags;
};

struct LeastFavourableResult {
    Mechanism mechanism = Mechanism::ClosedForm;
    std::vector<int> indices;  // canonical K
    CVector a;
    SpectralDensity f0 = SpectralDensity::white_noise();
    FourierCoeffs b0;
    std::size_t grid = kDefaultGrid;
    std::vector<cplx> h0_grid;
    double delta0 = 0.0;
    Validity validity;
    std::vector<cplx> lagrange;  // alpha_k for D0Minus/DVU closed form, p(0..W_k) for DW
    int anchor = 0;

    // DVU: grid indices where f0 sits on v (lower) or u (upper)
    std::vector<std::size_t> lower_active;
    std::vector<std::size_t> upper_active;

    std::optional<NumericalDiagnostics> numerical;
    std::optional<NewtonDiagnostics> newton;
    std::optional<Factorization> factorization;
};

struct MinimaxOptions {
    std::size_t grid = kDefaultGrid;
    std::size_t nodes = 512;  // numerical_lf parameter grid
    int max_iterations = 10000;
    double tolerance = 1e-7;
    std::uint64_t seed = 1;
};

class LfConvergenceError : public Error {
public:
    LfConvergenceError(ErrorCode code, const std::string& message, LeastFavourableResult partial)
        : Error(code, message), partial_(std::move(partial)) {}
    const LeastFavourableResult& partial() const noexcept { return partial_; }

private:
    LeastFavourableResult partial_;
};

// Index whose Lagrange vector carries the single nonzero entry: N for S1/S4, 0 for S2/S5,
// N+M2+N2 for S6. Throws InvalidParameters for S3.
int d0_anchor(const ObservationPattern& p);

// Zero-mask of gamma required by the factorization of 1/f0 for the D0Minus closed form.
std::vector<int> d0_gamma_mask(const ObservationPattern& p);

// Anchored closed form. Throws WeightsNotPositive; positivity failures are reported in validity.
LeastFavourableResult lf_d0minus(const ObservationPattern& p, const FunctionalWeights& w, const D0Minus& cls,
                                 const MinimaxOptions& opts = {});

// Cutoff W_k of the Lagrange vector. Throws NotCovered when the class analysis does not apply.
int dw_cutoff(const ObservationPattern& p, int W);
bool dw_degenerate(const ObservationPattern& p, int W);

// Degenerate AR(W) density or damped Gauss-Newton solve of B0(b) p = a.
// Throws NotCovered, WeightsNotPositive, NewtonNotConverged.
LeastFavourableResult lf_dW(const ObservationPattern& p, const FunctionalWeights& w, const DW& cls,
                            const MinimaxOptions& opts = {});

// D0Minus candidate with the class p; falls back to numerical_lf when it leaves [v, u].
LeastFavourableResult lf_dvu(const ObservationPattern& p, const FunctionalWeights& w, const DVU& cls,
                             const MinimaxOptions& opts = {});

// Projected gradient ascent of Delta over the node values of 1/f. Throws LfConvergenceError.
LeastFavourableResult numerical_lf(const ObservationPattern& p, const FunctionalWeights& w, const DensityClass& cls,
                                   const MinimaxOptions& opts = {});

// Random members of the class on the given grid, as values of 1/f.
std::vector<std::vector<double>> sample_class(const DensityClass& cls, std::size_t count, std::size_t grid_size,
                                              std::uint64_t seed);

struct SaddleReport {
    std::size_t samples = 0;
    std::size_t upper_pass = 0;  // Delta(h0; f) <= delta0
    std::size_t lower_pass = 0;  // Delta(h0 + e dh; f0) >= delta0
    double max_upper_excess = 0.0;
    double min_lower_margin = 0.0;

    bool passed() const noexcept { return upper_pass == samples && lower_pass == samples; }
};

inline constexpr double kSaddleUpperTolerance = 1e-8;
inline constexpr double kSaddleLowerTolerance = 1e-10;

SaddleReport saddle_check(const LeastFavourableResult& result, const ObservationPattern& p, const DensityClass& cls,
                          std::size_t n_samples, std::uint64_t seed = 7);

// Same check against an arbitrary characteristic on the result's grid.
SaddleReport saddle_check(const LeastFavourableResult& result, std::span<const cplx> h_grid,
                          const ObservationPattern& p, const DensityClass& cls, std::size_t n_samples,
                          std::uint64_t seed = 7);

}  // namespace gapinterp
