#pragma once

#include <span>
#include <vector>

#include "gapinterp/error.hpp"
#include "gapinterp/patterns.hpp"
#include "gapinterp/spectral.hpp"

namespace gapinterp {

struct GramMatrix {
    CMatrix B;
    std::vector<int> t;
};

// B[u][v] = b(t_u - t_v). Throws LagOutOfRange when b is too short.
GramMatrix build_gram(std::span<const int> t, const FourierCoeffs& b);
GramMatrix build_gram(const ObservationPattern& p, const FourierCoeffs& b);

// Solves B x = a by Hermitian Cholesky, falling back to pivoted LDL^H. Throws NotPositiveDefinite.
CVector solve_hermitian(const CMatrix& B, const CVector& a);

struct SolveOptions {
    std::size_t grid = kDefaultGrid;
    int truncation = kDefaultTruncation;
};

struct InterpolationSolution {
    std::vector<int> indices;  // canonical K
    CVector a;
    CVector c;
    std::vector<cplx> h_grid;
    int h_half_length = 0;
    std::vector<cplx> h_coeffs;  // index j + h_half_length
    double delta = 0.0;
    double delta_imag = 0.0;  // Im <c, a>, roundoff only

    cplx h_coeff(int j) const noexcept;
    // max_{j in K} |h^(j)|
    double max_missing_coeff() const noexcept;
};

// Core solve for explicit K, a, b and 1/f sampled on the grid.
InterpolationSolution solve_system(std::span<const int> t, const CVector& a, const FourierCoeffs& b,
                                   std::span<const double> inv_f_grid);

InterpolationSolution solve(const ObservationPattern& p, const FunctionalWeights& w, const SpectralDensity& f,
                            const SolveOptions& opts = {});

struct TruncationReport {
    std::vector<int> truncations;
    std::vector<double> deltas;
    double relative_change = 0.0;
    bool converged = false;
};

struct TruncatedSolution {
    InterpolationSolution solution;
    TruncationReport report;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& message, TruncationReport report)
        : Error(ErrorCode::NotConverged, message), report_(std::move(report)) {}
    const TruncationReport& report() const noexcept { return report_; }

private:
    TruncationReport report_;
};

inline const std::vector<int> kDefaultSchedule{25, 50, 100, 200, 400};

// Solves an S1-S3 pattern at each truncation of the schedule. Throws ConvergenceError
// when the last two deltas differ by more than 1e-8 relative.
TruncatedSolution solve_truncated(const ObservationPattern& p, const FunctionalWeights& w, const SpectralDensity& f,
                                  const std::vector<int>& schedule = kDefaultSchedule, const SolveOptions& opts = {});

// (1/2pi) int |A - h|^2 f
double mse_of_characteristic(std::span<const cplx> h_grid, std::span<const int> t, const CVector& a,
                             std::span<const double> f_grid);
double mse_of_characteristic(std::span<const cplx> h_grid, const ObservationPattern& p, const FunctionalWeights& w,
                             const SpectralDensity& f, std::size_t grid_size = kDefaultGrid);

}  // namespace gapinterp
