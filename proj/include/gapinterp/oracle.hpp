#pragma once

// Brute-force checks that avoid the spectral solver: normal equations on a finite
// observation window and Monte Carlo simulation of Gaussian paths.

#include <cstdint>
#include <map>
#include <vector>

#include "gapinterp/interpolator.hpp"
#include "gapinterp/kernels.hpp"
#include "gapinterp/patterns.hpp"
#include "gapinterp/spectral.hpp"

namespace gapinterp::oracle {

// r(0..max_lag) of an AR model from its impulse response, r(n) = sigma2 sum_j psi_{j+n} conj(psi_j).
std::vector<cplx> ar_covariances(const RationalAR& ar, int max_lag);

// AR models use ar_covariances; other densities fall back to grid quadrature.
std::vector<cplx> time_domain_covariances(const SpectralDensity& f, int max_lag, std::size_t grid_size = kDefaultGrid);

struct TimeDomainProblem {
    std::vector<int> observed;  // O
    std::vector<int> targets;   // K
    CVector a;
    std::vector<cplx> r;  // r(0..max lag)

    cplx cov(int n) const;  // r(n), r(-n) = conj r(n)
};

// O = observed indices of the untruncated pattern within [min K - window, max K + window].
TimeDomainProblem make_problem(const ObservationPattern& p, const FunctionalWeights& w, const SpectralDensity& f,
                               int window, std::size_t grid_size = kDefaultGrid);

struct Projection {
    std::vector<int> observed;
    CVector weights;  // estimate = sum_o weights_o xi(o)
    double mse = 0.0;
    double prior_energy = 0.0;  // a^H R_KK a
};

// Solves R_OO w = R_OK a. Throws SingularCovariance.
Projection project(const TimeDomainProblem& tp);

struct SamplePaths {
    std::size_t length = 0;
    std::size_t replicates = 0;
    std::vector<double> data;  // data[r * length + t]

    double at(std::size_t r, std::size_t t) const { return data[r * length + t]; }
};

// Per-replicate generator for real paths with density f: AR recursion for real AR models,
// circulant embedding otherwise. Throws InvalidParameters for non-real f, EmbeddingNotPSD.
kernels::PathGenerator path_generator(const SpectralDensity& f, std::size_t length);

SamplePaths simulate(const SpectralDensity& f, std::size_t length, std::size_t n_replicates, std::uint64_t seed);

// Path position t corresponds to time index origin + t.
struct LinearEstimate {
    std::map<int, double> weights;
};

struct MseEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t replicates = 0;
};

// Sample mean and standard error of |A xi - estimate xi|^2. Throws IndexOutOfPath.
MseEstimate empirical_mse(const SamplePaths& paths, int origin, const LinearEstimate& estimate,
                          const LinearEstimate& target);

// Same statistic without storing paths.
MseEstimate monte_carlo_mse(const SpectralDensity& f, int origin, std::size_t length, const LinearEstimate& estimate,
                            const LinearEstimate& target, std::size_t n_replicates, std::uint64_t seed);

// Real parts of the characteristic's coefficients on observed indices inside [lo, hi].
LinearEstimate estimate_from_characteristic(const InterpolationSolution& s, const ObservationPattern& p, int lo,
                                            int hi);
LinearEstimate estimate_from_projection(const Projection& proj);
LinearEstimate target_functional(const ObservationPattern& p, const FunctionalWeights& w);

}  // namespace gapinterp::oracle
