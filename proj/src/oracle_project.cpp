#include <algorithm>
#include <cmath>
#include <string>

#include "gapinterp/error.hpp"
#include "gapinterp/oracle.hpp"

namespace gapinterp::oracle {

namespace {

std::vector<cplx> impulse_response(const RationalAR& ar) {
    const std::size_t p = ar.alpha.size();
    std::vector<cplx> psi{1.0};
    if (p == 0) return psi;
    constexpr std::size_t kCap = 1'000'000;
    std::size_t quiet = 0;
    while (psi.size() < kCap) {
        const std::size_t n = psi.size();
        cplx x{};
        for (std::size_t k = 1; k <= p && k <= n; ++k) x += ar.alpha[k - 1] * psi[n - k];
        psi.push_back(x);
        quiet = std::abs(x) < 1e-18 ? quiet + 1 : 0;
        if (quiet >= p && n > p) break;
        if (!std::isfinite(std::abs(x)) || std::abs(x) > 1e12) {
            fail(ErrorCode::NonPositiveDensity, "AR model is not causal-stationary");
        }
    }
    return psi;
}

}  // namespace

std::vector<cplx> ar_covariances(const RationalAR& ar, int max_lag) {
    const auto psi = impulse_response(ar);
    std::vector<cplx> r(max_lag + 1, cplx{});
    const int n = static_cast<int>(psi.size());
    for (int lag = 0; lag <= max_lag; ++lag) {
        cplx s{};
        // small terms first
        for (int j = n - 1 - lag; j >= 0; --j) s += psi[j + lag] * std::conj(psi[j]);
        r[lag] = ar.sigma2 * s;
    }
    r[0] = r[0].real();
    return r;
}

std::vector<cplx> time_domain_covariances(const SpectralDensity& f, int max_lag, std::size_t grid_size) {
    if (const auto* ar = std::get_if<RationalAR>(&f.variant())) {
        check_positive(f, grid_size);
        return ar_covariances(*ar, max_lag);
    }
    std::size_t G = f.native_grid() ? f.native_grid() : grid_size;
    if (!f.native_grid()) {
        while (G < 4 * static_cast<std::size_t>(max_lag)) G *= 2;
    }
    return covariances(f, max_lag, G);
}

cplx TimeDomainProblem::cov(int n) const {
    const int m = std::abs(n);
    if (m >= static_cast<int>(r.size())) fail(ErrorCode::LagOutOfRange, "covariance lag outside the problem window");
    return n >= 0 ? r[m] : std::conj(r[m]);
}

TimeDomainProblem make_problem(const ObservationPattern& p, const FunctionalWeights& w, const SpectralDensity& f,
                               int window, std::size_t grid_size) {
    if (window < 0) fail(ErrorCode::InvalidParameters, "window must be nonnegative");
    TimeDomainProblem tp;
    tp.targets = p.missing_indices();
    tp.a = weight_vector(w, p);
    const auto [lo_it, hi_it] = std::minmax_element(tp.targets.begin(), tp.targets.end());
    const int lo = *lo_it - window;
    const int hi = *hi_it + window;
    for (int j = lo; j <= hi; ++j) {
        if (!p.is_missing(j)) tp.observed.push_back(j);
    }
    tp.r = time_domain_covariances(f, hi - lo, grid_size);
    return tp;
}

Projection project(const TimeDomainProblem& tp) {
    const auto nO = static_cast<Eigen::Index>(tp.observed.size());
    const auto nK = static_cast<Eigen::Index>(tp.targets.size());
    CMatrix Roo(nO, nO);
    for (Eigen::Index i = 0; i < nO; ++i) {
        for (Eigen::Index j = 0; j < nO; ++j) Roo(i, j) = tp.cov(tp.observed[j] - tp.observed[i]);
    }
    CMatrix Rok(nO, nK);
    for (Eigen::Index i = 0; i < nO; ++i) {
        for (Eigen::Index k = 0; k < nK; ++k) Rok(i, k) = tp.cov(tp.targets[k] - tp.observed[i]);
    }
    CMatrix Rkk(nK, nK);
    for (Eigen::Index i = 0; i < nK; ++i) {
        for (Eigen::Index k = 0; k < nK; ++k) Rkk(i, k) = tp.cov(tp.targets[k] - tp.targets[i]);
    }
    const CVector rhs = Rok * tp.a;
    Projection out;
    out.observed = tp.observed;
    if (nO == 0) {
        out.weights = CVector::Zero(0);
    } else {
        Eigen::LLT<CMatrix> llt(Roo);
        if (llt.info() == Eigen::Success) {
            out.weights = llt.solve(rhs);
        } else {
            Eigen::LDLT<CMatrix> ldlt(Roo);
            const double floor = -1e-8 * std::abs(tp.r[0]);
            if (ldlt.info() != Eigen::Success || (ldlt.vectorD().real().array() < floor).any() ||
                (ldlt.vectorD().real().array() == 0.0).any()) {
                fail(ErrorCode::SingularCovariance, "observation covariance matrix is singular");
            }
            out.weights = ldlt.solve(rhs);
        }
    }
    out.prior_energy = tp.a.dot(Rkk * tp.a).real();
    const double explained = nO == 0 ? 0.0 : out.weights.dot(rhs).real();
    out.mse = out.prior_energy - explained;
    if (out.mse < 0.0 && out.mse > -1e-12 * out.prior_energy) out.mse = 0.0;
    return out;
}

}  // namespace gapinterp::oracle
