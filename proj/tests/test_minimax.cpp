#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "gapinterp/error.hpp"
#include "gapinterp/grid.hpp"
#include "gapinterp/interpolator.hpp"
#include "gapinterp/minimax.hpp"
#include "oracles.hpp"

using namespace gapinterp;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::VerificationFailed;
}

const auto kS5 = ObservationPattern::s5(0, 1, 1);  // K = {0, 2}

FunctionalWeights s5_weights(double a2) { return FunctionalWeights::explicit_values({{0, 1.0}, {2, a2}}); }

double grid_min(const FourierCoeffs& b, std::size_t G = kDefaultGrid) {
    const auto v = b.evaluate_real(G);
    return *std::min_element(v.begin(), v.end());
}

// Delta under 1/f given on a grid, Gram entries by grid quadrature
double delta_under(const ObservationPattern& p, const FunctionalWeights& w, const std::vector<double>& inv) {
    const auto t = p.missing_indices();
    const int span = *std::max_element(t.begin(), t.end()) - *std::min_element(t.begin(), t.end());
    const FourierCoeffs b(grid::fourier_coeffs(std::span<const double>(inv), span));
    const CVector a = weight_vector(w, p);
    return a.dot(solve_hermitian(build_gram(t, b).B, a)).real();
}

// - sum_{n in K, n != anchor} a(n) exp(i (2 anchor - n) lambda)
std::vector<cplx> reflected_sum(const ObservationPattern& p, const FunctionalWeights& w, int anchor, std::size_t G) {
    std::vector<cplx> h(G);
    for (int n : p.missing_indices()) {
        if (n == anchor) continue;
        for (std::size_t k = 0; k < G; ++k) h[k] -= w(n) * std::polar(1.0, (2 * anchor - n) * grid::lambda(k, G));
    }
    return h;
}

double max_diff(std::span<const cplx> x, std::span<const cplx> y) {
    double m = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) m = std::max(m, std::abs(x[k] - y[k]));
    return m;
}

}  // namespace

TEST_CASE("closed form on the two-point S5 pattern") {
    const auto r = lf_d0minus(kS5, s5_weights(0.2), D0Minus{1.0});
    CHECK(r.b0.value(0).real() == 1.0);
    CHECK(std::abs(r.b0.value(2) - 0.2) < 1e-15);
    CHECK(std::abs(r.b0.value(-2) - 0.2) < 1e-15);
    CHECK(std::abs(r.b0.value(1)) == 0.0);
    CHECK(r.validity.positivity_ok);
    CHECK(std::abs(grid_min(r.b0) - 0.6) < 1e-12);
    CHECK(r.anchor == 0);
    REQUIRE(r.lagrange.size() == 1);
    CHECK(std::abs(r.lagrange[0] - 1.0) < 1e-15);
    // 1 + 0.4 cos 2l = |g0 + g2 e^{-2il}|^2 needs gamma_1 = 0
    CHECK(r.validity.factorization_ok);
    CHECK(std::abs(r.factorization->gamma[1]) < 1e-8);

    const auto bad = lf_d0minus(kS5, s5_weights(1.0), D0Minus{1.0});
    CHECK_FALSE(bad.validity.positivity_ok);
    CHECK(std::abs(grid_min(bad.b0) + 1.0) < 1e-12);
    CHECK_FALSE(bad.validity.factorization_ok);
}

TEST_CASE("closed-form characteristics match the reflected sums") {
    const auto w = FunctionalWeights::geometric(1.0, 0.6);
    const std::size_t G = kDefaultGrid;
    for (const auto& p : {ObservationPattern::s4(3, 2, 2), ObservationPattern::s5(2, 1, 3),
                          ObservationPattern::s6(3, 1, 2, 4, 2), ObservationPattern::s5(0, 3, 2)}) {
        const auto r = lf_d0minus(p, w, D0Minus{2.5});
        CHECK(max_diff(r.h0_grid, reflected_sum(p, w, r.anchor, G)) < 1e-12);
    }
    // S5 with N = 0: only the right block survives
    const auto p = ObservationPattern::s5(0, 2, 3);
    const auto r = lf_d0minus(p, w, D0Minus{1.0});
    std::vector<cplx> h(G);
    for (int j = 3; j <= 5; ++j) {
        for (std::size_t k = 0; k < G; ++k) h[k] -= w(j) * std::polar(1.0, -j * grid::lambda(k, G));
    }
    CHECK(max_diff(r.h0_grid, h) < 1e-12);
}

TEST_CASE("anchored symmetry and exact b0(0)") {
    const auto w = FunctionalWeights::explicit_values(
        {{0, 1.0}, {1, 0.7}, {2, 0.4}, {-4, 0.3}, {-5, 0.2}, {7, 0.1}, {8, 0.05}});
    const auto p = ObservationPattern::s6(3, 2, 2, 4, 2);
    for (double pv : {0.3, 1.0, 7.7}) {
        const auto r = lf_d0minus(p, w, D0Minus{pv});
        CHECK(r.b0.value(0).real() == pv);
        CHECK(r.anchor == 8);
        for (int n : r.indices) {
            CHECK(r.b0.value(n - r.anchor) == r.b0.value(r.anchor - n));
            CHECK(std::abs(r.b0.value(n - r.anchor) - pv * w(n) / w(8)) <= 1e-15 * pv);
        }
        // zeros away from the anchored lags
        for (int m = -r.b0.half_length(); m <= r.b0.half_length(); ++m) {
            if (!p.is_missing(r.anchor + m) && !p.is_missing(r.anchor - m)) CHECK(r.b0.value(m) == cplx(0.0));
        }
    }
}

TEST_CASE("closed form agrees with the classical solve and has no gap coefficients") {
    for (const auto& p : {ObservationPattern::s4(2, 1, 2), ObservationPattern::s5(1, 2, 2),
                          ObservationPattern::s6(2, 1, 1, 3, 1), ObservationPattern::s1(2, 1, 10),
                          ObservationPattern::s2(1, 2, 10)}) {
        // weights decaying away from the anchor keep 1/f0 positive
        std::map<int, cplx> m;
        for (int n : p.missing_indices()) m[n] = std::pow(0.3, std::abs(n - d0_anchor(p)));
        const auto w = FunctionalWeights::explicit_values(m);
        const auto r = lf_d0minus(p, w, D0Minus{1.0});
        REQUIRE(r.validity.positivity_ok);
        const auto s = solve(p, w, r.f0);
        CHECK(std::abs(s.delta - r.delta0) <= 1e-10 * std::max(1.0, r.delta0));
        CHECK(std::abs(r.delta0 - std::norm(w(r.anchor))) < 1e-14);
        const auto coeffs = grid::fourier_coeffs(std::span<const cplx>(r.h0_grid), 200);
        for (int j : r.indices) CHECK(std::abs(coeffs[static_cast<std::size_t>(j + 200)]) < 1e-10);
    }
}

TEST_CASE("S2 and S5 characteristics do not depend on p") {
    const auto w = FunctionalWeights::geometric(2.0, 0.3);
    for (const auto& p : {ObservationPattern::s5(2, 1, 2), ObservationPattern::s2(1, 1, 8)}) {
        const auto r1 = lf_d0minus(p, w, D0Minus{1.0});
        const auto r3 = lf_d0minus(p, w, D0Minus{3.0});
        CHECK(r1.validity.positivity_ok);
        CHECK(max_diff(r1.h0_grid, r3.h0_grid) < 1e-12);
        const auto f1 = r1.f0.values(256);
        const auto f3 = r3.f0.values(256);
        for (std::size_t k = 0; k < f1.size(); ++k) CHECK(std::abs(f3[k] - f1[k] / 3.0) < 1e-12 * std::abs(f1[k]));
    }
}

TEST_CASE("the anchored density minimizes Delta on the class boundary") {
    // S5 K = {0,2}, a = (1, 0.2), p = 1: closed form gives 1, white noise with the same b(0) gives 1.04
    const auto w = s5_weights(0.2);
    const auto r = lf_d0minus(kS5, w, D0Minus{1.0});
    CHECK(std::abs(r.delta0 - 1.0) < 1e-14);
    CHECK(std::abs(solve(kS5, w, SpectralDensity::white_noise()).delta - 1.04) < 1e-12);
    // Cauchy-Schwarz: every member with mean(1/f) = p does at least as well as f0
    D0Minus cls{1.0};
    for (auto& g : sample_class(cls, 20, kDefaultGrid, 3)) {
        double m = 0.0;
        for (double x : g) m += x;
        m /= static_cast<double>(g.size());
        for (double& x : g) x /= m;
        CHECK(delta_under(kS5, w, g) >= r.delta0 - 1e-12);
    }
}

TEST_CASE("closed-form preconditions") {
    CHECK(code_of([] { (void)lf_d0minus(kS5, s5_weights(-0.2), D0Minus{1.0}); }) == ErrorCode::WeightsNotPositive);
    CHECK(code_of([] {
              (void)lf_d0minus(kS5, FunctionalWeights::explicit_values({{0, 1.0}, {2, cplx(0, 1)}}), D0Minus{1.0});
          }) == ErrorCode::WeightsNotPositive);
    CHECK(code_of([] { (void)lf_d0minus(kS5, s5_weights(0.2), D0Minus{0.0}); }) == ErrorCode::InvalidParameters);
    CHECK(code_of([] {
              (void)lf_d0minus(ObservationPattern::s3(1, 1, 1, 5), FunctionalWeights::geometric(1.0, 0.5),
                               D0Minus{1.0});
          }) == ErrorCode::InvalidParameters);
}

TEST_CASE("gamma masks") {
    CHECK(d0_gamma_mask(ObservationPattern::s4(3, 1, 2)) == std::vector<int>{2, 3, 4});
    CHECK(d0_gamma_mask(ObservationPattern::s5(1, 2, 2)) == std::vector<int>{2, 3});
    CHECK(d0_gamma_mask(ObservationPattern::s6(2, 1, 1, 2, 2)) == std::vector<int>{2, 3, 6, 7});
}

TEST_CASE("DW cutoffs") {
    const auto s4 = ObservationPattern::s4(3, 1, 2);
    CHECK(dw_cutoff(s4, 0) == 0);
    CHECK(dw_cutoff(s4, 1) == 1);
    CHECK(dw_cutoff(s4, 3) == 1);
    CHECK(dw_cutoff(s4, 4) == 2);
    CHECK(dw_cutoff(s4, 5) == 3);
    const auto s5 = ObservationPattern::s5(1, 1, 3);
    CHECK(dw_cutoff(s5, 1) == 1);
    CHECK(dw_cutoff(s5, 2) == 1);
    CHECK(dw_cutoff(s5, 3) == 2);
    CHECK(dw_cutoff(s5, 4) == 3);
    const auto s6 = ObservationPattern::s6(2, 1, 1, 3, 2);
    CHECK(dw_cutoff(s6, 1) == 1);
    CHECK(dw_cutoff(s6, 2) == 1);
    CHECK(dw_cutoff(s6, 3) == 2);
    CHECK(dw_cutoff(s6, 4) == 2);
    CHECK(dw_cutoff(s6, 5) == 3);
    CHECK(code_of([] { (void)dw_cutoff(ObservationPattern::s4(1, 2, 1), 1); }) == ErrorCode::NotCovered);
    CHECK(code_of([] { (void)dw_cutoff(ObservationPattern::s6(2, 1, 3, 1, 1), 1); }) == ErrorCode::NotCovered);
    CHECK(code_of([] { (void)dw_cutoff(ObservationPattern::s1(2, 1, 3), 1); }) == ErrorCode::NotCovered);
}

TEST_CASE("degenerate DW: every member gives the same Delta") {
    const auto p = ObservationPattern::s5(1, 1, 1);  // K = {0,1,3}
    const DW cls{{2.0, 0.5, 0.2, 0.1}};
    const auto w = FunctionalWeights::explicit_values({{0, 1.0}, {1, 0.5}, {3, 0.25}});
    CHECK(dw_degenerate(p, 3));
    const auto r = lf_dW(p, w, cls);
    CHECK(r.validity.degenerate);
    CHECK(r.mechanism == Mechanism::DegenerateAR);
    CHECK(r.validity.positivity_ok);
    const auto members = sample_class(cls, 20, kDefaultGrid, 5);
    for (const auto& g : members) {
        const double d = delta_under(p, w, g);
        CHECK(std::abs(d - r.delta0) <= 1e-8 * r.delta0);
    }
    const auto num = numerical_lf(p, w, cls);
    CHECK(num.validity.degenerate);
    CHECK(num.numerical->iterations == 0);
    CHECK(std::abs(num.delta0 - r.delta0) <= 1e-10 * r.delta0);
}

TEST_CASE("nondegenerate DW Newton solve") {
    const auto p = ObservationPattern::s5(1, 1, 1);
    const DW cls{{1.0, 0.3}};
    const auto w = FunctionalWeights::explicit_values({{0, 1.0}, {1, 0.5}, {3, 0.25}});
    const auto r = lf_dW(p, w, cls);
    REQUIRE(r.newton);
    CHECK(r.newton->W_k == 1);
    CHECK(r.newton->unknown_lags == std::vector<int>{2, 3});
    CHECK(r.newton->residual < 1e-10);
    REQUIRE(r.lagrange.size() == 2);
    // B0 p = a with the solved b0
    const auto B = build_gram(p, r.b0).B;
    CVector pv = CVector::Zero(3);
    pv(0) = r.lagrange[0];
    pv(1) = r.lagrange[1];
    CHECK((B * pv - r.a).cwiseAbs().maxCoeff() < 1e-10);
    // cosine moments of 1/f0 by adaptive quadrature
    for (int n = 0; n <= 1; ++n) {
        const double m = oracle_ref::mean_integral([&](double l) {
            double s = r.b0.value(0).real();
            for (int k = 1; k <= r.b0.half_length(); ++k) s += 2.0 * r.b0.value(k).real() * std::cos(k * l);
            return s * std::cos(n * l);
        });
        CHECK(std::abs(m - cls.b[static_cast<std::size_t>(n)]) < 1e-9);
    }
    if (r.validity.positivity_ok) {
        CHECK(std::abs(solve(p, w, r.f0).delta - r.delta0) <= 1e-10 * r.delta0);
    }
}

TEST_CASE("Newton DW density sits below sampled members and the maximizer keeps the moments") {
    const auto p = ObservationPattern::s5(1, 1, 1);
    const DW cls{{1.0, 0.3}};
    const auto w = FunctionalWeights::explicit_values({{0, 1.0}, {1, 0.5}, {3, 0.25}});
    const auto r = lf_dW(p, w, cls);
    for (const auto& g : sample_class(cls, 50, kDefaultGrid, 17)) CHECK(delta_under(p, w, g) >= r.delta0);
    const auto num = numerical_lf(p, w, cls);
    CHECK(num.delta0 >= r.delta0);
    CHECK(std::abs(num.b0.value(0).real() - 1.0) < 1e-9);
    CHECK(std::abs(num.b0.value(1).real() - 0.3) < 1e-9);
    CHECK(std::abs(num.b0.value(1).imag()) < 1e-12);
}

TEST_CASE("DW with W = 0 reduces to the anchored form") {
    const auto w = FunctionalWeights::geometric(1.0, 0.6);
    for (const auto& p : {ObservationPattern::s5(2, 1, 2), ObservationPattern::s4(2, 0, 2), kS5}) {
        const auto dw = lf_dW(p, w, DW{{1.7}});
        const auto d0 = lf_d0minus(p, w, D0Minus{1.7});
        for (int m = 0; m <= d0.b0.half_length(); ++m) CHECK(std::abs(dw.b0.value(m) - d0.b0.value(m)) < 1e-9);
        CHECK(std::abs(dw.delta0 - d0.delta0) < 1e-9);
        CHECK(max_diff(dw.h0_grid, d0.h0_grid) < 1e-9);
    }
}

TEST_CASE("DW preconditions") {
    const auto p = ObservationPattern::s5(1, 1, 1);
    const auto w = FunctionalWeights::constant(1.0);
    CHECK(code_of([&] { (void)lf_dW(p, w, DW{{1.0, 0.6}}); }) == ErrorCode::NonPositiveDensity);
    CHECK(code_of([&] { (void)lf_dW(p, FunctionalWeights::constant(cplx(0, 1)), DW{{1.0, 0.1}}); }) ==
          ErrorCode::InvalidParameters);
    CHECK(code_of([&] { (void)lf_dW(ObservationPattern::s4(1, 2, 1), w, DW{{1.0, 0.1}}); }) ==
          ErrorCode::NotCovered);
}

TEST_CASE("D_v^u with inactive bounds keeps the closed form") {
    const DVU cls{SpectralDensity::white_noise(0.1), SpectralDensity::white_noise(10.0), 1.0};
    const auto w = s5_weights(0.2);
    const auto r = lf_dvu(kS5, w, cls);
    const auto d0 = lf_d0minus(kS5, w, D0Minus{1.0});
    CHECK(r.mechanism == Mechanism::ClosedForm);
    CHECK(r.validity.bounds_ok);
    CHECK(r.delta0 == d0.delta0);
    for (int m = 0; m <= d0.b0.half_length(); ++m) CHECK(r.b0.value(m) == d0.b0.value(m));
    CHECK(r.lower_active.empty());
    CHECK(r.upper_active.empty());
}

TEST_CASE("D_v^u with active bounds falls back to the numerical maximizer") {
    const DVU cls{SpectralDensity::white_noise(0.9), SpectralDensity::white_noise(1.1), 1.0};
    const auto w = s5_weights(0.2);
    const auto r = lf_dvu(kS5, w, cls);
    CHECK(r.mechanism == Mechanism::Numerical);
    CHECK_FALSE(r.validity.closed_form_applicable);
    CHECK(r.validity.bounds_ok);
    CHECK(r.validity.converged);
    CHECK(std::abs(r.b0.value(0).real() - 1.0) < 1e-9);
    CHECK(std::abs(solve(kS5, w, r.f0).delta - r.delta0) <= 1e-10 * r.delta0);
    CHECK(r.lower_active.size() + r.upper_active.size() > 0);
    for (const auto& g : sample_class(cls, 100, kDefaultGrid, 11)) CHECK(delta_under(kS5, w, g) <= r.delta0 + 1e-9);
    const auto rep = saddle_check(r, kS5, cls, 50);
    CHECK(rep.lower_pass == rep.samples);
}

TEST_CASE("pinned D_v^u class returns the pinned density") {
    const auto fstar = SpectralDensity::ar1(0.5);
    const DVU cls{fstar, fstar, minimality_value(fstar)};
    const auto p = ObservationPattern::s4(2, 1, 3);
    const auto w = FunctionalWeights::constant(1.0);
    const auto r = lf_dvu(p, w, cls);
    CHECK(std::abs(r.b0.value(0) - 1.25) < 1e-12);
    CHECK(std::abs(r.b0.value(1) + 0.5) < 1e-12);
    for (int m = 2; m <= r.b0.half_length(); ++m) CHECK(std::abs(r.b0.value(m)) < 1e-12);
    const auto s = solve(p, w, fstar);
    CHECK(std::abs(r.delta0 - 412.0 / 51.0) < 1e-9);
    CHECK(max_diff(r.h0_grid, s.h_grid) < 1e-9);
    const auto rep = saddle_check(r, p, cls, 20);
    CHECK(rep.passed());
    CHECK(std::abs(rep.max_upper_excess) < 1e-9);

    // negative control: a large coefficient placed on the gap set
    auto bad = r.h0_grid;
    const std::size_t G = bad.size();
    for (std::size_t k = 0; k < G; ++k) bad[k] -= 3.0 * std::polar(1.0, grid::lambda(k, G));
    const auto neg = saddle_check(r, bad, p, cls, 20);
    CHECK(neg.upper_pass == 0);
}

TEST_CASE("saddle check of the anchored D0 closed form") {
    const auto w = s5_weights(0.2);
    const D0Minus cls{1.0};
    const auto r = lf_d0minus(kS5, w, cls);
    const auto rep = saddle_check(r, kS5, cls, 100);
    CHECK(rep.samples == 100);
    CHECK(rep.lower_pass == 100);
    // the upper inequality is not a property of this construction
    CHECK(rep.upper_pass < 100);
}

TEST_CASE("numerical maximizer on D0 never falls below the closed form") {
    const auto w = s5_weights(0.2);
    const D0Minus cls{1.0};
    const auto cf = lf_d0minus(kS5, w, cls);
    try {
        const auto r = numerical_lf(kS5, w, cls);
        CHECK(r.delta0 >= cf.delta0 * (1 - 1e-4));
        CHECK(r.b0.value(0).real() >= 1.0 - 1e-9);
    } catch (const LfConvergenceError& e) {
        CHECK(e.partial().delta0 >= cf.delta0 * (1 - 1e-4));
    }
}

TEST_CASE("numerical maximizer on a truncated S3 dominates random members") {
    const auto p = ObservationPattern::s3(1, 1, 1, 50);
    const auto w = FunctionalWeights::geometric(1.0, 0.5);
    const D0Minus cls{1.0};
    LeastFavourableResult r;
    try {
        r = numerical_lf(p, w, cls);
    } catch (const LfConvergenceError& e) {
        r = e.partial();
    }
    for (const auto& g : sample_class(cls, 100, kDefaultGrid, 13)) CHECK(delta_under(p, w, g) <= r.delta0);
}

TEST_CASE("numerical maximizer is deterministic") {
    const DVU cls{SpectralDensity::white_noise(0.8), SpectralDensity::white_noise(1.3), 1.0};
    const auto p = ObservationPattern::s4(2, 1, 2);
    const auto w = FunctionalWeights::geometric(1.0, 0.7);
    const auto a = numerical_lf(p, w, cls);
    const auto b = numerical_lf(p, w, cls);
    CHECK(a.delta0 == b.delta0);
    CHECK(std::equal(a.b0.values().begin(), a.b0.values().end(), b.b0.values().begin()));
}

TEST_CASE("class validation") {
    CHECK(code_of([] { validate(D0Minus{-1.0}); }) == ErrorCode::InvalidParameters);
    CHECK(code_of([] { validate(DW{{}}); }) == ErrorCode::InvalidParameters);
    CHECK(code_of([] {
              validate(DVU{SpectralDensity::white_noise(2.0), SpectralDensity::white_noise(1.0), 1.0});
          }) == ErrorCode::InvalidParameters);
    CHECK(code_of([] {
              validate(DVU{SpectralDensity::white_noise(0.5), SpectralDensity::white_noise(1.0), 3.0});
          }) == ErrorCode::InfeasibleClass);
    CHECK_NOTHROW(validate(DVU{SpectralDensity::white_noise(0.5), SpectralDensity::white_noise(1.0), 1.5}));
}
