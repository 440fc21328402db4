#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <string>

#include "gapinterp/error.hpp"
#include "gapinterp/grid.hpp"
#include "gapinterp/oracle.hpp"

namespace gapinterp::oracle {

namespace {

kernels::PathGenerator ar_generator(const RationalAR& ar) {
    std::vector<double> alpha;
    for (const auto& a : ar.alpha) alpha.push_back(a.real());
    const double sigma = std::sqrt(ar.sigma2);
    // warm-up long enough for the start-up transient (impulse response) to fall below 1e-17
    std::size_t burn_in = 0;
    {
        std::vector<double> psi{1.0};
        std::size_t quiet = 0;
        while (psi.size() < 1'000'000 && (quiet < alpha.size() || psi.size() <= alpha.size())) {
            const std::size_t n = psi.size();
            double x = 0.0;
            for (std::size_t k = 1; k <= alpha.size() && k <= n; ++k) x += alpha[k - 1] * psi[n - k];
            psi.push_back(x);
            quiet = std::abs(x) < 1e-17 ? quiet + 1 : 0;
        }
        burn_in = alpha.empty() ? 0 : psi.size();
    }
    return [alpha, sigma, burn_in](std::mt19937_64& eng, std::span<double> out) {
        std::normal_distribution<double> nd;
        const std::size_t p = alpha.size();
        std::vector<double> hist(p, 0.0);  // hist[k] = x_{t-1-k}
        auto step = [&]() {
            double x = sigma * nd(eng);
            for (std::size_t k = 0; k < p; ++k) x += alpha[k] * hist[k];
            if (p > 0) {
                std::rotate(hist.rbegin(), hist.rbegin() + 1, hist.rend());
                hist[0] = x;
            }
            return x;
        };
        for (std::size_t t = 0; t < burn_in; ++t) (void)step();
        for (auto& x : out) x = step();
    };
}

kernels::PathGenerator circulant_generator(const SpectralDensity& f, std::size_t length) {
    const std::size_t M = grid::next_power_of_two(std::max<std::size_t>(8 * length, 2));
    const int half = static_cast<int>(M / 2);
    std::size_t G = f.native_grid();
    if (G == 0) {
        G = std::max<std::size_t>(kDefaultGrid, 2 * M);
    } else if (G < 2 * M) {
        fail(ErrorCode::InvalidParameters, "tabulated grid of " + std::to_string(G) +
                                               " points is too coarse to simulate paths of length " +
                                               std::to_string(length));
    }
    const auto r = covariances(f, half, G);
    std::vector<cplx> c(M);
    for (int j = 0; j <= half; ++j) c[j] = r[j].real();
    for (int j = 1; j < half; ++j) c[M - j] = r[j].real();
    grid::dft(c, -1);
    double mx = 0.0;
    for (const auto& x : c) mx = std::max(mx, x.real());
    auto scale = std::make_shared<std::vector<double>>(M);
    for (std::size_t l = 0; l < M; ++l) {
        const double ev = c[l].real();
        if (ev < -1e-10 * mx) {
            fail(ErrorCode::EmbeddingNotPSD, "circulant eigenvalue " + std::to_string(ev) + " is negative");
        }
        (*scale)[l] = std::sqrt(std::max(ev, 0.0) / static_cast<double>(M));
    }
    auto plan = std::make_shared<grid::FftPlan>(M, +1);
    return [scale, plan, M](std::mt19937_64& eng, std::span<double> out) {
        std::normal_distribution<double> nd;
        thread_local std::vector<cplx> buf;
        buf.resize(M);
        for (std::size_t l = 0; l < M; ++l) {
            const double re = nd(eng);
            const double im = nd(eng);
            buf[l] = (*scale)[l] * cplx(re, im);
        }
        plan->execute(buf);
        for (std::size_t t = 0; t < out.size(); ++t) out[t] = buf[t].real();
    };
}

kernels::PathFunctional to_functional(const LinearEstimate& e, int origin, std::size_t length) {
    kernels::PathFunctional fn;
    for (const auto& [j, v] : e.weights) {
        const long pos = static_cast<long>(j) - origin;
        if (pos < 0 || pos >= static_cast<long>(length)) {
            fail(ErrorCode::IndexOutOfPath, "index " + std::to_string(j) + " is outside the simulated path");
        }
        fn.positions.push_back(static_cast<std::size_t>(pos));
        fn.weights.push_back(v);
    }
    return fn;
}

MseEstimate summarize(std::span<const double> errors) {
    MseEstimate m;
    m.replicates = errors.size();
    if (errors.empty()) return m;
    double s = 0.0;
    for (double e : errors) s += e;
    m.mean = s / static_cast<double>(errors.size());
    double v = 0.0;
    for (double e : errors) v += (e - m.mean) * (e - m.mean);
    if (errors.size() > 1) {
        v /= static_cast<double>(errors.size() - 1);
        m.std_error = std::sqrt(v / static_cast<double>(errors.size()));
    }
    return m;
}

}  // namespace

kernels::PathGenerator path_generator(const SpectralDensity& f, std::size_t length) {
    if (!f.is_real()) fail(ErrorCode::InvalidParameters, "simulation needs a real (even) spectral density");
    check_positive(f, f.native_grid() ? f.native_grid() : kDefaultGrid);
    if (const auto* ar = std::get_if<RationalAR>(&f.variant())) return ar_generator(*ar);
    return circulant_generator(f, length);
}

SamplePaths simulate(const SpectralDensity& f, std::size_t length, std::size_t n_replicates, std::uint64_t seed) {
    if (length == 0) fail(ErrorCode::InvalidParameters, "path length must be positive");
    SamplePaths sp;
    sp.length = length;
    sp.replicates = n_replicates;
    sp.data.resize(length * n_replicates);
    kernels::generate_paths(path_generator(f, length), length, n_replicates, seed, sp.data);
    return sp;
}

MseEstimate empirical_mse(const SamplePaths& paths, int origin, const LinearEstimate& estimate,
                          const LinearEstimate& target) {
    const auto est = to_functional(estimate, origin, paths.length);
    const auto tgt = to_functional(target, origin, paths.length);
    std::vector<double> errors(paths.replicates);
    for (std::size_t r = 0; r < paths.replicates; ++r) {
        double e = 0.0;
        for (std::size_t u = 0; u < tgt.positions.size(); ++u) e += tgt.weights[u] * paths.at(r, tgt.positions[u]);
        for (std::size_t u = 0; u < est.positions.size(); ++u) e -= est.weights[u] * paths.at(r, est.positions[u]);
        errors[r] = e * e;
    }
    return summarize(errors);
}

MseEstimate monte_carlo_mse(const SpectralDensity& f, int origin, std::size_t length, const LinearEstimate& estimate,
                            const LinearEstimate& target, std::size_t n_replicates, std::uint64_t seed) {
    const auto est = to_functional(estimate, origin, length);
    const auto tgt = to_functional(target, origin, length);
    std::vector<double> errors(n_replicates);
    kernels::replicate_sq_errors(path_generator(f, length), length, tgt, est, seed, errors);
    return summarize(errors);
}

LinearEstimate estimate_from_characteristic(const InterpolationSolution& s, const ObservationPattern& p, int lo,
                                            int hi) {
    LinearEstimate e;
    const int L = s.h_half_length;
    for (int j = std::max(lo, -L); j <= std::min(hi, L); ++j) {
        if (!p.is_missing(j)) e.weights[j] = s.h_coeff(j).real();
    }
    return e;
}

LinearEstimate estimate_from_projection(const Projection& proj) {
    LinearEstimate e;
    for (std::size_t i = 0; i < proj.observed.size(); ++i) {
        e.weights[proj.observed[i]] = proj.weights(static_cast<Eigen::Index>(i)).real();
    }
    return e;
}

LinearEstimate target_functional(const ObservationPattern& p, const FunctionalWeights& w) {
    LinearEstimate e;
    const auto t = p.missing_indices();
    const auto a = weight_vector(w, p);
    for (std::size_t u = 0; u < t.size(); ++u) e.weights[t[u]] = a(static_cast<Eigen::Index>(u)).real();
    return e;
}

}  // namespace gapinterp::oracle
