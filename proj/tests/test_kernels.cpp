#include <doctest.h>

#include <omp.h>

#include <random>

#include "gapinterp/grid.hpp"
#include "gapinterp/kernels.hpp"
#include "gapinterp/oracle.hpp"

using namespace gapinterp;

namespace {

struct ThreadCount {
    int saved = omp_get_max_threads();
    explicit ThreadCount(int n) { omp_set_num_threads(n); }
    ~ThreadCount() { omp_set_num_threads(saved); }
};

std::vector<cplx> random_coeffs(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    std::vector<cplx> c(n);
    for (auto& z : c) z = {nd(rng), nd(rng)};
    return c;
}

}  // namespace

TEST_CASE("trig_sum: parallel equals serial and direct evaluation") {
    const std::vector<int> t{0, 1, -3, -4, -5, 17, 250, -1000, 4097};
    const auto coef = random_coeffs(t.size(), 3);
    for (std::size_t G : {64u, 4096u, 16384u}) {
        const auto par = kernels::trig_sum(t, coef, G);
        const auto ser = kernels::serial::trig_sum(t, coef, G);
        REQUIRE(par.size() == G);
        CHECK(par == ser);
        double err = 0.0;
        for (std::size_t k = 0; k < G; k += 7) {
            cplx direct{};
            const double l = grid::lambda(k, G);
            for (std::size_t u = 0; u < t.size(); ++u) direct += coef[u] * std::polar(1.0, t[u] * l);
            err = std::max(err, std::abs(direct - par[k]));
        }
        CHECK(err < 1e-11);
    }
    CHECK_THROWS_AS(kernels::trig_sum(t, std::vector<cplx>(2), 64), Error);
}

TEST_CASE("trig_sum does not depend on the thread count") {
    const std::vector<int> t{-7, -2, 0, 3, 11};
    const auto coef = random_coeffs(t.size(), 5);
    std::vector<cplx> one, four;
    {
        ThreadCount tc(1);
        one = kernels::trig_sum(t, coef, 8192);
    }
    {
        ThreadCount tc(4);
        four = kernels::trig_sum(t, coef, 8192);
    }
    CHECK(one == four);
}

TEST_CASE("weighted_energy: parallel matches serial, reduction is thread-count independent") {
    const std::size_t G = 1 << 15;
    const auto x = random_coeffs(G, 9);
    std::vector<double> w(G);
    for (std::size_t k = 0; k < G; ++k) w[k] = 1.0 + 0.5 * std::cos(grid::lambda(k, G));
    const double ser = kernels::serial::weighted_energy(x, w);
    double one = 0.0, four = 0.0;
    {
        ThreadCount tc(1);
        one = kernels::weighted_energy(x, w);
    }
    {
        ThreadCount tc(4);
        four = kernels::weighted_energy(x, w);
    }
    CHECK(one == four);
    CHECK(std::abs(one - ser) <= 1e-13 * ser);
    // constant |x| = 1 and mean-one weights
    std::vector<cplx> unit(G, cplx(0.6, 0.8));
    CHECK(std::abs(kernels::weighted_energy(unit, w) - 1.0) < 1e-13);
    CHECK_THROWS_AS(kernels::weighted_energy(unit, std::vector<double>(3)), Error);
}

TEST_CASE("replicate_sq_errors: parallel equals serial for any thread count") {
    const auto f = SpectralDensity(RationalAR{{0.5}, 1.0});
    const std::size_t length = 40;
    const auto gen = oracle::path_generator(f, length);
    kernels::PathFunctional target{{20, 21}, {1.0, 1.0}};
    kernels::PathFunctional estimate{{19, 22}, {0.4, 0.4}};
    std::vector<double> ser(3000), one(3000), four(3000);
    kernels::serial::replicate_sq_errors(gen, length, target, estimate, 77, ser);
    {
        ThreadCount tc(1);
        kernels::replicate_sq_errors(gen, length, target, estimate, 77, one);
    }
    {
        ThreadCount tc(4);
        kernels::replicate_sq_errors(gen, length, target, estimate, 77, four);
    }
    CHECK(ser == one);
    CHECK(ser == four);
    kernels::PathFunctional outside{{40}, {1.0}};
    CHECK_THROWS_AS(kernels::replicate_sq_errors(gen, length, outside, estimate, 1, one), Error);
}

TEST_CASE("generate_paths: parallel equals serial, replicate streams are independent of order") {
    const std::vector<double> nonneg{2.0, 0.5};
    const SpectralDensity f(InversePolynomial{FourierCoeffs::from_nonnegative(nonneg)});
    const std::size_t length = 50, n = 200;
    const auto gen = oracle::path_generator(f, length);
    std::vector<double> ser(length * n), par(length * n);
    kernels::serial::generate_paths(gen, length, n, 4, ser);
    {
        ThreadCount tc(3);
        kernels::generate_paths(gen, length, n, 4, par);
    }
    CHECK(ser == par);
    // replicate r depends only on (seed, r)
    std::vector<double> single(length);
    auto eng = kernels::replicate_engine(4, 137);
    gen(eng, single);
    CHECK(std::equal(single.begin(), single.end(), ser.begin() + 137 * length));
    CHECK_THROWS_AS(kernels::generate_paths(gen, length, n, 4, std::span<double>(par).first(10)), Error);
}
