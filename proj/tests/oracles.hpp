#pragma once

// Independent reference computations for tests: adaptive quadrature and literal
// closed forms. Nothing here calls into the library's spectral machinery.

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oracle_ref {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

// (1/2pi) int_{-pi}^{pi} g
inline double mean_integral(const std::function<double(double)>& g) {
    using boost::math::quadrature::gauss_kronrod;
    return gauss_kronrod<double, 61>::integrate(g, -pi, pi, 15, 1e-14) / (2.0 * pi);
}

inline cplx mean_integral_c(const std::function<cplx(double)>& g) {
    const double re = mean_integral([&](double x) { return g(x).real(); });
    const double im = mean_integral([&](double x) { return g(x).imag(); });
    return {re, im};
}

// |1 - sum alpha_k e^{-ik lambda}|^2
inline double ar_poly_sq(const std::vector<cplx>& alpha, double lambda) {
    cplx s = 1.0;
    for (std::size_t k = 0; k < alpha.size(); ++k) s -= alpha[k] * std::polar(1.0, -double(k + 1) * lambda);
    return std::norm(s);
}

inline cplx ar_inverse_coeff(const std::vector<cplx>& alpha, double sigma2, int m) {
    return mean_integral_c([&](double l) { return std::polar(1.0, -m * l) * ar_poly_sq(alpha, l) / sigma2; });
}

inline cplx ar_covariance(const std::vector<cplx>& alpha, double sigma2, int n) {
    return mean_integral_c([&](double l) { return std::polar(1.0, n * l) * sigma2 / ar_poly_sq(alpha, l); });
}

// Closed-form coefficients for the AR(1) example with gaps {-5,-4,-3} and {0,1}, and {4,5,6}.
struct Example1 {
    cplx alpha;
    std::map<int, double> a;

    double r2() const { return std::norm(alpha); }
    double d1() const { return 1.0 + r2() + r2() * r2(); }  // 1+|a|^2+|a|^4

    std::map<int, cplx> s4_coeffs() const {
        const double q = r2();
        const cplx al = alpha;
        const cplx ab = std::conj(alpha);
        const double den = (1 + q) * (1 + q * q);
        std::map<int, cplx> c;
        c[0] = (a.at(0) * (1 + q) + al * a.at(1)) / d1();
        c[1] = (ab * a.at(0) + a.at(1) * (1 + q)) / d1();
        c[-3] = (d1() * a.at(-3) + ab * (1 + q) * a.at(-4) + ab * ab * a.at(-5)) / den;
        c[-4] = (al * a.at(-3) + (1 + q) * a.at(-4) + ab * a.at(-5)) / (1 + q * q);
        c[-5] = (al * al * a.at(-3) + al * (1 + q) * a.at(-4) + d1() * a.at(-5)) / den;
        return c;
    }

    std::map<int, cplx> s5_coeffs() const {
        const double q = r2();
        const cplx al = alpha;
        const cplx ab = std::conj(alpha);
        const double den = (1 + q) * (1 + q * q);
        std::map<int, cplx> c;
        c[0] = (a.at(0) * (1 + q) + al * a.at(1)) / d1();
        c[1] = (ab * a.at(0) + a.at(1) * (1 + q)) / d1();
        c[4] = (d1() * a.at(4) + al * (1 + q) * a.at(5) + al * al * a.at(6)) / den;
        c[5] = (ab * a.at(4) + (1 + q) * a.at(5) + al * a.at(6)) / (1 + q * q);
        c[6] = (ab * ab * a.at(4) + ab * (1 + q) * a.at(5) + d1() * a.at(6)) / den;
        return c;
    }

    double central_term() const {
        const double q = r2();
        const double s = 2.0 * alpha.real();
        return ((1 + q) * (a.at(0) * a.at(0) + a.at(1) * a.at(1)) + s * a.at(0) * a.at(1)) / d1();
    }

    double block_term(int j0, int j1, int j2) const {
        const double q = r2();
        const double s = 2.0 * alpha.real();
        const double s2 = 2.0 * (alpha * alpha).real();
        const double x = a.at(j0), y = a.at(j1), z = a.at(j2);
        return (d1() * (x * x + y * y + z * z) + q * y * y + s2 * x * z + s * (1 + q) * (x * y + y * z)) /
               ((1 + q) * (1 + q * q));
    }

    double delta4() const { return central_term() + block_term(-3, -4, -5); }
    double delta5() const { return central_term() + block_term(4, 5, 6); }
    double delta6() const { return delta4() + delta5() - central_term(); }
};

}  // namespace oracle_ref
