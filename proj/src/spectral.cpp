#include "gapinterp/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gapinterp/error.hpp"
#include "gapinterp/grid.hpp"

namespace gapinterp {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

std::vector<cplx> ar_polynomial(const RationalAR& ar) {
    std::vector<cplx> phi(ar.alpha.size() + 1);
    phi[0] = 1.0;
    for (std::size_t k = 0; k < ar.alpha.size(); ++k) phi[k + 1] = -ar.alpha[k];
    return phi;
}

// |phi(exp(-i lambda))|^2 on the grid
std::vector<double> ar_inverse_values(const RationalAR& ar, std::size_t grid_size) {
    const auto phi = ar_polynomial(ar);
    const int p = static_cast<int>(ar.alpha.size());
    std::vector<cplx> coeffs(2 * p + 1, cplx{});
    for (int j = 0; j <= p; ++j) coeffs[p - j] = phi[j];
    const auto vals = grid::synthesize(coeffs, p, grid_size);
    std::vector<double> out(grid_size);
    for (std::size_t k = 0; k < grid_size; ++k) out[k] = std::norm(vals[k]) / ar.sigma2;
    return out;
}

std::vector<cplx> ar_inverse_coeffs(const RationalAR& ar) {
    const auto phi = ar_polynomial(ar);
    const int p = static_cast<int>(ar.alpha.size());
    std::vector<cplx> nonneg(p + 1, cplx{});
    for (int m = 0; m <= p; ++m) {
        cplx s{};
        for (int j = 0; j + m <= p; ++j) s += phi[j] * std::conj(phi[j + m]);
        nonneg[m] = s / ar.sigma2;
    }
    return nonneg;
}

void require_grid(const SpectralDensity& f, std::size_t grid_size) {
    const std::size_t native = f.native_grid();
    if (native != 0 && native != grid_size) {
        fail(ErrorCode::GridMismatch, "tabulated density has " + std::to_string(native) +
                                          " points, requested grid " + std::to_string(grid_size));
    }
    if (grid_size < 2) fail(ErrorCode::InvalidParameters, "grid size must be at least 2");
}

void require_positive_min(std::span<const double> v, const char* what) {
    double mx = 0.0;
    double mn = std::numeric_limits<double>::infinity();
    for (double x : v) {
        if (!std::isfinite(x)) fail(ErrorCode::NonPositiveDensity, std::string(what) + " is not finite on the grid");
        mx = std::max(mx, x);
        mn = std::min(mn, x);
    }
    if (!(mx > 0.0) || mn <= kPositivityTolerance * mx) {
        fail(ErrorCode::NonPositiveDensity,
             std::string(what) + " minimum " + std::to_string(mn) + " below tolerance (max " + std::to_string(mx) + ")");
    }
}

// Truncate or pad a nonnegative-lag sequence to half-length L, rejecting a non-negligible cut tail.
FourierCoeffs fit_half_length(std::span<const cplx> nonneg, int half_length) {
    const double b0 = std::abs(nonneg[0]);
    for (std::size_t m = static_cast<std::size_t>(half_length) + 1; m < nonneg.size(); ++m) {
        if (std::abs(nonneg[m]) > kTailThreshold * b0) {
            fail(ErrorCode::TruncationTooShort,
                 "lag " + std::to_string(m) + " exceeds truncation " + std::to_string(half_length));
        }
    }
    std::vector<cplx> fitted(half_length + 1, cplx{});
    for (int m = 0; m <= half_length && m < static_cast<int>(nonneg.size()); ++m) fitted[m] = nonneg[m];
    return FourierCoeffs::from_nonnegative(fitted);
}

cplx horner(std::span<const cplx> q, cplx z, cplx* deriv) {
    cplx p = q.back();
    cplx d{};
    for (std::size_t k = q.size() - 1; k-- > 0;) {
        d = d * z + p;
        p = p * z + q[k];
    }
    if (deriv) *deriv = d;
    return p;
}

std::vector<double> power_of_factor(std::span<const cplx> gamma, std::size_t grid_size) {
    const int n = static_cast<int>(gamma.size()) - 1;
    std::vector<cplx> coeffs(2 * n + 1, cplx{});
    for (int j = 0; j <= n; ++j) coeffs[n - j] = gamma[j];
    const auto vals = grid::synthesize(coeffs, n, grid_size);
    std::vector<double> out(grid_size);
    for (std::size_t k = 0; k < grid_size; ++k) out[k] = std::norm(vals[k]);
    return out;
}

double relative_error(std::span<const double> a, std::span<const double> b) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        num = std::max(num, std::abs(a[k] - b[k]));
        den = std::max(den, std::abs(b[k]));
    }
    return den > 0.0 ? num / den : num;
}

// Gauss-Newton on the autocorrelation equations sum_n gamma_n conj(gamma_{n+m}) = b(m).
void refine_factor(std::vector<cplx>& gamma, const FourierCoeffs& b) {
    const int n = static_cast<int>(gamma.size()) - 1;
    const int unknowns = 2 * (n + 1);
    const int equations = 2 * (n + 1);
    auto g = [&](int k) { return (k >= 0 && k <= n) ? gamma[k] : cplx{}; };
    for (int iter = 0; iter < 20; ++iter) {
        Eigen::VectorXd r(equations);
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(equations, unknowns);
        double rnorm = 0.0;
        for (int m = 0; m <= n; ++m) {
            cplx s{};
            for (int j = 0; j + m <= n; ++j) s += gamma[j] * std::conj(gamma[j + m]);
            const cplx res = s - b.value(m);
            r(2 * m) = res.real();
            r(2 * m + 1) = res.imag();
            rnorm = std::max(rnorm, std::abs(res));
            for (int k = 0; k <= n; ++k) {
                const cplx dx = std::conj(g(k + m)) + g(k - m);
                const cplx dy = cplx(0, 1) * std::conj(g(k + m)) - cplx(0, 1) * g(k - m);
                J(2 * m, k) = dx.real();
                J(2 * m + 1, k) = dx.imag();
                J(2 * m, n + 1 + k) = dy.real();
                J(2 * m + 1, n + 1 + k) = dy.imag();
            }
        }
        if (rnorm <= 1e-15 * std::abs(b.value(0))) break;
        const Eigen::VectorXd step = J.completeOrthogonalDecomposition().solve(-r);
        for (int k = 0; k <= n; ++k) gamma[k] += cplx(step(k), step(n + 1 + k));
    }
    const double phase = std::arg(gamma[0]);
    for (auto& x : gamma) x *= std::polar(1.0, -phase);
}

}  // namespace

// FourierCoeffs

FourierCoeffs::FourierCoeffs(std::vector<cplx> values) : values_(std::move(values)) {
    if (values_.size() % 2 == 0) fail(ErrorCode::InvalidParameters, "FourierCoeffs needs an odd number of values");
    const int L = half_length();
    for (int m = 0; m <= L; ++m) {
        const cplx avg = 0.5 * (values_[L + m] + std::conj(values_[L - m]));
        values_[L + m] = avg;
        values_[L - m] = std::conj(avg);
    }
}

FourierCoeffs FourierCoeffs::from_nonnegative(std::span<const cplx> nonneg) {
    if (nonneg.empty()) fail(ErrorCode::InvalidParameters, "empty coefficient list");
    const int L = static_cast<int>(nonneg.size()) - 1;
    std::vector<cplx> v(2 * L + 1);
    for (int m = 0; m <= L; ++m) {
        v[L + m] = nonneg[m];
        v[L - m] = std::conj(nonneg[m]);
    }
    v[L] = nonneg[0].real();
    return FourierCoeffs(std::move(v));
}

FourierCoeffs FourierCoeffs::from_nonnegative(std::span<const double> nonneg) {
    std::vector<cplx> tmp(nonneg.begin(), nonneg.end());
    return from_nonnegative(std::span<const cplx>(tmp));
}

cplx FourierCoeffs::at(int m) const {
    const int L = half_length();
    if (m < -L || m > L) {
        fail(ErrorCode::LagOutOfRange, "lag " + std::to_string(m) + " outside [-" + std::to_string(L) + ", " +
                                           std::to_string(L) + "]");
    }
    return values_[m + L];
}

cplx FourierCoeffs::value(int m) const noexcept {
    const int L = half_length();
    return (m < -L || m > L) ? cplx{} : values_[m + L];
}

std::vector<cplx> FourierCoeffs::evaluate(std::size_t grid_size) const {
    return grid::synthesize(values_, half_length(), grid_size);
}

std::vector<double> FourierCoeffs::evaluate_real(std::size_t grid_size) const {
    const auto c = evaluate(grid_size);
    std::vector<double> out(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) out[k] = c[k].real();
    return out;
}

int FourierCoeffs::effective_half_length(double tol) const noexcept {
    for (int m = half_length(); m > 0; --m) {
        if (std::abs(values_[half_length() + m]) > tol) return m;
    }
    return 0;
}

FourierCoeffs FourierCoeffs::padded(int half_length) const {
    std::vector<cplx> nonneg(half_length + 1, cplx{});
    for (int m = 0; m <= half_length; ++m) nonneg[m] = value(m);
    return from_nonnegative(std::span<const cplx>(nonneg));
}

// SpectralDensity

SpectralDensity::SpectralDensity(RationalAR ar) : v_(std::move(ar)) {
    const auto& a = std::get<RationalAR>(v_);
    if (!(a.sigma2 > 0.0) || !std::isfinite(a.sigma2)) fail(ErrorCode::InvalidParameters, "sigma2 must be positive");
    for (const auto& x : a.alpha) {
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) {
            fail(ErrorCode::InvalidParameters, "AR coefficient is not finite");
        }
    }
}

SpectralDensity::SpectralDensity(InversePolynomial ip) : v_(std::move(ip)) {}

SpectralDensity::SpectralDensity(Tabulated tab) : v_(std::move(tab)) {
    const auto& t = std::get<Tabulated>(v_);
    if (t.values.size() < 2) fail(ErrorCode::InvalidParameters, "tabulated density needs at least 2 points");
    for (double x : t.values) {
        if (!std::isfinite(x) || x < 0.0) fail(ErrorCode::NonPositiveDensity, "tabulated value negative or not finite");
    }
}

SpectralDensity SpectralDensity::white_noise(double level) {
    return SpectralDensity(RationalAR{{}, level});
}

SpectralDensity SpectralDensity::ar1(cplx alpha, double sigma2) {
    return SpectralDensity(RationalAR{{alpha}, sigma2});
}

bool SpectralDensity::is_real() const noexcept {
    return std::visit(overloaded{
                          [](const RationalAR& ar) {
                              return std::all_of(ar.alpha.begin(), ar.alpha.end(),
                                                 [](cplx a) { return a.imag() == 0.0; });
                          },
                          [](const InversePolynomial& ip) {
                              const auto v = ip.b.values();
                              return std::all_of(v.begin(), v.end(), [](cplx x) { return x.imag() == 0.0; });
                          },
                          [](const Tabulated& t) {
                              const std::size_t n = t.values.size();
                              for (std::size_t k = 1; k < n; ++k) {
                                  if (t.values[k] != t.values[n - k]) return false;
                              }
                              return true;
                          },
                      },
                      v_);
}

std::size_t SpectralDensity::native_grid() const noexcept {
    if (const auto* t = std::get_if<Tabulated>(&v_)) return t->values.size();
    return 0;
}

std::vector<double> SpectralDensity::values(std::size_t grid_size) const {
    require_grid(*this, grid_size);
    if (const auto* t = std::get_if<Tabulated>(&v_)) return t->values;
    auto inv = inverse_values(grid_size);
    for (auto& x : inv) x = 1.0 / x;
    return inv;
}

std::vector<double> SpectralDensity::inverse_values(std::size_t grid_size) const {
    require_grid(*this, grid_size);
    return std::visit(overloaded{
                          [&](const RationalAR& ar) { return ar_inverse_values(ar, grid_size); },
                          [&](const InversePolynomial& ip) { return ip.b.evaluate_real(grid_size); },
                          [&](const Tabulated& t) {
                              std::vector<double> out(t.values.size());
                              for (std::size_t k = 0; k < out.size(); ++k) out[k] = 1.0 / t.values[k];
                              return out;
                          },
                      },
                      v_);
}

void check_positive(const SpectralDensity& f, std::size_t grid_size) {
    require_grid(f, grid_size);
    if (const auto* t = std::get_if<Tabulated>(&f.variant())) {
        require_positive_min(t->values, "f");
        return;
    }
    const auto inv = f.inverse_values(grid_size);
    require_positive_min(inv, "1/f");
    if (const auto* ip = std::get_if<InversePolynomial>(&f.variant())) {
        const auto c = ip->b.evaluate(grid_size);
        double mx = 0.0;
        for (const auto& x : c) mx = std::max(mx, std::abs(x.imag()));
        if (mx > 1e-10) fail(ErrorCode::InvalidParameters, "1/f has a non-negligible imaginary part");
    }
}

FourierCoeffs inverse_fourier_coeffs(const SpectralDensity& f, int half_length, std::size_t grid_size) {
    if (half_length < 0) fail(ErrorCode::InvalidParameters, "negative truncation");
    check_positive(f, grid_size);
    return std::visit(overloaded{
                          [&](const RationalAR& ar) {
                              const auto nonneg = ar_inverse_coeffs(ar);
                              return fit_half_length(nonneg, half_length);
                          },
                          [&](const InversePolynomial& ip) {
                              const int L = ip.b.half_length();
                              std::vector<cplx> nonneg(L + 1);
                              for (int m = 0; m <= L; ++m) nonneg[m] = ip.b.value(m);
                              return fit_half_length(nonneg, half_length);
                          },
                          [&](const Tabulated&) {
                              if (grid_size < 4 * static_cast<std::size_t>(half_length)) {
                                  fail(ErrorCode::InvalidParameters, "grid must hold at least 4L points");
                              }
                              const auto inv = f.inverse_values(grid_size);
                              auto c = grid::fourier_coeffs(std::span<const double>(inv), half_length);
                              FourierCoeffs b(std::move(c));
                              if (std::abs(b.value(half_length)) > kTailThreshold * std::abs(b.value(0))) {
                                  fail(ErrorCode::TruncationTooShort,
                                       "|b(L)|/|b(0)| = " +
                                           std::to_string(std::abs(b.value(half_length)) / std::abs(b.value(0))));
                              }
                              return b;
                          },
                      },
                      f.variant());
}

double minimality_value(const SpectralDensity& f, std::size_t grid_size) {
    check_positive(f, grid_size);
    return std::visit(overloaded{
                          [](const RationalAR& ar) { return ar_inverse_coeffs(ar)[0].real(); },
                          [](const InversePolynomial& ip) { return ip.b.value(0).real(); },
                          [&](const Tabulated&) {
                              const auto inv = f.inverse_values(grid_size);
                              double s = 0.0;
                              for (double x : inv) s += x;
                              return s / static_cast<double>(inv.size());
                          },
                      },
                      f.variant());
}

std::vector<cplx> covariances(const SpectralDensity& f, int max_lag, std::size_t grid_size) {
    if (max_lag < 0 || static_cast<std::size_t>(4 * max_lag) > grid_size) {
        fail(ErrorCode::LagOutOfRange, "covariance lag must satisfy |n| <= G/4");
    }
    check_positive(f, grid_size);
    const auto vals = f.values(grid_size);
    const auto c = grid::fourier_coeffs(std::span<const double>(vals), max_lag);
    std::vector<cplx> r(max_lag + 1);
    for (int n = 0; n <= max_lag; ++n) r[n] = c[max_lag - n];
    r[0] = r[0].real();
    return r;
}

cplx covariance(const SpectralDensity& f, int lag, std::size_t grid_size) {
    const auto r = covariances(f, std::abs(lag), grid_size);
    return lag >= 0 ? r[lag] : std::conj(r[-lag]);
}

Factorization factorize_inverse(const FourierCoeffs& b, std::span<const int> mask, std::size_t grid_size) {
    const double b0 = std::abs(b.value(0));
    const auto target = b.evaluate_real(grid_size);
    {
        double mx = 0.0;
        double mn = std::numeric_limits<double>::infinity();
        for (double x : target) {
            mx = std::max(mx, x);
            mn = std::min(mn, x);
        }
        if (!(mx > 0.0) || mn <= kPositivityTolerance * mx) {
            fail(ErrorCode::NotPositive, "trigonometric polynomial minimum " + std::to_string(mn) + " is not positive");
        }
    }
    const int n = b.effective_half_length(1e-14 * b0);
    std::vector<cplx> gamma{cplx(std::sqrt(b0))};
    if (n > 0) {
        // z^n P(z), coefficients q_k = b(k - n)
        const int deg = 2 * n;
        std::vector<cplx> q(deg + 1);
        for (int k = 0; k <= deg; ++k) q[k] = b.value(k - n);
        Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
        for (int j = 0; j < deg; ++j) companion(0, j) = -q[deg - 1 - j] / q[deg];
        for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion, false);
        if (es.info() != Eigen::Success) fail(ErrorCode::NotPositive, "root finding failed");
        std::vector<cplx> roots(es.eigenvalues().data(), es.eigenvalues().data() + deg);
        for (auto& z : roots) {
            for (int it = 0; it < 3; ++it) {
                cplx d;
                const cplx p = horner(q, z, &d);
                if (std::abs(d) == 0.0) break;
                const cplx z_new = z - p / d;
                if (std::abs(horner(q, z_new, nullptr)) >= std::abs(p)) break;
                z = z_new;
            }
        }
        std::sort(roots.begin(), roots.end(), [](cplx a, cplx c) { return std::abs(a) < std::abs(c); });
        if (!(std::abs(roots[n - 1]) < 1.0 - 1e-8 && std::abs(roots[n]) > 1.0 + 1e-8)) {
            fail(ErrorCode::NotPositive, "roots do not separate across the unit circle");
        }
        std::vector<cplx> g{1.0};
        for (int j = 0; j < n; ++j) {
            std::vector<cplx> next(g.size() + 1, cplx{});
            for (std::size_t i = 0; i < g.size(); ++i) {
                next[i] += g[i];
                next[i + 1] -= roots[j] * g[i];
            }
            g = std::move(next);
        }
        double energy = 0.0;
        for (const auto& x : g) energy += std::norm(x);
        const double scale = std::sqrt(b0 / energy);
        gamma.resize(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) gamma[i] = scale * g[i];
        if (relative_error(power_of_factor(gamma, grid_size), target) > 1e-12) refine_factor(gamma, b);
    }

    Factorization out;
    out.reconstruction_error = relative_error(power_of_factor(gamma, grid_size), target);
    if (out.reconstruction_error > 1e-8) {
        fail(ErrorCode::NotPositive, "factorization reconstruction error " + std::to_string(out.reconstruction_error));
    }
    gamma.resize(std::max<std::size_t>(gamma.size(), static_cast<std::size_t>(b.half_length()) + 1), cplx{});
    out.gamma = std::move(gamma);
    out.mask.assign(mask.begin(), mask.end());
    const double tol = 1e-8 * std::max(1.0, std::sqrt(b0));
    for (int idx : mask) {
        if (idx >= 0 && idx < static_cast<int>(out.gamma.size()) && std::abs(out.gamma[idx]) > tol) {
            fail(ErrorCode::MaskViolation, "gamma_" + std::to_string(idx) + " = " +
                                               std::to_string(std::abs(out.gamma[idx])) + " is masked");
        }
    }
    return out;
}

}  // namespace gapinterp
