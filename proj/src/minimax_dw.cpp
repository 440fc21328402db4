#include <cmath>
#include <map>
#include <string>

#include "minimax_common.hpp"

namespace gapinterp {

namespace {

Eigen::VectorXd real_weights(const ObservationPattern& p, const FunctionalWeights& w) {
    const CVector a = weight_vector(w, p);
    Eigen::VectorXd out(a.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a(i).imag() != 0.0) fail(ErrorCode::InvalidParameters, "DW needs real weights");
        out(i) = a(i).real();
    }
    return out;
}

struct BilinearSystem {
    std::vector<int> t;
    Eigen::VectorXd a;
    std::vector<double> known;  // b(0..W)
    std::map<int, Eigen::Index> unknown;  // lag -> position among the unknown lags
    Eigen::Index np = 0;  // W_k + 1

    double lag_value(int lag, const Eigen::VectorXd& x) const {
        lag = std::abs(lag);
        if (lag < static_cast<int>(known.size())) return known[static_cast<std::size_t>(lag)];
        return x(np + unknown.at(lag));
    }

    Eigen::MatrixXd gram(const Eigen::VectorXd& x) const {
        const auto n = static_cast<Eigen::Index>(t.size());
        Eigen::MatrixXd B(n, n);
        for (Eigen::Index u = 0; u < n; ++u) {
            for (Eigen::Index v = 0; v < n; ++v) B(u, v) = lag_value(t[u] - t[v], x);
        }
        return B;
    }

    Eigen::VectorXd residual(const Eigen::VectorXd& x) const {
        const Eigen::MatrixXd B = gram(x);
        return B.leftCols(np) * x.head(np) - a;
    }

    Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const {
        const auto n = static_cast<Eigen::Index>(t.size());
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, x.size());
        const Eigen::MatrixXd B = gram(x);
        J.leftCols(np) = B.leftCols(np);
        for (Eigen::Index u = 0; u < n; ++u) {
            for (Eigen::Index v = 0; v < np; ++v) {
                const int lag = std::abs(t[u] - t[v]);
                if (lag < static_cast<int>(known.size())) continue;
                J(u, np + unknown.at(lag)) += x(v);
            }
        }
        return J;
    }
};

}  // namespace

int dw_cutoff(const ObservationPattern& p, int W) {
    if (W < 0) fail(ErrorCode::InvalidParameters, "W must be >= 0");
    const int N = p.N(), M1 = p.M1(), N1 = p.N1(), M2 = p.M2(), N2 = p.N2();
    switch (p.kind()) {
        case PatternKind::S4:
            if (M1 < N) fail(ErrorCode::NotCovered, "DW analysis of S4 assumes M1 >= N");
            if (W <= N) return W;
            if (W <= M1) return N;
            if (W < M1 + N1) return N + W - M1;
            return N + N1;
        case PatternKind::S5:
            if (W <= N) return W;
            if (W <= N + M2) return N;
            if (W < N + M2 + N2) return W - M2;
            return N + N2;
        case PatternKind::S6:
            if (M1 < N || N + M2 < M1 + N1) {
                fail(ErrorCode::NotCovered, "DW analysis of S6 assumes M1 >= N and N + M2 >= M1 + N1");
            }
            if (W <= N) return W;
            if (W <= M1) return N;
            if (W <= M1 + N1) return N + W - M1;
            if (W <= N + M2) return N + N1;
            if (W < N + M2 + N2) return N1 + W - M2;
            return N + N1 + N2;
        default: break;
    }
    fail(ErrorCode::NotCovered, "DW closed analysis covers S4, S5 and S6 only");
}

bool dw_degenerate(const ObservationPattern& p, int W) {
    return W >= detail::span_of(p.missing_indices());
}

LeastFavourableResult lf_dW(const ObservationPattern& p, const FunctionalWeights& w, const DW& cls,
                            const MinimaxOptions& opts) {
    validate(cls, opts.grid);
    const int W = cls.W();
    const int Wk = dw_cutoff(p, W);

    LeastFavourableResult r;
    r.grid = opts.grid;
    r.indices = p.missing_indices();
    const Eigen::VectorXd a = real_weights(p, w);
    r.a = a.cast<cplx>();
    r.validity.closed_form_applicable = true;
    r.validity.bounds_ok = true;

    if (dw_degenerate(p, W)) {
        r.mechanism = Mechanism::DegenerateAR;
        r.validity.degenerate = true;
        r.b0 = FourierCoeffs::from_nonnegative(std::span<const double>(cls.b));
        const auto inv = r.b0.evaluate_real(opts.grid);
        r.validity.positivity_ok = detail::inverse_positive(inv, cls.b[0]);
        detail::finish_by_solve(r, inv);
        return r;
    }

    BilinearSystem sys;
    sys.t = r.indices;
    sys.a = a;
    sys.known = cls.b;
    sys.np = Wk + 1;
    NewtonDiagnostics diag;
    diag.W_k = Wk;
    for (std::size_t u = 0; u < sys.t.size(); ++u) {
        for (std::size_t v = 0; v < u; ++v) {
            const int lag = std::abs(sys.t[u] - sys.t[v]);
            if (lag > W && !sys.unknown.contains(lag)) sys.unknown.emplace(lag, 0);
        }
    }
    Eigen::Index pos = 0;
    for (auto& [lag, idx] : sys.unknown) {
        idx = pos++;
        diag.unknown_lags.push_back(lag);
    }

    Eigen::VectorXd x = Eigen::VectorXd::Zero(sys.np + pos);
    {
        const Eigen::MatrixXd B = sys.gram(x);
        x.head(sys.np) = B.topLeftCorner(sys.np, sys.np).completeOrthogonalDecomposition().solve(a.head(sys.np));
    }
    const double target = 1e-10 * std::max(1.0, a.cwiseAbs().maxCoeff());
    Eigen::VectorXd res = sys.residual(x);
    double rn = res.cwiseAbs().maxCoeff();
    int it = 0;
    for (; it < 100 && rn >= target; ++it) {
        const Eigen::VectorXd dx = sys.jacobian(x).completeOrthogonalDecomposition().solve(-res);
        double s = 1.0;
        bool moved = false;
        for (int h = 0; h < 40; ++h, s *= 0.5) {
            const Eigen::VectorXd x2 = x + s * dx;
            const Eigen::VectorXd r2 = sys.residual(x2);
            if (r2.norm() < res.norm()) {
                x = x2;
                res = r2;
                rn = res.cwiseAbs().maxCoeff();
                moved = true;
                break;
            }
        }
        if (!moved) break;
    }
    diag.iterations = it;
    diag.residual = rn;
    r.newton = diag;
    if (rn >= target) {
        r.mechanism = Mechanism::Newton;
        r.validity.converged = false;
        throw LfConvergenceError(ErrorCode::NewtonNotConverged,
                                 "residual " + std::to_string(rn) + " after " + std::to_string(it) + " iterations",
                                 r);
    }

    const int L = detail::span_of(r.indices);
    std::vector<double> nonneg(static_cast<std::size_t>(L) + 1, 0.0);
    for (int m = 0; m <= L; ++m) {
        if (m <= W) {
            nonneg[static_cast<std::size_t>(m)] = cls.b[static_cast<std::size_t>(m)];
        } else if (sys.unknown.contains(m)) {
            nonneg[static_cast<std::size_t>(m)] = x(sys.np + sys.unknown.at(m));
        }
    }
    r.mechanism = Mechanism::Newton;
    r.b0 = FourierCoeffs::from_nonnegative(std::span<const double>(nonneg));
    const auto inv = r.b0.evaluate_real(opts.grid);
    r.validity.positivity_ok = detail::inverse_positive(inv, cls.b[0]);
    CVector c = CVector::Zero(a.size());
    for (Eigen::Index v = 0; v < sys.np; ++v) c(v) = x(v);
    r.lagrange.assign(c.data(), c.data() + sys.np);
    detail::finish_from_solution(r, c, inv);
    return r;
}

}  // namespace gapinterp
