#include "gapinterp/patterns.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gapinterp/error.hpp"

namespace gapinterp {

std::string to_string(PatternKind kind) {
    switch (kind) {
        case PatternKind::S1: return "S1";
        case PatternKind::S2: return "S2";
        case PatternKind::S3: return "S3";
        case PatternKind::S4: return "S4";
        case PatternKind::S5: return "S5";
        case PatternKind::S6: return "S6";
    }
    return "?";
}

PatternKind parse_pattern_kind(const std::string& name) {
    for (auto k : {PatternKind::S1, PatternKind::S2, PatternKind::S3, PatternKind::S4, PatternKind::S5,
                   PatternKind::S6}) {
        if (to_string(k) == name) return k;
    }
    fail(ErrorCode::ConfigError, "unknown pattern kind '" + name + "'");
}

ObservationPattern::ObservationPattern(PatternKind kind, int M1, int N, int M2, int N1, int N2, int T)
    : kind_(kind), M1_(M1), N_(N), M2_(M2), N1_(N1), N2_(N2), T_(T) {
    auto require = [](bool ok, const char* msg) {
        if (!ok) fail(ErrorCode::InvalidParameters, msg);
    };
    require(N_ >= 0, "N must be >= 0");
    if (has_left()) require(M1_ >= 1, "M1 must be >= 1");
    if (has_right()) require(M2_ >= 1, "M2 must be >= 1");
    if (infinite()) require(T_ >= 1, "truncation T must be >= 1");
    if (kind_ == PatternKind::S4 || kind_ == PatternKind::S6) require(N1_ >= 0, "N1 must be >= 0");
    if (kind_ == PatternKind::S5 || kind_ == PatternKind::S6) require(N2_ >= 0, "N2 must be >= 0");
}

ObservationPattern ObservationPattern::s1(int M1, int N, int T) { return {PatternKind::S1, M1, N, 0, 0, 0, T}; }
ObservationPattern ObservationPattern::s2(int N, int M2, int T) { return {PatternKind::S2, 0, N, M2, 0, 0, T}; }
ObservationPattern ObservationPattern::s3(int M1, int N, int M2, int T) {
    return {PatternKind::S3, M1, N, M2, 0, 0, T};
}
ObservationPattern ObservationPattern::s4(int M1, int N, int N1) { return {PatternKind::S4, M1, N, 0, N1, 0, 0}; }
ObservationPattern ObservationPattern::s5(int N, int M2, int N2) { return {PatternKind::S5, 0, N, M2, 0, N2, 0}; }
ObservationPattern ObservationPattern::s6(int M1, int N, int N1, int M2, int N2) {
    return {PatternKind::S6, M1, N, M2, N1, N2, 0};
}

bool ObservationPattern::infinite() const noexcept {
    return kind_ == PatternKind::S1 || kind_ == PatternKind::S2 || kind_ == PatternKind::S3;
}

bool ObservationPattern::has_left() const noexcept {
    return kind_ == PatternKind::S1 || kind_ == PatternKind::S3 || kind_ == PatternKind::S4 ||
           kind_ == PatternKind::S6;
}

bool ObservationPattern::has_right() const noexcept {
    return kind_ == PatternKind::S2 || kind_ == PatternKind::S3 || kind_ == PatternKind::S5 ||
           kind_ == PatternKind::S6;
}

bool ObservationPattern::left_infinite() const noexcept {
    return kind_ == PatternKind::S1 || kind_ == PatternKind::S3;
}

bool ObservationPattern::right_infinite() const noexcept {
    return kind_ == PatternKind::S2 || kind_ == PatternKind::S3;
}

int ObservationPattern::left_size() const noexcept {
    if (!has_left()) return 0;
    return left_infinite() ? T_ : N1_;
}

int ObservationPattern::right_size() const noexcept {
    if (!has_right()) return 0;
    return right_infinite() ? T_ : N2_;
}

ObservationPattern ObservationPattern::with_truncation(int T) const {
    if (!infinite()) fail(ErrorCode::InvalidParameters, "truncation applies to S1-S3 only");
    return {kind_, M1_, N_, M2_, N1_, N2_, T};
}

bool ObservationPattern::is_missing(long j) const noexcept {
    if (j >= 0 && j <= N_) return true;
    if (has_left() && j <= -M1_ - 1 && (left_infinite() || j >= -static_cast<long>(M1_) - N1_)) return true;
    if (has_right() && j >= static_cast<long>(N_) + M2_ + 1 &&
        (right_infinite() || j <= static_cast<long>(N_) + M2_ + N2_)) {
        return true;
    }
    return false;
}

std::vector<int> ObservationPattern::missing_indices() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (int j = 0; j <= N_; ++j) out.push_back(j);
    for (int t = 0; t < left_size(); ++t) out.push_back(-M1_ - 1 - t);
    for (int t = 0; t < right_size(); ++t) out.push_back(N_ + M2_ + 1 + t);
    return out;
}

std::string ObservationPattern::describe() const {
    std::ostringstream os;
    os << to_string(kind_) << "(";
    if (has_left()) os << "M1=" << M1_ << ",";
    os << "N=" << N_;
    if (kind_ == PatternKind::S4 || kind_ == PatternKind::S6) os << ",N1=" << N1_;
    if (has_right()) os << ",M2=" << M2_;
    if (kind_ == PatternKind::S5 || kind_ == PatternKind::S6) os << ",N2=" << N2_;
    if (infinite()) os << ",T=" << T_;
    os << ")";
    return os.str();
}

std::vector<int> missing_indices(const ObservationPattern& p) { return p.missing_indices(); }

FunctionalWeights FunctionalWeights::explicit_values(std::map<int, cplx> values) {
    FunctionalWeights w;
    w.kind_ = Kind::Explicit;
    w.values_ = std::move(values);
    w.explicit_ = true;
    return w;
}

FunctionalWeights FunctionalWeights::geometric(cplx C, double rho) {
    if (!(rho > 0.0 && rho < 1.0)) fail(ErrorCode::InvalidParameters, "geometric weights need 0 < rho < 1");
    FunctionalWeights w;
    w.kind_ = Kind::Geometric;
    w.C_ = C;
    w.rho_ = rho;
    w.decay_ = std::make_pair(std::abs(C), rho);
    return w;
}

FunctionalWeights FunctionalWeights::constant(cplx value) {
    FunctionalWeights w;
    w.kind_ = Kind::Constant;
    w.C_ = value;
    return w;
}

cplx FunctionalWeights::operator()(int j) const {
    switch (kind_) {
        case Kind::Explicit: {
            const auto it = values_.find(j);
            return it == values_.end() ? cplx{} : it->second;
        }
        case Kind::Geometric: return C_ * std::pow(rho_, std::abs(j));
        case Kind::Constant: return C_;
    }
    return {};
}

bool FunctionalWeights::is_real() const {
    if (kind_ != Kind::Explicit) return C_.imag() == 0.0;
    for (const auto& [j, v] : values_) {
        if (v.imag() != 0.0) return false;
    }
    return true;
}

CVector weight_vector(const FunctionalWeights& w, const ObservationPattern& p) {
    const auto idx = p.missing_indices();
    if (const auto* m = w.explicit_map()) {
        const int lo = idx.empty() ? 0 : *std::min_element(idx.begin(), idx.end());
        const int hi = idx.empty() ? 0 : *std::max_element(idx.begin(), idx.end());
        for (const auto& [j, v] : *m) {
            if (!p.is_missing(j)) {
                fail(ErrorCode::SupportMismatch, "weight at j=" + std::to_string(j) + " is not in the missing set");
            }
            if ((j < lo || j > hi) && v != cplx{}) {
                fail(ErrorCode::SupportMismatch,
                     "weight at j=" + std::to_string(j) + " lies beyond the truncation T=" + std::to_string(p.T()));
            }
        }
    } else if (p.infinite() && !w.has_decay()) {
        fail(ErrorCode::InvalidParameters, "infinite patterns need weights with declared geometric decay");
    }
    CVector a(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t u = 0; u < idx.size(); ++u) a(static_cast<Eigen::Index>(u)) = w(idx[u]);
    return a;
}

double tail_bound(const FunctionalWeights& w, const ObservationPattern& p) {
    if (!p.infinite()) return 0.0;
    if (w.explicit_map()) return 0.0;
    const auto d = w.decay();
    if (!d) fail(ErrorCode::InvalidParameters, "infinite patterns need weights with declared geometric decay");
    return d->first * std::pow(d->second, p.T() + 1);
}

double tail_mass_fraction(const FunctionalWeights& w, const ObservationPattern& p) {
    if (!p.infinite() || w.explicit_map()) return 0.0;
    const auto d = w.decay();
    if (!d) fail(ErrorCode::InvalidParameters, "infinite patterns need weights with declared geometric decay");
    const double C2 = d->first * d->first;
    const double r2 = d->second * d->second;
    double omitted = 0.0;
    if (p.left_infinite()) omitted += C2 * std::pow(r2, p.M1() + p.T() + 1) / (1.0 - r2);
    if (p.right_infinite()) omitted += C2 * std::pow(r2, p.N() + p.M2() + p.T() + 1) / (1.0 - r2);
    const double kept = weight_vector(w, p).squaredNorm();
    const double total = kept + omitted;
    return total > 0.0 ? omitted / total : 0.0;
}

}  // namespace gapinterp
