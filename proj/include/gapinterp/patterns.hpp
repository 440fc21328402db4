#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gapinterp/types.hpp"

namespace gapinterp {

enum class PatternKind { S1, S2, S3, S4, S5, S6 };

std::string to_string(PatternKind kind);
PatternKind parse_pattern_kind(const std::string& name);

// Observation geometry. Missing set K:
//   central block {0..N}
//   left block  {-M1-1, -M1-2, ...}   (N1 points, or T points for S1/S3)
//   right block {N+M2+1, N+M2+2, ...} (N2 points, or T points for S2/S3)
// Block lengths of zero are accepted so that S6 can degenerate to S4/S5.
class ObservationPattern {
public:
    static ObservationPattern s1(int M1, int N, int T);
    static ObservationPattern s2(int N, int M2, int T);
    static ObservationPattern s3(int M1, int N, int M2, int T);
    static ObservationPattern s4(int M1, int N, int N1);
    static ObservationPattern s5(int N, int M2, int N2);
    static ObservationPattern s6(int M1, int N, int N1, int M2, int N2);

    PatternKind kind() const noexcept { return kind_; }
    int M1() const noexcept { return M1_; }
    int N() const noexcept { return N_; }
    int M2() const noexcept { return M2_; }
    int N1() const noexcept { return N1_; }
    int N2() const noexcept { return N2_; }
    int T() const noexcept { return T_; }

    bool infinite() const noexcept;
    bool has_left() const noexcept;
    bool has_right() const noexcept;
    bool left_infinite() const noexcept;
    bool right_infinite() const noexcept;

    int left_size() const noexcept;   // after truncation
    int right_size() const noexcept;  // after truncation
    int size() const noexcept { return N_ + 1 + left_size() + right_size(); }

    ObservationPattern with_truncation(int T) const;

    // Membership in K for the untruncated geometry.
    bool is_missing(long j) const noexcept;

    // Canonical ordering: central ascending, left descending from -M1-1, right ascending from N+M2+1.
    std::vector<int> missing_indices() const;

    std::string describe() const;

private:
    ObservationPattern(PatternKind kind, int M1, int N, int M2, int N1, int N2, int T);

    PatternKind kind_;
    int M1_ = 0;
    int N_ = 0;
    int M2_ = 0;
    int N1_ = 0;
    int N2_ = 0;
    int T_ = 0;
};

std::vector<int> missing_indices(const ObservationPattern& p);

// Target functional weights a(j), j in K.
class FunctionalWeights {
public:
    static FunctionalWeights explicit_values(std::map<int, cplx> values);
    // a(j) = C * rho^|j|
    static FunctionalWeights geometric(cplx C, double rho);
    static FunctionalWeights constant(cplx value);

    cplx operator()(int j) const;

    bool has_decay() const noexcept { return decay_.has_value(); }
    // Declared envelope |a(j)| <= C rho^|j|, when known.
    std::optional<std::pair<double, double>> decay() const noexcept { return decay_; }
    const std::map<int, cplx>* explicit_map() const noexcept { return explicit_ ? &values_ : nullptr; }
    bool is_real() const;

private:
    enum class Kind { Explicit, Geometric, Constant };
    Kind kind_ = Kind::Constant;
    std::map<int, cplx> values_;
    cplx C_{1.0};
    double rho_ = 0.0;
    bool explicit_ = false;
    std::optional<std::pair<double, double>> decay_;
};

// a in canonical order. Throws SupportMismatch for weights outside K, InvalidParameters
// when an infinite pattern is paired with weights lacking geometric decay.
CVector weight_vector(const FunctionalWeights& w, const ObservationPattern& p);

// C * rho^(T+1) for infinite patterns, 0 for finite ones.
double tail_bound(const FunctionalWeights& w, const ObservationPattern& p);

// Omitted l2 mass beyond the truncation relative to the total, bounded via the declared envelope.
double tail_mass_fraction(const FunctionalWeights& w, const ObservationPattern& p);

}  // namespace gapinterp
