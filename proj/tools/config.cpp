#include "config.hpp"

#include <fstream>
#include <set>

#include "gapinterp/error.hpp"

namespace gapinterp::cli {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    fail(ErrorCode::ConfigError, where + ": " + what);
}

const json& need(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) bad(where, std::string("missing key '") + key + "'");
    return j.at(key);
}

void known_keys(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
    if (!j.is_object()) bad(where, "expected an object");
    std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& [k, v] : j.items()) {
        if (!ok.contains(k)) bad(where, "unknown key '" + k + "'");
    }
}

double number(const json& j, const std::string& where) {
    if (!j.is_number()) bad(where, "expected a number");
    return j.get<double>();
}

int integer(const json& j, const std::string& where) {
    if (!j.is_number_integer()) bad(where, "expected an integer");
    return j.get<int>();
}

// number, [re, im] or {"re": .., "im": ..}
cplx complex_value(const json& j, const std::string& where) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2) return {number(j[0], where), number(j[1], where)};
    if (j.is_object()) {
        known_keys(j, {"re", "im"}, where);
        return {j.contains("re") ? number(j["re"], where) : 0.0, j.contains("im") ? number(j["im"], where) : 0.0};
    }
    bad(where, "expected a number or [re, im]");
}

std::vector<cplx> complex_list(const json& j, const std::string& where) {
    if (!j.is_array()) bad(where, "expected an array");
    std::vector<cplx> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(complex_value(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<double> real_list(const json& j, const std::string& where) {
    if (!j.is_array()) bad(where, "expected an array");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

std::size_t check_grid(const SpectralDensity& f, std::size_t grid) {
    return f.native_grid() ? f.native_grid() : grid;
}

}  // namespace

SpectralDensity parse_density(const json& j) {
    const std::string type = need(j, "type", "density").is_string() ? j["type"].get<std::string>() : "";
    if (type == "rational_ar") {
        known_keys(j, {"type", "alpha", "sigma2"}, "density");
        RationalAR ar;
        ar.alpha = complex_list(need(j, "alpha", "density"), "density.alpha");
        if (j.contains("sigma2")) ar.sigma2 = number(j["sigma2"], "density.sigma2");
        if (!(ar.sigma2 > 0.0)) bad("density.sigma2", "must be positive");
        return SpectralDensity(std::move(ar));
    }
    if (type == "inverse_poly") {
        known_keys(j, {"type", "coeffs"}, "density");
        const auto c = complex_list(need(j, "coeffs", "density"), "density.coeffs");
        if (c.empty()) bad("density.coeffs", "needs b(0)");
        return SpectralDensity(InversePolynomial{FourierCoeffs::from_nonnegative(std::span<const cplx>(c))});
    }
    if (type == "tabulated") {
        known_keys(j, {"type", "values"}, "density");
        auto v = real_list(need(j, "values", "density"), "density.values");
        if (v.empty()) bad("density.values", "empty table");
        return SpectralDensity(Tabulated{std::move(v)});
    }
    bad("density.type", "expected rational_ar, inverse_poly or tabulated");
}

ObservationPattern parse_pattern(const json& j) {
    known_keys(j, {"kind", "M1", "N", "N1", "M2", "N2", "T"}, "pattern");
    const auto& k = need(j, "kind", "pattern");
    if (!k.is_string()) bad("pattern.kind", "expected a string");
    const PatternKind kind = parse_pattern_kind(k.get<std::string>());
    auto get = [&](const char* key) { return j.contains(key) ? integer(j[key], std::string("pattern.") + key) : 0; };
    const int M1 = get("M1"), N = get("N"), N1 = get("N1"), M2 = get("M2"), N2 = get("N2"), T = get("T");
    switch (kind) {
        case PatternKind::S1: return ObservationPattern::s1(M1, N, T);
        case PatternKind::S2: return ObservationPattern::s2(N, M2, T);
        case PatternKind::S3: return ObservationPattern::s3(M1, N, M2, T);
        case PatternKind::S4: return ObservationPattern::s4(M1, N, N1);
        case PatternKind::S5: return ObservationPattern::s5(N, M2, N2);
        case PatternKind::S6: return ObservationPattern::s6(M1, N, N1, M2, N2);
    }
    bad("pattern.kind", "unknown kind");
}

FunctionalWeights parse_weights(const json& j) {
    if (!j.is_object() || j.size() != 1) bad("weights", "expected exactly one of values, geometric, constant");
    if (j.contains("values")) {
        const auto& v = j["values"];
        if (!v.is_object()) bad("weights.values", "expected an object keyed by index");
        std::map<int, cplx> m;
        for (const auto& [key, val] : v.items()) {
            std::size_t used = 0;
            int idx = 0;
            try {
                idx = std::stoi(key, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != key.size()) bad("weights.values", "index '" + key + "' is not an integer");
            m[idx] = complex_value(val, "weights.values." + key);
        }
        return FunctionalWeights::explicit_values(std::move(m));
    }
    if (j.contains("geometric")) {
        const auto& g = j["geometric"];
        known_keys(g, {"C", "rho"}, "weights.geometric");
        const cplx C = g.contains("C") ? complex_value(g["C"], "weights.geometric.C") : cplx(1.0);
        return FunctionalWeights::geometric(C, number(need(g, "rho", "weights.geometric"), "weights.geometric.rho"));
    }
    if (j.contains("constant")) return FunctionalWeights::constant(complex_value(j["constant"], "weights.constant"));
    bad("weights", "expected one of values, geometric, constant");
}

DensityClass parse_class(const json& j) {
    const std::string type = need(j, "type", "class").is_string() ? j["type"].get<std::string>() : "";
    if (type == "d0minus") {
        known_keys(j, {"type", "p"}, "class");
        return D0Minus{number(need(j, "p", "class"), "class.p")};
    }
    if (type == "dw") {
        known_keys(j, {"type", "b"}, "class");
        return DW{real_list(need(j, "b", "class"), "class.b")};
    }
    if (type == "dvu") {
        known_keys(j, {"type", "v", "u", "p"}, "class");
        return DVU{parse_density(need(j, "v", "class")), parse_density(need(j, "u", "class")),
                   number(need(j, "p", "class"), "class.p")};
    }
    bad("class.type", "expected d0minus, dw or dvu");
}

Options parse_options(const json& j, Options o) {
    known_keys(j, {"grid", "truncation", "seed", "window", "replicates", "path_replicates", "samples", "method"},
               "options");
    auto positive = [&](const char* key) {
        const int v = integer(j[key], std::string("options.") + key);
        if (v <= 0) bad(std::string("options.") + key, "must be positive");
        return static_cast<std::size_t>(v);
    };
    if (j.contains("grid")) o.grid = positive("grid");
    if (j.contains("window")) o.window = static_cast<int>(positive("window"));
    if (j.contains("replicates")) o.replicates = positive("replicates");
    if (j.contains("samples")) o.samples = positive("samples");
    if (j.contains("path_replicates")) {
        const int v = integer(j["path_replicates"], "options.path_replicates");
        if (v < 0) bad("options.path_replicates", "must be >= 0");
        o.path_replicates = static_cast<std::size_t>(v);
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) bad("options.seed", "expected a nonnegative integer");
        o.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("truncation")) {
        const auto& t = j["truncation"];
        if (!t.is_array() || t.empty()) bad("options.truncation", "expected a nonempty array");
        o.truncation.clear();
        for (const auto& x : t) o.truncation.push_back(integer(x, "options.truncation"));
    }
    if (j.contains("method")) {
        if (!j["method"].is_string()) bad("options.method", "expected a string");
        o.method = j["method"].get<std::string>();
    }
    if (o.method != "auto" && o.method != "closed_form" && o.method != "numerical") {
        bad("options.method", "expected auto, closed_form or numerical");
    }
    for (int T : o.truncation) {
        if (T < 1) bad("options.truncation", "entries must be >= 1");
    }
    return o;
}

ExperimentConfig parse_config(const json& j) {
    known_keys(j, {"density", "pattern", "weights", "class", "options"}, "config");
    ExperimentConfig c;
    if (j.contains("options")) c.options = parse_options(j["options"]);
    if (j.contains("density")) {
        c.density = parse_density(j["density"]);
        check_positive(*c.density, check_grid(*c.density, c.options.grid));
    }
    if (j.contains("pattern")) c.pattern = parse_pattern(j["pattern"]);
    if (j.contains("weights")) c.weights = parse_weights(j["weights"]);
    if (j.contains("class")) {
        c.cls = parse_class(j["class"]);
        validate(*c.cls, c.options.grid);
    }
    if (c.pattern && c.weights) {
        const auto p = c.pattern->infinite() ? c.pattern->with_truncation(c.options.truncation.front()) : *c.pattern;
        (void)weight_vector(*c.weights, p);
    }
    return c;
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::ConfigError, "cannot open config '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        fail(ErrorCode::ConfigError, path + ": " + e.what());
    }
    return j;
}

ExperimentConfig load_config(const std::string& path) { return parse_config(read_json(path)); }

}  // namespace gapinterp::cli
