#include "commands.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gapinterp/error.hpp"
#include "gapinterp/grid.hpp"
#include "gapinterp/interpolator.hpp"
#include "gapinterp/minimax.hpp"
#include "gapinterp/oracle.hpp"

namespace gapinterp::cli {

namespace {

namespace fs = std::filesystem;

std::string num(double x) {
    if (!std::isfinite(x)) return "null";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_json(std::ostream& os, const json& j, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            bool first = true;
            for (const auto& [k, v] : j.items()) {
                if (!first) os << ",\n";
                first = false;
                os << inner << json(k).dump() << ": ";
                write_json(os, v, indent + 1);
            }
            os << "\n" << pad << "}";
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            // short arrays of scalars on one line
            const bool flat = std::all_of(j.begin(), j.end(), [](const json& x) { return x.is_primitive(); });
            os << (flat ? "[" : "[\n");
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) os << (flat ? ", " : ",\n");
                if (!flat) os << inner;
                write_json(os, j[i], indent + 1);
            }
            if (!flat) os << "\n" << pad;
            os << "]";
            return;
        }
        case json::value_t::number_float: os << num(j.get<double>()); return;
        default: os << j.dump(); return;
    }
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

template <class Range>
json complex_array(const Range& r) {
    json out = json::array();
    for (const auto& z : r) out.push_back(complex_json(z));
    return out;
}

json complex_array(const CVector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v(i)));
    return out;
}

void write_atomic(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) fail(ErrorCode::ConfigError, "cannot write " + tmp.string());
        f << text;
        f.flush();
        if (!f) fail(ErrorCode::ConfigError, "write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

struct Artifacts {
    json record;
    std::vector<std::pair<std::string, std::string>> csv;  // file name, contents
    int exit_code = kExitOk;
};

template <class T>
const T& require(const std::optional<T>& x, const char* key, const std::string& command) {
    if (!x) fail(ErrorCode::ConfigError, command + " needs '" + key + "' in the config");
    return *x;
}

std::string grid_csv_header(const char* cols) { return std::string(cols) + "\n"; }

// Solution for finite patterns directly, for S1-S3 through the truncation schedule.
struct Solved {
    InterpolationSolution s;
    ObservationPattern pattern;
    std::optional<TruncationReport> report;
};

Solved solve_any(const ExperimentConfig& c) {
    const auto& p = *c.pattern;
    const SolveOptions so{c.options.grid, kDefaultTruncation};
    if (!p.infinite()) return {solve(p, *c.weights, *c.density, so), p, std::nullopt};
    auto t = solve_truncated(p, *c.weights, *c.density, c.options.truncation, so);
    return {std::move(t.solution), p.with_truncation(t.report.truncations.back()), t.report};
}

json report_json(const TruncationReport& r) {
    return {{"truncations", r.truncations}, {"deltas", r.deltas}, {"relative_change", r.relative_change},
            {"converged", r.converged}};
}

Artifacts cmd_minimality(const ExperimentConfig& c) {
    const auto& f = require(c.density, "density", "minimality");
    const std::size_t G = f.native_grid() ? f.native_grid() : c.options.grid;
    const double v = minimality_value(f, G);
    Artifacts a;
    a.record = {{"command", "minimality"}, {"grid", G}, {"value", v}, {"minimal", std::isfinite(v) && v > 0.0}};
    const auto fv = f.values(G);
    const auto iv = f.inverse_values(G);
    std::string csv = grid_csv_header("lambda,f,inv_f");
    for (std::size_t k = 0; k < G; ++k) csv += num(grid::lambda(k, G)) + "," + num(fv[k]) + "," + num(iv[k]) + "\n";
    a.csv.emplace_back("minimality.csv", std::move(csv));
    return a;
}

Artifacts cmd_interpolate(const ExperimentConfig& c) {
    require(c.density, "density", "interpolate");
    require(c.pattern, "pattern", "interpolate");
    require(c.weights, "weights", "interpolate");
    const auto sv = solve_any(c);
    const auto& s = sv.s;
    json conv = {{"max_missing_coeff", s.max_missing_coeff()}, {"tolerance", 1e-8 * s.a.norm()},
                 {"vanishing_ok", s.max_missing_coeff() <= 1e-8 * s.a.norm()}};
    if (sv.report) conv["truncation"] = report_json(*sv.report);
    Artifacts a;
    a.record = {{"command", "interpolate"},
                {"pattern", sv.pattern.describe()},
                {"grid", c.options.grid},
                {"indices", s.indices},
                {"a", complex_array(s.a)},
                {"c", complex_array(s.c)},
                {"delta", s.delta},
                {"delta_imag", s.delta_imag},
                {"convergence", conv}};
    const std::size_t G = s.h_grid.size();
    std::string csv = grid_csv_header("lambda,h_re,h_im");
    for (std::size_t k = 0; k < G; ++k) {
        csv += num(grid::lambda(k, G)) + "," + num(s.h_grid[k].real()) + "," + num(s.h_grid[k].imag()) + "\n";
    }
    a.csv.emplace_back("interpolate.csv", std::move(csv));
    return a;
}

json validity_json(const Validity& v) {
    return {{"closed_form_applicable", v.closed_form_applicable}, {"positivity_ok", v.positivity_ok},
            {"bounds_ok", v.bounds_ok},
            {"factorization_ok", v.factorization_ok},
            {"degenerate", v.degenerate},
            {"converged", v.converged}};
}

json lf_json(const LeastFavourableResult& r) {
    const auto& bv = r.b0.values();
    const int L = r.b0.half_length();
    json b0 = json::array();
    for (int m = 0; m <= L; ++m) b0.push_back(complex_json(bv[static_cast<std::size_t>(m + L)]));
    json j = {{"mechanism", to_string(r.mechanism)},
              {"indices", r.indices},
              {"a", complex_array(r.a)},
              {"anchor", r.anchor},
              {"b0", b0},
              {"delta0", r.delta0},
              {"validity", validity_json(r.validity)},
              {"lagrange", complex_array(r.lagrange)}};
    if (r.numerical) {
        j["numerical"] = {{"iterations", r.numerical->iterations},
                          {"projected_gradient", r.numerical->projected_gradient},
                          {"nodes", r.numerical->nodes},
                          {"max_bound_violation_fine", r.numerical->max_bound_violation_fine}};
    }
    if (r.newton) {
        j["newton"] = {{"iterations", r.newton->iterations}, {"residual", r.newton->residual}, {"W_k", r.newton->W_k},
                       {"unknown_lags", r.newton->unknown_lags}};
    }
    if (r.factorization) {
        j["factorization"] = {{"gamma", complex_array(r.factorization->gamma)},
                              {"mask", r.factorization->mask},
                              {"reconstruction_error", r.factorization->reconstruction_error}};
    }
    if (!r.lower_active.empty() || !r.upper_active.empty()) {
        j["active"] = {{"lower", r.lower_active.size()}, {"upper", r.upper_active.size()}};
    }
    return j;
}

LeastFavourableResult compute_lf(const ObservationPattern& p, const FunctionalWeights& w, const DensityClass& cls,
                                 const MinimaxOptions& mo, const std::string& method) {
    if (method == "numerical") return numerical_lf(p, w, cls, mo);
    const bool autom = method == "auto";
    if (autom && p.kind() == PatternKind::S3) return numerical_lf(p, w, cls, mo);
    if (const auto* d = std::get_if<D0Minus>(&cls)) return lf_d0minus(p, w, *d, mo);
    if (const auto* d = std::get_if<DW>(&cls)) {
        try {
            return lf_dW(p, w, *d, mo);
        } catch (const Error& e) {
            if (!autom || e.code() != ErrorCode::NotCovered) throw;
        }
        return numerical_lf(p, w, cls, mo);
    }
    return lf_dvu(p, w, std::get<DVU>(cls), mo);
}

Artifacts lf_artifacts(const LeastFavourableResult& r, const ObservationPattern& p, const DensityClass& cls,
                       const ExperimentConfig& c) {
    Artifacts a;
    a.record = lf_json(r);
    a.record["command"] = "least-favourable";
    a.record["pattern"] = p.describe();
    a.record["grid"] = r.grid;
    const auto rep = saddle_check(r, p, cls, c.options.samples, c.options.seed);
    a.record["saddle_report"] = {{"samples", rep.samples},
                                 {"upper_pass", rep.upper_pass},
                                 {"lower_pass", rep.lower_pass},
                                 {"max_upper_excess", rep.max_upper_excess},
                                 {"min_lower_margin", rep.min_lower_margin},
                                 {"passed", rep.passed()}};
    const std::size_t G = r.grid;
    const auto inv = r.b0.evaluate_real(G);
    std::string csv = grid_csv_header("lambda,f0,h0_re,h0_im");
    for (std::size_t k = 0; k < G; ++k) {
        const cplx h = k < r.h0_grid.size() ? r.h0_grid[k] : cplx(NAN, NAN);
        csv += num(grid::lambda(k, G)) + "," + num(1.0 / inv[k]) + "," + num(h.real()) + "," + num(h.imag()) + "\n";
    }
    a.csv.emplace_back("least-favourable.csv", std::move(csv));
    return a;
}

Artifacts cmd_least_favourable(const ExperimentConfig& c) {
    const auto& p = require(c.pattern, "pattern", "least-favourable");
    const auto& w = require(c.weights, "weights", "least-favourable");
    const auto& cls = require(c.cls, "class", "least-favourable");
    MinimaxOptions mo;
    mo.grid = c.options.grid;
    mo.seed = c.options.seed;
    return lf_artifacts(compute_lf(p, w, cls, mo, c.options.method), p, cls, c);
}

Artifacts cmd_verify(const ExperimentConfig& c) {
    require(c.density, "density", "verify");
    require(c.pattern, "pattern", "verify");
    require(c.weights, "weights", "verify");
    const auto sv = solve_any(c);
    const auto& s = sv.s;
    const auto pr = oracle::project(oracle::make_problem(sv.pattern, *c.weights, *c.density, c.options.window,
                                                         c.options.grid));
    const double rel = std::abs(s.delta - pr.mse) / std::max(std::abs(pr.mse), 1e-300);
    const double a_norm = s.a.norm();
    json checks = json::array();
    bool passed = true;
    std::string csv = "check,value,tolerance,pass\n";
    auto add = [&](const std::string& name, double value, double tol, bool ok) {
        checks.push_back({{"check", name}, {"value", value}, {"tolerance", tol}, {"pass", ok}});
        csv += name + "," + num(value) + "," + num(tol) + "," + (ok ? "pass" : "fail") + "\n";
        passed = passed && ok;
    };
    const double proj_tol = sv.report ? 1e-5 : 1e-6;
    add("delta_vs_projection", rel, proj_tol, rel <= proj_tol);
    add("vanishing_coefficients", s.max_missing_coeff(), 1e-8 * a_norm, s.max_missing_coeff() <= 1e-8 * a_norm);
    add("projection_below_prior", pr.mse - pr.prior_energy, 0.0, pr.mse <= pr.prior_energy * (1 + 1e-12));
    add("delta_nonnegative", s.delta, 0.0, s.delta >= 0.0);
    if (sv.report) add("truncation_converged", sv.report->relative_change, 1e-8, sv.report->converged);

    Artifacts a;
    a.record = {{"command", "verify"},
                {"pattern", sv.pattern.describe()},
                {"grid", c.options.grid},
                {"window", c.options.window},
                {"delta", s.delta},
                {"projection_mse", pr.mse},
                {"checks", checks},
                {"passed", passed}};
    if (!passed) {
        a.record["error"] = error_record(ErrorCode::VerificationFailed, "one or more checks failed")["error"];
        a.exit_code = kExitNumerical;
    }
    a.csv.emplace_back("verify.csv", std::move(csv));
    return a;
}

Artifacts cmd_simulate(const ExperimentConfig& c, bool want_paths) {
    const auto& f = require(c.density, "density", "simulate");
    require(c.pattern, "pattern", "simulate");
    require(c.weights, "weights", "simulate");
    if (!c.weights->is_real()) fail(ErrorCode::InvalidParameters, "simulate needs real weights");
    const auto sv = solve_any(c);
    const auto& s = sv.s;
    const auto [lo_it, hi_it] = std::minmax_element(s.indices.begin(), s.indices.end());
    const int window = std::min(c.options.window, s.h_half_length);
    const int origin = *lo_it - window;
    const auto length = static_cast<std::size_t>(*hi_it + window - origin + 1);
    const auto est = oracle::estimate_from_characteristic(s, sv.pattern, origin, *hi_it + window);
    const auto target = oracle::target_functional(sv.pattern, *c.weights);
    const auto m = oracle::monte_carlo_mse(f, origin, length, est, target, c.options.replicates, c.options.seed);
    const double z = m.std_error > 0.0 ? (m.mean - s.delta) / m.std_error : 0.0;

    Artifacts a;
    a.record = {{"command", "simulate"},
                {"pattern", sv.pattern.describe()},
                {"seed", c.options.seed},
                {"replicates", m.replicates},
                {"origin", origin},
                {"length", length},
                {"delta", s.delta},
                {"mean", m.mean},
                {"std_error", m.std_error},
                {"z", z},
                {"within_3se", std::abs(z) <= 3.0}};
    if (want_paths && c.options.path_replicates > 0) {
        const auto paths = oracle::simulate(f, length, c.options.path_replicates, c.options.seed);
        std::string csv = "replicate,index,value\n";
        for (std::size_t r = 0; r < paths.replicates; ++r) {
            for (std::size_t t = 0; t < paths.length; ++t) {
                csv += std::to_string(r) + "," + std::to_string(origin + static_cast<long>(t)) + "," +
                       num(paths.at(r, t)) + "\n";
            }
        }
        a.csv.emplace_back("simulate_paths.csv", std::move(csv));
    }
    return a;
}

Artifacts dispatch(const std::string& command, const ExperimentConfig& c, const Flags& flags) {
    if (command == "minimality") return cmd_minimality(c);
    if (command == "interpolate") return cmd_interpolate(c);
    if (command == "least-favourable") return cmd_least_favourable(c);
    if (command == "verify") return cmd_verify(c);
    if (command == "simulate") return cmd_simulate(c, flags.format != Format::Json);
    fail(ErrorCode::ConfigError, "unknown command '" + command + "'");
}

}  // namespace

std::string dump(const json& j) {
    std::ostringstream os;
    write_json(os, j, 0);
    os << "\n";
    return os.str();
}

json error_record(ErrorCode code, const std::string& message) {
    return {{"error",
             {{"category", is_validation(code) ? "validation" : "numerical"},
              {"code", std::string(to_string(code))},
              {"value", static_cast<int>(code)},
              {"message", message}}}};
}

int run(const std::string& command, const std::string& config_path, const Flags& flags, std::ostream& out) {
    const fs::path dir(flags.out);
    json record;
    int code = kExitOk;
    std::vector<std::pair<std::string, std::string>> csv;
    try {
        auto j = read_json(config_path);
        if (!j.is_object()) fail(ErrorCode::ConfigError, "config must be a JSON object");
        if (flags.grid || flags.truncation || flags.seed) {
            auto& o = j["options"];
            if (flags.grid) o["grid"] = *flags.grid;
            if (flags.truncation) o["truncation"] = *flags.truncation;
            if (flags.seed) o["seed"] = *flags.seed;
        }
        const auto cfg = parse_config(j);
        auto art = dispatch(command, cfg, flags);
        record = std::move(art.record);
        code = art.exit_code;
        csv = std::move(art.csv);
    } catch (const LfConvergenceError& e) {
        record = error_record(e.code(), e.what());
        record["partial"] = lf_json(e.partial());
        code = kExitNumerical;
    } catch (const ConvergenceError& e) {
        record = error_record(e.code(), e.what());
        record["partial"] = report_json(e.report());
        code = kExitNumerical;
    } catch (const Error& e) {
        record = error_record(e.code(), e.what());
        code = is_validation(e.code()) ? kExitValidation : kExitNumerical;
    } catch (const json::exception& e) {
        record = error_record(ErrorCode::ConfigError, e.what());
        code = kExitValidation;
    } catch (const std::exception& e) {
        record = error_record(ErrorCode::NotConverged, e.what());
        record["error"]["category"] = "internal";
        code = kExitNumerical;
    }
    const std::string text = dump(record);
    out << text;
    try {
        if (flags.format != Format::Csv || code != kExitOk) write_atomic(dir / (command + ".json"), text);
        if (flags.format != Format::Json) {
            for (const auto& [name, body] : csv) write_atomic(dir / name, body);
        }
    } catch (const std::exception& e) {
        out << dump(error_record(ErrorCode::ConfigError, e.what()));
        return kExitValidation;
    }
    return code;
}

}  // namespace gapinterp::cli
