// liouville CLI: expand noncommutative Bell polynomials, evaluate
// generalized Wronskians, reconstruct ODE coefficients from a solution
// frame, run the identity verifiers, and decide range equivalence.
//
// Exit codes: 0 success / all checks passed, 1 verification failure,
// 2 configuration error, 3 numerical degeneracy.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "json_out.hpp"
#include "liouville/liouville.hpp"

using namespace liouville;
using nlohmann::json;

namespace {

struct RunConfig {
    std::string task;
    int n = 0;
    std::vector<std::string> functions;
    std::vector<std::string> g_functions;
    std::vector<std::string> coefficients;
    std::vector<std::vector<std::string>> matrix;
    DomainHint domain{-1.0, 1.0};
    std::optional<std::vector<double>> point_list;
    int point_count = 11;
    std::vector<std::vector<int>> ks;
    std::optional<int> k_max;
    int j_max = 5;
    int d_max = 2;
    int m = -1;
    int max_order = kDefaultMaxBellOrder;
    int jet_order = 0;
    Tolerances tol;
    std::string format = "text";
    std::vector<std::string> identities;
};

[[noreturn]] void config_fail(const std::string& message) {
    throw Error(ErrorKind::schema_error, message);
}

double parse_domain_bound(const json& v, const std::string& key) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
    }
    config_fail(key + ": bounds must be numbers or \"inf\"/\"-inf\"");
}

std::vector<std::string> string_array(const json& v, const std::string& key) {
    if (!v.is_array()) config_fail(key + ": expected an array of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_string()) config_fail(key + "[" + std::to_string(i) + "]: expected a string");
        out.push_back(v[i].get<std::string>());
    }
    return out;
}

int int_value(const json& v, const std::string& key) {
    if (!v.is_number_integer()) config_fail(key + ": expected an integer");
    return v.get<int>();
}

const std::vector<std::string> kIdentityNames = {
    "bell-derivative", "frame-derivative", "wronskian-formula",
    "shifted-wronskian", "abel-liouville", "ode-residual",
};

RunConfig load_config(const std::string& path, const std::string& expected_task) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io_error, "cannot open config file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        config_fail(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) config_fail("config root must be an object");

    RunConfig cfg;
    cfg.task = expected_task;

    static const std::vector<std::string> common = {"task",      "format", "tol",   "abs_floor",
                                                    "jet_order", "points", "max_order"};
    std::vector<std::string> allowed = common;
    const auto allow = [&](std::initializer_list<const char*> keys) {
        for (const char* k : keys) allowed.push_back(k);
    };
    if (expected_task == "bell-expand") {
        allow({"m"});
    } else if (expected_task == "wronskian") {
        allow({"n", "functions", "domain", "k", "k_max"});
    } else if (expected_task == "reconstruct") {
        allow({"n", "functions", "domain"});
    } else if (expected_task == "verify") {
        allow({"n", "functions", "domain", "coefficients", "matrix", "identities", "k", "k_max",
               "j_max", "d_max"});
    } else if (expected_task == "equiv") {
        allow({"n", "functions", "g_functions", "domain"});
    }
    for (const auto& [key, value] : doc.items()) {
        (void)value;
        bool ok = false;
        for (const auto& a : allowed)
            if (key == a) {
                ok = true;
                break;
            }
        if (!ok) config_fail("unknown key '" + key + "' for task " + expected_task);
    }

    if (doc.contains("task")) {
        if (!doc["task"].is_string()) config_fail("task: expected a string");
        if (doc["task"].get<std::string>() != expected_task)
            config_fail("task: config says '" + doc["task"].get<std::string>() +
                        "' but the subcommand is '" + expected_task + "'");
    }
    if (doc.contains("format")) {
        if (!doc["format"].is_string()) config_fail("format: expected a string");
        cfg.format = doc["format"].get<std::string>();
        if (cfg.format != "text" && cfg.format != "json")
            config_fail("format: must be \"text\" or \"json\"");
    }
    if (doc.contains("tol")) {
        if (!doc["tol"].is_number()) config_fail("tol: expected a number");
        cfg.tol.rel = doc["tol"].get<double>();
        if (!(cfg.tol.rel > 0)) config_fail("tol: must be positive");
    }
    if (doc.contains("abs_floor")) {
        if (!doc["abs_floor"].is_number()) config_fail("abs_floor: expected a number");
        cfg.tol.abs_floor = doc["abs_floor"].get<double>();
        if (cfg.tol.abs_floor < 0) config_fail("abs_floor: must be nonnegative");
    }
    if (doc.contains("jet_order")) {
        cfg.jet_order = int_value(doc["jet_order"], "jet_order");
        if (cfg.jet_order < 0) config_fail("jet_order: must be nonnegative");
    }
    if (doc.contains("max_order")) {
        cfg.max_order = int_value(doc["max_order"], "max_order");
        if (cfg.max_order < 0) config_fail("max_order: must be nonnegative");
    }
    if (doc.contains("points")) {
        const json& p = doc["points"];
        if (p.is_number_integer()) {
            cfg.point_count = p.get<int>();
            if (cfg.point_count < 1) config_fail("points: count must be at least 1");
        } else if (p.is_array()) {
            std::vector<double> pts;
            for (std::size_t i = 0; i < p.size(); ++i) {
                if (!p[i].is_number()) config_fail("points[" + std::to_string(i) + "]: expected a number");
                pts.push_back(p[i].get<double>());
            }
            if (pts.empty()) config_fail("points: list must not be empty");
            cfg.point_list = std::move(pts);
        } else {
            config_fail("points: expected an integer count or an array of numbers");
        }
    }
    if (doc.contains("m")) {
        cfg.m = int_value(doc["m"], "m");
        if (cfg.m < 0) config_fail("m: must be nonnegative");
    }
    if (doc.contains("n")) {
        cfg.n = int_value(doc["n"], "n");
        if (cfg.n < 1) config_fail("n: must be at least 1");
    }
    if (doc.contains("domain")) {
        const json& d = doc["domain"];
        if (!d.is_array() || d.size() != 2) config_fail("domain: expected [lo, hi]");
        cfg.domain.lo = parse_domain_bound(d[0], "domain[0]");
        cfg.domain.hi = parse_domain_bound(d[1], "domain[1]");
        if (!(cfg.domain.lo < cfg.domain.hi)) config_fail("domain: lo must be below hi");
    }
    if (doc.contains("functions")) cfg.functions = string_array(doc["functions"], "functions");
    if (doc.contains("g_functions")) cfg.g_functions = string_array(doc["g_functions"], "g_functions");
    if (doc.contains("coefficients")) cfg.coefficients = string_array(doc["coefficients"], "coefficients");
    if (doc.contains("matrix")) {
        const json& m = doc["matrix"];
        if (!m.is_array()) config_fail("matrix: expected an array of rows");
        for (std::size_t i = 0; i < m.size(); ++i)
            cfg.matrix.push_back(string_array(m[i], "matrix[" + std::to_string(i) + "]"));
    }
    if (doc.contains("k")) {
        const json& ks = doc["k"];
        if (!ks.is_array()) config_fail("k: expected an array of multi-indices");
        for (std::size_t i = 0; i < ks.size(); ++i) {
            const json& row = ks[i];
            if (!row.is_array()) config_fail("k[" + std::to_string(i) + "]: expected an array of integers");
            std::vector<int> kvec;
            for (std::size_t j = 0; j < row.size(); ++j)
                kvec.push_back(int_value(row[j], "k[" + std::to_string(i) + "][" + std::to_string(j) + "]"));
            cfg.ks.push_back(std::move(kvec));
        }
    }
    if (doc.contains("k_max")) {
        cfg.k_max = int_value(doc["k_max"], "k_max");
        if (*cfg.k_max < 0) config_fail("k_max: must be nonnegative");
    }
    if (doc.contains("j_max")) {
        cfg.j_max = int_value(doc["j_max"], "j_max");
        if (cfg.j_max < 0) config_fail("j_max: must be nonnegative");
    }
    if (doc.contains("d_max")) {
        cfg.d_max = int_value(doc["d_max"], "d_max");
        if (cfg.d_max < 0 || cfg.d_max > 2) config_fail("d_max: must be 0, 1, or 2");
    }
    if (doc.contains("identities")) {
        cfg.identities = string_array(doc["identities"], "identities");
        for (const auto& id : cfg.identities) {
            bool known = false;
            for (const auto& name : kIdentityNames)
                if (id == name) known = true;
            if (!known) config_fail("identities: unknown identity '" + id + "'");
        }
    }

    // task-specific required fields and dimensional consistency
    const auto require_functions = [&]() {
        if (cfg.n == 0) config_fail("n: required for task " + expected_task);
        if (cfg.functions.empty()) config_fail("functions: required for task " + expected_task);
        if (static_cast<int>(cfg.functions.size()) != cfg.n)
            config_fail("functions: expected " + std::to_string(cfg.n) + " entries, got " +
                        std::to_string(cfg.functions.size()));
    };
    if (expected_task == "bell-expand") {
        if (cfg.m < 0) config_fail("m: required for task bell-expand");
    } else if (expected_task == "wronskian" || expected_task == "reconstruct") {
        require_functions();
    } else if (expected_task == "verify") {
        require_functions();
        if (!cfg.coefficients.empty() && static_cast<int>(cfg.coefficients.size()) != cfg.n)
            config_fail("coefficients: expected " + std::to_string(cfg.n) + " entries, got " +
                        std::to_string(cfg.coefficients.size()));
        if (!cfg.matrix.empty()) {
            if (static_cast<int>(cfg.matrix.size()) != cfg.n)
                config_fail("matrix: expected " + std::to_string(cfg.n) + " rows");
            for (std::size_t i = 0; i < cfg.matrix.size(); ++i)
                if (static_cast<int>(cfg.matrix[i].size()) != cfg.n)
                    config_fail("matrix[" + std::to_string(i) + "]: expected " + std::to_string(cfg.n) +
                                " entries");
        }
    } else if (expected_task == "equiv") {
        require_functions();
        if (cfg.g_functions.empty()) config_fail("g_functions: required for task equiv");
        if (static_cast<int>(cfg.g_functions.size()) != cfg.n)
            config_fail("g_functions: expected " + std::to_string(cfg.n) + " entries, got " +
                        std::to_string(cfg.g_functions.size()));
    }
    for (const auto& kvec : cfg.ks)
        if (cfg.n && static_cast<int>(kvec.size()) != cfg.n)
            config_fail("k: every multi-index must have n = " + std::to_string(cfg.n) + " entries");
    return cfg;
}

FunctionSpec parse_field(const std::string& source, const std::string& key) {
    try {
        return parse(source);
    } catch (const Error& e) {
        config_fail(key + ": " + e.what());
    }
}

VectorFunctionSpec parse_vector(const std::vector<std::string>& sources, DomainHint dom,
                                const std::string& key) {
    std::vector<FunctionSpec> comps;
    for (std::size_t i = 0; i < sources.size(); ++i)
        comps.push_back(parse_field(sources[i], key + "[" + std::to_string(i) + "]"));
    return VectorFunctionSpec(std::move(comps), dom);
}

std::vector<double> resolve_points(const RunConfig& cfg) {
    if (cfg.point_list) return *cfg.point_list;
    return sample_grid(cfg.domain, cfg.point_count);
}

std::vector<MultiIndex> resolve_selectors(const RunConfig& cfg) {
    std::vector<MultiIndex> out;
    if (!cfg.ks.empty()) {
        for (const auto& kvec : cfg.ks) out.emplace_back(kvec);
        return out;
    }
    const int limit = cfg.k_max.value_or(cfg.n + 3);
    // all selectors with distinct entries bounded by the limit
    std::vector<int> k(static_cast<std::size_t>(cfg.n), 0);
    const auto advance = [&]() {
        for (int i = cfg.n - 1; i >= 0; --i) {
            if (++k[static_cast<std::size_t>(i)] <= limit) return true;
            k[static_cast<std::size_t>(i)] = 0;
        }
        return false;
    };
    do {
        bool distinct = true;
        for (int i = 0; i < cfg.n && distinct; ++i)
            for (int j = i + 1; j < cfg.n; ++j)
                if (k[static_cast<std::size_t>(i)] == k[static_cast<std::size_t>(j)]) {
                    distinct = false;
                    break;
                }
        if (distinct) out.emplace_back(k);
    } while (advance());
    return out;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

jout::Value report_to_json(const VerificationReport& rep) {
    jout::Value o = jout::Value::object();
    o.set("identity", rep.identity);
    o.set("tolerance", rep.tol.rel);
    o.set("abs_floor", rep.tol.abs_floor);
    o.set("passed", rep.passed);
    o.set("max_abs_residual", rep.max_abs);
    o.set("max_rel_residual", rep.max_rel);
    o.set("worst_t", rep.worst_t);
    jout::Value pts = jout::Value::array();
    for (const auto& p : rep.points) {
        jout::Value e = jout::Value::object();
        e.set("t", p.t);
        e.set("abs", p.abs_res);
        e.set("rel", p.rel_res);
        pts.push(std::move(e));
    }
    o.set("points", std::move(pts));
    jout::Value sk = jout::Value::array();
    for (const auto& s : rep.skipped) {
        jout::Value e = jout::Value::object();
        e.set("t", s.t);
        e.set("reason", s.reason);
        sk.push(std::move(e));
    }
    o.set("skipped", std::move(sk));
    return o;
}

void print_report_text(const VerificationReport& rep) {
    std::printf("%-28s %s   max rel %s", rep.identity.c_str(), rep.passed ? "PASS" : "FAIL",
                format_short(rep.max_rel).c_str());
    if (!rep.points.empty()) std::printf(" at t=%s", format_short(rep.worst_t).c_str());
    std::printf("   (%zu points, %zu skipped)\n", rep.points.size(), rep.skipped.size());
}

int run_bell_expand(const RunConfig& cfg) {
    const NCPolynomial poly = bell_expand(cfg.m, cfg.max_order);
    if (cfg.format == "json") {
        jout::Value o = jout::Value::object();
        o.set("task", "bell-expand");
        o.set("m", cfg.m);
        o.set("word_count", poly.word_count());
        o.set("coefficient_sum", poly.coefficient_sum());
        o.set("pretty", format_bell(cfg.m, poly));
        jout::Value terms = jout::Value::array();
        for (const auto& [w, c] : poly.terms) {
            jout::Value t = jout::Value::object();
            jout::Value word = jout::Value::array();
            for (int idx : w) word.push(idx);
            t.set("word", std::move(word));
            t.set("coefficient", c);
            terms.push(std::move(t));
        }
        o.set("terms", std::move(terms));
        std::printf("%s\n", o.dump().c_str());
    } else {
        std::printf("%s\n", format_bell(cfg.m, poly).c_str());
    }
    return 0;
}

int run_wronskian(const RunConfig& cfg) {
    const Frame f(parse_vector(cfg.functions, cfg.domain, "functions"));
    const std::vector<double> pts = resolve_points(cfg);
    std::vector<MultiIndex> ks;
    if (cfg.ks.empty() && !cfg.k_max)
        ks.push_back(MultiIndex::classical(cfg.n));
    else
        ks = resolve_selectors(cfg);

    if (cfg.format == "json") {
        jout::Value o = jout::Value::object();
        o.set("task", "wronskian");
        o.set("n", cfg.n);
        jout::Value results = jout::Value::array();
        for (const auto& k : ks) {
            jout::Value r = jout::Value::object();
            jout::Value kv = jout::Value::array();
            for (int v : k.k) kv.push(v);
            r.set("k", std::move(kv));
            jout::Value vals = jout::Value::array();
            for (double t : pts) {
                jout::Value e = jout::Value::object();
                e.set("t", t);
                if (cfg.jet_order == 0) {
                    e.set("value", wronskian_direct(f, k, t));
                } else {
                    const Jet wj = wronskian_jet(f, k, t, cfg.jet_order);
                    e.set("value", wj.value());
                    jout::Value der = jout::Value::array();
                    for (int d = 1; d <= cfg.jet_order; ++d) der.push(wj.derivative(d));
                    e.set("derivatives", std::move(der));
                }
                vals.push(std::move(e));
            }
            r.set("values", std::move(vals));
            results.push(std::move(r));
        }
        o.set("results", std::move(results));
        std::printf("%s\n", o.dump().c_str());
    } else {
        for (const auto& k : ks) {
            std::string kstr = "(";
            for (std::size_t i = 0; i < k.k.size(); ++i) {
                if (i) kstr += ",";
                kstr += std::to_string(k.k[i]);
            }
            kstr += ")";
            std::printf("W^%s:\n", kstr.c_str());
            for (double t : pts)
                std::printf("  t=%-12s %s\n", format_short(t).c_str(),
                            format_double(wronskian_direct(f, k, t)).c_str());
        }
    }
    return 0;
}

int run_reconstruct(const RunConfig& cfg) {
    const Frame f(parse_vector(cfg.functions, cfg.domain, "functions"));
    const std::vector<double> pts = resolve_points(cfg);
    const UsablePoints up = filter_usable(f, pts);
    if (up.usable.empty())
        throw Error(ErrorKind::vanishing_wronskian, "Wronskian vanishes at every sample point");

    if (cfg.format == "json") {
        jout::Value o = jout::Value::object();
        o.set("task", "reconstruct");
        o.set("n", cfg.n);
        jout::Value vals = jout::Value::array();
        for (double t : up.usable) {
            jout::Value e = jout::Value::object();
            e.set("t", t);
            jout::Value a = jout::Value::array();
            if (cfg.jet_order == 0) {
                for (double v : reconstruct_coefficients(f, t)) a.push(v);
            } else {
                const auto jets = CoefficientSource::reconstructed(f).eval(t, cfg.jet_order);
                for (const Jet& j : jets) {
                    jout::Value comp = jout::Value::array();
                    for (int d = 0; d <= cfg.jet_order; ++d) comp.push(j.derivative(d));
                    a.push(std::move(comp));
                }
            }
            e.set("a", std::move(a));
            vals.push(std::move(e));
        }
        o.set("values", std::move(vals));
        jout::Value sk = jout::Value::array();
        for (const auto& s : up.skipped) {
            jout::Value e = jout::Value::object();
            e.set("t", s.t);
            e.set("reason", s.reason);
            sk.push(std::move(e));
        }
        o.set("skipped", std::move(sk));
        std::printf("%s\n", o.dump().c_str());
    } else {
        for (double t : up.usable) {
            const auto a = reconstruct_coefficients(f, t);
            std::printf("t=%-12s a = (", format_short(t).c_str());
            for (std::size_t i = 0; i < a.size(); ++i)
                std::printf("%s%s", i ? ", " : "", format_double(a[i]).c_str());
            std::printf(")\n");
        }
        for (const auto& s : up.skipped)
            std::printf("skipped t=%s: %s\n", format_short(s.t).c_str(), s.reason.c_str());
    }
    return 0;
}

int run_verify(const RunConfig& cfg) {
    const Frame f(parse_vector(cfg.functions, cfg.domain, "functions"));
    std::optional<CoefficientVector> coeffs;
    if (!cfg.coefficients.empty())
        coeffs = CoefficientVector(parse_vector(cfg.coefficients, cfg.domain, "coefficients"));
    std::optional<MatrixFunctionSpec> mat;
    if (!cfg.matrix.empty()) {
        std::vector<FunctionSpec> entries;
        for (std::size_t i = 0; i < cfg.matrix.size(); ++i)
            for (std::size_t j = 0; j < cfg.matrix[i].size(); ++j)
                entries.push_back(parse_field(cfg.matrix[i][j],
                                              "matrix[" + std::to_string(i) + "][" + std::to_string(j) + "]"));
        mat = MatrixFunctionSpec(cfg.n, std::move(entries));
    }

    std::vector<std::string> ids = cfg.identities;
    if (ids.empty()) {
        ids.push_back("wronskian-formula");
        ids.push_back("ode-residual");
        if (coeffs || mat) ids.insert(ids.begin(), "bell-derivative");
        if (coeffs) {
            ids.push_back("frame-derivative");
            ids.push_back("shifted-wronskian");
            ids.push_back("abel-liouville");
        }
    }

    const std::vector<double> pts = resolve_points(cfg);
    std::vector<VerificationReport> reports;
    for (const auto& id : ids) {
        if (id == "bell-derivative") {
            std::optional<MatrixFunctionSpec> x = mat;
            if (!x) {
                if (!coeffs) config_fail("identities: bell-derivative needs 'matrix' or 'coefficients'");
                // use the companion matrix of the given coefficients
                std::vector<FunctionSpec> entries;
                for (int i = 0; i < cfg.n; ++i)
                    for (int j = 0; j < cfg.n; ++j) {
                        if (j == 0)
                            entries.push_back(coeffs->spec.components[static_cast<std::size_t>(i)]);
                        else
                            entries.push_back(FunctionSpec::from_ast(
                                Expr::make_number(i == j - 1 ? 1.0 : 0.0)));
                    }
                x = MatrixFunctionSpec(cfg.n, std::move(entries));
            }
            reports.push_back(verify_bell_derivative_identity(*x, cfg.j_max, pts, cfg.tol));
        } else if (id == "frame-derivative") {
            if (!coeffs) config_fail("identities: frame-derivative needs 'coefficients'");
            reports.push_back(verify_frame_derivative_formula(f, *coeffs, cfg.j_max, pts, cfg.tol));
        } else if (id == "wronskian-formula") {
            reports.push_back(verify_wronskian_formula(f, coeffs, resolve_selectors(cfg), pts, cfg.tol));
        } else if (id == "shifted-wronskian") {
            if (!coeffs) config_fail("identities: shifted-wronskian needs 'coefficients'");
            for (int d = 0; d <= cfg.d_max; ++d)
                reports.push_back(verify_shifted_wronskian(f, *coeffs, d, pts, cfg.tol));
        } else if (id == "abel-liouville") {
            if (!coeffs) config_fail("identities: abel-liouville needs 'coefficients'");
            reports.push_back(verify_abel_liouville(f, *coeffs, pts, cfg.tol));
        } else if (id == "ode-residual") {
            reports.push_back(verify_ode_residual(f, pts, cfg.tol));
        }
    }

    bool all_passed = true;
    for (const auto& r : reports) all_passed = all_passed && r.passed;

    if (cfg.format == "json") {
        jout::Value o = jout::Value::object();
        o.set("task", "verify");
        o.set("n", cfg.n);
        jout::Value reps = jout::Value::array();
        for (const auto& r : reports) reps.push(report_to_json(r));
        o.set("reports", std::move(reps));
        o.set("passed", all_passed);
        std::printf("%s\n", o.dump().c_str());
    } else {
        for (const auto& r : reports) print_report_text(r);
        std::printf("overall %s\n", all_passed ? "PASS" : "FAIL");
    }
    return all_passed ? 0 : 1;
}

int run_equiv(const RunConfig& cfg) {
    const Frame f(parse_vector(cfg.functions, cfg.domain, "functions"));
    const Frame g(parse_vector(cfg.g_functions, cfg.domain, "g_functions"));
    const std::vector<double> pts = resolve_points(cfg);
    const EquivalenceResult res = range_equivalent(f, g, pts, cfg.tol);

    if (cfg.format == "json") {
        jout::Value o = jout::Value::object();
        o.set("task", "equiv");
        o.set("n", cfg.n);
        o.set("equivalent", res.equivalent);
        if (res.A) {
            jout::Value rows = jout::Value::array();
            for (int i = 0; i < res.A->rows(); ++i) {
                jout::Value row = jout::Value::array();
                for (int j = 0; j < res.A->cols(); ++j) row.push(res.A->at(i, j));
                rows.push(std::move(row));
            }
            o.set("A", std::move(rows));
        } else {
            o.set("A", jout::Value());
        }
        o.set("max_phi_mismatch", res.max_phi_mismatch);
        o.set("max_validation_residual", res.max_validation_residual);
        if (!res.equivalent) {
            jout::Value w = jout::Value::object();
            w.set("j", res.witness_j);
            w.set("t", res.witness_t);
            w.set("phi_f", res.witness_phi_f);
            w.set("phi_g", res.witness_phi_g);
            o.set("witness", std::move(w));
        } else {
            o.set("witness", jout::Value());
        }
        jout::Value sk = jout::Value::array();
        for (const auto& s : res.skipped) {
            jout::Value e = jout::Value::object();
            e.set("t", s.t);
            e.set("reason", s.reason);
            sk.push(std::move(e));
        }
        o.set("skipped", std::move(sk));
        std::printf("%s\n", o.dump().c_str());
    } else {
        std::printf("equivalent: %s\n", res.equivalent ? "yes" : "no");
        if (res.equivalent && res.A) {
            std::printf("A =\n");
            for (int i = 0; i < res.A->rows(); ++i) {
                std::printf("  [");
                for (int j = 0; j < res.A->cols(); ++j)
                    std::printf(" %s", format_double(res.A->at(i, j)).c_str());
                std::printf(" ]\n");
            }
            std::printf("max phi mismatch %s, max validation residual %s\n",
                        format_short(res.max_phi_mismatch).c_str(),
                        format_short(res.max_validation_residual).c_str());
        } else {
            std::printf("witness: phi[%d] at t=%s: f gives %s, g gives %s\n", res.witness_j,
                        format_short(res.witness_t).c_str(), format_double(res.witness_phi_f).c_str(),
                        format_double(res.witness_phi_g).c_str());
        }
    }
    return res.equivalent ? 0 : 1;
}

int exit_code_for(const Error& e) {
    switch (e.kind()) {
        case ErrorKind::schema_error:
        case ErrorKind::io_error:
        case ErrorKind::syntax_error:
        case ErrorKind::non_integer_exponent:
        case ErrorKind::order_limit_exceeded:
        case ErrorKind::dimension_mismatch:
        case ErrorKind::insufficient_arguments:
        case ErrorKind::smoothness_budget_exceeded:
            return 2;
        default:
            return 3;
    }
}

struct CommonFlags {
    std::string config_path;
    std::string points;
    std::string format;
    double tol = 0.0;
    int jet_order = -1;

    void attach(CLI::App* cmd, bool config_required) {
        auto* opt = cmd->add_option("--config", config_path, "path to a JSON run configuration");
        if (config_required) opt->required();
        cmd->add_option("--points", points, "sample count or comma-separated point list");
        cmd->add_option("--format", format, "output format: text or json");
        cmd->add_option("--tol", tol, "relative tolerance for verdicts");
        cmd->add_option("--jet-order", jet_order, "extra derivative orders in outputs");
    }

    void apply(RunConfig& cfg) const {
        if (!format.empty()) {
            if (format != "text" && format != "json") config_fail("format: must be \"text\" or \"json\"");
            cfg.format = format;
        }
        if (tol > 0.0) cfg.tol.rel = tol;
        if (jet_order >= 0) cfg.jet_order = jet_order;
        if (!points.empty()) {
            if (points.find(',') == std::string::npos &&
                points.find('.') == std::string::npos) {
                try {
                    cfg.point_count = std::stoi(points);
                } catch (...) {
                    config_fail("points: cannot parse '" + points + "'");
                }
                if (cfg.point_count < 1) config_fail("points: count must be at least 1");
                cfg.point_list.reset();
            } else {
                std::vector<double> pts;
                std::size_t start = 0;
                while (start <= points.size()) {
                    std::size_t comma = points.find(',', start);
                    if (comma == std::string::npos) comma = points.size();
                    try {
                        pts.push_back(std::stod(points.substr(start, comma - start)));
                    } catch (...) {
                        config_fail("points: cannot parse '" + points + "'");
                    }
                    start = comma + 1;
                }
                cfg.point_list = std::move(pts);
            }
        }
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"noncommutative Bell polynomials, generalized Wronskians, and ODE frame analysis"};
    app.require_subcommand(1);

    auto* bell_cmd = app.add_subcommand("bell-expand", "expand a Bell polynomial B_m");
    bell_cmd->alias("bell");
    int bell_m = -1;
    int bell_cap = kDefaultMaxBellOrder;
    bell_cmd->add_option("--m", bell_m, "Bell index to expand");
    bell_cmd->add_option("--max-order", bell_cap, "order cap for the expansion");
    CommonFlags bell_flags;
    bell_flags.attach(bell_cmd, false);

    auto* wronskian_cmd = app.add_subcommand("wronskian", "evaluate generalized Wronskians");
    CommonFlags wronskian_flags;
    wronskian_flags.attach(wronskian_cmd, true);

    auto* reconstruct_cmd = app.add_subcommand("reconstruct", "recover ODE coefficients from a frame");
    CommonFlags reconstruct_flags;
    reconstruct_flags.attach(reconstruct_cmd, true);

    auto* verify_cmd = app.add_subcommand("verify", "run the identity verifiers");
    CommonFlags verify_flags;
    verify_flags.attach(verify_cmd, true);

    auto* equiv_cmd = app.add_subcommand("equiv", "decide range equivalence of two frames");
    CommonFlags equiv_flags;
    equiv_flags.attach(equiv_cmd, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        if (bell_cmd->parsed()) {
            RunConfig cfg;
            cfg.task = "bell-expand";
            if (!bell_flags.config_path.empty()) cfg = load_config(bell_flags.config_path, "bell-expand");
            if (bell_m >= 0) cfg.m = bell_m;
            if (bell_cap != kDefaultMaxBellOrder) cfg.max_order = bell_cap;
            bell_flags.apply(cfg);
            if (cfg.m < 0) config_fail("m: required (give --m or a config file)");
            return run_bell_expand(cfg);
        }
        if (wronskian_cmd->parsed()) {
            RunConfig cfg = load_config(wronskian_flags.config_path, "wronskian");
            wronskian_flags.apply(cfg);
            return run_wronskian(cfg);
        }
        if (reconstruct_cmd->parsed()) {
            RunConfig cfg = load_config(reconstruct_flags.config_path, "reconstruct");
            reconstruct_flags.apply(cfg);
            return run_reconstruct(cfg);
        }
        if (verify_cmd->parsed()) {
            RunConfig cfg = load_config(verify_flags.config_path, "verify");
            verify_flags.apply(cfg);
            return run_verify(cfg);
        }
        if (equiv_cmd->parsed()) {
            RunConfig cfg = load_config(equiv_flags.config_path, "equiv");
            equiv_flags.apply(cfg);
            return run_equiv(cfg);
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
