#include "pbvp/problem_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pbvp/expression.hpp"

namespace pbvp {

namespace {

using nlohmann::json;

std::string line_col(const std::string& text, size_t byte) {
    size_t line = 1, col = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return std::to_string(line) + ":" + std::to_string(col);
}

[[noreturn]] void fail(const std::string& src, const std::string& msg) {
    throw IoError(src + ": " + msg);
}

double need_number(const json& j, const char* key, const std::string& src) {
    if (!j.contains(key) || !j[key].is_number())
        fail(src, std::string("field '") + key + "' must be a number");
    return j[key].get<double>();
}

GridFunction constant_coeff(int n, double v) {
    GridFunction g;
    g.n = n;
    g.periodic = true;
    g.values.assign(n + 1, v);
    g.derivative.assign(n + 1, 0.0);
    return g;
}

/// Coefficient field: number, expression string in t, or value array of
/// length n+1.
GridFunction coeff_grid(const json& j, const char* key, int n, const std::string& src) {
    if (!j.contains(key)) fail(src, std::string("missing coefficient '") + key + "'");
    const json& v = j[key];
    if (v.is_number()) return constant_coeff(n, v.get<double>());
    if (v.is_string()) {
        Expression ex;
        try {
            ex = parse_expression(v.get<std::string>());
        } catch (const ExprError& e) {
            fail(src, std::string("coefficient '") + key + "': " + e.what());
        }
        GridFunction g;
        g.n = n;
        g.values.resize(n + 1);
        for (int i = 0; i <= n; ++i)
            g.values[i] = ex.eval(static_cast<double>(i) / n, 0.0, 0.0);
        const double scale = 1 + std::fabs(g.values[0]);
        g.periodic = std::fabs(g.values[0] - g.values[n]) <= 1e-9 * scale;
        return g;
    }
    if (v.is_array()) {
        if (static_cast<int>(v.size()) != n + 1)
            fail(src, std::string("coefficient '") + key + "' must have n+1 = " +
                          std::to_string(n + 1) + " samples");
        GridFunction g;
        g.n = n;
        g.values.resize(n + 1);
        for (int i = 0; i <= n; ++i) {
            if (!v[i].is_number())
                fail(src, std::string("coefficient '") + key + "' has a non-numeric entry");
            g.values[i] = v[i].get<double>();
        }
        const double scale = 1 + std::fabs(g.values[0]);
        g.periodic = std::fabs(g.values[0] - g.values[n]) <= 1e-9 * scale;
        return g;
    }
    fail(src, std::string("coefficient '") + key + "' must be a number, string, or array");
}

Curve curve_field(const json& j, const char* key, char var, const std::string& src) {
    if (!j.contains(key)) fail(src, std::string("missing nonlinearity '") + key + "'");
    const json& v = j[key];
    if (v.is_string()) {
        Expression ex;
        try {
            ex = parse_expression(v.get<std::string>());
        } catch (const ExprError& e) {
            fail(src, std::string("nonlinearity '") + key + "': " + e.what());
        }
        if (var == 'x')
            return {[ex](double x) { return ex.eval(0.0, x, 0.0); }, nullptr};
        return {[ex](double y) { return ex.eval(0.0, 0.0, y); }, nullptr};
    }
    if (v.is_object() && v.contains("preset")) {
        const std::string name = v["preset"].get<std::string>();
        try {
            if (name == "inverse_power")
                return preset_g_inverse_power(need_number(v, "lambda", src));
            if (name == "two_branch")
                return preset_h_two_branch(need_number(v, "lambda1", src),
                                           need_number(v, "lambda2", src));
            if (name == "odd_poly")
                return preset_h_odd_poly(need_number(v, "mu", src), need_number(v, "nu", src),
                                         static_cast<int>(need_number(v, "k", src)));
        } catch (const std::invalid_argument& e) {
            fail(src, std::string("preset '") + name + "': " + e.what());
        }
        fail(src, "unknown preset '" + name + "'");
    }
    fail(src, std::string("nonlinearity '") + key +
                  "' must be an expression string or a preset object");
}

LoadedProblem load_custom(const json& j, int n, const std::string& src) {
    if (!j.contains("f") || !j["f"].is_string())
        fail(src, "custom family needs an expression string 'f'");
    Expression ex;
    try {
        ex = parse_expression(j["f"].get<std::string>());
    } catch (const ExprError& e) {
        fail(src, std::string("'f': ") + e.what());
    }
    LoadedProblem out;
    out.n = n;
    out.built.family = "custom";
    out.built.prob.label = j.value("label", std::string("custom"));
    out.built.prob.f = [ex](double t, double x, double y) { return ex.eval(t, x, y); };
    if (j.contains("alpha") != j.contains("beta"))
        fail(src, "custom family needs both 'alpha' and 'beta' or neither");
    if (j.contains("alpha")) {
        out.built.bracket = bracket_from_grids(coeff_grid(j, "alpha", n, src),
                                               coeff_grid(j, "beta", n, src));
        out.has_bracket = true;
    }
    return out;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string jstr(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out + "\"";
}

void append_array(std::string& out, const std::vector<double>& v) {
    out += "[";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += fmt(v[i]);
    }
    out += "]";
}

}  // namespace

LoadedProblem load_problem_text(const std::string& text, const std::string& src,
                                int n_override) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw IoError(src + ":" + line_col(text, e.byte) + ": " + e.what());
    }
    if (!j.is_object()) fail(src, "problem file must be a JSON object");
    const std::string family = j.value("family", std::string());
    const int n = n_override > 0 ? n_override : j.value("n", 256);
    if (n < 16 || n > (1 << 20)) fail(src, "'n' out of range [16, 2^20]");

    try {
        if (family == "custom") return load_custom(j, n, src);
        if (family == "pendulum") {
            PendulumSpec spec;
            spec.mu = coeff_grid(j, "mu", n, src);
            spec.e = coeff_grid(j, "e", n, src);
            spec.r = need_number(j, "r", src);
            spec.d = j.value("d", 0.0);
            if (j.contains("ell") && j["ell"].is_number()) {
                const double lv = j["ell"].get<double>();
                spec.ell = [lv](double, double) { return lv; };
            } else if (j.contains("ell") && j["ell"].is_string()) {
                Expression ex;
                try {
                    ex = parse_expression(j["ell"].get<std::string>());
                } catch (const ExprError& e) {
                    fail(src, std::string("'ell': ") + e.what());
                }
                spec.ell = [ex](double t, double x) { return ex.eval(t, x, 0.0); };
            } else {
                fail(src, "pendulum needs 'ell' as a number or expression in t, x");
            }
            LoadedProblem out;
            out.n = n;
            out.built = build_pendulum(spec);
            out.has_bracket = true;
            return out;
        }
        if (family == "singular") {
            SingularSpec spec;
            spec.p = coeff_grid(j, "p", n, src);
            spec.e = coeff_grid(j, "e", n, src);
            spec.lambda = need_number(j, "lambda", src);
            spec.C = j.value("C", 1.0);
            spec.c = j.value("c", 0.0);
            LoadedProblem out;
            out.n = n;
            out.built = build_singular(spec);
            out.has_bracket = true;
            return out;
        }
        if (family == "duffing") {
            DuffingSpec spec;
            spec.p = coeff_grid(j, "p", n, src);
            spec.q = coeff_grid(j, "q", n, src);
            spec.e = coeff_grid(j, "e", n, src);
            spec.g = curve_field(j, "g", 'x', src);
            spec.h = curve_field(j, "h", 'y', src);
            spec.c = need_number(j, "c", src);
            const std::string variant = j.value("variant", std::string("example3"));
            if (variant == "example2")
                spec.variant = DuffingVariant::example2;
            else if (variant == "example3")
                spec.variant = DuffingVariant::example3;
            else
                fail(src, "'variant' must be example2 or example3");
            spec.n1 = j.value("n1", 0.0);
            spec.m = j.value("m", 0.0);
            LoadedProblem out;
            out.n = n;
            out.built = build_duffing(spec);
            out.has_bracket = true;
            return out;
        }
    } catch (const IoError&) {
        throw;
    } catch (const std::exception& e) {
        fail(src, e.what());
    }
    fail(src, "unknown family '" + family + "' (pendulum, singular, duffing, custom)");
}

LoadedProblem load_problem_file(const std::string& path, int n_override) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path + ": cannot open");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_problem_text(buf.str(), path, n_override);
}

std::string certificate_to_json(const Certificate& cert, const std::string& label) {
    std::string out = "{\n  \"label\": " + jstr(label) + ",\n  \"all_pass\": ";
    out += cert.all_pass() ? "true" : "false";
    out += ",\n  \"params\": {";
    bool first = true;
    for (const auto& [k, v] : cert.params) {
        if (!first) out += ", ";
        first = false;
        out += jstr(k) + ": " + fmt(v);
    }
    out += "},\n  \"records\": [\n";
    for (size_t i = 0; i < cert.records.size(); ++i) {
        const ConditionRecord& r = cert.records[i];
        out += "    {\"name\": " + jstr(r.name) + ", \"pass\": " + (r.pass ? "true" : "false") +
               ", \"margin\": " + fmt(r.margin) + ", \"method\": " + jstr(r.method);
        out += ", \"witness\": {\"t\": " + fmt(r.witness.t);
        if (r.witness.eta_index) out += ", \"eta_index\": " + std::to_string(*r.witness.eta_index);
        if (r.witness.z) out += ", \"z\": " + fmt(*r.witness.z);
        out += "}";
        if (!r.notes.empty()) out += ", \"notes\": " + jstr(r.notes);
        out += "}";
        if (i + 1 < cert.records.size()) out += ",";
        out += "\n";
    }
    out += "  ]\n}\n";
    return out;
}

std::string solve_result_to_json(const SolveResult& res, const std::string& label) {
    std::string out = "{\n  \"label\": " + jstr(label) + ",\n  \"method\": " + jstr(res.method) +
                      ",\n  \"converged\": " + (res.converged ? "true" : "false") +
                      ",\n  \"residual\": " + fmt(res.residual) +
                      ",\n  \"iterations\": " + std::to_string(res.iterations) +
                      ",\n  \"clamp_activity\": " + fmt(res.clamp_activity);
    if (res.in_band) out += std::string(",\n  \"in_band\": ") + (*res.in_band ? "true" : "false");
    if (res.slopes_ok)
        out += std::string(",\n  \"slopes_ok\": ") + (*res.slopes_ok ? "true" : "false");
    if (res.band_margin) out += ",\n  \"band_margin\": " + fmt(*res.band_margin);
    out += ",\n  \"history\": ";
    append_array(out, res.history);
    out += ",\n  \"n\": " + std::to_string(res.x.n);
    out += ",\n  \"x\": ";
    append_array(out, res.x.values);
    out += ",\n  \"dx\": ";
    append_array(out, res.x.derivative);
    out += "\n}\n";
    return out;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path + ": cannot open for writing");
    out << text;
    if (!out) throw IoError(path + ": write failed");
}

}  // namespace pbvp
