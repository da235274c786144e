#include "osbk_app/app.hpp"

#include "osbk/correspondence.hpp"
#include "osbk/error.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <set>

namespace osbk::app {

namespace {

[[noreturn]] void config_error(const std::string& what) { raise(ErrorCode::Config, what); }

void allow_keys(const json& j, const std::set<std::string>& allowed, const std::string& where)
{
    if (!j.is_object()) config_error(where + " must be an object");
    for (const auto& [key, value] : j.items())
        if (!allowed.count(key)) config_error("unknown key '" + key + "' in " + where);
}

double number(const json& j, const std::string& what)
{
    if (!j.is_number()) config_error(what + " must be a number");
    return j.get<double>();
}

int integer(const json& j, const std::string& what)
{
    if (!j.is_number_integer()) config_error(what + " must be an integer");
    return j.get<int>();
}

std::vector<double> numbers(const json& j, const std::string& what)
{
    if (!j.is_array()) config_error(what + " must be an array of numbers");
    std::vector<double> v;
    for (std::size_t i = 0; i < j.size(); ++i) v.push_back(number(j[i], what + "[" + std::to_string(i) + "]"));
    return v;
}

const std::map<std::string, std::set<std::string>>& command_keys()
{
    static const std::map<std::string, std::set<std::string>> keys{
        {"step", {"point", "branches", "starts"}},
        {"iterate", {"point", "steps", "branch", "candidate"}},
        {"periodic", {"n", "starts", "mode"}},
        {"even-search", {"n", "starts", "max_iterations"}},
        {"shoot", {"n", "l1", "l2", "starts", "ll_probes", "ll_samples"}},
        {"wall", {"t_samples", "plane_grid", "probes", "delta", "eta_t_min", "eta_t_max", "eta_points"}},
        {"classify", {"coeffs", "trials"}},
        {"integrability", {"point", "steps", "bracket_points", "branch"}},
        {"check", {"samples", "probes", "convexity_samples"}},
    };
    return keys;
}

std::vector<TrigTerm> parse_terms(const json& j, const std::string& where, int m)
{
    if (!j.is_array()) config_error(where + " must be an array of terms");
    std::vector<TrigTerm> terms;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string w = where + "[" + std::to_string(i) + "]";
        allow_keys(j[i], {"freq", "cos", "sin"}, w);
        TrigTerm t;
        if (!j[i].contains("freq") || !j[i]["freq"].is_array()) config_error(w + ".freq must be an integer array");
        for (const auto& f : j[i]["freq"]) t.freq.push_back(integer(f, w + ".freq"));
        if (static_cast<int>(t.freq.size()) != m) config_error(w + ".freq must have length m = " + std::to_string(m));
        if (j[i].contains("cos")) t.cos_amp = number(j[i]["cos"], w + ".cos");
        if (j[i].contains("sin")) t.sin_amp = number(j[i]["sin"], w + ".sin");
        terms.push_back(std::move(t));
    }
    return terms;
}

TrigImmersion parse_trig(const json& j)
{
    if (j.contains("preset")) {
        if (j.contains("coords") || j.contains("m")) config_error("manifold: give either 'preset' or 'm'/'coords'");
        const std::string p = j["preset"].is_string() ? j["preset"].get<std::string>() : "";
        if (p != "circle" && j.contains("radius")) config_error("manifold.radius only applies to the circle preset");
        if (p == "circle") return TrigImmersion::circle(j.contains("radius") ? number(j["radius"], "manifold.radius") : 1.0);
        if (p == "reversed_circle") return TrigImmersion::reversed_circle();
        if (p == "chebyshev") return TrigImmersion::chebyshev();
        if (p == "symplectic_torus") return TrigImmersion::symplectic_torus();
        if (p == "legendrian_curve") return TrigImmersion::legendrian_curve();
        if (p == "x_subspace_torus") return TrigImmersion::x_subspace_torus();
        config_error("manifold.preset: unknown preset '" + p + "'");
    }
    if (!j.contains("m") || !j.contains("coords")) config_error("trig manifold needs 'preset' or both 'm' and 'coords'");
    const int m = integer(j["m"], "manifold.m");
    if (!j["coords"].is_array()) config_error("manifold.coords must be an array");
    std::vector<std::vector<TrigTerm>> coords;
    for (std::size_t c = 0; c < j["coords"].size(); ++c)
        coords.push_back(parse_terms(j["coords"][c], "manifold.coords[" + std::to_string(c) + "]", m));
    return TrigImmersion(m, std::move(coords));
}

GeneratingGraph parse_graph(const json& j)
{
    if (j.contains("cubic")) {
        if (j.contains("terms") || j.contains("n")) config_error("manifold: give either 'cubic' or 'n'/'terms'");
        const auto c = numbers(j["cubic"], "manifold.cubic");
        if (c.size() != 4) config_error("manifold.cubic must hold 4 coefficients (a, b, c, d)");
        return GeneratingGraph(Polynomial::cubic2(c[0], c[1], c[2], c[3]));
    }
    if (!j.contains("n") || !j.contains("terms")) config_error("graph manifold needs 'cubic' or both 'n' and 'terms'");
    const int n = integer(j["n"], "manifold.n");
    if (n < 1) config_error("manifold.n must be positive");
    Polynomial f(n);
    if (!j["terms"].is_array()) config_error("manifold.terms must be an array");
    for (std::size_t i = 0; i < j["terms"].size(); ++i) {
        const std::string w = "manifold.terms[" + std::to_string(i) + "]";
        allow_keys(j["terms"][i], {"exp", "coef"}, w);
        if (!j["terms"][i].contains("exp") || !j["terms"][i].contains("coef")) config_error(w + " needs 'exp' and 'coef'");
        Exponents e;
        for (const auto& x : j["terms"][i]["exp"]) e.push_back(integer(x, w + ".exp"));
        if (static_cast<int>(e.size()) != n) config_error(w + ".exp must have length n");
        f.add_term(e, number(j["terms"][i]["coef"], w + ".coef"));
    }
    return GeneratingGraph(std::move(f));
}

}  // namespace

const std::vector<std::string>& command_names()
{
    static const std::vector<std::string> names{"step", "iterate", "periodic", "even-search", "shoot",
                                                "wall", "classify", "integrability", "check"};
    return names;
}

PhaseVector vector_from_json(const json& j, const std::string& what)
{
    const auto v = numbers(j, what);
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

ManifoldSpec parse_manifold(const json& j)
{
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        config_error("manifold must be an object with a string 'kind'");
    const std::string kind = j["kind"];
    std::optional<AffineSymplecticMap> transform;
    if (j.contains("transform")) {
        const json& t = j["transform"];
        allow_keys(t, {"linear", "translation"}, "manifold.transform");
        if (!t.contains("linear") || !t["linear"].is_array()) config_error("manifold.transform.linear must be a matrix");
        const Eigen::Index dim = static_cast<Eigen::Index>(t["linear"].size());
        AffineSymplecticMap map = AffineSymplecticMap::identity(dim);
        for (Eigen::Index r = 0; r < dim; ++r) {
            const auto row = numbers(t["linear"][static_cast<std::size_t>(r)], "manifold.transform.linear row");
            if (static_cast<Eigen::Index>(row.size()) != dim) config_error("manifold.transform.linear must be square");
            for (Eigen::Index c = 0; c < dim; ++c) map.linear(r, c) = row[static_cast<std::size_t>(c)];
        }
        if (t.contains("translation")) map.translation = vector_from_json(t["translation"], "manifold.transform.translation");
        transform = map;
    }
    std::optional<ParamBox> box;
    if (j.contains("box")) {
        allow_keys(j["box"], {"lo", "hi"}, "manifold.box");
        if (!j["box"].contains("lo") || !j["box"].contains("hi")) config_error("manifold.box needs 'lo' and 'hi'");
        box = ParamBox{vector_from_json(j["box"]["lo"], "manifold.box.lo"), vector_from_json(j["box"]["hi"], "manifold.box.hi")};
    }
    try {
        if (kind == "trig") {
            allow_keys(j, {"kind", "preset", "radius", "m", "coords", "transform", "box"}, "manifold");
            return ManifoldSpec(parse_trig(j), transform, box);
        }
        if (kind == "ellipsoid") {
            allow_keys(j, {"kind", "axes", "transform", "box"}, "manifold");
            if (!j.contains("axes")) config_error("ellipsoid manifold needs 'axes'");
            return ManifoldSpec(SymplecticEllipsoid{numbers(j["axes"], "manifold.axes")}, transform, box);
        }
        if (kind == "graph") {
            allow_keys(j, {"kind", "cubic", "n", "terms", "transform", "box"}, "manifold");
            return ManifoldSpec(parse_graph(j), transform, box);
        }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Config) throw;
        config_error("manifold: " + std::string(e.what()));
    }
    config_error("manifold.kind must be 'trig', 'ellipsoid' or 'graph', got '" + kind + "'");
}

AffineLagrangian parse_lagrangian(const json& j, Eigen::Index dim)
{
    if (j.is_string()) {
        const std::string s = j;
        if (s == "x") return AffineLagrangian::x_subspace(dim / 2);
        if (s == "y") return AffineLagrangian::y_subspace(dim / 2);
        config_error("Lagrangian subspace shorthand must be 'x' or 'y'");
    }
    allow_keys(j, {"base", "basis"}, "Lagrangian subspace");
    if (!j.contains("basis") || !j["basis"].is_array()) config_error("Lagrangian subspace needs a 'basis' array");
    AffineLagrangian l;
    l.base = j.contains("base") ? vector_from_json(j["base"], "base") : PhaseVector::Zero(dim);
    for (const auto& b : j["basis"]) l.basis.push_back(vector_from_json(b, "basis vector"));
    try {
        l.validate();
    } catch (const Error& e) {
        config_error(std::string("Lagrangian subspace: ") + e.what());
    }
    if (l.base.size() != dim) config_error("Lagrangian subspace lives in the wrong dimension");
    return l;
}

RunConfig parse_config(const std::string& command, const json& root)
{
    const auto& keys = command_keys();
    if (!keys.count(command)) config_error("unknown command '" + command + "'");
    allow_keys(root, {"manifold", "command", "seed", "out", "tolerances", "threads"}, "config");
    RunConfig cfg;
    cfg.command = command;
    if (command != "classify") {
        if (!root.contains("manifold")) config_error("config needs a 'manifold' block");
        cfg.manifold = root["manifold"];
        parse_manifold(cfg.manifold);
    } else if (root.contains("manifold")) {
        cfg.manifold = root["manifold"];
        parse_manifold(cfg.manifold);
    }
    if (root.contains("command")) {
        allow_keys(root["command"], keys.at(command), "command (" + command + ")");
        cfg.params = root["command"];
    }
    if (root.contains("seed")) {
        const json& s = root["seed"];
        if (!s.is_number_integer() || (!s.is_number_unsigned() && s.get<std::int64_t>() < 0))
            config_error("seed must be a non-negative integer");
        cfg.seed = root["seed"].get<std::uint64_t>();
    }
    if (root.contains("out")) {
        if (!root["out"].is_string()) config_error("out must be a path string");
        cfg.out = root["out"].get<std::string>();
    }
    if (root.contains("threads")) {
        const int t = integer(root["threads"], "threads");
        if (t < 0) config_error("threads must be non-negative");
        cfg.threads = static_cast<unsigned>(t);
    }
    if (root.contains("tolerances")) {
        const json& t = root["tolerances"];
        allow_keys(t, {"geometric", "residual", "dedup", "degeneracy", "gradient"}, "tolerances");
        auto set = [&](const char* k, double& field) {
            if (!t.contains(k)) return;
            field = number(t[k], std::string("tolerances.") + k);
            if (!(field > 0.0)) config_error(std::string("tolerances.") + k + " must be positive");
        };
        set("geometric", cfg.tol.geometric);
        set("residual", cfg.tol.residual);
        set("dedup", cfg.tol.dedup);
        set("degeneracy", cfg.tol.degeneracy);
        set("gradient", cfg.tol.gradient);
    }
    return cfg;
}

json to_json(const PhaseVector& v)
{
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

json to_json(const OrbitPolyline& o)
{
    json j;
    j["kind"] = o.kind == OrbitKind::Periodic ? "periodic" : "boundary";
    j["vertices"] = json::array();
    for (const auto& v : o.vertices) j["vertices"].push_back(to_json(v));
    j["midpoint_params"] = json::array();
    for (const auto& u : o.midpoint_params) j["midpoint_params"].push_back(to_json(u));
    j["area"] = o.area;
    j["objective"] = o.objective;
    j["gradient_norm"] = o.gradient_norm;
    j["max_residual"] = o.max_residual;
    j["min_midpoint_gap"] = o.min_midpoint_gap;
    j["degenerate"] = o.degenerate;
    return j;
}

OrbitPolyline orbit_from_json(const json& j)
{
    OrbitPolyline o;
    allow_keys(j, {"kind", "vertices", "midpoint_params", "area", "objective", "gradient_norm", "max_residual",
                   "min_midpoint_gap", "degenerate"},
               "orbit");
    const std::string kind = j.value("kind", "periodic");
    if (kind != "periodic" && kind != "boundary") config_error("orbit.kind must be 'periodic' or 'boundary'");
    o.kind = kind == "periodic" ? OrbitKind::Periodic : OrbitKind::Boundary;
    if (!j.contains("vertices") || !j.contains("midpoint_params")) config_error("orbit needs vertices and midpoint_params");
    for (const auto& v : j["vertices"]) o.vertices.push_back(vector_from_json(v, "orbit vertex"));
    for (const auto& u : j["midpoint_params"]) o.midpoint_params.push_back(vector_from_json(u, "orbit midpoint param"));
    const std::size_t links = o.kind == OrbitKind::Periodic ? o.vertices.size() : o.vertices.size() - 1;
    if (o.vertices.empty() || links != o.midpoint_params.size()) config_error("orbit: vertex and midpoint counts disagree");
    o.area = j.value("area", 0.0);
    o.objective = j.value("objective", 0.0);
    o.gradient_norm = j.value("gradient_norm", 0.0);
    o.max_residual = j.value("max_residual", 0.0);
    o.min_midpoint_gap = j.value("min_midpoint_gap", 0.0);
    o.degenerate = j.value("degenerate", false);
    return o;
}

OrbitCheck revalidate_orbit(const ManifoldSpec& spec, const OrbitPolyline& orbit)
{
    OrbitCheck c;
    const std::size_t n = orbit.midpoint_params.size();
    for (std::size_t i = 0; i < n; ++i) {
        const PhaseVector& a = orbit.vertices[i];
        const PhaseVector& b = orbit.vertices[(i + 1) % orbit.vertices.size()];
        const PairReport r = verify_pair(spec, a, b, orbit.midpoint_params[i]);
        c.max_relative = std::max(c.max_relative, r.relative);
        c.max_midpoint_error = std::max(c.max_midpoint_error, r.midpoint_error);
    }
    return c;
}

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) raise(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
    for (std::size_t i = 0; i < header.size(); ++i) f << (i ? "," : "") << header[i];
    f << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) f << (i ? "," : "") << format_double(row[i]);
        f << '\n';
    }
    if (!f) raise(ErrorCode::Io, "failed writing '" + path.string() + "'");
}

void write_json(const std::filesystem::path& path, const json& j)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) raise(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
    f << j.dump(2) << '\n';
    if (!f) raise(ErrorCode::Io, "failed writing '" + path.string() + "'");
}

}  // namespace osbk::app
