#include "osbk_app/app.hpp"

#include "osbk/correspondence.hpp"
#include "osbk/error.hpp"
#include "osbk/integrability.hpp"
#include "osbk/parallel.hpp"
#include "osbk/random.hpp"
#include "osbk/wall.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace osbk::app {

namespace {

namespace fs = std::filesystem;

[[noreturn]] void config_error(const std::string& what) { raise(ErrorCode::Config, what); }

int p_int(const json& p, const char* key, int def)
{
    if (!p.contains(key)) return def;
    if (!p[key].is_number_integer()) config_error(std::string("command.") + key + " must be an integer");
    return p[key].get<int>();
}

double p_num(const json& p, const char* key, double def)
{
    if (!p.contains(key)) return def;
    if (!p[key].is_number()) config_error(std::string("command.") + key + " must be a number");
    return p[key].get<double>();
}

std::string p_str(const json& p, const char* key, const std::string& def)
{
    if (!p.contains(key)) return def;
    if (!p[key].is_string()) config_error(std::string("command.") + key + " must be a string");
    return p[key].get<std::string>();
}

std::size_t p_count(const json& p, const char* key, int def)
{
    const int v = p_int(p, key, def);
    if (v < 1) config_error(std::string("command.") + key + " must be positive");
    return static_cast<std::size_t>(v);
}

PhaseVector p_point(const json& p, const char* key, Eigen::Index dim)
{
    if (!p.contains(key)) config_error(std::string("command.") + key + " is required");
    PhaseVector z = vector_from_json(p[key], std::string("command.") + key);
    if (z.size() != dim)
        config_error(std::string("command.") + key + " must have " + std::to_string(dim) + " coordinates");
    return z;
}

Branch parse_branch(const std::string& s)
{
    if (s == "plus") return Branch::Plus;
    if (s == "minus") return Branch::Minus;
    config_error("branch must be 'plus' or 'minus', got '" + s + "'");
}

std::vector<std::string> coord_names(Eigen::Index dim)
{
    std::vector<std::string> names;
    for (Eigen::Index i = 0; i < dim / 2; ++i) {
        names.push_back("x" + std::to_string(i + 1));
        names.push_back("y" + std::to_string(i + 1));
    }
    return names;
}

std::vector<double> row_of(double lead, const PhaseVector& v)
{
    std::vector<double> r{lead};
    for (Eigen::Index i = 0; i < v.size(); ++i) r.push_back(v[i]);
    return r;
}

void write_vertices(RunResult& res, const fs::path& path, const std::vector<PhaseVector>& vertices)
{
    if (vertices.empty()) return;
    std::vector<std::string> header{"index"};
    for (auto& n : coord_names(vertices.front().size())) header.push_back(n);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < vertices.size(); ++i) rows.push_back(row_of(static_cast<double>(i), vertices[i]));
    write_csv(path, header, rows);
    res.artifacts.push_back(path);
}

json candidate_json(const StepCandidate& c)
{
    return {{"partner", to_json(c.partner)},
            {"midpoint", to_json(c.midpoint)},
            {"midpoint_param", to_json(c.midpoint_param)},
            {"residual", c.residual},
            {"degenerate", c.degenerate},
            {"on_wall", c.on_wall}};
}

StepOptions step_options(const RunConfig& cfg, std::size_t starts)
{
    StepOptions o;
    o.curve.tol = cfg.tol;
    o.numeric.starts = starts;
    o.numeric.seed = cfg.seed;
    o.numeric.threads = cfg.threads;
    o.numeric.tol = cfg.tol;
    return o;
}

/// Next vertex of an orbit: the non-degenerate partner farthest from the
/// previous vertex, or candidate `first` on the first step.
const StepCandidate& pick_next(const std::vector<StepCandidate>& cands, const std::optional<PhaseVector>& previous,
                               std::size_t first)
{
    std::vector<const StepCandidate*> ok;
    for (const auto& c : cands)
        if (!c.degenerate) ok.push_back(&c);
    if (ok.empty()) raise(ErrorCode::Domain, "no non-degenerate partner; the orbit stops (point on the table?)");
    if (!previous) {
        if (first >= ok.size())
            config_error("command.candidate = " + std::to_string(first) + " but only " + std::to_string(ok.size()) +
                         " partners exist");
        return *ok[first];
    }
    const StepCandidate* best = ok.front();
    for (const auto* c : ok)
        if ((c->partner - *previous).norm() > (best->partner - *previous).norm()) best = c;
    return *best;
}

std::vector<PhaseVector> random_probes(const ManifoldSpec& spec, std::size_t count, std::uint64_t seed)
{
    Rng rng(seed);
    const double s = 2.0 * std::max(1.0, spec.scale());
    std::vector<PhaseVector> probes;
    for (std::size_t i = 0; i < count; ++i) {
        PhaseVector p(spec.ambient_dim());
        for (Eigen::Index k = 0; k < p.size(); ++k) p[k] = rng.uniform(-s, s);
        probes.push_back(p);
    }
    return probes;
}

json histogram_json(const std::map<std::size_t, std::size_t>& h)
{
    json j = json::object();
    for (const auto& [k, v] : h) j[std::to_string(k)] = v;
    return j;
}

// ------------------------------------------------------------ commands

void cmd_step(const RunConfig& cfg, const ManifoldSpec& spec, RunResult& res)
{
    const PhaseVector z = p_point(cfg.params, "point", spec.ambient_dim());
    StepOptions o = step_options(cfg, p_count(cfg.params, "starts", 64));
    if (cfg.params.contains("branches")) {
        o.branches.clear();
        for (const auto& b : cfg.params["branches"]) {
            if (!b.is_string()) config_error("command.branches must be strings");
            o.branches.push_back(parse_branch(b.get<std::string>()));
        }
    }
    const auto cands = step(spec, z, o);
    json list = json::array();
    std::vector<PhaseVector> partners;
    for (const auto& c : cands) {
        list.push_back(candidate_json(c));
        partners.push_back(c.partner);
    }
    res.result["point"] = to_json(z);
    res.result["count"] = cands.size();
    res.result["candidates"] = list;
    write_vertices(res, cfg.out / "candidates.csv", partners);
}

void cmd_iterate(const RunConfig& cfg, const ManifoldSpec& spec, RunResult& res)
{
    PhaseVector z = p_point(cfg.params, "point", spec.ambient_dim());
    const std::size_t steps = p_count(cfg.params, "steps", 100);
    StepOptions o = step_options(cfg, 64);
    o.branches = {parse_branch(p_str(cfg.params, "branch", "plus"))};
    const std::size_t first = static_cast<std::size_t>(std::max(0, p_int(cfg.params, "candidate", 0)));
    std::vector<PhaseVector> vertices{z};
    std::optional<PhaseVector> previous;
    double worst = 0.0;
    for (std::size_t k = 0; k < steps; ++k) {
        const auto cands = step(spec, z, o);
        const StepCandidate& c = pick_next(cands, previous, first);
        worst = std::max(worst, c.residual);
        previous = z;
        z = c.partner;
        vertices.push_back(z);
    }
    res.result["steps"] = steps;
    res.result["start"] = to_json(vertices.front());
    res.result["final"] = to_json(vertices.back());
    res.result["max_residual"] = worst;
    write_vertices(res, cfg.out / "orbit.csv", vertices);
}

SearchOptions search_options(const RunConfig& cfg)
{
    SearchOptions o;
    o.starts = p_count(cfg.params, "starts", 64);
    o.seed = cfg.seed;
    o.threads = cfg.threads;
    o.tol = cfg.tol;
    const std::string mode = p_str(cfg.params, "mode", "max");
    if (mode != "max" && mode != "min") config_error("command.mode must be 'max' or 'min'");
    o.mode = mode == "max" ? SearchMode::Max : SearchMode::Min;
    return o;
}

void cmd_periodic(const RunConfig& cfg, const ManifoldSpec& spec, RunResult& res)
{
    const int n = p_int(cfg.params, "n", 3);
    const SearchOptions o = search_options(cfg);
    const SearchResult r = find_periodic_orbit(spec, n, o);
    res.result["n"] = n;
    res.result["mode"] = to_string(o.mode);
    res.result["status"] = to_string(r.status);
    res.result["starts"] = r.starts;
    res.result["converged"] = r.converged;
    res.result["distinct"] = r.orbits.size();
    json objectives = json::array();
    for (const auto& orb : r.orbits) objectives.push_back(orb.objective);
    res.result["objectives"] = objectives;
    if (r.best) {
        res.result["orbit"] = to_json(*r.best);
        res.result["area"] = r.best->area;
        write_vertices(res, cfg.out / "orbit.csv", r.best->vertices);
    }
    if (r.status != SearchStatus::Ok) res.exit_code = SearchFailed;
}

void cmd_even(const RunConfig& cfg, const ManifoldSpec& spec, RunResult& res)
{
    EvenSearchOptions o;
    const int n = p_int(cfg.params, "n", 4);
    o.starts = p_count(cfg.params, "starts", 64);
    o.max_iterations = static_cast<int>(p_count(cfg.params, "max_iterations", 300));
    o.seed = cfg.seed;
    o.threads = cfg.threads;
    o.tol = cfg.tol;
    const EvenSearchResult r = search_even_periodic(spec, n, o);
    res.result["n"] = n;
    res.result["starts"] = r.starts;
    res.result["converged"] = r.converged;
    res.result["nondegenerate_found"] = r.nondegenerate;
    res.result["degenerate_found"] = r.degenerate;
    res.result["distinct"] = r.orbits.size();
    double max_gap = 0.0;
    for (const auto& orb : r.orbits) max_gap = std::max(max_gap, orb.min_midpoint_gap);
    res.result["max_min_midpoint_gap"] = max_gap;
    json nondeg = json::array();
    for (const auto& orb : r.orbits)
        if (!orb.degenerate) nondeg.push_back(to_json(orb));
    res.result["nondegenerate_orbits"] = nondeg;
    for (const auto& orb : r.orbits)
        if (!orb.degenerate) {
            write_vertices(res, cfg.out / "orbit.csv", orb.vertices);
            break;
        }
}

void cmd_shoot(const RunConfig& cfg, const ManifoldSpec& spec, RunResult& res)
{
    const Eigen::Index dim = spec.ambient_dim();
    const AffineLagrangian l1 = parse_lagrangian(cfg.params.value("l1", json("x")), dim);
    const AffineLagrangian l2 = parse_lagrangian(cfg.params.value("l2", json("y")), dim);
    std::vector<int> ns;
    if (cfg.params.contains("n") && cfg.params["n"].is_array()) {
        for (const auto& v : cfg.params["n"]) {
            if (!v.is_number_integer()) config_error("command.n must hold integers");
            ns.push_back(v.get<int>());
        }
    } else {
        ns.push_back(p_int(cfg.params, "n", 1));
    }
    const std::size_t probes = p_count(cfg.params, "ll_probes", 16);
    const int ll_samples = static_cast<int>(p_count(cfg.params, "ll_samples", 128));
    const auto ll = check_condition_LL(spec, random_probes(spec, probes, split_seed(cfg.seed, 1)), ll_samples,
                                       split_seed(cfg.seed, 2), cfg.tol);
    res.result["ll_certified"] = ll.holds;
    SearchOptions o = search_options(cfg);
    json runs = json::array();
    bool all_ok = true;
    for (int n : ns) {
        const BoundaryResult r = find_boundary_orbit(spec, l1, l2, n, o);
        json j{{"n", n}, {"status", to_string(r.status)}, {"distinct_critical_points", r.orbits.size()}};
        if (r.best_max) {
            j["max"] = to_json(*r.best_max);
            write_vertices(res, cfg.out / ("orbit_max_n" + std::to_string(n) + ".csv"), r.best_max->vertices);
        }
        if (r.best_min) {
            j["min"] = to_json(*r.best_min);
            write_vertices(res, cfg.out / ("orbit_min_n" + std::to_string(n) + ".csv"), r.best_min->vertices);
        }
        bool distinct = false;
        if (r.best_max && r.best_min) {
            double d = 0.0;
            for (std::size_t i = 0; i < r.best_max->midpoint_params.size(); ++i)
                d = std::max(d, spec.param_distance(r.best_max->midpoint_params[i], r.best_min->midpoint_params[i]));
            distinct = d > cfg.tol.dedup;
        }
        j["distinct"] = distinct;
        if (r.status != SearchStatus::Ok) all_ok = false;
        runs.push_back(j);
    }
    res.result["runs"] = runs;
    if (!all_ok) res.exit_code = SearchFailed;
}

void cmd_wall(const RunConfig& cfg, const ManifoldSpec& spec, RunResult& res)
{
    const TrigImmersion* curve = spec.trig();
    if (!curve || curve->param_dim() != 1 || spec.transform())
        config_error("wall needs an untransformed trigonometric curve (m = 1)");
    const std::size_t nt = p_count(cfg.params, "t_samples", 64);
    std::vector<double> plane{-1.0, -0.5, 0.0, 0.5, 1.0};
    if (cfg.params.contains("plane_grid")) {
        plane.clear();
        for (const auto& v : cfg.params["plane_grid"]) {
            if (!v.is_number()) config_error("command.plane_grid must hold numbers");
            plane.push_back(v.get<double>());
        }
    }
    std::vector<double> ts;
    for (std::size_t i = 0; i < nt; ++i) ts.push_back(2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(nt));
    const auto samples = curve_wall_samples(*curve, ts, plane);
    const Eigen::Index dim = curve->ambient_dim();
    std::vector<std::string> header{"t"};
    for (Eigen::Index i = 0; i + 2 < dim; ++i) header.push_back("s" + std::to_string(i + 1));
    for (auto& n : coord_names(dim)) header.push_back(n);
    header.push_back("singular_residual");
    std::vector<std::vector<double>> rows;
    std::size_t deficient = 0;
    double max_eq = 0.0;
    for (const auto& s : samples) {
        std::vector<double> r{s.t};
        r.insert(r.end(), s.plane.begin(), s.plane.end());
        for (Eigen::Index k = 0; k < dim; ++k) r.push_back(s.point[k]);
        r.push_back(s.singular_residual);
        rows.push_back(std::move(r));
        if (s.rank_deficient) ++deficient;
        max_eq = std::max(max_eq, curve_wall_equations(*curve, s.point, s.t).cwiseAbs().maxCoeff());
    }
    write_csv(cfg.out / "wall.csv", header, rows);
    res.artifacts.push_back(cfg.out / "wall.csv");

    const std::size_t np = p_count(cfg.params, "probes", 200);
    const double delta = p_num(cfg.params, "delta", 1e-2);
    std::vector<std::array<long, 2>> counts(np);
    MultiplicityOptions mo;
    mo.roots.tol = cfg.tol;
    parallel_for(np, resolve_threads(cfg.threads), [&](std::size_t i) {
        const double t = 2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(np);
        const PhaseVector g = curve->curve_derivative(t, 0), g2 = curve->curve_derivative(t, 2);
        for (int side = 0; side < 2; ++side) {
            try {
                counts[i][side] = static_cast<long>(multiplicity_curve(*curve, g + (side == 0 ? delta : -delta) * g2, mo));
            } catch (const UnstableCountError&) {
                counts[i][side] = -1;
            }
        }
    });
    std::map<std::size_t, std::size_t> plus, minus;
    std::size_t unstable = 0;
    std::vector<std::vector<double>> prow;
    for (std::size_t i = 0; i < np; ++i) {
        const double t = 2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(np);
        for (int side = 0; side < 2; ++side) {
            const long c = counts[i][side];
            prow.push_back({t, side == 0 ? 1.0 : -1.0, static_cast<double>(c)});
            if (c < 0) ++unstable;
            else (side == 0 ? plus : minus)[static_cast<std::size_t>(c)] += 1;
        }
    }
    write_csv(cfg.out / "probes.csv", {"t", "side", "count"}, prow);
    res.artifacts.push_back(cfg.out / "probes.csv");

    const ConvexityProfile conv = symplectic_convexity_profile(*curve);
    res.result["samples"] = samples.size();
    res.result["rank_deficient"] = deficient;
    res.result["max_wall_equation_residual"] = max_eq;
    res.result["convexity"] = {{"min", conv.min}, {"max", conv.max}, {"convex", conv.convex}};
    res.result["probes"] = {{"delta", delta},
                            {"plus", histogram_json(plus)},
                            {"minus", histogram_json(minus)},
                            {"unstable", unstable}};
    if (conv.convex) {
        const EtaFit eta = eta_expansion_check(*curve, 0.0, p_num(cfg.params, "eta_t_min", 1e-4),
                                               p_num(cfg.params, "eta_t_max", 1e-2),
                                               static_cast<int>(p_count(cfg.params, "eta_points", 25)));
        res.result["eta"] = {{"c2", eta.c2}, {"c3", eta.c3}, {"target", eta.target}, {"relative_error", eta.relative_error}};
    }
}

void cmd_classify(const RunConfig& cfg, const std::optional<ManifoldSpec>& spec, RunResult& res)
{
    CubicForm2 f;
    if (cfg.params.contains("coeffs")) {
        const PhaseVector c = vector_from_json(cfg.params["coeffs"], "command.coeffs");
        if (c.size() != 4) config_error("command.coeffs must hold 4 coefficients (a, b, c, d)");
        f = {c[0], c[1], c[2], c[3]};
    } else if (spec && spec->graph() && !spec->transform()) {
        try {
            f = CubicForm2::from_polynomial(spec->graph()->function());
        } catch (const Error& e) {
            config_error(std::string("classify: ") + e.what());
        }
    } else {
        config_error("classify needs command.coeffs or an untransformed cubic graph manifold");
    }
    const std::size_t trials = p_count(cfg.params, "trials", 1000);
    const Classification c = classify_cubic_table(f, trials, cfg.seed, cfg.threads);
    const RuledReport rr = ruled_test(f);
    res.result["coeffs"] = {f.a, f.b, f.c, f.d};
    res.result["D"] = c.discriminant;
    res.result["class"] = c.cls;
    res.result["trials"] = trials;
    res.result["histogram"] = histogram_json(c.histogram);
    res.result["redraws"] = c.redraws;
    res.result["resultant"] = rr.resultant;
    res.result["resultant_consistent"] = rr.resultant_consistent;
    res.result["ruling"] = c.ruling ? to_json(*c.ruling) : json(nullptr);
}

void cmd_integrability(const RunConfig& cfg, const ManifoldSpec& spec, RunResult& res)
{
    const IntegralSet set = integrals_for(spec);
    const Eigen::Index dim = spec.ambient_dim();
    const double s = std::max(1.0, spec.scale());

    const std::size_t nb = p_count(cfg.params, "bracket_points", 1000);
    Rng rng(split_seed(cfg.seed, 0));
    double worst_bracket = 0.0;
    for (std::size_t i = 0; i < nb; ++i) {
        PhaseVector z(dim);
        for (Eigen::Index k = 0; k < dim; ++k) z[k] = s * rng.normal();
        worst_bracket = std::max(worst_bracket, max_bracket(set, z));
    }

    PhaseVector z(dim);
    if (cfg.params.contains("point")) {
        z = p_point(cfg.params, "point", dim);
    } else {
        Rng pr(split_seed(cfg.seed, 1));
        for (Eigen::Index k = 0; k < dim; ++k) z[k] = s * pr.normal();
        if (const auto* e = spec.ellipsoid(); e && !spec.transform()) z *= 2.0 / std::sqrt(e->level(z));
    }
    const std::size_t steps = p_count(cfg.params, "steps", 1000);
    StepOptions o = step_options(cfg, 16);
    o.branches = {parse_branch(p_str(cfg.params, "branch", "plus"))};
    InvarianceAuditor auditor(spec, set);
    const Eigen::VectorXd v0 = set.values(z);
    std::vector<std::vector<double>> rows{row_of(0.0, Eigen::VectorXd::Zero(v0.size()))};
    std::optional<PhaseVector> previous;
    std::vector<double> cumulative(set.size(), 0.0);
    for (std::size_t k = 0; k < steps; ++k) {
        const auto cands = step(spec, z, o);
        const StepCandidate& c = pick_next(cands, previous, 0);
        auditor.add(z, c.partner);
        previous = z;
        z = c.partner;
        const Eigen::VectorXd d = set.values(z) - v0;
        for (std::size_t i = 0; i < set.size(); ++i)
            cumulative[i] = std::max(cumulative[i], std::abs(d[static_cast<Eigen::Index>(i)]) /
                                                        std::max(1.0, std::abs(v0[static_cast<Eigen::Index>(i)])));
        rows.push_back(row_of(static_cast<double>(k + 1), d));
    }
    std::vector<std::string> header{"step"};
    for (std::size_t i = 0; i < set.size(); ++i) header.push_back("I_" + std::to_string(i + 1));
    write_csv(cfg.out / "drift.csv", header, rows);
    res.artifacts.push_back(cfg.out / "drift.csv");

    const AuditReport& a = auditor.report();
    json names = json::array();
    for (const auto& I : set.integrals) names.push_back(I.name);
    res.result["kind"] = to_string(set.kind);
    res.result["integrals"] = names;
    res.result["bracket_points"] = nb;
    res.result["max_abs_bracket"] = worst_bracket;
    res.result["steps"] = a.steps;
    res.result["initial_values"] = to_json(v0);
    res.result["max_abs_drift"] = a.max_abs_drift;
    res.result["max_rel_drift"] = a.max_rel_drift;
    res.result["cumulative_rel_drift"] = cumulative;
    res.result["worst_step"] = a.worst_step;
    res.result["matched_sign"] = a.matched_sign;
    if (set.kind == IntegralKind::CubicGraph)
        res.result["tensor_error"] = {{"plus", a.tensor_error_plus}, {"minus", a.tensor_error_minus}};
}

void cmd_check(const RunConfig& cfg, const ManifoldSpec& spec, RunResult& res)
{
    const int samples = static_cast<int>(p_count(cfg.params, "samples", 512));
    const ConditionLResult l = check_condition_L(spec, samples, cfg.seed, cfg.tol);
    json lj{{"holds", l.holds}, {"max_value", l.max_value}};
    if (l.witness) {
        json w = json::array();
        for (const auto& u : *l.witness) w.push_back(to_json(u));
        lj["witness"] = w;
    }
    res.result["condition_L"] = lj;

    std::vector<PhaseVector> probes;
    if (cfg.params.contains("probes") && cfg.params["probes"].is_array()) {
        for (const auto& p : cfg.params["probes"]) probes.push_back(vector_from_json(p, "command.probes entry"));
        for (const auto& p : probes)
            if (p.size() != spec.ambient_dim()) config_error("command.probes entries have the wrong dimension");
    } else {
        probes = random_probes(spec, p_count(cfg.params, "probes", 16), split_seed(cfg.seed, 1));
    }
    const ConditionLLResult ll = check_condition_LL(spec, probes, samples / 4 > 0 ? samples / 4 : 1, split_seed(cfg.seed, 2), cfg.tol);
    json pj = json::array();
    for (const auto& v : ll.probes) {
        json e{{"probe", to_json(v.probe)}, {"holds", v.holds}, {"max_value", v.max_value}};
        if (v.witness) e["witness"] = to_json(*v.witness);
        pj.push_back(e);
    }
    res.result["condition_LL"] = {{"holds", ll.holds}, {"probes", pj}};

    if (const auto* c = spec.trig(); c && c->param_dim() == 1 && !spec.transform()) {
        const ConvexityProfile p = symplectic_convexity_profile(*c, static_cast<int>(p_count(cfg.params, "convexity_samples", 4096)));
        res.result["convexity"] = {{"min", p.min}, {"max", p.max}, {"argmin", p.argmin}, {"argmax", p.argmax}, {"convex", p.convex}};
    }
}

}  // namespace

RunResult run(const RunConfig& cfg)
{
    RunResult res;
    std::error_code ec;
    fs::create_directories(cfg.out, ec);
    if (ec) raise(ErrorCode::Io, "cannot create output directory '" + cfg.out.string() + "': " + ec.message());
    res.result = json::object();
    res.result["command"] = cfg.command;
    res.result["seed"] = cfg.seed;

    std::optional<ManifoldSpec> spec;
    if (!cfg.manifold.is_null()) spec = parse_manifold(cfg.manifold);
    if (cfg.command == "classify") {
        cmd_classify(cfg, spec, res);
    } else {
        const ManifoldSpec& m = *spec;
        if (cfg.command == "step") cmd_step(cfg, m, res);
        else if (cfg.command == "iterate") cmd_iterate(cfg, m, res);
        else if (cfg.command == "periodic") cmd_periodic(cfg, m, res);
        else if (cfg.command == "even-search") cmd_even(cfg, m, res);
        else if (cfg.command == "shoot") cmd_shoot(cfg, m, res);
        else if (cfg.command == "wall") cmd_wall(cfg, m, res);
        else if (cfg.command == "integrability") cmd_integrability(cfg, m, res);
        else if (cfg.command == "check") cmd_check(cfg, m, res);
        else config_error("unknown command '" + cfg.command + "'");
    }
    res.result["exit_code"] = res.exit_code;
    write_json(cfg.out / "result.json", res.result);
    res.artifacts.insert(res.artifacts.begin(), cfg.out / "result.json");
    return res;
}

}  // namespace osbk::app
