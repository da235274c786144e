#include "osbk/variational.hpp"

#include "osbk/correspondence.hpp"
#include "osbk/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace osbk {

namespace {

void require_points(const std::vector<PhaseVector>& Q, const char* where)
{
    if (Q.empty()) raise(ErrorCode::InvalidInput, std::string(where) + ": empty midpoint polygon");
    for (const auto& q : Q) {
        validate_phase_vector(q);
        if (q.size() != Q.front().size())
            raise(ErrorCode::DimensionMismatch, std::string(where) + ": midpoints of different dimensions");
    }
}

double sgn_pow(std::size_t e) { return (e % 2 == 0) ? 1.0 : -1.0; }

std::vector<PhaseVector> tangents_at(const ManifoldSpec& spec, const ParamPoint& u)
{
    const Matrix jac = spec.jacobian(u);
    std::vector<PhaseVector> out;
    for (Eigen::Index j = 0; j < jac.cols(); ++j) out.push_back(jac.col(j));
    return out;
}

}  // namespace

MidpointPolygon make_polygon(const ManifoldSpec& spec, std::vector<ParamPoint> params)
{
    if (params.empty()) raise(ErrorCode::InvalidInput, "midpoint polygon needs n >= 1");
    MidpointPolygon poly;
    for (const auto& u : params) poly.points.push_back(spec.embed(u));
    poly.params = std::move(params);
    return poly;
}

double gen_fun_periodic(const std::vector<PhaseVector>& Q)
{
    require_points(Q, "periodic generating function");
    const std::size_t n = Q.size();
    if (n % 2 == 0)
        raise(ErrorCode::InvalidInput, "the periodic correspondence has no generating function for even n = " +
                                           std::to_string(n));
    // With A_j = (-1)^j Q_j the sum is -2 sum_{i<j} omega(A_i, A_j).
    PhaseVector prefix = PhaseVector::Zero(Q.front().size());
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const PhaseVector a = sgn_pow(j) * Q[j];
        s += omega(prefix, a);
        prefix += a;
    }
    return -2.0 * s;
}

double gen_fun_boundary(const std::vector<PhaseVector>& Q)
{
    require_points(Q, "boundary generating function");
    const std::size_t n = Q.size();
    const Eigen::Index d = Q.front().size() / 2;
    auto xy = [&](std::size_t i, Eigen::Index k, int part) { return Q[i][2 * k + part]; };
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < d; ++k) s += 2.0 * xy(i, k, 0) * xy(i, k, 1);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double dot = 0.0;
            for (Eigen::Index k = 0; k < d; ++k) dot += xy(j, k, 0) * xy(i, k, 1);
            s += 4.0 * sgn_pow(j - i) * dot;
        }
    return s;
}

double gen_fun(const std::vector<PhaseVector>& Q, OrbitKind kind)
{
    return kind == OrbitKind::Periodic ? gen_fun_periodic(Q) : gen_fun_boundary(Q);
}

std::vector<PhaseVector> gen_fun_periodic_point_gradient(const std::vector<PhaseVector>& Q)
{
    require_points(Q, "periodic generating function");
    const std::size_t n = Q.size();
    if (n % 2 == 0) raise(ErrorCode::InvalidInput, "the periodic generating function needs odd n");
    const Eigen::Index dim = Q.front().size();
    const Matrix om = omega_matrix(dim / 2);
    std::vector<PhaseVector> out;
    for (std::size_t k = 0; k < n; ++k) {
        PhaseVector acc = PhaseVector::Zero(dim);
        for (std::size_t j = k + 1; j < n; ++j) acc += sgn_pow(k + j + 1) * Q[j];
        for (std::size_t i = 0; i < k; ++i) acc -= sgn_pow(i + k + 1) * Q[i];
        out.push_back(2.0 * om * acc);
    }
    return out;
}

std::vector<PhaseVector> gen_fun_boundary_point_gradient(const std::vector<PhaseVector>& Q)
{
    require_points(Q, "boundary generating function");
    const std::size_t n = Q.size();
    const Eigen::Index dim = Q.front().size();
    const Eigen::Index d = dim / 2;
    std::vector<PhaseVector> out(n, PhaseVector::Zero(dim));
    for (std::size_t k = 0; k < n; ++k)
        for (Eigen::Index c = 0; c < d; ++c) {
            double gx = 2.0 * Q[k][2 * c + 1];
            for (std::size_t i = 0; i < k; ++i) gx += 4.0 * sgn_pow(k - i) * Q[i][2 * c + 1];
            double gy = 2.0 * Q[k][2 * c];
            for (std::size_t j = k + 1; j < n; ++j) gy += 4.0 * sgn_pow(j - k) * Q[j][2 * c];
            out[k][2 * c] = gx;
            out[k][2 * c + 1] = gy;
        }
    return out;
}

std::vector<Eigen::VectorXd> grad_gen_fun(const ManifoldSpec& spec, const MidpointPolygon& Q, OrbitKind kind)
{
    if (Q.params.size() != Q.points.size())
        raise(ErrorCode::InvalidInput, "grad_gen_fun needs the parameters of every midpoint");
    const auto pg = kind == OrbitKind::Periodic ? gen_fun_periodic_point_gradient(Q.points)
                                                : gen_fun_boundary_point_gradient(Q.points);
    std::vector<Eigen::VectorXd> out;
    for (std::size_t i = 0; i < Q.size(); ++i) out.push_back(spec.jacobian(Q.params[i]).transpose() * pg[i]);
    return out;
}

PhaseVector closure_defect(const std::vector<PhaseVector>& Q)
{
    require_points(Q, "closure defect");
    PhaseVector s = PhaseVector::Zero(Q.front().size());
    for (std::size_t i = 0; i < Q.size(); ++i) s += sgn_pow(i + 1) * Q[i];
    return s;
}

std::vector<PhaseVector> reconstruct_periodic(const std::vector<PhaseVector>& Q, const std::optional<PhaseVector>& z1,
                                              double tol)
{
    require_points(Q, "reconstruct_periodic");
    const std::size_t n = Q.size();
    PhaseVector start;
    if (n % 2 == 1) {
        start = -closure_defect(Q);  // Q_1 - Q_2 + Q_3 - ...
    } else {
        const PhaseVector defect = closure_defect(Q);
        double sc = 1.0;
        for (const auto& q : Q) sc = std::max(sc, q.norm());
        if (defect.norm() > tol * sc) {
            std::string v;
            for (Eigen::Index i = 0; i < defect.size(); ++i) v += (i ? ", " : "") + std::to_string(defect[i]);
            throw ClosureError("even polygon does not close: alternating sum of midpoints is (" + v + ")", defect);
        }
        if (!z1) throw ClosureError("even polygon closes for every start; a first vertex must be supplied", defect);
        if (z1->size() != Q.front().size()) raise(ErrorCode::DimensionMismatch, "reconstruct_periodic: z1 dimension");
        start = *z1;
    }
    std::vector<PhaseVector> z{start};
    for (std::size_t i = 0; i + 1 < n; ++i) z.push_back(reflect(z.back(), Q[i]));
    return z;
}

std::vector<PhaseVector> reconstruct_boundary(const std::vector<PhaseVector>& Q)
{
    require_points(Q, "reconstruct_boundary");
    const std::size_t n = Q.size();
    const Eigen::Index dim = Q.front().size();
    const Eigen::Index d = dim / 2;
    std::vector<PhaseVector> z(n + 1, PhaseVector::Zero(dim));
    for (std::size_t i = 0; i <= n; ++i)
        for (Eigen::Index c = 0; c < d; ++c) {
            double x = 0.0;
            for (std::size_t j = i; j < n; ++j) x += sgn_pow(j - i) * Q[j][2 * c];
            double y = 0.0;
            for (std::size_t j = 0; j < i; ++j) y += sgn_pow(i - j + 1) * Q[j][2 * c + 1];
            z[i][2 * c] = 2.0 * x;
            z[i][2 * c + 1] = 2.0 * y;
        }
    return z;
}

double symplectic_area(const std::vector<PhaseVector>& Z, OrbitKind kind)
{
    require_points(Z, "symplectic_area");
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < Z.size(); ++i) s += omega(Z[i], Z[i + 1]);
    if (kind == OrbitKind::Periodic && Z.size() > 1) s += omega(Z.back(), Z.front());
    return 0.5 * s;
}

OrbitPolyline build_orbit(const ManifoldSpec& spec, const std::vector<ParamPoint>& params, OrbitKind kind,
                          const Tolerances& tol, const std::optional<PhaseVector>& z1)
{
    const MidpointPolygon poly = make_polygon(spec, params);
    const std::size_t n = poly.size();
    OrbitPolyline orb;
    orb.kind = kind;
    orb.midpoint_params = params;
    if (kind == OrbitKind::Periodic) {
        orb.vertices = reconstruct_periodic(poly.points, z1, 1e-8);
    } else {
        orb.vertices = reconstruct_boundary(poly.points);
    }
    orb.area = symplectic_area(orb.vertices, kind);
    const bool has_genfun = kind == OrbitKind::Boundary || n % 2 == 1;
    if (has_genfun) {
        orb.objective = gen_fun(poly.points, kind);
        double g2 = 0.0;
        for (const auto& g : grad_gen_fun(spec, poly, kind)) g2 += g.squaredNorm();
        orb.gradient_norm = std::sqrt(g2);
    }
    const std::size_t links = n;
    for (std::size_t i = 0; i < links; ++i) {
        const PhaseVector& a = orb.vertices[i];
        const PhaseVector& b = (i + 1 < orb.vertices.size()) ? orb.vertices[i + 1] : orb.vertices.front();
        orb.max_residual = std::max(orb.max_residual, orthogonality_residual(b - a, tangents_at(spec, params[i])));
    }
    double gap = std::numeric_limits<double>::infinity();
    const std::size_t pairs = kind == OrbitKind::Periodic ? (n > 1 ? n : 0) : n - 1;
    for (std::size_t i = 0; i < pairs; ++i)
        gap = std::min(gap, (poly.points[(i + 1) % n] - poly.points[i]).norm());
    orb.min_midpoint_gap = std::isfinite(gap) ? gap : 0.0;
    orb.degenerate = pairs > 0 && gap <= tol.degeneracy * std::max(1.0, spec.scale());
    return orb;
}

std::string to_string(SearchStatus s)
{
    switch (s) {
    case SearchStatus::Ok: return "ok";
    case SearchStatus::FlatObjective: return "flat_objective";
    case SearchStatus::SearchFailed: return "search_failed";
    }
    return "unknown";
}

std::string to_string(SearchMode m) { return m == SearchMode::Max ? "max" : "min"; }

// ------------------------------------------------------------------ search

namespace {

struct Objective {
    const ManifoldSpec& spec;
    int n;
    OrbitKind kind;
    double sign;
    int m;

    std::vector<ParamPoint> unpack(const Eigen::VectorXd& x) const
    {
        std::vector<ParamPoint> u;
        for (int i = 0; i < n; ++i) u.push_back(x.segment(i * m, m));
        return u;
    }

    double value(const Eigen::VectorXd& x) const
    {
        std::vector<PhaseVector> Q;
        for (const auto& u : unpack(x)) Q.push_back(spec.embed(u));
        return sign * gen_fun(Q, kind);
    }

    Eigen::VectorXd gradient(const Eigen::VectorXd& x) const
    {
        const auto g = grad_gen_fun(spec, make_polygon(spec, unpack(x)), kind);
        Eigen::VectorXd out(x.size());
        for (int i = 0; i < n; ++i) out.segment(i * m, m) = sign * g[static_cast<std::size_t>(i)];
        return out;
    }
};

void clip(const ManifoldSpec& spec, Eigen::VectorXd& x, int m)
{
    if (spec.compact()) return;
    const ParamBox box = spec.sampling_box();
    for (Eigen::Index k = 0; k < x.size(); ++k) x[k] = std::clamp(x[k], box.lo[k % m], box.hi[k % m]);
}

struct StartOutcome {
    bool accepted = false;
    std::vector<ParamPoint> params;
    OrbitPolyline orbit;
};

StartOutcome optimize_start(const Objective& obj, Eigen::VectorXd x, const SearchOptions& opts, double scale)
{
    double f = obj.value(x);
    Eigen::VectorXd g = obj.gradient(x);
    double alpha = 1.0 / std::max(1.0, g.norm());
    const double gstop = 1e-11 * scale * scale;
    for (int it = 0; it < opts.ascent_iterations && g.norm() > gstop; ++it) {
        alpha = std::min(alpha * 2.0, 1e3);
        bool moved = false;
        while (alpha > 1e-18) {
            Eigen::VectorXd xt = x + alpha * g;
            clip(obj.spec, xt, obj.m);
            const double ft = obj.value(xt);
            if (ft >= f + 1e-4 * alpha * g.squaredNorm()) {
                x = xt;
                f = ft;
                moved = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!moved) break;
        g = obj.gradient(x);
        if (g.norm() < 1e-6 * scale * scale) break;  // hand over to Newton
    }

    // Newton on grad = 0 with a finite-difference Hessian of the exact
    // gradient and a pseudo-inverse solve.
    const double h = 1e-5;
    for (int it = 0; it < opts.newton_iterations; ++it) {
        const double gn = g.norm();
        if (gn <= 1e-13 * scale * scale) break;
        Matrix hess(x.size(), x.size());
        for (Eigen::Index j = 0; j < x.size(); ++j) {
            Eigen::VectorXd xp = x, xm = x;
            xp[j] += h;
            xm[j] -= h;
            hess.col(j) = (obj.gradient(xp) - obj.gradient(xm)) / (2 * h);
        }
        hess = 0.5 * (hess + hess.transpose()).eval();
        Eigen::JacobiSVD<Matrix> svd(hess, Eigen::ComputeThinU | Eigen::ComputeThinV);
        svd.setThreshold(1e-9);
        Eigen::VectorXd step = -svd.solve(g);
        bool improved = false;
        for (int ls = 0; ls < 12; ++ls, step *= 0.5) {
            Eigen::VectorXd xt = x + step;
            clip(obj.spec, xt, obj.m);
            Eigen::VectorXd gt = obj.gradient(xt);
            if (gt.norm() < gn) {
                x = xt;
                g = gt;
                improved = true;
                break;
            }
        }
        if (!improved) break;
    }

    StartOutcome out;
    out.params = obj.unpack(x);
    if (obj.spec.compact())
        for (auto& u : out.params) u = obj.spec.reduce(u);
    out.orbit = build_orbit(obj.spec, out.params, obj.kind, opts.tol);
    out.accepted = out.orbit.gradient_norm < opts.tol.gradient && out.orbit.max_residual < opts.tol.residual;
    return out;
}

// Lexicographic comparison of concatenated parameter sequences.
bool seq_less(const std::vector<ParamPoint>& a, const std::vector<ParamPoint>& b)
{
    for (std::size_t i = 0; i < a.size(); ++i)
        for (Eigen::Index k = 0; k < a[i].size(); ++k)
            if (a[i][k] != b[i][k]) return a[i][k] < b[i][k];
    return false;
}

std::vector<ParamPoint> rotate(const std::vector<ParamPoint>& p, std::size_t s)
{
    std::vector<ParamPoint> out;
    for (std::size_t i = 0; i < p.size(); ++i) out.push_back(p[(i + s) % p.size()]);
    return out;
}

std::size_t canonical_shift(const std::vector<ParamPoint>& p)
{
    std::size_t best = 0;
    for (std::size_t s = 1; s < p.size(); ++s)
        if (seq_less(rotate(p, s), rotate(p, best))) best = s;
    return best;
}

double orbit_distance(const ManifoldSpec& spec, const std::vector<ParamPoint>& a, const std::vector<ParamPoint>& b,
                      bool cyclic)
{
    double best = std::numeric_limits<double>::infinity();
    const std::size_t shifts = cyclic ? a.size() : 1;
    for (std::size_t s = 0; s < shifts; ++s) {
        double worst = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            worst = std::max(worst, spec.param_distance(a[i], b[(i + s) % b.size()]));
        best = std::min(best, worst);
    }
    return best;
}

SearchResult run_search(const ManifoldSpec& spec, int n, OrbitKind kind, const SearchOptions& opts)
{
    const int m = spec.param_dim();
    const double sign = opts.mode == SearchMode::Max ? 1.0 : -1.0;
    Objective obj{spec, n, kind, sign, m};
    const double scale = std::max(1.0, spec.scale());

    ParamBox one = spec.sampling_box();
    ParamBox box{Eigen::VectorXd(n * m), Eigen::VectorXd(n * m)};
    for (int i = 0; i < n; ++i) {
        box.lo.segment(i * m, m) = one.lo;
        box.hi.segment(i * m, m) = one.hi;
    }
    const auto starts = latin_hypercube(box, opts.starts, opts.seed);
    SearchResult res;
    res.starts = starts.size();
    if (starts.empty()) return res;

    const bool cyclic = kind == OrbitKind::Periodic;
    double fmax = 0.0, gmax = 0.0;
    for (const auto& s : starts) {
        fmax = std::max(fmax, std::abs(obj.value(s)));
        gmax = std::max(gmax, obj.gradient(s).norm());
    }
    std::vector<StartOutcome> outcomes(starts.size());
    const bool flat = fmax <= 1e-12 * scale * scale && gmax <= 1e-12 * scale * scale;
    if (flat) {
        for (std::size_t i = 0; i < starts.size(); ++i) {
            outcomes[i].params = obj.unpack(starts[i]);
            if (spec.compact())
                for (auto& u : outcomes[i].params) u = spec.reduce(u);
            outcomes[i].orbit = build_orbit(spec, outcomes[i].params, kind, opts.tol);
            outcomes[i].accepted = outcomes[i].orbit.max_residual < opts.tol.residual;
        }
    } else {
        parallel_for(starts.size(), resolve_threads(opts.threads),
                     [&](std::size_t i) { outcomes[i] = optimize_start(obj, starts[i], opts, scale); });
    }

    std::vector<OrbitPolyline> kept;
    for (auto& o : outcomes) {
        if (!o.accepted) continue;
        ++res.converged;
        bool dup = false;
        for (const auto& k : kept)
            if (orbit_distance(spec, k.midpoint_params, o.params, cyclic) <= opts.tol.dedup) {
                dup = true;
                break;
            }
        if (dup) continue;
        if (cyclic) {
            const std::size_t s = canonical_shift(o.params);
            if (s != 0) o.orbit = build_orbit(spec, rotate(o.params, s), kind, opts.tol);
        }
        kept.push_back(o.orbit);
    }
    std::stable_sort(kept.begin(), kept.end(), [&](const OrbitPolyline& a, const OrbitPolyline& b) {
        if (a.objective != b.objective) return sign * a.objective > sign * b.objective;
        return seq_less(a.midpoint_params, b.midpoint_params);
    });
    res.orbits = kept;
    for (const auto& o : kept)
        if (!o.degenerate) {
            res.best = o;
            break;
        }
    if (!res.best && !kept.empty()) res.best = kept.front();
    res.status = flat ? SearchStatus::FlatObjective : (kept.empty() ? SearchStatus::SearchFailed : SearchStatus::Ok);
    return res;
}

}  // namespace

SearchResult find_periodic_orbit(const ManifoldSpec& spec, int n, const SearchOptions& opts)
{
    if (n < 3 || n % 2 == 0)
        raise(ErrorCode::InvalidInput, "find_periodic_orbit needs odd n >= 3, got " + std::to_string(n));
    return run_search(spec, n, OrbitKind::Periodic, opts);
}

BoundaryResult find_boundary_orbit(const ManifoldSpec& spec, const AffineLagrangian& l1, const AffineLagrangian& l2,
                                   int n, const SearchOptions& opts)
{
    if (n < 1) raise(ErrorCode::InvalidInput, "find_boundary_orbit needs n >= 1");
    if (l1.base.size() != spec.ambient_dim())
        raise(ErrorCode::DimensionMismatch, "boundary subspaces do not match the ambient dimension");
    BoundaryResult out;
    out.normalization = normalize_lagrangian_pair(l1, l2);
    const AffineSymplecticMap back = out.normalization.inverse();
    const ManifoldSpec normalized = spec.transformed(out.normalization);

    auto unnormalize = [&](OrbitPolyline o) {
        for (auto& z : o.vertices) z = back.apply(z);
        o.area = symplectic_area(o.vertices, OrbitKind::Boundary);
        o.max_residual = 0.0;
        for (std::size_t i = 0; i < o.midpoint_params.size(); ++i)
            o.max_residual = std::max(o.max_residual, orthogonality_residual(o.vertices[i + 1] - o.vertices[i],
                                                                             tangents_at(spec, o.midpoint_params[i])));
        return o;
    };

    SearchOptions mx = opts, mn = opts;
    mx.mode = SearchMode::Max;
    mn.mode = SearchMode::Min;
    const SearchResult rmax = run_search(normalized, n, OrbitKind::Boundary, mx);
    const SearchResult rmin = run_search(normalized, n, OrbitKind::Boundary, mn);
    if (rmax.best) out.best_max = unnormalize(*rmax.best);
    if (rmin.best) out.best_min = unnormalize(*rmin.best);
    for (const auto* r : {&rmax, &rmin})
        for (const auto& o : r->orbits) {
            bool dup = false;
            for (const auto& k : out.orbits)
                if (orbit_distance(spec, k.midpoint_params, o.midpoint_params, false) <= opts.tol.dedup) dup = true;
            if (!dup) out.orbits.push_back(unnormalize(o));
        }
    if (rmax.status == SearchStatus::FlatObjective || rmin.status == SearchStatus::FlatObjective)
        out.status = SearchStatus::FlatObjective;
    else if (out.best_max || out.best_min)
        out.status = SearchStatus::Ok;
    else
        out.status = SearchStatus::SearchFailed;
    return out;
}

}  // namespace osbk
