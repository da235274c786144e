#include "osbk/correspondence.hpp"

#include "osbk/conic.hpp"
#include "osbk/error.hpp"
#include "osbk/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace osbk {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double wrap(double t)
{
    double r = std::fmod(t, two_pi);
    if (r < 0) r += two_pi;
    return r >= two_pi ? r - two_pi : r;
}

double circ_dist(double a, double b)
{
    double d = std::abs(wrap(a - b));
    return std::min(d, two_pi - d);
}

// Root of f in [a, b] given f(a) f(b) <= 0: Newton steps kept inside the
// bracket, bisection otherwise.
template <class F>
double safeguarded_newton(F&& f, double a, double b)
{
    auto [fa, da] = f(a);
    (void)da;
    if (fa == 0.0) return a;
    auto [fb, db] = f(b);
    (void)db;
    if (fb == 0.0) return b;
    if (fa > 0) std::swap(a, b);  // now f(a) < 0 < f(b)
    double x = 0.5 * (a + b);
    for (int it = 0; it < 100; ++it) {
        auto [fx, dx] = f(x);
        if (fx == 0.0) return x;
        if (fx < 0) a = x; else b = x;
        double next = (dx != 0.0) ? x - fx / dx : 0.5 * (a + b);
        const double lo = std::min(a, b), hi = std::max(a, b);
        if (!(next > lo && next < hi)) next = 0.5 * (a + b);
        if (std::abs(next - x) <= 4e-16 * std::max(1.0, std::abs(x))) return next;
        x = next;
        if (std::abs(b - a) <= 4e-16 * std::max(1.0, std::abs(x))) return x;
    }
    return x;
}

struct CurveFn {
    const TrigImmersion& c;
    const PhaseVector& z;

    // g, g', g''
    std::array<double, 3> operator()(double t) const
    {
        const PhaseVector g0 = c.curve_derivative(t, 0) - z;
        const PhaseVector g1 = c.curve_derivative(t, 1);
        const PhaseVector g2 = c.curve_derivative(t, 2);
        const PhaseVector g3 = c.curve_derivative(t, 3);
        return {omega(g0, g1), omega(g0, g2), omega(g1, g2) + omega(g0, g3)};
    }
};

struct LevelScan {
    std::vector<double> roots;
    std::vector<bool> tangential;
    double min_critical = std::numeric_limits<double>::infinity();
    double gscale = 0.0;
};

LevelScan scan_level(const CurveFn& fn, int n)
{
    const double h = two_pi / n;
    std::vector<double> g(static_cast<std::size_t>(n)), dg(static_cast<std::size_t>(n));
    LevelScan out;
    double dscale = 0.0;
    for (int i = 0; i < n; ++i) {
        auto v = fn(i * h);
        g[static_cast<std::size_t>(i)] = v[0];
        dg[static_cast<std::size_t>(i)] = v[1];
        out.gscale = std::max(out.gscale, std::abs(v[0]));
        dscale = std::max(dscale, std::abs(v[1]));
    }
    const double gs = std::max(out.gscale, 1e-300);
    const double root_tol = 1e-10 * gs;
    const double tangent_tol = 1e-8 * std::max(dscale, 1e-300);

    auto value = [&](double t) {
        auto v = fn(t);
        return std::pair<double, double>(v[0], v[1]);
    };
    auto slope = [&](double t) {
        auto v = fn(t);
        return std::pair<double, double>(v[1], v[2]);
    };
    auto add_root = [&](double t, bool tangential) {
        t = wrap(t);
        for (std::size_t k = 0; k < out.roots.size(); ++k)
            if (circ_dist(out.roots[k], t) <= 1e-6) {
                if (tangential) out.tangential[k] = true;
                return;
            }
        out.roots.push_back(t);
        out.tangential.push_back(tangential);
    };

    for (int i = 0; i < n; ++i) {
        const std::size_t a = static_cast<std::size_t>(i), b = static_cast<std::size_t>((i + 1) % n);
        const double ta = i * h, tb = (i + 1) * h;
        if (g[a] == 0.0) {
            add_root(ta, std::abs(dg[a]) <= tangent_tol);
        } else if (g[a] * g[b] < 0.0) {
            const double r = safeguarded_newton(value, ta, tb);
            add_root(r, std::abs(fn(r)[1]) <= tangent_tol);
        }
        if (dg[a] == 0.0 || dg[a] * dg[b] < 0.0) {
            const double c = dg[a] == 0.0 ? ta : safeguarded_newton(slope, ta, tb);
            const double gc = fn(c)[0];
            out.min_critical = std::min(out.min_critical, std::abs(gc));
            if (std::abs(gc) <= root_tol) add_root(c, true);
        }
    }
    std::vector<std::size_t> order(out.roots.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](auto x, auto y) { return out.roots[x] < out.roots[y]; });
    LevelScan sorted = out;
    for (std::size_t k = 0; k < order.size(); ++k) {
        sorted.roots[k] = out.roots[order[k]];
        sorted.tangential[k] = out.tangential[order[k]];
    }
    // Merge across the 0 / 2pi seam.
    if (sorted.roots.size() >= 2 && circ_dist(sorted.roots.front(), sorted.roots.back()) <= 1e-6) {
        sorted.tangential.front() = sorted.tangential.front() || sorted.tangential.back();
        sorted.roots.pop_back();
        sorted.tangential.pop_back();
    }
    return sorted;
}

double scale_of(const PhaseVector& a, const PhaseVector& b) { return std::max({1.0, a.norm(), b.norm()}); }

std::vector<PhaseVector> normal_complement(const PhaseVector& normal)
{
    Eigen::JacobiSVD<Matrix> svd(Matrix(normal.transpose()), Eigen::ComputeFullV);
    std::vector<PhaseVector> out;
    for (Eigen::Index k = 1; k < normal.size(); ++k) out.push_back(svd.matrixV().col(k));
    return out;
}

std::vector<PhaseVector> columns_of(const Matrix& m)
{
    std::vector<PhaseVector> out;
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(m.col(j));
    return out;
}

bool lex_less(const ParamPoint& a, const ParamPoint& b)
{
    for (Eigen::Index i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return a[i] < b[i];
    return false;
}

}  // namespace

PhaseVector reflect(const PhaseVector& z, const PhaseVector& Q)
{
    if (z.size() != Q.size()) raise(ErrorCode::DimensionMismatch, "reflect: dimension mismatch");
    return 2.0 * Q - z;
}

double orthogonality_residual(const PhaseVector& delta, const std::vector<PhaseVector>& tangents)
{
    const double dn = delta.norm();
    if (dn == 0.0) return 0.0;
    double worst = 0.0;
    for (const auto& t : tangents) {
        const double tn = t.norm();
        if (tn == 0.0) continue;
        worst = std::max(worst, std::abs(omega(delta, t)) / (dn * tn));
    }
    return worst;
}

CurveRootScan scan_curve_roots(const TrigImmersion& curve, const PhaseVector& z, const CurveRootOptions& opts)
{
    if (curve.param_dim() != 1) raise(ErrorCode::InvalidInput, "curve root scan requires a curve (m = 1)");
    if (z.size() != curve.ambient_dim()) raise(ErrorCode::DimensionMismatch, "curve root scan: point dimension");
    validate_phase_vector(z);
    if (opts.grid < 8) raise(ErrorCode::InvalidInput, "curve root scan: grid must be at least 8");
    CurveFn fn{curve, z};
    CurveRootScan out;
    LevelScan last;
    int n = opts.grid;
    for (int level = 0; level <= opts.max_doublings; ++level, n *= 2) {
        last = scan_level(fn, n);
        out.level_counts.push_back(last.roots.size());
        out.min_critical_value = last.min_critical;
        const std::size_t k = out.level_counts.size();
        if (k >= 3 && out.level_counts[k - 1] == out.level_counts[k - 2] &&
            out.level_counts[k - 2] == out.level_counts[k - 3]) {
            out.stable = true;
            break;
        }
    }
    out.roots = last.roots;
    out.tangential = last.tangential;
    out.value_scale = last.gscale;
    return out;
}

std::vector<StepCandidate> step_curve(const TrigImmersion& curve, const PhaseVector& z, const CurveRootOptions& opts)
{
    CurveRootScan scan = scan_curve_roots(curve, z, opts);
    std::vector<StepCandidate> out;
    for (std::size_t k = 0; k < scan.roots.size(); ++k) {
        const double t = scan.roots[k];
        StepCandidate c;
        c.midpoint_param = ParamPoint::Constant(1, t);
        c.midpoint = curve.curve_derivative(t, 0);
        c.partner = reflect(z, c.midpoint);
        const PhaseVector delta = c.partner - z;
        c.residual = orthogonality_residual(delta, {curve.curve_derivative(t, 1)});
        c.degenerate = delta.norm() <= opts.tol.degeneracy * scale_of(z, c.midpoint);
        c.on_wall = scan.tangential[k];
        out.push_back(std::move(c));
    }
    return out;
}

StepCandidate step_ellipsoid(const SymplecticEllipsoid& ell, const PhaseVector& z, Branch branch,
                             const Tolerances& tol)
{
    ell.validate();
    validate_phase_vector(z);
    const Eigen::Index d = ell.pairs();
    if (z.size() != 2 * d) raise(ErrorCode::DimensionMismatch, "step_ellipsoid: point dimension mismatch");
    const double lvl = ell.level(z);
    if (!(lvl > 1.0 + tol.geometric))
        raise(ErrorCode::Domain, "step_ellipsoid: point is not strictly outside the ellipsoid (level " +
                                     std::to_string(lvl) + ")");
    std::vector<double> rho(static_cast<std::size_t>(d));
    for (Eigen::Index j = 0; j < d; ++j) rho[static_cast<std::size_t>(j)] = z[2 * j] * z[2 * j] + z[2 * j + 1] * z[2 * j + 1];

    // h(t) = sum rho_j / (a_j (1 + t^2 / a_j^2)) - 1, decreasing on t > 0.
    auto h = [&](double t) {
        double v = -1.0, dv = 0.0;
        for (Eigen::Index j = 0; j < d; ++j) {
            const double a = ell.axes[static_cast<std::size_t>(j)];
            const double r = rho[static_cast<std::size_t>(j)];
            const double den = 1.0 + t * t / (a * a);
            v += r / (a * den);
            dv -= r * 2.0 * t / (a * a * a * den * den);
        }
        return std::pair<double, double>(v, dv);
    };
    double hi = 1.0;
    while (h(hi).first > 0.0) {
        hi *= 2.0;
        if (hi > 1e300) raise(ErrorCode::Domain, "step_ellipsoid: radial equation has no root");
    }
    double t = safeguarded_newton(h, 0.0, hi);
    if (branch == Branch::Minus) t = -t;

    PhaseVector mid(2 * d), partner(2 * d);
    for (Eigen::Index j = 0; j < d; ++j) {
        const double a = ell.axes[static_cast<std::size_t>(j)];
        const double s = t / a;
        const double q = z[2 * j], p = z[2 * j + 1];
        const double x = (q + s * p) / (1.0 + s * s);
        const double y = (p - s * q) / (1.0 + s * s);
        mid[2 * j] = x;
        mid[2 * j + 1] = y;
        partner[2 * j] = x + s * y;
        partner[2 * j + 1] = y - s * x;
    }
    StepCandidate c;
    c.midpoint = mid;
    c.partner = partner;
    c.midpoint_param = ell.param_of(mid);
    PhaseVector normal(2 * d);
    for (Eigen::Index j = 0; j < d; ++j) {
        normal[2 * j] = mid[2 * j] / ell.axes[static_cast<std::size_t>(j)];
        normal[2 * j + 1] = mid[2 * j + 1] / ell.axes[static_cast<std::size_t>(j)];
    }
    c.residual = orthogonality_residual(partner - z, normal_complement(normal));
    return c;
}

std::vector<StepCandidate> step_cubic_graph(const GeneratingGraph& graph, const PhaseVector& z, const Tolerances& tol)
{
    if (graph.n() != 2 || !graph.is_homogeneous_cubic())
        raise(ErrorCode::InvalidInput, "step_cubic_graph needs a homogeneous cubic in two variables");
    validate_phase_vector(z);
    if (z.size() != 4) raise(ErrorCode::DimensionMismatch, "step_cubic_graph: point must lie in R^4");
    const CubicForm2 f = CubicForm2::from_polynomial(graph.function());
    const Eigen::Vector2d Q(z[0], z[2]);
    const Eigen::Vector2d W(z[1], z[3]);
    const Eigen::Vector2d r = f.gradient(Q) - W;
    const ConicSolution sol = conic_intersections(ConicPair::from_cubic(f), r[0], r[1]);

    std::vector<StepCandidate> out;
    for (const auto& w : sol.points) {
        const Eigen::VectorXd q = Q - w;
        StepCandidate c;
        c.midpoint_param = q;
        c.midpoint = graph.eval(q);
        const Eigen::VectorXd pq = f.gradient(q) - f.hessian(q) * w;
        c.partner = from_block_layout(Q - 2.0 * w, pq);
        const PhaseVector delta = c.partner - z;
        c.residual = orthogonality_residual(delta, columns_of(graph.jacobian(q)));
        c.degenerate = w.norm() <= tol.degeneracy * std::max(1.0, Q.norm());
        Eigen::Matrix2d lin = Eigen::Matrix2d::Zero();
        // d/dq of grad F(q) + Hess F(q)(Q - q) is grad^3 F(q)[Q - q, .]
        lin = graph.jet().third_contract(q, w);
        c.on_wall = !c.degenerate && std::abs(lin.determinant()) <= 1e-9 * std::max(1.0, lin.squaredNorm());
        out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end(),
              [](const StepCandidate& x, const StepCandidate& y) { return lex_less(x.midpoint_param, y.midpoint_param); });
    return out;
}

namespace {

struct RootHit {
    bool found = false;
    ParamPoint u;
    double residual = 0.0;
    bool singular = false;
};

// Damped Newton with a least-squares step; `eval` fills R and its Jacobian.
template <class Eval>
RootHit newton_solve(Eval&& eval, ParamPoint u, int max_iter, double tol)
{
    Eigen::VectorXd r;
    Matrix jac;
    eval(u, r, jac);
    double rn = r.norm();
    for (int it = 0; it < max_iter && rn > tol; ++it) {
        Eigen::VectorXd step = jac.completeOrthogonalDecomposition().solve(r);
        if (!step.allFinite() || step.norm() == 0.0) break;
        double lambda = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 30; ++ls, lambda *= 0.5) {
            ParamPoint trial = u - lambda * step;
            Eigen::VectorXd rt;
            Matrix jt;
            eval(trial, rt, jt);
            if (rt.allFinite() && rt.norm() < rn) {
                u = trial;
                r = rt;
                jac = jt;
                rn = rt.norm();
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
    }
    RootHit hit;
    hit.u = u;
    hit.residual = rn;
    hit.found = rn <= tol;
    Eigen::JacobiSVD<Matrix> svd(jac);
    const auto& sv = svd.singularValues();
    hit.singular = sv.size() == 0 || sv[sv.size() - 1] <= 1e-9 * std::max(1.0, sv[0]);
    return hit;
}

bool inside(const ParamBox& box, const ParamPoint& u, double slack)
{
    for (Eigen::Index i = 0; i < u.size(); ++i)
        if (u[i] < box.lo[i] - slack || u[i] > box.hi[i] + slack) return false;
    return true;
}

}  // namespace

std::vector<StepCandidate> step_graph_numeric(const GeneratingGraph& graph, const PhaseVector& z,
                                              const NumericStepOptions& opts)
{
    validate_phase_vector(z);
    const int n = graph.n();
    if (z.size() != 2 * n) raise(ErrorCode::DimensionMismatch, "step_graph_numeric: point dimension mismatch");
    const ParamBox box = opts.box ? *opts.box
                                  : ParamBox{Eigen::VectorXd::Constant(n, -5.0), Eigen::VectorXd::Constant(n, 5.0)};
    Eigen::VectorXd Q(n), W(n);
    for (int i = 0; i < n; ++i) {
        Q[i] = z[2 * i];
        W[i] = z[2 * i + 1];
    }
    const auto& jet = graph.jet();
    const double sc = std::max({1.0, z.norm(), graph.eval((box.lo + box.hi) / 2).norm()});
    auto eval = [&](const ParamPoint& q, Eigen::VectorXd& r, Matrix& jac) {
        const Eigen::VectorXd w = Q - q;
        r = jet.gradient(q) + jet.hessian(q) * w - W;
        jac = jet.third_contract(q, w);
    };
    const auto starts = latin_hypercube(box, opts.starts, opts.seed);
    std::vector<RootHit> hits(starts.size());
    parallel_for(starts.size(), resolve_threads(opts.threads),
                 [&](std::size_t i) { hits[i] = newton_solve(eval, starts[i], opts.max_iterations, 1e-12 * sc); });

    std::vector<RootHit> kept;
    // When z lies on the table, q = Q is a double root; Newton only reaches
    // it to about the square root of the tolerance, so it is inserted exactly.
    const bool on_table = (jet.gradient(Q) - W).norm() <= 1e-12 * sc;
    if (on_table && inside(box, Q, 0.0)) kept.push_back(RootHit{true, Q, 0.0, true});
    for (const auto& h : hits) {
        if (!h.found || !inside(box, h.u, 1e-9)) continue;
        if (on_table && (h.u - Q).norm() <= 1e-5 * sc) continue;
        bool merged = false;
        for (auto& k : kept)
            if ((k.u - h.u).norm() <= opts.tol.dedup) {
                if (h.residual < k.residual) k = h;
                merged = true;
                break;
            }
        if (!merged) kept.push_back(h);
    }
    std::sort(kept.begin(), kept.end(), [](const RootHit& a, const RootHit& b) { return lex_less(a.u, b.u); });

    std::vector<StepCandidate> out;
    for (const auto& h : kept) {
        StepCandidate c;
        c.midpoint_param = h.u;
        c.midpoint = graph.eval(h.u);
        c.partner = reflect(z, c.midpoint);
        c.residual = orthogonality_residual(c.partner - z, columns_of(graph.jacobian(h.u)));
        c.degenerate = (c.partner - z).norm() <= opts.tol.degeneracy * sc;
        c.on_wall = h.singular && !c.degenerate;
        if (h.singular && graph.is_affine_subspace()) c.on_wall = true;
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<StepCandidate> step_numeric(const ManifoldSpec& spec, const PhaseVector& z, const NumericStepOptions& opts)
{
    validate_phase_vector(z);
    if (z.size() != spec.ambient_dim()) raise(ErrorCode::DimensionMismatch, "step_numeric: point dimension mismatch");
    const int m = spec.param_dim();
    const ParamBox box = opts.box ? *opts.box : spec.sampling_box();
    const double sc = std::max({1.0, z.norm(), spec.scale()});
    const TrigImmersion* trig = spec.trig();

    auto eval = [&](const ParamPoint& u, Eigen::VectorXd& r, Matrix& jac) {
        const PhaseVector chord = spec.embed(u) - z;
        const Matrix tang = spec.jacobian(u);
        r.resize(m);
        jac.resize(m, m);
        for (int k = 0; k < m; ++k) r[k] = omega(chord, tang.col(k));
        for (int l = 0; l < m; ++l) {
            Matrix second(spec.ambient_dim(), m);
            if (trig) {
                for (int k = 0; k < m; ++k) {
                    std::vector<int> ord(static_cast<std::size_t>(m), 0);
                    ord[static_cast<std::size_t>(k)] += 1;
                    ord[static_cast<std::size_t>(l)] += 1;
                    PhaseVector v = trig->partial(u, ord);
                    second.col(k) = spec.transform() ? PhaseVector(spec.transform()->linear * v) : v;
                }
            } else {
                const double h = 1e-6;
                ParamPoint up = u, um = u;
                up[l] += h;
                um[l] -= h;
                second = (spec.jacobian(up) - spec.jacobian(um)) / (2 * h);
            }
            for (int k = 0; k < m; ++k) jac(k, l) = omega(tang.col(l), tang.col(k)) + omega(chord, second.col(k));
        }
    };
    const auto starts = latin_hypercube(box, opts.starts, opts.seed);
    std::vector<RootHit> hits(starts.size());
    parallel_for(starts.size(), resolve_threads(opts.threads),
                 [&](std::size_t i) { hits[i] = newton_solve(eval, starts[i], opts.max_iterations, 1e-12 * sc * sc); });

    std::vector<RootHit> kept;
    for (auto h : hits) {
        if (!h.found) continue;
        if (spec.compact()) h.u = spec.reduce(h.u);
        else if (!inside(box, h.u, 1e-9)) continue;
        bool merged = false;
        for (auto& k : kept)
            if (spec.param_distance(k.u, h.u) <= opts.tol.dedup) {
                if (h.residual < k.residual) k = h;
                merged = true;
                break;
            }
        if (!merged) kept.push_back(h);
    }
    std::sort(kept.begin(), kept.end(), [](const RootHit& a, const RootHit& b) { return lex_less(a.u, b.u); });

    std::vector<StepCandidate> out;
    for (const auto& h : kept) {
        StepCandidate c;
        c.midpoint_param = h.u;
        c.midpoint = spec.embed(h.u);
        c.partner = reflect(z, c.midpoint);
        c.residual = orthogonality_residual(c.partner - z, columns_of(spec.jacobian(h.u)));
        c.degenerate = (c.partner - z).norm() <= opts.tol.degeneracy * sc;
        c.on_wall = h.singular;
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<StepCandidate> step(const ManifoldSpec& spec, const PhaseVector& z, const StepOptions& opts)
{
    validate_phase_vector(z);
    if (z.size() != spec.ambient_dim()) raise(ErrorCode::DimensionMismatch, "step: point dimension mismatch");
    if (spec.kind() == TableKind::Trig && spec.trig()->param_dim() >= 2) return step_numeric(spec, z, opts.numeric);

    const auto& tr = spec.transform();
    const PhaseVector zr = tr ? tr->inverse().apply(z) : z;
    std::vector<StepCandidate> raw;
    std::vector<std::vector<PhaseVector>> tangents;
    switch (spec.kind()) {
    case TableKind::Trig:
        raw = step_curve(*spec.trig(), zr, opts.curve);
        break;
    case TableKind::Ellipsoid:
        for (Branch b : opts.branches) raw.push_back(step_ellipsoid(*spec.ellipsoid(), zr, b, opts.numeric.tol));
        break;
    case TableKind::Graph: {
        const GeneratingGraph& g = *spec.graph();
        if (g.n() == 2 && g.is_homogeneous_cubic()) {
            raw = step_cubic_graph(g, zr, opts.numeric.tol);
        } else {
            NumericStepOptions no = opts.numeric;
            if (!no.box) no.box = spec.sampling_box();
            raw = step_graph_numeric(g, zr, no);
        }
        break;
    }
    }
    if (!tr) return raw;
    for (auto& c : raw) {
        c.partner = tr->apply(c.partner);
        c.midpoint = tr->apply(c.midpoint);
        std::vector<PhaseVector> tang;
        if (const auto* e = spec.ellipsoid()) {
            PhaseVector mid_raw = tr->inverse().apply(c.midpoint);
            PhaseVector normal(mid_raw.size());
            for (Eigen::Index j = 0; j < e->pairs(); ++j) {
                normal[2 * j] = mid_raw[2 * j] / e->axes[static_cast<std::size_t>(j)];
                normal[2 * j + 1] = mid_raw[2 * j + 1] / e->axes[static_cast<std::size_t>(j)];
            }
            for (const auto& v : normal_complement(normal)) tang.push_back(tr->linear * v);
        } else {
            tang = columns_of(spec.jacobian(c.midpoint_param));
        }
        c.residual = orthogonality_residual(c.partner - z, tang);
    }
    return raw;
}

PairReport verify_pair(const ManifoldSpec& spec, const PhaseVector& z, const PhaseVector& z_partner, const ParamPoint& u)
{
    if (z.size() != spec.ambient_dim() || z_partner.size() != spec.ambient_dim())
        raise(ErrorCode::DimensionMismatch, "verify_pair: point dimension mismatch");
    PairReport rep;
    rep.midpoint_error = (spec.embed(u) - 0.5 * (z + z_partner)).norm();
    const PhaseVector delta = z_partner - z;
    const Matrix jac = spec.jacobian(u);
    for (Eigen::Index k = 0; k < jac.cols(); ++k) {
        const double tn = jac.col(k).norm();
        if (tn == 0.0) continue;
        rep.orthogonality = std::max(rep.orthogonality, std::abs(omega(delta, jac.col(k))) / tn);
    }
    const double dn = delta.norm();
    rep.relative = dn > 0.0 ? rep.orthogonality / dn : 0.0;
    return rep;
}

}  // namespace osbk
