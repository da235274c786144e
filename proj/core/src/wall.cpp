#include "osbk/wall.hpp"

#include "osbk/parallel.hpp"
#include "osbk/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace osbk {

// ------------------------------------------------------------ curve wall

Eigen::Vector2d curve_wall_equations(const TrigImmersion& curve, const PhaseVector& P, double t)
{
    const PhaseVector g0 = curve.curve_derivative(t, 0);
    const PhaseVector g1 = curve.curve_derivative(t, 1);
    const PhaseVector g2 = curve.curve_derivative(t, 2);
    return {omega(P, g1) - omega(g0, g1), omega(P, g2) - omega(g0, g2)};
}

double curve_wall_singular(const TrigImmersion& curve, const PhaseVector& P, double t)
{
    const PhaseVector g0 = curve.curve_derivative(t, 0);
    const PhaseVector g1 = curve.curve_derivative(t, 1);
    const PhaseVector g2 = curve.curve_derivative(t, 2);
    const PhaseVector g3 = curve.curve_derivative(t, 3);
    return omega(P, g3) - omega(g1, g2) - omega(g0, g3);
}

std::vector<WallSample> curve_wall_samples(const TrigImmersion& curve, const std::vector<double>& t_grid,
                                           const std::vector<double>& plane_grid)
{
    if (curve.param_dim() != 1) raise(ErrorCode::InvalidInput, "curve wall needs a curve (m = 1)");
    const Eigen::Index dim = curve.ambient_dim();
    const std::size_t k = static_cast<std::size_t>(dim - 2);

    std::vector<double> values = plane_grid;
    if (std::find(values.begin(), values.end(), 0.0) == values.end()) values.insert(values.begin(), 0.0);

    std::vector<WallSample> out;
    for (double t : t_grid) {
        const PhaseVector g0 = curve.curve_derivative(t, 0);
        const PhaseVector g1 = curve.curve_derivative(t, 1);
        const PhaseVector g2 = curve.curve_derivative(t, 2);
        const bool deficient = span_rank({g1, g2}, 1e-10) < 2;
        std::vector<PhaseVector> basis;
        if (k > 0) {
            // Orthonormal basis of {v : <J g1, v> = <J g2, v> = 0}.
            Matrix rows(2, dim);
            rows.row(0) = apply_J(g1).transpose();
            rows.row(1) = apply_J(g2).transpose();
            Eigen::JacobiSVD<Matrix> svd(rows, Eigen::ComputeFullV);
            for (Eigen::Index c = dim - static_cast<Eigen::Index>(k); c < dim; ++c) basis.push_back(svd.matrixV().col(c));
        }
        // Enumerate the tensor grid values^k, zero tuple first.
        std::vector<std::size_t> idx(k, 0);
        const std::size_t zero_at = static_cast<std::size_t>(std::find(values.begin(), values.end(), 0.0) - values.begin());
        std::vector<double> order{values[zero_at]};
        for (std::size_t i = 0; i < values.size(); ++i)
            if (i != zero_at) order.push_back(values[i]);
        for (;;) {
            WallSample s;
            s.t = t;
            s.point = g0;
            for (std::size_t j = 0; j < k; ++j) {
                s.plane.push_back(order[idx[j]]);
                s.point += order[idx[j]] * basis[j];
            }
            s.singular_residual = curve_wall_singular(curve, s.point, t);
            s.rank_deficient = deficient;
            out.push_back(std::move(s));
            std::size_t j = 0;
            while (j < k && ++idx[j] == order.size()) idx[j++] = 0;
            if (j == k) break;
        }
    }
    return out;
}

std::size_t multiplicity_curve(const TrigImmersion& curve, const PhaseVector& P, const MultiplicityOptions& opts)
{
    const CurveRootScan scan = scan_curve_roots(curve, P, opts.roots);
    auto counts_text = [&] {
        std::string s;
        for (std::size_t i = 0; i < scan.level_counts.size(); ++i) s += (i ? "," : "") + std::to_string(scan.level_counts[i]);
        return s;
    };
    if (!scan.stable)
        throw UnstableCountError("root count did not stabilize under refinement: counts " + counts_text(),
                                 scan.level_counts);
    if (scan.min_critical_value <= opts.wall_tol * std::max(scan.value_scale, 1e-300))
        throw UnstableCountError("probe lies within tolerance of the wall (critical value " +
                                     std::to_string(scan.min_critical_value) + "); counts " + counts_text(),
                                 scan.level_counts);
    return scan.roots.size();
}

EtaFit eta_expansion_check(const TrigImmersion& curve, double t0, double t_min, double t_max, int points)
{
    if (curve.param_dim() != 1) raise(ErrorCode::InvalidInput, "eta expansion needs a curve (m = 1)");
    if (!(t_min > 0.0 && t_max > t_min) || points < 3) raise(ErrorCode::InvalidInput, "eta expansion: bad grid");
    const PhaseVector g0 = curve.curve_derivative(t0, 0);
    const PhaseVector g2 = curve.curve_derivative(t0, 2);
    if (std::abs(omega(curve.curve_derivative(t0, 1), g2)) < 1e-12)
        raise(ErrorCode::InvalidInput, "eta expansion: curve is not symplectically convex at t0");
    EtaFit fit;
    Matrix a(points, 3);
    Eigen::VectorXd rhs(points);
    for (int i = 0; i < points; ++i) {
        const double t = t_min * std::pow(t_max / t_min, static_cast<double>(i) / (points - 1));
        const PhaseVector gt = curve.curve_derivative(t0 + t, 0);
        const PhaseVector d1 = curve.curve_derivative(t0 + t, 1);
        const double eta = omega(gt - g0, d1) / omega(g2, d1);
        fit.t.push_back(t);
        fit.eta.push_back(eta);
        // Rows scaled by 1/t^2 so that every point weighs the same; the
        // t^2 column absorbs the quartic term of eta.
        a(i, 0) = 1.0;
        a(i, 1) = t;
        a(i, 2) = t * t;
        rhs[i] = eta / (t * t);
    }
    const Eigen::Vector3d c = a.colPivHouseholderQr().solve(rhs);
    fit.c2 = c[0];
    fit.c3 = c[1];
    fit.relative_error = std::abs(fit.c2 - fit.target) / std::abs(fit.target);
    return fit;
}

// ------------------------------------------------------------ Lagrangian wall

double lagrangian_delta_det(const GeneratingGraph& graph, const Eigen::VectorXd& q, const Eigen::VectorXd& w)
{
    const Matrix m = graph.jet().third_contract(q, w);
    if (graph.n() == 2) return m.determinant();
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()[svd.singularValues().size() - 1];
}

namespace {

double sigma_min(const Matrix& m)
{
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()[svd.singularValues().size() - 1];
}

template <class F>
double golden_min(F&& f, double a, double b)
{
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - r * (b - a), x2 = a + r * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 100 && b - a > 1e-14; ++it) {
        if (f1 < f2) {
            b = x2; x2 = x1; f2 = f1; x1 = b - r * (b - a); f1 = f(x1);
        } else {
            a = x1; x1 = x2; f1 = f2; x2 = a + r * (b - a); f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

ZeroDivisorReport zero_divisor_test(const GeneratingGraph& graph, const Eigen::VectorXd& q, int sphere_samples,
                                    std::uint64_t seed)
{
    const int n = graph.n();
    if (sphere_samples < 4) raise(ErrorCode::InvalidInput, "zero_divisor_test: too few sphere samples");
    const auto& jet = graph.jet();
    ZeroDivisorReport rep;
    rep.min_singular = std::numeric_limits<double>::infinity();
    rep.min_abs_det = std::numeric_limits<double>::quiet_NaN();
    if (n == 2) {
        auto dir = [](double th) { return Eigen::VectorXd(Eigen::Vector2d(std::cos(th), std::sin(th))); };
        auto sig = [&](double th) { return sigma_min(jet.third_contract(q, dir(th))); };
        auto adet = [&](double th) { return std::abs(jet.third_contract(q, dir(th)).determinant()); };
        const double h = std::numbers::pi / sphere_samples;
        double best_s = 0.0, best_d = 0.0, vs = std::numeric_limits<double>::infinity(), vd = vs;
        for (int i = 0; i < sphere_samples; ++i) {
            const double th = i * h;
            if (const double s = sig(th); s < vs) { vs = s; best_s = th; }
            if (const double d = adet(th); d < vd) { vd = d; best_d = th; }
        }
        const double ts = golden_min(sig, best_s - h, best_s + h);
        const double td = golden_min(adet, best_d - h, best_d + h);
        rep.min_singular = std::min(vs, sig(ts));
        rep.witness = sig(ts) <= vs ? dir(ts) : dir(best_s);
        rep.min_abs_det = std::min(vd, adet(td));
        return rep;
    }
    Rng rng(seed);
    for (int i = 0; i < sphere_samples; ++i) {
        Eigen::VectorXd w(n);
        for (int k = 0; k < n; ++k) w[k] = rng.normal();
        if (w.norm() == 0.0) continue;
        w.normalize();
        const double s = sigma_min(jet.third_contract(q, w));
        if (s < rep.min_singular) {
            rep.min_singular = s;
            rep.witness = w;
        }
    }
    return rep;
}

RuledReport ruled_test(const CubicForm2& f)
{
    RuledReport rep;
    const double A = 3 * f.a, B = 2 * f.b, C = f.c;
    const double D = f.b, E = 2 * f.c, F = 3 * f.d;
    rep.resultant = (A * F - C * D) * (A * F - C * D) - (A * E - B * D) * (B * F - C * E);
    // With this (Sylvester) sign convention the resultant equals -3 D.
    const double disc = cubic_discriminant(f);
    const double cscale = std::max({std::abs(f.a), std::abs(f.b), std::abs(f.c), std::abs(f.d), 1e-300});
    rep.resultant_consistent = std::abs(rep.resultant + 3.0 * disc) <= 1e-10 * std::pow(cscale, 4);
    if (f.is_zero()) return rep;

    const double tol = 1e-9 * cscale;
    auto residual = [&](const Eigen::Vector2d& w) { return f.gradient(w.normalized()).norm(); };
    std::vector<Eigen::Vector2d> candidates;
    if (f.a == 0.0 && f.b == 0.0) candidates.emplace_back(1.0, 0.0);  // the root z = infinity
    auto roots = [](double a2, double a1, double a0) {
        std::vector<double> r;
        if (a2 == 0.0) {
            if (a1 != 0.0) r.push_back(-a0 / a1);
            return r;
        }
        double disc2 = a1 * a1 - 4 * a2 * a0;
        const double sc = std::max({a1 * a1, std::abs(4 * a2 * a0), 1e-300});
        if (disc2 < 0 && disc2 > -1e-12 * sc) disc2 = 0.0;  // double root
        if (disc2 < 0) return r;
        const double s = std::sqrt(disc2);
        const double qq = -0.5 * (a1 + (a1 >= 0 ? s : -s));
        if (qq != 0.0) {
            r.push_back(qq / a2);
            r.push_back(a0 / qq);
        } else {
            r.push_back(0.0);
        }
        return r;
    };
    const bool first_zero = A == 0.0 && B == 0.0 && C == 0.0;
    for (double z : first_zero ? roots(D, E, F) : roots(A, B, C)) candidates.emplace_back(z, 1.0);

    for (auto w : candidates) {
        w.normalize();
        if (residual(w) > std::sqrt(tol) * std::max(1.0, std::sqrt(cscale))) continue;
        // Polish the angle by minimizing |grad F| on the unit circle.
        const double th0 = std::atan2(w[1], w[0]);
        auto g = [&](double th) { return f.gradient(Eigen::Vector2d(std::cos(th), std::sin(th))).norm(); };
        const double th = golden_min(g, th0 - 1e-4, th0 + 1e-4);
        Eigen::Vector2d polished(std::cos(th), std::sin(th));
        if (g(th0) < g(th)) polished = w;
        if (residual(polished) > tol) continue;
        if (polished[0] < -1e-15 || (std::abs(polished[0]) <= 1e-15 && polished[1] < 0)) polished = -polished;
        if (std::abs(polished[0]) < 1e-15) polished[0] = 0.0;
        if (std::abs(polished[1]) < 1e-15) polished[1] = 0.0;
        rep.direction = polished;
        break;
    }
    return rep;
}

Classification classify_cubic_table(const CubicForm2& f, std::size_t trials, std::uint64_t seed, unsigned threads)
{
    if (f.is_zero()) raise(ErrorCode::InvalidInput, "cubic form is identically zero (the table is a Lagrangian plane)");
    Classification out;
    out.discriminant = cubic_discriminant(f);
    const double cscale = std::max({std::abs(f.a), std::abs(f.b), std::abs(f.c), std::abs(f.d)});
    const double dtol = 1e-12 * std::pow(cscale, 4);
    if (out.discriminant > dtol) out.cls = "multiplicity-2";
    else if (out.discriminant < -dtol) out.cls = "multiplicity-0-or-4";
    else out.cls = "ruled";
    if (out.cls == "ruled") out.ruling = ruled_test(f).direction;

    const GeneratingGraph graph(f.polynomial());
    std::vector<std::size_t> counts(trials, 0), redraws(trials, 0);
    parallel_for(trials, resolve_threads(threads), [&](std::size_t i) {
        Rng rng(split_seed(seed, i));
        for (int attempt = 0; attempt < 100; ++attempt) {
            PhaseVector z(4);
            for (int k = 0; k < 4; ++k) z[k] = rng.normal();
            const Eigen::Vector2d Q(z[0], z[2]), W(z[1], z[3]);
            if ((f.gradient(Q) - W).norm() < 1e-6) { ++redraws[i]; continue; }
            try {
                const auto cands = step_cubic_graph(graph, z);
                bool near_wall = false;
                std::size_t c = 0;
                for (const auto& s : cands) {
                    near_wall = near_wall || s.on_wall;
                    if (!s.degenerate) ++c;
                }
                if (near_wall) { ++redraws[i]; continue; }
                counts[i] = c;
                return;
            } catch (const Error& e) {
                if (e.code() != ErrorCode::DegeneratePencil) throw;
                ++redraws[i];
            }
        }
        raise(ErrorCode::Consistency, "could not draw a generic probe point");
    });
    for (std::size_t i = 0; i < trials; ++i) {
        out.histogram[counts[i]] += 1;
        out.redraws += redraws[i];
    }
    auto describe = [&] {
        std::string s;
        for (const auto& [k, v] : out.histogram) s += " " + std::to_string(k) + ":" + std::to_string(v);
        return s;
    };
    if (out.cls == "multiplicity-2" && (out.histogram.size() != 1 || out.histogram.begin()->first != 2))
        raise(ErrorCode::Consistency, "D > 0 but the multiplicity histogram is" + describe());
    if (out.cls == "multiplicity-0-or-4")
        for (const auto& [k, v] : out.histogram)
            if (k != 0 && k != 4) raise(ErrorCode::Consistency, "D < 0 but the multiplicity histogram is" + describe());
    return out;
}

}  // namespace osbk
