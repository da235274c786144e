#include "osbk/correspondence.hpp"
#include "osbk/parallel.hpp"
#include "osbk/random.hpp"
#include "osbk/variational.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace osbk {

Eigen::VectorXd even_residuals(const ManifoldSpec& spec, const std::vector<ParamPoint>& params, const PhaseVector& z1)
{
    const std::size_t n = params.size();
    const int m = spec.param_dim();
    const Eigen::Index dim = spec.ambient_dim();
    if (z1.size() != dim) raise(ErrorCode::DimensionMismatch, "even_residuals: start vertex dimension");
    Eigen::VectorXd r(dim + static_cast<Eigen::Index>(n) * m);
    PhaseVector defect = PhaseVector::Zero(dim);
    PhaseVector z = z1;
    for (std::size_t i = 0; i < n; ++i) {
        const PhaseVector q = spec.embed(params[i]);
        defect += ((i + 1) % 2 == 0 ? 1.0 : -1.0) * q;
        const Matrix jac = spec.jacobian(params[i]);
        for (int k = 0; k < m; ++k) r[dim + static_cast<Eigen::Index>(i) * m + k] = omega(q - z, jac.col(k));
        z = reflect(z, q);
    }
    r.head(dim) = defect;
    return r;
}

namespace {

struct EvenProblem {
    const ManifoldSpec& spec;
    int n;
    int m;
    Eigen::Index dim;

    std::vector<ParamPoint> params(const Eigen::VectorXd& x) const
    {
        std::vector<ParamPoint> u;
        for (int i = 0; i < n; ++i) u.push_back(x.segment(i * m, m));
        return u;
    }
    PhaseVector z1(const Eigen::VectorXd& x) const { return x.tail(dim); }
    Eigen::VectorXd residual(const Eigen::VectorXd& x) const { return even_residuals(spec, params(x), z1(x)); }
    Matrix jacobian(const Eigen::VectorXd& x) const
    {
        const Eigen::VectorXd r0 = residual(x);
        Matrix jac(r0.size(), x.size());
        for (Eigen::Index j = 0; j < x.size(); ++j) {
            const double h = 1e-7 * std::max(1.0, std::abs(x[j]));
            Eigen::VectorXd xp = x, xm = x;
            xp[j] += h;
            xm[j] -= h;
            jac.col(j) = (residual(xp) - residual(xm)) / (2 * h);
        }
        return jac;
    }
};

struct EvenOutcome {
    bool converged = false;
    OrbitPolyline orbit;
};

EvenOutcome solve_even(const EvenProblem& pb, Eigen::VectorXd x, const EvenSearchOptions& opts, double scale)
{
    Eigen::VectorXd r = pb.residual(x);
    double cost = r.squaredNorm();
    double lambda = 1e-3;
    const double target = 1e-28 * std::pow(scale, 4);
    for (int it = 0; it < opts.max_iterations && cost > target; ++it) {
        const Matrix jac = pb.jacobian(x);
        const Matrix jtj = jac.transpose() * jac;
        const Eigen::VectorXd jtr = jac.transpose() * r;
        bool accepted = false;
        for (int tries = 0; tries < 20; ++tries) {
            Matrix a = jtj;
            a.diagonal().array() += lambda * (1.0 + jtj.diagonal().array());
            const Eigen::VectorXd step = a.ldlt().solve(-jtr);
            const Eigen::VectorXd xt = x + step;
            const Eigen::VectorXd rt = pb.residual(xt);
            if (rt.allFinite() && rt.squaredNorm() < cost) {
                x = xt;
                r = rt;
                cost = rt.squaredNorm();
                lambda = std::max(lambda / 3.0, 1e-15);
                accepted = true;
                break;
            }
            lambda *= 4.0;
        }
        if (!accepted) break;
    }
    // Minimum-norm Gauss-Newton steps drive the residual to rounding level.
    for (int it = 0; it < 25; ++it) {
        const Matrix jac = pb.jacobian(x);
        const Eigen::VectorXd step = jac.completeOrthogonalDecomposition().solve(-r);
        const Eigen::VectorXd xt = x + step;
        const Eigen::VectorXd rt = pb.residual(xt);
        if (!(rt.allFinite() && rt.squaredNorm() < cost)) break;
        x = xt;
        r = rt;
        cost = rt.squaredNorm();
    }

    EvenOutcome out;
    out.converged = std::sqrt(cost) <= 1e-11 * scale * scale;
    if (!out.converged) return out;
    std::vector<ParamPoint> u = pb.params(x);
    for (auto& p : u) p = pb.spec.reduce(p);
    out.orbit = build_orbit(pb.spec, u, OrbitKind::Periodic, opts.tol, pb.z1(x));
    // The residual is quadratic in the midpoint gap near backtracking
    // solutions, so gaps are only resolved to about sqrt(residual tolerance).
    const double gap_resolution = std::sqrt(1e-11) * scale;
    out.orbit.degenerate = out.orbit.degenerate || out.orbit.min_midpoint_gap <= gap_resolution;
    return out;
}

bool same_cycle(const std::vector<PhaseVector>& a, const std::vector<PhaseVector>& b, double tol)
{
    for (std::size_t s = 0; s < a.size(); ++s) {
        double worst = 0.0;
        for (std::size_t i = 0; i < a.size() && worst <= tol; ++i) worst = std::max(worst, (a[i] - b[(i + s) % b.size()]).norm());
        if (worst <= tol) return true;
    }
    return false;
}

}  // namespace

EvenSearchResult search_even_periodic(const ManifoldSpec& spec, int n, const EvenSearchOptions& opts)
{
    if (n < 2 || n % 2 != 0) raise(ErrorCode::InvalidInput, "search_even_periodic needs even n >= 2, got " + std::to_string(n));
    const int m = spec.param_dim();
    const Eigen::Index dim = spec.ambient_dim();
    EvenProblem pb{spec, n, m, dim};
    const double scale = std::max(1.0, spec.scale());

    const ParamBox one = spec.sampling_box();
    ParamBox box{Eigen::VectorXd(n * m + dim), Eigen::VectorXd(n * m + dim)};
    for (int i = 0; i < n; ++i) {
        box.lo.segment(i * m, m) = one.lo;
        box.hi.segment(i * m, m) = one.hi;
    }
    box.lo.tail(dim).setConstant(-2.0 * scale);
    box.hi.tail(dim).setConstant(2.0 * scale);
    const auto starts = latin_hypercube(box, opts.starts, opts.seed);

    std::vector<EvenOutcome> outcomes(starts.size());
    parallel_for(starts.size(), resolve_threads(opts.threads),
                 [&](std::size_t i) { outcomes[i] = solve_even(pb, starts[i], opts, scale); });

    EvenSearchResult res;
    res.starts = starts.size();
    for (const auto& o : outcomes) {
        if (!o.converged) continue;
        ++res.converged;
        if (o.orbit.degenerate) ++res.degenerate; else ++res.nondegenerate;
        bool dup = false;
        for (const auto& k : res.orbits)
            if (same_cycle(k.vertices, o.orbit.vertices, opts.tol.dedup * scale)) dup = true;
        if (!dup) res.orbits.push_back(o.orbit);
    }
    return res;
}

}  // namespace osbk
