#include "osbk/manifolds.hpp"

#include "osbk/error.hpp"
#include "osbk/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace osbk {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// r-th derivative of cos / sin at theta.
double dcos(double theta, int r)
{
    switch (r % 4) {
    case 0: return std::cos(theta);
    case 1: return -std::sin(theta);
    case 2: return -std::cos(theta);
    default: return std::sin(theta);
    }
}

double dsin(double theta, int r)
{
    switch (r % 4) {
    case 0: return std::sin(theta);
    case 1: return std::cos(theta);
    case 2: return -std::sin(theta);
    default: return -std::cos(theta);
    }
}

double wrap_angle(double a)
{
    double r = std::fmod(a, two_pi);
    if (r < 0) r += two_pi;
    if (r >= two_pi) r -= two_pi;
    return r;
}

}  // namespace

// ---------------------------------------------------------------- trig

TrigImmersion::TrigImmersion(int m, std::vector<std::vector<TrigTerm>> coords) : m_(m), coords_(std::move(coords))
{
    if (m < 1) raise(ErrorCode::InvalidInput, "trig immersion: parameter dimension must be >= 1");
    if (coords_.size() < 2 || coords_.size() % 2 != 0)
        raise(ErrorCode::DimensionMismatch, "trig immersion: ambient dimension must be even and >= 2, got " +
                                                std::to_string(coords_.size()));
    for (const auto& c : coords_)
        for (const auto& t : c) {
            if (static_cast<int>(t.freq.size()) != m)
                raise(ErrorCode::DimensionMismatch, "trig immersion: frequency vector of length " +
                                                        std::to_string(t.freq.size()) + ", expected " +
                                                        std::to_string(m));
            if (!std::isfinite(t.cos_amp) || !std::isfinite(t.sin_amp))
                raise(ErrorCode::InvalidInput, "trig immersion: non-finite amplitude");
        }
}

PhaseVector TrigImmersion::partial(const ParamPoint& u, const std::vector<int>& orders) const
{
    if (u.size() != m_) raise(ErrorCode::DimensionMismatch, "trig immersion: parameter dimension mismatch");
    if (static_cast<int>(orders.size()) != m_) raise(ErrorCode::DimensionMismatch, "trig immersion: order vector");
    int total = 0;
    for (int o : orders) total += o;
    PhaseVector out = PhaseVector::Zero(ambient_dim());
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        double s = 0.0;
        for (const auto& term : coords_[i]) {
            double theta = 0.0;
            double factor = 1.0;
            for (int j = 0; j < m_; ++j) {
                const int k = term.freq[static_cast<std::size_t>(j)];
                theta += k * u[j];
                for (int r = 0; r < orders[static_cast<std::size_t>(j)]; ++r) factor *= k;
            }
            if (factor == 0.0) continue;
            s += factor * (term.cos_amp * dcos(theta, total) + term.sin_amp * dsin(theta, total));
        }
        out[static_cast<Eigen::Index>(i)] = s;
    }
    return out;
}

PhaseVector TrigImmersion::eval(const ParamPoint& u) const
{
    return partial(u, std::vector<int>(static_cast<std::size_t>(m_), 0));
}

Matrix TrigImmersion::jacobian(const ParamPoint& u) const
{
    Matrix jac(ambient_dim(), m_);
    std::vector<int> orders(static_cast<std::size_t>(m_), 0);
    for (int j = 0; j < m_; ++j) {
        orders[static_cast<std::size_t>(j)] = 1;
        jac.col(j) = partial(u, orders);
        orders[static_cast<std::size_t>(j)] = 0;
    }
    return jac;
}

PhaseVector TrigImmersion::curve_derivative(double t, int r) const
{
    if (m_ != 1) raise(ErrorCode::InvalidInput, "curve_derivative requires a curve (m = 1)");
    return partial(ParamPoint::Constant(1, t), {r});
}

TrigImmersion TrigImmersion::circle(double radius)
{
    return TrigImmersion(1, {{{{1}, radius, 0.0}}, {{{1}, 0.0, radius}}});
}

TrigImmersion TrigImmersion::reversed_circle()
{
    return TrigImmersion(1, {{{{1}, 1.0, 0.0}}, {{{1}, 0.0, -1.0}}});
}

TrigImmersion TrigImmersion::chebyshev()
{
    return TrigImmersion(1, {{{{1}, 1.0, 0.0}}, {{{1}, 0.0, 1.0}}, {{{2}, 1.0, 0.0}}, {{{2}, 0.0, 1.0}}});
}

TrigImmersion TrigImmersion::symplectic_torus()
{
    // Product-to-sum expansion of
    // (cos a cos b, sin a sin b, sin a cos b, -cos a sin b).
    const std::vector<int> plus{1, 1};
    const std::vector<int> minus{1, -1};
    return TrigImmersion(2, {
                                {{plus, 0.5, 0.0}, {minus, 0.5, 0.0}},
                                {{minus, 0.5, 0.0}, {plus, -0.5, 0.0}},
                                {{plus, 0.0, 0.5}, {minus, 0.0, 0.5}},
                                {{plus, 0.0, -0.5}, {minus, 0.0, 0.5}},
                            });
}

TrigImmersion TrigImmersion::legendrian_curve()
{
    const double a = std::sqrt(2.0 / 3.0);
    const double b = std::sqrt(1.0 / 3.0);
    return TrigImmersion(1, {{{{1}, a, 0.0}}, {{{1}, 0.0, a}}, {{{2}, b, 0.0}}, {{{2}, 0.0, -b}}});
}

TrigImmersion TrigImmersion::x_subspace_torus()
{
    // ((2 + cos b) cos a, (2 + cos b) sin a, sin b) in the x-coordinates.
    const std::vector<int> plus{1, 1};
    const std::vector<int> minus{1, -1};
    return TrigImmersion(2, {
                                {{{1, 0}, 2.0, 0.0}, {plus, 0.5, 0.0}, {minus, 0.5, 0.0}},
                                {},
                                {{{1, 0}, 0.0, 2.0}, {plus, 0.0, 0.5}, {minus, 0.0, 0.5}},
                                {},
                                {{{0, 1}, 0.0, 1.0}},
                                {},
                            });
}

// ---------------------------------------------------------------- ellipsoid

void SymplecticEllipsoid::validate() const
{
    if (axes.empty()) raise(ErrorCode::InvalidInput, "ellipsoid: no axes");
    for (double a : axes)
        if (!(a > 0.0) || !std::isfinite(a)) raise(ErrorCode::InvalidInput, "ellipsoid: axes must be positive");
}

namespace {

// Hyperspherical point s and, optionally, ds/dphi_k.
Eigen::VectorXd sphere_point(const Eigen::VectorXd& phi, Eigen::Index d, int diff = -1)
{
    Eigen::VectorXd s(d);
    for (Eigen::Index j = 0; j < d; ++j) {
        double v = 1.0;
        for (Eigen::Index i = 0; i < j; ++i) v *= (i == diff) ? std::cos(phi[i]) : std::sin(phi[i]);
        if (j < d - 1) v *= (j == diff) ? -std::sin(phi[j]) : std::cos(phi[j]);
        if (diff >= 0 && diff > j) v = 0.0;
        s[j] = v;
    }
    return s;
}

}  // namespace

PhaseVector SymplecticEllipsoid::eval(const ParamPoint& u) const
{
    const Eigen::Index d = pairs();
    if (u.size() != param_dim()) raise(ErrorCode::DimensionMismatch, "ellipsoid: parameter dimension mismatch");
    Eigen::VectorXd s = sphere_point(u.tail(d - 1), d);
    PhaseVector z(2 * d);
    for (Eigen::Index j = 0; j < d; ++j) {
        const double r = std::sqrt(axes[static_cast<std::size_t>(j)]) * s[j];
        z[2 * j] = r * std::cos(u[j]);
        z[2 * j + 1] = r * std::sin(u[j]);
    }
    return z;
}

Matrix SymplecticEllipsoid::jacobian(const ParamPoint& u) const
{
    const Eigen::Index d = pairs();
    if (u.size() != param_dim()) raise(ErrorCode::DimensionMismatch, "ellipsoid: parameter dimension mismatch");
    Matrix jac = Matrix::Zero(2 * d, param_dim());
    Eigen::VectorXd phi = u.tail(d - 1);
    Eigen::VectorXd s = sphere_point(phi, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        const double r = std::sqrt(axes[static_cast<std::size_t>(j)]) * s[j];
        jac(2 * j, j) = -r * std::sin(u[j]);
        jac(2 * j + 1, j) = r * std::cos(u[j]);
    }
    for (Eigen::Index k = 0; k + 1 < d; ++k) {
        Eigen::VectorXd ds = sphere_point(phi, d, static_cast<int>(k));
        for (Eigen::Index j = 0; j < d; ++j) {
            const double dr = std::sqrt(axes[static_cast<std::size_t>(j)]) * ds[j];
            jac(2 * j, d + k) = dr * std::cos(u[j]);
            jac(2 * j + 1, d + k) = dr * std::sin(u[j]);
        }
    }
    return jac;
}

ParamPoint SymplecticEllipsoid::param_of(const PhaseVector& z) const
{
    const Eigen::Index d = pairs();
    if (z.size() != 2 * d) raise(ErrorCode::DimensionMismatch, "ellipsoid: point dimension mismatch");
    ParamPoint u(param_dim());
    Eigen::VectorXd s(d);
    for (Eigen::Index j = 0; j < d; ++j) {
        u[j] = std::atan2(z[2 * j + 1], z[2 * j]);
        s[j] = std::hypot(z[2 * j], z[2 * j + 1]) / std::sqrt(axes[static_cast<std::size_t>(j)]);
    }
    for (Eigen::Index k = 0; k + 1 < d; ++k) u[d + k] = std::atan2(s.tail(d - k - 1).norm(), s[k]);
    return u;
}

double SymplecticEllipsoid::level(const PhaseVector& z) const
{
    const Eigen::Index d = pairs();
    if (z.size() != 2 * d) raise(ErrorCode::DimensionMismatch, "ellipsoid: point dimension mismatch");
    double v = 0.0;
    for (Eigen::Index j = 0; j < d; ++j)
        v += (z[2 * j] * z[2 * j] + z[2 * j + 1] * z[2 * j + 1]) / axes[static_cast<std::size_t>(j)];
    return v;
}

// ---------------------------------------------------------------- graph

GeneratingGraph::GeneratingGraph(Polynomial f) : jet_(std::move(f))
{
    if (jet_.nvars() < 1) raise(ErrorCode::InvalidInput, "generating function needs at least one variable");
}

PhaseVector GeneratingGraph::eval(const ParamPoint& q) const
{
    return from_block_layout(q, jet_.gradient(q));
}

Matrix GeneratingGraph::jacobian(const ParamPoint& q) const
{
    const int k = n();
    Matrix h = jet_.hessian(q);
    Matrix jac = Matrix::Zero(2 * k, k);
    for (int i = 0; i < k; ++i) {
        jac(2 * i, i) = 1.0;
        for (int j = 0; j < k; ++j) jac(2 * j + 1, i) = h(j, i);
    }
    return jac;
}

// ---------------------------------------------------------------- spec

ManifoldSpec::ManifoldSpec(Table table, std::optional<AffineSymplecticMap> transform, std::optional<ParamBox> box)
    : table_(std::move(table)), transform_(std::move(transform))
{
    if (const auto* e = ellipsoid()) e->validate();
    const Eigen::Index dim = std::visit([](const auto& t) -> Eigen::Index {
        if constexpr (std::is_same_v<std::decay_t<decltype(t)>, SymplecticEllipsoid>)
            return 2 * t.pairs();
        else if constexpr (std::is_same_v<std::decay_t<decltype(t)>, GeneratingGraph>)
            return 2 * t.n();
        else
            return t.ambient_dim();
    }, table_);
    if (transform_) {
        if (transform_->linear.rows() != dim || transform_->linear.cols() != dim || transform_->translation.size() != dim)
            raise(ErrorCode::DimensionMismatch, "manifold transform does not match the ambient dimension");
        if (transform_->symplectic_defect() > 1e-10 * std::max(1.0, transform_->linear.cwiseAbs().maxCoeff() *
                                                                       transform_->linear.cwiseAbs().maxCoeff()))
            raise(ErrorCode::InvalidInput, "manifold transform is not symplectic");
    }
    const int pd = param_dim();
    if (box) {
        if (box->lo.size() != pd || box->hi.size() != pd)
            raise(ErrorCode::DimensionMismatch, "parameter box does not match the parameter dimension");
        for (int i = 0; i < pd; ++i)
            if (!(box->lo[i] < box->hi[i])) raise(ErrorCode::InvalidInput, "parameter box has lo >= hi");
        box_ = *box;
    } else if (kind() == TableKind::Graph) {
        box_ = {Eigen::VectorXd::Constant(pd, -5.0), Eigen::VectorXd::Constant(pd, 5.0)};
    }
}

TableKind ManifoldSpec::kind() const
{
    if (trig()) return TableKind::Trig;
    if (ellipsoid()) return TableKind::Ellipsoid;
    return TableKind::Graph;
}

ManifoldSpec ManifoldSpec::transformed(const AffineSymplecticMap& outer) const
{
    AffineSymplecticMap t = transform_ ? outer.compose(*transform_) : outer;
    ManifoldSpec out(table_, t, kind() == TableKind::Graph ? std::optional<ParamBox>(box_) : std::nullopt);
    return out;
}

ManifoldSpec ManifoldSpec::untransformed() const
{
    return ManifoldSpec(table_, std::nullopt, kind() == TableKind::Graph ? std::optional<ParamBox>(box_) : std::nullopt);
}

int ManifoldSpec::param_dim() const
{
    if (const auto* t = trig()) return t->param_dim();
    if (const auto* e = ellipsoid()) return e->param_dim();
    return graph()->n();
}

Eigen::Index ManifoldSpec::ambient_dim() const
{
    if (const auto* t = trig()) return t->ambient_dim();
    if (const auto* e = ellipsoid()) return 2 * e->pairs();
    return 2 * graph()->n();
}

bool ManifoldSpec::periodic(int i) const
{
    (void)i;
    return kind() != TableKind::Graph;
}

ParamBox ManifoldSpec::sampling_box() const
{
    const int pd = param_dim();
    switch (kind()) {
    case TableKind::Trig: return {Eigen::VectorXd::Zero(pd), Eigen::VectorXd::Constant(pd, two_pi)};
    case TableKind::Ellipsoid: {
        const Eigen::Index d = ellipsoid()->pairs();
        ParamBox b{Eigen::VectorXd::Zero(pd), Eigen::VectorXd::Constant(pd, two_pi)};
        for (Eigen::Index k = d; k < pd; ++k) b.hi[k] = std::numbers::pi / 2;
        return b;
    }
    case TableKind::Graph: return box_;
    }
    return box_;
}

ParamPoint ManifoldSpec::reduce(const ParamPoint& u) const
{
    check_param(u);
    ParamPoint r = u;
    for (int i = 0; i < r.size(); ++i)
        if (periodic(i)) r[i] = wrap_angle(r[i]);
    return r;
}

double ManifoldSpec::param_distance(const ParamPoint& u, const ParamPoint& v) const
{
    check_param(u);
    check_param(v);
    double s = 0.0;
    for (int i = 0; i < u.size(); ++i) {
        double diff = u[i] - v[i];
        if (periodic(i)) {
            diff = wrap_angle(diff);
            if (diff > std::numbers::pi) diff -= two_pi;
        }
        s += diff * diff;
    }
    return std::sqrt(s);
}

void ManifoldSpec::check_param(const ParamPoint& u) const
{
    if (u.size() != param_dim())
        raise(ErrorCode::DimensionMismatch, "parameter point has dimension " + std::to_string(u.size()) +
                                                ", table expects " + std::to_string(param_dim()));
    if (!u.allFinite()) raise(ErrorCode::InvalidInput, "parameter point has non-finite entries");
}

PhaseVector ManifoldSpec::embed(const ParamPoint& u) const
{
    check_param(u);
    PhaseVector z = std::visit([&](const auto& t) { return PhaseVector(t.eval(u)); }, table_);
    return transform_ ? transform_->apply(z) : z;
}

Matrix ManifoldSpec::jacobian(const ParamPoint& u) const
{
    check_param(u);
    Matrix jac = std::visit([&](const auto& t) { return Matrix(t.jacobian(u)); }, table_);
    return transform_ ? Matrix(transform_->linear * jac) : jac;
}

std::vector<PhaseVector> ManifoldSpec::tangent_basis(const ParamPoint& u) const
{
    Matrix jac = jacobian(u);
    Eigen::JacobiSVD<Matrix> svd(jac);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv[0] == 0.0 || sv[sv.size() - 1] < 1e-8 * sv[0]) {
        std::string where;
        for (int i = 0; i < u.size(); ++i) where += (i ? ", " : "") + std::to_string(u[i]);
        raise(ErrorCode::ImmersionFailure, "tangent vectors are rank deficient at parameter (" + where + ")");
    }
    std::vector<PhaseVector> out;
    for (int j = 0; j < jac.cols(); ++j) out.push_back(jac.col(j));
    return out;
}

double ManifoldSpec::scale() const
{
    double s = 0.0;
    if (const auto* t = trig()) {
        for (const auto& c : t->coords()) {
            double a = 0.0;
            for (const auto& term : c) a += std::abs(term.cos_amp) + std::abs(term.sin_amp);
            s = std::max(s, a);
        }
    } else if (const auto* e = ellipsoid()) {
        s = std::sqrt(*std::max_element(e->axes.begin(), e->axes.end()));
    } else {
        const int n = graph()->n();
        const ParamBox& b = box_;
        s = graph()->eval((b.lo + b.hi) / 2).norm();
        if (n <= 10) {
            for (unsigned mask = 0; mask < (1u << n); ++mask) {
                ParamPoint q(n);
                for (int i = 0; i < n; ++i) q[i] = (mask >> i) & 1u ? b.hi[i] : b.lo[i];
                s = std::max(s, graph()->eval(q).norm());
            }
        }
    }
    if (transform_) {
        s = s * transform_->linear.norm() + transform_->translation.norm();
    }
    return std::max(s, 1e-300);
}

// ---------------------------------------------------------------- sampling

std::vector<ParamPoint> latin_hypercube(const ParamBox& box, std::size_t count, std::uint64_t seed)
{
    const Eigen::Index dim = box.lo.size();
    std::vector<ParamPoint> pts(count, ParamPoint(dim));
    Rng rng(seed);
    std::vector<std::size_t> perm(count);
    for (Eigen::Index k = 0; k < dim; ++k) {
        for (std::size_t i = 0; i < count; ++i) perm[i] = i;
        for (std::size_t i = count; i > 1; --i) std::swap(perm[i - 1], perm[rng.index(i)]);
        for (std::size_t i = 0; i < count; ++i) {
            const double cell = (static_cast<double>(perm[i]) + rng.uniform()) / static_cast<double>(count);
            pts[i][k] = box.lo[k] + (box.hi[k] - box.lo[k]) * cell;
        }
    }
    return pts;
}

// ---------------------------------------------------------------- convexity

namespace {

double curvature_form(const TrigImmersion& c, double t)
{
    return omega(c.curve_derivative(t, 1), c.curve_derivative(t, 2));
}

// Golden-section search for the minimum of sign * f on [a, b].
double golden(const TrigImmersion& c, double a, double b, double sign)
{
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - ratio * (b - a);
    double x2 = a + ratio * (b - a);
    double f1 = sign * curvature_form(c, x1);
    double f2 = sign * curvature_form(c, x2);
    for (int it = 0; it < 80 && b - a > 1e-13; ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = sign * curvature_form(c, x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = sign * curvature_form(c, x2);
        }
    }
    return (a + b) / 2;
}

}  // namespace

ConvexityProfile symplectic_convexity_profile(const TrigImmersion& curve, int samples)
{
    if (curve.param_dim() != 1) raise(ErrorCode::InvalidInput, "convexity profile requires a curve");
    if (samples < 3) raise(ErrorCode::InvalidInput, "convexity profile needs at least 3 samples");
    const double h = two_pi / samples;
    ConvexityProfile p;
    p.min = p.max = curvature_form(curve, 0.0);
    for (int i = 1; i < samples; ++i) {
        const double t = i * h;
        const double v = curvature_form(curve, t);
        if (v < p.min) { p.min = v; p.argmin = t; }
        if (v > p.max) { p.max = v; p.argmax = t; }
    }
    const double tmin = golden(curve, p.argmin - h, p.argmin + h, 1.0);
    const double tmax = golden(curve, p.argmax - h, p.argmax + h, -1.0);
    const double vmin = curvature_form(curve, tmin);
    const double vmax = curvature_form(curve, tmax);
    if (vmin < p.min) { p.min = vmin; p.argmin = wrap_angle(tmin); }
    if (vmax > p.max) { p.max = vmax; p.argmax = wrap_angle(tmax); }
    p.convex = p.min > 0.0;
    return p;
}

// ---------------------------------------------------------------- (L), (LL)

namespace {

std::vector<ParamPoint> condition_samples(const ManifoldSpec& spec, int samples, std::uint64_t seed)
{
    const std::size_t count = static_cast<std::size_t>(std::max(1, samples)) *
                              static_cast<std::size_t>(spec.param_dim());
    return latin_hypercube(spec.sampling_box(), std::min<std::size_t>(count, 4096), seed);
}

}  // namespace

ConditionLResult check_condition_L(const ManifoldSpec& spec, int samples, std::uint64_t seed, const Tolerances& tol)
{
    std::vector<ParamPoint> params = condition_samples(spec, samples, seed);
    std::vector<PhaseVector> pts;
    pts.reserve(params.size());
    for (const auto& u : params) pts.push_back(spec.embed(u));
    const double sc = std::max(1.0, spec.scale());
    const double threshold = tol.geometric * sc * sc;

    ConditionLResult res;
    std::size_t bi = 0, bj = 0;
    std::vector<PhaseVector> diffs;
    diffs.reserve(pts.size());
    for (const auto& p : pts) diffs.push_back(p - pts[0]);
    for (std::size_t i = 1; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const double v = std::abs(omega(diffs[i], diffs[j]));
            if (v > res.max_value) {
                res.max_value = v;
                bi = i;
                bj = j;
            }
        }
    res.holds = res.max_value > threshold;
    if (res.holds) res.witness = std::array<ParamPoint, 3>{params[0], params[bi], params[bj]};
    return res;
}

ConditionLLResult check_condition_LL(const ManifoldSpec& spec, const std::vector<PhaseVector>& probes, int samples,
                                     std::uint64_t seed, const Tolerances& tol)
{
    std::vector<ParamPoint> params = condition_samples(spec, samples, seed);
    std::vector<PhaseVector> pts;
    std::vector<Matrix> jacs;
    for (const auto& u : params) {
        pts.push_back(spec.embed(u));
        jacs.push_back(spec.jacobian(u));
    }
    const double sc = std::max(1.0, spec.scale());
    ConditionLLResult res;
    res.holds = true;
    for (const auto& probe : probes) {
        if (probe.size() != spec.ambient_dim())
            raise(ErrorCode::DimensionMismatch, "condition (LL) probe has the wrong dimension");
        ProbeVerdict v;
        v.probe = probe;
        const double psc = std::max(sc, probe.norm());
        for (std::size_t k = 0; k < pts.size(); ++k) {
            const PhaseVector chord = pts[k] - probe;
            for (int c = 0; c < jacs[k].cols(); ++c) {
                const double val = std::abs(omega(chord, jacs[k].col(c)));
                if (val > v.max_value) {
                    v.max_value = val;
                    v.witness = params[k];
                }
            }
        }
        v.holds = v.max_value > tol.geometric * psc * sc;
        if (!v.holds) v.witness.reset();
        res.holds = res.holds && v.holds;
        res.probes.push_back(std::move(v));
    }
    return res;
}

}  // namespace osbk
