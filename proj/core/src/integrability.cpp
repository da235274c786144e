#include "osbk/integrability.hpp"

#include "osbk/error.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace osbk {

std::string to_string(IntegralKind k)
{
    return k == IntegralKind::Ellipsoid ? "ellipsoid" : "cubic-graph";
}

Eigen::VectorXd IntegralSet::values(const PhaseVector& z) const
{
    Eigen::VectorXd v(static_cast<Eigen::Index>(integrals.size()));
    for (std::size_t i = 0; i < integrals.size(); ++i) v[static_cast<Eigen::Index>(i)] = integrals[i].value(z);
    return v;
}

namespace {

std::vector<Integral> raw_integrals(const ManifoldSpec& spec, IntegralKind& kind)
{
    std::vector<Integral> out;
    if (const auto* e = spec.ellipsoid()) {
        kind = IntegralKind::Ellipsoid;
        const Eigen::Index d = static_cast<Eigen::Index>(e->axes.size());
        for (Eigen::Index j = 0; j < d; ++j) {
            out.push_back({"I_" + std::to_string(j + 1),
                           [j](const PhaseVector& z) { return z[2 * j] * z[2 * j] + z[2 * j + 1] * z[2 * j + 1]; },
                           [j](const PhaseVector& z) {
                               PhaseVector g = PhaseVector::Zero(z.size());
                               g[2 * j] = 2 * z[2 * j];
                               g[2 * j + 1] = 2 * z[2 * j + 1];
                               return g;
                           }});
        }
        return out;
    }
    if (const auto* g = spec.graph()) {
        if (!g->is_homogeneous_cubic())
            raise(ErrorCode::Unsupported, "no known integrals: generating function is not a homogeneous cubic");
        kind = IntegralKind::CubicGraph;
        auto jet = std::make_shared<PolynomialJet>(g->function());
        const int n = g->n();
        auto q_of = [n](const PhaseVector& z) {
            Eigen::VectorXd q(n);
            for (int k = 0; k < n; ++k) q[k] = z[2 * k];
            return q;
        };
        for (int i = 0; i < n; ++i) {
            out.push_back({"G_" + std::to_string(i + 1),
                           [jet, i, q_of](const PhaseVector& z) { return z[2 * i + 1] - jet->gradient(q_of(z))[i]; },
                           [jet, i, n, q_of](const PhaseVector& z) {
                               const Matrix h = jet->hessian(q_of(z));
                               PhaseVector grad = PhaseVector::Zero(z.size());
                               grad[2 * i + 1] = 1.0;
                               for (int k = 0; k < n; ++k) grad[2 * k] = -h(i, k);
                               return grad;
                           }});
        }
        return out;
    }
    raise(ErrorCode::Unsupported, "no known integrals for a trigonometric immersion");
}

}  // namespace

IntegralSet integrals_for(const ManifoldSpec& spec)
{
    IntegralSet set;
    std::vector<Integral> raw = raw_integrals(spec, set.kind);
    if (!spec.transform()) {
        set.integrals = std::move(raw);
        return set;
    }
    // I o T^-1 has gradient T^-T (grad I)(T^-1 z).
    auto inv = std::make_shared<AffineSymplecticMap>(spec.transform()->inverse());
    for (auto& I : raw) {
        auto value = I.value;
        auto gradient = I.gradient;
        set.integrals.push_back({I.name, [inv, value](const PhaseVector& z) { return value(inv->apply(z)); },
                                 [inv, gradient](const PhaseVector& z) {
                                     return PhaseVector(inv->linear.transpose() * gradient(inv->apply(z)));
                                 }});
    }
    return set;
}

double poisson_bracket(const Integral& f, const Integral& g, const PhaseVector& z)
{
    return omega(f.gradient(z), g.gradient(z));
}

double max_bracket(const IntegralSet& set, const PhaseVector& z)
{
    std::vector<PhaseVector> grads;
    for (const auto& I : set.integrals) grads.push_back(I.gradient(z));
    double worst = 0.0;
    for (std::size_t j = 0; j < grads.size(); ++j)
        for (std::size_t k = j + 1; k < grads.size(); ++k) worst = std::max(worst, std::abs(omega(grads[j], grads[k])));
    return worst;
}

InvarianceAuditor::InvarianceAuditor(const ManifoldSpec& spec, IntegralSet integrals)
    : spec_(spec), set_(std::move(integrals))
{
    report_.max_abs_drift.assign(set_.size(), 0.0);
    report_.max_rel_drift.assign(set_.size(), 0.0);
    if (set_.kind == IntegralKind::CubicGraph) report_.matched_sign = "+-";
}

void InvarianceAuditor::add(const PhaseVector& z, const PhaseVector& z_next)
{
    const Eigen::VectorXd a = set_.values(z);
    const Eigen::VectorXd b = set_.values(z_next);
    double step_worst = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        const double abs = std::abs(b[i] - a[i]);
        const double rel = abs / std::max({std::abs(a[i]), std::abs(b[i]), 1.0});
        report_.max_abs_drift[static_cast<std::size_t>(i)] = std::max(report_.max_abs_drift[static_cast<std::size_t>(i)], abs);
        report_.max_rel_drift[static_cast<std::size_t>(i)] = std::max(report_.max_rel_drift[static_cast<std::size_t>(i)], rel);
        step_worst = std::max(step_worst, rel);
    }
    if (step_worst > worst_) {
        worst_ = step_worst;
        report_.worst_step = report_.steps;
    }

    if (set_.kind == IntegralKind::CubicGraph) {
        const GeneratingGraph& g = *spec_.graph();
        PhaseVector rz = z, rn = z_next;
        if (spec_.transform()) {
            const auto inv = spec_.transform()->inverse();
            rz = inv.apply(z);
            rn = inv.apply(z_next);
        }
        const int n = g.n();
        Eigen::VectorXd q(n), w(n);
        for (int k = 0; k < n; ++k) {
            q[k] = 0.5 * (rz[2 * k] + rn[2 * k]);
            w[k] = rz[2 * k] - q[k];
        }
        const Eigen::VectorXd t = 0.5 * g.jet().third_ww(q, w);
        const double s = std::max(1.0, a.cwiseAbs().maxCoeff());
        const double ep = std::max((a - t).cwiseAbs().maxCoeff(), (b - t).cwiseAbs().maxCoeff()) / s;
        const double em = std::max((a + t).cwiseAbs().maxCoeff(), (b + t).cwiseAbs().maxCoeff()) / s;
        report_.tensor_error_plus = std::max(report_.tensor_error_plus, ep);
        report_.tensor_error_minus = std::max(report_.tensor_error_minus, em);
        const double tol = 1e-8;
        const bool plus = report_.tensor_error_plus <= tol, minus = report_.tensor_error_minus <= tol;
        report_.matched_sign = plus && minus ? "+-" : plus ? "+" : minus ? "-" : "none";
    }
    ++report_.steps;
}

AuditReport audit_invariance(const ManifoldSpec& spec, const IntegralSet& integrals,
                             const std::vector<PhaseVector>& orbit)
{
    InvarianceAuditor auditor(spec, integrals);
    for (std::size_t k = 0; k + 1 < orbit.size(); ++k) auditor.add(orbit[k], orbit[k + 1]);
    return auditor.report();
}

}  // namespace osbk
