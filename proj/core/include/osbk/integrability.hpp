#pragma once

#include "osbk/manifolds.hpp"
#include "osbk/symplectic.hpp"

#include <functional>
#include <string>
#include <vector>

namespace osbk {

/// A scalar function on phase space with its exact gradient.
struct Integral {
    std::string name;
    std::function<double(const PhaseVector&)> value;
    std::function<PhaseVector(const PhaseVector&)> gradient;
};

enum class IntegralKind { Ellipsoid, CubicGraph };

std::string to_string(IntegralKind k);

struct IntegralSet {
    IntegralKind kind = IntegralKind::Ellipsoid;
    std::vector<Integral> integrals;

    std::size_t size() const { return integrals.size(); }
    Eigen::VectorXd values(const PhaseVector& z) const;
};

/// x_j^2 + y_j^2 for ellipsoids; P_i - dF/dQ_i(Q) for graphs of homogeneous
/// cubics. An ambient transform T is accounted for by composing with T^-1.
/// Throws Unsupported for any other table.
IntegralSet integrals_for(const ManifoldSpec& spec);

/// sum_i (df/dx_i dg/dy_i - df/dy_i dg/dx_i).
double poisson_bracket(const Integral& f, const Integral& g, const PhaseVector& z);

/// Largest |{I_j, I_k}(z)| over all pairs.
double max_bracket(const IntegralSet& set, const PhaseVector& z);

struct AuditReport {
    std::vector<double> max_abs_drift;
    /// Drift relative to max(|I|, 1).
    std::vector<double> max_rel_drift;
    std::size_t worst_step = 0;
    std::size_t steps = 0;
    /// Cubic graphs only: largest mismatch between I(z) and +/- 1/2 grad^3 F[w, w].
    double tensor_error_plus = 0.0;
    double tensor_error_minus = 0.0;
    /// "+", "-", "+-" (tensor term vanishes), "none", or "n/a" for non-graphs.
    std::string matched_sign = "n/a";
};

/// Streams the steps of an orbit and accumulates per-integral drift with
/// O(1) memory.
class InvarianceAuditor {
public:
    InvarianceAuditor(const ManifoldSpec& spec, IntegralSet integrals);

    /// Records the step z -> z_next.
    void add(const PhaseVector& z, const PhaseVector& z_next);
    const AuditReport& report() const { return report_; }
    const IntegralSet& integrals() const { return set_; }

private:
    const ManifoldSpec& spec_;
    IntegralSet set_;
    AuditReport report_;
    double worst_ = -1.0;
};

/// One-shot audit of a vertex sequence.
AuditReport audit_invariance(const ManifoldSpec& spec, const IntegralSet& integrals,
                             const std::vector<PhaseVector>& orbit);

}  // namespace osbk
