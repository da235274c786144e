#pragma once

#include "osbk/manifolds.hpp"
#include "osbk/tolerances.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace osbk {

/// One partner z' of a source point z: the midpoint (z + z')/2 lies on the
/// table at `midpoint_param` and z' - z is omega-orthogonal to the tangent
/// space there.
struct StepCandidate {
    PhaseVector partner;
    ParamPoint midpoint_param;
    PhaseVector midpoint;
    /// max over tangent vectors of |omega(z' - z, zeta)| / (|z' - z| |zeta|).
    double residual = 0.0;
    /// z' == z, i.e. z itself lies on the table.
    bool degenerate = false;
    /// The defining equation has a singular Jacobian at this solution
    /// (a tangential root, or a point of the wall).
    bool on_wall = false;
};

/// 2Q - z.
PhaseVector reflect(const PhaseVector& z, const PhaseVector& Q);

/// Relative omega-orthogonality residual of `delta` against `tangents`;
/// zero when delta vanishes.
double orthogonality_residual(const PhaseVector& delta, const std::vector<PhaseVector>& tangents);

struct CurveRootOptions {
    int grid = 512;
    /// Maximum number of grid doublings while waiting for a stable count.
    int max_doublings = 8;
    Tolerances tol = default_tolerances;
};

/// Roots of g(t) = omega(gamma(t) - z, gamma'(t)) on the circle.
struct CurveRootScan {
    std::vector<double> roots;
    std::vector<bool> tangential;
    /// Root counts at each grid level visited.
    std::vector<std::size_t> level_counts;
    bool stable = false;
    /// Smallest |g| at a critical point of g; small values mean z is close
    /// to the wall.
    double min_critical_value = std::numeric_limits<double>::infinity();
    /// max |g| over the finest grid, the scale for the thresholds above.
    double value_scale = 0.0;
};

CurveRootScan scan_curve_roots(const TrigImmersion& curve, const PhaseVector& z,
                               const CurveRootOptions& opts = {});

/// All partners of z for a closed curve, sorted by parameter.
std::vector<StepCandidate> step_curve(const TrigImmersion& curve, const PhaseVector& z,
                                      const CurveRootOptions& opts = {});

enum class Branch { Plus, Minus };

/// The partner of an exterior point for the ellipsoid; Plus takes the
/// root t > 0 of the radial equation, Minus the root t < 0 (the inverse
/// map). Throws Domain when z is not strictly outside.
StepCandidate step_ellipsoid(const SymplecticEllipsoid& ell, const PhaseVector& z, Branch branch,
                             const Tolerances& tol = default_tolerances);

/// Partners for the graph of a homogeneous cubic in two variables, solved
/// exactly through the conic pair grad F(w) = grad F(Q) - W.
std::vector<StepCandidate> step_cubic_graph(const GeneratingGraph& graph, const PhaseVector& z,
                                            const Tolerances& tol = default_tolerances);

struct NumericStepOptions {
    /// Search region; empty means the table's sampling box.
    std::optional<ParamBox> box;
    std::size_t starts = 64;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    int max_iterations = 80;
    Tolerances tol = default_tolerances;
};

/// Multi-start Newton on W = grad F(q) + Hess F(q)(Q - q) over the box.
std::vector<StepCandidate> step_graph_numeric(const GeneratingGraph& graph, const PhaseVector& z,
                                              const NumericStepOptions& opts = {});

/// Multi-start Newton on omega(embed(u) - z, d_k embed(u)) = 0 for any table;
/// used for tori of dimension >= 2.
std::vector<StepCandidate> step_numeric(const ManifoldSpec& spec, const PhaseVector& z,
                                        const NumericStepOptions& opts = {});

struct StepOptions {
    CurveRootOptions curve;
    NumericStepOptions numeric;
    /// Ellipsoid branches to return, in order.
    std::vector<Branch> branches{Branch::Plus, Branch::Minus};
};

/// Dispatches on the table kind. An ambient transform is handled by solving
/// in table coordinates and mapping the results back.
std::vector<StepCandidate> step(const ManifoldSpec& spec, const PhaseVector& z, const StepOptions& opts = {});

struct PairReport {
    double midpoint_error = 0.0;
    /// max over unit tangents of |omega(z' - z, zeta)|.
    double orthogonality = 0.0;
    /// orthogonality / |z' - z| (zero when z' == z).
    double relative = 0.0;
};

PairReport verify_pair(const ManifoldSpec& spec, const PhaseVector& z, const PhaseVector& z_partner,
                       const ParamPoint& u);

}  // namespace osbk
