#pragma once

#include "osbk/error.hpp"
#include "osbk/manifolds.hpp"
#include "osbk/tolerances.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace osbk {

enum class OrbitKind { Periodic, Boundary };

/// Midpoints Q_i = embed(u_i) of consecutive orbit vertices.
struct MidpointPolygon {
    std::vector<ParamPoint> params;
    std::vector<PhaseVector> points;

    std::size_t size() const { return points.size(); }
};

MidpointPolygon make_polygon(const ManifoldSpec& spec, std::vector<ParamPoint> params);

/// Vertices z_1..z_k of an orbit (k = n periodic, n + 1 boundary) with
/// diagnostics.
struct OrbitPolyline {
    OrbitKind kind = OrbitKind::Periodic;
    std::vector<PhaseVector> vertices;
    std::vector<ParamPoint> midpoint_params;
    double area = 0.0;
    /// Generating-function value at the midpoint polygon.
    double objective = 0.0;
    double gradient_norm = 0.0;
    /// Largest relative omega-orthogonality residual over the links.
    double max_residual = 0.0;
    /// Smallest distance between consecutive midpoints.
    double min_midpoint_gap = 0.0;
    bool degenerate = false;
};

/// Raised by reconstruct_periodic for even n when the alternating sum of
/// the midpoints does not vanish.
class ClosureError : public Error {
public:
    ClosureError(const std::string& what, PhaseVector defect)
        : Error(ErrorCode::Closure, what), defect_(std::move(defect)) {}
    const PhaseVector& defect() const { return defect_; }

private:
    PhaseVector defect_;
};

/// 2 sum_{i<j} (-1)^{i+j-1} omega(Q_i, Q_j); n must be odd.
double gen_fun_periodic(const std::vector<PhaseVector>& Q);
/// 2 sum_i q_i.q'_i + 4 sum_{i<j} (-1)^{j-i} q_j.q'_i, with q the x-part and
/// q' the y-part of each Q_i.
double gen_fun_boundary(const std::vector<PhaseVector>& Q);

/// Gradients of the generating functions in each ambient point Q_k.
std::vector<PhaseVector> gen_fun_periodic_point_gradient(const std::vector<PhaseVector>& Q);
std::vector<PhaseVector> gen_fun_boundary_point_gradient(const std::vector<PhaseVector>& Q);

double gen_fun(const std::vector<PhaseVector>& Q, OrbitKind kind);

/// Gradient in the table parameters u_i (chain rule through the Jacobian).
std::vector<Eigen::VectorXd> grad_gen_fun(const ManifoldSpec& spec, const MidpointPolygon& Q, OrbitKind kind);

/// sum_i (-1)^i Q_i (1-based i).
PhaseVector closure_defect(const std::vector<PhaseVector>& Q);

/// Odd n: the unique closed polygon with the given midpoints. Even n: the
/// polygon starting at `z1`; throws ClosureError when the closure defect
/// exceeds tol (scaled), or when no z1 is supplied.
std::vector<PhaseVector> reconstruct_periodic(const std::vector<PhaseVector>& Q,
                                              const std::optional<PhaseVector>& z1 = std::nullopt,
                                              double tol = 1e-10);

/// The chain z_1..z_{n+1} with z_1 in the x-subspace, z_{n+1} in the
/// y-subspace and midpoints Q.
std::vector<PhaseVector> reconstruct_boundary(const std::vector<PhaseVector>& Q);

/// 1/2 sum omega(z_i, z_{i+1}), cyclic for periodic orbits.
double symplectic_area(const std::vector<PhaseVector>& Z, OrbitKind kind);

/// Reconstructs the orbit of a midpoint polygon and fills in diagnostics.
/// For boundary orbits the table must already be normalized.
OrbitPolyline build_orbit(const ManifoldSpec& spec, const std::vector<ParamPoint>& params, OrbitKind kind,
                          const Tolerances& tol = default_tolerances,
                          const std::optional<PhaseVector>& z1 = std::nullopt);

enum class SearchMode { Max, Min };
enum class SearchStatus { Ok, FlatObjective, SearchFailed };

std::string to_string(SearchStatus s);
std::string to_string(SearchMode m);

struct SearchOptions {
    std::size_t starts = 64;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    SearchMode mode = SearchMode::Max;
    int ascent_iterations = 3000;
    int newton_iterations = 40;
    Tolerances tol = default_tolerances;
};

struct SearchResult {
    SearchStatus status = SearchStatus::SearchFailed;
    /// Extremal non-degenerate orbit when one exists, else the extremal one.
    std::optional<OrbitPolyline> best;
    /// Distinct accepted critical points, best objective first.
    std::vector<OrbitPolyline> orbits;
    std::size_t converged = 0;
    std::size_t starts = 0;
};

/// Multi-start gradient ascent (or descent) of the periodic generating
/// function on M^n followed by Newton polishing; n odd >= 3.
SearchResult find_periodic_orbit(const ManifoldSpec& spec, int n, const SearchOptions& opts = {});

struct BoundaryResult {
    SearchStatus status = SearchStatus::SearchFailed;
    std::optional<OrbitPolyline> best_max;
    std::optional<OrbitPolyline> best_min;
    /// All accepted critical points from both searches, in ambient coordinates.
    std::vector<OrbitPolyline> orbits;
    AffineSymplecticMap normalization;
};

/// Orbits from L1 to L2 with n links: the pair is normalized to the
/// coordinate subspaces, the boundary generating function is maximized and
/// minimized, and the chains are mapped back.
BoundaryResult find_boundary_orbit(const ManifoldSpec& spec, const AffineLagrangian& l1, const AffineLagrangian& l2,
                                   int n, const SearchOptions& opts = {});

struct EvenSearchOptions {
    std::size_t starts = 64;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    int max_iterations = 300;
    Tolerances tol = default_tolerances;
};

struct EvenSearchResult {
    /// Distinct converged solutions.
    std::vector<OrbitPolyline> orbits;
    std::size_t starts = 0;
    std::size_t converged = 0;
    std::size_t nondegenerate = 0;
    std::size_t degenerate = 0;
};

/// Stacked residuals used by the even search: the closure defect followed
/// by omega(Q_i - z_i, zeta) for each tangent zeta at each midpoint.
Eigen::VectorXd even_residuals(const ManifoldSpec& spec, const std::vector<ParamPoint>& params, const PhaseVector& z1);

/// Least-squares search for even-n periodic orbits (no generating function
/// exists for even n).
EvenSearchResult search_even_periodic(const ManifoldSpec& spec, int n, const EvenSearchOptions& opts = {});

}  // namespace osbk
