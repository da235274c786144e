#pragma once

#include "osbk/polynomial.hpp"
#include "osbk/symplectic.hpp"
#include "osbk/tolerances.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace osbk {

/// One summand cos_amp * cos(k.u) + sin_amp * sin(k.u) of a coordinate.
struct TrigTerm {
    std::vector<int> freq;
    double cos_amp = 0.0;
    double sin_amp = 0.0;
};

/// A map T^m -> R^{2d} whose coordinates are finite trigonometric sums.
/// Derivatives of any order are evaluated exactly from the frequencies.
class TrigImmersion {
public:
    TrigImmersion(int m, std::vector<std::vector<TrigTerm>> coords);

    int param_dim() const { return m_; }
    Eigen::Index ambient_dim() const { return static_cast<Eigen::Index>(coords_.size()); }
    const std::vector<std::vector<TrigTerm>>& coords() const { return coords_; }

    PhaseVector eval(const ParamPoint& u) const;
    /// Mixed partial derivative; orders[j] is the derivative count in u_j.
    PhaseVector partial(const ParamPoint& u, const std::vector<int>& orders) const;
    /// Columns are the first partials.
    Matrix jacobian(const ParamPoint& u) const;
    /// r-th derivative of a curve (m == 1).
    PhaseVector curve_derivative(double t, int r) const;

    static TrigImmersion circle(double radius = 1.0);
    /// The unit circle traversed clockwise, t -> (cos t, -sin t).
    static TrigImmersion reversed_circle();
    /// (cos t, sin t, cos 2t, sin 2t) in R^4.
    static TrigImmersion chebyshev();
    /// The two-angle torus in R^4 on which q.q' vanishes identically.
    static TrigImmersion symplectic_torus();
    /// An isotropic (Legendrian) curve in the unit sphere of R^4.
    static TrigImmersion legendrian_curve();
    /// A torus of revolution inside the x-subspace of R^6.
    static TrigImmersion x_subspace_torus();

private:
    int m_;
    std::vector<std::vector<TrigTerm>> coords_;
};

/// sum_j (x_j^2 + y_j^2) / a_j = 1, parametrized by angles
/// (theta_1..theta_d, phi_1..phi_{d-1}) with pair radii sqrt(a_j) s_j,
/// where s is the standard hyperspherical point
/// s_j = sin(phi_1)...sin(phi_{j-1}) cos(phi_j) (no cosine for j = d).
struct SymplecticEllipsoid {
    std::vector<double> axes;

    void validate() const;
    Eigen::Index pairs() const { return static_cast<Eigen::Index>(axes.size()); }
    int param_dim() const { return 2 * static_cast<int>(axes.size()) - 1; }

    PhaseVector eval(const ParamPoint& u) const;
    Matrix jacobian(const ParamPoint& u) const;
    /// Angles of a point on the ellipsoid (inverse of eval).
    ParamPoint param_of(const PhaseVector& z) const;
    /// sum_j (x_j^2 + y_j^2) / a_j.
    double level(const PhaseVector& z) const;
};

/// The Lagrangian graph {(q, grad F(q))} in interleaved layout (x = q, y = p).
class GeneratingGraph {
public:
    explicit GeneratingGraph(Polynomial f);

    int n() const { return jet_.nvars(); }
    const PolynomialJet& jet() const { return jet_; }
    const Polynomial& function() const { return jet_.function(); }
    /// Degree <= 2: the graph is itself an affine Lagrangian subspace.
    bool is_affine_subspace() const { return function().degree() <= 2; }
    bool is_homogeneous_cubic() const { return function().degree() == 3 && function().is_homogeneous(3); }

    PhaseVector eval(const ParamPoint& q) const;
    Matrix jacobian(const ParamPoint& q) const;

private:
    PolynomialJet jet_;
};

struct ParamBox {
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;
};

enum class TableKind { Trig, Ellipsoid, Graph };

/// A table together with an optional ambient affine symplectic transform
/// applied after the embedding.
class ManifoldSpec {
public:
    using Table = std::variant<TrigImmersion, SymplecticEllipsoid, GeneratingGraph>;

    ManifoldSpec(Table table, std::optional<AffineSymplecticMap> transform = std::nullopt,
                 std::optional<ParamBox> box = std::nullopt);

    TableKind kind() const;
    const Table& table() const { return table_; }
    const TrigImmersion* trig() const { return std::get_if<TrigImmersion>(&table_); }
    const SymplecticEllipsoid* ellipsoid() const { return std::get_if<SymplecticEllipsoid>(&table_); }
    const GeneratingGraph* graph() const { return std::get_if<GeneratingGraph>(&table_); }
    const std::optional<AffineSymplecticMap>& transform() const { return transform_; }

    /// Same table with `outer` applied after the current transform.
    ManifoldSpec transformed(const AffineSymplecticMap& outer) const;
    /// Same table without its ambient transform.
    ManifoldSpec untransformed() const;

    int param_dim() const;
    Eigen::Index ambient_dim() const;
    /// Whether parameter coordinate i is an angle (reduced mod 2 pi).
    bool periodic(int i) const;
    bool compact() const { return kind() != TableKind::Graph; }

    /// Region used for sampling starts: [0, 2pi) for angles (polar angles of
    /// the ellipsoid use (0, pi/2)), the user box for graphs.
    ParamBox sampling_box() const;

    ParamPoint reduce(const ParamPoint& u) const;
    /// Euclidean distance with angles compared modulo 2 pi.
    double param_distance(const ParamPoint& u, const ParamPoint& v) const;

    PhaseVector embed(const ParamPoint& u) const;
    /// Jacobian of embed (ambient transform included), without rank checks.
    Matrix jacobian(const ParamPoint& u) const;
    /// Columns of the Jacobian; throws ImmersionFailure when its smallest
    /// singular value falls below 1e-8 times its largest.
    std::vector<PhaseVector> tangent_basis(const ParamPoint& u) const;

    /// A rough magnitude of the embedded points, used to scale tolerances.
    double scale() const;

private:
    void check_param(const ParamPoint& u) const;

    Table table_;
    std::optional<AffineSymplecticMap> transform_;
    ParamBox box_;
};

/// Deterministic stratified sample (Latin hypercube) of `count` points in
/// the box.
std::vector<ParamPoint> latin_hypercube(const ParamBox& box, std::size_t count, std::uint64_t seed);

struct ConvexityProfile {
    double min = 0.0;
    double max = 0.0;
    double argmin = 0.0;
    double argmax = 0.0;
    bool convex = false;
};

/// Extremes of omega(gamma', gamma'') over a uniform grid, refined by
/// golden-section search around the best grid points.
ConvexityProfile symplectic_convexity_profile(const TrigImmersion& curve, int samples = 4096);

struct ConditionLResult {
    bool holds = false;
    /// Parameters of x_0, x_i, x_j with |omega(x_i - x_0, x_j - x_0)| > tol.
    std::optional<std::array<ParamPoint, 3>> witness;
    double max_value = 0.0;
};

/// One-sided sampled test that the table is not contained in an affine
/// Lagrangian subspace. `samples` is per parameter dimension.
ConditionLResult check_condition_L(const ManifoldSpec& spec, int samples = 512, std::uint64_t seed = 1,
                                   const Tolerances& tol = default_tolerances);

struct ProbeVerdict {
    PhaseVector probe;
    bool holds = false;
    std::optional<ParamPoint> witness;
    double max_value = 0.0;
};

struct ConditionLLResult {
    std::vector<ProbeVerdict> probes;
    bool holds = false;
};

/// For each probe P searches for x on the table and a tangent zeta with
/// |omega(x - P, zeta)| > tol. The verdict is the conjunction over probes.
ConditionLLResult check_condition_LL(const ManifoldSpec& spec, const std::vector<PhaseVector>& probes,
                                     int samples = 512, std::uint64_t seed = 1,
                                     const Tolerances& tol = default_tolerances);

}  // namespace osbk
