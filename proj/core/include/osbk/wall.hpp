#pragma once

#include "osbk/conic.hpp"
#include "osbk/correspondence.hpp"
#include "osbk/error.hpp"
#include "osbk/manifolds.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace osbk {

// ------------------------------------------------------------ curve wall

struct WallSample {
    double t = 0.0;
    /// Coordinates in an orthonormal basis of span(gamma', gamma'')^omega.
    std::vector<double> plane;
    PhaseVector point;
    double singular_residual = 0.0;
    /// gamma'(t) and gamma''(t) are linearly dependent.
    bool rank_deficient = false;
};

/// Points P with omega(P, gamma') = omega(gamma, gamma') and
/// omega(P, gamma'') = omega(gamma, gamma''): for each t, P = gamma(t) plus
/// every tuple of plane_grid values on the (2d-2)-dimensional solution
/// plane. The tuple of zeros (P = gamma(t)) is always included.
std::vector<WallSample> curve_wall_samples(const TrigImmersion& curve, const std::vector<double>& t_grid,
                                           const std::vector<double>& plane_grid);

/// Residuals of the two wall equations at (P, t).
Eigen::Vector2d curve_wall_equations(const TrigImmersion& curve, const PhaseVector& P, double t);

/// omega(P, gamma''') - omega(gamma', gamma'') - omega(gamma, gamma''').
double curve_wall_singular(const TrigImmersion& curve, const PhaseVector& P, double t);

/// Thrown when a multiplicity is requested too close to the wall.
class UnstableCountError : public Error {
public:
    UnstableCountError(const std::string& what, std::vector<std::size_t> counts)
        : Error(ErrorCode::UnstableCount, what), counts_(std::move(counts)) {}
    const std::vector<std::size_t>& counts() const { return counts_; }

private:
    std::vector<std::size_t> counts_;
};

struct MultiplicityOptions {
    CurveRootOptions roots;
    /// P counts as near the wall when some critical value of
    /// g(t) = omega(gamma(t) - P, gamma'(t)) is below wall_tol * max|g|.
    double wall_tol = 1e-6;
};

/// Number of t with omega(gamma(t) - P, gamma'(t)) = 0.
std::size_t multiplicity_curve(const TrigImmersion& curve, const PhaseVector& P, const MultiplicityOptions& opts = {});

struct EtaFit {
    double c2 = 0.0;
    double c3 = 0.0;
    double target = -0.5;
    /// |c2 - target| / |target|.
    double relative_error = 0.0;
    std::vector<double> t;
    std::vector<double> eta;
};

/// Fits eta(t) = omega(gamma(t0+t) - gamma(t0), gamma'(t0+t)) /
/// omega(gamma''(t0), gamma'(t0+t)) by c2 t^2 + c3 t^3 + c4 t^4 on a log grid.
EtaFit eta_expansion_check(const TrigImmersion& curve, double t0 = 0.0, double t_min = 1e-4, double t_max = 1e-1,
                           int points = 25);

// ------------------------------------------------------------ Lagrangian wall

/// det (n = 2) or smallest singular value (n > 2) of zeta -> grad^3 F(q)[zeta, w].
double lagrangian_delta_det(const GeneratingGraph& graph, const Eigen::VectorXd& q, const Eigen::VectorXd& w);

struct ZeroDivisorReport {
    /// min over unit w of the smallest singular value of grad^3 F(q)[., w].
    double min_singular = 0.0;
    /// min over unit w of |det| (n = 2 only, else NaN).
    double min_abs_det = 0.0;
    Eigen::VectorXd witness;
};

ZeroDivisorReport zero_divisor_test(const GeneratingGraph& graph, const Eigen::VectorXd& q, int sphere_samples = 10000,
                                    std::uint64_t seed = 1);

struct RuledReport {
    std::optional<Eigen::Vector2d> direction;
    /// Resultant of 3a z^2 + 2b z + c and b z^2 + 2c z + 3d.
    double resultant = 0.0;
    /// resultant == -3 D within rounding.
    bool resultant_consistent = false;
};

/// A unit w != 0 with grad F(w) = 0, if one exists.
RuledReport ruled_test(const CubicForm2& f);

struct Classification {
    double discriminant = 0.0;
    std::string cls;
    std::map<std::size_t, std::size_t> histogram;
    std::size_t redraws = 0;
    std::optional<Eigen::Vector2d> ruling;
};

/// Discriminant sign and an empirical multiplicity histogram over `trials`
/// random points off the table. Throws Consistency if the histogram
/// contradicts the sign of D.
Classification classify_cubic_table(const CubicForm2& f, std::size_t trials = 1000, std::uint64_t seed = 1,
                                    unsigned threads = 1);

}  // namespace osbk
