#pragma once

#include "osbk/polynomial.hpp"

#include <Eigen/Dense>

#include <vector>

namespace osbk {

/// F(q1, q2) = a q1^3 + b q1^2 q2 + c q1 q2^2 + d q2^3.
struct CubicForm2 {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;

    bool is_zero() const { return a == 0.0 && b == 0.0 && c == 0.0 && d == 0.0; }
    Polynomial polynomial() const { return Polynomial::cubic2(a, b, c, d); }
    /// grad F(w) = (A1 w.w, A2 w.w).
    Eigen::Vector2d gradient(const Eigen::Vector2d& w) const;
    Eigen::Matrix2d hessian(const Eigen::Vector2d& w) const;

    /// Extracts the coefficients of a homogeneous cubic in two variables;
    /// throws InvalidInput otherwise.
    static CubicForm2 from_polynomial(const Polynomial& f);
};

/// Two central conics A1 w.w = r1, A2 w.w = r2.
struct ConicPair {
    Eigen::Matrix2d a1;
    Eigen::Matrix2d a2;

    static ConicPair from_cubic(const CubicForm2& f);
};

struct ConicSolution {
    std::vector<Eigen::Vector2d> points;
    std::size_t count() const { return points.size(); }
};

/// All real solutions of the conic pair. The elimination form
/// r2 A1 - r1 A2 yields at most two lines through the origin; each line
/// meets the conics in 0 or a +-pair of points. For r = 0 the result is
/// {0}. Throws DegeneratePencil when the elimination form vanishes.
ConicSolution conic_intersections(const ConicPair& pair, double r1, double r2);

/// D = 18abcd + b^2c^2 - 4b^3d - 4ac^3 - 27a^2d^2.
double cubic_discriminant(const CubicForm2& f);

}  // namespace osbk
