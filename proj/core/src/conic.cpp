#include "osbk/conic.hpp"

#include "osbk/error.hpp"

#include <cmath>

namespace osbk {

Eigen::Vector2d CubicForm2::gradient(const Eigen::Vector2d& w) const
{
    const double x = w[0], y = w[1];
    return {3 * a * x * x + 2 * b * x * y + c * y * y, b * x * x + 2 * c * x * y + 3 * d * y * y};
}

Eigen::Matrix2d CubicForm2::hessian(const Eigen::Vector2d& w) const
{
    const double x = w[0], y = w[1];
    Eigen::Matrix2d h;
    h << 6 * a * x + 2 * b * y, 2 * b * x + 2 * c * y, 2 * b * x + 2 * c * y, 2 * c * x + 6 * d * y;
    return h;
}

CubicForm2 CubicForm2::from_polynomial(const Polynomial& f)
{
    if (f.nvars() != 2 || !f.is_homogeneous(3))
        raise(ErrorCode::InvalidInput, "expected a homogeneous cubic in two variables");
    return {f.coefficient({3, 0}), f.coefficient({2, 1}), f.coefficient({1, 2}), f.coefficient({0, 3})};
}

ConicPair ConicPair::from_cubic(const CubicForm2& f)
{
    ConicPair p;
    p.a1 << 3 * f.a, f.b, f.b, f.c;
    p.a2 << f.b, f.c, f.c, 3 * f.d;
    return p;
}

namespace {

double quad(const Eigen::Matrix2d& m, const Eigen::Vector2d& w) { return w.dot(m * w); }

Eigen::Vector2d polish(const ConicPair& p, double r1, double r2, Eigen::Vector2d w)
{
    for (int it = 0; it < 8; ++it) {
        Eigen::Vector2d f(quad(p.a1, w) - r1, quad(p.a2, w) - r2);
        Eigen::Matrix2d jac;
        jac.row(0) = 2.0 * (p.a1 * w).transpose();
        jac.row(1) = 2.0 * (p.a2 * w).transpose();
        const double det = jac.determinant();
        if (!(std::abs(det) > 1e-14 * std::max(1.0, jac.cwiseAbs().maxCoeff() * jac.cwiseAbs().maxCoeff()))) break;
        Eigen::Vector2d step = jac.inverse() * f;
        Eigen::Vector2d next = w - step;
        Eigen::Vector2d fn(quad(p.a1, next) - r1, quad(p.a2, next) - r2);
        if (!(fn.cwiseAbs().maxCoeff() < f.cwiseAbs().maxCoeff())) break;
        w = next;
        if (step.norm() <= 1e-16 * std::max(1.0, w.norm())) break;
    }
    return w;
}

}  // namespace

ConicSolution conic_intersections(const ConicPair& pair, double r1, double r2)
{
    ConicSolution out;
    if (r1 == 0.0 && r2 == 0.0) {
        out.points.push_back(Eigen::Vector2d::Zero());
        return out;
    }
    const Eigen::Matrix2d elim = r2 * pair.a1 - r1 * pair.a2;
    const double scale = std::max({std::abs(r1) * pair.a2.cwiseAbs().maxCoeff(),
                                   std::abs(r2) * pair.a1.cwiseAbs().maxCoeff(), 1e-300});
    if (elim.cwiseAbs().maxCoeff() <= 1e-13 * scale)
        raise(ErrorCode::DegeneratePencil, "degenerate pencil data: r2 A1 - r1 A2 vanishes identically");

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(elim);
    const Eigen::Vector2d lam = eig.eigenvalues();
    const Eigen::Matrix2d vec = eig.eigenvectors();
    const double big = lam.cwiseAbs().maxCoeff();

    std::vector<Eigen::Vector2d> lines;
    if (std::abs(lam[0]) <= 1e-12 * big) {
        lines.push_back(vec.col(0));
    } else if (std::abs(lam[1]) <= 1e-12 * big) {
        lines.push_back(vec.col(1));
    } else if (lam[0] * lam[1] < 0.0) {
        const double s0 = std::sqrt(std::abs(lam[1]));
        const double s1 = std::sqrt(std::abs(lam[0]));
        lines.push_back((s0 * vec.col(0) + s1 * vec.col(1)).normalized());
        lines.push_back((s0 * vec.col(0) - s1 * vec.col(1)).normalized());
    }

    const bool use_first = std::abs(r1) >= std::abs(r2);
    const Eigen::Matrix2d& form = use_first ? pair.a1 : pair.a2;
    const double rhs = use_first ? r1 : r2;
    for (const auto& v : lines) {
        const double alpha = quad(form, v);
        if (alpha == 0.0) continue;
        const double t2 = rhs / alpha;
        if (!(t2 > 0.0)) continue;
        const double t = std::sqrt(t2);
        for (double sgn : {1.0, -1.0}) {
            Eigen::Vector2d w = polish(pair, r1, r2, sgn * t * v);
            bool dup = false;
            for (const auto& p : out.points)
                if ((p - w).norm() <= 1e-12 * std::max(1.0, w.norm())) dup = true;
            if (!dup) out.points.push_back(w);
        }
    }
    return out;
}

double cubic_discriminant(const CubicForm2& f)
{
    const double a = f.a, b = f.b, c = f.c, d = f.d;
    return 18 * a * b * c * d + b * b * c * c - 4 * b * b * b * d - 4 * a * c * c * c - 27 * a * a * d * d;
}

}  // namespace osbk
