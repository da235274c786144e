#pragma once

#include <Eigen/Dense>

#include <map>
#include <vector>

namespace osbk {

/// Exponent tuple of a monomial; its length is the number of variables.
using Exponents = std::vector<int>;

/// Real multivariate polynomial stored as a sparse coefficient map.
class Polynomial {
public:
    explicit Polynomial(int nvars = 0);

    /// Adds `coef` to the coefficient of the monomial with `exps`.
    void add_term(const Exponents& exps, double coef);

    /// F = a q1^3 + b q1^2 q2 + c q1 q2^2 + d q2^3.
    static Polynomial cubic2(double a, double b, double c, double d);

    int nvars() const { return nvars_; }
    /// Total degree; -1 for the zero polynomial.
    int degree() const;
    bool is_zero() const { return terms_.empty(); }
    /// True when every monomial has total degree k (the zero polynomial is
    /// homogeneous of every degree).
    bool is_homogeneous(int k) const;
    const std::map<Exponents, double>& terms() const { return terms_; }
    double coefficient(const Exponents& exps) const;

    double operator()(const Eigen::VectorXd& q) const;
    Polynomial derivative(int var) const;

private:
    int nvars_;
    std::map<Exponents, double> terms_;
};

/// F together with its symbolic partial derivatives up to order three.
class PolynomialJet {
public:
    PolynomialJet() = default;
    explicit PolynomialJet(Polynomial f);

    int nvars() const { return f_.nvars(); }
    const Polynomial& function() const { return f_; }

    double value(const Eigen::VectorXd& q) const { return f_(q); }
    Eigen::VectorXd gradient(const Eigen::VectorXd& q) const;
    Eigen::MatrixXd hessian(const Eigen::VectorXd& q) const;
    /// The matrix zeta -> grad^3 F(q)[zeta, w, .], i.e. entries sum_k F_ijk w_k.
    Eigen::MatrixXd third_contract(const Eigen::VectorXd& q, const Eigen::VectorXd& w) const;
    /// The vector grad^3 F(q)[w, w, .].
    Eigen::VectorXd third_ww(const Eigen::VectorXd& q, const Eigen::VectorXd& w) const;

private:
    Polynomial f_;
    std::vector<Polynomial> grad_;
    std::vector<std::vector<Polynomial>> hess_;
    std::vector<std::vector<std::vector<Polynomial>>> third_;
};

}  // namespace osbk
