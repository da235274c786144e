#include "osbk/polynomial.hpp"

#include "osbk/error.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace osbk {

Polynomial::Polynomial(int nvars) : nvars_(nvars)
{
    if (nvars < 0) raise(ErrorCode::InvalidInput, "polynomial: negative variable count");
}

void Polynomial::add_term(const Exponents& exps, double coef)
{
    if (static_cast<int>(exps.size()) != nvars_)
        raise(ErrorCode::DimensionMismatch, "polynomial term has " + std::to_string(exps.size()) +
                                                " exponents, expected " + std::to_string(nvars_));
    for (int e : exps)
        if (e < 0) raise(ErrorCode::InvalidInput, "polynomial: negative exponent");
    if (!std::isfinite(coef)) raise(ErrorCode::InvalidInput, "polynomial: non-finite coefficient");
    if (coef == 0.0) return;
    double& slot = terms_[exps];
    slot += coef;
    if (slot == 0.0) terms_.erase(exps);
}

Polynomial Polynomial::cubic2(double a, double b, double c, double d)
{
    Polynomial p(2);
    p.add_term({3, 0}, a);
    p.add_term({2, 1}, b);
    p.add_term({1, 2}, c);
    p.add_term({0, 3}, d);
    return p;
}

int Polynomial::degree() const
{
    int deg = -1;
    for (const auto& [e, c] : terms_) deg = std::max(deg, std::accumulate(e.begin(), e.end(), 0));
    return deg;
}

bool Polynomial::is_homogeneous(int k) const
{
    for (const auto& [e, c] : terms_)
        if (std::accumulate(e.begin(), e.end(), 0) != k) return false;
    return true;
}

double Polynomial::coefficient(const Exponents& exps) const
{
    auto it = terms_.find(exps);
    return it == terms_.end() ? 0.0 : it->second;
}

double Polynomial::operator()(const Eigen::VectorXd& q) const
{
    if (q.size() != nvars_)
        raise(ErrorCode::DimensionMismatch, "polynomial evaluated at a point of dimension " +
                                                std::to_string(q.size()) + ", expected " + std::to_string(nvars_));
    double s = 0.0;
    for (const auto& [e, c] : terms_) {
        double m = c;
        for (int i = 0; i < nvars_; ++i)
            for (int k = 0; k < e[static_cast<std::size_t>(i)]; ++k) m *= q[i];
        s += m;
    }
    return s;
}

Polynomial Polynomial::derivative(int var) const
{
    if (var < 0 || var >= nvars_) raise(ErrorCode::InvalidInput, "polynomial: derivative index out of range");
    Polynomial out(nvars_);
    for (const auto& [e, c] : terms_) {
        const int k = e[static_cast<std::size_t>(var)];
        if (k == 0) continue;
        Exponents de = e;
        de[static_cast<std::size_t>(var)] = k - 1;
        out.add_term(de, c * k);
    }
    return out;
}

PolynomialJet::PolynomialJet(Polynomial f) : f_(std::move(f))
{
    const int n = f_.nvars();
    for (int i = 0; i < n; ++i) grad_.push_back(f_.derivative(i));
    hess_.assign(static_cast<std::size_t>(n), {});
    third_.assign(static_cast<std::size_t>(n), {});
    for (int i = 0; i < n; ++i) {
        auto ui = static_cast<std::size_t>(i);
        third_[ui].assign(static_cast<std::size_t>(n), {});
        for (int j = 0; j < n; ++j) {
            auto uj = static_cast<std::size_t>(j);
            hess_[ui].push_back(grad_[ui].derivative(j));
            for (int k = 0; k < n; ++k) third_[ui][uj].push_back(hess_[ui][uj].derivative(k));
        }
    }
}

Eigen::VectorXd PolynomialJet::gradient(const Eigen::VectorXd& q) const
{
    Eigen::VectorXd g(nvars());
    for (int i = 0; i < nvars(); ++i) g[i] = grad_[static_cast<std::size_t>(i)](q);
    return g;
}

Eigen::MatrixXd PolynomialJet::hessian(const Eigen::VectorXd& q) const
{
    const int n = nvars();
    Eigen::MatrixXd h(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) h(i, j) = hess_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)](q);
    return h;
}

Eigen::MatrixXd PolynomialJet::third_contract(const Eigen::VectorXd& q, const Eigen::VectorXd& w) const
{
    const int n = nvars();
    if (w.size() != n) raise(ErrorCode::DimensionMismatch, "third_contract: direction dimension mismatch");
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                if (w[k] == 0.0) continue;
                const auto& p = third_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
                if (!p.is_zero()) m(i, j) += p(q) * w[k];
            }
    return m;
}

Eigen::VectorXd PolynomialJet::third_ww(const Eigen::VectorXd& q, const Eigen::VectorXd& w) const
{
    return third_contract(q, w) * w;
}

}  // namespace osbk
