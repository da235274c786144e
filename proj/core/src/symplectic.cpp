#include "osbk/symplectic.hpp"

#include "osbk/error.hpp"

#include <cmath>
#include <string>

namespace osbk {

namespace {

void require_same_dim(const PhaseVector& u, const PhaseVector& v, const char* where)
{
    if (u.size() != v.size())
        raise(ErrorCode::DimensionMismatch, std::string(where) + ": dimensions " +
                                                std::to_string(u.size()) + " and " +
                                                std::to_string(v.size()));
}

void require_even(Eigen::Index n, const char* where)
{
    if (n < 2 || n % 2 != 0)
        raise(ErrorCode::DimensionMismatch,
              std::string(where) + ": phase dimension must be even and >= 2, got " + std::to_string(n));
}

Matrix columns(const std::vector<PhaseVector>& vs, Eigen::Index rows)
{
    Matrix m(rows, static_cast<Eigen::Index>(vs.size()));
    for (std::size_t i = 0; i < vs.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = vs[i];
    return m;
}

double max_norm(const std::vector<PhaseVector>& vs)
{
    double s = 0.0;
    for (const auto& v : vs) s = std::max(s, v.cwiseAbs().maxCoeff());
    return s;
}

}  // namespace

void validate_phase_vector(const PhaseVector& v)
{
    require_even(v.size(), "phase vector");
    if (!v.allFinite()) raise(ErrorCode::InvalidInput, "phase vector has non-finite entries");
}

double omega(const PhaseVector& u, const PhaseVector& v)
{
    require_same_dim(u, v, "omega");
    require_even(u.size(), "omega");
    double s = 0.0;
    for (Eigen::Index i = 0; i + 1 < u.size(); i += 2) s += u[i] * v[i + 1] - u[i + 1] * v[i];
    return s;
}

PhaseVector apply_J(const PhaseVector& v)
{
    require_even(v.size(), "apply_J");
    PhaseVector out(v.size());
    for (Eigen::Index i = 0; i + 1 < v.size(); i += 2) {
        out[i] = -v[i + 1];
        out[i + 1] = v[i];
    }
    return out;
}

Matrix omega_matrix(Eigen::Index d)
{
    Matrix m = Matrix::Zero(2 * d, 2 * d);
    for (Eigen::Index i = 0; i < d; ++i) {
        m(2 * i, 2 * i + 1) = 1.0;
        m(2 * i + 1, 2 * i) = -1.0;
    }
    return m;
}

Eigen::Index span_rank(const std::vector<PhaseVector>& vectors, double rel_tol)
{
    if (vectors.empty()) return 0;
    Matrix m = columns(vectors, vectors.front().size());
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s[0] == 0.0) return 0;
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s[i] > rel_tol * s[0]) ++r;
    return r;
}

std::vector<PhaseVector> symplectic_complement(const std::vector<PhaseVector>& basis)
{
    if (basis.empty()) raise(ErrorCode::InvalidInput, "symplectic_complement: empty basis");
    const Eigen::Index dim = basis.front().size();
    require_even(dim, "symplectic_complement");
    if (static_cast<Eigen::Index>(basis.size()) > dim)
        raise(ErrorCode::RankDeficient, "symplectic_complement: more vectors than dimensions");

    std::vector<PhaseVector> prefix;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        require_same_dim(basis[i], basis.front(), "symplectic_complement");
        prefix.push_back(basis[i]);
        if (span_rank(prefix) != static_cast<Eigen::Index>(prefix.size()))
            raise(ErrorCode::RankDeficient,
                  "symplectic_complement: vector " + std::to_string(i) + " is linearly dependent on its predecessors");
    }

    const auto m = static_cast<Eigen::Index>(basis.size());
    Matrix rows(m, dim);
    for (Eigen::Index i = 0; i < m; ++i) rows.row(i) = apply_J(basis[static_cast<std::size_t>(i)]).transpose();

    Eigen::JacobiSVD<Matrix> svd(rows, Eigen::ComputeFullV);
    std::vector<PhaseVector> out;
    for (Eigen::Index k = m; k < dim; ++k) out.push_back(svd.matrixV().col(k));
    return out;
}

PhaseVector to_block_layout(const PhaseVector& z)
{
    require_even(z.size(), "to_block_layout");
    const Eigen::Index n = z.size() / 2;
    PhaseVector out(z.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        out[i] = z[2 * i];
        out[n + i] = z[2 * i + 1];
    }
    return out;
}

PhaseVector from_block_layout(const Eigen::VectorXd& q, const Eigen::VectorXd& p)
{
    if (q.size() != p.size()) raise(ErrorCode::DimensionMismatch, "from_block_layout: |q| != |p|");
    PhaseVector out(2 * q.size());
    for (Eigen::Index i = 0; i < q.size(); ++i) {
        out[2 * i] = q[i];
        out[2 * i + 1] = p[i];
    }
    return out;
}

void AffineLagrangian::validate(double tol) const
{
    require_even(base.size(), "affine Lagrangian");
    const Eigen::Index d = base.size() / 2;
    if (static_cast<Eigen::Index>(basis.size()) != d)
        raise(ErrorCode::InvalidInput, "affine Lagrangian: need " + std::to_string(d) + " basis vectors, got " +
                                           std::to_string(basis.size()));
    for (const auto& b : basis) require_same_dim(b, base, "affine Lagrangian");
    if (span_rank(basis) != d) raise(ErrorCode::RankDeficient, "affine Lagrangian: basis is rank deficient");
    const double scale = std::max(1.0, max_norm(basis));
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i + 1; j < basis.size(); ++j)
            if (std::abs(omega(basis[i], basis[j])) > tol * scale * scale)
                raise(ErrorCode::InvalidInput, "affine Lagrangian: omega(b" + std::to_string(i) + ", b" +
                                                   std::to_string(j) + ") != 0");
}

AffineLagrangian AffineLagrangian::x_subspace(Eigen::Index d)
{
    AffineLagrangian l{PhaseVector::Zero(2 * d), {}};
    for (Eigen::Index i = 0; i < d; ++i) l.basis.push_back(PhaseVector::Unit(2 * d, 2 * i));
    return l;
}

AffineLagrangian AffineLagrangian::y_subspace(Eigen::Index d)
{
    AffineLagrangian l{PhaseVector::Zero(2 * d), {}};
    for (Eigen::Index i = 0; i < d; ++i) l.basis.push_back(PhaseVector::Unit(2 * d, 2 * i + 1));
    return l;
}

AffineSymplecticMap AffineSymplecticMap::identity(Eigen::Index dim)
{
    return {Matrix::Identity(dim, dim), PhaseVector::Zero(dim)};
}

AffineSymplecticMap AffineSymplecticMap::inverse() const
{
    // S^{-1} = -Omega S^T Omega for symplectic S; the LU inverse is used so
    // that slightly non-symplectic input still round-trips.
    Matrix inv = linear.fullPivLu().inverse();
    return {inv, -inv * translation};
}

AffineSymplecticMap AffineSymplecticMap::compose(const AffineSymplecticMap& inner) const
{
    return {linear * inner.linear, linear * inner.translation + translation};
}

double AffineSymplecticMap::symplectic_defect() const
{
    const Matrix om = omega_matrix(linear.rows() / 2);
    return (linear.transpose() * om * linear - om).cwiseAbs().maxCoeff();
}

AffineSymplecticMap normalize_lagrangian_pair(const AffineLagrangian& l1, const AffineLagrangian& l2)
{
    l1.validate();
    l2.validate();
    require_same_dim(l1.base, l2.base, "normalize_lagrangian_pair");
    const Eigen::Index dim = l1.base.size();
    const Eigen::Index d = dim / 2;

    Matrix a = columns(l1.basis, dim);
    Matrix b = columns(l2.basis, dim);
    Matrix ab(dim, dim);
    ab << a, b;
    Eigen::FullPivLU<Matrix> lu(ab);
    lu.setThreshold(1e-10);
    if (lu.rank() < dim)
        raise(ErrorCode::NotTransverse, "normalize_lagrangian_pair: direction spaces intersect in dimension " +
                                            std::to_string(dim - lu.rank()));

    // base1 + A s = base2 + B t
    Matrix amb(dim, dim);
    amb << a, -b;
    Eigen::VectorXd st = amb.fullPivLu().solve(l2.base - l1.base);
    PhaseVector meet = l1.base + a * st.head(d);

    // Rescale the L2 basis so that omega(a_i, b'_j) = delta_ij; the columns
    // (a_1, b'_1, ..., a_d, b'_d) then form a symplectic basis.
    Matrix gram = a.transpose() * omega_matrix(d) * b;
    Matrix b_dual = b * gram.inverse();
    Matrix frame(dim, dim);
    for (Eigen::Index i = 0; i < d; ++i) {
        frame.col(2 * i) = a.col(i);
        frame.col(2 * i + 1) = b_dual.col(i);
    }
    Matrix s = frame.inverse();
    return {s, -s * meet};
}

}  // namespace osbk
