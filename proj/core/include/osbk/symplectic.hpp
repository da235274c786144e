#pragma once

#include <Eigen/Dense>

#include <vector>

namespace osbk {

/// A point or vector of R^{2d} in interleaved Darboux coordinates
/// (x1, y1, ..., xd, yd).
using PhaseVector = Eigen::VectorXd;
/// A point of a table's parameter domain.
using ParamPoint = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Throws unless v has even length >= 2 and only finite entries.
void validate_phase_vector(const PhaseVector& v);

/// Number of conjugate pairs d of a 2d-dimensional vector.
inline Eigen::Index pair_count(const PhaseVector& v) { return v.size() / 2; }

/// omega(u, v) = sum_i (u_xi v_yi - u_yi v_xi).
double omega(const PhaseVector& u, const PhaseVector& v);

/// Per conjugate pair (x, y) -> (-y, x). omega(u, v) == dot(J u, v).
PhaseVector apply_J(const PhaseVector& v);

/// Matrix Omega with omega(u, v) = u^T Omega v, in the interleaved layout.
Matrix omega_matrix(Eigen::Index d);

/// Basis of {xi : omega(xi, b) = 0 for all b in span(basis)}. The input
/// vectors must be linearly independent; the result has 2d - m vectors.
std::vector<PhaseVector> symplectic_complement(const std::vector<PhaseVector>& basis);

/// Numerical rank of the matrix whose columns are `vectors`.
Eigen::Index span_rank(const std::vector<PhaseVector>& vectors, double rel_tol = 1e-10);

/// Convert between the interleaved layout and the block layout (Q, P) used
/// for Lagrangian graphs. In block layout the first n entries are the base
/// coordinates and the last n the fibre coordinates.
PhaseVector to_block_layout(const PhaseVector& interleaved);
PhaseVector from_block_layout(const Eigen::VectorXd& q, const Eigen::VectorXd& p);

/// Affine subspace base + span(basis) with omega vanishing on the basis.
struct AffineLagrangian {
    PhaseVector base;
    std::vector<PhaseVector> basis;

    /// Throws on dimension mismatch, rank deficiency or a nonzero
    /// omega(b_i, b_j) beyond the scaled tolerance.
    void validate(double tol = 1e-10) const;

    static AffineLagrangian x_subspace(Eigen::Index d);
    static AffineLagrangian y_subspace(Eigen::Index d);
};

/// z -> linear * z + translation, with a symplectic linear part.
struct AffineSymplecticMap {
    Matrix linear;
    PhaseVector translation;

    static AffineSymplecticMap identity(Eigen::Index dim);

    PhaseVector apply(const PhaseVector& z) const { return linear * z + translation; }
    PhaseVector apply_linear(const PhaseVector& v) const { return linear * v; }
    AffineSymplecticMap inverse() const;
    /// (this o inner)(z) = this(inner(z)).
    AffineSymplecticMap compose(const AffineSymplecticMap& inner) const;

    /// max |S^T Omega S - Omega|.
    double symplectic_defect() const;
};

/// Affine symplectic T with T(L1) = x-subspace and T(L2) = y-subspace. The
/// unique intersection point of L1 and L2 is sent to the origin. Throws
/// NotTransverse when the direction spaces meet nontrivially.
AffineSymplecticMap normalize_lagrangian_pair(const AffineLagrangian& l1,
                                              const AffineLagrangian& l2);

}  // namespace osbk
