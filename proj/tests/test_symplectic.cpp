#include "osbk/error.hpp"
#include "osbk/symplectic.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

using namespace osbk;
using osbk::test::gaussian;

namespace {

PhaseVector vec(std::initializer_list<double> v)
{
    PhaseVector p(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) p[i++] = x;
    return p;
}

bool same_span(const std::vector<PhaseVector>& a, const std::vector<PhaseVector>& b)
{
    std::vector<PhaseVector> both = a;
    both.insert(both.end(), b.begin(), b.end());
    return span_rank(a) == span_rank(b) && span_rank(both) == span_rank(a);
}

}  // namespace

TEST(Omega, DarbouxPair) { EXPECT_DOUBLE_EQ(omega(vec({1, 0}), vec({0, 1})), 1.0); }

TEST(Omega, HandExpansionInFourDimensions) { EXPECT_DOUBLE_EQ(omega(vec({1, 2, 3, 4}), vec({5, 6, 7, 8})), -8.0); }

TEST(Omega, DimensionMismatchThrows)
{
    try {
        omega(vec({1, 0}), vec({1, 0, 0, 0}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
    }
}

TEST(Omega, OddOrNonFiniteVectorsRejected)
{
    EXPECT_THROW(validate_phase_vector(vec({1, 2, 3})), Error);
    EXPECT_THROW(validate_phase_vector(vec({1, std::nan("")})), Error);
}

TEST(Omega, BilinearAntisymmetricOnRandomInputs)
{
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng.index(4));
        const PhaseVector u = gaussian(rng, 2 * d), v = gaussian(rng, 2 * d), w = gaussian(rng, 2 * d);
        const double a = rng.normal(), b = rng.normal();
        const double s = 1.0 + u.norm() * v.norm() + w.norm() * v.norm();
        EXPECT_NEAR(omega(u, v), -omega(v, u), 1e-12 * s);
        EXPECT_EQ(omega(u, u), 0.0);
        EXPECT_NEAR(omega(a * u + b * w, v), a * omega(u, v) + b * omega(w, v), 1e-12 * s * (1 + std::abs(a) + std::abs(b)));
        EXPECT_NEAR(omega(u, v), u.dot(osbk::test::omega_reference(d) * v), 1e-12 * s);
    }
}

TEST(ApplyJ, RotatesAndSquaresToMinusIdentity)
{
    EXPECT_EQ(apply_J(vec({1, 0})), vec({0, 1}));
    EXPECT_EQ(apply_J(apply_J(vec({2, 3}))), vec({-2, -3}));
    Rng rng(3);
    const PhaseVector v = gaussian(rng, 6);
    EXPECT_EQ(apply_J(apply_J(v)), PhaseVector(-v));
}

TEST(ApplyJ, OmegaIsJInnerProduct)
{
    const PhaseVector u = vec({1, 2}), v = vec({3, 4});
    EXPECT_DOUBLE_EQ(omega(u, v), -2.0);
    EXPECT_DOUBLE_EQ(apply_J(u).dot(v), -2.0);
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        const PhaseVector a = gaussian(rng, 8), b = gaussian(rng, 8);
        EXPECT_NEAR(omega(a, b), apply_J(a).dot(b), 1e-12 * (1 + a.norm() * b.norm()));
    }
}

TEST(Complement, LineInThePlaneIsItsOwnComplement)
{
    const auto c = symplectic_complement({vec({1, 0})});
    ASSERT_EQ(c.size(), 1u);
    EXPECT_TRUE(same_span(c, {vec({1, 0})}));
}

TEST(Complement, SymplecticPlane)
{
    const auto c = symplectic_complement({vec({1, 0, 0, 0}), vec({0, 1, 0, 0})});
    ASSERT_EQ(c.size(), 2u);
    EXPECT_TRUE(same_span(c, {vec({0, 0, 1, 0}), vec({0, 0, 0, 1})}));
}

TEST(Complement, LagrangianPlaneIsSelfComplementary)
{
    const std::vector<PhaseVector> b{vec({1, 0, 0, 0}), vec({0, 0, 1, 0})};
    EXPECT_TRUE(same_span(symplectic_complement(b), b));
}

TEST(Complement, RankDeficientInputNamesTheIndex)
{
    try {
        symplectic_complement({vec({1, 0, 0, 0}), vec({0, 0, 1, 0}), vec({2, 0, 3, 0})});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::RankDeficient);
        EXPECT_NE(std::string(e.what()).find('2'), std::string::npos);
    }
}

TEST(Complement, DoubleComplementRecoversSpan)
{
    Rng rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng.index(3));
        const std::size_t m = 1 + rng.index(static_cast<std::uint64_t>(2 * d - 1));
        std::vector<PhaseVector> b;
        for (std::size_t i = 0; i < m; ++i) b.push_back(gaussian(rng, 2 * d));
        const auto c = symplectic_complement(b);
        EXPECT_EQ(c.size(), static_cast<std::size_t>(2 * d) - m);
        for (const auto& x : c)
            for (const auto& y : b) EXPECT_NEAR(omega(x, y), 0.0, 1e-10 * y.norm());
        EXPECT_TRUE(same_span(symplectic_complement(c), b));
    }
}

TEST(Layout, BlockRoundTrip)
{
    const PhaseVector z = vec({1, 2, 3, 4, 5, 6});
    const PhaseVector b = to_block_layout(z);
    EXPECT_EQ(b, vec({1, 3, 5, 2, 4, 6}));
    EXPECT_EQ(from_block_layout(b.head(3), b.tail(3)), z);
}

TEST(AffineLagrangian, ValidationRejectsNonIsotropicBasis)
{
    AffineLagrangian l{vec({0, 0, 0, 0}), {vec({1, 0, 0, 0}), vec({0, 1, 0, 0})}};
    EXPECT_THROW(l.validate(), Error);
    EXPECT_NO_THROW(AffineLagrangian::x_subspace(2).validate());
    EXPECT_NO_THROW(AffineLagrangian::y_subspace(3).validate());
}

namespace {

void expect_normalizes(const AffineLagrangian& l1, const AffineLagrangian& l2, const AffineSymplecticMap& t)
{
    const Eigen::Index dim = l1.base.size();
    const Eigen::Index d = dim / 2;
    const Matrix om = osbk::test::omega_reference(d);
    EXPECT_LT((t.linear.transpose() * om * t.linear - om).cwiseAbs().maxCoeff(), 1e-10);
    auto check = [&](const AffineLagrangian& l, int zero_offset) {
        const PhaseVector b = t.apply(l.base);
        for (Eigen::Index i = 0; i < d; ++i) EXPECT_NEAR(b[2 * i + zero_offset], 0.0, 1e-10);
        for (const auto& v : l.basis) {
            const PhaseVector w = t.apply_linear(v);
            for (Eigen::Index i = 0; i < d; ++i) EXPECT_NEAR(w[2 * i + zero_offset], 0.0, 1e-10 * v.norm());
        }
    };
    check(l1, 1);  // image in the x-subspace: y entries vanish
    check(l2, 0);
}

}  // namespace

TEST(Normalize, CoordinateAxesGiveIdentity)
{
    const auto t = normalize_lagrangian_pair(AffineLagrangian::x_subspace(1), AffineLagrangian::y_subspace(1));
    EXPECT_LT((t.linear - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT(t.translation.norm(), 1e-14);
}

TEST(Normalize, ShiftedAxisIsATranslation)
{
    AffineLagrangian l1 = AffineLagrangian::x_subspace(1);
    l1.base = vec({0, 1});
    const auto t = normalize_lagrangian_pair(l1, AffineLagrangian::y_subspace(1));
    EXPECT_LT((t.linear - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT((t.translation - vec({0, -1})).norm(), 1e-14);
}

TEST(Normalize, DiagonalLines)
{
    const AffineLagrangian l1{vec({0, 0}), {vec({1, 1})}}, l2{vec({0, 0}), {vec({1, -1})}};
    const auto t = normalize_lagrangian_pair(l1, l2);
    EXPECT_NEAR(t.linear.determinant(), 1.0, 1e-12);
    EXPECT_LT(t.symplectic_defect(), 1e-12);
    expect_normalizes(l1, l2, t);
}

TEST(Normalize, RandomTransversePairs)
{
    Rng rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng.index(3));
        // Images of the coordinate subspaces under a random symplectic map
        // exp(J S) approximated by a product of shears.
        Matrix s = Matrix::Identity(2 * d, 2 * d);
        for (int k = 0; k < 3; ++k) {
            Matrix sym = Matrix::Zero(d, d);
            for (Eigen::Index i = 0; i < d; ++i)
                for (Eigen::Index j = i; j < d; ++j) sym(i, j) = sym(j, i) = rng.normal();
            Matrix shear = Matrix::Identity(2 * d, 2 * d);
            for (Eigen::Index i = 0; i < d; ++i)
                for (Eigen::Index j = 0; j < d; ++j) {
                    if (k % 2 == 0) shear(2 * i + 1, 2 * j) = sym(i, j);
                    else shear(2 * i, 2 * j + 1) = sym(i, j);
                }
            s = shear * s;
        }
        AffineLagrangian l1{gaussian(rng, 2 * d), {}}, l2{gaussian(rng, 2 * d), {}};
        for (Eigen::Index i = 0; i < d; ++i) {
            l1.basis.push_back(s.col(2 * i));
            l2.basis.push_back(s.col(2 * i + 1));
        }
        const auto t = normalize_lagrangian_pair(l1, l2);
        expect_normalizes(l1, l2, t);
    }
}

TEST(Normalize, NonTransverseReportsIntersectionDimension)
{
    const AffineLagrangian l1 = AffineLagrangian::x_subspace(2);
    AffineLagrangian l2{vec({0, 0, 0, 0}), {vec({1, 0, 0, 0}), vec({0, 0, 0, 1})}};
    try {
        normalize_lagrangian_pair(l1, l2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotTransverse);
        EXPECT_NE(std::string(e.what()).find('1'), std::string::npos);
    }
}

TEST(AffineMap, ComposeAndInverse)
{
    Rng rng(29);
    AffineLagrangian l1{gaussian(rng, 4), {}}, l2{gaussian(rng, 4), {}};
    l1.basis = {PhaseVector(vec({1, 0.3, 0, 0.2})), PhaseVector(vec({0, 0.2, 1, 0.5}))};
    l2.basis = AffineLagrangian::y_subspace(2).basis;
    const auto t = normalize_lagrangian_pair(l1, l2);
    const auto id = t.compose(t.inverse());
    const PhaseVector z = gaussian(rng, 4);
    EXPECT_LT((id.apply(z) - z).norm(), 1e-12);
}
