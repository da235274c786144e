#include "osbk/correspondence.hpp"
#include "osbk/error.hpp"
#include "osbk/integrability.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

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

Polynomial random_cubic(Rng& rng, int n)
{
    Polynomial f(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            for (int k = j; k < n; ++k) {
                Exponents e(static_cast<std::size_t>(n), 0);
                ++e[i];
                ++e[j];
                ++e[k];
                f.add_term(e, rng.normal());
            }
    return f;
}

/// A symplectic shear (x, y) -> (x, y + S x) followed by a rotation in the
/// first coordinate pair, both written out in interleaved layout.
AffineSymplecticMap random_symplectic(Rng& rng, Eigen::Index d)
{
    Matrix shear = Matrix::Identity(2 * d, 2 * d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = i; j < d; ++j) {
            const double s = 0.5 * rng.normal();
            shear(2 * i + 1, 2 * j) += s;
            if (i != j) shear(2 * j + 1, 2 * i) += s;
        }
    Matrix rot = Matrix::Identity(2 * d, 2 * d);
    const double a = rng.uniform(0, 6.28);
    rot(0, 0) = std::cos(a);
    rot(0, 1) = -std::sin(a);
    rot(1, 0) = std::sin(a);
    rot(1, 1) = std::cos(a);
    AffineSymplecticMap t = AffineSymplecticMap::identity(2 * d);
    t.linear = rot * shear;
    t.translation = gaussian(rng, 2 * d, 0.3);
    return t;
}

/// Exterior start with level in (1.2, 4).
PhaseVector exterior_start(Rng& rng, const SymplecticEllipsoid& e)
{
    const PhaseVector z = gaussian(rng, 2 * e.pairs());
    return z * std::sqrt(rng.uniform(1.2, 4.0) / e.level(z));
}

}  // namespace

TEST(Integrals, EllipsoidValues)
{
    const ManifoldSpec s(SymplecticEllipsoid{{1.0, 2.0}});
    const auto set = integrals_for(s);
    EXPECT_EQ(set.kind, IntegralKind::Ellipsoid);
    ASSERT_EQ(set.size(), 2u);
    const Eigen::VectorXd v = set.values(vec({1, 0, 0, 2}));
    EXPECT_DOUBLE_EQ(v[0], 1.0);
    EXPECT_DOUBLE_EQ(v[1], 4.0);
    EXPECT_DOUBLE_EQ(poisson_bracket(set.integrals[0], set.integrals[1], vec({0.3, -1, 2, 0.5})), 0.0);
}

TEST(Integrals, CubicGraphValues)
{
    const ManifoldSpec s(GeneratingGraph(Polynomial::cubic2(0, 1, 1, 0)));
    const auto set = integrals_for(s);
    EXPECT_EQ(set.kind, IntegralKind::CubicGraph);
    ASSERT_EQ(set.size(), 2u);
    const Eigen::VectorXd v = set.values(vec({1, 0, 0, 0}));
    EXPECT_DOUBLE_EQ(v[0], 0.0);
    EXPECT_DOUBLE_EQ(v[1], -1.0);
}

TEST(Integrals, UnsupportedTables)
{
    try {
        integrals_for(ManifoldSpec(TrigImmersion::chebyshev()));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Unsupported);
    }
    Polynomial f(2);
    f.add_term({3, 0}, 1.0);
    f.add_term({2, 0}, 1.0);
    EXPECT_THROW(integrals_for(ManifoldSpec(GeneratingGraph(f))), Error);
}

TEST(Integrals, CanonicalBracket)
{
    Integral x{"x", [](const PhaseVector& z) { return z[0]; }, [](const PhaseVector& z) {
                   PhaseVector g = PhaseVector::Zero(z.size());
                   g[0] = 1;
                   return g;
               }};
    Integral y{"y", [](const PhaseVector& z) { return z[1]; }, [](const PhaseVector& z) {
                   PhaseVector g = PhaseVector::Zero(z.size());
                   g[1] = 1;
                   return g;
               }};
    EXPECT_DOUBLE_EQ(poisson_bracket(x, y, vec({0.2, 0.7})), 1.0);
    EXPECT_DOUBLE_EQ(poisson_bracket(y, x, vec({0.2, 0.7})), -1.0);
}

TEST(Integrals, GradientsMatchFiniteDifferences)
{
    Rng rng(71);
    std::vector<ManifoldSpec> specs{ManifoldSpec(SymplecticEllipsoid{{0.6, 2.2, 1.3}}),
                                    ManifoldSpec(GeneratingGraph(random_cubic(rng, 2))),
                                    ManifoldSpec(GeneratingGraph(random_cubic(rng, 3)))};
    specs.push_back(specs[2].transformed(random_symplectic(rng, 3)));
    for (const auto& s : specs) {
        const auto set = integrals_for(s);
        for (int trial = 0; trial < 20; ++trial) {
            const PhaseVector z = gaussian(rng, s.ambient_dim());
            for (const auto& I : set.integrals) {
                const PhaseVector g = I.gradient(z);
                for (Eigen::Index k = 0; k < z.size(); ++k) {
                    PhaseVector a = z, b = z;
                    a[k] += 1e-6;
                    b[k] -= 1e-6;
                    EXPECT_NEAR(g[k], (I.value(a) - I.value(b)) / 2e-6, 1e-6 * (1 + g.norm()));
                }
            }
        }
    }
}

TEST(Integrals, BracketsVanish)
{
    Rng rng(73);
    for (int n : {2, 3}) {
        for (int c = 0; c < 10; ++c) {
            ManifoldSpec s(GeneratingGraph(random_cubic(rng, n)));
            if (c % 2 == 1) s = s.transformed(random_symplectic(rng, n));
            const auto set = integrals_for(s);
            for (int i = 0; i < 100; ++i) EXPECT_LT(max_bracket(set, gaussian(rng, 2 * n)), 1e-12);
        }
    }
    const auto e = integrals_for(ManifoldSpec(SymplecticEllipsoid{{1.0, 2.0, 3.0}}));
    for (int i = 0; i < 100; ++i) EXPECT_LT(max_bracket(e, gaussian(rng, 6)), 1e-12);
}

TEST(Integrals, PreservedAcrossConstructedCubicPairs)
{
    // z = (q + w, grad F(q) + H w), z' = (q - w, grad F(q) - H w) have a
    // table midpoint and an omega-orthogonal difference by construction.
    Rng rng(79);
    for (int n : {2, 3}) {
        for (int c = 0; c < 20; ++c) {
            const GeneratingGraph g(random_cubic(rng, n));
            const ManifoldSpec s(g);
            const auto set = integrals_for(s);
            for (int k = 0; k < 20; ++k) {
                const Eigen::VectorXd q = gaussian(rng, n), w = gaussian(rng, n);
                const Eigen::VectorXd p = g.jet().gradient(q), hw = g.jet().hessian(q) * w;
                PhaseVector z(2 * n), zp(2 * n);
                for (int i = 0; i < n; ++i) {
                    z[2 * i] = q[i] + w[i];
                    z[2 * i + 1] = p[i] + hw[i];
                    zp[2 * i] = q[i] - w[i];
                    zp[2 * i + 1] = p[i] - hw[i];
                }
                EXPECT_LT(verify_pair(s, z, zp, q).relative, 1e-10);
                const Eigen::VectorXd a = set.values(z), b = set.values(zp);
                const Eigen::VectorXd expected = -0.5 * g.jet().third_ww(q, w);
                for (int i = 0; i < n; ++i) {
                    const double sc = std::max({1.0, std::abs(a[i]), std::abs(b[i])});
                    EXPECT_LT(std::abs(a[i] - b[i]), 1e-10 * sc);
                    EXPECT_LT(std::abs(a[i] - expected[i]), 1e-10 * sc);
                }
                const auto r = audit_invariance(s, set, {z, zp});
                EXPECT_EQ(r.matched_sign, "-");
            }
        }
    }
}

TEST(Integrals, PreservedBySolvedCubicSteps)
{
    Rng rng(83);
    const GeneratingGraph g(Polynomial::cubic2(0, 1, 1, 0));
    const ManifoldSpec s(g);
    const auto set = integrals_for(s);
    int pairs = 0;
    for (int k = 0; k < 100; ++k) {
        const PhaseVector z = gaussian(rng, 4);
        for (const auto& c : step_cubic_graph(g, z)) {
            if (c.degenerate) continue;
            const Eigen::VectorXd a = set.values(z), b = set.values(c.partner);
            for (int i = 0; i < 2; ++i) EXPECT_LT(std::abs(a[i] - b[i]), 1e-10 * std::max({1.0, std::abs(a[i]), std::abs(b[i])}));
            ++pairs;
        }
    }
    EXPECT_GT(pairs, 100);
}

TEST(Integrals, MixedCubicAuditMatchesMinusSign)
{
    const GeneratingGraph g(Polynomial::cubic2(0, 1, 1, 0));
    const ManifoldSpec s(g);
    const PhaseVector z = vec({1.3, 0.4, -0.2, 2.1});
    const auto c = step_cubic_graph(g, z);
    ASSERT_FALSE(c.empty());
    const auto r = audit_invariance(s, integrals_for(s), {z, c.front().partner});
    EXPECT_EQ(r.matched_sign, "-");
    EXPECT_LT(r.tensor_error_minus, 1e-9);
    EXPECT_GT(r.tensor_error_plus, 1e-3);
}

TEST(Integrals, MixedCubicPairAtTheOrigin)
{
    const GeneratingGraph g(Polynomial::cubic2(0, 1, 1, 0));
    const ManifoldSpec s(g);
    const auto set = integrals_for(s);
    const PhaseVector a = vec({1, 0, 0, 0}), b = vec({-1, 0, 0, 0});
    EXPECT_LT(verify_pair(s, a, b, vec({0, 0})).relative, 1e-15);
    EXPECT_LT((set.values(a) - vec({0, -1})).norm(), 1e-15);
    EXPECT_LT((set.values(b) - vec({0, -1})).norm(), 1e-15);
    EXPECT_LT((0.5 * g.jet().third_ww(vec({0, 0}), vec({1, 0})) - vec({0, 1})).norm(), 1e-15);
    const auto r = audit_invariance(s, set, {a, b});
    EXPECT_EQ(r.matched_sign, "-");
    EXPECT_NEAR(r.tensor_error_plus, 2.0, 1e-12);
}

TEST(Integrals, TransformedEllipsoid)
{
    Rng rng(89);
    const SymplecticEllipsoid e{{0.8, 2.5}};
    const auto t = random_symplectic(rng, 2);
    const ManifoldSpec s(e, t);
    const auto set = integrals_for(s);
    const PhaseVector z0 = t.apply(exterior_start(rng, e));
    StepOptions o;
    o.branches = {Branch::Plus};
    PhaseVector z = z0;
    std::vector<PhaseVector> orbit{z};
    for (int i = 0; i < 200; ++i) {
        z = step(s, z, o).front().partner;
        orbit.push_back(z);
    }
    const auto r = audit_invariance(s, set, orbit);
    for (double d : r.max_rel_drift) EXPECT_LT(d, 1e-9);
}

TEST(Integrals, EllipsoidDriftOverLongOrbits)
{
    Rng rng(97);
    for (int d = 1; d <= 3; ++d) {
        SymplecticEllipsoid e;
        for (int j = 0; j < d; ++j) e.axes.push_back(rng.uniform(0.5, 3.0));
        const ManifoldSpec s(e);
        InvarianceAuditor aud(s, integrals_for(s));
        PhaseVector z = exterior_start(rng, e);
        const PhaseVector z0 = z;
        for (int i = 0; i < 10000; ++i) {
            const PhaseVector zn = step_ellipsoid(e, z, Branch::Plus).partner;
            aud.add(z, zn);
            z = zn;
        }
        EXPECT_EQ(aud.report().steps, 10000u);
        // Cumulative drift against the start, not just per-step.
        for (int j = 0; j < d; ++j) {
            const double a = z0[2 * j] * z0[2 * j] + z0[2 * j + 1] * z0[2 * j + 1];
            const double b = z[2 * j] * z[2 * j] + z[2 * j + 1] * z[2 * j + 1];
            EXPECT_LT(std::abs(a - b) / std::max(1.0, a), 1e-10);
            EXPECT_LT(aud.report().max_rel_drift[j], 1e-10);
        }
    }
}

TEST(Integrals, DegenerateStepHasNoDrift)
{
    const ManifoldSpec s(GeneratingGraph(Polynomial::cubic2(0, 1, 1, 0)));
    const PhaseVector z = vec({0.5, 2.0, 1.0, 1.25});  // on the graph
    const auto r = audit_invariance(s, integrals_for(s), {z, z});
    for (double d : r.max_abs_drift) EXPECT_EQ(d, 0.0);
    EXPECT_EQ(r.matched_sign, "+-");
}
