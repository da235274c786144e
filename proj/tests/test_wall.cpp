#include "osbk/conic.hpp"
#include "osbk/error.hpp"
#include "osbk/random.hpp"
#include "osbk/wall.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace osbk;
using osbk::test::gaussian;

namespace {

constexpr double pi = std::numbers::pi;

PhaseVector vec(std::initializer_list<double> v)
{
    PhaseVector p(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) p[i++] = x;
    return p;
}

/// (sin t, sin 2t): a figure eight with an inflection at t = 0.
TrigImmersion figure_eight()
{
    return TrigImmersion(1, {{TrigTerm{{1}, 0.0, 1.0}}, {TrigTerm{{2}, 0.0, 1.0}}});
}

Eigen::Matrix2d random_sym(Rng& rng)
{
    Eigen::Matrix2d a;
    a(0, 0) = rng.normal();
    a(1, 1) = rng.normal();
    a(0, 1) = a(1, 0) = rng.normal();
    return a;
}

GeneratingGraph cubic_graph(double a, double b, double c, double d) { return GeneratingGraph(Polynomial::cubic2(a, b, c, d)); }

}  // namespace

// ------------------------------------------------------------ curve wall

TEST(CurveWall, CurvePointsAreOnTheWall)
{
    for (const auto& c : {TrigImmersion::circle(), TrigImmersion::chebyshev(), TrigImmersion::legendrian_curve()}) {
        for (int i = 0; i < 50; ++i) {
            const double t = 2 * pi * i / 50;
            EXPECT_LT(curve_wall_equations(c, c.curve_derivative(t, 0), t).norm(), 1e-14);
        }
    }
}

TEST(CurveWall, CircleWallIsTheCircle)
{
    std::vector<double> ts;
    for (int i = 0; i < 32; ++i) ts.push_back(2 * pi * i / 32);
    const auto s = curve_wall_samples(TrigImmersion::circle(), ts, {-1.0, 0.5, 2.0});
    ASSERT_EQ(s.size(), ts.size());
    for (const auto& w : s) {
        EXPECT_TRUE(w.plane.empty());
        EXPECT_NEAR(w.point.norm(), 1.0, 1e-15);
        EXPECT_FALSE(w.rank_deficient);
    }
}

TEST(CurveWall, ChebyshevSamplesSolveTheEquations)
{
    const auto c = TrigImmersion::chebyshev();
    std::vector<double> ts;
    for (int i = 0; i < 40; ++i) ts.push_back(2 * pi * i / 40);
    const std::vector<double> grid{-2.0, -0.5, 0.0, 0.7, 3.0};
    const auto s = curve_wall_samples(c, ts, grid);
    ASSERT_EQ(s.size(), ts.size() * grid.size() * grid.size());
    for (const auto& w : s) {
        ASSERT_EQ(w.plane.size(), 2u);
        EXPECT_LT(curve_wall_equations(c, w.point, w.t).norm(), 1e-12);
        EXPECT_FALSE(w.rank_deficient);
    }
    // The zero tuple comes first for every t.
    EXPECT_LT((s[0].point - c.curve_derivative(ts[0], 0)).norm(), 1e-15);
}

TEST(CurveWall, SingularResidualAtCurvePoints)
{
    const auto c = TrigImmersion::chebyshev();
    EXPECT_NEAR(curve_wall_singular(c, c.curve_derivative(0.0, 0), 0.0), -9.0, 1e-12);
    for (double t : {0.3, 1.7, 4.0}) {
        const double conv = omega(c.curve_derivative(t, 1), c.curve_derivative(t, 2));
        EXPECT_NEAR(curve_wall_singular(c, c.curve_derivative(t, 0), t), -conv, 1e-12);
    }
    const auto f8 = figure_eight();
    EXPECT_NEAR(curve_wall_singular(f8, f8.curve_derivative(0.0, 0), 0.0), 0.0, 1e-14);
    const auto s = curve_wall_samples(f8, {0.0, 1.0}, {});
    EXPECT_TRUE(s[0].rank_deficient);
    EXPECT_FALSE(s[1].rank_deficient);
}

TEST(Multiplicity, CircleExamples)
{
    const auto c = TrigImmersion::circle();
    EXPECT_EQ(multiplicity_curve(c, vec({2, 0})), 2u);
    EXPECT_EQ(multiplicity_curve(c, vec({0.5, 0})), 0u);
}

TEST(Multiplicity, ChebyshevAcrossTheWall)
{
    const auto c = TrigImmersion::chebyshev();
    const PhaseVector p = c.curve_derivative(0.0, 0), g2 = c.curve_derivative(0.0, 2);
    EXPECT_EQ(multiplicity_curve(c, p + 0.01 * g2), 0u);
    EXPECT_EQ(multiplicity_curve(c, p - 0.01 * g2), 2u);
}

TEST(Multiplicity, OnTheWallIsRefused)
{
    const auto c = TrigImmersion::circle();
    EXPECT_THROW(multiplicity_curve(c, vec({1, 0})), UnstableCountError);
    try {
        multiplicity_curve(TrigImmersion::circle(), vec({0, 1}));
        FAIL();
    } catch (const UnstableCountError& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnstableCount);
        EXPECT_FALSE(e.counts().empty());
    }
}

TEST(Multiplicity, MatchesCircleFormula)
{
    // omega(gamma - P, gamma') = 1 - <P, gamma>: two roots iff |P| > 1.
    Rng rng(31);
    const auto c = TrigImmersion::circle();
    for (int i = 0; i < 200; ++i) {
        const PhaseVector p = gaussian(rng, 2, 1.5);
        if (std::abs(p.norm() - 1.0) < 1e-3) continue;
        EXPECT_EQ(multiplicity_curve(c, p), p.norm() > 1.0 ? 2u : 0u);
    }
}

TEST(Multiplicity, LocallyConstant)
{
    Rng rng(37);
    const auto c = TrigImmersion::chebyshev();
    int checked = 0;
    for (int i = 0; i < 200; ++i) {
        const PhaseVector p = gaussian(rng, 4, 1.0);
        std::size_t m0 = 0;
        try {
            m0 = multiplicity_curve(c, p);
        } catch (const UnstableCountError&) {
            continue;
        }
        const PhaseVector d = gaussian(rng, 4, 1.0).normalized();
        EXPECT_EQ(multiplicity_curve(c, p + 1e-4 * d), m0);
        ++checked;
    }
    EXPECT_GT(checked, 150);
}

TEST(Eta, QuadraticCoefficientMatchesExtrapolation)
{
    for (const auto& c : {TrigImmersion::circle(), TrigImmersion::chebyshev(), TrigImmersion::reversed_circle()}) {
        const auto fit = eta_expansion_check(c);
        EXPECT_NEAR(fit.c2, -0.5, 1e-4);
        EXPECT_LT(fit.relative_error, 1e-4);
        // Richardson oracle from two direct evaluations.
        auto ratio = [&](double t) {
            const PhaseVector d1 = c.curve_derivative(t, 1);
            const double eta = omega(c.curve_derivative(t, 0) - c.curve_derivative(0, 0), d1) / omega(c.curve_derivative(0, 2), d1);
            return eta / (t * t);
        };
        EXPECT_NEAR(fit.c2, (10 * ratio(1e-4) - ratio(1e-3)) / 9, 1e-5);
    }
}

TEST(Eta, RejectsInflections)
{
    EXPECT_THROW(eta_expansion_check(figure_eight()), Error);
}

// ------------------------------------------------------------ Lagrangian wall

TEST(DeltaDet, Examples)
{
    const auto mixed = cubic_graph(0, 1, 1, 0);
    const Eigen::Vector2d q(0.3, -1.2);
    EXPECT_NEAR(lagrangian_delta_det(mixed, q, Eigen::Vector2d(1, 1)), -12.0, 1e-12);
    EXPECT_EQ(lagrangian_delta_det(mixed, q, Eigen::Vector2d(0, 0)), 0.0);
    EXPECT_NEAR(lagrangian_delta_det(cubic_graph(1, 0, 0, 1), q, Eigen::Vector2d(1, 0)), 0.0, 1e-14);
}

TEST(DeltaDet, MixedCubicFormula)
{
    Rng rng(41);
    const auto mixed = cubic_graph(0, 1, 1, 0);
    for (int i = 0; i < 100; ++i) {
        const Eigen::Vector2d w = gaussian(rng, 2);
        EXPECT_NEAR(lagrangian_delta_det(mixed, gaussian(rng, 2), w), -4 * (w[0] * w[0] + w[0] * w[1] + w[1] * w[1]), 1e-12 * (1 + w.squaredNorm()));
    }
}

TEST(DeltaDet, NonzeroForPositiveDiscriminant)
{
    Rng rng(43);
    int tested = 0;
    while (tested < 5) {
        const CubicForm2 f{rng.normal(), rng.normal(), rng.normal(), rng.normal()};
        if (cubic_discriminant(f) <= 0.05) continue;
        ++tested;
        const GeneratingGraph g(f.polynomial());
        const Eigen::Vector2d q = gaussian(rng, 2);
        for (int i = 0; i < 10000; ++i) {
            const Eigen::Vector2d w = gaussian(rng, 2).normalized();
            EXPECT_GT(std::abs(lagrangian_delta_det(g, q, w)), 1e-10);
        }
    }
}

TEST(Conic, HyperbolaAndCircle)
{
    const ConicPair p{Eigen::Matrix2d::Identity(), Eigen::Vector2d(1, -1).asDiagonal()};
    const auto s = conic_intersections(p, 1, 0);
    ASSERT_EQ(s.count(), 4u);
    const double h = std::sqrt(0.5);
    for (const auto& w : s.points) {
        EXPECT_NEAR(std::abs(w[0]), h, 1e-14);
        EXPECT_NEAR(std::abs(w[1]), h, 1e-14);
    }
    EXPECT_EQ(osbk::test::conic_scan(p, 1, 0).size(), 4u);
}

TEST(Conic, MixedCubicPair)
{
    const ConicPair p = ConicPair::from_cubic(CubicForm2{0, 1, 1, 0});
    const auto s = conic_intersections(p, 1, 0);
    ASSERT_EQ(s.count(), 2u);
    for (const auto& w : s.points) {
        EXPECT_NEAR(w[0], 0.0, 1e-14);
        EXPECT_NEAR(std::abs(w[1]), 1.0, 1e-14);
    }
    const auto z = conic_intersections(p, 0, 0);
    ASSERT_EQ(z.count(), 1u);
    EXPECT_EQ(z.points[0].norm(), 0.0);
}

TEST(Conic, DegeneratePencil)
{
    const ConicPair p{Eigen::Matrix2d::Identity(), 2 * Eigen::Matrix2d::Identity()};
    try {
        conic_intersections(p, 1, 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DegeneratePencil);
    }
}

TEST(Conic, AgreesWithAngularScan)
{
    Rng rng(47);
    for (int trial = 0; trial < 200; ++trial) {
        const ConicPair p{random_sym(rng), random_sym(rng)};
        const double r1 = rng.normal(), r2 = rng.normal();
        const auto s = conic_intersections(p, r1, r2);
        const auto o = osbk::test::conic_scan(p, r1, r2);
        ASSERT_EQ(s.count(), o.size()) << "trial " << trial;
        for (const auto& w : s.points) {
            EXPECT_NEAR(osbk::test::quad(p.a1, w), r1, 1e-9 * (1 + std::abs(r1)));
            EXPECT_NEAR(osbk::test::quad(p.a2, w), r2, 1e-9 * (1 + std::abs(r2)));
            double best = INFINITY;
            for (const auto& v : o) best = std::min(best, (v - w).norm());
            EXPECT_LT(best, 1e-6 * std::max(1.0, w.norm()));
        }
    }
}

TEST(Discriminant, Examples)
{
    EXPECT_DOUBLE_EQ(cubic_discriminant({0, 1, 1, 0}), 1.0);
    EXPECT_DOUBLE_EQ(cubic_discriminant({1, 0, 0, 1}), -27.0);
    EXPECT_DOUBLE_EQ(cubic_discriminant({0, 0, 0, 0}), 0.0);
    EXPECT_DOUBLE_EQ(cubic_discriminant({1, 1, 0, 0}), 0.0);
}

TEST(Discriminant, MatchesRootProduct)
{
    // For a != 0, D = a^4 prod_{i<j} (z_i - z_j)^2 over the roots of a z^3 + b z^2 + c z + d.
    Rng rng(53);
    for (int i = 0; i < 100; ++i) {
        const double a = rng.uniform(0.5, 2.0), z1 = rng.normal(), z2 = rng.normal(), z3 = rng.normal();
        const double b = -a * (z1 + z2 + z3), c = a * (z1 * z2 + z1 * z3 + z2 * z3), d = -a * z1 * z2 * z3;
        const double expected = std::pow(a, 4) * std::pow((z1 - z2) * (z1 - z3) * (z2 - z3), 2);
        EXPECT_NEAR(cubic_discriminant({a, b, c, d}), expected, 1e-9 * (1 + std::pow(1 + std::abs(b) + std::abs(c) + std::abs(d), 4)));
    }
}

TEST(Classify, PositiveDiscriminantHasMultiplicityTwo)
{
    const auto r = classify_cubic_table({0, 1, 1, 0}, 300, 7);
    EXPECT_DOUBLE_EQ(r.discriminant, 1.0);
    EXPECT_EQ(r.cls, "multiplicity-2");
    ASSERT_EQ(r.histogram.size(), 1u);
    EXPECT_EQ(r.histogram.at(2), 300u);
}

TEST(Classify, NegativeDiscriminantHasMultiplicityZeroOrFour)
{
    const auto r = classify_cubic_table({1, 0, 0, 1}, 300, 7);
    EXPECT_DOUBLE_EQ(r.discriminant, -27.0);
    EXPECT_EQ(r.cls, "multiplicity-0-or-4");
    std::size_t total = 0;
    for (const auto& [k, v] : r.histogram) {
        EXPECT_TRUE(k == 0 || k == 4);
        total += v;
    }
    EXPECT_EQ(total, 300u);
    EXPECT_GT(r.histogram.count(0) + r.histogram.count(4), 1u);
}

TEST(Classify, ZeroDiscriminantIsRuled)
{
    const auto r = classify_cubic_table({1, 1, 0, 0}, 50, 7);
    EXPECT_EQ(r.cls, "ruled");
    ASSERT_TRUE(r.ruling.has_value());
    EXPECT_NEAR(std::abs((*r.ruling)[1]), 1.0, 1e-9);
}

TEST(Classify, RandomCubicsAreConsistentAndDeterministic)
{
    Rng rng(59);
    for (int i = 0; i < 6; ++i) {
        const CubicForm2 f{rng.normal(), rng.normal(), rng.normal(), rng.normal()};
        const auto a = classify_cubic_table(f, 100, 3, 1);
        const auto b = classify_cubic_table(f, 100, 3, 3);
        EXPECT_EQ(a.histogram, b.histogram);
        EXPECT_EQ(a.redraws, b.redraws);
        if (a.discriminant > 0) EXPECT_EQ(a.histogram.at(2), 100u);
    }
}

TEST(Ruled, Examples)
{
    const auto r = ruled_test({1, 1, 0, 0});
    ASSERT_TRUE(r.direction.has_value());
    EXPECT_NEAR(r.direction->x(), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(r.direction->y()), 1.0, 1e-12);
    EXPECT_TRUE(r.resultant_consistent);
    EXPECT_FALSE(ruled_test({0, 1, 1, 0}).direction.has_value());
    const auto s = ruled_test({1, 0, 0, 1});
    EXPECT_FALSE(s.direction.has_value());
    EXPECT_TRUE(s.resultant_consistent);
    EXPECT_NEAR(std::abs(s.resultant), 81.0, 1e-9);
}

TEST(Ruled, DirectionSpansLinesInTheTable)
{
    Rng rng(61);
    std::vector<CubicForm2> forms{{1, 1, 0, 0}, {0, 0, 1, 1}, {0, 1, 0, 0}};
    // Products l1^2 l2 of real linear forms are ruled along the kernel of l1.
    for (int i = 0; i < 5; ++i) {
        const double u = rng.normal(), v = rng.normal(), s = rng.normal(), t = rng.normal();
        // (u x + v y)^2 (s x + t y)
        forms.push_back({u * u * s, u * u * t + 2 * u * v * s, v * v * s + 2 * u * v * t, v * v * t});
    }
    for (const auto& f : forms) {
        const auto r = ruled_test(f);
        ASSERT_TRUE(r.direction.has_value());
        EXPECT_TRUE(r.resultant_consistent);
        const Eigen::Vector2d w = *r.direction;
        EXPECT_LT(f.gradient(w).norm(), 1e-9);
        const GeneratingGraph g(f.polynomial());
        for (int k = 0; k < 5; ++k) {
            const Eigen::Vector2d q = gaussian(rng, 2);
            const Eigen::Vector2d p0 = g.jet().gradient(q);
            const Eigen::Vector2d dp = g.jet().hessian(q) * w;
            for (double t = -10; t <= 10; t += 0.5)
                EXPECT_LT((g.jet().gradient(q + t * w) - (p0 + t * dp)).norm(), 1e-10 * (1 + q.squaredNorm() + t * t));
        }
    }
}

TEST(Ruled, ResultantIsMinusThreeD)
{
    Rng rng(67);
    for (int i = 0; i < 200; ++i) {
        const CubicForm2 f{rng.normal(), rng.normal(), rng.normal(), rng.normal()};
        const auto r = ruled_test(f);
        EXPECT_TRUE(r.resultant_consistent);
        EXPECT_NEAR(r.resultant, -3 * cubic_discriminant(f), 1e-9 * (1 + std::abs(r.resultant)));
        if (std::abs(cubic_discriminant(f)) > 1e-6) EXPECT_FALSE(r.direction.has_value());
    }
}

TEST(ZeroDivisor, Examples)
{
    const Eigen::Vector2d q(0.4, 0.9);
    const auto mixed = zero_divisor_test(cubic_graph(0, 1, 1, 0), q);
    EXPECT_NEAR(mixed.min_abs_det, 2.0, 1e-8);
    EXPECT_GT(mixed.min_singular, 0.5);

    const auto sc = zero_divisor_test(cubic_graph(1, 0, 0, 1), q);
    EXPECT_LT(sc.min_abs_det, 1e-10);
    EXPECT_LT(sc.min_singular, 1e-8);
    EXPECT_NEAR(std::abs(sc.witness[0] * sc.witness[1]), 0.0, 1e-8);

    Polynomial quad(2);
    quad.add_term({2, 0}, 1.0);
    quad.add_term({1, 1}, -3.0);
    const auto z = zero_divisor_test(GeneratingGraph(quad), q);
    EXPECT_EQ(z.min_singular, 0.0);
}

TEST(ZeroDivisor, HigherDimensionUsesSingularValues)
{
    Polynomial f(3);
    f.add_term({1, 1, 1}, 1.0);
    const auto r = zero_divisor_test(GeneratingGraph(f), Eigen::Vector3d(0.1, 0.2, 0.3), 2000);
    EXPECT_TRUE(std::isnan(r.min_abs_det));
    EXPECT_GE(r.min_singular, 0.0);
    EXPECT_NEAR(r.witness.norm(), 1.0, 1e-12);
}
