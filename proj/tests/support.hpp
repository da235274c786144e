#pragma once

#include "osbk/random.hpp"
#include "osbk/symplectic.hpp"

#include "osbk/conic.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <vector>

namespace osbk::test {

inline PhaseVector gaussian(Rng& rng, Eigen::Index n, double s = 1.0)
{
    PhaseVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = s * rng.normal();
    return v;
}

/// Omega matrix built entry by entry, independent of the library's helper.
inline Matrix omega_reference(Eigen::Index d)
{
    Matrix m = Matrix::Zero(2 * d, 2 * d);
    for (Eigen::Index i = 0; i < d; ++i) {
        m(2 * i, 2 * i + 1) = 1.0;
        m(2 * i + 1, 2 * i) = -1.0;
    }
    return m;
}

inline double quad(const Eigen::Matrix2d& a, const Eigen::Vector2d& w) { return w.dot(a * w); }

/// Independent solver for A1 w.w = r1, A2 w.w = r2 with r != 0: scan the
/// direction angle for sign changes of r2 Q1 - r1 Q2, bisect, then scale
/// the unit direction onto the conic when the radius is real.
inline std::vector<Eigen::Vector2d> conic_scan(const ConicPair& p, double r1, double r2, int samples = 160000)
{
    auto dir = [](double th) { return Eigen::Vector2d(std::cos(th), std::sin(th)); };
    auto h = [&](double th) { return r2 * quad(p.a1, dir(th)) - r1 * quad(p.a2, dir(th)); };
    std::vector<Eigen::Vector2d> out;
    for (int i = 0; i < samples; ++i) {
        double a = 2 * std::numbers::pi * i / samples, b = 2 * std::numbers::pi * (i + 1) / samples;
        double fa = h(a), fb = h(b);
        if (fa == 0.0) fb = fa;
        if ((fa < 0) == (fb < 0) && fa != 0.0) continue;
        for (int it = 0; it < 80; ++it) {
            const double m = 0.5 * (a + b);
            if ((h(m) < 0) == (fa < 0)) { a = m; fa = h(m); } else b = m;
        }
        const Eigen::Vector2d d = dir(0.5 * (a + b));
        const double q1 = quad(p.a1, d), q2 = quad(p.a2, d);
        const double rho2 = std::abs(q1) > std::abs(q2) ? r1 / q1 : r2 / q2;
        if (rho2 > 0) out.push_back(std::sqrt(rho2) * d);
    }
    return out;
}

}  // namespace osbk::test
