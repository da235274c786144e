#pragma once

namespace osbk {

/// Numerical thresholds shared by every module. The CLI can override each
/// field from the "tolerances" block of a run config.
struct Tolerances {
    /// absolute tolerance for geometric predicates, multiplied by input scale
    double geometric = 1e-10;
    /// correspondence residual a candidate or orbit must meet
    double residual = 1e-8;
    /// merge radius for roots and critical points in parameter space
    double dedup = 1e-6;
    /// consecutive-midpoint distance below which an orbit backtracks
    double degeneracy = 1e-9;
    /// gradient norm an accepted critical point must meet
    double gradient = 1e-7;
};

inline constexpr Tolerances default_tolerances{};

}  // namespace osbk
