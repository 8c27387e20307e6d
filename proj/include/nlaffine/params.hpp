#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace nlaffine {

enum class Direction { Upper, Lower };

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    [[nodiscard]] bool contains(double v) const noexcept { return lo <= v && v <= hi; }
    [[nodiscard]] double width() const noexcept { return hi - lo; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Compact uncertainty set for (b0, b1, a0, a1). Intervals are closed.
struct ParameterBox {
    double b0_lo = 0.0, b0_hi = 0.0;
    double b1_lo = 0.0, b1_hi = 0.0;
    double a0_lo = 0.0, a0_hi = 0.0;
    double a1_lo = 0.0, a1_hi = 0.0;

    /// Single-point box for a classical affine model.
    static ParameterBox point(double b0, double b1, double a0, double a1) {
        return {b0, b0, b1, b1, a0, a0, a1, a1};
    }

    /// Throws ConfigError if an interval is reversed, negative on the a-side,
    /// or not finite.
    void check() const;

    /// Returns a copy with every reversed interval swapped; one warning per swap.
    [[nodiscard]] ParameterBox sorted(std::vector<std::string>& warnings) const;

    [[nodiscard]] bool is_degenerate() const noexcept {
        return b0_lo == b0_hi && b1_lo == b1_hi && a0_lo == a0_hi && a1_lo == a1_hi;
    }

    /// Componentwise interval inclusion: *this ⊆ other.
    [[nodiscard]] bool subset_of(const ParameterBox& other) const noexcept;

    /// Smallest box containing both.
    [[nodiscard]] ParameterBox hull(const ParameterBox& other) const noexcept;

    friend bool operator==(const ParameterBox&, const ParameterBox&) = default;
};

enum class StateDomain { RealLine, PositiveHalfLine };

[[nodiscard]] std::string_view to_string(StateDomain d) noexcept;
/// Parses "R" or "R+"; throws ConfigError otherwise.
[[nodiscard]] StateDomain parse_domain(std::string_view s);

enum class UniquenessRegime {
    Lipschitz,   // state space R with a0_lo > 0
    Degenerate,  // state space R>0, a0 == 0 and b0_lo >= a1_hi/2 > 0
    None,
};

[[nodiscard]] std::string_view to_string(UniquenessRegime r) noexcept;

struct AdmissibilityReport {
    bool proper = false;
    bool feller_ok = false;
    UniquenessRegime regime = UniquenessRegime::None;
    std::vector<std::string> reasons;

    [[nodiscard]] bool accepted() const noexcept { return regime != UniquenessRegime::None; }
};

[[nodiscard]] AdmissibilityReport validate(const ParameterBox& box, StateDomain domain);

struct ModelSpec {
    ParameterBox box;
    StateDomain domain = StateDomain::RealLine;
    AdmissibilityReport admissibility;
    /// Set when the model was accepted only because of an explicit override.
    bool forced = false;

    [[nodiscard]] bool uniqueness_guaranteed() const noexcept { return admissibility.accepted(); }
};

/// Validates and bundles. Throws AdmissibilityError when no uniqueness regime
/// applies and force is false.
[[nodiscard]] ModelSpec make_model(const ParameterBox& box, StateDomain domain, bool force = false);

/// One parameter vector inside the box. regime_x0 is the state whose sign
/// selected b1 (only meaningful for worst-case corners).
struct CornerParams {
    double b0 = 0.0, b1 = 0.0, a0 = 0.0, a1 = 0.0;
    double regime_x0 = 0.0;

    [[nodiscard]] double drift(double x) const noexcept { return b0 + b1 * x; }
    [[nodiscard]] double diffusion(double x) const noexcept {
        return a0 + a1 * (x > 0.0 ? x : 0.0);
    }
    [[nodiscard]] bool inside(const ParameterBox& box) const noexcept;
};

[[nodiscard]] Interval drift_interval(const ParameterBox& box, double x) noexcept;
[[nodiscard]] Interval diffusion_interval(const ParameterBox& box, double x) noexcept;

/// Corner law attaining the bound for increasing convex payoffs started at x0:
/// Upper -> (a0_hi, a1_hi, b0_hi, b1_lo if x0<0 else b1_hi), Lower mirrored.
/// Only a valid worst case while the slope choice stays frozen, i.e. in the
/// fixed-b1 Vasicek and positive-CIR regimes.
[[nodiscard]] CornerParams worst_case_corner(const ParameterBox& box, double x0, Direction dir) noexcept;

struct TransformBounds {
    Interval a;
    Interval b;
};

/// Characteristic bounds of F(X) given f1 = F'(x), f2 = F''(x).
[[nodiscard]] TransformBounds transform_bounds(const ParameterBox& box, double x, double f1, double f2) noexcept;

}  // namespace nlaffine
