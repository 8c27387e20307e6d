#pragma once

#include "nlaffine/params.hpp"
#include "nlaffine/payoff.hpp"

#include <string>
#include <vector>

namespace nlaffine {

/// Uniform space-time grid. n_t counts stored time levels after t = 0.
struct Grid {
    double x_min = -1.0;
    double x_max = 1.0;
    int n_x = 401;
    double T = 1.0;
    int n_t = 200;

    [[nodiscard]] double dx() const noexcept { return (x_max - x_min) / (n_x - 1); }
    [[nodiscard]] double dt() const noexcept { return T / n_t; }
    [[nodiscard]] double x(int j) const noexcept { return x_min + j * dx(); }
    [[nodiscard]] double t(int k) const noexcept { return k == n_t ? T : k * dt(); }
    /// Throws ConfigError when the grid is unusable on the domain.
    void check(StateDomain domain) const;
};

/// Shifts the grid by at most dx/2 so that x = 0 is a node whenever it is covered.
[[nodiscard]] Grid snap_to_zero(Grid g);

/// Probe-centred truncation: [lo - w, hi + w] with w = 6 sqrt(T max a) plus the
/// largest drift displacement, iterated once. On R+ the lower end is
/// 1e-4 * x_max. The result is snapped.
[[nodiscard]] Grid default_grid(const ModelSpec& model, double probe_lo, double probe_hi, double T, int n_x,
                                int n_t);

enum class Scheme { ExplicitMonotone, ImplicitPolicyIteration };
enum class Discounting { None, StateRate };

struct Boundary {
    enum class Kind { LinearExtrapolation, Dirichlet };
    Kind kind = Kind::LinearExtrapolation;
    double left = 0.0;
    double right = 0.0;

    static Boundary linear() { return {}; }
    static Boundary dirichlet(double left, double right) { return {Kind::Dirichlet, left, right}; }
};

struct SolveConfig {
    Scheme scheme = Scheme::ExplicitMonotone;
    Direction direction = Direction::Upper;
    Discounting discounting = Discounting::None;
    Boundary boundary;
    double cfl_safety = 0.9;
    double policy_tol = 1e-10;
    int policy_max_iter = 50;
    /// Optional cap on the internal step (0 = none); lets two solves share dt.
    double max_dt = 0.0;

    void check() const;
};

struct SolveDiagnostics {
    Scheme scheme = Scheme::ExplicitMonotone;
    double dt_effective = 0.0;
    /// dt_effective over the explicit stability limit (without safety factor).
    double cfl_ratio = 0.0;
    /// Largest number of policy iterations used in a single step.
    int policy_iterations = 0;
    long substeps = 1;
    /// sup |v| / (1 + |x|) over the surface (linear-growth class check).
    double growth_ratio = 0.0;
    std::vector<std::string> warnings;
};

/// v(t, x) on the grid, stored by forward time level k = 0..n_t. Row n_t is the payoff.
class ValueSurface {
public:
    ValueSurface(Grid grid, std::vector<double> values, SolveDiagnostics diag);

    [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
    [[nodiscard]] const SolveDiagnostics& diagnostics() const noexcept { return diag_; }
    [[nodiscard]] double at(int k, int j) const { return values_[static_cast<std::size_t>(k) * grid_.n_x + j]; }
    [[nodiscard]] std::vector<double> row(int k) const;

    /// Bilinear interpolation; throws OutOfGrid.
    [[nodiscard]] double value(double t, double x) const;
    /// Term-structure view: time to maturity tau = T - t.
    [[nodiscard]] double term_structure(double tau, double x) const { return value(grid_.T - tau, x); }

private:
    Grid grid_;
    std::vector<double> values_;
    SolveDiagnostics diag_;
};

/// Backward march of -v_t - G(x, v_x, v_xx) (+ x v when discounting) = 0,
/// v(T, .) = payoff. Lower swaps the sup for the inf.
[[nodiscard]] ValueSurface solve(const ModelSpec& model, const PayoffSpec& payoff, const Grid& grid,
                                 const SolveConfig& cfg);

[[nodiscard]] inline double read_value(const ValueSurface& s, double t, double x) { return s.value(t, x); }

[[nodiscard]] std::string to_string(Scheme s);
[[nodiscard]] Scheme parse_scheme(const std::string& s);

}  // namespace nlaffine
