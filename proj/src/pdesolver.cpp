#include "nlaffine/pdesolver.hpp"

#include "nlaffine/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nlaffine {

namespace {

constexpr long kMaxSteps = 10'000'000;

struct NodeCoef {
    double x;
    double b_lo, b_hi;
    double a_lo, a_hi;
    double rate;  // reaction coefficient, x or 0
};

struct Policy {
    double beta = 0.0;
    double alpha = 0.0;
    friend bool operator==(const Policy&, const Policy&) = default;
};

/// Row of the frozen-policy operator: lower * v[j-1] + diag * v[j] + upper * v[j+1].
struct Row {
    double lower = 0.0, diag = 0.0, upper = 0.0;
};

double upwind(double beta, double dp, double dm) noexcept { return beta > 0.0 ? beta * dp : beta * dm; }

// Drift term beta -> upwind(beta) is piecewise linear with its kink at 0, so
// its extremum over [b_lo, b_hi] is at an endpoint or at 0.
Policy select(const NodeCoef& c, double dp, double dm, double d2, bool upper) noexcept {
    Policy p;
    p.beta = c.b_hi;
    double best = upwind(c.b_hi, dp, dm);
    auto consider = [&](double beta) {
        const double v = upwind(beta, dp, dm);
        if (upper ? v > best : v < best) {
            best = v;
            p.beta = beta;
        }
    };
    consider(c.b_lo);
    if (c.b_lo < 0.0 && c.b_hi > 0.0) consider(0.0);
    if (upper)
        p.alpha = d2 >= 0.0 ? c.a_hi : c.a_lo;
    else
        p.alpha = d2 > 0.0 ? c.a_lo : c.a_hi;
    return p;
}

class Operator {
public:
    Operator(std::vector<NodeCoef> nodes, double dx, bool upper, const Boundary& bc)
        : nodes_(std::move(nodes)), dx_(dx), upper_(upper), bc_(bc) {}

    [[nodiscard]] int size() const noexcept { return static_cast<int>(nodes_.size()); }
    [[nodiscard]] const NodeCoef& node(int j) const noexcept { return nodes_[j]; }
    [[nodiscard]] bool dirichlet() const noexcept { return bc_.kind == Boundary::Kind::Dirichlet; }

    void policies(const std::vector<double>& v, std::vector<Policy>& out) const {
        const int n = size();
        out.resize(n);
        for (int j = 1; j + 1 < n; ++j) {
            const double dp = (v[j + 1] - v[j]) / dx_;
            const double dm = (v[j] - v[j - 1]) / dx_;
            out[j] = select(nodes_[j], dp, dm, (dp - dm) / dx_, upper_);
        }
        // Extreme nodes: zero curvature, inner one-sided slope.
        const double d0 = (v[1] - v[0]) / dx_;
        const double dn = (v[n - 1] - v[n - 2]) / dx_;
        out[0] = select(nodes_[0], d0, d0, 0.0, upper_);
        out[n - 1] = select(nodes_[n - 1], dn, dn, 0.0, upper_);
    }

    [[nodiscard]] Row row(int j, const Policy& p) const noexcept {
        const int n = size();
        Row r;
        if (j == 0) {
            r.upper = p.beta / dx_;
            r.diag = -r.upper;
        } else if (j == n - 1) {
            r.lower = -p.beta / dx_;
            r.diag = -r.lower;
        } else {
            const double diff = 0.5 * p.alpha / (dx_ * dx_);
            r.lower = diff + std::max(-p.beta, 0.0) / dx_;
            r.upper = diff + std::max(p.beta, 0.0) / dx_;
            r.diag = -(r.lower + r.upper);
        }
        return r;
    }

    [[nodiscard]] double left_value() const noexcept { return bc_.left; }
    [[nodiscard]] double right_value() const noexcept { return bc_.right; }

private:
    std::vector<NodeCoef> nodes_;
    double dx_;
    bool upper_;
    Boundary bc_;
};

// Thomas algorithm; sub/sup are the off-diagonals of rows 1..n-1 / 0..n-2.
void solve_tridiagonal(std::vector<double>& sub, std::vector<double>& diag, std::vector<double>& sup,
                       std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        if (diag[i - 1] == 0.0) throw NumericalError("singular tridiagonal system in policy step");
        const double m = sub[i] / diag[i - 1];
        diag[i] -= m * sup[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    if (diag[n - 1] == 0.0) throw NumericalError("singular tridiagonal system in policy step");
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
}

// Row times v in difference form, so constants give exactly zero.
double apply(const Row& r, const std::vector<double>& v, int j) {
    double h = 0.0;
    if (r.lower != 0.0) h += r.lower * (v[j - 1] - v[j]);
    if (r.upper != 0.0) h += r.upper * (v[j + 1] - v[j]);
    return h;
}

void explicit_step(const Operator& op, const std::vector<double>& next, std::vector<double>& out, double dt,
                   std::vector<Policy>& pol) {
    const int n = op.size();
    op.policies(next, pol);
    out.resize(n);
    for (int j = 0; j < n; ++j) {
        const double h = apply(op.row(j, pol[j]), next, j);
        out[j] = (next[j] + dt * h) / (1.0 + dt * op.node(j).rate);
    }
    if (op.dirichlet()) {
        out[0] = op.left_value();
        out[n - 1] = op.right_value();
    }
}

int implicit_step(const Operator& op, const std::vector<double>& next, std::vector<double>& out, double dt,
                  const SolveConfig& cfg, std::vector<Policy>& pol) {
    const int n = op.size();
    std::vector<double> sub(n), diag(n), sup(n), rhs(n);
    std::vector<Policy> fresh;
    out = next;
    op.policies(out, pol);
    for (int it = 1; it <= cfg.policy_max_iter; ++it) {
        for (int j = 0; j < n; ++j) {
            // Solved for the increment over next, which keeps constants exact.
            const Row r = op.row(j, pol[j]);
            const double rate = op.node(j).rate;
            sub[j] = -dt * r.lower;
            diag[j] = 1.0 + dt * rate - dt * r.diag;
            sup[j] = -dt * r.upper;
            rhs[j] = dt * (apply(r, next, j) - rate * next[j]);
        }
        if (op.dirichlet()) {
            sub[0] = sup[0] = 0.0;
            diag[0] = 1.0;
            rhs[0] = op.left_value() - next[0];
            sub[n - 1] = sup[n - 1] = 0.0;
            diag[n - 1] = 1.0;
            rhs[n - 1] = op.right_value() - next[n - 1];
        }
        solve_tridiagonal(sub, diag, sup, rhs);

        double change = 0.0;
        for (int j = 0; j < n; ++j) {
            rhs[j] += next[j];
            change = std::max(change, std::abs(rhs[j] - out[j]));
        }
        out.swap(rhs);
        op.policies(out, fresh);
        if (fresh == pol || change < cfg.policy_tol) return it;
        pol.swap(fresh);
    }
    throw PolicyDivergence("policy iteration did not settle within " + std::to_string(cfg.policy_max_iter) +
                           " iterations");
}

}  // namespace

void Grid::check(StateDomain domain) const {
    if (n_x < 3) throw ConfigError("grid needs n_x >= 3");
    if (n_t < 1) throw ConfigError("grid needs n_t >= 1");
    if (!(x_min < x_max) || !std::isfinite(x_min) || !std::isfinite(x_max))
        throw ConfigError("grid needs finite x_min < x_max");
    if (!(T > 0.0) || !std::isfinite(T)) throw ConfigError("grid horizon must be positive");
    if (domain == StateDomain::PositiveHalfLine && x_min < 0.0)
        throw ConfigError("grid on R+ needs x_min >= 0");
}

Grid snap_to_zero(Grid g) {
    if (!(g.x_min < 0.0 && g.x_max > 0.0)) return g;
    const double dx = g.dx();
    const double j0 = std::round(-g.x_min / dx);
    g.x_min = -j0 * dx;
    g.x_max = g.x_min + (g.n_x - 1) * dx;
    return g;
}

Grid default_grid(const ModelSpec& model, double probe_lo, double probe_hi, double T, int n_x, int n_t) {
    if (probe_lo > probe_hi) std::swap(probe_lo, probe_hi);
    const ParameterBox& box = model.box;
    auto max_a = [&](double lo, double hi) {
        return std::max(diffusion_interval(box, lo).hi, diffusion_interval(box, hi).hi);
    };
    double lo = probe_lo, hi = probe_hi;
    for (int pass = 0; pass < 2; ++pass) {
        const double sigma = std::sqrt(T * max_a(lo, hi));
        // Only drift pointing out of the range moves mass towards the edges.
        const double out_lo = std::max(-drift_interval(box, lo).lo, 0.0) * T;
        const double out_hi = std::max(drift_interval(box, hi).hi, 0.0) * T;
        const double w = std::max(6.0 * sigma, 0.25);
        lo = probe_lo - w - out_lo;
        hi = probe_hi + w + out_hi;
    }
    if (model.domain == StateDomain::PositiveHalfLine) lo = 1e-4 * hi;
    Grid g{lo, hi, n_x, T, n_t};
    return snap_to_zero(g);
}

void SolveConfig::check() const {
    if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) throw ConfigError("cfl_safety must lie in (0, 1]");
    if (!(policy_tol > 0.0)) throw ConfigError("policy_tol must be positive");
    if (policy_max_iter < 1) throw ConfigError("policy_max_iter must be >= 1");
    if (max_dt < 0.0) throw ConfigError("max_dt must be >= 0");
}

ValueSurface::ValueSurface(Grid grid, std::vector<double> values, SolveDiagnostics diag)
    : grid_(grid), values_(std::move(values)), diag_(std::move(diag)) {}

std::vector<double> ValueSurface::row(int k) const {
    const auto first = values_.begin() + static_cast<std::ptrdiff_t>(k) * grid_.n_x;
    return {first, first + grid_.n_x};
}

double ValueSurface::value(double t, double x) const {
    const Grid& g = grid_;
    const double eps_x = 1e-12 * std::max(1.0, std::abs(g.x_max - g.x_min));
    const double eps_t = 1e-12 * std::max(1.0, g.T);
    if (t < -eps_t || t > g.T + eps_t || x < g.x_min - eps_x || x > g.x_max + eps_x)
        throw OutOfGrid("point (t=" + std::to_string(t) + ", x=" + std::to_string(x) + ") outside grid [0, " +
                        std::to_string(g.T) + "] x [" + std::to_string(g.x_min) + ", " +
                        std::to_string(g.x_max) + "]");
    const double sx = std::clamp((x - g.x_min) / g.dx(), 0.0, static_cast<double>(g.n_x - 1));
    const double st = std::clamp(t / g.dt(), 0.0, static_cast<double>(g.n_t));
    const int j = std::min(static_cast<int>(sx), g.n_x - 2);
    const int k = std::min(static_cast<int>(st), g.n_t - 1);
    const double wx = sx - j;
    const double wt = st - k;
    const double v0 = (1.0 - wx) * at(k, j) + wx * at(k, j + 1);
    const double v1 = (1.0 - wx) * at(k + 1, j) + wx * at(k + 1, j + 1);
    return (1.0 - wt) * v0 + wt * v1;
}

ValueSurface solve(const ModelSpec& model, const PayoffSpec& payoff, const Grid& grid, const SolveConfig& cfg) {
    grid.check(model.domain);
    cfg.check();

    const int n = grid.n_x;
    const double dx = grid.dx();
    const bool discount = cfg.discounting == Discounting::StateRate;

    std::vector<NodeCoef> nodes(n);
    double dt_limit = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
        const double x = grid.x(j);
        const Interval b = drift_interval(model.box, x);
        const Interval a = diffusion_interval(model.box, x);
        nodes[j] = {x, b.lo, b.hi, a.lo, a.hi, discount ? x : 0.0};
        const double denom = a.hi + dx * std::max(std::abs(b.lo), std::abs(b.hi));
        if (denom > 0.0) dt_limit = std::min(dt_limit, dx * dx / denom);
        // 1 + dt x must stay positive in the reaction update.
        if (discount && x < 0.0) dt_limit = std::min(dt_limit, 0.5 / -x);
    }

    SolveDiagnostics diag;
    diag.scheme = cfg.scheme;
    if (!model.uniqueness_guaranteed()) diag.warnings.emplace_back("no uniqueness guarantee (forced model)");

    const double dt_level = grid.dt();
    long m = 1;
    if (cfg.max_dt > 0.0) m = std::max<long>(m, static_cast<long>(std::ceil(dt_level / cfg.max_dt - 1e-12)));
    if (cfg.scheme == Scheme::ExplicitMonotone && std::isfinite(dt_limit)) {
        const double allowed = cfg.cfl_safety * dt_limit;
        m = std::max<long>(m, static_cast<long>(std::ceil(dt_level / allowed - 1e-12)));
    }
    if (m * static_cast<long>(grid.n_t) > kMaxSteps)
        throw CflViolation("explicit scheme needs " + std::to_string(m * static_cast<long>(grid.n_t)) +
                           " time steps (limit 1e7); coarsen n_x or use the implicit scheme");
    const double dt = dt_level / static_cast<double>(m);
    diag.substeps = m;
    diag.dt_effective = dt;
    diag.cfl_ratio = std::isfinite(dt_limit) ? dt / dt_limit : 0.0;

    const Operator op(std::move(nodes), dx, cfg.direction == Direction::Upper, cfg.boundary);

    std::vector<double> values(static_cast<std::size_t>(grid.n_t + 1) * n);
    std::vector<double> cur(n), nxt(n);
    for (int j = 0; j < n; ++j) cur[j] = payoff(grid.x(j));
    std::copy(cur.begin(), cur.end(), values.begin() + static_cast<std::ptrdiff_t>(grid.n_t) * n);

    std::vector<Policy> pol;
    for (int k = grid.n_t - 1; k >= 0; --k) {
        for (long s = 0; s < m; ++s) {
            if (cfg.scheme == Scheme::ExplicitMonotone) {
                explicit_step(op, cur, nxt, dt, pol);
            } else {
                diag.policy_iterations = std::max(diag.policy_iterations, implicit_step(op, cur, nxt, dt, cfg, pol));
            }
            cur.swap(nxt);
        }
        for (int j = 0; j < n; ++j) {
            if (!std::isfinite(cur[j]))
                throw NumericalError("non-finite value at t=" + std::to_string(grid.t(k)) +
                                     ", x=" + std::to_string(grid.x(j)));
        }
        std::copy(cur.begin(), cur.end(), values.begin() + static_cast<std::ptrdiff_t>(k) * n);
    }

    for (std::size_t i = 0; i < values.size(); ++i) {
        const double x = grid.x(static_cast<int>(i % n));
        diag.growth_ratio = std::max(diag.growth_ratio, std::abs(values[i]) / (1.0 + std::abs(x)));
    }
    return {grid, std::move(values), std::move(diag)};
}

std::string to_string(Scheme s) {
    return s == Scheme::ExplicitMonotone ? "explicit" : "implicit";
}

Scheme parse_scheme(const std::string& s) {
    if (s == "explicit") return Scheme::ExplicitMonotone;
    if (s == "implicit") return Scheme::ImplicitPolicyIteration;
    throw ConfigError("unknown scheme '" + s + "' (expected explicit or implicit)");
}

}  // namespace nlaffine
