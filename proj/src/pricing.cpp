#include "nlaffine/pricing.hpp"

#include "nlaffine/errors.hpp"
#include "nlaffine/generator.hpp"
#include "nlaffine/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <future>

namespace nlaffine {

namespace {

constexpr const char* kProven = "sup/inf over the parameter box";
constexpr const char* kCornerProven = "corner law attains the bound";
constexpr const char* kFeasibleUpper = "feasible-law lower bound for the upper price";
constexpr const char* kFeasibleLower = "feasible-law upper bound for the lower price";

Direction flip(Direction d) { return d == Direction::Upper ? Direction::Lower : Direction::Upper; }

void check_state(const ModelSpec& model, double x0) {
    if (!std::isfinite(x0)) throw ConfigError("x0 must be finite");
    if (model.domain == StateDomain::PositiveHalfLine && !(x0 > 0.0))
        throw ConfigError("x0 = " + std::to_string(x0) + " is outside the state space R+");
}

void check_horizon(double T) {
    if (!(T >= 0.0) || !std::isfinite(T)) throw ConfigError("maturity must be finite and >= 0");
}

const payoff_kind::Exponential* as_exponential(const PayoffSpec& payoff) {
    return std::get_if<payoff_kind::Exponential>(&payoff.kind());
}

double riccati_side(const ModelSpec& model, const PayoffSpec& payoff, double x0, double T, Direction side,
                    std::optional<CornerParams>& corner) {
    const auto* e = as_exponential(payoff);
    if (e == nullptr) throw RegimeError("the Riccati path only prices exponential payoffs; use PDE or MC");
    if (payoff.scale() == 0.0) return payoff.shift();
    const Direction d = payoff.scale() > 0.0 ? side : flip(side);
    corner = mgf_corner(model, x0, e->u, d);
    return payoff.scale() * mgf_bound(model, x0, e->u, T, d) + payoff.shift();
}

/// Sign pattern (f', f'') used to pick the simulated corner.
std::pair<double, double> payoff_signs(const PayoffSpec& payoff) {
    if (const auto* e = as_exponential(payoff)) {
        const double s = payoff.scale() >= 0.0 ? 1.0 : -1.0;
        return {e->u >= 0.0 ? s : -s, s};
    }
    if (payoff.shape() == PayoffShape::DecreasingConcave) return {-1.0, -1.0};
    return {1.0, 1.0};
}

bool corner_law_proven(const ModelSpec& model, const PayoffSpec& payoff, double x0) {
    if (riccati_regime(model, x0) == RiccatiRegime::None) return false;
    return payoff.shape() != PayoffShape::Neither || as_exponential(payoff) != nullptr;
}

Grid pricing_grid(const ModelSpec& model, double lo, double hi, double T, const PricingOptions& opts) {
    if (opts.x_min.has_value() != opts.x_max.has_value())
        throw ConfigError("grid x_min and x_max must be given together");
    if (opts.x_min) {
        Grid g = snap_to_zero(Grid{*opts.x_min, *opts.x_max, opts.n_x, T, opts.n_t});
        if (lo < g.x_min || hi > g.x_max) throw ConfigError("start points fall outside the configured grid");
        return g;
    }
    return default_grid(model, lo, hi, T, opts.n_x, opts.n_t);
}

Grid widened(const Grid& g, StateDomain domain) {
    Grid w = g;
    w.n_x = static_cast<int>(std::lround((g.n_x - 1) * 1.5)) + 1;
    if (domain == StateDomain::PositiveHalfLine) {
        w.x_max = g.x_min + 1.5 * (g.x_max - g.x_min);
        w.x_min = 1e-4 * w.x_max;
    } else {
        const double c = 0.5 * (g.x_min + g.x_max);
        const double half = 0.75 * (g.x_max - g.x_min);
        w.x_min = c - half;
        w.x_max = c + half;
    }
    return snap_to_zero(w);
}

struct SurfacePair {
    ValueSurface upper;
    ValueSurface lower;
};

SurfacePair solve_pair(const ModelSpec& model, const PayoffSpec& payoff, const Grid& grid, Scheme scheme,
                       Discounting discounting) {
    SolveConfig up;
    up.scheme = scheme;
    up.discounting = discounting;
    SolveConfig lo = up;
    lo.direction = Direction::Lower;
    if (thread_budget() > 1) {
        auto pending = std::async(std::launch::async, [&] { return solve(model, payoff, grid, lo); });
        ValueSurface u = solve(model, payoff, grid, up);
        return {std::move(u), pending.get()};
    }
    ValueSurface u = solve(model, payoff, grid, up);
    return {std::move(u), solve(model, payoff, grid, lo)};
}

void append_warnings(std::vector<std::string>& out, const std::vector<std::string>& in) {
    for (const auto& w : in)
        if (std::find(out.begin(), out.end(), w) == out.end()) out.push_back(w);
}

void price_pde(const ModelSpec& model, const PayoffSpec& payoff, double T, const PricingOptions& opts,
               std::vector<PricingResult*>& targets) {
    if (targets.empty()) return;
    double lo = targets.front()->x0, hi = lo;
    for (const auto* r : targets) {
        lo = std::min(lo, r->x0);
        hi = std::max(hi, r->x0);
    }
    Grid grid = pricing_grid(model, lo, hi, T, opts);
    SurfacePair s = solve_pair(model, payoff, grid, opts.scheme, Discounting::None);
    std::vector<std::string> warnings;

    if (as_exponential(payoff) != nullptr && opts.widen_exponential && !opts.x_min) {
        const Grid wide = widened(grid, model.domain);
        SurfacePair sw = solve_pair(model, payoff, wide, opts.scheme, Discounting::None);
        double worst = 0.0;
        for (const auto* r : targets) {
            const double a = s.upper.value(0.0, r->x0);
            const double b = sw.upper.value(0.0, r->x0);
            worst = std::max(worst, std::abs(b - a) / std::max(std::abs(b), 1e-300));
        }
        if (worst >= 1e-3)
            warnings.push_back("truncation still moves the exponential price by " + std::to_string(100.0 * worst) +
                               "% after one widening round");
        grid = wide;
        s = std::move(sw);
    }

    append_warnings(warnings, s.upper.diagnostics().warnings);
    for (auto* r : targets) {
        r->upper = s.upper.value(0.0, r->x0);
        r->lower = s.lower.value(0.0, r->x0);
        r->method_upper = r->method_lower = Method::PDE;
        auto& d = r->diagnostics;
        d.grid = grid;
        d.pde_upper = s.upper.diagnostics();
        d.pde_lower = s.lower.diagnostics();
        d.label_upper = d.label_lower = kProven;
        append_warnings(d.warnings, warnings);
    }
}

void price_riccati(const ModelSpec& model, const PayoffSpec& payoff, double T, PricingResult& r) {
    auto& d = r.diagnostics;
    r.upper = riccati_side(model, payoff, r.x0, T, Direction::Upper, d.corner_upper);
    r.lower = riccati_side(model, payoff, r.x0, T, Direction::Lower, d.corner_lower);
    r.method_upper = r.method_lower = Method::Riccati;
    d.label_upper = d.label_lower = kCornerProven;
}

void price_mc(const ModelSpec& model, const PayoffSpec& payoff, double T, const PricingOptions& opts,
              PricingResult& r) {
    auto& d = r.diagnostics;
    const auto [p, q] = payoff_signs(payoff);
    const bool proven = corner_law_proven(model, payoff, r.x0);
    for (Direction side : {Direction::Upper, Direction::Lower}) {
        const CornerParams c = extremal_theta(model.box, r.x0, p, q, side);
        const SampleSet samples = simulate_terminal(c, r.x0, T, opts.sim);
        const McEstimate est = mc_expectation(samples, payoff, false);
        append_warnings(d.warnings, samples.warnings);
        if (side == Direction::Upper) {
            r.upper = est.mean;
            d.mc_upper = est;
            d.corner_upper = c;
            d.label_upper = proven ? kCornerProven : kFeasibleUpper;
        } else {
            r.lower = est.mean;
            d.mc_lower = est;
            d.corner_lower = c;
            d.label_lower = proven ? kCornerProven : kFeasibleLower;
        }
    }
    r.method_upper = r.method_lower = Method::MC;
    if (!proven) d.warnings.emplace_back("corner-law Monte Carlo outside a proven regime");
}

}  // namespace

std::string to_string(Method m) {
    switch (m) {
    case Method::Auto: return "auto";
    case Method::PDE: return "pde";
    case Method::Riccati: return "riccati";
    case Method::MC: break;
    }
    return "mc";
}

Method parse_method(const std::string& s) {
    if (s == "auto") return Method::Auto;
    if (s == "pde") return Method::PDE;
    if (s == "riccati") return Method::Riccati;
    if (s == "mc") return Method::MC;
    throw ConfigError("unknown method '" + s + "' (expected auto, pde, riccati or mc)");
}

bool riccati_applicable(const ModelSpec& model, const PayoffSpec& payoff, double x0) {
    const auto* e = as_exponential(payoff);
    if (e == nullptr || riccati_regime(model, x0) == RiccatiRegime::None) return false;
    return payoff.scale() == 0.0 || e->u >= 0.0;
}

std::vector<PricingResult> price_curve(const ModelSpec& model, const PayoffSpec& payoff,
                                       const std::vector<double>& x0s, double T, Method method,
                                       const PricingOptions& opts) {
    check_horizon(T);
    std::vector<PricingResult> out(x0s.size());
    for (std::size_t i = 0; i < x0s.size(); ++i) {
        check_state(model, x0s[i]);
        out[i].x0 = x0s[i];
        out[i].T = T;
        if (model.forced) out[i].diagnostics.warnings.emplace_back("no uniqueness guarantee (forced model)");
    }

    if (T == 0.0) {
        for (auto& r : out) {
            r.upper = r.lower = payoff(r.x0);
            r.method_upper = r.method_lower = method == Method::Auto ? Method::PDE : method;
            r.diagnostics.label_upper = r.diagnostics.label_lower = "terminal payoff";
        }
        return out;
    }

    std::vector<PricingResult*> pde;
    for (auto& r : out) {
        Method m = method;
        if (m == Method::Auto) m = riccati_applicable(model, payoff, r.x0) ? Method::Riccati : Method::PDE;
        switch (m) {
        case Method::Riccati: price_riccati(model, payoff, T, r); break;
        case Method::MC: price_mc(model, payoff, T, opts, r); break;
        default: pde.push_back(&r); break;
        }
    }
    price_pde(model, payoff, T, opts, pde);

    for (auto& r : out) r.model_risk = r.upper - r.lower;
    return out;
}

PricingResult price(const ModelSpec& model, const PayoffSpec& payoff, double x0, double T, Method method,
                    const PricingOptions& opts) {
    return price_curve(model, payoff, {x0}, T, method, opts).front();
}

double model_risk(const ModelSpec& model, const PayoffSpec& payoff, double x0, double T, Method method,
                  const PricingOptions& opts) {
    return price(model, payoff, x0, T, method, opts).model_risk;
}

std::vector<BondQuote> bond_curve(const ModelSpec& model, double x0, const std::vector<double>& maturities,
                                  Method method, const PricingOptions& opts) {
    check_state(model, x0);
    double t_max = 0.0;
    for (double t : maturities) {
        check_horizon(t);
        t_max = std::max(t_max, t);
    }
    if (method == Method::Auto)
        method = riccati_regime(model, x0) != RiccatiRegime::None ? Method::Riccati : Method::PDE;

    std::vector<BondQuote> out;
    out.reserve(maturities.size());

    if (method == Method::Riccati) {
        for (double t : maturities)
            out.push_back({t, bond_bound(model, x0, t, Direction::Upper), bond_bound(model, x0, t, Direction::Lower),
                           Method::Riccati});
        return out;
    }

    if (method == Method::MC) {
        SimConfig cfg = opts.sim;
        cfg.record_discount = true;
        const PayoffSpec one = PayoffSpec::constant(1.0);
        for (double t : maturities) {
            BondQuote q{t, 1.0, 1.0, Method::MC};
            if (t > 0.0) {
                const CornerParams cu = extremal_theta(model.box, x0, -1.0, 1.0, Direction::Upper);
                const CornerParams cl = extremal_theta(model.box, x0, -1.0, 1.0, Direction::Lower);
                q.upper = mc_expectation(simulate_terminal(cu, x0, t, cfg), one, true).mean;
                q.lower = mc_expectation(simulate_terminal(cl, x0, t, cfg), one, true).mean;
            }
            out.push_back(q);
        }
        return out;
    }

    if (t_max == 0.0) {
        for (double t : maturities) out.push_back({t, 1.0, 1.0, Method::PDE});
        return out;
    }
    const Grid grid = pricing_grid(model, x0, x0, t_max, opts);
    const SurfacePair s = solve_pair(model, PayoffSpec::constant(1.0), grid, opts.scheme, Discounting::StateRate);
    for (double t : maturities)
        out.push_back({t, s.upper.term_structure(t, x0), s.lower.term_structure(t, x0), Method::PDE});
    return out;
}

}  // namespace nlaffine
