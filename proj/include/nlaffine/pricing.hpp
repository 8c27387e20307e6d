#pragma once

#include "nlaffine/params.hpp"
#include "nlaffine/payoff.hpp"
#include "nlaffine/pdesolver.hpp"
#include "nlaffine/simulate.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nlaffine {

enum class Method { Auto, PDE, Riccati, MC };

[[nodiscard]] std::string to_string(Method m);
[[nodiscard]] Method parse_method(const std::string& s);

struct PricingOptions {
    int n_x = 801;
    int n_t = 400;
    /// Explicit truncation; both or neither. Otherwise the probe-centred default.
    std::optional<double> x_min, x_max;
    Scheme scheme = Scheme::ExplicitMonotone;
    SimConfig sim;
    /// One 1.5x widening round for exponential payoffs, warn above 0.1% change.
    bool widen_exponential = true;
};

struct PricingDiagnostics {
    std::vector<std::string> warnings;
    std::optional<Grid> grid;
    std::optional<SolveDiagnostics> pde_upper, pde_lower;
    std::optional<McEstimate> mc_upper, mc_lower;
    std::optional<CornerParams> corner_upper, corner_lower;
    /// What each number is: a proven bound, or only a feasible-law estimate.
    std::string label_upper, label_lower;
};

struct PricingResult {
    double x0 = 0.0;
    double T = 0.0;
    double upper = 0.0;
    double lower = 0.0;
    double model_risk = 0.0;
    Method method_upper = Method::PDE;
    Method method_lower = Method::PDE;
    PricingDiagnostics diagnostics;
};

/// Upper and lower expectation of payoff(X_T) started at x0.
[[nodiscard]] PricingResult price(const ModelSpec& model, const PayoffSpec& payoff, double x0, double T,
                                  Method method = Method::Auto, const PricingOptions& opts = {});

/// Same as price() on several start points; the PDE path solves once for all.
[[nodiscard]] std::vector<PricingResult> price_curve(const ModelSpec& model, const PayoffSpec& payoff,
                                                     const std::vector<double>& x0s, double T,
                                                     Method method = Method::Auto,
                                                     const PricingOptions& opts = {});

struct BondQuote {
    double maturity = 0.0;
    double upper = 1.0;
    double lower = 1.0;
    Method method = Method::Riccati;
};

/// Upper and lower zero-coupon prices sup/inf E[exp(-int_0^T X ds)].
[[nodiscard]] std::vector<BondQuote> bond_curve(const ModelSpec& model, double x0,
                                                const std::vector<double>& maturities,
                                                Method method = Method::Auto, const PricingOptions& opts = {});

[[nodiscard]] double model_risk(const ModelSpec& model, const PayoffSpec& payoff, double x0, double T,
                                Method method = Method::Auto, const PricingOptions& opts = {});

/// True when the exponential-affine fast path is proven for this payoff and start point.
[[nodiscard]] bool riccati_applicable(const ModelSpec& model, const PayoffSpec& payoff, double x0);

}  // namespace nlaffine
