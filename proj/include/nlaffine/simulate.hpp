#pragma once

#include "nlaffine/params.hpp"
#include "nlaffine/payoff.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nlaffine {

enum class SimScheme { Euler, FullTruncation };

struct SimConfig {
    long n_paths = 100000;
    int n_steps = 200;
    std::uint64_t seed = 20240101;
    SimScheme scheme = SimScheme::Euler;
    bool antithetic = true;
    /// Accumulate the trapezoidal integral of X along each path.
    bool record_discount = false;
    /// 0 means NLAFFINE_THREADS or the hardware count.
    int threads = 0;

    void check() const;
};

/// Terminal states and per-path side records. With antithetic sampling paths
/// 2i and 2i+1 share their normals up to sign.
struct SampleSet {
    std::vector<double> terminal;
    std::vector<double> discount_integral;
    std::vector<double> path_min;
    bool antithetic = false;
    std::vector<std::string> warnings;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long n_paths = 0;
    bool discounted = false;
};

/// Euler paths of dX = (b0 + b1 X) dt + sqrt(a0 + a1 X^+) dW. Deterministic in
/// the seed; path pair i draws from substream i regardless of scheduling.
[[nodiscard]] SampleSet simulate_terminal(const CornerParams& corner, double x0, double T, const SimConfig& cfg);

/// Mean and standard error of f(X_T), optionally times exp(-int X dt).
/// Antithetic pairs are averaged before the variance is taken.
[[nodiscard]] McEstimate mc_expectation(const SampleSet& samples, const PayoffSpec& payoff, bool discount);

/// Fraction of paths whose running minimum reached 0 or below.
[[nodiscard]] double positivity_fraction(const CornerParams& corner, double x0, double T, const SimConfig& cfg);

/// Worker count from NLAFFINE_THREADS, capped by the hardware.
[[nodiscard]] int thread_budget(int requested = 0);

[[nodiscard]] std::string to_string(SimScheme s);
[[nodiscard]] SimScheme parse_sim_scheme(const std::string& s);

}  // namespace nlaffine
