#include "nlaffine/simulate.hpp"

#include "nlaffine/errors.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>

namespace nlaffine {

namespace {

// Substream for pair i: mt19937_64 seeded through seed_seq with the 32-bit
// halves of (seed, i). Both engines are fully specified by the standard.
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

double standard_normal(std::mt19937_64& rng) {
    // 53-bit uniform strictly inside (0, 1), then the inverse normal CDF.
    const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * u);
}

struct PathRecord {
    double terminal;
    double integral;
    double minimum;
};

class PathStepper {
public:
    PathStepper(const CornerParams& c, double x0, double T, int n_steps)
        : c_(c), x0_(x0), h_(T / n_steps), sqrt_h_(std::sqrt(T / n_steps)) {}

    // Euler and full truncation both floor the variance argument at X^+ and
    // keep X in the drift, so on affine coefficients they share this update.
    template <class Normals>
    PathRecord run(int n_steps, Normals&& z) const {
        double x = x0_;
        double integral = 0.0;
        double minimum = x0_;
        for (int k = 0; k < n_steps; ++k) {
            const double var = std::max(c_.a0 + c_.a1 * std::max(x, 0.0), 0.0);
            const double next = x + (c_.b0 + c_.b1 * x) * h_ + std::sqrt(var) * sqrt_h_ * z(k);
            integral += 0.5 * (x + next) * h_;
            x = next;
            minimum = std::min(minimum, x);
        }
        return {x, integral, minimum};
    }

private:
    CornerParams c_;
    double x0_;
    double h_;
    double sqrt_h_;
};

}  // namespace

void SimConfig::check() const {
    if (n_paths < 2) throw ConfigError("n_paths must be >= 2");
    if (n_steps < 1) throw ConfigError("n_steps must be >= 1");
    if (antithetic && n_paths % 2 != 0) throw ConfigError("antithetic sampling needs an even n_paths");
    if (threads < 0) throw ConfigError("threads must be >= 0");
}

int thread_budget(int requested) {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    int n = requested > 0 ? requested : hw;
    if (const char* env = std::getenv("NLAFFINE_THREADS")) {
        const int cap = std::atoi(env);
        if (cap > 0) n = std::min(n, cap);
    }
    return std::max(1, std::min(n, hw));
}

SampleSet simulate_terminal(const CornerParams& corner, double x0, double T, const SimConfig& cfg) {
    cfg.check();
    if (!(T >= 0.0)) throw ConfigError("simulation horizon must be >= 0");

    SampleSet out;
    out.antithetic = cfg.antithetic;
    if (corner.a0 == 0.0 && corner.a1 > 0.0 && corner.b0 < corner.a1 / 2.0)
        out.warnings.emplace_back("corner violates the Feller condition b0 >= a1/2");

    const auto n = static_cast<std::size_t>(cfg.n_paths);
    out.terminal.resize(n);
    out.path_min.resize(n);
    if (cfg.record_discount) out.discount_integral.resize(n);

    const PathStepper stepper(corner, x0, T, cfg.n_steps);
    const std::size_t groups = cfg.antithetic ? n / 2 : n;
    const std::size_t width = cfg.antithetic ? 2 : 1;

    auto store = [&](std::size_t i, const PathRecord& r) {
        out.terminal[i] = r.terminal;
        out.path_min[i] = r.minimum;
        if (cfg.record_discount) out.discount_integral[i] = r.integral;
    };

    auto work = [&](std::size_t begin, std::size_t end) {
        std::vector<double> z(static_cast<std::size_t>(cfg.n_steps));
        for (std::size_t g = begin; g < end; ++g) {
            auto rng = substream(cfg.seed, g);
            for (double& v : z) v = standard_normal(rng);
            store(g * width, stepper.run(cfg.n_steps, [&](int k) { return z[k]; }));
            if (cfg.antithetic) store(g * width + 1, stepper.run(cfg.n_steps, [&](int k) { return -z[k]; }));
        }
    };

    const auto workers = static_cast<std::size_t>(std::min<long>(thread_budget(cfg.threads), groups));
    if (workers <= 1) {
        work(0, groups);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (groups + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t b = w * chunk;
            const std::size_t e = std::min(groups, b + chunk);
            if (b < e) pool.emplace_back(work, b, e);
        }
    }

    for (double v : out.terminal)
        if (!std::isfinite(v)) throw NumericalError("non-finite simulated state; check the corner and step size");
    return out;
}

McEstimate mc_expectation(const SampleSet& samples, const PayoffSpec& payoff, bool discount) {
    const std::size_t n = samples.terminal.size();
    if (n < 2) throw ConfigError("need at least two samples");
    if (discount && samples.discount_integral.size() != n)
        throw ConfigError("discounting requested but path integrals were not recorded");

    auto value = [&](std::size_t i) {
        const double f = payoff(samples.terminal[i]);
        return discount ? std::exp(-samples.discount_integral[i]) * f : f;
    };

    const std::size_t width = samples.antithetic ? 2 : 1;
    const std::size_t m = n / width;
    // Welford over the independent units (single paths or antithetic pairs).
    double mean = 0.0, m2 = 0.0;
    for (std::size_t g = 0; g < m; ++g) {
        double y = value(g * width);
        if (width == 2) y = 0.5 * (y + value(g * width + 1));
        const double d = y - mean;
        mean += d / static_cast<double>(g + 1);
        m2 += d * (y - mean);
    }
    const double var = m > 1 ? m2 / static_cast<double>(m - 1) : 0.0;
    return {mean, std::sqrt(std::max(var, 0.0) / static_cast<double>(m)), static_cast<long>(n), discount};
}

double positivity_fraction(const CornerParams& corner, double x0, double T, const SimConfig& cfg) {
    if (!(x0 > 0.0)) throw ConfigError("positivity check needs x0 > 0");
    const SampleSet s = simulate_terminal(corner, x0, T, cfg);
    const auto hits = std::count_if(s.path_min.begin(), s.path_min.end(), [](double v) { return v <= 0.0; });
    return static_cast<double>(hits) / static_cast<double>(s.path_min.size());
}

std::string to_string(SimScheme s) { return s == SimScheme::Euler ? "euler" : "full_truncation"; }

SimScheme parse_sim_scheme(const std::string& s) {
    if (s == "euler") return SimScheme::Euler;
    if (s == "full_truncation") return SimScheme::FullTruncation;
    throw ConfigError("unknown simulation scheme '" + s + "' (expected euler or full_truncation)");
}

}  // namespace nlaffine
