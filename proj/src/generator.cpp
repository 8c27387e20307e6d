#include "nlaffine/generator.hpp"

#include "nlaffine/errors.hpp"

#include <algorithm>
#include <limits>

namespace nlaffine {

namespace {

double evaluate(const CornerParams& c, double x, double p, double q) noexcept {
    return c.drift(x) * p + 0.5 * c.diffusion(x) * q;
}

double lattice(double lo, double hi, int i, int n) noexcept {
    if (i == n - 1) return hi;
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

}  // namespace

CornerParams argmax_theta(const ParameterBox& box, double x, double p, double q) noexcept {
    return {
        p >= 0.0 ? box.b0_hi : box.b0_lo,
        x * p >= 0.0 ? box.b1_hi : box.b1_lo,
        q >= 0.0 ? box.a0_hi : box.a0_lo,
        q >= 0.0 ? box.a1_hi : box.a1_lo,
        x,
    };
}

CornerParams argmin_theta(const ParameterBox& box, double x, double p, double q) noexcept {
    return {
        p > 0.0 ? box.b0_lo : box.b0_hi,
        x * p > 0.0 ? box.b1_lo : box.b1_hi,
        q > 0.0 ? box.a0_lo : box.a0_hi,
        q > 0.0 ? box.a1_lo : box.a1_hi,
        x,
    };
}

double sup_generator(const ParameterBox& box, double x, double p, double q) noexcept {
    return evaluate(argmax_theta(box, x, p, q), x, p, q);
}

double inf_generator(const ParameterBox& box, double x, double p, double q) noexcept {
    return evaluate(argmin_theta(box, x, p, q), x, p, q);
}

double sup_generator_bruteforce(const ParameterBox& box, double x, double p, double q, int n) {
    if (n < 2) throw ConfigError("sup_generator_bruteforce needs n >= 2");
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double b0 = lattice(box.b0_lo, box.b0_hi, i, n);
        for (int j = 0; j < n; ++j) {
            const double b1 = lattice(box.b1_lo, box.b1_hi, j, n);
            for (int k = 0; k < n; ++k) {
                const double a0 = lattice(box.a0_lo, box.a0_hi, k, n);
                for (int l = 0; l < n; ++l) {
                    const double a1 = lattice(box.a1_lo, box.a1_hi, l, n);
                    best = std::max(best, evaluate({b0, b1, a0, a1, x}, x, p, q));
                }
            }
        }
    }
    return best;
}

}  // namespace nlaffine
