#pragma once

#include "nlaffine/params.hpp"

namespace nlaffine {

// Pointwise extremum over the box of (b0 + b1 x) p + 1/2 (a0 + a1 x^+) q.
// The objective is linear in each parameter, so the extremum sits on a corner
// picked by sign tests; no optimisation loop is involved.

[[nodiscard]] double sup_generator(const ParameterBox& box, double x, double p, double q) noexcept;
[[nodiscard]] double inf_generator(const ParameterBox& box, double x, double p, double q) noexcept;

/// Maximising corner. Ties (p = 0, q = 0 or x = 0) go to the upper endpoint.
[[nodiscard]] CornerParams argmax_theta(const ParameterBox& box, double x, double p, double q) noexcept;

/// Minimising corner. Ties go to the lower endpoint.
[[nodiscard]] CornerParams argmin_theta(const ParameterBox& box, double x, double p, double q) noexcept;

[[nodiscard]] inline CornerParams extremal_theta(const ParameterBox& box, double x, double p, double q,
                                                 Direction dir) noexcept {
    return dir == Direction::Upper ? argmax_theta(box, x, p, q) : argmin_theta(box, x, p, q);
}

/// Lattice search over n points per axis (n >= 2, corners included). Test oracle.
[[nodiscard]] double sup_generator_bruteforce(const ParameterBox& box, double x, double p, double q, int n);

}  // namespace nlaffine
