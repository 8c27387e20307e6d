#pragma once

#include "nlaffine/params.hpp"

#include <vector>

namespace nlaffine {

/// Mgf:  psi' = a1/2 psi^2 + b1 psi,      phi' = a0/2 psi^2 + b0 psi
/// Bond: psi' = a1/2 psi^2 + b1 psi - 1,  phi' = a0/2 psi^2 + b0 psi
/// with phi(0) = 0, psi(0) = u, so that E[e^{u X_t}] (resp. the discounted
/// bond) equals exp(phi(t) + psi(t) x).
enum class RiccatiMode { Mgf, Bond };

struct RiccatiSolution {
    std::vector<double> t;
    std::vector<double> phi;
    std::vector<double> psi;
    RiccatiMode mode = RiccatiMode::Mgf;
    CornerParams corner;
    double u0 = 0.0;

    [[nodiscard]] double phi_at_end() const { return phi.back(); }
    [[nodiscard]] double psi_at_end() const { return psi.back(); }
};

struct PhiPsi {
    double phi = 0.0;
    double psi = 0.0;
};

inline constexpr double kDefaultBlowUpCap = 1e8;

/// Default step count: max(200, 200 T).
[[nodiscard]] int default_riccati_steps(double T) noexcept;

/// Classical RK4 on the augmented state (phi, psi), uniform grid of n_steps.
/// Throws BlowUpError when |psi| or |phi| exceeds the cap before T.
[[nodiscard]] RiccatiSolution solve_riccati(const CornerParams& corner, double u, double T, int n_steps,
                                            RiccatiMode mode, double blowup_cap = kDefaultBlowUpCap);

/// Exact Ornstein-Uhlenbeck coefficients (a1 = 0). Stable for any b1,
/// including b1 -> 0. Throws DomainError if a1 != 0.
[[nodiscard]] PhiPsi vasicek_closed_form(const CornerParams& corner, double u, double t, RiccatiMode mode);

/// Classical CIR bond coefficients with gamma = sqrt(b1^2 + 2 a1), psi(0) = 0.
/// Requires a0 = 0, a1 > 0, b0 > 0 (DomainError otherwise). For a1 below
/// 1e-8 the a1 -> 0 limit (Vasicek with a0 = 0) is used.
[[nodiscard]] PhiPsi cir_bond_closed_form(const CornerParams& corner, double t);

/// Helper e_k(x) = sum_{n>=0} x^n / (n+k)!  (so e_1(x) = (e^x - 1)/x).
[[nodiscard]] double exp_remainder(int k, double x) noexcept;

/// Which of the two closed-form regimes (if any) a model/start point is in.
enum class RiccatiRegime { None, FixedSlopeVasicek, PositiveCir };

[[nodiscard]] RiccatiRegime riccati_regime(const ModelSpec& model, double x0) noexcept;

/// Corner attaining the bound of E[e^{u X_t}] in a Riccati regime.
/// Upper requires u >= 0. Lower accepts any u >= 0, and u < 0 only in the
/// fixed-slope Vasicek regime. Throws RegimeError otherwise.
[[nodiscard]] CornerParams mgf_corner(const ModelSpec& model, double x0, double u, Direction dir);

/// Corner attaining the bound of E[exp(-int X ds)] in a Riccati regime.
[[nodiscard]] CornerParams bond_corner(const ModelSpec& model, double x0, Direction dir);

/// Upper / lower exp(phi + psi x0) of the moment generating function.
[[nodiscard]] double mgf_bound(const ModelSpec& model, double x0, double u, double t, Direction dir);

[[nodiscard]] inline double mgf_upper(const ModelSpec& model, double x0, double u, double t) {
    return mgf_bound(model, x0, u, t, Direction::Upper);
}

/// Upper / lower zero-coupon bond price in a Riccati regime.
[[nodiscard]] double bond_bound(const ModelSpec& model, double x0, double t, Direction dir);

}  // namespace nlaffine
