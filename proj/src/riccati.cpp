#include "nlaffine/riccati.hpp"

#include "nlaffine/errors.hpp"
#include "nlaffine/generator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace nlaffine {

namespace {

constexpr double kLimitSwitch = 1e-8;

struct State {
    double phi;
    double psi;
};

State rhs(const CornerParams& c, double psi, RiccatiMode mode) noexcept {
    const double forcing = mode == RiccatiMode::Bond ? -1.0 : 0.0;
    return {0.5 * c.a0 * psi * psi + c.b0 * psi, 0.5 * c.a1 * psi * psi + c.b1 * psi + forcing};
}

double factorial(int k) noexcept {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

}  // namespace

int default_riccati_steps(double T) noexcept {
    return std::max(200, static_cast<int>(std::ceil(200.0 * T)));
}

double exp_remainder(int k, double x) noexcept {
    if (std::abs(x) < 1.0) {
        double term = 1.0 / factorial(k);
        double sum = term;
        for (int n = 1; n < 60; ++n) {
            term *= x / static_cast<double>(n + k);
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        }
        return sum;
    }
    double e = std::expm1(x) / x;
    for (int j = 1; j < k; ++j) e = (e - 1.0 / factorial(j)) / x;
    return e;
}

RiccatiSolution solve_riccati(const CornerParams& corner, double u, double T, int n_steps, RiccatiMode mode,
                              double blowup_cap) {
    if (n_steps < 1) throw ConfigError("solve_riccati: n_steps must be >= 1");
    if (!(T >= 0.0)) throw ConfigError("solve_riccati: T must be >= 0");

    RiccatiSolution sol;
    sol.mode = mode;
    sol.corner = corner;
    sol.u0 = u;
    sol.t.reserve(n_steps + 1);
    sol.phi.reserve(n_steps + 1);
    sol.psi.reserve(n_steps + 1);

    const double h = T / n_steps;
    State y{0.0, u};
    sol.t.push_back(0.0);
    sol.phi.push_back(y.phi);
    sol.psi.push_back(y.psi);

    for (int k = 0; k < n_steps; ++k) {
        const State k1 = rhs(corner, y.psi, mode);
        const State k2 = rhs(corner, y.psi + 0.5 * h * k1.psi, mode);
        const State k3 = rhs(corner, y.psi + 0.5 * h * k2.psi, mode);
        const State k4 = rhs(corner, y.psi + h * k3.psi, mode);
        y.phi += h / 6.0 * (k1.phi + 2.0 * k2.phi + 2.0 * k3.phi + k4.phi);
        y.psi += h / 6.0 * (k1.psi + 2.0 * k2.psi + 2.0 * k3.psi + k4.psi);

        const double t = (k + 1 == n_steps) ? T : (k + 1) * h;
        if (!std::isfinite(y.psi) || !std::isfinite(y.phi) || std::abs(y.psi) > blowup_cap ||
            std::abs(y.phi) > blowup_cap) {
            throw BlowUpError(t, "Riccati solution exceeds cap " + std::to_string(blowup_cap) +
                                     " at t=" + std::to_string(t));
        }
        sol.t.push_back(t);
        sol.phi.push_back(y.phi);
        sol.psi.push_back(y.psi);
    }
    return sol;
}

PhiPsi vasicek_closed_form(const CornerParams& c, double u, double t, RiccatiMode mode) {
    if (c.a1 != 0.0) throw DomainError("vasicek_closed_form requires a1 = 0, got " + std::to_string(c.a1));
    if (t == 0.0) return {0.0, u};

    const double b1 = std::abs(c.b1) < kLimitSwitch ? 0.0 : c.b1;
    const double x = b1 * t;
    const double e1 = exp_remainder(1, x);
    const double e1_2 = exp_remainder(1, 2.0 * x);

    if (mode == RiccatiMode::Mgf) {
        const double psi = u * std::exp(x);
        const double phi = c.b0 * u * t * e1 + 0.5 * c.a0 * u * u * t * e1_2;
        return {phi, psi};
    }

    // psi(s) = u e^{b1 s} - (e^{b1 s} - 1)/b1, integrated in closed form.
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double psi = u * std::exp(x) - t * e1;
    const double int_psi = u * t * e1 - t2 * exp_remainder(2, x);
    const double cross = 0.5 * t2 + b1 * t3 * (4.0 * exp_remainder(3, 2.0 * x) - exp_remainder(3, x));
    const double square = t3 / 3.0 + b1 * t3 * t * (8.0 * exp_remainder(4, 2.0 * x) - 2.0 * exp_remainder(4, x));
    const double int_psi2 = u * u * t * e1_2 - 2.0 * u * cross + square;
    return {c.b0 * int_psi + 0.5 * c.a0 * int_psi2, psi};
}

PhiPsi cir_bond_closed_form(const CornerParams& c, double t) {
    if (c.a0 != 0.0 || !(c.a1 > 0.0) || !(c.b0 > 0.0))
        throw DomainError("cir_bond_closed_form requires a0 = 0, a1 > 0, b0 > 0");
    if (t == 0.0) return {0.0, 0.0};
    if (c.a1 < kLimitSwitch) {
        CornerParams v = c;
        v.a1 = 0.0;
        return vasicek_closed_form(v, 0.0, t, RiccatiMode::Bond);
    }

    const double gamma = std::sqrt(c.b1 * c.b1 + 2.0 * c.a1);
    // gamma - b1 and gamma + b1 without cancellation: their product is 2 a1.
    double gm, gp;
    if (c.b1 <= 0.0) {
        gm = gamma - c.b1;
        gp = 2.0 * c.a1 / gm;
    } else {
        gp = gamma + c.b1;
        gm = 2.0 * c.a1 / gp;
    }
    const double one_minus = -std::expm1(-gamma * t);
    const double decay = std::exp(-gamma * t);
    const double denom = gm * one_minus + 2.0 * gamma * decay;
    const double psi = -2.0 * one_minus / denom;
    const double bracket = -0.5 * gp * t - std::log1p(-gp * one_minus / (2.0 * gamma));
    return {2.0 * c.b0 / c.a1 * bracket, psi};
}

RiccatiRegime riccati_regime(const ModelSpec& model, double x0) noexcept {
    const ParameterBox& b = model.box;
    if (model.domain == StateDomain::RealLine) {
        if (b.a1_lo == 0.0 && b.a1_hi == 0.0 && b.b1_lo == b.b1_hi) return RiccatiRegime::FixedSlopeVasicek;
        return RiccatiRegime::None;
    }
    const bool cir = b.a0_lo == 0.0 && b.a0_hi == 0.0 && b.a1_hi > 0.0 && b.b0_lo >= b.a1_hi / 2.0;
    return cir && x0 > 0.0 ? RiccatiRegime::PositiveCir : RiccatiRegime::None;
}

CornerParams mgf_corner(const ModelSpec& model, double x0, double u, Direction dir) {
    const RiccatiRegime regime = riccati_regime(model, x0);
    if (regime == RiccatiRegime::None)
        throw RegimeError("closed-form transform needs a fixed-slope Vasicek box on R or a Feller CIR box "
                          "on R+ with x0 > 0; use the PDE solver");
    if (u < 0.0 && (dir == Direction::Upper || regime != RiccatiRegime::FixedSlopeVasicek))
        throw RegimeError("negative transform argument is only supported for the lower bound in the "
                          "fixed-slope Vasicek regime");
    // psi(t) keeps the sign of u and the second derivative of exp(phi + psi x)
    // is positive, so the extremal corner is the one for (p, q) = (u, 1).
    CornerParams c = extremal_theta(model.box, x0, u, 1.0, dir);
    c.regime_x0 = x0;
    return c;
}

CornerParams bond_corner(const ModelSpec& model, double x0, Direction dir) {
    if (riccati_regime(model, x0) == RiccatiRegime::None)
        throw RegimeError("closed-form bond prices need a fixed-slope Vasicek box on R or a Feller CIR box "
                          "on R+ with x0 > 0; use the PDE solver");
    // Bond prices are decreasing and convex in the state: psi < 0, psi^2 > 0.
    CornerParams c = extremal_theta(model.box, x0, -1.0, 1.0, dir);
    c.regime_x0 = x0;
    return c;
}

double mgf_bound(const ModelSpec& model, double x0, double u, double t, Direction dir) {
    const CornerParams c = mgf_corner(model, x0, u, dir);
    if (u == 0.0 || t == 0.0) return std::exp(u * x0);
    PhiPsi r;
    if (c.a1 == 0.0) {
        r = vasicek_closed_form(c, u, t, RiccatiMode::Mgf);
    } else {
        const RiccatiSolution sol = solve_riccati(c, u, t, default_riccati_steps(t), RiccatiMode::Mgf);
        r = {sol.phi_at_end(), sol.psi_at_end()};
    }
    return std::exp(r.phi + r.psi * x0);
}

double bond_bound(const ModelSpec& model, double x0, double t, Direction dir) {
    const CornerParams c = bond_corner(model, x0, dir);
    if (t == 0.0) return 1.0;
    const PhiPsi r = c.a1 == 0.0 ? vasicek_closed_form(c, 0.0, t, RiccatiMode::Bond) : cir_bond_closed_form(c, t);
    return std::exp(r.phi + r.psi * x0);
}

}  // namespace nlaffine
