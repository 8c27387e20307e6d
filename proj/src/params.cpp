#include "nlaffine/params.hpp"

#include "nlaffine/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <utility>

namespace nlaffine {

namespace {

struct NamedInterval {
    const char* name;
    double ParameterBox::*lo;
    double ParameterBox::*hi;
};

constexpr std::array<NamedInterval, 4> kIntervals{{
    {"b0", &ParameterBox::b0_lo, &ParameterBox::b0_hi},
    {"b1", &ParameterBox::b1_lo, &ParameterBox::b1_hi},
    {"a0", &ParameterBox::a0_lo, &ParameterBox::a0_hi},
    {"a1", &ParameterBox::a1_lo, &ParameterBox::a1_hi},
}};

std::string fmt_num(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

void ParameterBox::check() const {
    for (const auto& iv : kIntervals) {
        const double lo = this->*iv.lo;
        const double hi = this->*iv.hi;
        if (!std::isfinite(lo) || !std::isfinite(hi))
            throw ConfigError(std::string("non-finite endpoint for ") + iv.name);
        if (lo > hi)
            throw ConfigError(std::string(iv.name) + "_lo=" + fmt_num(lo) + " exceeds " + iv.name +
                              "_hi=" + fmt_num(hi));
    }
    if (a0_lo < 0.0) throw ConfigError("a0_lo must be >= 0, got " + fmt_num(a0_lo));
    if (a1_lo < 0.0) throw ConfigError("a1_lo must be >= 0, got " + fmt_num(a1_lo));
}

ParameterBox ParameterBox::sorted(std::vector<std::string>& warnings) const {
    ParameterBox out = *this;
    for (const auto& iv : kIntervals) {
        if (out.*iv.lo > out.*iv.hi) {
            warnings.push_back(std::string("swapped reversed interval ") + iv.name + ": [" +
                               fmt_num(out.*iv.lo) + ", " + fmt_num(out.*iv.hi) + "] -> [" +
                               fmt_num(out.*iv.hi) + ", " + fmt_num(out.*iv.lo) + "]");
            std::swap(out.*iv.lo, out.*iv.hi);
        }
    }
    return out;
}

bool ParameterBox::subset_of(const ParameterBox& o) const noexcept {
    return std::ranges::all_of(kIntervals, [&](const NamedInterval& iv) {
        return o.*iv.lo <= this->*iv.lo && this->*iv.hi <= o.*iv.hi;
    });
}

ParameterBox ParameterBox::hull(const ParameterBox& o) const noexcept {
    ParameterBox out = *this;
    for (const auto& iv : kIntervals) {
        out.*iv.lo = std::min(this->*iv.lo, o.*iv.lo);
        out.*iv.hi = std::max(this->*iv.hi, o.*iv.hi);
    }
    return out;
}

std::string_view to_string(StateDomain d) noexcept {
    return d == StateDomain::RealLine ? "R" : "R+";
}

StateDomain parse_domain(std::string_view s) {
    if (s == "R") return StateDomain::RealLine;
    if (s == "R+") return StateDomain::PositiveHalfLine;
    throw ConfigError("unknown state domain '" + std::string(s) + "' (expected \"R\" or \"R+\")");
}

std::string_view to_string(UniquenessRegime r) noexcept {
    switch (r) {
    case UniquenessRegime::Lipschitz: return "Lipschitz";
    case UniquenessRegime::Degenerate: return "Degenerate";
    case UniquenessRegime::None: break;
    }
    return "None";
}

AdmissibilityReport validate(const ParameterBox& box, StateDomain domain) {
    box.check();
    AdmissibilityReport rep;
    rep.feller_ok = box.b0_lo >= box.a1_hi / 2.0;

    if (domain == StateDomain::RealLine) {
        if (box.a0_lo > 0.0) {
            rep.proper = true;
            rep.regime = UniquenessRegime::Lipschitz;
            rep.reasons.push_back("a0_lo=" + fmt_num(box.a0_lo) + " > 0 on R: Lipschitz uniqueness regime");
        } else {
            rep.reasons.push_back("a0_lo=" + fmt_num(box.a0_lo) + " outside Lipschitz uniqueness regime");
        }
        return rep;
    }

    const bool a0_zero = box.a0_lo == 0.0 && box.a0_hi == 0.0;
    const bool a1_pos = box.a1_hi > 0.0;
    if (!a0_zero)
        rep.reasons.push_back("R+ requires a0_lo = a0_hi = 0, got [" + fmt_num(box.a0_lo) + ", " +
                              fmt_num(box.a0_hi) + "]");
    if (!a1_pos) rep.reasons.push_back("R+ requires a1_hi > 0");
    if (!rep.feller_ok)
        rep.reasons.push_back("Feller condition fails: b0_lo=" + fmt_num(box.b0_lo) + " < a1_hi/2=" +
                              fmt_num(box.a1_hi / 2.0));
    if (a0_zero && a1_pos && rep.feller_ok) {
        rep.proper = true;
        rep.regime = UniquenessRegime::Degenerate;
        rep.reasons.push_back("Feller condition holds: b0_lo=" + fmt_num(box.b0_lo) +
                              " >= a1_hi/2=" + fmt_num(box.a1_hi / 2.0));
    }
    return rep;
}

ModelSpec make_model(const ParameterBox& box, StateDomain domain, bool force) {
    ModelSpec m{box, domain, validate(box, domain), false};
    if (!m.admissibility.accepted()) {
        if (!force) {
            std::string msg = "model rejected:";
            for (const auto& r : m.admissibility.reasons) msg += " " + r + ";";
            throw AdmissibilityError(msg);
        }
        m.forced = true;
    }
    return m;
}

bool CornerParams::inside(const ParameterBox& box) const noexcept {
    return box.b0_lo <= b0 && b0 <= box.b0_hi && box.b1_lo <= b1 && b1 <= box.b1_hi &&
           box.a0_lo <= a0 && a0 <= box.a0_hi && box.a1_lo <= a1 && a1 <= box.a1_hi;
}

Interval drift_interval(const ParameterBox& box, double x) noexcept {
    if (x >= 0.0) return {box.b0_lo + box.b1_lo * x, box.b0_hi + box.b1_hi * x};
    return {box.b0_lo + box.b1_hi * x, box.b0_hi + box.b1_lo * x};
}

Interval diffusion_interval(const ParameterBox& box, double x) noexcept {
    const double xp = x > 0.0 ? x : 0.0;
    return {box.a0_lo + box.a1_lo * xp, box.a0_hi + box.a1_hi * xp};
}

CornerParams worst_case_corner(const ParameterBox& box, double x0, Direction dir) noexcept {
    if (dir == Direction::Upper)
        return {box.b0_hi, x0 < 0.0 ? box.b1_lo : box.b1_hi, box.a0_hi, box.a1_hi, x0};
    return {box.b0_lo, x0 < 0.0 ? box.b1_hi : box.b1_lo, box.a0_lo, box.a1_lo, x0};
}

TransformBounds transform_bounds(const ParameterBox& box, double x, double f1, double f2) noexcept {
    const Interval beta = drift_interval(box, x);
    const Interval alpha = diffusion_interval(box, x);
    const double f1sq = f1 * f1;

    double lo = f1 * beta.lo + 0.5 * f2 * alpha.lo;
    double hi = lo;
    for (double b : {beta.lo, beta.hi}) {
        for (double a : {alpha.lo, alpha.hi}) {
            const double v = f1 * b + 0.5 * f2 * a;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    return {{f1sq * alpha.lo, f1sq * alpha.hi}, {lo, hi}};
}

}  // namespace nlaffine
