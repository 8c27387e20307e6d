#include "nlaffine/payoff.hpp"

#include "nlaffine/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace nlaffine {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double positive(double v) noexcept { return v > 0.0 ? v : 0.0; }

double table_value(const payoff_kind::Custom& c, double x) {
    const auto& xs = c.x;
    const auto& ys = c.y;
    std::size_t i;
    if (x <= xs.front()) {
        i = 0;
    } else if (x >= xs.back()) {
        i = xs.size() - 2;
    } else {
        i = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin()) - 1;
    }
    const double w = (x - xs[i]) / (xs[i + 1] - xs[i]);
    return ys[i] + w * (ys[i + 1] - ys[i]);
}

std::vector<double> table_slopes(const payoff_kind::Custom& c) {
    std::vector<double> s(c.x.size() - 1);
    for (std::size_t i = 0; i + 1 < c.x.size(); ++i) s[i] = (c.y[i + 1] - c.y[i]) / (c.x[i + 1] - c.x[i]);
    return s;
}

}  // namespace

PayoffSpec::PayoffSpec(PayoffKind k) : kind_(std::move(k)) { derive_metadata(); }

PayoffSpec PayoffSpec::call(double strike) {
    if (!std::isfinite(strike)) throw ConfigError("call strike must be finite");
    return PayoffSpec(payoff_kind::Call{strike});
}

PayoffSpec PayoffSpec::butterfly(double k1, double k2, double k3) {
    if (!(k1 < k2 && k2 < k3)) throw ConfigError("butterfly strikes must satisfy K1 < K2 < K3");
    return PayoffSpec(payoff_kind::Butterfly{k1, k2, k3});
}

PayoffSpec PayoffSpec::exponential(double u) {
    if (!std::isfinite(u)) throw ConfigError("exponential argument must be finite");
    return PayoffSpec(payoff_kind::Exponential{u});
}

PayoffSpec PayoffSpec::constant(double c) {
    if (!std::isfinite(c)) throw ConfigError("constant payoff must be finite");
    return PayoffSpec(payoff_kind::Constant{c});
}

PayoffSpec PayoffSpec::identity() { return PayoffSpec(payoff_kind::Identity{}); }

PayoffSpec PayoffSpec::custom(std::vector<double> x, std::vector<double> y) {
    if (x.size() < 2 || x.size() != y.size())
        throw ConfigError("custom payoff needs at least two (x, y) samples of equal length");
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        if (!(x[i] < x[i + 1])) throw ConfigError("custom payoff x values must be strictly increasing");
    for (double v : y)
        if (!std::isfinite(v)) throw ConfigError("custom payoff y values must be finite");
    return PayoffSpec(payoff_kind::Custom{std::move(x), std::move(y)});
}

void PayoffSpec::derive_metadata() {
    using namespace payoff_kind;
    std::visit(overloaded{
                   [&](const Call&) { lipschitz_ = 1.0, shape_ = PayoffShape::IncreasingConvex; },
                   // slopes 0, 1, -1, 0
                   [&](const Butterfly&) { lipschitz_ = 1.0, shape_ = PayoffShape::Neither; },
                   [&](const Exponential& e) {
                       lipschitz_ = e.u == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
                       shape_ = e.u >= 0.0 ? PayoffShape::IncreasingConvex : PayoffShape::Neither;
                   },
                   [&](const Constant&) { lipschitz_ = 0.0, shape_ = PayoffShape::IncreasingConvex; },
                   [&](const Identity&) { lipschitz_ = 1.0, shape_ = PayoffShape::IncreasingConvex; },
                   [&](const Custom& c) {
                       const auto s = table_slopes(c);
                       lipschitz_ = 0.0;
                       for (double v : s) lipschitz_ = std::max(lipschitz_, std::abs(v));
                       const bool inc = std::ranges::all_of(s, [](double v) { return v >= 0.0; });
                       const bool dec = std::ranges::all_of(s, [](double v) { return v <= 0.0; });
                       const bool convex = std::is_sorted(s.begin(), s.end());
                       const bool concave = std::is_sorted(s.rbegin(), s.rend());
                       if (inc && convex)
                           shape_ = PayoffShape::IncreasingConvex;
                       else if (dec && concave)
                           shape_ = PayoffShape::DecreasingConcave;
                       else
                           shape_ = PayoffShape::Neither;
                   },
               },
               kind_);
}

double PayoffSpec::operator()(double x) const {
    using namespace payoff_kind;
    const double base = std::visit(
        overloaded{
            [x](const Call& c) { return positive(x - c.strike); },
            [x](const Butterfly& b) {
                return positive(x - b.k1) - 2.0 * positive(x - b.k2) + positive(x - b.k3);
            },
            [x](const Exponential& e) { return std::exp(e.u * x); },
            [](const Constant& c) { return c.c; },
            [x](const Identity&) { return x; },
            [x](const Custom& c) { return table_value(c, x); },
        },
        kind_);
    return scale_ * base + shift_;
}

double PayoffSpec::lipschitz_on(double lo, double hi) const {
    if (const auto* e = std::get_if<payoff_kind::Exponential>(&kind_)) {
        const double edge = e->u >= 0.0 ? hi : lo;
        return std::abs(scale_ * e->u) * std::exp(e->u * edge);
    }
    return lipschitz_;
}

bool PayoffSpec::lipschitz_bounded() const noexcept { return std::isfinite(lipschitz_); }

std::string PayoffSpec::name() const {
    using namespace payoff_kind;
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const Call& c) { os << "call(K=" << c.strike << ")"; },
                   [&](const Butterfly& b) { os << "butterfly(" << b.k1 << "," << b.k2 << "," << b.k3 << ")"; },
                   [&](const Exponential& e) { os << "exp(u=" << e.u << ")"; },
                   [&](const Constant& c) { os << "constant(" << c.c << ")"; },
                   [&](const Identity&) { os << "identity"; },
                   [&](const Custom& c) { os << "custom(" << c.x.size() << " points)"; },
               },
               kind_);
    if (scale_ != 1.0 || shift_ != 0.0) {
        std::ostringstream wrapped;
        wrapped << scale_ << "*" << os.str() << "+" << shift_;
        return wrapped.str();
    }
    return os.str();
}

PayoffSpec PayoffSpec::affine_image(double scale, double shift) const {
    if (!std::isfinite(scale) || !std::isfinite(shift)) throw ConfigError("payoff image must be finite");
    PayoffSpec out = *this;
    out.scale_ = scale * scale_;
    out.shift_ = scale * shift_ + shift;
    out.lipschitz_ = std::abs(scale) * lipschitz_;
    if (scale == 0.0) {
        out.shape_ = PayoffShape::IncreasingConvex;
    } else if (scale < 0.0) {
        if (shape_ == PayoffShape::IncreasingConvex)
            out.shape_ = PayoffShape::DecreasingConcave;
        else if (shape_ == PayoffShape::DecreasingConcave)
            out.shape_ = PayoffShape::IncreasingConvex;
    }
    return out;
}

std::string to_string(PayoffShape s) {
    switch (s) {
    case PayoffShape::IncreasingConvex: return "increasing_convex";
    case PayoffShape::DecreasingConcave: return "decreasing_concave";
    case PayoffShape::Neither: break;
    }
    return "neither";
}

}  // namespace nlaffine
