#pragma once

#include <string>
#include <variant>
#include <vector>

namespace nlaffine {

namespace payoff_kind {
struct Call { double strike; };
struct Butterfly { double k1, k2, k3; };
struct Exponential { double u; };
struct Constant { double c; };
struct Identity {};
/// Piecewise-linear table, extended linearly beyond the end points.
struct Custom { std::vector<double> x, y; };
}  // namespace payoff_kind

using PayoffKind = std::variant<payoff_kind::Call, payoff_kind::Butterfly, payoff_kind::Exponential,
                                payoff_kind::Constant, payoff_kind::Identity, payoff_kind::Custom>;

enum class PayoffShape { IncreasingConvex, DecreasingConcave, Neither };

/// Terminal payoff plus analytic metadata.
class PayoffSpec {
public:
    static PayoffSpec call(double strike);
    static PayoffSpec butterfly(double k1, double k2, double k3);
    static PayoffSpec exponential(double u);
    static PayoffSpec constant(double c);
    static PayoffSpec identity();
    static PayoffSpec custom(std::vector<double> x, std::vector<double> y);

    [[nodiscard]] double operator()(double x) const;

    [[nodiscard]] const PayoffKind& kind() const noexcept { return kind_; }
    /// Smallest global Lipschitz constant; +inf for the exponential.
    [[nodiscard]] double lipschitz_constant() const noexcept { return lipschitz_; }
    /// Lipschitz constant restricted to [lo, hi]; finite for every built-in.
    [[nodiscard]] double lipschitz_on(double lo, double hi) const;
    [[nodiscard]] bool lipschitz_bounded() const noexcept;
    [[nodiscard]] PayoffShape shape() const noexcept { return shape_; }
    [[nodiscard]] std::string name() const;

    /// Returns c * payoff + shift as a custom-free equivalent where possible;
    /// used by the cash-invariance / homogeneity properties.
    [[nodiscard]] PayoffSpec affine_image(double scale, double shift) const;
    [[nodiscard]] double scale() const noexcept { return scale_; }
    [[nodiscard]] double shift() const noexcept { return shift_; }

private:
    explicit PayoffSpec(PayoffKind k);
    void derive_metadata();

    PayoffKind kind_;
    double lipschitz_ = 0.0;
    PayoffShape shape_ = PayoffShape::Neither;
    double scale_ = 1.0;
    double shift_ = 0.0;
};

[[nodiscard]] std::string to_string(PayoffShape s);

}  // namespace nlaffine
