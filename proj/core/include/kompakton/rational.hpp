#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace kompakton {

/// Exact rational number in lowest terms with a positive denominator.
///
/// Used for the nonlinearity exponent p (so 5/3, 9/7, ... stay exact) and
/// for stencil coefficients, which are converted to double once.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t numerator, std::int64_t denominator = 1);

    /// Accepts "3", "-2", "5/3" and plain decimals such as "1.5".
    static Rational parse(std::string_view text);

    [[nodiscard]] std::int64_t numerator() const noexcept { return num_; }
    [[nodiscard]] std::int64_t denominator() const noexcept { return den_; }
    [[nodiscard]] double value() const noexcept {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }
    [[nodiscard]] bool is_integer() const noexcept { return den_ == 1; }

    /// "5/3" or "2".
    [[nodiscard]] std::string to_string() const;

    friend Rational operator+(Rational a, Rational b);
    friend Rational operator-(Rational a, Rational b);
    friend Rational operator*(Rational a, Rational b);
    friend Rational operator/(Rational a, Rational b);
    friend Rational operator-(Rational a) { return Rational(-a.num_, a.den_); }
    friend bool operator==(const Rational&, const Rational&) = default;

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

}  // namespace kompakton
