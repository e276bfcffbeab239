#include "kompakton/rational.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>

#include "kompakton/errors.hpp"

namespace kompakton {

namespace {

std::int64_t parse_integer(std::string_view text, std::string_view whole) {
    std::int64_t out = 0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    if (!text.empty() && text.front() == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last || first == last) {
        throw ParameterError("not a rational number: '" + std::string(whole) + "'");
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

Rational::Rational(std::int64_t numerator, std::int64_t denominator) {
    if (denominator == 0) throw ParameterError("rational with zero denominator");
    if (denominator < 0) {
        numerator = -numerator;
        denominator = -denominator;
    }
    const std::int64_t g = std::gcd(numerator, denominator);
    num_ = g == 0 ? 0 : numerator / g;
    den_ = g == 0 ? 1 : denominator / g;
}

Rational Rational::parse(std::string_view text) {
    const std::string_view s = trim(text);
    if (s.empty()) throw ParameterError("empty rational number");

    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        return Rational(parse_integer(trim(s.substr(0, slash)), s),
                        parse_integer(trim(s.substr(slash + 1)), s));
    }
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        // Decimal: 1.25 -> 125/100. Exponent notation is not accepted.
        std::string digits(s.substr(0, dot));
        const std::string_view frac = s.substr(dot + 1);
        if (frac.size() > 15) throw ParameterError("too many decimals: '" + std::string(s) + "'");
        digits += frac;
        std::int64_t den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        if (digits.empty() || digits == "-" || digits == "+") {
            throw ParameterError("not a rational number: '" + std::string(s) + "'");
        }
        return Rational(parse_integer(digits, s), den);
    }
    return Rational(parse_integer(s, s));
}

std::string Rational::to_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(Rational a, Rational b) {
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}
Rational operator-(Rational a, Rational b) { return a + (-b); }
Rational operator*(Rational a, Rational b) {
    return Rational(a.num_ * b.num_, a.den_ * b.den_);
}
Rational operator/(Rational a, Rational b) {
    if (b.num_ == 0) throw ParameterError("rational division by zero");
    return Rational(a.num_ * b.den_, a.den_ * b.num_);
}

}  // namespace kompakton
