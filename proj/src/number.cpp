#include <noether/number.hpp>

#include <cctype>
#include <cmath>
#include <functional>

#include <fmt/format.h>

#include <noether/error.hpp>

namespace noether
{

namespace
{

template <typename F>
Number binary(const Number &a, const Number &b, F op)
{
    if (a.is_exact() && b.is_exact()) {
        return Number(op(a.rational(), b.rational()));
    }
    return Number(op(a.to_double(), b.to_double()));
}

} // namespace

Number Number::from_fraction(long long num, long long den)
{
    if (den == 0) {
        throw DomainError("zero denominator in rational constant");
    }
    return Number(Rational(num, den));
}

double Number::to_double() const
{
    if (is_exact()) {
        return static_cast<double>(rational());
    }
    return std::get<double>(value_);
}

bool Number::is_zero() const
{
    return is_exact() ? rational() == 0 : std::get<double>(value_) == 0.0;
}

bool Number::is_one() const
{
    return is_exact() && rational() == 1;
}

bool Number::is_minus_one() const
{
    return is_exact() && rational() == -1;
}

bool Number::is_integer() const
{
    return is_exact() && denominator(rational()) == 1;
}

int Number::sign() const
{
    if (is_exact()) {
        return rational().sign();
    }
    const double d = std::get<double>(value_);
    return (d > 0) - (d < 0);
}

Number Number::operator-() const
{
    if (is_exact()) {
        return Number(Rational(-rational()));
    }
    return Number(-std::get<double>(value_));
}

Number operator+(const Number &a, const Number &b)
{
    return binary(a, b, [](const auto &x, const auto &y) { return x + y; });
}

Number operator-(const Number &a, const Number &b)
{
    return binary(a, b, [](const auto &x, const auto &y) { return x - y; });
}

Number operator*(const Number &a, const Number &b)
{
    return binary(a, b, [](const auto &x, const auto &y) { return x * y; });
}

Number operator/(const Number &a, const Number &b)
{
    if (b.is_exact() && b.rational() == 0) {
        throw DomainError("division by zero");
    }
    return binary(a, b, [](const auto &x, const auto &y) { return x / y; });
}

Number Number::pow(int exponent) const
{
    if (!is_exact()) {
        return Number(std::pow(std::get<double>(value_), exponent));
    }
    if (exponent < 0) {
        if (rational() == 0) {
            throw DomainError("zero raised to a negative power");
        }
        return Number(Rational(1) / rational()).pow(-exponent);
    }
    Rational result(1);
    Rational base = rational();
    unsigned e = static_cast<unsigned>(exponent);
    while (e != 0) {
        if (e & 1U) {
            result *= base;
        }
        base *= base;
        e >>= 1U;
    }
    return Number(result);
}

Number Number::abs() const
{
    return sign() < 0 ? -*this : *this;
}

bool Number::exact_sqrt(Number &out) const
{
    if (!is_exact() || rational() < 0) {
        return false;
    }
    using boost::multiprecision::cpp_int;
    const cpp_int num = numerator(rational());
    const cpp_int den = denominator(rational());
    const cpp_int rn = boost::multiprecision::sqrt(num);
    const cpp_int rd = boost::multiprecision::sqrt(den);
    if (rn * rn != num || rd * rd != den) {
        return false;
    }
    out = Number(Rational(rn, rd));
    return true;
}

std::strong_ordering compare(const Number &a, const Number &b)
{
    if (a.is_exact() != b.is_exact()) {
        return a.is_exact() ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    if (a.is_exact()) {
        const int c = a.rational().compare(b.rational());
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }
    const double x = a.to_double();
    const double y = b.to_double();
    if (x < y) {
        return std::strong_ordering::less;
    }
    if (x > y) {
        return std::strong_ordering::greater;
    }
    return std::strong_ordering::equal;
}

std::size_t Number::hash() const
{
    if (is_exact()) {
        return std::hash<std::string>{}(rational().str());
    }
    return std::hash<double>{}(std::get<double>(value_)) ^ 0x9e3779b97f4a7c15ULL;
}

std::string Number::to_string() const
{
    if (is_exact()) {
        return rational().str();
    }
    return fmt::format("{:.17g}", std::get<double>(value_));
}

Number parse_decimal(const std::string &text)
{
    using boost::multiprecision::cpp_int;
    std::size_t i = 0;
    cpp_int mantissa = 0;
    long long scale = 0;
    bool any_digit = false;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        mantissa = mantissa * 10 + (text[i] - '0');
        any_digit = true;
        ++i;
    }
    if (i < text.size() && text[i] == '.') {
        ++i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            mantissa = mantissa * 10 + (text[i] - '0');
            --scale;
            any_digit = true;
            ++i;
        }
    }
    if (!any_digit) {
        throw ParseError("malformed number '" + text + "'", 0);
    }
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        ++i;
        int sign = 1;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
            sign = text[i] == '-' ? -1 : 1;
            ++i;
        }
        long long e = 0;
        bool any_exp = false;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            e = e * 10 + (text[i] - '0');
            if (e > 4000) {
                throw ParseError("exponent out of range in '" + text + "'", i);
            }
            any_exp = true;
            ++i;
        }
        if (!any_exp) {
            throw ParseError("malformed exponent in '" + text + "'", i);
        }
        scale += sign * e;
    }
    if (i != text.size()) {
        throw ParseError("malformed number '" + text + "'", i);
    }
    Rational r(mantissa);
    const Number ten(10);
    return Number(r) * ten.pow(static_cast<int>(scale));
}

} // namespace noether
