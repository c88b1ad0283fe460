#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <variant>

#include <boost/multiprecision/cpp_int.hpp>

namespace noether
{

using Rational = boost::multiprecision::cpp_rational;

// Numeric coefficient: exact rational whenever the inputs were exact, a double
// otherwise. Any arithmetic touching a double yields a double.
class Number
{
public:
    Number() : value_(Rational(0)) {}
    Number(int v) : value_(Rational(v)) {}
    Number(long long v) : value_(Rational(v)) {}
    Number(Rational v) : value_(std::move(v)) {}
    explicit Number(double v) : value_(v) {}

    static Number from_fraction(long long num, long long den);

    bool is_exact() const noexcept
    {
        return std::holds_alternative<Rational>(value_);
    }
    const Rational &rational() const
    {
        return std::get<Rational>(value_);
    }
    double to_double() const;

    bool is_zero() const;
    bool is_one() const;
    bool is_minus_one() const;
    bool is_integer() const;
    int sign() const;

    Number operator-() const;
    friend Number operator+(const Number &a, const Number &b);
    friend Number operator-(const Number &a, const Number &b);
    friend Number operator*(const Number &a, const Number &b);
    // Throws DomainError on division by an exact zero.
    friend Number operator/(const Number &a, const Number &b);
    Number &operator+=(const Number &o)
    {
        return *this = *this + o;
    }
    Number &operator*=(const Number &o)
    {
        return *this = *this * o;
    }

    Number pow(int exponent) const;
    Number abs() const;

    // Exact square root for perfect-square non-negative rationals.
    bool exact_sqrt(Number &out) const;

    // Total order: exact values sort before doubles, then by value.
    friend std::strong_ordering compare(const Number &a, const Number &b);
    friend bool operator==(const Number &a, const Number &b)
    {
        return compare(a, b) == std::strong_ordering::equal;
    }

    std::size_t hash() const;
    // "3", "-1/2", or a 17-significant-digit float.
    std::string to_string() const;

private:
    std::variant<Rational, double> value_;
};

// Parses a decimal literal (digits, optional fraction, optional exponent) into
// an exact rational.
Number parse_decimal(const std::string &text);

} // namespace noether
