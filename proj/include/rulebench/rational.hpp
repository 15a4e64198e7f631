#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace rulebench {

/// Exact fraction with 64-bit numerator and positive denominator, always in
/// lowest terms. Arithmetic goes through 128-bit intermediates and throws
/// std::overflow_error if a reduced result does not fit.
class Rational {
public:
    constexpr Rational() noexcept = default;
    Rational(std::int64_t value) noexcept : num_(value), den_(1) {} // NOLINT(implicit)
    Rational(std::int64_t numerator, std::int64_t denominator);

    std::int64_t numerator() const noexcept { return num_; }
    std::int64_t denominator() const noexcept { return den_; }

    double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

    // Round-half-up decimal rendering with a fixed number of fractional digits.
    std::string to_decimal(int digits = 6) const;
    // "n/d", or "n" when the denominator is 1.
    std::string to_string() const;

    Rational operator-() const;
    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }

    friend bool operator==(const Rational&, const Rational&) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

private:
    static Rational from_wide(__int128 numerator, __int128 denominator);

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

} // namespace rulebench
