#ifndef SEQCOMPACT_INTERVAL_HPP
#define SEQCOMPACT_INTERVAL_HPP

#include "core.hpp"

#include <algorithm>

namespace seqcompact
{

/// Closed interval with dyadic endpoints.
struct Interval {
    Dyadic lo;
    Dyadic hi;

    static Interval point(const Dyadic &x) { return {x, x}; }

    bool contains(const Dyadic &x) const { return lo <= x && x <= hi; }
    bool is_degenerate() const { return lo == hi; }
    Dyadic width() const { return hi - lo; }

    friend Interval operator+(const Interval &a, const Interval &b) { return {a.lo + b.lo, a.hi + b.hi}; }
    friend Interval operator-(const Interval &a) { return {-a.hi, -a.lo}; }
    friend bool operator==(const Interval &, const Interval &) = default;

    /// |I| as an interval of non-negative values.
    Interval magnitude() const
    {
        if (lo.sign() >= 0) return *this;
        if (hi.sign() <= 0) return -*this;
        return {Dyadic{}, std::max(-lo, hi)};
    }

    /// |I|^k; exact endpoint arithmetic.
    Interval abs_pow(std::uint64_t k) const
    {
        auto m = magnitude();
        return {m.lo.pow(k), m.hi.pow(k)};
    }
};

namespace detail
{

/// Largest L with L^k <= n, for n >= 0, k >= 1.
inline BigInt integer_root(const BigInt &n, std::uint64_t k)
{
    if (n.is_zero() || k == 1) return n;
    auto bits = boost::multiprecision::msb(n) + 1;
    BigInt x = BigInt(1) << static_cast<unsigned>((bits + k - 1) / k);
    // Newton from above decreases monotonically to the floor root.
    while (true) {
        BigInt xk1 = boost::multiprecision::pow(x, static_cast<unsigned>(k - 1));
        BigInt y = (BigInt(k - 1) * x + n / xk1) / BigInt(k);
        if (y >= x) break;
        x = y;
    }
    while (boost::multiprecision::pow(x, static_cast<unsigned>(k)) > n) --x;
    while (boost::multiprecision::pow(BigInt(x + 1), static_cast<unsigned>(k)) <= n) ++x;
    return x;
}

} // namespace detail

/// Enclosure of y^(1/k) for y >= 0, of width at most 2^-precision; degenerate
/// when the root is an exact dyadic at that precision.
inline Interval root_enclosure(const Dyadic &y, std::uint64_t k, std::uint64_t precision)
{
    if (y.sign() < 0) throw Error(ErrorCode::OutOfRange, "root of a negative value");
    if (k == 0) throw Error(ErrorCode::InvalidExponent, "zeroth root");
    if (k == 1 || y.is_zero()) return Interval::point(y);
    // Work at a precision where y * 2^(prec*k) is an integer.
    std::uint64_t prec = std::max(precision, (y.exponent() + k - 1) / k);
    BigInt scaled = y.numerator() << static_cast<unsigned>(prec * k - y.exponent());
    BigInt root = detail::integer_root(scaled, k);
    Dyadic lo(root, prec);
    if (boost::multiprecision::pow(root, static_cast<unsigned>(k)) == scaled) return Interval::point(lo);
    return {lo, Dyadic(BigInt(root + 1), prec)};
}

/// Enclosure of x^(num/den) for x >= 0.
inline Interval power_enclosure(const Dyadic &x, const RationalExponent &e, std::uint64_t precision)
{
    if (e.num <= 0) throw Error(ErrorCode::InvalidExponent, "non-positive exponent " + e.to_string());
    return root_enclosure(x.abs().pow(static_cast<std::uint64_t>(e.num)), static_cast<std::uint64_t>(e.den), precision);
}

} // namespace seqcompact

#endif
