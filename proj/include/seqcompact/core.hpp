#ifndef SEQCOMPACT_CORE_HPP
#define SEQCOMPACT_CORE_HPP

// Exact scalars, index labels, finite-support vectors and points of the
// one-point compactification.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <ranges>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>

namespace seqcompact
{

using BigInt = boost::multiprecision::cpp_int;

enum class ErrorCode {
    EmptySet,
    ParseError,
    NotAnFPS,
    SpaceViolation,
    GroundMismatch,
    IncompatibleModulus,
    OutOfRange,
    NotInBall,
    InvalidExponent,
    UnregisteredFactor,
    Unsatisfiable,
    HorizonTooSmall,
    InvalidSelection,
};

inline const char *error_name(ErrorCode c)
{
    switch (c) {
        case ErrorCode::EmptySet: return "EmptySet";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::NotAnFPS: return "NotAnFPS";
        case ErrorCode::SpaceViolation: return "SpaceViolation";
        case ErrorCode::GroundMismatch: return "GroundMismatch";
        case ErrorCode::IncompatibleModulus: return "IncompatibleModulus";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::NotInBall: return "NotInBall";
        case ErrorCode::InvalidExponent: return "InvalidExponent";
        case ErrorCode::UnregisteredFactor: return "UnregisteredFactor";
        case ErrorCode::Unsatisfiable: return "Unsatisfiable";
        case ErrorCode::HorizonTooSmall: return "HorizonTooSmall";
        case ErrorCode::InvalidSelection: return "InvalidSelection";
    }
    return "Unknown";
}

class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string &what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Exact value numerator / 2^exponent, kept in canonical form: the numerator
/// is odd, or zero with exponent 0.
class Dyadic
{
public:
    Dyadic() = default;
    Dyadic(long long n) : num_(n) {}
    Dyadic(BigInt num, std::uint64_t exponent) : num_(std::move(num)), exp_(exponent) { normalize(); }

    /// 1 / 2^n
    static Dyadic pow2_inverse(std::uint64_t n) { return Dyadic(BigInt(1), n); }

    const BigInt &numerator() const noexcept { return num_; }
    std::uint64_t exponent() const noexcept { return exp_; }

    bool is_zero() const noexcept { return num_.is_zero(); }
    int sign() const { return num_.sign(); }

    Dyadic operator-() const
    {
        Dyadic r = *this;
        r.num_ = -r.num_;
        return r;
    }
    friend Dyadic operator+(const Dyadic &a, const Dyadic &b)
    {
        auto e = std::max(a.exp_, b.exp_);
        return Dyadic(a.scaled_num(e) + b.scaled_num(e), e);
    }
    friend Dyadic operator-(const Dyadic &a, const Dyadic &b) { return a + (-b); }
    friend Dyadic operator*(const Dyadic &a, const Dyadic &b)
    {
        return Dyadic(a.num_ * b.num_, a.exp_ + b.exp_);
    }
    Dyadic &operator+=(const Dyadic &o) { return *this = *this + o; }
    Dyadic &operator-=(const Dyadic &o) { return *this = *this - o; }
    Dyadic &operator*=(const Dyadic &o) { return *this = *this * o; }

    /// Multiplies by 2^shift (shift may be negative).
    Dyadic scaled(long long shift) const
    {
        if (shift >= 0) {
            auto s = static_cast<std::uint64_t>(shift);
            if (s <= exp_) return Dyadic(num_, exp_ - s);
            return Dyadic(BigInt(num_ << static_cast<unsigned>(s - exp_)), 0);
        }
        return Dyadic(num_, exp_ + static_cast<std::uint64_t>(-shift));
    }

    Dyadic abs() const { return sign() < 0 ? -*this : *this; }

    Dyadic pow(std::uint64_t k) const
    {
        BigInt n = boost::multiprecision::pow(num_, static_cast<unsigned>(k));
        return Dyadic(std::move(n), exp_ * k);
    }

    /// Binary digit of weight 2^-(n+1) for a value in [0,1).
    int bit(std::uint64_t n) const
    {
        if (n + 1 > exp_) return 0;
        BigInt shifted = num_ >> static_cast<unsigned>(exp_ - n - 1);
        return static_cast<int>(shifted & 1);
    }

    /// floor(value * 2^shift) for a non-negative value.
    BigInt floor_scaled(std::uint64_t shift) const
    {
        if (shift >= exp_) return BigInt(num_ << static_cast<unsigned>(shift - exp_));
        return BigInt(num_ >> static_cast<unsigned>(exp_ - shift));
    }

    double to_double() const
    {
        return num_.convert_to<double>() / std::ldexp(1.0, static_cast<int>(std::min<std::uint64_t>(exp_, 1000)));
    }

    /// "n/2^k"
    std::string to_string() const { return num_.str() + "/2^" + std::to_string(exp_); }

    /// Parses "n/2^k"; the input must already be canonical.
    static Dyadic parse(std::string_view text)
    {
        auto fail = [&](const char *why) {
            return Error(ErrorCode::ParseError, "bad dyadic '" + std::string(text) + "': " + why);
        };
        auto slash = text.find("/2^");
        if (slash == std::string_view::npos) throw fail("expected n/2^k");
        auto ns = text.substr(0, slash);
        auto ks = text.substr(slash + 3);
        auto digits_only = [](std::string_view s) {
            return !s.empty() && s.size() < 20000 && std::ranges::all_of(s, [](char c) { return c >= '0' && c <= '9'; });
        };
        bool neg = !ns.empty() && ns.front() == '-';
        if (!digits_only(neg ? ns.substr(1) : ns) || !digits_only(ks) || ks.size() > 9)
            throw fail("expected n/2^k");
        if ((ns.size() > 1u + neg && ns[neg] == '0') || (ks.size() > 1 && ks.front() == '0'))
            throw fail("leading zeros");
        if (neg && ns == "-0") throw fail("negative zero");
        BigInt n{std::string(ns)};
        std::uint64_t k = std::stoull(std::string(ks));
        Dyadic d;
        d.num_ = n;
        d.exp_ = k;
        if (!d.is_canonical()) throw fail("not canonical");
        return d;
    }

    friend bool operator==(const Dyadic &a, const Dyadic &b) = default;
    friend std::strong_ordering operator<=>(const Dyadic &a, const Dyadic &b)
    {
        auto e = std::max(a.exp_, b.exp_);
        auto x = a.scaled_num(e);
        auto y = b.scaled_num(e);
        if (x < y) return std::strong_ordering::less;
        if (y < x) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

private:
    bool is_canonical() const
    {
        if (num_.is_zero()) return exp_ == 0;
        return exp_ == 0 || boost::multiprecision::bit_test(boost::multiprecision::abs(num_), 0);
    }
    void normalize()
    {
        if (num_.is_zero()) {
            exp_ = 0;
            return;
        }
        if (exp_ == 0) return;
        auto tz = static_cast<std::uint64_t>(boost::multiprecision::lsb(boost::multiprecision::abs(num_)));
        auto s = std::min(tz, exp_);
        if (s > 0) {
            num_ >>= static_cast<unsigned>(s);
            exp_ -= s;
        }
    }
    BigInt scaled_num(std::uint64_t e) const { return num_ << static_cast<unsigned>(e - exp_); }

    BigInt num_{0};
    std::uint64_t exp_{0};
};

/// Rational exponent p = num/den (den > 0, reduced).
struct RationalExponent {
    std::int64_t num{1};
    std::int64_t den{1};

    static RationalExponent make(std::int64_t n, std::int64_t d)
    {
        if (d == 0) throw Error(ErrorCode::InvalidExponent, "zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        auto g = std::gcd(n < 0 ? -n : n, d);
        if (g == 0) g = 1;
        return {n / g, d / g};
    }
    bool is_integer() const { return den == 1; }
    bool at_least_one() const { return num >= den; }
    std::string to_string() const
    {
        return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
    }
    static RationalExponent parse(std::string_view text)
    {
        try {
            auto slash = text.find('/');
            std::size_t used = 0;
            if (slash == std::string_view::npos) {
                auto n = std::stoll(std::string(text), &used);
                if (used != text.size()) throw std::invalid_argument("trailing");
                return make(n, 1);
            }
            auto ns = std::string(text.substr(0, slash));
            auto ds = std::string(text.substr(slash + 1));
            std::size_t u2 = 0;
            auto n = std::stoll(ns, &used);
            auto d = std::stoll(ds, &u2);
            if (used != ns.size() || u2 != ds.size()) throw std::invalid_argument("trailing");
            return make(n, d);
        } catch (const std::logic_error &) {
            throw Error(ErrorCode::ParseError, "bad exponent '" + std::string(text) + "'");
        }
    }
    friend bool operator==(const RationalExponent &, const RationalExponent &) = default;
};

/// An index of the ground set: a named index, or member `rank` of a fresh
/// family. Named labels sort before fresh ones.
class IndexLabel
{
public:
    IndexLabel() = default;

    static IndexLabel named(std::string name)
    {
        if (name.empty() || name.find('#') != std::string::npos)
            throw Error(ErrorCode::ParseError, "invalid label name '" + name + "'");
        IndexLabel l;
        l.text_ = std::move(name);
        return l;
    }
    static IndexLabel fresh(std::string tag, std::uint64_t rank)
    {
        if (tag.empty() || tag.find('#') != std::string::npos)
            throw Error(ErrorCode::ParseError, "invalid family tag '" + tag + "'");
        IndexLabel l;
        l.text_ = std::move(tag);
        l.rank_ = rank;
        return l;
    }

    bool is_fresh() const noexcept { return rank_.has_value(); }
    /// Name for named labels, family tag for fresh ones.
    const std::string &text() const noexcept { return text_; }
    std::uint64_t rank() const { return rank_.value(); }

    std::string to_string() const { return rank_ ? text_ + "#" + std::to_string(*rank_) : text_; }

    /// "name" or "tag#rank"
    static IndexLabel parse(std::string_view s)
    {
        auto hash = s.find('#');
        if (hash == std::string_view::npos) return named(std::string(s));
        auto rank = s.substr(hash + 1);
        if (rank.empty() || rank.size() > 19 || !std::ranges::all_of(rank, [](char c) { return c >= '0' && c <= '9'; }) ||
            (rank.size() > 1 && rank.front() == '0'))
            throw Error(ErrorCode::ParseError, "invalid fresh label '" + std::string(s) + "'");
        return fresh(std::string(s.substr(0, hash)), std::stoull(std::string(rank)));
    }

    friend bool operator==(const IndexLabel &, const IndexLabel &) = default;
    friend std::strong_ordering operator<=>(const IndexLabel &a, const IndexLabel &b)
    {
        if (auto c = a.rank_.has_value() <=> b.rank_.has_value(); c != 0) return c;
        if (auto c = a.text_.compare(b.text_); c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
        return a.rank_.value_or(0) <=> b.rank_.value_or(0);
    }

private:
    std::string text_;
    std::optional<std::uint64_t> rank_;
};

inline IndexLabel operator""_lbl(const char *s, std::size_t n) { return IndexLabel::parse(std::string_view(s, n)); }

using LabelSet = std::set<IndexLabel>;

/// Element of R^(I): finitely many nonzero coordinates, zeros never stored.
class FiniteSupportVector
{
public:
    using Entries = std::map<IndexLabel, Dyadic>;

    FiniteSupportVector() = default;
    FiniteSupportVector(std::initializer_list<std::pair<const IndexLabel, Dyadic>> init)
    {
        for (const auto &[k, v] : init) set(k, v);
    }

    void set(const IndexLabel &i, Dyadic v)
    {
        if (v.is_zero())
            entries_.erase(i);
        else
            entries_[i] = std::move(v);
    }
    Dyadic at(const IndexLabel &i) const
    {
        auto it = entries_.find(i);
        return it == entries_.end() ? Dyadic{} : it->second;
    }
    const Entries &entries() const noexcept { return entries_; }
    bool is_zero() const noexcept { return entries_.empty(); }

    friend FiniteSupportVector operator+(const FiniteSupportVector &a, const FiniteSupportVector &b)
    {
        FiniteSupportVector r = a;
        for (const auto &[k, v] : b.entries_) r.set(k, r.at(k) + v);
        return r;
    }
    friend FiniteSupportVector operator-(const FiniteSupportVector &a, const FiniteSupportVector &b)
    {
        FiniteSupportVector r = a;
        for (const auto &[k, v] : b.entries_) r.set(k, r.at(k) - v);
        return r;
    }
    friend bool operator==(const FiniteSupportVector &, const FiniteSupportVector &) = default;

private:
    Entries entries_;
};

/// Point of X ∪ {∞}.
class HatPoint
{
public:
    HatPoint() = default; // infinity
    explicit HatPoint(IndexLabel l) : label_(std::move(l)) {}
    static HatPoint infinity() { return {}; }

    bool is_infinity() const noexcept { return !label_; }
    const IndexLabel &label() const { return label_.value(); }
    std::string to_string() const { return label_ ? label_->to_string() : std::string("∞"); }

    friend bool operator==(const HatPoint &, const HatPoint &) = default;
    /// Points of X before ∞.
    friend std::strong_ordering operator<=>(const HatPoint &a, const HatPoint &b)
    {
        if (a.is_infinity() || b.is_infinity()) return a.is_infinity() <=> b.is_infinity();
        return *a.label_ <=> *b.label_;
    }

private:
    std::optional<IndexLabel> label_;
};

inline LabelSet support(const FiniteSupportVector &v)
{
    LabelSet s;
    for (const auto &[k, _] : v.entries()) s.insert(s.end(), k);
    return s;
}

inline Dyadic l1_mass(const FiniteSupportVector &v)
{
    Dyadic m;
    for (const auto &[_, x] : v.entries()) m += x.abs();
    return m;
}

/// Least label of a non-empty collection; realizes the canonical choice
/// function of a linearly ordered index set.
template <std::ranges::input_range R>
    requires std::same_as<std::ranges::range_value_t<R>, IndexLabel>
IndexLabel choice_least(const R &labels)
{
    auto it = std::ranges::min_element(labels);
    if (it == std::ranges::end(labels)) throw Error(ErrorCode::EmptySet, "choice on an empty set");
    return *it;
}

} // namespace seqcompact

#endif
