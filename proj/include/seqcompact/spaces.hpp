#ifndef SEQCOMPACT_SPACES_HPP
#define SEQCOMPACT_SPACES_HPP

#include "core.hpp"
#include "interval.hpp"

#include <variant>
#include <vector>

namespace seqcompact
{

/// Which witnessed space a point or a sequence lives in.
struct Space {
    enum class Kind { Hat, Sigma, Cube, B1Plus, B1, Bp, Product };

    Kind kind{Kind::Hat};
    std::string ground;
    std::uint64_t n{0};               // Sigma budget
    std::vector<IndexLabel> domain;   // Cube enumeration
    RationalExponent p{};             // Bp exponent
    std::vector<Space> factors;       // Product

    static Space of(Kind k, std::string g)
    {
        Space s;
        s.kind = k;
        s.ground = std::move(g);
        return s;
    }

    static Space hat(std::string g) { return of(Kind::Hat, std::move(g)); }
    static Space sigma(std::uint64_t n, std::string g)
    {
        if (n == 0) throw Error(ErrorCode::OutOfRange, "sigma budget must be positive");
        Space s = of(Kind::Sigma, std::move(g));
        s.n = n;
        return s;
    }
    static Space cube(std::vector<IndexLabel> d, std::string g = "D")
    {
        Space s = of(Kind::Cube, std::move(g));
        s.domain = std::move(d);
        return s;
    }
    static Space b1plus(std::string g) { return of(Kind::B1Plus, std::move(g)); }
    static Space b1(std::string g) { return of(Kind::B1, std::move(g)); }
    static Space bp(RationalExponent p, std::string g)
    {
        if (!p.at_least_one()) throw Error(ErrorCode::InvalidExponent, "ball exponent must be >= 1");
        Space s = of(Kind::Bp, std::move(g));
        s.p = p;
        return s;
    }
    static Space product(std::vector<Space> fs)
    {
        for (std::size_t i = 0; i < fs.size(); ++i)
            for (std::size_t j = i + 1; j < fs.size(); ++j)
                if (fs[i].ground == fs[j].ground)
                    throw Error(ErrorCode::GroundMismatch, "product factors share ground '" + fs[i].ground + "'");
        Space s = of(Kind::Product, "product");
        s.factors = std::move(fs);
        return s;
    }

    bool holds_sets() const { return kind == Kind::Hat || kind == Kind::Sigma; }
    bool holds_vectors() const
    {
        return kind == Kind::Cube || kind == Kind::B1Plus || kind == Kind::B1 || kind == Kind::Bp;
    }

    friend bool operator==(const Space &, const Space &) = default;
};

inline const char *kind_name(Space::Kind k)
{
    switch (k) {
        case Space::Kind::Hat: return "hat";
        case Space::Kind::Sigma: return "sigma";
        case Space::Kind::Cube: return "cube";
        case Space::Kind::B1Plus: return "b1plus";
        case Space::Kind::B1: return "b1";
        case Space::Kind::Bp: return "bp";
        case Space::Kind::Product: return "product";
    }
    return "?";
}

/// A concrete point of some space: a point of X̂, a finite label set
/// (σₙ), a finite-support vector, or a tuple of factor points.
struct Point {
    using Tuple = std::vector<Point>;
    std::variant<HatPoint, LabelSet, FiniteSupportVector, Tuple> value;

    Point() = default;
    Point(HatPoint h) : value(std::move(h)) {}
    Point(LabelSet s) : value(std::move(s)) {}
    Point(FiniteSupportVector v) : value(std::move(v)) {}
    Point(Tuple t) : value(std::move(t)) {}

    bool is_hat() const { return std::holds_alternative<HatPoint>(value); }
    bool is_set() const { return std::holds_alternative<LabelSet>(value); }
    bool is_vector() const { return std::holds_alternative<FiniteSupportVector>(value); }
    bool is_tuple() const { return std::holds_alternative<Tuple>(value); }

    const HatPoint &hat() const { return std::get<HatPoint>(value); }
    const LabelSet &set() const { return std::get<LabelSet>(value); }
    const FiniteSupportVector &vector() const { return std::get<FiniteSupportVector>(value); }
    const Tuple &tuple() const { return std::get<Tuple>(value); }

    friend bool operator==(const Point &, const Point &) = default;
};

/// A coordinate of a (possibly product) point: the factor path, then a label.
struct Coordinate {
    std::vector<std::size_t> path;
    IndexLabel label;

    std::string to_string() const
    {
        std::string s;
        for (auto i : path) s += std::to_string(i) + "/";
        return s + label.to_string();
    }
    friend bool operator==(const Coordinate &, const Coordinate &) = default;
    friend auto operator<=>(const Coordinate &, const Coordinate &) = default;
};

/// Value of a point at a coordinate, reading X̂ points and label sets as
/// {0,1}-vectors (∞ and ∅ are the zero vector).
inline Dyadic coordinate_value(const Point &p, const Coordinate &c, std::size_t depth = 0)
{
    return std::visit(
        [&](const auto &v) -> Dyadic {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Point::Tuple>) {
                if (depth >= c.path.size() || c.path[depth] >= v.size()) return Dyadic{};
                return coordinate_value(v[c.path[depth]], c, depth + 1);
            } else {
                if (depth != c.path.size()) return Dyadic{};
                if constexpr (std::is_same_v<T, HatPoint>)
                    return (!v.is_infinity() && v.label() == c.label) ? Dyadic(1) : Dyadic{};
                else if constexpr (std::is_same_v<T, LabelSet>)
                    return v.contains(c.label) ? Dyadic(1) : Dyadic{};
                else
                    return v.at(c.label);
            }
        },
        p.value);
}

/// All coordinates at which a point is nonzero.
inline std::set<Coordinate> nonzero_coordinates(const Point &p, std::vector<std::size_t> path = {})
{
    std::set<Coordinate> out;
    std::visit(
        [&](const auto &v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Point::Tuple>) {
                for (std::size_t i = 0; i < v.size(); ++i) {
                    auto sub = path;
                    sub.push_back(i);
                    out.merge(nonzero_coordinates(v[i], sub));
                }
            } else if constexpr (std::is_same_v<T, HatPoint>) {
                if (!v.is_infinity()) out.insert({path, v.label()});
            } else if constexpr (std::is_same_v<T, LabelSet>) {
                for (const auto &l : v) out.insert({path, l});
            } else {
                for (const auto &[l, _] : v.entries()) out.insert({path, l});
            }
        },
        p.value);
    return out;
}

struct MembershipReport {
    bool member{true};
    std::string violated; // first violated constraint, empty when member
    bool undecided{false}; // fractional ball exponent, not settled at the requested precision

    static MembershipReport ok() { return {}; }
    static MembershipReport fail(std::string why) { return {false, std::move(why), false}; }
};

/// Σᵢ |xᵢ|^p, the p-th power of the ℓᵖ norm.
inline Dyadic np_power(const FiniteSupportVector &x, std::uint64_t p)
{
    Dyadic s;
    for (const auto &[_, v] : x.entries()) s += v.abs().pow(p);
    return s;
}

/// Enclosure of Σᵢ |xᵢ|^p for a rational exponent.
inline Interval np_power_enclosure(const FiniteSupportVector &x, const RationalExponent &p, std::uint64_t precision)
{
    Interval s = Interval::point(Dyadic{});
    for (const auto &[_, v] : x.entries()) s = s + power_enclosure(v, p, precision);
    return s;
}

namespace detail
{

inline Error ground_mismatch(const Space &s, const char *got)
{
    return Error(ErrorCode::GroundMismatch, std::string("a ") + got + " is not a point of a " + kind_name(s.kind) +
                                                " space over '" + s.ground + "'");
}

inline const char *point_kind(const Point &p)
{
    if (p.is_hat()) return "hat point";
    if (p.is_set()) return "label set";
    if (p.is_vector()) return "vector";
    return "tuple";
}

} // namespace detail

/// Exact membership decision; the fractional-exponent ball is decided at
/// `precision` bits and may come back undecided.
inline MembershipReport member(const Space &space, const Point &point, std::uint64_t precision = 64)
{
    using K = Space::Kind;
    switch (space.kind) {
        case K::Hat:
            if (!point.is_hat()) throw detail::ground_mismatch(space, detail::point_kind(point));
            return MembershipReport::ok();
        case K::Sigma: {
            if (!point.is_set()) throw detail::ground_mismatch(space, detail::point_kind(point));
            auto sz = point.set().size();
            if (sz > space.n)
                return MembershipReport::fail("support size " + std::to_string(sz) + " > " + std::to_string(space.n));
            return MembershipReport::ok();
        }
        case K::Product: {
            if (!point.is_tuple() || point.tuple().size() != space.factors.size())
                throw detail::ground_mismatch(space, detail::point_kind(point));
            for (std::size_t i = 0; i < space.factors.size(); ++i) {
                auto r = member(space.factors[i], point.tuple()[i], precision);
                if (!r.member) {
                    r.violated = "factor " + std::to_string(i) + ": " + r.violated;
                    return r;
                }
            }
            return MembershipReport::ok();
        }
        default: break;
    }
    if (!point.is_vector()) throw detail::ground_mismatch(space, detail::point_kind(point));
    const auto &v = point.vector();
    switch (space.kind) {
        case K::Cube:
            for (const auto &[i, x] : v.entries()) {
                if (std::ranges::find(space.domain, i) == space.domain.end())
                    throw Error(ErrorCode::GroundMismatch, "coordinate " + i.to_string() + " is outside the cube domain");
                if (x.sign() < 0 || x > Dyadic(1))
                    return MembershipReport::fail("coordinate " + i.to_string() + " = " + x.to_string() +
                                                  " outside [0,1]");
            }
            return MembershipReport::ok();
        case K::B1Plus: {
            for (const auto &[i, x] : v.entries())
                if (x.sign() < 0)
                    return MembershipReport::fail("coordinate " + i.to_string() + " = " + x.to_string() + " < 0");
            auto m = l1_mass(v);
            if (m > Dyadic(1)) return MembershipReport::fail("mass " + m.to_string() + " > 1");
            return MembershipReport::ok();
        }
        case K::B1: {
            auto m = l1_mass(v);
            if (m > Dyadic(1)) return MembershipReport::fail("mass " + m.to_string() + " > 1");
            return MembershipReport::ok();
        }
        case K::Bp: {
            if (space.p.is_integer()) {
                auto m = np_power(v, static_cast<std::uint64_t>(space.p.num));
                if (m > Dyadic(1))
                    return MembershipReport::fail("p-mass " + m.to_string() + " > 1");
                return MembershipReport::ok();
            }
            auto enc = np_power_enclosure(v, space.p, precision);
            if (enc.hi <= Dyadic(1)) return MembershipReport::ok();
            if (enc.lo > Dyadic(1)) return MembershipReport::fail("p-mass >= " + enc.lo.to_string() + " > 1");
            return {false, "p-mass undecided at " + std::to_string(precision) + " bits: [" + enc.lo.to_string() + ", " +
                               enc.hi.to_string() + "]",
                    true};
        }
        default: break;
    }
    throw Error(ErrorCode::GroundMismatch, "unhandled space");
}

} // namespace seqcompact

#endif
