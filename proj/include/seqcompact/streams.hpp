#ifndef SEQCOMPACT_STREAMS_HPP
#define SEQCOMPACT_STREAMS_HPP

// Finitely presented sequences: a finite preamble, then one term case per
// residue class mod m. Every witness algorithm is total and exact on this
// class; black-box streams are only handled empirically.

#include "spaces.hpp"

#include <functional>

namespace seqcompact
{

/// Coordinate value stream k ↦ q (Const) or k ↦ q·r^k (Geom, 0 <= r < 1).
struct ValueExpr {
    enum class Kind { Const, Geom };
    Kind kind{Kind::Const};
    Dyadic q;
    Dyadic r;

    static ValueExpr constant(Dyadic q) { return {Kind::Const, std::move(q), Dyadic{}}; }
    static ValueExpr geom(Dyadic q, Dyadic r) { return {Kind::Geom, std::move(q), std::move(r)}; }

    Dyadic at(std::uint64_t k) const { return kind == Kind::Const ? q : q * r.pow(k); }
    Dyadic limit() const { return kind == Kind::Const ? q : Dyadic{}; }

    friend bool operator==(const ValueExpr &, const ValueExpr &) = default;
};

/// Injective label family k ↦ tag#(offset + stride·k).
struct FreshFamily {
    std::string tag;
    std::uint64_t offset{0};
    std::uint64_t stride{1};

    IndexLabel at(std::uint64_t k) const { return IndexLabel::fresh(tag, offset + stride * k); }

    /// Term index k at which this family produces `label`, if any.
    std::optional<std::uint64_t> index_of(const IndexLabel &label) const
    {
        if (!label.is_fresh() || label.text() != tag || label.rank() < offset) return std::nullopt;
        auto d = label.rank() - offset;
        if (d % stride != 0) return std::nullopt;
        return d / stride;
    }

    friend bool operator==(const FreshFamily &, const FreshFamily &) = default;
};

/// F_k = fixed ∪ { family(k) : family ∈ fresh }.
struct SetTermCase {
    LabelSet fixed;
    std::vector<FreshFamily> fresh;
    friend bool operator==(const SetTermCase &, const SetTermCase &) = default;
};

struct FreshCoordinate {
    FreshFamily family;
    Dyadic value;
    friend bool operator==(const FreshCoordinate &, const FreshCoordinate &) = default;
};

/// y_k(i) = fixed[i](k); y_k(family(k)) = value; zero elsewhere.
struct VectorTermCase {
    std::map<IndexLabel, ValueExpr> fixed;
    std::vector<FreshCoordinate> fresh;
    friend bool operator==(const VectorTermCase &, const VectorTermCase &) = default;
};

struct TermCase {
    using Factors = std::vector<TermCase>;
    std::variant<SetTermCase, VectorTermCase, Factors> value;

    TermCase() = default;
    TermCase(SetTermCase c) : value(std::move(c)) {}
    TermCase(VectorTermCase c) : value(std::move(c)) {}
    TermCase(Factors f) : value(std::move(f)) {}

    const SetTermCase &sets() const { return std::get<SetTermCase>(value); }
    const VectorTermCase &vectors() const { return std::get<VectorTermCase>(value); }
    const Factors &factors() const { return std::get<Factors>(value); }

    friend bool operator==(const TermCase &, const TermCase &) = default;
};

/// Finitely presented sequence.
struct FPS {
    std::uint64_t modulus{1};
    std::vector<Point> preamble;
    std::vector<TermCase> cases;
    Space space;

    std::uint64_t class_of(std::uint64_t k) const { return k % modulus; }
    /// Smallest index >= the preamble length lying in residue class c.
    std::uint64_t first_in_class(std::uint64_t c) const
    {
        auto p = static_cast<std::uint64_t>(preamble.size());
        return p + ((c + modulus - p % modulus) % modulus);
    }
    friend bool operator==(const FPS &, const FPS &) = default;
};

/// Pure, re-queryable k ↦ point.
struct BlackBoxStream {
    std::function<Point(std::uint64_t)> eval;
    Space space;
};

inline Point instantiate(const TermCase &tc, const Space &space, std::uint64_t k)
{
    using K = Space::Kind;
    if (space.kind == K::Product) {
        const auto &fs = tc.factors();
        Point::Tuple t;
        t.reserve(fs.size());
        for (std::size_t i = 0; i < fs.size(); ++i) t.push_back(instantiate(fs[i], space.factors.at(i), k));
        return Point(std::move(t));
    }
    if (space.holds_sets()) {
        const auto &c = tc.sets();
        LabelSet s = c.fixed;
        for (const auto &f : c.fresh) s.insert(f.at(k));
        if (space.kind == K::Hat) {
            if (s.empty()) return Point(HatPoint::infinity());
            return Point(HatPoint(*s.begin()));
        }
        return Point(std::move(s));
    }
    const auto &c = tc.vectors();
    FiniteSupportVector v;
    for (const auto &[i, e] : c.fixed) v.set(i, e.at(k));
    for (const auto &f : c.fresh) v.set(f.family.at(k), f.value);
    return Point(std::move(v));
}

inline Point fps_eval(const FPS &s, std::uint64_t k)
{
    if (k < s.preamble.size()) return s.preamble[k];
    return instantiate(s.cases.at(s.class_of(k)), s.space, k);
}

namespace detail
{

inline void collect_tags(const TermCase &tc, const Space &space, std::set<std::string> &tags)
{
    if (space.kind == Space::Kind::Product) {
        for (std::size_t i = 0; i < tc.factors().size(); ++i) collect_tags(tc.factors()[i], space.factors[i], tags);
    } else if (space.holds_sets()) {
        for (const auto &f : tc.sets().fresh) tags.insert(f.tag);
    } else {
        for (const auto &f : tc.vectors().fresh) tags.insert(f.family.tag);
    }
}

inline bool shape_matches(const TermCase &tc, const Space &space)
{
    if (space.kind == Space::Kind::Product) {
        if (!std::holds_alternative<TermCase::Factors>(tc.value)) return false;
        const auto &fs = tc.factors();
        if (fs.size() != space.factors.size()) return false;
        for (std::size_t i = 0; i < fs.size(); ++i)
            if (!shape_matches(fs[i], space.factors[i])) return false;
        return true;
    }
    if (space.holds_sets()) return std::holds_alternative<SetTermCase>(tc.value);
    return std::holds_alternative<VectorTermCase>(tc.value);
}

// Structural constraints of one case, independent of k.
inline std::optional<std::string> case_violation(const TermCase &tc, const Space &space, const std::set<std::string> &tags)
{
    using K = Space::Kind;
    if (space.kind == K::Product) {
        for (std::size_t i = 0; i < tc.factors().size(); ++i)
            if (auto v = case_violation(tc.factors()[i], space.factors[i], tags))
                return "factor " + std::to_string(i) + ": " + *v;
        return std::nullopt;
    }
    auto check_families = [&](const std::vector<const FreshFamily *> &fams) -> std::optional<std::string> {
        std::set<std::string> seen;
        for (const auto *f : fams) {
            if (!seen.insert(f->tag).second) return "fresh family '" + f->tag + "' repeated within a case";
            if (f->stride == 0) return "fresh family '" + f->tag + "' has stride 0";
            if (space.kind == K::Cube) return "cube streams take no fresh families";
        }
        return std::nullopt;
    };
    auto check_fixed_label = [&](const IndexLabel &l) -> std::optional<std::string> {
        if (l.is_fresh() && tags.contains(l.text()))
            return "fixed label " + l.to_string() + " may collide with fresh family '" + l.text() + "'";
        return std::nullopt;
    };
    if (space.holds_sets()) {
        const auto &c = tc.sets();
        std::vector<const FreshFamily *> fams;
        for (const auto &f : c.fresh) fams.push_back(&f);
        if (auto v = check_families(fams)) return v;
        for (const auto &l : c.fixed)
            if (auto v = check_fixed_label(l)) return v;
        if (space.kind == K::Hat && c.fixed.size() + c.fresh.size() > 1)
            return "a hat term has at most one label";
        return std::nullopt;
    }
    const auto &c = tc.vectors();
    std::vector<const FreshFamily *> fams;
    for (const auto &f : c.fresh) {
        fams.push_back(&f.family);
        if (f.value.is_zero()) return "fresh family '" + f.family.tag + "' has zero value";
    }
    if (auto v = check_families(fams)) return v;
    for (const auto &[l, e] : c.fixed) {
        if (auto v = check_fixed_label(l)) return v;
        if (e.q.abs() > Dyadic(1)) return "coordinate " + l.to_string() + ": |q| = " + e.q.abs().to_string() + " > 1";
        if (e.kind == ValueExpr::Kind::Geom && (e.r.sign() < 0 || e.r >= Dyadic(1)))
            return "coordinate " + l.to_string() + ": ratio " + e.r.to_string() + " outside [0,1)";
        if (space.kind == K::Cube && std::ranges::find(space.domain, l) == space.domain.end())
            return "coordinate " + l.to_string() + " outside the cube domain";
    }
    return std::nullopt;
}

} // namespace detail

/// Every violated constraint, in discovery order; empty when the stream is
/// valid. Term magnitudes are non-increasing along a residue class, so the
/// first term of each class is the extremal one for every membership
/// predicate; checking it together with the preamble decides all k.
inline std::vector<std::string> fps_validate(const FPS &s)
{
    std::vector<std::string> out;
    if (s.modulus == 0) {
        out.push_back("modulus must be positive");
        return out;
    }
    if (s.cases.size() != s.modulus) {
        out.push_back("expected " + std::to_string(s.modulus) + " cases, got " + std::to_string(s.cases.size()));
        return out;
    }
    if (s.space.kind == Space::Kind::Bp) {
        out.push_back("bp streams are not supported; map them through h_p first");
        return out;
    }
    std::set<std::string> tags;
    for (std::size_t c = 0; c < s.cases.size(); ++c) {
        if (!detail::shape_matches(s.cases[c], s.space)) {
            out.push_back("case " + std::to_string(c) + " does not match the " + kind_name(s.space.kind) + " space");
            return out;
        }
        detail::collect_tags(s.cases[c], s.space, tags);
    }
    for (std::size_t c = 0; c < s.cases.size(); ++c)
        if (auto v = detail::case_violation(s.cases[c], s.space, tags))
            out.push_back("case " + std::to_string(c) + ": " + *v);
    if (!out.empty()) return out;

    auto check_point = [&](const Point &p, const std::string &where) {
        try {
            auto r = member(s.space, p);
            if (!r.member) out.push_back(where + ": " + r.violated);
        } catch (const Error &e) {
            out.push_back(where + ": " + e.what());
        }
    };
    for (std::size_t k = 0; k < s.preamble.size(); ++k) check_point(s.preamble[k], "preamble[" + std::to_string(k) + "]");
    for (std::uint64_t c = 0; c < s.modulus; ++c) {
        auto k = s.first_in_class(c);
        check_point(fps_eval(s, k), "case " + std::to_string(c) + " at k=" + std::to_string(k));
    }
    return out;
}

inline void require_valid(const FPS &s)
{
    auto v = fps_validate(s);
    if (!v.empty()) throw Error(ErrorCode::NotAnFPS, v.front());
}

namespace detail
{

// Re-indexes a case so that new index j denotes old index first + j·step.
inline TermCase shift_case(const TermCase &tc, const Space &space, std::uint64_t first, std::uint64_t step)
{
    if (space.kind == Space::Kind::Product) {
        TermCase::Factors fs;
        for (std::size_t i = 0; i < tc.factors().size(); ++i)
            fs.push_back(shift_case(tc.factors()[i], space.factors[i], first, step));
        return TermCase(std::move(fs));
    }
    auto shift_family = [&](FreshFamily f) {
        f.offset += f.stride * first;
        f.stride *= step;
        return f;
    };
    if (space.holds_sets()) {
        SetTermCase c = tc.sets();
        for (auto &f : c.fresh) f = shift_family(f);
        return TermCase(std::move(c));
    }
    VectorTermCase c = tc.vectors();
    for (auto &[_, e] : c.fixed)
        if (e.kind == ValueExpr::Kind::Geom) e = ValueExpr::geom(e.q * e.r.pow(first), e.r.pow(step));
    for (auto &f : c.fresh) f.family = shift_family(f.family);
    return TermCase(std::move(c));
}

} // namespace detail

/// Subsequence j ↦ s(first + j·m') with first the least index >= start in
/// class c mod m'. The result is again an FPS, with modulus 1.
inline FPS fps_restrict(const FPS &s, std::uint64_t c, std::uint64_t m_prime, std::uint64_t start)
{
    if (m_prime == 0 || m_prime % s.modulus != 0)
        throw Error(ErrorCode::IncompatibleModulus,
                    std::to_string(m_prime) + " is not a multiple of modulus " + std::to_string(s.modulus));
    if (c >= m_prime) throw Error(ErrorCode::IncompatibleModulus, "class " + std::to_string(c) + " >= " + std::to_string(m_prime));
    if (start < s.preamble.size())
        throw Error(ErrorCode::IncompatibleModulus, "start " + std::to_string(start) + " lies inside the preamble");
    auto first = start + (c + m_prime - start % m_prime) % m_prime;
    FPS r;
    r.modulus = 1;
    r.space = s.space;
    r.cases.push_back(detail::shift_case(s.cases[s.class_of(first)], s.space, first, m_prime));
    return r;
}

/// The factor-i component of a product stream, indexed like the original.
inline FPS fps_project(const FPS &s, std::size_t i)
{
    if (s.space.kind != Space::Kind::Product || i >= s.space.factors.size())
        throw Error(ErrorCode::GroundMismatch, "projection of a non-product stream");
    FPS r;
    r.modulus = s.modulus;
    r.space = s.space.factors[i];
    for (const auto &p : s.preamble) r.preamble.push_back(p.tuple().at(i));
    for (const auto &c : s.cases) r.cases.push_back(c.factors().at(i));
    return r;
}

inline BlackBoxStream as_black_box(FPS s)
{
    Space sp = s.space;
    return {[fps = std::move(s)](std::uint64_t k) { return fps_eval(fps, k); }, std::move(sp)};
}

} // namespace seqcompact

#endif
