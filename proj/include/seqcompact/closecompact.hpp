#ifndef SEQCOMPACT_CLOSECOMPACT_HPP
#define SEQCOMPACT_CLOSECOMPACT_HPP

// Closed-compactness of powers X̂^ω: representable closed sets of X̂, the
// reduction to finite non-empty closed subsets, elementary closed sets, and a
// point-finder for finitely generated FIP systems, generic over the factor.

#include "core.hpp"

#include <concepts>
#include <iterator>
#include <vector>

namespace seqcompact
{

/// A closed subset of X̂ = X ∪ {∞} for an infinite X. Representable closed
/// sets are: a finite S ⊆ X, {∞} ∪ S, or {∞} ∪ (X \ E) for finite E.
class HatClosedSet
{
public:
    enum class Form { Finite, FinitePlusInfinity, Cofinite };

    static HatClosedSet finite(LabelSet s) { return {Form::Finite, std::move(s)}; }
    static HatClosedSet finite_with_infinity(LabelSet s) { return {Form::FinitePlusInfinity, std::move(s)}; }
    static HatClosedSet cofinite(LabelSet excluded) { return {Form::Cofinite, std::move(excluded)}; }
    static HatClosedSet whole() { return cofinite({}); }
    static HatClosedSet empty() { return finite({}); }
    static HatClosedSet only_infinity() { return finite_with_infinity({}); }
    static HatClosedSet singleton(const HatPoint &p)
    {
        return p.is_infinity() ? only_infinity() : finite({p.label()});
    }

    /// {∞} ∪ finite ∪ (X \ excluded) when excluded is present, else finite
    /// (∪ {∞} when contains_infinity).
    static HatClosedSet from_parts(LabelSet finite_part, bool contains_infinity, std::optional<LabelSet> cofinite_excluded)
    {
        if (cofinite_excluded) {
            if (!contains_infinity)
                throw Error(ErrorCode::ParseError, "a cofinite closed set of X̂ must contain ∞");
            LabelSet e;
            std::ranges::set_difference(*cofinite_excluded, finite_part, std::inserter(e, e.end()));
            return cofinite(std::move(e));
        }
        return contains_infinity ? finite_with_infinity(std::move(finite_part)) : finite(std::move(finite_part));
    }

    Form form() const noexcept { return form_; }
    bool contains_infinity() const noexcept { return form_ != Form::Finite; }
    bool is_empty() const noexcept { return form_ == Form::Finite && labels_.empty(); }
    bool is_finite() const noexcept { return form_ != Form::Cofinite; }
    /// Finite part (Finite / FinitePlusInfinity) or excluded set (Cofinite).
    const LabelSet &labels() const noexcept { return labels_; }

    bool contains(const HatPoint &p) const
    {
        if (p.is_infinity()) return contains_infinity();
        if (form_ == Form::Cofinite) return !labels_.contains(p.label());
        return labels_.contains(p.label());
    }

    friend HatClosedSet intersect(const HatClosedSet &a, const HatClosedSet &b)
    {
        using F = Form;
        if (a.form_ == F::Cofinite && b.form_ == F::Cofinite) return cofinite(unite_sets(a.labels_, b.labels_));
        if (a.form_ == F::Cofinite) return intersect(b, a);
        // a is finite (with or without ∞)
        LabelSet s;
        if (b.form_ == F::Cofinite)
            std::ranges::set_difference(a.labels_, b.labels_, std::inserter(s, s.end()));
        else
            std::ranges::set_intersection(a.labels_, b.labels_, std::inserter(s, s.end()));
        bool inf = a.contains_infinity() && b.contains_infinity();
        return inf ? finite_with_infinity(std::move(s)) : finite(std::move(s));
    }

    friend HatClosedSet unite(const HatClosedSet &a, const HatClosedSet &b)
    {
        using F = Form;
        if (a.form_ == F::Cofinite && b.form_ == F::Cofinite) {
            LabelSet e;
            std::ranges::set_intersection(a.labels_, b.labels_, std::inserter(e, e.end()));
            return cofinite(std::move(e));
        }
        if (a.form_ == F::Cofinite) return unite(b, a);
        if (b.form_ == F::Cofinite) {
            LabelSet e;
            std::ranges::set_difference(b.labels_, a.labels_, std::inserter(e, e.end()));
            return cofinite(std::move(e));
        }
        auto s = unite_sets(a.labels_, b.labels_);
        bool inf = a.contains_infinity() || b.contains_infinity();
        return inf ? finite_with_infinity(std::move(s)) : finite(std::move(s));
    }

    std::string to_string() const
    {
        std::string s = "{";
        bool first = true;
        auto put = [&](const std::string &x) {
            s += (first ? "" : ", ") + x;
            first = false;
        };
        if (contains_infinity()) put("∞");
        if (form_ == Form::Cofinite) {
            std::string ex;
            for (const auto &l : labels_) ex += (ex.empty() ? "" : ",") + l.to_string();
            put("X\\{" + ex + "}");
        } else {
            for (const auto &l : labels_) put(l.to_string());
        }
        return s + "}";
    }

    friend bool operator==(const HatClosedSet &, const HatClosedSet &) = default;

private:
    HatClosedSet(Form f, LabelSet l) : form_(f), labels_(std::move(l)) {}

    static LabelSet unite_sets(const LabelSet &a, const LabelSet &b)
    {
        LabelSet s = a;
        s.insert(b.begin(), b.end());
        return s;
    }

    Form form_;
    LabelSet labels_;
};

HatClosedSet intersect(const HatClosedSet &a, const HatClosedSet &b);
HatClosedSet unite(const HatClosedSet &a, const HatClosedSet &b);

/// F̃: {∞} when ∞ ∈ F, otherwise F itself (then finite).
inline HatClosedSet tilde(const HatClosedSet &c)
{
    if (c.is_empty()) throw Error(ErrorCode::EmptySet, "tilde of the empty closed set");
    if (c.contains_infinity()) return HatClosedSet::only_infinity();
    return c;
}

/// What the FIP point-finder needs from a factor space: a lattice of
/// representable closed sets, a reduction of a non-empty closed set to a
/// finite non-empty closed subset, and a choice on reduced sets.
template <class F>
concept ClosedCompactFactor = requires(const F &f, const typename F::closed_set &c, const typename F::point &p) {
    { f.whole() } -> std::same_as<typename F::closed_set>;
    { f.intersect(c, c) } -> std::same_as<typename F::closed_set>;
    { f.unite(c, c) } -> std::same_as<typename F::closed_set>;
    { f.is_empty(c) } -> std::same_as<bool>;
    { f.reduce(c) } -> std::same_as<typename F::closed_set>;
    { f.choose(c) } -> std::same_as<typename F::point>;
    { f.singleton(p) } -> std::same_as<typename F::closed_set>;
    { f.contains(c, p) } -> std::same_as<bool>;
    { f.default_point() } -> std::same_as<typename F::point>;
};

/// X̂ with the tilde reduction and least-label choice.
struct HatFactor {
    using closed_set = HatClosedSet;
    using point = HatPoint;

    closed_set whole() const { return HatClosedSet::whole(); }
    closed_set intersect(const closed_set &a, const closed_set &b) const { return seqcompact::intersect(a, b); }
    closed_set unite(const closed_set &a, const closed_set &b) const { return seqcompact::unite(a, b); }
    bool is_empty(const closed_set &c) const { return c.is_empty(); }
    closed_set reduce(const closed_set &c) const { return tilde(c); }
    point choose(const closed_set &reduced) const
    {
        if (reduced.contains_infinity()) return HatPoint::infinity();
        return HatPoint(choice_least(reduced.labels()));
    }
    closed_set singleton(const point &p) const { return HatClosedSet::singleton(p); }
    bool contains(const closed_set &c, const point &p) const { return c.contains(p); }
    point default_point() const { return HatPoint::infinity(); }
};

/// A finite linearly ordered label set (discrete, so every subset is
/// closed); choice takes the first element.
struct FiniteOrderFactor {
    using closed_set = LabelSet;
    using point = IndexLabel;

    LabelSet universe;

    closed_set whole() const { return universe; }
    closed_set intersect(const closed_set &a, const closed_set &b) const
    {
        LabelSet s;
        std::ranges::set_intersection(a, b, std::inserter(s, s.end()));
        return s;
    }
    closed_set unite(const closed_set &a, const closed_set &b) const
    {
        LabelSet s = a;
        s.insert(b.begin(), b.end());
        return s;
    }
    bool is_empty(const closed_set &c) const { return c.empty(); }
    closed_set reduce(const closed_set &c) const
    {
        if (c.empty()) throw Error(ErrorCode::EmptySet, "reduce of the empty set");
        return c;
    }
    point choose(const closed_set &c) const { return choice_least(c); }
    closed_set singleton(const point &p) const { return {p}; }
    bool contains(const closed_set &c, const point &p) const { return c.contains(p); }
    point default_point() const { return choice_least(universe); }
};

template <class F>
struct Cylinder {
    std::uint64_t coordinate{0};
    typename F::closed_set constraint;
};

/// Finite union of single-coordinate cylinders {x : x_coordinate ∈ C}.
template <class F>
struct ElementaryClosedSetT {
    std::vector<Cylinder<F>> disjuncts;
};

template <class F>
struct FIPProblemT {
    std::vector<ElementaryClosedSetT<F>> constraints;
    std::string ground{"X"};
};

/// Point of the power: explicit values on listed coordinates, the factor's
/// default point elsewhere.
template <class F>
struct PowerPoint {
    std::map<std::uint64_t, typename F::point> values;
    typename F::point fallback;

    typename F::point at(std::uint64_t n) const
    {
        auto it = values.find(n);
        return it == values.end() ? fallback : it->second;
    }
};

/// One pruned branch of the DNF: picking disjunct choices[i] from constraint
/// i makes the conjunction at `coordinate` empty. With `empty_constraint`
/// set, constraint choices.front() has no disjuncts at all.
struct Refutation {
    std::vector<std::size_t> choices;
    std::uint64_t coordinate{0};
    bool empty_constraint{false};
};

struct FipCheckResult {
    bool satisfiable{false};
    std::vector<std::size_t> witness_choices; // one satisfiable DNF term
    std::vector<Refutation> refutations;      // covers the whole DNF when unsatisfiable
};

namespace detail
{

template <class F>
using Conjunction = std::map<std::uint64_t, typename F::closed_set>;

// Depth-first walk of the DNF of ∩ᵢ ∪ⱼ cylinderᵢⱼ. Calls visit(choices,
// conjunction) on every non-empty term; stops early when visit returns false.
template <class F, class Visit>
void walk_dnf(const F &factor, const FIPProblemT<F> &p, std::vector<Refutation> *refutations, Visit &&visit)
{
    for (std::size_t i = 0; i < p.constraints.size(); ++i)
        if (p.constraints[i].disjuncts.empty()) {
            if (refutations) refutations->push_back({{i}, 0, true});
            return;
        }
    std::vector<std::size_t> choices;
    Conjunction<F> conj;
    bool stop = false;
    auto rec = [&](auto &&self, std::size_t i) -> void {
        if (stop) return;
        if (i == p.constraints.size()) {
            if (!visit(std::as_const(choices), std::as_const(conj))) stop = true;
            return;
        }
        const auto &ds = p.constraints[i].disjuncts;
        for (std::size_t j = 0; j < ds.size() && !stop; ++j) {
            const auto &cyl = ds[j];
            auto it = conj.find(cyl.coordinate);
            std::optional<typename F::closed_set> saved;
            typename F::closed_set next = it == conj.end() ? factor.intersect(factor.whole(), cyl.constraint)
                                                           : factor.intersect(it->second, cyl.constraint);
            choices.push_back(j);
            if (factor.is_empty(next)) {
                if (refutations) refutations->push_back({choices, cyl.coordinate, false});
                choices.pop_back();
                continue;
            }
            if (it != conj.end()) saved = it->second;
            conj.insert_or_assign(cyl.coordinate, std::move(next));
            self(self, i + 1);
            if (saved)
                conj.insert_or_assign(cyl.coordinate, std::move(*saved));
            else
                conj.erase(cyl.coordinate);
            choices.pop_back();
        }
    };
    rec(rec, 0);
}

} // namespace detail

template <class F>
    requires ClosedCompactFactor<F>
FipCheckResult fip_check(const F &factor, const FIPProblemT<F> &p)
{
    FipCheckResult r;
    detail::walk_dnf(factor, p, &r.refutations, [&](const auto &choices, const auto &) {
        r.satisfiable = true;
        r.witness_choices = choices;
        return false;
    });
    if (r.satisfiable) r.refutations.clear();
    return r;
}

template <class F>
    requires ClosedCompactFactor<F>
bool satisfies(const F &factor, const PowerPoint<F> &x, const ElementaryClosedSetT<F> &e)
{
    return std::ranges::any_of(e.disjuncts, [&](const Cylinder<F> &c) { return factor.contains(c.constraint, x.at(c.coordinate)); });
}

struct SolveStep {
    std::uint64_t coordinate{0};
    std::string projection; // Fₙ
    std::string reduced;    // Gₙ
    std::string chosen;
};

template <class F>
struct FipSolution {
    PowerPoint<F> point;
    std::vector<SolveStep> steps;
};

/// Coordinate-by-coordinate point-finder: project the current system to
/// coordinate n (the union over non-empty DNF terms of their n-th factor),
/// reduce, choose, pin x_n to the choice and move on. Unconstrained
/// coordinates take the factor's default point.
template <class F, class Describe>
    requires ClosedCompactFactor<F>
FipSolution<F> product_cc_combinator(const F &factor, const FIPProblemT<F> &p, Describe describe)
{
    if (!fip_check(factor, p).satisfiable) throw Error(ErrorCode::Unsatisfiable, "the system has empty intersection");
    std::set<std::uint64_t> coords;
    for (const auto &c : p.constraints)
        for (const auto &d : c.disjuncts) coords.insert(d.coordinate);

    FIPProblemT<F> current = p;
    FipSolution<F> out;
    out.point.fallback = factor.default_point();
    for (auto n : coords) {
        std::optional<typename F::closed_set> projection;
        detail::walk_dnf(factor, current, nullptr, [&](const auto &, const auto &conj) {
            auto it = conj.find(n);
            auto part = it == conj.end() ? factor.whole() : it->second;
            projection = projection ? factor.unite(*projection, part) : part;
            return true;
        });
        // satisfiable by the invariant: the previous choice came from a projection
        auto reduced = factor.reduce(projection.value());
        auto chosen = factor.choose(reduced);
        out.steps.push_back({n, describe(*projection), describe(reduced), describe(factor.singleton(chosen))});
        out.point.values.emplace(n, chosen);
        current.constraints.push_back({{Cylinder<F>{n, factor.singleton(chosen)}}});
    }
    for (const auto &c : p.constraints)
        if (!satisfies(factor, out.point, c)) throw Error(ErrorCode::Unsatisfiable, "internal: solution misses a constraint");
    return out;
}

template <class F>
    requires ClosedCompactFactor<F>
FipSolution<F> product_cc_combinator(const F &factor, const FIPProblemT<F> &p)
{
    return product_cc_combinator(factor, p, [](const auto &) { return std::string(); });
}

using ElementaryClosedSet = ElementaryClosedSetT<HatFactor>;
using FIPProblem = FIPProblemT<HatFactor>;
using HatPowerPoint = PowerPoint<HatFactor>;

inline FipCheckResult fip_check(const FIPProblem &p) { return fip_check(HatFactor{}, p); }

inline FipSolution<HatFactor> fip_solve(const FIPProblem &p)
{
    return product_cc_combinator(HatFactor{}, p, [](const HatClosedSet &c) { return c.to_string(); });
}

} // namespace seqcompact

#endif
