#ifndef SEQCOMPACT_GENERATORS_HPP
#define SEQCOMPACT_GENERATORS_HPP

// Seeded generators for property and acceptance runs. The engine is
// std::mt19937_64 and every draw is a plain modulo reduction of its output,
// so a seed yields the same instances on every platform.

#include "closecompact.hpp"
#include "streams.hpp"

#include <random>

namespace seqcompact
{

class Rng
{
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform-ish draw in [0, n).
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : engine_() % n; }
    /// Draw in [lo, hi].
    std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }
    bool coin() { return (engine_() & 1) != 0; }

private:
    std::mt19937_64 engine_;
};

inline const std::vector<IndexLabel> &label_pool()
{
    static const std::vector<IndexLabel> pool = [] {
        std::vector<IndexLabel> v;
        for (char c = 'a'; c <= 'p'; ++c) v.push_back(IndexLabel::named(std::string(1, c)));
        return v;
    }();
    return pool;
}

/// Non-zero a/2^e with e <= max_exp and value <= budget, if one exists.
inline std::optional<Dyadic> draw_within(Rng &rng, const Dyadic &budget, std::uint64_t max_exp)
{
    auto e = rng.between(0, max_exp);
    auto cap = budget.floor_scaled(e);
    if (cap < 1) return std::nullopt;
    auto cap64 = cap > BigInt(std::uint64_t{1} << 62) ? (std::uint64_t{1} << 62) : cap.convert_to<std::uint64_t>();
    return Dyadic(BigInt(rng.between(1, cap64)), e);
}

inline std::vector<IndexLabel> draw_labels(Rng &rng, std::uint64_t count)
{
    auto pool = label_pool();
    std::vector<IndexLabel> out;
    for (std::uint64_t i = 0; i < count && !pool.empty(); ++i) {
        auto at = rng.below(pool.size());
        out.push_back(pool[at]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(at));
    }
    return out;
}

/// Point of B⁺₁ with at most max_support coordinates of exponent <= max_exp.
inline FiniteSupportVector random_b1plus_vector(Rng &rng, std::uint64_t max_support = 8, std::uint64_t max_exp = 12)
{
    FiniteSupportVector v;
    Dyadic budget(1);
    for (const auto &l : draw_labels(rng, rng.between(0, max_support))) {
        auto x = draw_within(rng, budget, max_exp);
        if (!x) continue;
        budget -= *x;
        v.set(l, *x);
    }
    return v;
}

inline FiniteSupportVector random_b1_vector(Rng &rng, std::uint64_t max_support = 8, std::uint64_t max_exp = 12)
{
    auto magnitudes = random_b1plus_vector(rng, max_support, max_exp);
    FiniteSupportVector v;
    for (const auto &[l, x] : magnitudes.entries()) v.set(l, rng.coin() ? x : -x);
    return v;
}

/// Random valid stream over B⁺₁ (signed = false) or B₁ (signed = true):
/// modulus 1..3, a short preamble, Const/Geom fixed coordinates and up to two
/// fresh families per class, with the class's first-term mass at most 1.
inline FPS random_ball_fps(Rng &rng, bool is_signed)
{
    FPS s;
    s.space = is_signed ? Space::b1("I") : Space::b1plus("I");
    s.modulus = rng.between(1, 3);
    auto sign = [&](Dyadic x) { return is_signed && rng.coin() ? -x : x; };
    auto plen = rng.between(0, 3);
    for (std::uint64_t k = 0; k < plen; ++k) {
        auto v = is_signed ? random_b1_vector(rng, 4, 8) : random_b1plus_vector(rng, 4, 8);
        s.preamble.emplace_back(std::move(v));
    }
    static const char *tags[] = {"s", "t"};
    for (std::uint64_t c = 0; c < s.modulus; ++c) {
        VectorTermCase vc;
        Dyadic budget(1);
        for (const auto &l : draw_labels(rng, rng.between(0, 3))) {
            auto q = draw_within(rng, budget, 8);
            if (!q) continue;
            budget -= *q;
            if (rng.below(3) == 0) {
                auto e = rng.between(0, 4);
                auto r = Dyadic(BigInt(rng.below(std::uint64_t{1} << e)), e);
                vc.fixed.emplace(l, ValueExpr::geom(sign(*q), r));
            } else {
                vc.fixed.emplace(l, ValueExpr::constant(sign(*q)));
            }
        }
        auto nf = rng.between(0, 2);
        for (std::uint64_t f = 0; f < nf; ++f) {
            auto x = draw_within(rng, budget, 8);
            if (!x) continue;
            budget -= *x;
            FreshFamily fam{tags[f], 0, 1};
            if (rng.below(4) == 0) fam = {tags[f], rng.below(5), rng.between(1, 3)};
            vc.fresh.push_back({fam, sign(*x)});
        }
        s.cases.emplace_back(std::move(vc));
    }
    return s;
}

/// Random valid σₙ stream: per class, a fixed part and fresh families with
/// total size at most n.
inline FPS random_sigma_fps(Rng &rng, std::uint64_t n)
{
    FPS s;
    s.space = Space::sigma(n, "X");
    s.modulus = rng.between(1, 3);
    auto plen = rng.between(0, 2);
    for (std::uint64_t k = 0; k < plen; ++k) {
        auto ls = draw_labels(rng, rng.between(0, n));
        s.preamble.emplace_back(LabelSet(ls.begin(), ls.end()));
    }
    static const char *tags[] = {"s", "t", "u", "v", "w"};
    for (std::uint64_t c = 0; c < s.modulus; ++c) {
        SetTermCase sc;
        auto nfixed = rng.between(0, n);
        auto ls = draw_labels(rng, nfixed);
        sc.fixed.insert(ls.begin(), ls.end());
        auto nfresh = rng.between(0, n - nfixed);
        for (std::uint64_t f = 0; f < nfresh && f < 5; ++f) sc.fresh.push_back({tags[f], 0, 1});
        s.cases.emplace_back(std::move(sc));
    }
    return s;
}

inline HatClosedSet random_hat_closed_set(Rng &rng, const std::vector<IndexLabel> &universe)
{
    LabelSet s;
    for (const auto &l : universe)
        if (rng.below(3) == 0) s.insert(l);
    switch (rng.below(4)) {
        case 0: return HatClosedSet::finite_with_infinity(std::move(s));
        case 1: return HatClosedSet::cofinite(std::move(s));
        default: return HatClosedSet::finite(std::move(s));
    }
}

/// Up to 4 constraints of up to 3 cylinders over coordinates 0..3 and the
/// given label universe. With force_infinity, the first cylinder contains ∞.
inline FIPProblem random_fip_problem(Rng &rng, const std::vector<IndexLabel> &universe, bool force_infinity)
{
    FIPProblem p;
    auto nc = rng.between(force_infinity ? 1 : 0, 4);
    for (std::uint64_t i = 0; i < nc; ++i) {
        ElementaryClosedSet e;
        auto nd = rng.between(1, 3);
        for (std::uint64_t j = 0; j < nd; ++j) e.disjuncts.push_back({rng.below(4), random_hat_closed_set(rng, universe)});
        p.constraints.push_back(std::move(e));
    }
    if (force_infinity) {
        auto &first = p.constraints.front().disjuncts.front().constraint;
        if (!first.contains_infinity()) first = HatClosedSet::finite_with_infinity(first.labels());
    }
    return p;
}

} // namespace seqcompact

#endif
