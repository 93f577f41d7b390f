#ifndef SEQCOMPACT_CODEC_HPP
#define SEQCOMPACT_CODEC_HPP

// Dyadic representation of [0,1]^I points: the binary expansion map
// φ(x) = Σₙ εₙ xₙ with εₙ = 2^-(n+1), its terminating section, the level-wise
// encoding of B⁺₁(I) into ∏ₙ σ_{2^(n+1)}, the signed split and the h_p maps.

#include "interval.hpp"
#include "spaces.hpp"
#include "streams.hpp"

#include <span>

namespace seqcompact
{

/// εₙ = 1 / 2^(n+1)
inline Dyadic epsilon(std::uint64_t n) { return Dyadic::pow2_inverse(n + 1); }

struct PhiPartial {
    Dyadic value;
    Dyadic error_bound; // tail Σ_{n >= len} εₙ = 2^-len
};

inline PhiPartial phi_partial(std::span<const int> bits)
{
    Dyadic v;
    for (std::size_t n = 0; n < bits.size(); ++n) {
        if (bits[n] != 0 && bits[n] != 1) throw Error(ErrorCode::OutOfRange, "bits must be 0 or 1");
        if (bits[n]) v += epsilon(n);
    }
    return {v, Dyadic::pow2_inverse(bits.size())};
}

/// Bit description of q ∈ [0,1]: the finite support of the terminating
/// expansion, or the all-ones marker for q = 1.
struct PhiSection {
    bool all_ones{false};
    std::vector<std::uint64_t> bits;

    /// Bits 0..n-1 as a 0/1 list.
    std::vector<int> prefix(std::uint64_t n) const
    {
        std::vector<int> out(n, all_ones ? 1 : 0);
        if (!all_ones)
            for (auto b : bits)
                if (b < n) out[b] = 1;
        return out;
    }
    friend bool operator==(const PhiSection &, const PhiSection &) = default;
};

inline PhiSection phi_section(const Dyadic &q)
{
    if (q.sign() < 0 || q > Dyadic(1)) throw Error(ErrorCode::OutOfRange, q.to_string() + " is outside [0,1]");
    PhiSection s;
    if (q == Dyadic(1)) {
        s.all_ones = true;
        return s;
    }
    for (std::uint64_t n = 0; n < q.exponent(); ++n)
        if (q.bit(n)) s.bits.push_back(n);
    return s;
}

/// Bit supports Zₙ of an encoded point. `levels` holds the labels whose
/// expansion terminates; labels in `all_ones` (value 1) sit on every level.
struct BitLevelFamily {
    std::map<std::uint64_t, LabelSet> levels;
    LabelSet all_ones;

    LabelSet level(std::uint64_t n) const
    {
        LabelSet s = all_ones;
        if (auto it = levels.find(n); it != levels.end()) s.insert(it->second.begin(), it->second.end());
        return s;
    }
    /// One past the highest sparse level (0 when there is none).
    std::uint64_t sparse_height() const { return levels.empty() ? 0 : levels.rbegin()->first + 1; }

    friend bool operator==(const BitLevelFamily &, const BitLevelFamily &) = default;
};

inline BitLevelFamily encode_b1plus(const FiniteSupportVector &v)
{
    auto r = member(Space::b1plus("I"), Point(v));
    if (!r.member) throw Error(ErrorCode::NotInBall, r.violated);
    BitLevelFamily f;
    for (const auto &[i, x] : v.entries()) {
        auto sec = phi_section(x);
        if (sec.all_ones) {
            f.all_ones.insert(i);
            continue;
        }
        for (auto n : sec.bits) f.levels[n].insert(i);
    }
    return f;
}

struct Decoded {
    FiniteSupportVector value;
    Dyadic error_bound;
    bool exact{false};
};

/// Truncates every bit column at `up_to` levels.
inline Decoded decode(const BitLevelFamily &f, std::uint64_t up_to)
{
    Decoded d;
    std::map<IndexLabel, Dyadic> acc;
    for (const auto &[n, labels] : f.levels) {
        if (n >= up_to) break;
        for (const auto &i : labels) acc[i] += epsilon(n);
    }
    for (const auto &i : f.all_ones) acc[i] = Dyadic(1) - Dyadic::pow2_inverse(up_to);
    for (auto &[i, x] : acc) d.value.set(i, x);
    d.error_bound = Dyadic::pow2_inverse(up_to);
    d.exact = f.all_ones.empty() && f.sparse_height() <= up_to;
    return d;
}

/// g applied to the full family: the exact point it denotes.
inline FiniteSupportVector decode_limit(const BitLevelFamily &f)
{
    std::map<IndexLabel, Dyadic> acc;
    for (const auto &[n, labels] : f.levels)
        for (const auto &i : labels)
            if (!f.all_ones.contains(i)) acc[i] += epsilon(n);
    for (const auto &i : f.all_ones) acc[i] = Dyadic(1);
    FiniteSupportVector v;
    for (auto &[i, x] : acc) v.set(i, x);
    return v;
}

/// Σₙ εₙ·|level n| over all levels (each all-ones label contributes Σₙ εₙ = 1).
inline Dyadic level_mass(const BitLevelFamily &f)
{
    Dyadic m(static_cast<long long>(f.all_ones.size()));
    for (const auto &[n, labels] : f.levels) m += epsilon(n) * Dyadic(static_cast<long long>(labels.size()));
    return m;
}

struct SignedSplit {
    FiniteSupportVector plus;
    FiniteSupportVector minus;
};

inline SignedSplit split_signed(const FiniteSupportVector &v)
{
    auto r = member(Space::b1("I"), Point(v));
    if (!r.member) throw Error(ErrorCode::NotInBall, r.violated);
    SignedSplit s;
    for (const auto &[i, x] : v.entries()) {
        if (x.sign() > 0)
            s.plus.set(i, x);
        else
            s.minus.set(i, -x);
    }
    return s;
}

using IntervalVector = std::map<IndexLabel, Interval>;

/// h_p(x)ᵢ = sgn(xᵢ)|xᵢ|^(1/p), each coordinate enclosed to 2^-precision.
inline IntervalVector h_p(const FiniteSupportVector &v, const RationalExponent &p, std::uint64_t precision)
{
    if (!p.at_least_one()) throw Error(ErrorCode::InvalidExponent, "h_p needs p >= 1, got " + p.to_string());
    auto r = member(Space::b1("I"), Point(v));
    if (!r.member) throw Error(ErrorCode::NotInBall, r.violated);
    auto inverse = RationalExponent::make(p.den, p.num);
    IntervalVector out;
    for (const auto &[i, x] : v.entries()) {
        auto m = power_enclosure(x.abs(), inverse, precision);
        out.emplace(i, x.sign() < 0 ? -m : m);
    }
    return out;
}

/// Coordinatewise sgn(y)|y|^p for an integer p; exact on dyadics.
inline FiniteSupportVector h_p_inverse(const FiniteSupportVector &y, std::uint64_t p)
{
    if (p == 0) throw Error(ErrorCode::InvalidExponent, "h_p inverse needs p >= 1");
    FiniteSupportVector out;
    for (const auto &[i, x] : y.entries()) {
        auto m = x.abs().pow(p);
        out.set(i, x.sign() < 0 ? -m : m);
    }
    return out;
}

/// Level-wise encoding of a B⁺₁ stream: a product stream whose factor n is
/// the σ_{2^(n+1)} stream of level-n bit supports, for n < tail_level, plus
/// one factor for level tail_level that stands for every level >= tail_level
/// (those levels carry the same cases and differ only on finitely many terms).
struct LevelStreams {
    FPS levels;
    std::uint64_t tail_level{0};
};

namespace detail
{

inline bool on_level(const Dyadic &q, std::uint64_t n) { return q == Dyadic(1) || q.bit(n) == 1; }

// Highest terminating bit index + 1 of a value in (0,1].
inline std::uint64_t bit_height(const Dyadic &q) { return q == Dyadic(1) ? 0 : q.exponent(); }

} // namespace detail

inline LevelStreams encode_stream(const FPS &s)
{
    if (s.space.kind != Space::Kind::B1Plus)
        throw Error(ErrorCode::SpaceViolation, std::string("level encoding needs a b1plus stream, got ") + kind_name(s.space.kind));
    require_valid(s);

    std::uint64_t tail = 0;
    for (const auto &tc : s.cases) {
        for (const auto &[_, e] : tc.vectors().fixed)
            if (e.kind == ValueExpr::Kind::Const) tail = std::max(tail, detail::bit_height(e.q));
        for (const auto &f : tc.vectors().fresh) tail = std::max(tail, detail::bit_height(f.value));
    }

    // Past this index every geometric coordinate is below ε_tail, so it has
    // no bit on levels 0..tail.
    const auto floor_value = epsilon(tail);
    std::uint64_t settle = 0;
    for (const auto &tc : s.cases)
        for (const auto &[_, e] : tc.vectors().fixed) {
            if (e.kind != ValueExpr::Kind::Geom) continue;
            std::uint64_t k = 0;
            auto below = [&](std::uint64_t kk) { return e.q.abs() * e.r.pow(kk) < floor_value; };
            if (!below(0)) {
                std::uint64_t hi = 1;
                while (!below(hi)) hi *= 2;
                std::uint64_t lo = hi / 2;
                while (lo + 1 < hi) {
                    auto mid = lo + (hi - lo) / 2;
                    (below(mid) ? hi : lo) = mid;
                }
                k = hi;
            }
            settle = std::max(settle, k);
        }
    const auto preamble_len = std::max<std::uint64_t>(s.preamble.size(), settle);

    std::vector<Space> factors;
    for (std::uint64_t n = 0; n <= tail; ++n)
        factors.push_back(Space::sigma(std::uint64_t{1} << (n + 1), s.space.ground + "@" + std::to_string(n)));

    LevelStreams out;
    out.tail_level = tail;
    out.levels.modulus = s.modulus;
    out.levels.space = Space::product(std::move(factors));
    for (std::uint64_t k = 0; k < preamble_len; ++k) {
        auto enc = encode_b1plus(fps_eval(s, k).vector());
        Point::Tuple t;
        for (std::uint64_t n = 0; n <= tail; ++n) t.emplace_back(enc.level(n));
        out.levels.preamble.emplace_back(std::move(t));
    }
    for (const auto &tc : s.cases) {
        TermCase::Factors fs;
        for (std::uint64_t n = 0; n <= tail; ++n) {
            SetTermCase lc;
            for (const auto &[i, e] : tc.vectors().fixed)
                if (e.kind == ValueExpr::Kind::Const && detail::on_level(e.q, n)) lc.fixed.insert(i);
            for (const auto &f : tc.vectors().fresh)
                if (detail::on_level(f.value, n)) lc.fresh.push_back(f.family);
            fs.emplace_back(std::move(lc));
        }
        out.levels.cases.emplace_back(std::move(fs));
    }
    return out;
}

} // namespace seqcompact

#endif
