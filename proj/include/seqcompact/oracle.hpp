#ifndef SEQCOMPACT_ORACLE_HPP
#define SEQCOMPACT_ORACLE_HPP

// Direct pointwise limits of presented streams. Depends on the stream
// presentation only, never on the codec or the witnesses.

#include "streams.hpp"

namespace seqcompact
{

namespace detail
{

inline Point case_limit(const TermCase &tc, const Space &space)
{
    if (space.kind == Space::Kind::Product) {
        Point::Tuple t;
        for (std::size_t i = 0; i < tc.factors().size(); ++i) t.push_back(case_limit(tc.factors()[i], space.factors[i]));
        return Point(std::move(t));
    }
    if (space.holds_sets()) {
        // fresh members are pairwise distinct across terms: every coordinate
        // they touch is eventually 0
        const auto &fixed = tc.sets().fixed;
        if (space.kind == Space::Kind::Hat) {
            if (fixed.empty()) return Point(HatPoint::infinity());
            return Point(HatPoint(*fixed.begin()));
        }
        return Point(fixed);
    }
    FiniteSupportVector v;
    for (const auto &[i, e] : tc.vectors().fixed) v.set(i, e.limit());
    return Point(std::move(v));
}

} // namespace detail

/// Limit of the subsequence along each residue class, indexed by class.
inline std::vector<Point> brute_limit(const FPS &s)
{
    require_valid(s);
    std::vector<Point> out;
    out.reserve(s.cases.size());
    for (const auto &tc : s.cases) out.push_back(detail::case_limit(tc, s.space));
    return out;
}

} // namespace seqcompact

#endif
