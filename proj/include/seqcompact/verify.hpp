#ifndef SEQCOMPACT_VERIFY_HPP
#define SEQCOMPACT_VERIFY_HPP

#include "oracle.hpp"
#include "witnesses.hpp"

namespace seqcompact
{

struct ConvergenceReport {
    struct Failure {
        std::uint64_t position{0}; // j, the position within the selection
        std::uint64_t index{0};    // k, the term index
        Coordinate coordinate;
        Dyadic gap;
    };

    std::vector<Coordinate> checked_coords;
    Dyadic epsilon;
    std::uint64_t prefix_depth{0};
    std::uint64_t threshold{0};
    bool pass{true};
    std::optional<Failure> first_failure;
};

/// Walks the first `depth` selected terms and checks every term at or past
/// the modulus threshold against the limit on `coords`: |term - limit| < eps.
inline ConvergenceReport check_convergence(const FPS &s, const WitnessResult &w, const std::vector<Coordinate> &coords,
                                           const Dyadic &eps, std::uint64_t depth)
{
    require_valid(s);
    if (!w.selection.valid() || w.selection.stack.empty())
        throw Error(ErrorCode::InvalidSelection, "selection is not a non-empty stack of restrictions");
    auto sel = w.selection.composed();
    if (sel.start < s.preamble.size() || sel.step % s.modulus != 0)
        throw Error(ErrorCode::InvalidSelection, "selection does not stay inside one residue class past the preamble");
    if (eps.sign() <= 0) throw Error(ErrorCode::OutOfRange, "epsilon must be positive");

    ConvergenceReport r;
    r.checked_coords = coords;
    r.epsilon = eps;
    r.prefix_depth = depth;
    r.threshold = w.modulus.threshold(sel, coords, eps);
    for (auto j = r.threshold; j < depth && r.pass; ++j) {
        auto k = sel.element(j);
        auto term = fps_eval(s, k);
        for (const auto &c : coords) {
            auto gap = (coordinate_value(term, c) - coordinate_value(w.limit, c)).abs();
            if (gap >= eps) {
                r.pass = false;
                r.first_failure = ConvergenceReport::Failure{j, k, c, gap};
                break;
            }
        }
    }
    return r;
}

namespace detail
{

inline void mentioned(const TermCase &tc, const Space &space, std::vector<std::size_t> &path, std::uint64_t fresh_count,
                      std::set<Coordinate> &out)
{
    if (space.kind == Space::Kind::Product) {
        for (std::size_t i = 0; i < tc.factors().size(); ++i) {
            path.push_back(i);
            mentioned(tc.factors()[i], space.factors[i], path, fresh_count, out);
            path.pop_back();
        }
        return;
    }
    auto add_family = [&](const FreshFamily &f) {
        for (std::uint64_t r = 0; r < fresh_count; ++r) out.insert({path, IndexLabel::fresh(f.tag, r)});
    };
    if (space.holds_sets()) {
        for (const auto &l : tc.sets().fixed) out.insert({path, l});
        for (const auto &f : tc.sets().fresh) add_family(f);
    } else {
        for (const auto &[l, _] : tc.vectors().fixed) out.insert({path, l});
        for (const auto &f : tc.vectors().fresh) add_family(f.family);
    }
}

} // namespace detail

/// Every label named by the stream (preamble and cases), plus ranks
/// 0..fresh_count-1 of every fresh family.
inline std::vector<Coordinate> mentioned_coordinates(const FPS &s, std::uint64_t fresh_count)
{
    std::set<Coordinate> out;
    for (const auto &p : s.preamble) out.merge(nonzero_coordinates(p));
    std::vector<std::size_t> path;
    for (const auto &tc : s.cases) detail::mentioned(tc, s.space, path, fresh_count, out);
    return {out.begin(), out.end()};
}

struct CrossCheckReport {
    bool agree{true};
    std::uint64_t cls{0};
    Point witness_limit;
    Point oracle_limit;
    std::vector<std::string> discrepancies;
};

/// Limit through the codec witness versus the direct pointwise limit of the
/// class the witness selected.
inline CrossCheckReport cross_check(const FPS &s)
{
    if (s.space.kind != Space::Kind::B1Plus && s.space.kind != Space::Kind::B1)
        throw Error(ErrorCode::SpaceViolation, "cross-check runs on b1plus or b1 streams");
    auto w = s.space.kind == Space::Kind::B1Plus ? b1plus_witness(s) : b1_witness(s);
    auto oracle = brute_limit(s);
    CrossCheckReport r;
    r.cls = s.class_of(w.selection.composed().start);
    r.witness_limit = w.limit;
    r.oracle_limit = oracle.at(r.cls);
    auto coords = nonzero_coordinates(r.witness_limit);
    coords.merge(nonzero_coordinates(r.oracle_limit));
    for (const auto &c : coords) {
        auto a = coordinate_value(r.witness_limit, c);
        auto b = coordinate_value(r.oracle_limit, c);
        if (a != b) r.discrepancies.push_back(c.to_string() + ": witness " + a.to_string() + " vs oracle " + b.to_string());
    }
    r.agree = r.discrepancies.empty();
    return r;
}

} // namespace seqcompact

#endif
