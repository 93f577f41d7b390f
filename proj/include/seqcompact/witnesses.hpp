#ifndef SEQCOMPACT_WITNESSES_HPP
#define SEQCOMPACT_WITNESSES_HPP

// Sequential-compactness witnesses: each maps a finitely presented sequence
// to an infinite index selection and a limit of the selected subsequence.

#include "codec.hpp"
#include "streams.hpp"

#include <algorithm>
#include <functional>

namespace seqcompact
{

/// Arithmetic progression j ↦ start + j·step.
struct Progression {
    std::uint64_t start{0};
    std::uint64_t step{1};

    std::uint64_t element(std::uint64_t j) const { return start + j * step; }
    std::optional<std::uint64_t> index_of(std::uint64_t k) const
    {
        if (k < start || (k - start) % step != 0) return std::nullopt;
        return (k - start) / step;
    }
};

/// One restriction: keep the indices >= start in class cls mod modulus.
struct SelectionStep {
    std::uint64_t start{0};
    std::uint64_t cls{0};
    std::uint64_t modulus{1};
    friend bool operator==(const SelectionStep &, const SelectionStep &) = default;
};

/// A stack of restrictions, each relative to the subsequence left by the
/// previous ones. Always denotes an infinite arithmetic progression.
struct Selection {
    std::vector<SelectionStep> stack;

    Progression composed() const
    {
        Progression p;
        for (const auto &s : stack) {
            auto first = s.start + (s.cls + s.modulus - s.start % s.modulus) % s.modulus;
            p = {p.start + p.step * first, p.step * s.modulus};
        }
        return p;
    }
    std::uint64_t element(std::uint64_t j) const { return composed().element(j); }
    bool valid() const
    {
        return std::ranges::all_of(stack, [](const SelectionStep &s) { return s.modulus > 0 && s.cls < s.modulus; });
    }
    friend bool operator==(const Selection &, const Selection &) = default;
};

struct TraceStep {
    std::string kind;
    std::vector<std::pair<std::string, std::string>> fields;
    unsigned level{0}; // nesting depth inside composed witnesses
    friend bool operator==(const TraceStep &, const TraceStep &) = default;
};

/// How the selected terms approach the limit, read off the residue class
/// the selection lives in: geometric coordinates decay as q·r^k and fresh
/// families touch coordinate tag#(offset + stride·k) only at term k. Every
/// other coordinate of a selected term already equals its limit value.
struct ConvergenceModulus {
    struct Decay {
        Coordinate coordinate;
        Dyadic q;
        Dyadic r;
        friend bool operator==(const Decay &, const Decay &) = default;
    };
    struct Escape {
        std::vector<std::size_t> path;
        FreshFamily family;
        friend bool operator==(const Escape &, const Escape &) = default;
    };
    std::vector<Decay> decays;
    std::vector<Escape> escapes;

    /// Least selection position j such that every later selected term is
    /// within eps of the limit on the given coordinates.
    std::uint64_t threshold(const Progression &sel, const std::vector<Coordinate> &coords, const Dyadic &eps) const
    {
        std::uint64_t t = 0;
        for (const auto &c : coords) {
            for (const auto &d : decays) {
                if (d.coordinate != c) continue;
                auto settled = [&](std::uint64_t j) { return d.q.abs() * d.r.pow(sel.element(j)) < eps; };
                if (settled(0)) continue;
                std::uint64_t hi = 1;
                while (!settled(hi)) hi *= 2;
                std::uint64_t lo = hi / 2;
                while (lo + 1 < hi) {
                    auto mid = lo + (hi - lo) / 2;
                    (settled(mid) ? hi : lo) = mid;
                }
                t = std::max(t, hi);
            }
            for (const auto &e : escapes) {
                if (e.path != c.path) continue;
                if (auto k = e.family.index_of(c.label))
                    if (auto j = sel.index_of(*k)) t = std::max(t, *j + 1);
            }
        }
        return t;
    }
    friend bool operator==(const ConvergenceModulus &, const ConvergenceModulus &) = default;
};

struct WitnessResult {
    enum class Mode { Certified, Empirical };

    Selection selection;
    Point limit;
    Mode mode{Mode::Certified};
    std::uint64_t horizon{0}; // empirical mode only
    std::vector<TraceStep> trace;
    ConvergenceModulus modulus;
    std::map<Coordinate, Interval> limit_bounds; // empirical mode only

    friend bool operator==(const WitnessResult &, const WitnessResult &) = default;
};

namespace detail
{

inline void collect_modulus(const TermCase &tc, const Space &space, std::vector<std::size_t> &path, ConvergenceModulus &m)
{
    if (space.kind == Space::Kind::Product) {
        for (std::size_t i = 0; i < tc.factors().size(); ++i) {
            path.push_back(i);
            collect_modulus(tc.factors()[i], space.factors[i], path, m);
            path.pop_back();
        }
    } else if (space.holds_sets()) {
        for (const auto &f : tc.sets().fresh) m.escapes.push_back({path, f});
    } else {
        for (const auto &[i, e] : tc.vectors().fixed)
            if (e.kind == ValueExpr::Kind::Geom) m.decays.push_back({{path, i}, e.q, e.r});
        for (const auto &f : tc.vectors().fresh) m.escapes.push_back({path, f.family});
    }
}

inline std::string str(std::uint64_t v) { return std::to_string(v); }

inline TraceStep nested(TraceStep t)
{
    ++t.level;
    return t;
}

} // namespace detail

/// Modulus of the residue class that a selection of `s` lives in.
inline ConvergenceModulus modulus_for(const FPS &s, const Selection &sel)
{
    auto p = sel.composed();
    if (p.start < s.preamble.size() || p.step % s.modulus != 0)
        throw Error(ErrorCode::InvalidSelection, "selection does not stay inside one residue class past the preamble");
    ConvergenceModulus m;
    std::vector<std::size_t> path;
    detail::collect_modulus(s.cases[s.class_of(p.start)], s.space, path, m);
    return m;
}

class WitnessRegistry;

inline WitnessResult hat_witness(const FPS &s);
inline WitnessResult scalar_witness(const FPS &s);
inline WitnessResult cube_witness(const FPS &s);
inline WitnessResult sigma_witness(std::uint64_t n, const FPS &s);
inline WitnessResult product_witness(const FPS &s, const WitnessRegistry &registry);
inline WitnessResult b1plus_witness(const FPS &s);
inline WitnessResult b1_witness(const FPS &s);

/// Witness operations by space kind.
class WitnessRegistry
{
public:
    using Fn = std::function<WitnessResult(const FPS &)>;

    void add(Space::Kind k, Fn f) { table_[k] = std::move(f); }
    bool has(Space::Kind k) const { return table_.contains(k); }

    WitnessResult run(const FPS &s) const
    {
        auto it = table_.find(s.space.kind);
        if (it == table_.end())
            throw Error(ErrorCode::UnregisteredFactor, std::string("no witness registered for ") + kind_name(s.space.kind));
        return it->second(s);
    }

    /// Hat, sigma, cube, both ℓ¹ balls and products of these.
    static const WitnessRegistry &standard()
    {
        static const WitnessRegistry r = [] {
            WitnessRegistry reg;
            reg.add(Space::Kind::Hat, hat_witness);
            reg.add(Space::Kind::Sigma, [](const FPS &s) { return sigma_witness(s.space.n, s); });
            reg.add(Space::Kind::Cube, cube_witness);
            reg.add(Space::Kind::B1Plus, b1plus_witness);
            reg.add(Space::Kind::B1, b1_witness);
            reg.add(Space::Kind::Product, [](const FPS &s) { return product_witness(s, standard()); });
            return reg;
        }();
        return r;
    }

private:
    std::map<Space::Kind, Fn> table_;
};

inline WitnessResult extract(const FPS &s) { return WitnessRegistry::standard().run(s); }

namespace detail
{

inline void require_kind(const FPS &s, Space::Kind k)
{
    if (s.space.kind != k)
        throw Error(ErrorCode::SpaceViolation,
                    std::string("expected a ") + kind_name(k) + " stream, got " + kind_name(s.space.kind));
}

struct Nesting {
    std::vector<SelectionStep> steps;
    std::vector<Point> limits;
    std::vector<TraceStep> trace;
};

// Usual diagonalization, finitely many factors: run factor i's witness on
// the stream already restricted by factors 0..i-1.
template <class Project, class Witness>
Nesting nest(FPS current, std::size_t count, Project project, Witness witness)
{
    Nesting out;
    for (std::size_t i = 0; i < count; ++i) {
        auto w = witness(project(current, i), i);
        out.trace.push_back({"factor", {{"index", str(i)}, {"restrictions", str(w.selection.stack.size())}}});
        for (auto &t : w.trace) out.trace.push_back(nested(std::move(t)));
        for (const auto &st : w.selection.stack) {
            current = fps_restrict(current, st.cls, st.modulus, st.start);
            out.steps.push_back(st);
        }
        out.limits.push_back(std::move(w.limit));
    }
    return out;
}

inline void finish(WitnessResult &w, const FPS &s)
{
    w.modulus = modulus_for(s, w.selection);
}

} // namespace detail

/// X̂: a class whose terms are one constant point yields that point (lowest
/// such class first); otherwise the class enumerates a fresh family, is
/// one-to-one, and converges to ∞.
inline WitnessResult hat_witness(const FPS &s)
{
    detail::require_kind(s, Space::Kind::Hat);
    require_valid(s);
    WitnessResult w;
    std::optional<std::uint64_t> constant;
    for (std::uint64_t c = 0; c < s.modulus && !constant; ++c)
        if (s.cases[c].sets().fresh.empty()) constant = c;
    auto c = constant.value_or(0);
    const auto &tc = s.cases[c].sets();
    w.selection.stack.push_back({static_cast<std::uint64_t>(s.preamble.size()), c, s.modulus});
    if (constant) {
        w.limit = tc.fixed.empty() ? HatPoint::infinity() : HatPoint(*tc.fixed.begin());
        w.trace.push_back({"hat", {{"branch", "constant"}, {"class", detail::str(c)}}});
    } else {
        w.limit = HatPoint::infinity();
        w.trace.push_back({"hat", {{"branch", "one-to-one"}, {"class", detail::str(c)}, {"family", tc.fresh.front().tag}}});
    }
    detail::finish(w, s);
    return w;
}

/// [0,1] along one coordinate: Const classes are constant, Geom classes
/// descend to their infimum 0. Takes the lowest class.
inline WitnessResult scalar_witness(const FPS &s)
{
    detail::require_kind(s, Space::Kind::Cube);
    if (s.space.domain.size() != 1) throw Error(ErrorCode::SpaceViolation, "scalar streams have a one-point cube domain");
    require_valid(s);
    const auto &d = s.space.domain.front();
    const auto &fixed = s.cases[0].vectors().fixed;
    auto it = fixed.find(d);
    auto expr = it == fixed.end() ? ValueExpr::constant(Dyadic{}) : it->second;
    WitnessResult w;
    w.selection.stack.push_back({static_cast<std::uint64_t>(s.preamble.size()), 0, s.modulus});
    FiniteSupportVector lim;
    lim.set(d, expr.limit());
    w.limit = lim;
    const char *branch = expr.kind == ValueExpr::Kind::Const ? "constant" : "descending";
    w.trace.push_back({"scalar", {{"coordinate", d.to_string()}, {"class", "0"}, {"monotone", branch},
                                  {"limit", expr.limit().to_string()}}});
    detail::finish(w, s);
    return w;
}

/// [0,1]^D for an enumerated D: scalar witnesses nested along the enumeration.
inline WitnessResult cube_witness(const FPS &s)
{
    detail::require_kind(s, Space::Kind::Cube);
    require_valid(s);
    if (s.space.domain.size() == 1) return scalar_witness(s);
    auto project = [&](const FPS &cur, std::size_t i) {
        const auto &d = s.space.domain[i];
        FPS r;
        r.modulus = cur.modulus;
        r.space = Space::cube({d}, s.space.ground);
        for (const auto &p : cur.preamble) {
            FiniteSupportVector v;
            v.set(d, p.vector().at(d));
            r.preamble.emplace_back(std::move(v));
        }
        for (const auto &tc : cur.cases) {
            VectorTermCase vc;
            if (auto it = tc.vectors().fixed.find(d); it != tc.vectors().fixed.end()) vc.fixed.emplace(d, it->second);
            r.cases.emplace_back(std::move(vc));
        }
        return r;
    };
    WitnessResult w;
    if (s.space.domain.empty()) {
        w.selection.stack.push_back({static_cast<std::uint64_t>(s.preamble.size()), 0, s.modulus});
        w.limit = FiniteSupportVector{};
    } else {
        auto n = detail::nest(s, s.space.domain.size(), project, [](const FPS &f, std::size_t) { return scalar_witness(f); });
        FiniteSupportVector lim;
        for (std::size_t i = 0; i < n.limits.size(); ++i)
            lim.set(s.space.domain[i], n.limits[i].vector().at(s.space.domain[i]));
        w.selection.stack = std::move(n.steps);
        w.limit = lim;
        w.trace = std::move(n.trace);
    }
    detail::finish(w, s);
    return w;
}

/// σₙ(X). On a presented stream, two terms of one class meet exactly in the
/// class's fixed part, so ν for class c is |fixed_c|. ν₀ is the least of
/// these; the lowest class achieving it is kept, R = fixed_c stays in every
/// selected term, and the residual fresh parts F_k \ R are pairwise disjoint
/// in σ_{n-|R|}, hence converge to ∅. The limit is R.
inline WitnessResult sigma_witness(std::uint64_t n, const FPS &s)
{
    detail::require_kind(s, Space::Kind::Sigma);
    if (s.space.n > n)
        throw Error(ErrorCode::SpaceViolation,
                    "stream lives in sigma_" + std::to_string(s.space.n) + ", not sigma_" + std::to_string(n));
    require_valid(s);
    std::uint64_t best = 0;
    for (std::uint64_t c = 1; c < s.modulus; ++c)
        if (s.cases[c].sets().fixed.size() < s.cases[best].sets().fixed.size()) best = c;
    const auto &tc = s.cases[best].sets();
    const auto nu0 = static_cast<std::uint64_t>(tc.fixed.size());

    WitnessResult w;
    w.selection.stack.push_back({static_cast<std::uint64_t>(s.preamble.size()), best, s.modulus});
    w.trace.push_back({"sigma", {{"depth", "0"}, {"budget", detail::str(n)}, {"nu0", detail::str(nu0)},
                                 {"class", detail::str(best)}, {"kept", detail::str(nu0)}}});
    if (nu0 > 0 && !tc.fresh.empty())
        w.trace.push_back({"sigma", {{"depth", "1"}, {"budget", detail::str(n - nu0)}, {"nu0", "0"},
                                     {"class", "0"}, {"kept", "0"}}});
    w.limit = tc.fixed;
    detail::finish(w, s);
    return w;
}

inline WitnessResult product_witness(const FPS &s, const WitnessRegistry &registry)
{
    detail::require_kind(s, Space::Kind::Product);
    for (const auto &f : s.space.factors)
        if (!registry.has(f.kind))
            throw Error(ErrorCode::UnregisteredFactor, std::string("no witness registered for ") + kind_name(f.kind));
    require_valid(s);
    WitnessResult w;
    if (s.space.factors.empty()) {
        w.selection.stack.push_back({static_cast<std::uint64_t>(s.preamble.size()), 0, s.modulus});
        w.limit = Point::Tuple{};
    } else {
        auto n = detail::nest(s, s.space.factors.size(), fps_project,
                              [&](const FPS &f, std::size_t) { return registry.run(f); });
        w.selection.stack = std::move(n.steps);
        w.limit = Point::Tuple(std::move(n.limits));
        w.trace = std::move(n.trace);
    }
    detail::finish(w, s);
    return w;
}

/// B⁺₁(I) through its dyadic representation: encode every term level-wise,
/// take the product witness over the σ_{2^(n+1)} level streams, and map the
/// level limits back through g. Continuity of g carries convergence over.
inline WitnessResult b1plus_witness(const FPS &s)
{
    detail::require_kind(s, Space::Kind::B1Plus);
    require_valid(s);
    auto enc = encode_stream(s);
    WitnessRegistry levels;
    levels.add(Space::Kind::Sigma, [](const FPS &f) { return sigma_witness(f.space.n, f); });
    auto pw = product_witness(enc.levels, levels);

    BitLevelFamily lim;
    const auto &parts = pw.limit.tuple();
    lim.all_ones = parts.back().set();
    for (std::uint64_t n = 0; n < enc.tail_level; ++n) {
        LabelSet finite;
        std::ranges::set_difference(parts[n].set(), lim.all_ones, std::inserter(finite, finite.end()));
        if (!finite.empty()) lim.levels[n] = std::move(finite);
    }
    auto value = decode_limit(lim);
    if (auto r = member(s.space, Point(value)); !r.member)
        throw Error(ErrorCode::SpaceViolation, "decoded limit left the ball: " + r.violated);

    WitnessResult w;
    w.selection = pw.selection;
    w.trace.push_back({"encode", {{"tail_level", detail::str(enc.tail_level)},
                                  {"preamble", detail::str(enc.levels.preamble.size())}}});
    for (auto &t : pw.trace) w.trace.push_back(detail::nested(std::move(t)));
    w.trace.push_back({"decode", {{"levels", detail::str(lim.sparse_height())},
                                  {"all_ones", detail::str(lim.all_ones.size())},
                                  {"mass", l1_mass(value).to_string()}}});
    w.limit = std::move(value);
    detail::finish(w, s);
    return w;
}

namespace detail
{

inline FPS split_stream(const FPS &s)
{
    FPS r;
    r.modulus = s.modulus;
    r.space = Space::product({Space::b1plus(s.space.ground + "+"), Space::b1plus(s.space.ground + "-")});
    for (const auto &p : s.preamble) {
        auto sp = split_signed(p.vector());
        r.preamble.emplace_back(Point::Tuple{Point(sp.plus), Point(sp.minus)});
    }
    for (const auto &tc : s.cases) {
        VectorTermCase plus, minus;
        for (const auto &[i, e] : tc.vectors().fixed) {
            if (e.q.is_zero()) continue;
            auto &side = e.q.sign() > 0 ? plus : minus;
            side.fixed.emplace(i, ValueExpr{e.kind, e.q.abs(), e.r});
        }
        for (const auto &f : tc.vectors().fresh)
            (f.value.sign() > 0 ? plus : minus).fresh.push_back({f.family, f.value.abs()});
        r.cases.emplace_back(TermCase::Factors{TermCase(std::move(plus)), TermCase(std::move(minus))});
    }
    return r;
}

} // namespace detail

/// B₁(I) as the image of B⁺₁ × B⁺₁ under subtraction.
inline WitnessResult b1_witness(const FPS &s)
{
    detail::require_kind(s, Space::Kind::B1);
    require_valid(s);
    auto split = detail::split_stream(s);
    auto pw = product_witness(split, WitnessRegistry::standard());
    const auto &parts = pw.limit.tuple();
    auto value = parts[0].vector() - parts[1].vector();
    if (auto r = member(s.space, Point(value)); !r.member)
        throw Error(ErrorCode::SpaceViolation, "recombined limit left the ball: " + r.violated);

    WitnessResult w;
    w.selection = pw.selection;
    w.trace.push_back({"split", {{"ground", s.space.ground}}});
    for (auto &t : pw.trace) w.trace.push_back(detail::nested(std::move(t)));
    w.trace.push_back({"recombine", {{"mass", l1_mass(value).to_string()}}});
    w.limit = std::move(value);
    detail::finish(w, s);
    return w;
}

namespace detail
{

// Rebuilds a point shaped like `shape` from coordinate values.
inline Point rebuild(const Point &shape, const std::map<Coordinate, Dyadic> &values, std::vector<std::size_t> &path)
{
    auto on_path = [&](const Coordinate &c) { return c.path == path; };
    if (shape.is_tuple()) {
        Point::Tuple t;
        for (std::size_t i = 0; i < shape.tuple().size(); ++i) {
            path.push_back(i);
            t.push_back(rebuild(shape.tuple()[i], values, path));
            path.pop_back();
        }
        return Point(std::move(t));
    }
    if (shape.is_vector()) {
        FiniteSupportVector v;
        for (const auto &[c, x] : values)
            if (on_path(c)) v.set(c.label, x);
        return Point(std::move(v));
    }
    LabelSet s;
    for (const auto &[c, x] : values)
        if (on_path(c) && x == Dyadic(1)) s.insert(c.label);
    if (shape.is_hat()) return s.size() == 1 ? Point(HatPoint(*s.begin())) : Point(HatPoint::infinity());
    return Point(std::move(s));
}

} // namespace detail

/// Best-effort extraction on an opaque stream: scans terms 0..H-1 and keeps
/// the first residue class (smallest modulus, then lowest class) on whose
/// later half every coordinate clusters around its median. Not a proof.
inline WitnessResult empirical_extract(const BlackBoxStream &s, std::uint64_t horizon,
                                       const Dyadic &tolerance = Dyadic::pow2_inverse(10))
{
    if (horizon < 2) throw Error(ErrorCode::HorizonTooSmall, "horizon must be at least 2");
    std::vector<Point> terms;
    terms.reserve(horizon);
    for (std::uint64_t k = 0; k < horizon; ++k) terms.push_back(s.eval(k));

    for (std::uint64_t m = 1; m <= std::max<std::uint64_t>(1, horizon / 2); ++m) {
        for (std::uint64_t c = 0; c < m; ++c) {
            std::vector<std::uint64_t> idx;
            for (auto k = c; k < horizon; k += m) idx.push_back(k);
            if (idx.size() < 2) continue;
            std::vector<std::uint64_t> window(idx.begin() + static_cast<std::ptrdiff_t>(idx.size() / 2), idx.end());
            std::set<Coordinate> coords;
            for (auto k : window) coords.merge(nonzero_coordinates(terms[k]));

            std::map<Coordinate, Dyadic> centre;
            std::map<Coordinate, Interval> bounds;
            bool settled = true;
            for (const auto &coord : coords) {
                std::vector<Dyadic> vals;
                for (auto k : window) vals.push_back(coordinate_value(terms[k], coord));
                std::ranges::sort(vals);
                auto med = vals[(vals.size() - 1) / 2];
                std::vector<Dyadic> cluster;
                for (const auto &v : vals)
                    if ((v - med).abs() <= tolerance) cluster.push_back(v);
                if (cluster.size() * 2 <= vals.size()) {
                    settled = false;
                    break;
                }
                centre[coord] = med;
                bounds[coord] = {cluster.front(), cluster.back()};
            }
            if (!settled) continue;
            WitnessResult w;
            w.mode = WitnessResult::Mode::Empirical;
            w.horizon = horizon;
            w.selection.stack.push_back({c, c, m});
            std::vector<std::size_t> path;
            w.limit = detail::rebuild(terms[window.back()], centre, path);
            w.limit_bounds = std::move(bounds);
            w.trace.push_back({"empirical", {{"modulus", detail::str(m)}, {"class", detail::str(c)},
                                             {"window", detail::str(window.size())},
                                             {"tolerance", tolerance.to_string()}}});
            return w;
        }
    }
    WitnessResult w;
    w.mode = WitnessResult::Mode::Empirical;
    w.horizon = horizon;
    w.selection.stack.push_back({0, 0, 1});
    w.limit = terms.back();
    w.trace.push_back({"empirical", {{"settled", "false"}}});
    return w;
}

} // namespace seqcompact

#endif
