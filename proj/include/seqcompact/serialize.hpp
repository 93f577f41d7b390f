#ifndef SEQCOMPACT_SERIALIZE_HPP
#define SEQCOMPACT_SERIALIZE_HPP

// JSON documents for streams, points, bit families, FIP problems and reports.
// Output objects keep insertion order so identical values give identical
// bytes. Input objects with fields outside the schema are rejected.

#include "closecompact.hpp"
#include "verify.hpp"

#include <json.hpp>

namespace seqcompact
{

using Json = nlohmann::ordered_json;

namespace json_detail
{

[[noreturn]] inline void fail(const std::string &what) { throw Error(ErrorCode::ParseError, what); }

inline void only_fields(const Json &j, std::initializer_list<std::string_view> allowed, std::string_view where)
{
    if (!j.is_object()) fail(std::string(where) + ": expected an object");
    for (const auto &[k, _] : j.items())
        if (std::ranges::find(allowed, std::string_view(k)) == allowed.end())
            fail(std::string(where) + ": unknown field '" + k + "'");
}

inline const Json &field(const Json &j, const char *name, std::string_view where)
{
    auto it = j.find(name);
    if (it == j.end()) fail(std::string(where) + ": missing field '" + name + "'");
    return *it;
}

inline std::string as_string(const Json &j, std::string_view where)
{
    if (!j.is_string()) fail(std::string(where) + ": expected a string");
    return j.get<std::string>();
}

inline std::uint64_t as_uint(const Json &j, std::string_view where)
{
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
        fail(std::string(where) + ": expected a non-negative integer");
    return j.get<std::uint64_t>();
}

inline bool as_bool(const Json &j, std::string_view where)
{
    if (!j.is_boolean()) fail(std::string(where) + ": expected a boolean");
    return j.get<bool>();
}

inline const Json &as_array(const Json &j, std::string_view where)
{
    if (!j.is_array()) fail(std::string(where) + ": expected an array");
    return j;
}

} // namespace json_detail

// ---- scalars and labels

inline Json to_json(const Dyadic &d) { return d.to_string(); }
inline Json to_json(const IndexLabel &l) { return l.to_string(); }

inline Dyadic dyadic_from_json(const Json &j) { return Dyadic::parse(json_detail::as_string(j, "dyadic")); }
inline IndexLabel label_from_json(const Json &j) { return IndexLabel::parse(json_detail::as_string(j, "label")); }

inline Json to_json(const LabelSet &s)
{
    Json a = Json::array();
    for (const auto &l : s) a.push_back(to_json(l));
    return a;
}

inline LabelSet label_set_from_json(const Json &j)
{
    LabelSet s;
    for (const auto &e : json_detail::as_array(j, "label list"))
        if (!s.insert(label_from_json(e)).second) json_detail::fail("duplicate label " + e.dump());
    return s;
}

inline Json to_json(const FiniteSupportVector &v)
{
    Json o = Json::object();
    for (const auto &[l, x] : v.entries()) o[l.to_string()] = to_json(x);
    return o;
}

inline FiniteSupportVector vector_from_json(const Json &j)
{
    if (!j.is_object()) json_detail::fail("vector: expected an object of label -> dyadic");
    FiniteSupportVector v;
    for (const auto &[k, x] : j.items()) {
        auto d = dyadic_from_json(x);
        if (d.sign() == 0) json_detail::fail("vector: zero value stored at '" + k + "'");
        v.set(IndexLabel::parse(k), d);
    }
    return v;
}

inline Json to_json(const HatPoint &p) { return p.is_infinity() ? Json(nullptr) : to_json(p.label()); }
inline HatPoint hat_point_from_json(const Json &j) { return j.is_null() ? HatPoint::infinity() : HatPoint(label_from_json(j)); }

inline Json to_json(const Interval &i) { return Json{{"lo", to_json(i.lo)}, {"hi", to_json(i.hi)}}; }

// ---- spaces and points

inline std::string space_kind_token(Space::Kind k)
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

inline Json to_json(const Space &s)
{
    Json o{{"kind", space_kind_token(s.kind)}};
    switch (s.kind) {
        case Space::Kind::Sigma: o["n"] = s.n; break;
        case Space::Kind::Cube: {
            Json d = Json::array();
            for (const auto &l : s.domain) d.push_back(to_json(l));
            o["domain"] = d;
            break;
        }
        case Space::Kind::Bp: o["p"] = s.p.to_string(); break;
        case Space::Kind::Product: {
            Json f = Json::array();
            for (const auto &x : s.factors) f.push_back(to_json(x));
            o["factors"] = f;
            return o;
        }
        default: break;
    }
    o["ground"] = s.ground;
    return o;
}

inline Space space_from_json(const Json &j)
{
    using namespace json_detail;
    auto kind = as_string(field(j, "kind", "space"), "space.kind");
    auto ground = [&] { return as_string(field(j, "ground", "space"), "space.ground"); };
    if (kind == "hat" || kind == "b1plus" || kind == "b1") {
        only_fields(j, {"kind", "ground"}, "space");
        if (kind == "hat") return Space::hat(ground());
        return kind == "b1" ? Space::b1(ground()) : Space::b1plus(ground());
    }
    if (kind == "sigma") {
        only_fields(j, {"kind", "n", "ground"}, "space");
        return Space::sigma(as_uint(field(j, "n", "space"), "space.n"), ground());
    }
    if (kind == "cube") {
        only_fields(j, {"kind", "domain", "ground"}, "space");
        std::vector<IndexLabel> d;
        for (const auto &e : as_array(field(j, "domain", "space"), "space.domain")) d.push_back(label_from_json(e));
        if (LabelSet(d.begin(), d.end()).size() != d.size()) fail("space.domain: repeated label");
        return Space::cube(std::move(d), j.contains("ground") ? ground() : "D");
    }
    if (kind == "bp") {
        only_fields(j, {"kind", "p", "ground"}, "space");
        return Space::bp(RationalExponent::parse(as_string(field(j, "p", "space"), "space.p")), ground());
    }
    if (kind == "product") {
        only_fields(j, {"kind", "factors"}, "space");
        std::vector<Space> fs;
        for (const auto &e : as_array(field(j, "factors", "space"), "space.factors")) fs.push_back(space_from_json(e));
        return Space::product(std::move(fs));
    }
    fail("space: unknown kind '" + kind + "'");
}

inline Json to_json(const Point &p)
{
    if (p.is_hat()) return to_json(p.hat());
    if (p.is_set()) return to_json(p.set());
    if (p.is_vector()) return to_json(p.vector());
    Json a = Json::array();
    for (const auto &x : p.tuple()) a.push_back(to_json(x));
    return a;
}

inline Point point_from_json(const Json &j, const Space &space)
{
    switch (space.kind) {
        case Space::Kind::Hat: return Point(hat_point_from_json(j));
        case Space::Kind::Sigma: return Point(label_set_from_json(j));
        case Space::Kind::Product: {
            json_detail::as_array(j, "product point");
            if (j.size() != space.factors.size()) json_detail::fail("product point: wrong number of factors");
            Point::Tuple t;
            for (std::size_t i = 0; i < j.size(); ++i) t.push_back(point_from_json(j[i], space.factors[i]));
            return Point(std::move(t));
        }
        default: return Point(vector_from_json(j));
    }
}

inline Json to_json(const Coordinate &c)
{
    Json path = Json::array();
    for (auto i : c.path) path.push_back(i);
    return Json{{"path", path}, {"label", to_json(c.label)}};
}

/// A bare label string stands for the coordinate with an empty factor path.
inline Coordinate coordinate_from_json(const Json &j)
{
    using namespace json_detail;
    if (j.is_string()) return {{}, label_from_json(j)};
    only_fields(j, {"path", "label"}, "coordinate");
    Coordinate c;
    if (j.contains("path"))
        for (const auto &e : as_array(j["path"], "coordinate.path")) c.path.push_back(as_uint(e, "coordinate.path"));
    c.label = label_from_json(field(j, "label", "coordinate"));
    return c;
}

// ---- streams

inline Json to_json(const ValueExpr &e)
{
    if (e.kind == ValueExpr::Kind::Const) return Json{{"kind", "const"}, {"q", to_json(e.q)}};
    return Json{{"kind", "geom"}, {"q", to_json(e.q)}, {"r", to_json(e.r)}};
}

inline ValueExpr value_expr_from_json(const Json &j)
{
    using namespace json_detail;
    auto kind = as_string(field(j, "kind", "value"), "value.kind");
    if (kind == "const") {
        only_fields(j, {"kind", "q"}, "value");
        return ValueExpr::constant(dyadic_from_json(field(j, "q", "value")));
    }
    if (kind == "geom") {
        only_fields(j, {"kind", "q", "r"}, "value");
        return ValueExpr::geom(dyadic_from_json(field(j, "q", "value")), dyadic_from_json(field(j, "r", "value")));
    }
    fail("value: unknown kind '" + kind + "'");
}

namespace json_detail
{

inline void put_family(Json &o, const FreshFamily &f)
{
    o["tag"] = f.tag;
    if (f.offset != 0 || f.stride != 1) {
        o["offset"] = f.offset;
        o["stride"] = f.stride;
    }
}

inline FreshFamily get_family(const Json &j, std::string_view where)
{
    FreshFamily f;
    f.tag = as_string(field(j, "tag", where), "tag");
    if (j.contains("offset")) f.offset = as_uint(j["offset"], "offset");
    if (j.contains("stride")) f.stride = as_uint(j["stride"], "stride");
    return f;
}

} // namespace json_detail

inline Json to_json(const TermCase &tc, const Space &space)
{
    if (space.kind == Space::Kind::Product) {
        Json fs = Json::array();
        for (std::size_t i = 0; i < tc.factors().size(); ++i) fs.push_back(to_json(tc.factors()[i], space.factors[i]));
        return Json{{"factors", fs}};
    }
    Json fresh = Json::array();
    if (space.holds_sets()) {
        for (const auto &f : tc.sets().fresh) {
            if (f.offset == 0 && f.stride == 1) {
                fresh.push_back(f.tag);
            } else {
                Json o = Json::object();
                json_detail::put_family(o, f);
                fresh.push_back(o);
            }
        }
        return Json{{"fixed", to_json(tc.sets().fixed)}, {"fresh", fresh}};
    }
    Json fixed = Json::object();
    for (const auto &[l, e] : tc.vectors().fixed) fixed[l.to_string()] = to_json(e);
    for (const auto &f : tc.vectors().fresh) {
        Json o = Json::object();
        json_detail::put_family(o, f.family);
        o["value"] = to_json(f.value);
        fresh.push_back(o);
    }
    return Json{{"fixed", fixed}, {"fresh", fresh}};
}

inline TermCase term_case_from_json(const Json &j, const Space &space)
{
    using namespace json_detail;
    if (space.kind == Space::Kind::Product) {
        only_fields(j, {"factors"}, "case");
        const auto &fs = as_array(field(j, "factors", "case"), "case.factors");
        if (fs.size() != space.factors.size()) fail("case: wrong number of factors");
        TermCase::Factors out;
        for (std::size_t i = 0; i < fs.size(); ++i) out.push_back(term_case_from_json(fs[i], space.factors[i]));
        return TermCase(std::move(out));
    }
    only_fields(j, {"fixed", "fresh"}, "case");
    if (space.holds_sets()) {
        SetTermCase c;
        if (j.contains("fixed")) c.fixed = label_set_from_json(j["fixed"]);
        if (j.contains("fresh"))
            for (const auto &e : as_array(j["fresh"], "case.fresh")) {
                if (e.is_string()) {
                    c.fresh.push_back({e.get<std::string>(), 0, 1});
                } else {
                    only_fields(e, {"tag", "offset", "stride"}, "fresh family");
                    c.fresh.push_back(get_family(e, "fresh family"));
                }
            }
        return TermCase(std::move(c));
    }
    VectorTermCase c;
    if (j.contains("fixed")) {
        if (!j["fixed"].is_object()) fail("case.fixed: expected an object of label -> value");
        for (const auto &[k, e] : j["fixed"].items()) c.fixed.emplace(IndexLabel::parse(k), value_expr_from_json(e));
    }
    if (j.contains("fresh"))
        for (const auto &e : as_array(j["fresh"], "case.fresh")) {
            only_fields(e, {"tag", "offset", "stride", "value"}, "fresh coordinate");
            c.fresh.push_back({get_family(e, "fresh coordinate"), dyadic_from_json(field(e, "value", "fresh coordinate"))});
        }
    return TermCase(std::move(c));
}

inline Json to_json(const FPS &s)
{
    Json pre = Json::array();
    for (const auto &p : s.preamble) pre.push_back(to_json(p));
    Json cases = Json::array();
    for (const auto &c : s.cases) cases.push_back(to_json(c, s.space));
    return Json{{"modulus", s.modulus}, {"preamble", pre}, {"cases", cases}, {"space", to_json(s.space)}};
}

inline FPS fps_from_json(const Json &j)
{
    using namespace json_detail;
    only_fields(j, {"modulus", "preamble", "cases", "space"}, "stream");
    FPS s;
    s.space = space_from_json(field(j, "space", "stream"));
    s.modulus = as_uint(field(j, "modulus", "stream"), "stream.modulus");
    if (j.contains("preamble"))
        for (const auto &p : as_array(j["preamble"], "stream.preamble")) s.preamble.push_back(point_from_json(p, s.space));
    for (const auto &c : as_array(field(j, "cases", "stream"), "stream.cases")) s.cases.push_back(term_case_from_json(c, s.space));
    return s;
}

// ---- codec

inline Json to_json(const BitLevelFamily &f)
{
    Json levels = Json::array();
    for (const auto &[n, ls] : f.levels) levels.push_back(Json::array({n, to_json(ls)}));
    Json o{{"levels", levels}};
    if (!f.all_ones.empty()) o["all_ones"] = to_json(f.all_ones);
    return o;
}

inline BitLevelFamily bit_family_from_json(const Json &j)
{
    using namespace json_detail;
    only_fields(j, {"levels", "all_ones"}, "bit family");
    BitLevelFamily f;
    for (const auto &e : as_array(field(j, "levels", "bit family"), "bit family.levels")) {
        if (!e.is_array() || e.size() != 2) fail("bit family.levels: expected [level, [labels]] pairs");
        auto n = as_uint(e[0], "level");
        if (f.levels.contains(n)) fail("bit family.levels: level " + std::to_string(n) + " listed twice");
        auto ls = label_set_from_json(e[1]);
        if (!ls.empty()) f.levels.emplace(n, std::move(ls));
    }
    if (j.contains("all_ones")) f.all_ones = label_set_from_json(j["all_ones"]);
    return f;
}

// ---- closed sets and FIP problems

inline Json to_json(const HatClosedSet &c)
{
    using F = HatClosedSet::Form;
    Json o{{"finite", c.form() == F::Cofinite ? Json::array() : to_json(c.labels())}, {"infinity", c.contains_infinity()}};
    if (c.form() == F::Cofinite) o["cofinite_excluded"] = to_json(c.labels());
    return o;
}

inline HatClosedSet closed_set_from_json(const Json &j)
{
    using namespace json_detail;
    only_fields(j, {"finite", "infinity", "cofinite_excluded"}, "closed set");
    LabelSet finite;
    if (j.contains("finite")) finite = label_set_from_json(j["finite"]);
    bool inf = j.contains("infinity") && as_bool(j["infinity"], "closed set.infinity");
    std::optional<LabelSet> excluded;
    if (j.contains("cofinite_excluded")) excluded = label_set_from_json(j["cofinite_excluded"]);
    return HatClosedSet::from_parts(std::move(finite), inf, std::move(excluded));
}

inline Json to_json(const FIPProblem &p)
{
    Json cs = Json::array();
    for (const auto &c : p.constraints) {
        Json ds = Json::array();
        for (const auto &d : c.disjuncts) ds.push_back(Json{{"coordinate", d.coordinate}, {"set", to_json(d.constraint)}});
        cs.push_back(ds);
    }
    return Json{{"constraints", cs}, {"ground", p.ground}};
}

inline FIPProblem fip_problem_from_json(const Json &j)
{
    using namespace json_detail;
    only_fields(j, {"constraints", "ground"}, "fip problem");
    FIPProblem p;
    if (j.contains("ground")) p.ground = as_string(j["ground"], "fip problem.ground");
    for (const auto &c : as_array(field(j, "constraints", "fip problem"), "fip problem.constraints")) {
        ElementaryClosedSet e;
        for (const auto &d : as_array(c, "constraint")) {
            only_fields(d, {"coordinate", "set"}, "cylinder");
            e.disjuncts.push_back({as_uint(field(d, "coordinate", "cylinder"), "cylinder.coordinate"),
                                   closed_set_from_json(field(d, "set", "cylinder"))});
        }
        p.constraints.push_back(std::move(e));
    }
    return p;
}

inline Json to_json(const FipCheckResult &r)
{
    Json o{{"satisfiable", r.satisfiable}};
    if (r.satisfiable) {
        o["witness_choices"] = r.witness_choices;
        return o;
    }
    Json refs = Json::array();
    for (const auto &x : r.refutations) {
        Json e{{"choices", x.choices}};
        if (x.empty_constraint)
            e["empty_constraint"] = true;
        else
            e["coordinate"] = x.coordinate;
        refs.push_back(e);
    }
    o["refutations"] = refs;
    return o;
}

inline Json to_json(const FipSolution<HatFactor> &s)
{
    Json values = Json::array();
    for (const auto &[n, v] : s.point.values) values.push_back(Json{{"coordinate", n}, {"value", to_json(v)}});
    Json steps = Json::array();
    for (const auto &st : s.steps)
        steps.push_back(Json{{"coordinate", st.coordinate}, {"projection", st.projection}, {"reduced", st.reduced}, {"chosen", st.chosen}});
    return Json{{"point", Json{{"values", values}, {"elsewhere", to_json(s.point.fallback)}}}, {"steps", steps}};
}

// ---- witnesses and reports

inline Json to_json(const Selection &s)
{
    Json stack = Json::array();
    for (const auto &st : s.stack) stack.push_back(Json{{"start", st.start}, {"class", st.cls}, {"modulus", st.modulus}});
    auto p = s.composed();
    return Json{{"stack", stack}, {"composed", Json{{"start", p.start}, {"step", p.step}}}};
}

inline Json to_json(const ConvergenceModulus &m)
{
    Json decays = Json::array();
    for (const auto &d : m.decays) decays.push_back(Json{{"coordinate", to_json(d.coordinate)}, {"q", to_json(d.q)}, {"r", to_json(d.r)}});
    Json escapes = Json::array();
    for (const auto &e : m.escapes) {
        Json o{{"path", e.path}};
        json_detail::put_family(o, e.family);
        escapes.push_back(o);
    }
    return Json{{"decays", decays}, {"escapes", escapes}};
}

inline Json to_json(const WitnessResult &w)
{
    Json o{{"mode", w.mode == WitnessResult::Mode::Certified ? "certified" : "empirical"}};
    if (w.mode == WitnessResult::Mode::Empirical) o["horizon"] = w.horizon;
    o["selection"] = to_json(w.selection);
    o["limit"] = to_json(w.limit);
    if (!w.limit_bounds.empty()) {
        Json b = Json::array();
        for (const auto &[c, i] : w.limit_bounds) b.push_back(Json{{"coordinate", to_json(c)}, {"bounds", to_json(i)}});
        o["limit_bounds"] = b;
    }
    Json trace = Json::array();
    for (const auto &t : w.trace) {
        Json f = Json::object();
        for (const auto &[k, v] : t.fields) f[k] = v;
        trace.push_back(Json{{"step", t.kind}, {"depth", t.level}, {"fields", f}});
    }
    o["trace"] = trace;
    if (w.mode == WitnessResult::Mode::Certified) o["convergence_modulus"] = to_json(w.modulus);
    return o;
}

inline Json to_json(const ConvergenceReport &r)
{
    Json coords = Json::array();
    for (const auto &c : r.checked_coords) coords.push_back(to_json(c));
    Json o{{"checked_coords", coords},     {"epsilon", to_json(r.epsilon)}, {"prefix_depth", r.prefix_depth},
           {"threshold", r.threshold},     {"pass", r.pass},                {"first_failure", nullptr}};
    if (r.first_failure)
        o["first_failure"] = Json{{"position", r.first_failure->position},
                                  {"index", r.first_failure->index},
                                  {"coordinate", to_json(r.first_failure->coordinate)},
                                  {"gap", to_json(r.first_failure->gap)}};
    return o;
}

inline Json to_json(const CrossCheckReport &r)
{
    return Json{{"agree", r.agree},
                {"class", r.cls},
                {"witness_limit", to_json(r.witness_limit)},
                {"oracle_limit", to_json(r.oracle_limit)},
                {"discrepancies", r.discrepancies}};
}

} // namespace seqcompact

#endif
