#include "seqcompact/generators.hpp"
#include "seqcompact/streams.hpp"
#include "support.hpp"

using namespace seqcompact;
using namespace seqcompact::testing;

namespace
{

FPS sets_stream(Space space, std::vector<SetTermCase> cases, std::vector<Point> preamble = {})
{
    FPS s;
    s.space = std::move(space);
    s.modulus = cases.size();
    for (auto &c : cases) s.cases.emplace_back(std::move(c));
    s.preamble = std::move(preamble);
    return s;
}

FPS vector_stream(Space space, std::vector<VectorTermCase> cases, std::vector<Point> preamble = {})
{
    FPS s;
    s.space = std::move(space);
    s.modulus = cases.size();
    for (auto &c : cases) s.cases.emplace_back(std::move(c));
    s.preamble = std::move(preamble);
    return s;
}

// Index of the j-th term kept by restricting to class c mod m past k0,
// computed straight from the selection formula.
std::uint64_t selected(std::uint64_t c, std::uint64_t m, std::uint64_t k0, std::uint64_t j)
{
    return k0 + (c + m - k0 % m) % m + j * m;
}

} // namespace

TEST(FpsEval, Examples)
{
    auto s = sets_stream(Space::sigma(3, "X"), {{labels({"a", "b"}), {{"t"}}}});
    EXPECT_EQ(fps_eval(s, 3), Point(labels({"a", "b", "t#3"})));

    auto parity = sets_stream(Space::sigma(1, "X"), {{labels({"a"}), {}}, {labels({"b"}), {}}});
    EXPECT_EQ(fps_eval(parity, 5), Point(labels({"b"})));

    auto basis = vector_stream(Space::b1plus("I"), {{{}, {{{"t"}, Dyadic(1)}}}});
    EXPECT_EQ(fps_eval(basis, 0), Point(FiniteSupportVector{{L("t#0"), Dyadic(1)}}));
}

TEST(FpsEval, PreambleAndHatTerms)
{
    auto s = sets_stream(Space::hat("X"), {{{}, {{"t"}}}}, {Point(HatPoint(L("z")))});
    EXPECT_EQ(fps_eval(s, 0), Point(HatPoint(L("z"))));
    EXPECT_EQ(fps_eval(s, 4), Point(HatPoint(L("t#4"))));
    auto empty = sets_stream(Space::hat("X"), {{}});
    EXPECT_EQ(fps_eval(empty, 2), Point(HatPoint::infinity()));
}

TEST(FpsEval, GeometricValues)
{
    VectorTermCase c;
    c.fixed.emplace(L("a"), ValueExpr::geom(Dyadic(1), dy(1, 1)));
    auto s = vector_stream(Space::b1plus("I"), {c});
    EXPECT_EQ(fps_eval(s, 0), Point(FiniteSupportVector{{L("a"), Dyadic(1)}}));
    EXPECT_EQ(fps_eval(s, 3), Point(FiniteSupportVector{{L("a"), dy(1, 3)}}));
}

TEST(FpsValidate, Examples)
{
    auto over = sets_stream(Space::sigma(2, "X"), {{labels({"a", "b"}), {{"t"}}}});
    auto v = fps_validate(over);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_NE(v[0].find("3 > 2"), std::string::npos) << v[0];

    VectorTermCase ok;
    ok.fixed.emplace(L("a"), ValueExpr::constant(dy(1, 1)));
    ok.fresh.push_back({{"t"}, dy(1, 1)});
    EXPECT_TRUE(fps_validate(vector_stream(Space::b1plus("I"), {ok})).empty());

    VectorTermCase heavy;
    heavy.fixed.emplace(L("a"), ValueExpr::constant(dy(3, 2)));
    heavy.fresh.push_back({{"t"}, dy(1, 1)});
    auto hv = fps_validate(vector_stream(Space::b1plus("I"), {heavy}));
    ASSERT_FALSE(hv.empty());
    EXPECT_NE(hv[0].find("5/2^2 > 1"), std::string::npos) << hv[0];
}

TEST(FpsValidate, StructuralViolations)
{
    auto wrong_count = sets_stream(Space::sigma(2, "X"), {{}});
    wrong_count.modulus = 2;
    EXPECT_FALSE(fps_validate(wrong_count).empty());

    auto dup = sets_stream(Space::sigma(3, "X"), {{{}, {{"t"}, {"t"}}}});
    EXPECT_FALSE(fps_validate(dup).empty());

    auto collide = sets_stream(Space::sigma(3, "X"), {{labels({"t#4"}), {{"t"}}}});
    EXPECT_FALSE(fps_validate(collide).empty());

    VectorTermCase bad_ratio;
    bad_ratio.fixed.emplace(L("a"), ValueExpr::geom(dy(1, 1), Dyadic(1)));
    EXPECT_FALSE(fps_validate(vector_stream(Space::b1plus("I"), {bad_ratio})).empty());

    auto bad_pre = sets_stream(Space::sigma(1, "X"), {{}}, {Point(labels({"a", "b"}))});
    EXPECT_FALSE(fps_validate(bad_pre).empty());

    EXPECT_ERROR_CODE(require_valid(bad_pre), ErrorCode::NotAnFPS);
}

TEST(FpsRestrict, Examples)
{
    auto parity = sets_stream(Space::sigma(1, "X"), {{labels({"a"}), {}}, {{}, {{"t"}}}});
    auto odd = fps_restrict(parity, 1, 2, 1);
    EXPECT_EQ(odd.modulus, 1u);
    for (std::uint64_t j = 0; j < 20; ++j) EXPECT_EQ(fps_eval(odd, j), fps_eval(parity, 2 * j + 1));

    auto single = sets_stream(Space::sigma(2, "X"), {{labels({"a"}), {{"t"}}}});
    auto third = fps_restrict(single, 0, 3, 0);
    for (std::uint64_t j = 0; j < 20; ++j) EXPECT_EQ(fps_eval(third, j), fps_eval(single, 3 * j));

    auto with_pre = sets_stream(Space::sigma(1, "X"), {{{}, {{"t"}}}}, {Point(labels({"z"})), Point(labels({"y"}))});
    auto past = fps_restrict(with_pre, 0, 1, 2);
    EXPECT_TRUE(past.preamble.empty());
    EXPECT_EQ(fps_eval(past, 0), fps_eval(with_pre, 2));
}

TEST(FpsRestrict, Errors)
{
    auto s = sets_stream(Space::sigma(1, "X"), {{}, {}}, {Point(labels({"z"}))});
    EXPECT_ERROR_CODE(fps_restrict(s, 0, 3, 1), ErrorCode::IncompatibleModulus);
    EXPECT_ERROR_CODE(fps_restrict(s, 4, 4, 1), ErrorCode::IncompatibleModulus);
    EXPECT_ERROR_CODE(fps_restrict(s, 0, 2, 0), ErrorCode::IncompatibleModulus);
    EXPECT_ERROR_CODE(fps_restrict(s, 0, 0, 1), ErrorCode::IncompatibleModulus);
}

TEST(StreamsProps, RestrictionCommutesWithEvaluation)
{
    Rng rng(31);
    for (int i = 0; i < 150; ++i) {
        auto s = i % 2 ? random_ball_fps(rng, i % 4 == 1) : random_sigma_fps(rng, rng.between(1, 4));
        auto m = s.modulus * rng.between(1, 3);
        auto c = rng.below(m);
        auto k0 = s.preamble.size() + rng.below(5);
        auto r = fps_restrict(s, c, m, k0);
        EXPECT_TRUE(fps_validate(r).empty());
        for (std::uint64_t j = 0; j < 50; ++j) ASSERT_EQ(fps_eval(r, j), fps_eval(s, selected(c, m, k0, j)));
        // restricting twice stays closed
        auto r2 = fps_restrict(r, 1, 2, 0);
        for (std::uint64_t j = 0; j < 20; ++j) ASSERT_EQ(fps_eval(r2, j), fps_eval(s, selected(c, m, k0, 2 * j + 1)));
    }
}

TEST(StreamsProps, FreshPartsAreDisjointWithinAClass)
{
    Rng rng(32);
    for (int i = 0; i < 100; ++i) {
        auto s = random_sigma_fps(rng, rng.between(1, 5));
        for (std::uint64_t c = 0; c < s.modulus; ++c) {
            auto first = s.first_in_class(c);
            const auto &fixed = s.cases[c].sets().fixed;
            for (std::uint64_t a = 0; a < 6; ++a)
                for (std::uint64_t b = a + 1; b < 6; ++b) {
                    auto fa = fps_eval(s, first + a * s.modulus).set();
                    auto fb = fps_eval(s, first + b * s.modulus).set();
                    LabelSet common;
                    std::ranges::set_intersection(fa, fb, std::inserter(common, common.end()));
                    EXPECT_EQ(common, fixed);
                }
        }
    }
}

TEST(StreamsProps, EvaluationIsPure)
{
    Rng rng(33);
    for (int i = 0; i < 50; ++i) {
        auto s = random_ball_fps(rng, true);
        for (std::uint64_t k = 0; k < 30; ++k) EXPECT_EQ(fps_eval(s, k), fps_eval(s, k));
        auto bb = as_black_box(s);
        for (std::uint64_t k = 0; k < 30; ++k) EXPECT_EQ(bb.eval(k), fps_eval(s, k));
    }
}

TEST(StreamsProps, GeneratedStreamsValidate)
{
    Rng rng(34);
    for (int i = 0; i < 200; ++i) {
        EXPECT_TRUE(fps_validate(random_ball_fps(rng, false)).empty());
        EXPECT_TRUE(fps_validate(random_ball_fps(rng, true)).empty());
        EXPECT_TRUE(fps_validate(random_sigma_fps(rng, rng.between(1, 5))).empty());
    }
}
