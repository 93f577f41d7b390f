#include "seqcompact/generators.hpp"
#include "seqcompact/verify.hpp"
#include "support.hpp"
#include "witness_streams.hpp"

using namespace seqcompact;
using namespace seqcompact::testing;

namespace
{

FPS ball(std::vector<VectorTermCase> cases, bool is_signed = false)
{
    FPS s;
    s.space = is_signed ? Space::b1("I") : Space::b1plus("I");
    s.modulus = cases.size();
    for (auto &c : cases) s.cases.emplace_back(std::move(c));
    return s;
}

FPS basis_stream()
{
    VectorTermCase c;
    c.fresh.push_back({{"t"}, Dyadic(1)});
    return ball({c});
}

VectorTermCase fixed(const char *l, ValueExpr e)
{
    VectorTermCase c;
    c.fixed.emplace(L(l), std::move(e));
    return c;
}

std::vector<Coordinate> fresh_coords(std::uint64_t count)
{
    std::vector<Coordinate> out;
    for (std::uint64_t r = 0; r < count; ++r) out.push_back({{}, IndexLabel::fresh("t", r)});
    return out;
}

} // namespace

TEST(BruteLimit, Examples)
{
    auto b = brute_limit(basis_stream());
    ASSERT_EQ(b.size(), 1u);
    EXPECT_TRUE(b[0].vector().is_zero());

    auto g = brute_limit(ball({fixed("a", ValueExpr::geom(Dyadic(1), dy(1, 1)))}));
    EXPECT_TRUE(g[0].vector().is_zero());

    auto parity = brute_limit(ball({fixed("a", ValueExpr::constant(dy(1, 1))), fixed("b", ValueExpr::constant(dy(1, 1)))}));
    ASSERT_EQ(parity.size(), 2u);
    EXPECT_EQ(parity[0], Point(FiniteSupportVector{{L("a"), dy(1, 1)}}));
    EXPECT_EQ(parity[1], Point(FiniteSupportVector{{L("b"), dy(1, 1)}}));

    FPS bad = basis_stream();
    bad.modulus = 2;
    EXPECT_ERROR_CODE(brute_limit(bad), ErrorCode::NotAnFPS);
}

TEST(CheckConvergence, Examples)
{
    FPS hat;
    hat.space = Space::hat("X");
    hat.cases.emplace_back(SetTermCase{labels({"a"}), {}});
    auto hw = hat_witness(hat);
    for (std::uint64_t e : {0u, 3u, 20u}) {
        auto r = check_convergence(hat, hw, {{{}, L("a")}, {{}, L("b")}}, Dyadic::pow2_inverse(e), 30);
        EXPECT_TRUE(r.pass);
    }

    auto basis = basis_stream();
    auto w = b1plus_witness(basis);
    auto r = check_convergence(basis, w, fresh_coords(10), dy(1, 3), 50);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.prefix_depth, 50u);
    EXPECT_EQ(r.checked_coords.size(), 10u);

    auto wrong = w;
    wrong.limit = Point(FiniteSupportVector{{L("a"), dy(1, 1)}});
    std::vector<Coordinate> coords = fresh_coords(10);
    coords.push_back({{}, L("a")});
    auto f = check_convergence(basis, wrong, coords, dy(1, 3), 50);
    EXPECT_FALSE(f.pass);
    ASSERT_TRUE(f.first_failure.has_value());
    EXPECT_EQ(f.first_failure->coordinate, (Coordinate{{}, L("a")}));
    EXPECT_EQ(f.first_failure->gap, dy(1, 1));
}

TEST(CheckConvergence, Errors)
{
    auto basis = basis_stream();
    auto w = b1plus_witness(basis);
    EXPECT_ERROR_CODE(check_convergence(basis, w, {}, Dyadic(), 10), ErrorCode::OutOfRange);

    auto empty = w;
    empty.selection.stack.clear();
    EXPECT_ERROR_CODE(check_convergence(basis, empty, {}, dy(1, 1), 10), ErrorCode::InvalidSelection);

    // step 1 on a modulus-2 stream mixes classes
    auto parity = ball({fixed("a", ValueExpr::constant(dy(1, 1))), fixed("b", ValueExpr::constant(dy(1, 1)))});
    auto mixing = b1plus_witness(parity);
    mixing.selection.stack = {{0, 0, 1}};
    EXPECT_ERROR_CODE(check_convergence(parity, mixing, {}, dy(1, 1), 10), ErrorCode::InvalidSelection);
}

TEST(CheckConvergence, DeeperNeverFlipsPassToFail)
{
    Rng rng(71);
    for (int i = 0; i < 120; ++i) {
        auto s = random_any_fps(rng, i);
        auto w = extract(s);
        auto coords = mentioned_coordinates(s, 20);
        for (std::uint64_t depth : {8u, 32u, 128u}) EXPECT_TRUE(check_convergence(s, w, coords, Dyadic::pow2_inverse(10), depth).pass);
    }
}

TEST(CheckConvergence, PerturbedLimitFails)
{
    Rng rng(72);
    int checked = 0;
    for (int i = 0; i < 200; ++i) {
        auto s = random_ball_fps(rng, i % 2 == 1);
        auto w = extract(s);
        auto eps = Dyadic::pow2_inverse(6);
        auto bumped = w.limit.vector();
        auto target = L("zz");
        bumped.set(target, eps);
        auto wrong = w;
        wrong.limit = Point(bumped);
        auto coords = mentioned_coordinates(s, 20);
        coords.push_back({{}, target});
        auto r = check_convergence(s, wrong, coords, eps, 64);
        EXPECT_FALSE(r.pass);
        ++checked;
        // perturbing an existing coordinate by eps also fails
        auto nz = nonzero_coordinates(w.limit);
        if (nz.empty()) continue;
        auto c = *nz.begin();
        auto shifted = w.limit.vector();
        shifted.set(c.label, coordinate_value(w.limit, c) + eps);
        wrong.limit = Point(shifted);
        EXPECT_FALSE(check_convergence(s, wrong, mentioned_coordinates(s, 20), eps, 64).pass);
    }
    EXPECT_EQ(checked, 200);
}

TEST(MentionedCoordinates, CoversPreambleCasesAndFreshRanks)
{
    auto tc = fixed("a", ValueExpr::constant(dy(1, 2)));
    tc.fresh.push_back({{"t"}, dy(1, 1)});
    FPS s = ball({tc});
    s.preamble.emplace_back(FiniteSupportVector{{L("p"), dy(1, 1)}});
    auto c = mentioned_coordinates(s, 3);
    std::vector<Coordinate> expect{{{}, L("a")}, {{}, L("p")}};
    for (const auto &f : fresh_coords(3)) expect.push_back(f);
    EXPECT_EQ(c, expect);
}

TEST(CrossCheck, Examples)
{
    auto b = cross_check(basis_stream());
    EXPECT_TRUE(b.agree);
    EXPECT_TRUE(b.witness_limit.vector().is_zero());

    auto c = cross_check(ball({fixed("a", ValueExpr::constant(dy(3, 2)))}));
    EXPECT_TRUE(c.agree);
    EXPECT_EQ(c.oracle_limit, Point(FiniteSupportVector{{L("a"), dy(3, 2)}}));

    FPS hat;
    hat.space = Space::hat("X");
    hat.cases.emplace_back(SetTermCase{});
    EXPECT_ERROR_CODE(cross_check(hat), ErrorCode::SpaceViolation);
}

TEST(CrossCheck, SeededRandomStreamsAgree)
{
    Rng rng(73);
    for (int i = 0; i < 200; ++i) {
        auto s = random_ball_fps(rng, i >= 100);
        auto r = cross_check(s);
        EXPECT_TRUE(r.agree) << i << ": " << (r.discrepancies.empty() ? "" : r.discrepancies.front());
    }
}
