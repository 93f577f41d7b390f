#include "seqcompact/core.hpp"
#include "seqcompact/generators.hpp"
#include "support.hpp"

#include <boost/multiprecision/cpp_int.hpp>

using namespace seqcompact;
using namespace seqcompact::testing;
using Rational = boost::multiprecision::cpp_rational;

namespace
{

Rational as_rational(const Dyadic &d)
{
    return Rational(d.numerator(), BigInt(1) << static_cast<unsigned>(d.exponent()));
}

Dyadic random_dyadic(Rng &rng)
{
    auto e = rng.between(0, 40);
    auto n = static_cast<long long>(rng.below(std::uint64_t{1} << 42)) - (1LL << 41);
    return Dyadic(BigInt(n), e);
}

} // namespace

TEST(Dyadic, CanonicalForm)
{
    EXPECT_EQ(dy(2, 1), Dyadic(1));
    EXPECT_EQ(dy(2, 1).exponent(), 0u);
    EXPECT_EQ(dy(0, 7).exponent(), 0u);
    EXPECT_EQ(dy(6, 3).to_string(), "3/2^2");
    EXPECT_EQ(dy(-4, 4).to_string(), "-1/2^2");
    EXPECT_EQ(Dyadic().to_string(), "0/2^0");
}

TEST(Dyadic, ParseAcceptsOnlyCanonicalText)
{
    EXPECT_EQ(Dyadic::parse("3/2^3"), dy(3, 3));
    EXPECT_EQ(Dyadic::parse("-1/2^0"), Dyadic(-1));
    EXPECT_EQ(Dyadic::parse("0/2^0"), Dyadic());
    for (const char *bad : {"2/2^1", "0/2^3", "1/2", "01/2^1", "1/2^01", "x/2^1", "1/3^1", "", "-0/2^0"})
        EXPECT_ERROR_CODE(Dyadic::parse(bad), ErrorCode::ParseError);
}

TEST(Dyadic, TextRoundTrip)
{
    Rng rng(11);
    for (int i = 0; i < 500; ++i) {
        auto d = random_dyadic(rng);
        EXPECT_EQ(Dyadic::parse(d.to_string()), d);
    }
}

TEST(Dyadic, ArithmeticMatchesRationalOracle)
{
    Rng rng(12);
    for (int i = 0; i < 1000; ++i) {
        auto a = random_dyadic(rng), b = random_dyadic(rng);
        EXPECT_EQ(as_rational(a + b), as_rational(a) + as_rational(b));
        EXPECT_EQ(as_rational(a - b), as_rational(a) - as_rational(b));
        EXPECT_EQ(as_rational(a * b), as_rational(a) * as_rational(b));
        EXPECT_EQ(a < b, as_rational(a) < as_rational(b));
        EXPECT_EQ(a == b, as_rational(a) == as_rational(b));
    }
}

TEST(Dyadic, AddThenSubtractIsBitIdentical)
{
    Rng rng(13);
    for (int i = 0; i < 1000; ++i) {
        auto a = random_dyadic(rng), b = random_dyadic(rng);
        auto back = (a + b) - b;
        EXPECT_EQ(back, a);
        EXPECT_EQ(back.numerator(), a.numerator());
        EXPECT_EQ(back.exponent(), a.exponent());
    }
}

TEST(Dyadic, BitsAndPowers)
{
    auto q = dy(3, 3); // 0.011
    EXPECT_EQ(q.bit(0), 0);
    EXPECT_EQ(q.bit(1), 1);
    EXPECT_EQ(q.bit(2), 1);
    EXPECT_EQ(q.bit(3), 0);
    EXPECT_EQ(dy(1, 1).pow(3), dy(1, 3));
    EXPECT_EQ(dy(3, 2).pow(0), Dyadic(1));
    EXPECT_EQ(dy(3, 2).scaled(2), Dyadic(3));
    EXPECT_EQ(Dyadic(3).scaled(-3), dy(3, 3));
}

TEST(IndexLabel, TextForms)
{
    EXPECT_EQ(L("a").to_string(), "a");
    EXPECT_EQ(L("t#12"), IndexLabel::fresh("t", 12));
    EXPECT_TRUE(L("t#12").is_fresh());
    EXPECT_FALSE(L("a").is_fresh());
    EXPECT_ERROR_CODE(IndexLabel::parse(""), ErrorCode::ParseError);
    EXPECT_ERROR_CODE(IndexLabel::parse("t#"), ErrorCode::ParseError);
    EXPECT_ERROR_CODE(IndexLabel::parse("t#x"), ErrorCode::ParseError);
}

TEST(IndexLabel, NamedBeforeFreshThenComponentwise)
{
    EXPECT_LT(L("z"), L("a#0"));
    EXPECT_LT(L("a"), L("b"));
    EXPECT_LT(L("s#5"), L("t#0"));
    EXPECT_LT(L("t#1"), L("t#2"));
    EXPECT_LT(L("t#2"), L("t#10")); // rank order, not text order
    EXPECT_NE(L("t#1"), L("u#1"));
}

TEST(Support, Examples)
{
    EXPECT_TRUE(support(FiniteSupportVector{}).empty());
    EXPECT_EQ(support({{L("a"), dy(1, 1)}, {L("b"), dy(1, 2)}}), labels({"a", "b"}));
    EXPECT_EQ(support({{L("a"), dy(1, 1)}, {L("b"), Dyadic()}}), labels({"a"}));
}

TEST(L1Mass, Examples)
{
    EXPECT_EQ(l1_mass({}), Dyadic());
    EXPECT_EQ(l1_mass({{L("a"), dy(1, 1)}, {L("b"), dy(-1, 2)}}), dy(3, 2));
    EXPECT_EQ(l1_mass({{L("a"), Dyadic(1)}, {L("b"), dy(1, 1)}}), dy(3, 1));
}

TEST(ChoiceLeast, Examples)
{
    EXPECT_EQ(choice_least(labels({"b", "a"})), L("a"));
    EXPECT_EQ(choice_least(labels({"x"})), L("x"));
    EXPECT_EQ(choice_least(labels({"t#2", "t#1"})), L("t#1"));
    EXPECT_ERROR_CODE(choice_least(LabelSet{}), ErrorCode::EmptySet);
}

TEST(ChoiceLeast, IndependentOfInputOrder)
{
    Rng rng(14);
    for (int i = 0; i < 200; ++i) {
        auto ls = draw_labels(rng, rng.between(1, 8));
        auto expected = *std::ranges::min_element(ls);
        for (int shuffle = 0; shuffle < 4; ++shuffle) {
            std::ranges::rotate(ls, ls.begin() + 1);
            EXPECT_EQ(choice_least(ls), expected);
        }
    }
}

TEST(FiniteSupportVectorProps, SupportEmptyIffZeroAndMassPositive)
{
    Rng rng(15);
    for (int i = 0; i < 300; ++i) {
        auto v = random_b1_vector(rng);
        EXPECT_EQ(support(v).empty(), v.is_zero());
        EXPECT_GE(l1_mass(v), Dyadic());
        EXPECT_EQ(l1_mass(v).is_zero(), v.is_zero());
        for (const auto &[_, x] : v.entries()) EXPECT_FALSE(x.is_zero());
        EXPECT_TRUE((v - v).is_zero());
    }
}

TEST(HatPointTest, InfinityIsDistinct)
{
    EXPECT_TRUE(HatPoint::infinity().is_infinity());
    EXPECT_NE(HatPoint(L("a")), HatPoint::infinity());
    EXPECT_LT(HatPoint(L("z")), HatPoint::infinity());
    EXPECT_EQ(HatPoint::infinity().to_string(), "∞");
}
