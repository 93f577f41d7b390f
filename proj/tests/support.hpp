#ifndef SEQCOMPACT_TESTS_SUPPORT_HPP
#define SEQCOMPACT_TESTS_SUPPORT_HPP

#include "seqcompact/core.hpp"

#include <gtest/gtest.h>

namespace seqcompact::testing
{

inline Dyadic dy(long long num, std::uint64_t exp) { return Dyadic(BigInt(num), exp); }
inline IndexLabel L(const char *s) { return IndexLabel::parse(s); }
inline LabelSet labels(std::initializer_list<const char *> xs)
{
    LabelSet s;
    for (auto x : xs) s.insert(L(x));
    return s;
}

#define EXPECT_ERROR_CODE(stmt, ecode)                                                                                 \
    do {                                                                                                               \
        try {                                                                                                          \
            stmt;                                                                                                      \
            ADD_FAILURE() << "expected " << ::seqcompact::error_name(ecode);                                           \
        } catch (const ::seqcompact::Error &e) {                                                                       \
            EXPECT_EQ(e.code(), ecode) << e.what();                                                                    \
        }                                                                                                              \
    } while (0)

} // namespace seqcompact::testing

#endif
