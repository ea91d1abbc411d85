#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "crossdock/distributions.hpp"
#include "crossdock/rng.hpp"
#include "crossdock/stats.hpp"

using namespace crossdock;

namespace {

// Known-answer vectors published with Random123 for philox4x32-10.
TEST(Philox, KnownAnswerVectors) {
    using detail::Philox4x32;
    EXPECT_EQ(Philox4x32::apply({0, 0, 0, 0}, {0, 0}),
              (Philox4x32::Counter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
    EXPECT_EQ(Philox4x32::apply({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                                {0xffffffff, 0xffffffff}),
              (Philox4x32::Counter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
    EXPECT_EQ(Philox4x32::apply({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                                {0xa4093822, 0x299f31d0}),
              (Philox4x32::Counter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

std::vector<double> draw(RandomStream s, std::size_t n) {
    std::vector<double> out(n);
    for (auto& u : out) u = s.next_uniform();
    return out;
}

TEST(StreamCreate, SameKeySameSequence) {
    EXPECT_EQ(draw(stream_create(42, SourceId::arrival, 0), 1000),
              draw(stream_create(42, SourceId::arrival, 0), 1000));
}

TEST(StreamCreate, DistinctReplicationDiffers) {
    const auto a = draw(stream_create(42, SourceId::arrival, 0), 1000);
    const auto b = draw(stream_create(42, SourceId::arrival, 1), 1000);
    std::size_t equal = 0;
    for (std::size_t i = 0; i < a.size(); ++i) equal += a[i] == b[i];
    EXPECT_EQ(equal, 0u);
}

TEST(StreamCreate, DistinctSourcesUncorrelated) {
    const auto a = draw(stream_create(42, SourceId::arrival, 0), 100000);
    const auto b = draw(stream_create(42, SourceId::order_type, 0), 100000);
    const double r = sample_covariance(a, b) /
                     std::sqrt(sample_covariance(a, a) * sample_covariance(b, b));
    EXPECT_LT(std::fabs(r), 0.01);
}

TEST(StreamCreate, KeyEquality) {
    EXPECT_EQ((StreamKey{1, SourceId::arrival, 2}), (StreamKey{1, SourceId::arrival, 2}));
    EXPECT_NE((StreamKey{1, SourceId::arrival, 2}), (StreamKey{1, SourceId::arrival, 3}));
    EXPECT_NE((StreamKey{1, SourceId::arrival, 2}), (StreamKey{2, SourceId::arrival, 2}));
    EXPECT_NE((StreamKey{1, SourceId::arrival, 2}), (StreamKey{1, SourceId::shared, 2}));
}

TEST(NextUniform, RangeMeanAndCounter) {
    RandomStream s(7, SourceId::point_choice, 3);
    double sum = 0.0;
    for (int i = 0; i < 1'000'000; ++i) {
        const auto before = s.draws_taken();
        const double u = s.next_uniform();
        ASSERT_EQ(s.draws_taken(), before + 1);
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / 1e6, 0.5, 0.002);
}

TEST(DeriveSeed, MovesToDisjointKeySpace) {
    EXPECT_NE(derive_seed(1, 2), derive_seed(1, 3));
    EXPECT_NE(derive_seed(1, 2), derive_seed(2, 2));
    EXPECT_EQ(derive_seed(9, 4), derive_seed(9, 4));
}

TEST(Exponential, InverseCdfValues) {
    EXPECT_EQ(exponential_inverse(0.0, 3.0), 0.0);
    EXPECT_NEAR(exponential_inverse(1.0 - std::exp(-1.0), 4.5), 4.5, 1e-12);
    // 10 ln 2
    EXPECT_NEAR(exponential_inverse(0.5, 10.0), 6.931471805599453, 1e-12);
}

TEST(Exponential, RejectsNonPositiveMean) {
    RandomStream s(1, SourceId::arrival, 0);
    EXPECT_THROW(sample_exponential(s, 0.0), ConfigError);
    EXPECT_THROW(sample_exponential(s, -1.0), ConfigError);
    EXPECT_EQ(s.draws_taken(), 0u);
}

TEST(Triangular, InverseCdfValues) {
    EXPECT_EQ(triangular_inverse(0.0, 3.0, 7.0, 14.0), 3.0);
    EXPECT_NEAR(triangular_inverse(std::nextafter(1.0, 0.0), 3.0, 7.0, 14.0), 14.0, 1e-6);
    EXPECT_DOUBLE_EQ(triangular_inverse(0.5, 0.0, 1.0, 2.0), 1.0);
    // c = 4/11, u = 0.25 < c: 3 + sqrt(0.25 * 11 * 4)
    EXPECT_NEAR(triangular_inverse(0.25, 3.0, 7.0, 14.0), 3.0 + std::sqrt(11.0), 1e-12);
    EXPECT_NEAR(triangular_inverse(0.25, 3.0, 7.0, 14.0), 6.3166, 1e-4);
}

TEST(Triangular, RejectsBadOrdering) {
    RandomStream s(1, SourceId::arrival, 0);
    EXPECT_THROW(sample_triangular(s, 5.0, 4.0, 6.0), ConfigError);
    EXPECT_THROW(sample_triangular(s, 1.0, 1.0, 1.0), ConfigError);
    EXPECT_THROW(DistributionSpec::triangular(2, 1, 3).validate("x"), ConfigError);
    EXPECT_NO_THROW(DistributionSpec::triangular(1, 1, 3).validate("x"));
}

TEST(InverseTransforms, MonotoneOnGrid) {
    double prev_e = -1.0;
    double prev_t = -1.0;
    double prev_skew = -1.0;
    for (int i = 0; i < 10000; ++i) {
        const double u = i / 10000.0;
        const double e = exponential_inverse(u, 2.0);
        const double t = triangular_inverse(u, 3.0, 7.0, 14.0);
        const double skew = triangular_inverse(u, 0.0, 0.0, 1.0);
        EXPECT_LE(prev_e, e);
        EXPECT_LE(prev_t, t);
        EXPECT_LE(prev_skew, skew);
        EXPECT_GE(t, 3.0);
        EXPECT_LE(t, 14.0);
        prev_e = e;
        prev_t = t;
        prev_skew = skew;
    }
}

TEST(Sampling, OneUniformPerSample) {
    RandomStream s(99, SourceId::manual_service_point_A, 0);
    RandomStream mirror = s;
    for (int k = 0; k < 100; ++k) {
        double x = 0.0;
        if (k % 2 == 0) {
            x = sample_triangular(s, 1.0, 2.0, 4.0);
            EXPECT_DOUBLE_EQ(x, triangular_inverse(mirror.next_uniform(), 1.0, 2.0, 4.0));
        } else {
            x = sample_exponential(s, 5.0);
            EXPECT_DOUBLE_EQ(x, exponential_inverse(mirror.next_uniform(), 5.0));
        }
        EXPECT_EQ(s.draws_taken(), static_cast<std::uint64_t>(k + 1));
    }
}

TEST(Sampling, Moments) {
    RandomStream tri(2024, SourceId::manual_service_point_B, 0);
    RandomStream exp(2024, SourceId::arrival, 0);
    double st = 0.0;
    double se = 0.0;
    for (int i = 0; i < 1'000'000; ++i) {
        const double t = sample_triangular(tri, 3.0, 7.0, 14.0);
        ASSERT_GE(t, 3.0);
        ASSERT_LE(t, 14.0);
        const double e = sample_exponential(exp, 5.0);
        ASSERT_GE(e, 0.0);
        st += t;
        se += e;
    }
    EXPECT_NEAR(st / 1e6, 8.0, 0.005 * 8.0);
    EXPECT_NEAR(se / 1e6, 5.0, 0.005 * 5.0);
}

}  // namespace
