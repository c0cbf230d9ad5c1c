#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "firmchaos/stability.hpp"

using namespace firmchaos;

namespace {

std::vector<TheoryChannel> uniform_channels(double lambda) {
    std::vector<TheoryChannel> channels;
    for (Theory t : kTheories) channels.push_back({t, LogisticMap(lambda), kDefaultX0, std::nullopt});
    return channels;
}

TheoryChannel channel(double lambda, double x0 = kDefaultX0) {
    return {Theory::managerial, LogisticMap(lambda), x0, std::nullopt};
}

}  // namespace

TEST(ChannelMagnitude, Examples) {
    EXPECT_NEAR(channel_magnitude(channel(2.5), 100000), std::numbers::ln2, 1e-3);
    EXPECT_NEAR(channel_magnitude(channel(4.0), 100000), -std::numbers::ln2, 1e-2);
    EXPECT_EQ(channel_magnitude(channel(1.0, 0.0), 100000), 0.0);
}

TEST(ChannelMagnitude, SaturatedChannelsReportCap) {
    EXPECT_EQ(channel_magnitude(channel(2.0, 0.5), 100, 0), 30.0);
    EXPECT_EQ(channel_magnitude(channel(2.0, 0.5), 100, 0, 12.5), 12.5);
}

TEST(ChannelMagnitude, SignMatchesClassification) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> lam(2.6, 4.0);
    for (int i = 0; i < 60; ++i) {
        const TheoryChannel ch = channel(lam(rng));
        const LyapunovEstimate e = lyapunov_derivative(ch.map, ch.x0, kDefaultTransient, 20000);
        const double m = magnitude_of(e);
        switch (classify(e)) {
            case StabilityClass::stable: EXPECT_GT(m, 0.0) << ch.map.lambda(); break;
            case StabilityClass::chaotic: EXPECT_LT(m, 0.0) << ch.map.lambda(); break;
            case StabilityClass::marginal: break;
        }
    }
}

TEST(PairwiseStable, Examples) {
    EXPECT_TRUE(pairwise_stable(channel(2.5), channel(2.5), 1e-6, 1e-3, 10000));
    EXPECT_FALSE(pairwise_stable(channel(3.9), channel(2.5), 1e-6, 1e-3, 10000));
    EXPECT_FALSE(pairwise_stable(channel(2.5), channel(3.9), 1e-6, 1e-3, 10000));
    const TheoryChannel c = channel(3.2);
    EXPECT_EQ(pairwise_stable(c, c, 1e-6, 1e-3, 10000), trajectories_stay_close(c, 1e-6, 1e-3, 10000));
}

TEST(PairwiseStable, ChaoticChannelBreachesQuickly) {
    // With exponent about 0.5 nats the 1e-6 offset crosses 1e-3 within a few dozen steps.
    EXPECT_FALSE(trajectories_stay_close(channel(3.9), 1e-6, 1e-3, 100));
}

TEST(PairwiseStable, RejectsBadParameters) {
    EXPECT_THROW(pairwise_stable(channel(2.5), channel(2.5), 1e-3, 1e-3, 10), DomainError);
    EXPECT_THROW(pairwise_stable(channel(2.5), channel(2.5), 0.0, 1e-3, 10), DomainError);
    EXPECT_THROW(pairwise_stable(channel(2.5), channel(2.5), 1e-6, 1e-3, 0), DomainError);
}

TEST(PairwiseStable, BreachIsLatchedAcrossHorizons) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> lam(2.5, 4.0);
    for (int i = 0; i < 100; ++i) {
        const TheoryChannel a = channel(lam(rng)), b = channel(lam(rng));
        bool failed = false;
        for (std::size_t h : {1u, 10u, 100u, 1000u, 10000u}) {
            const bool v = pairwise_stable(a, b, 1e-6, 1e-3, h);
            if (failed) {
                EXPECT_FALSE(v);
            }
            failed = failed || !v;
        }
    }
}

TEST(EvaluateFirm, AllFixedPointChannels) {
    const FirmStabilityReport r = evaluate_firm(uniform_channels(2.5), StabilityParams{});
    EXPECT_TRUE(r.firm_stable);
    EXPECT_NEAR(r.total_stability, 8.0 * std::numbers::ln2, 1e-2);
    EXPECT_EQ(r.pairwise.size(), 28u);
    EXPECT_EQ(r.horizon, Horizon::short_1y);
    EXPECT_EQ(r.horizon_steps, 10000u);
}

TEST(EvaluateFirm, OneChaoticChannelFailsItsSevenPairs) {
    for (Theory odd : kTheories) {
        auto channels = uniform_channels(2.5);
        channels[index_of(odd)].map = LogisticMap(3.9);
        const FirmStabilityReport r = evaluate_firm(channels, StabilityParams{});
        EXPECT_FALSE(r.firm_stable);
        std::size_t failed = 0;
        for (const PairVerdict& p : r.pairwise) {
            const bool involves = p.a == odd || p.b == odd;
            EXPECT_EQ(p.stable, !involves);
            failed += !p.stable;
        }
        EXPECT_EQ(failed, 7u);
    }
}

TEST(EvaluateFirm, ReportInvariants) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> lam(2.5, 4.0);
    StabilityParams params;
    params.n = 20000;
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<TheoryChannel> channels;
        for (Theory t : kTheories) channels.push_back({t, LogisticMap(lam(rng)), kDefaultX0, std::nullopt});
        const FirmStabilityReport r = evaluate_firm(channels, params);

        double sum = 0.0;
        for (Theory t : kTheories) sum += r.magnitude(t);
        EXPECT_EQ(r.total_stability, sum);

        bool all = true;
        for (const PairVerdict& p : r.pairwise) all = all && p.stable;
        EXPECT_EQ(r.firm_stable, all);

        for (Theory a : kTheories) {
            for (Theory b : kTheories) {
                EXPECT_EQ(r.pair_stable(a, b), r.pair_stable(b, a));
                if (a != b) {
                    const bool direct = pairwise_stable(r.channels[index_of(a)], r.channels[index_of(b)],
                                                        params.delta0, params.epsilon, r.horizon_steps);
                    const auto it = std::find_if(r.pairwise.begin(), r.pairwise.end(), [&](const PairVerdict& p) {
                        return (p.a == a && p.b == b) || (p.a == b && p.b == a);
                    });
                    ASSERT_NE(it, r.pairwise.end());
                    EXPECT_EQ(it->horizon_stable, direct);
                }
            }
        }
    }
}

TEST(EvaluateFirm, DemotesPairsWithExpandingChannel) {
    // Two steps are too few for the chaotic channel to push 1e-6 past 1e-3,
    // so only the exponent cross-check rejects its pairs.
    auto channels = uniform_channels(2.5);
    channels[0].map = LogisticMap(3.9);
    StabilityParams params;
    params.short_steps = 2;
    const FirmStabilityReport r = evaluate_firm(channels, params);
    std::size_t demoted = 0;
    for (const PairVerdict& p : r.pairwise) {
        if (p.demoted) {
            EXPECT_TRUE(p.horizon_stable);
            EXPECT_FALSE(p.stable);
            EXPECT_TRUE(p.a == Theory::classical_organization || p.b == Theory::classical_organization);
            ++demoted;
        }
    }
    EXPECT_EQ(demoted, 7u);
    EXPECT_FALSE(r.firm_stable);
}

TEST(EvaluateFirm, LongHorizonUsesLongSteps) {
    StabilityParams params;
    params.horizon = Horizon::long_3y;
    params.n = 1000;
    const FirmStabilityReport r = evaluate_firm(uniform_channels(2.5), params);
    EXPECT_EQ(r.horizon_steps, 30000u);
    EXPECT_TRUE(r.firm_stable);
}

TEST(EvaluateFirm, ChannelSetErrors) {
    auto seven = uniform_channels(2.5);
    seven.pop_back();
    EXPECT_THROW(evaluate_firm(seven, StabilityParams{}), TheorySetError);
    auto dup = uniform_channels(2.5);
    dup[7].theory = dup[0].theory;
    EXPECT_THROW(evaluate_firm(dup, StabilityParams{}), TheorySetError);
}

TEST(EvaluateFirm, OrdersChannelsByTheory) {
    auto channels = uniform_channels(2.5);
    std::reverse(channels.begin(), channels.end());
    channels.front().map = LogisticMap(2.8);
    StabilityParams params;
    params.n = 1000;
    const FirmStabilityReport r = evaluate_firm(channels, params);
    for (std::size_t i = 0; i < kTheoryCount; ++i) EXPECT_EQ(r.channels[i].theory, kTheories[i]);
    EXPECT_EQ(r.channels.back().map.lambda(), 2.8);
}

TEST(EvaluateFirm, DeterministicAcrossThreadCounts) {
    std::vector<TheoryChannel> channels;
    double l = 2.6;
    for (Theory t : kTheories) channels.push_back({t, LogisticMap(l += 0.17), kDefaultX0, std::nullopt});
    StabilityParams params;
    params.threads = 1;
    const FirmStabilityReport a = evaluate_firm(channels, params);
    params.threads = 8;
    const FirmStabilityReport b = evaluate_firm(channels, params);
    EXPECT_EQ(a.magnitudes, b.magnitudes);
    EXPECT_EQ(a.total_stability, b.total_stability);
}

TEST(Horizon, Parsing) {
    EXPECT_EQ(parse_horizon("short"), Horizon::short_1y);
    EXPECT_EQ(parse_horizon("long_3y"), Horizon::long_3y);
    EXPECT_FALSE(parse_horizon("forever"));
    EXPECT_EQ(to_string(Horizon::long_3y), "long_3y");
}
