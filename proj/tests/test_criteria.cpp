#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "ionmem/criteria.hpp"
#include "ionmem/errors.hpp"
#include "support.hpp"

using namespace ionmem;

namespace {

const double kInf = std::numeric_limits<double>::infinity();
const double kTau = 1.0 / 0.03;

}  // namespace

TEST(Idqm, PerfectMemoryPassesWithMarginTwo) {
    const auto v = idqm_verdict(MemoryChannel(1.0, 1.0, 0.0, 0.0));
    EXPECT_TRUE(v.passes);
    EXPECT_DOUBLE_EQ(v.margin, 2.0);
    EXPECT_FALSE(v.squeezing);
}

TEST(Idqm, IonWithLossesFailsOnGainOnly) {
    const auto m = memory_write(fixture_params(), {0.01, 0.05});
    const auto v = idqm_verdict(m);
    EXPECT_FALSE(v.passes);
    EXPECT_FALSE(v.gain_condition);
    EXPECT_LT(m.noise(), kIdqmThreshold);
}

TEST(Idqm, PreamplifiedFiberPasses) {
    const double t = 0.9;
    const auto chain = compose(amplifier_channel(1.0 / t), lossy_channel(1.0 - t, 0, 1));
    const MemoryChannel m(chain.transform()(0, 0) * chain.transform()(0, 0),
                          chain.transform()(1, 1) * chain.transform()(1, 1), chain.noise()(0, 0),
                          chain.noise()(1, 1));
    EXPECT_NEAR(m.gain(), 1.0, 1e-12);
    EXPECT_NEAR(m.noise(), 0.2, 1e-12);
    EXPECT_TRUE(idqm_verdict(m).passes);
}

TEST(Idqm, UnequalQuadratureGainsFlaggedAsSqueezing) {
    const auto v = idqm_verdict(MemoryChannel(0.5, 2.0, 1.0, 1.0));
    EXPECT_TRUE(v.gain_condition);
    EXPECT_TRUE(v.squeezing);
}

TEST(Idqm, ToleranceIsConfigurable) {
    const MemoryChannel m(0.95, 0.95, 0.5, 0.5);
    EXPECT_FALSE(idqm_verdict(m).passes);
    EXPECT_TRUE(idqm_verdict(m, 0.06).passes);
}

TEST(Dmqm, IonNoLosses) {
    EXPECT_NEAR(dmqm_figure(memory_write(fixture_params(), {})), 0.33, 0.005);
}

TEST(Dmqm, BoundaryFails) {
    const auto v = dmqm_verdict(MemoryChannel(0.5, 0.5, 0.5, 0.5));
    EXPECT_DOUBLE_EQ(v.figure, 1.0);
    EXPECT_FALSE(v.passes);
}

TEST(Dmqm, FigureFromQuadratureFields) {
    testing_support::Generator gen(6);
    for (int i = 0; i < 200; ++i) {
        const auto m = memory_store(memory_write(gen.params(), gen.losses()), gen.uniform(0, 30), kTau);
        const double direct = std::sqrt(m.noise_q() * m.noise_p()) / std::sqrt(m.gain_q() * m.gain_p());
        EXPECT_LE(testing_support::relative_error(dmqm_figure(m), direct), 1e-12);
    }
}

TEST(Dmqm, ErasedMemoryThrows) { EXPECT_THROW(dmqm_figure(MemoryChannel(0.0, 0.0, 1.0, 1.0)), MemoryErased); }

TEST(Verdicts, UnitGainDmqmImpliesIdqm) {
    testing_support::Generator gen(10);
    for (int i = 0; i < 1000; ++i) {
        const double n = gen.uniform(0.0, 3.0);
        const MemoryChannel m(1.0, 1.0, n, n);
        const bool dm = dmqm_verdict(m).passes;
        const bool id = idqm_verdict(m).passes;
        EXPECT_EQ(dm, n < 1.0);
        EXPECT_EQ(id, n < 2.0);
        if (dm) EXPECT_TRUE(id);
    }
}

TEST(Lifetime, NoDecayIsUnbounded) {
    const auto l = quantum_lifetime(fixture_params(), {0.01, 0.05}, kInf);
    EXPECT_EQ(l.status, Lifetime::Status::unbounded);
    EXPECT_TRUE(std::isinf(l.seconds));
}

TEST(Lifetime, IonWithLossesInBand) {
    const auto l = quantum_lifetime(fixture_params(), {0.01, 0.05}, kTau);
    ASSERT_EQ(l.status, Lifetime::Status::finite);
    EXPECT_GE(l.seconds, 4.0);
    EXPECT_LE(l.seconds, 12.0);
    const auto m = memory_store(memory_write(fixture_params(), {0.01, 0.05}), l.seconds, kTau);
    EXPECT_LT(std::abs(m.noise() / m.gain() - 1.0), 1e-6);
}

TEST(Lifetime, NotQuantumAtStart) {
    auto p = fixture_params(Fixture::polzik);
    const auto l = quantum_lifetime(p, {0.15, 0.15}, kTau);
    EXPECT_EQ(l.status, Lifetime::Status::not_quantum);
}

TEST(Lifetime, BisectionOnSyntheticFigure) {
    // G = e^{-t}, N = 1 - G/2: the figure reaches 1 at G = 2/3, t = ln 1.5.
    const auto l = solve_lifetime(
        [](double t) {
            const double g = std::exp(-t);
            return MemoryChannel(g, g, 1.0 - g / 2.0, 1.0 - g / 2.0);
        },
        10.0);
    ASSERT_EQ(l.status, Lifetime::Status::finite);
    EXPECT_NEAR(l.seconds, std::log(1.5), 1e-12);
}

TEST(Fiber, MemoryAndNoise) {
    EXPECT_EQ(fiber_idqm_noise(1.0), 0.0);
    EXPECT_DOUBLE_EQ(fiber_idqm_noise(0.5), 1.0);
    const auto m = fiber_memory(0.5);
    EXPECT_DOUBLE_EQ(dmqm_figure(m), 1.0);
    const auto perfect = fiber_memory(1.0);
    EXPECT_EQ(perfect.noise(), 0.0);
    EXPECT_THROW(fiber_idqm_noise(0.0), std::invalid_argument);
    EXPECT_THROW(fiber_idqm_noise(1.5), std::invalid_argument);
}

TEST(Fiber, PreampCompositionHasUnitGainAndTwiceLossNoise) {
    testing_support::Generator gen(17);
    for (int i = 0; i < 200; ++i) {
        const double t = gen.uniform(1e-3, 1.0);
        const auto chain = compose(amplifier_channel(1.0 / t), lossy_channel(1.0 - t, 0, 1));
        EXPECT_NEAR(chain.transform()(0, 0), 1.0, 1e-12);
        EXPECT_NEAR(chain.transform()(1, 1), 1.0, 1e-12);
        EXPECT_NEAR(chain.noise()(0, 0), fiber_idqm_noise(t), 1e-12);
        EXPECT_TRUE(is_completely_positive(chain));
    }
}

TEST(Fiber, IdqmNoiseBelowTwoOnUnitInterval) {
    for (int i = 1; i <= 1000; ++i) {
        const double t = i / 1000.0;
        EXPECT_LT(fiber_idqm_noise(t), 2.0);
    }
    EXPECT_LT(fiber_idqm_noise(1e-12), 2.0);
}

TEST(Fiber, DmqmLimit) {
    const double limit = fiber_dmqm_limit(0.2, 1.5);
    EXPECT_NEAR(limit * 1e6, 75.3, 0.1);
    EXPECT_NEAR(fiber_dmqm_limit(0.4, 1.5), limit / 2.0, 1e-15);
    const double t = fiber_transmission(limit, 0.2, 1.5);
    EXPECT_NEAR(1.0 / t - 1.0, 1.0, 1e-12);
    const double t75 = fiber_transmission(75e-6, 0.2, 1.5);
    EXPECT_NEAR(1.0 / t75 - 1.0, 1.0, 0.01);
}

TEST(Fiber, LifetimeMatchesLimit) {
    const auto l = fiber_lifetime(0.2, 1.5);
    ASSERT_EQ(l.status, Lifetime::Status::finite);
    EXPECT_NEAR(l.seconds, fiber_dmqm_limit(0.2, 1.5), 1e-12);
    EXPECT_NEAR(l.seconds * 1e6, 75.0, 1.0);
}

TEST(Amplifier, RejectsGainBelowOne) { EXPECT_THROW(amplifier_channel(0.5), std::invalid_argument); }
