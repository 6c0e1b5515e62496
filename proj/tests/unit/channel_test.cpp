#include <random>
#include <string>

#include <gtest/gtest.h>

#include <rastab/channel.hpp>
#include <rastab/config.hpp>
#include <rastab/errors.hpp>

#include "oracles.hpp"

namespace rastab {
namespace {

std::string field_of(const auto &call) {
    try {
        call();
    } catch (const ValidationError &e) {
        return e.field();
    }
    return "<no error>";
}

TEST(Channel, WeakCaptureChannelIsAccepted) {
    const auto c = presets::mpr_weak();
    EXPECT_EQ(validate_channel_2x2(c), c);
    EXPECT_DOUBLE_EQ(c.q_solo[0][0], 0.8);
    EXPECT_DOUBLE_EQ(c.q_joint[0][1], 0.05);
}

TEST(Channel, AllZeroChannelIsLegal) {
    EXPECT_NO_THROW(validate_channel_2x2(ChannelModel2x2{}));
}

TEST(Channel, JointAboveSoloIsRejectedUnlessAllowed) {
    auto c = presets::mpr_weak();
    c.q_solo[1][1] = 0.5;
    c.q_joint[1][1] = 0.6;
    EXPECT_EQ(field_of([&] { validate_channel_2x2(c); }), "q_joint[1][1]");
    EXPECT_NO_THROW(validate_channel_2x2(c, ValidationOptions{true}));
}

TEST(Channel, ProbabilitiesOutsideUnitIntervalAreRejected) {
    auto c = presets::mpr_strong();
    c.q_solo[0][1] = 1.2;
    EXPECT_EQ(field_of([&] { validate_channel_2x2(c); }), "q_solo[0][1]");
    c = presets::mpr_strong();
    c.q_joint[1][0] = -0.1;
    EXPECT_EQ(field_of([&] { validate_channel_2x2(c); }), "q_joint[1][0]");
}

TEST(Channel, CollisionChannelExamples) {
    EXPECT_NO_THROW(validate_collision_channel(testing::collision(4, 8, {0.9, 0.8, 0.7, 0.9})));
    EXPECT_NO_THROW(validate_collision_channel(testing::collision(1, 1, {1.0})));
    EXPECT_EQ(field_of([] { validate_collision_channel(testing::collision(2, 2, {0.0, 0.5})); }), "q_solo[0]");
    EXPECT_EQ(field_of([] { validate_collision_channel(testing::collision(2, 0, {0.5, 0.5})); }), "m_destinations");
    EXPECT_EQ(field_of([] { validate_collision_channel(testing::collision(0, 2, {})); }), "n_sources");
    EXPECT_EQ(field_of([] { validate_collision_channel(testing::collision(3, 2, {0.5, 0.5})); }), "q_solo");
}

TEST(Channel, PolicyAndArrivalValidation) {
    EXPECT_NO_THROW(validate_policy(TransmitPolicy{{0.0, 1.0}}, 2));
    EXPECT_EQ(field_of([] { validate_policy(TransmitPolicy{{0.5}}, 2); }), "p");
    EXPECT_EQ(field_of([] { validate_policy(TransmitPolicy{{0.5, 1.5}}, 2); }), "p[1]");
    EXPECT_EQ(field_of([] { validate_arrivals(ArrivalRates{{0.1, 1.0}}, 2); }), "lambda[1]");
    EXPECT_NO_THROW(validate_arrivals(ArrivalRates{{0.0, 0.99}}, 2));
}

TEST(Channel, SourceCount) {
    EXPECT_EQ(source_count(ChannelModel{presets::mpr_perfect()}), 2u);
    EXPECT_EQ(source_count(ChannelModel{testing::collision(5, 10, {0.8, 0.8, 0.8, 0.8, 0.8})}), 5u);
}

TEST(Config, RoundTripOfRandomChannels) {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        ChannelModel2x2 mpr;
        for (int n = 0; n < 2; ++n) {
            for (int m = 0; m < 2; ++m) {
                mpr.q_solo[n][m] = u(gen);
                mpr.q_joint[n][m] = mpr.q_solo[n][m] * u(gen);
            }
        }
        const ChannelModel a = mpr;
        EXPECT_EQ(parse_channel(channel_to_json(a)), a);

        const std::size_t n = 1 + gen() % 8;
        std::vector<double> q;
        for (std::size_t i = 0; i < n; ++i) {
            q.push_back(0.01 + 0.99 * u(gen));
        }
        const ChannelModel b = testing::collision(n, 1 + gen() % 40, q);
        EXPECT_EQ(parse_channel(channel_to_json(b)), b);
    }
}

TEST(Config, ParseErrorsNameTheField) {
    EXPECT_EQ(field_of([] { parse_channel("{\"model\":\"mpr2x2\",\"q_solo\":[[1,1],[1,1]]}"); }), "q_joint");
    EXPECT_EQ(field_of([] { parse_channel("{\"model\":\"fdma\"}"); }), "model");
    EXPECT_EQ(field_of([] { parse_channel("[1,2"); }), "<document>");
    EXPECT_EQ(field_of([] { parse_channel("{\"model\":\"collision\",\"m_destinations\":2,\"q_solo\":[0.5,\"x\"]}"); }),
              "q_solo[1]");
    EXPECT_EQ(field_of([] { parse_channel("{\"model\":\"collision\",\"m_destinations\":-2,\"q_solo\":[0.5]}"); }),
              "m_destinations");
}

TEST(Config, FullDocument) {
    const auto doc = parse_config(R"({
        "model": "collision", "m_destinations": 10, "q_solo": [0.8, 0.8, 0.8],
        "p": [0.2, 0.3, 0.4], "lambda": [0.01, 0.02, 0.03],
        "fixed_lambda": [[0.01, 0.02], [0.05, 0.05]],
        "lambda1_grid": {"from": 0, "to": 0.5, "points": 6},
        "seed": 42,
        "simulation": {"horizon": 200000, "warmup": 1000, "dominant_k": 1, "trace_stride": 100}
    })");
    EXPECT_EQ(source_count(doc.channel), 3u);
    ASSERT_TRUE(doc.p.has_value());
    EXPECT_DOUBLE_EQ((*doc.p)[2], 0.4);
    ASSERT_EQ(doc.fixed_lambda.size(), 2u);
    EXPECT_DOUBLE_EQ(doc.fixed_lambda[1][0], 0.05);
    ASSERT_EQ(doc.lambda1_grid.size(), 6u);
    EXPECT_DOUBLE_EQ(doc.lambda1_grid[5], 0.5);
    EXPECT_EQ(doc.seed, 42u);
    EXPECT_EQ(doc.simulation.horizon, 200000u);
    EXPECT_EQ(doc.simulation.dominant_k, 1u);
}

TEST(Config, SectionErrors) {
    const std::string head = R"({"model": "collision", "m_destinations": 2, "q_solo": [0.8, 0.8], )";
    EXPECT_EQ(field_of([&] { parse_config(head + R"("fixed_lambda": [0.1, 0.2]})"); }), "fixed_lambda[0]");
    EXPECT_EQ(field_of([&] { parse_config(head + R"("p": [0.1]})"); }), "p");
    EXPECT_EQ(field_of([&] { parse_config(head + R"("simulation": {"dominant_k": 3}})"); }), "simulation.dominant_k");
    EXPECT_EQ(field_of([&] { parse_config(head + R"("lambda1_grid": [0.1, 1.5]})"); }), "lambda1_grid");
}

TEST(Config, JointAboveSoloOverride) {
    const std::string text = R"({"model": "mpr2x2", "q_solo": [[0.5, 0.5], [0.5, 0.5]],
                                 "q_joint": [[0.6, 0.5], [0.5, 0.5]])";
    EXPECT_EQ(field_of([&] { parse_config(text + "}"); }), "q_joint[0][0]");
    EXPECT_TRUE(parse_config(text + R"(, "allow_joint_above_solo": true})").allow_joint_above_solo);
}

} // namespace
} // namespace rastab
