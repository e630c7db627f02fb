#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "ionmem/config.hpp"
#include "ionmem/errors.hpp"
#include "support.hpp"

using namespace ionmem;

namespace {

std::string field_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "";
}

int parse_error_line(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return -1;
}

}  // namespace

TEST(ParseConfig, ShippedIonFileHasCaptionValues) {
    const auto c = load_config(testing_support::fixture_path("ion.cfg"));
    EXPECT_EQ(c.physical.n_photons, 2.1e12);
    EXPECT_EQ(c.physical.n_atoms, 1.5e6);
    EXPECT_DOUBLE_EQ(c.physical.detuning, 8e3 * c.physical.linewidth);
    EXPECT_EQ(c.physical.beam_area, 1.1e-8);
    EXPECT_EQ(c.params_source, ParamsSource::fixture);
    EXPECT_EQ(c.fixture, Fixture::ion_cloud);
    EXPECT_NEAR(c.tau(), 1.0 / 0.03, 1e-12);
    EXPECT_EQ(c.losses().eta_in, 0.01);
    EXPECT_EQ(c.losses().eta_det, 0.05);
}

TEST(ParseConfig, ShippedIonFileEqualsBuiltInDefault) {
    const auto c = load_config(testing_support::fixture_path("ion.cfg"));
    EXPECT_EQ(config_echo(c), config_echo(RunConfig{}));
}

TEST(ParseConfig, PolzikFile) {
    const auto c = load_config(testing_support::fixture_path("polzik.cfg"));
    EXPECT_EQ(c.fixture, Fixture::polzik);
    EXPECT_TRUE(std::isinf(c.tau()));
    EXPECT_NEAR(c.losses().eta_in, 1.0 - std::pow(0.96, 4), 1e-12);
}

TEST(ParseConfig, EmptyInputIsParseError) {
    EXPECT_THROW(parse_config(""), ParseError);
    EXPECT_THROW(parse_config("  \n# only a comment\n"), ParseError);
}

TEST(ParseConfig, OutOfRangeLossNamesField) { EXPECT_EQ(field_of("loss_in = 1.5\n"), "loss_in"); }

TEST(ParseConfig, UnknownKeyNamed) {
    try {
        parse_config("n_photons = 1e12\nbogus_key = 3\n");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.field(), "bogus_key");
        EXPECT_NE(std::string(e.what()).find("bogus_key"), std::string::npos);
    }
}

TEST(ParseConfig, MalformedLineReportsLineNumber) {
    EXPECT_EQ(parse_error_line("n_photons = 1e12\n\n# comment\nthis line has no equals\n"), 4);
    EXPECT_EQ(parse_error_line("= 3\n"), 1);
    EXPECT_EQ(parse_error_line("n_atoms =\n"), 1);
}

TEST(ParseConfig, NonNumericValueIsConfigError) { EXPECT_EQ(field_of("n_atoms = lots\n"), "n_atoms"); }

TEST(ParseConfig, DuplicateKeyRejected) { EXPECT_EQ(field_of("n_atoms = 1\nn_atoms = 2\n"), "n_atoms"); }

TEST(ParseConfig, DetuningAndRatioConflict) {
    EXPECT_EQ(field_of("detuning = 1e11\ndetuning_ratio = 5e3\n"), "detuning_ratio");
}

TEST(ParseConfig, DetuningRatioAppliesAfterLinewidth) {
    const auto c = parse_config("detuning_ratio = 100\nlinewidth = 1e6\n");
    EXPECT_DOUBLE_EQ(c.physical.detuning, 1e8);
}

TEST(ParseConfig, CommentsAndWhitespace) {
    const auto c = parse_config("  n_atoms=42   # trailing comment\r\n\n# full line\n");
    EXPECT_EQ(c.physical.n_atoms, 42.0);
}

TEST(ParseConfig, ParamsSourceValues) {
    EXPECT_EQ(parse_config("params = derive\n").params_source, ParamsSource::derived);
    EXPECT_EQ(parse_config("params = fixture\n").fixture, Fixture::ion_cloud);
    EXPECT_EQ(parse_config("params = fixture:polzik\n").fixture, Fixture::polzik);
    EXPECT_EQ(field_of("params = guess\n"), "params");
}

TEST(ParseConfig, FormatAndSeed) {
    const auto c = parse_config("format = csv\nseed = 18446744073709551615\n");
    EXPECT_EQ(c.format, OutputFormat::csv);
    EXPECT_EQ(c.seed, 18446744073709551615ull);
    EXPECT_EQ(field_of("format = xml\n"), "format");
    EXPECT_EQ(field_of("seed = -4\n"), "seed");
}

TEST(ParseConfig, SweepEntriesAccumulate) {
    const auto c = parse_config("sweep = loss_det=0:0.1:3\nsweep = storage_time=0:20:5\n");
    ASSERT_EQ(c.sweep.size(), 2u);
    EXPECT_EQ(c.sweep[1].path, "storage_time");
}

TEST(ParseConfig, JsonEquivalentToKeyValue) {
    const auto kv = parse_config("params = fixture:polzik\nn_atoms = 3e11\nloss_in = 0.1\nseed = 7\n"
                                 "sweep = loss_det=0:0.2:3\n");
    const auto js = parse_config(
        R"({"params": "fixture:polzik", "n_atoms": 3e11, "loss_in": 0.1, "seed": 7, "sweep": ["loss_det=0:0.2:3"]})");
    EXPECT_EQ(config_echo(kv), config_echo(js));
}

TEST(ParseConfig, JsonErrors) {
    EXPECT_THROW(parse_config("{\"n_atoms\": }"), ParseError);
    EXPECT_EQ(field_of(R"({"nope": 1})"), "nope");
    EXPECT_EQ(field_of(R"({"loss_det": 2})"), "loss_det");
}

TEST(ParseConfig, InfinityAccepted) {
    EXPECT_TRUE(std::isinf(parse_config("collision_time = inf\n").tau()));
}

TEST(KeyValues, RawTranscriptionReadable) {
    const auto entries = parse_key_values(testing_support::read_file(testing_support::fixture_path("published_parameters.cfg")));
    bool found_area = false;
    for (const auto& e : entries) {
        if (e.key == "ion.area_cm2") {
            EXPECT_EQ(std::stod(e.value), 8e-9);
            found_area = true;
        }
    }
    EXPECT_TRUE(found_area);
}

TEST(SweepAxis, LinearValues) {
    const auto a = parse_sweep_axis("loss_det=0:0.1:3");
    EXPECT_EQ(a.spacing, Spacing::linear);
    const auto v = a.values();
    ASSERT_EQ(v.size(), 3u);
    EXPECT_EQ(v[0], 0.0);
    EXPECT_DOUBLE_EQ(v[1], 0.05);
    EXPECT_EQ(v[2], 0.1);
}

TEST(SweepAxis, LogValuesEndExactly) {
    const auto v = parse_sweep_axis("n_photons=1e10:1e14:5:log").values();
    ASSERT_EQ(v.size(), 5u);
    EXPECT_EQ(v.front(), 1e10);
    EXPECT_EQ(v.back(), 1e14);
    EXPECT_NEAR(v[2], 1e12, 1e-3);
}

TEST(SweepAxis, SinglePointNeedsEqualEnds) {
    EXPECT_EQ(parse_sweep_axis("loss_det=0.05:0.05:1").values(), std::vector<double>{0.05});
    EXPECT_THROW(parse_sweep_axis("loss_det=0:0.1:1"), ConfigError);
}

TEST(SweepAxis, Rejections) {
    EXPECT_THROW(parse_sweep_axis("loss_det=0.1:0:3"), ConfigError);
    EXPECT_THROW(parse_sweep_axis("loss_det=0:0.1:0"), ConfigError);
    EXPECT_THROW(parse_sweep_axis("params=0:1:2"), ConfigError);
    EXPECT_THROW(parse_sweep_axis("unknown=0:1:2"), ConfigError);
    EXPECT_THROW(parse_sweep_axis("loss_det"), ConfigError);
    EXPECT_THROW(parse_sweep_axis("loss_det=0:1"), ConfigError);
    EXPECT_THROW(parse_sweep_axis("n_photons=0:1e12:3:log"), ConfigError);
    EXPECT_THROW(parse_sweep_axis("loss_det=0:0.1:3:cubic"), ConfigError);
}

TEST(NumericFields, RoundTripEveryKey) {
    RunConfig c;
    for (const auto& key : numeric_config_keys()) {
        const double v = get_numeric(c, key);
        set_numeric(c, key, v);
        EXPECT_EQ(get_numeric(c, key), v) << key;
    }
    EXPECT_THROW(set_numeric(c, "nonsense", 1.0), ConfigError);
}

TEST(Validate, StorageTimeAndNormalization) {
    RunConfig c;
    c.storage_time = -1.0;
    EXPECT_THROW(validate(c), ConfigError);
    c = RunConfig{};
    c.normalization = 0.0;
    EXPECT_THROW(validate(c), ConfigError);
}

TEST(Format, Names) {
    EXPECT_EQ(parse_format("table"), OutputFormat::table);
    EXPECT_EQ(parse_format("csv"), OutputFormat::csv);
    EXPECT_EQ(parse_format("json"), OutputFormat::json);
    EXPECT_THROW(parse_format("yaml"), ConfigError);
}
