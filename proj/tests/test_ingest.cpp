#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "firmchaos/ingest.hpp"

using namespace firmchaos;

namespace {

std::vector<MetricSeries> parse(const std::string& text) {
    std::istringstream in(text);
    return parse_series(in);
}

MetricSeries daily(Theory theory, std::size_t n, auto value) {
    MetricSeries s{theory, {}, {}};
    const Date start = *parse_date("2019-03-01");
    for (std::size_t i = 0; i < n; ++i) {
        s.timestamps.push_back(start + std::chrono::days(i));
        s.values.push_back(value(static_cast<double>(i)));
    }
    return s;
}

template <class E>
std::size_t error_line(const std::string& text) {
    try {
        parse(text);
    } catch (const E& e) {
        return e.line();
    }
    ADD_FAILURE() << "no exception for:\n" << text;
    return 0;
}

}  // namespace

TEST(ParseDate, CalendarValidation) {
    EXPECT_TRUE(parse_date("2024-02-29"));
    EXPECT_FALSE(parse_date("2023-02-29"));
    EXPECT_FALSE(parse_date("2023-13-01"));
    EXPECT_FALSE(parse_date("2023-1-01"));
    EXPECT_FALSE(parse_date("20230101"));
    EXPECT_EQ(format_date(*parse_date("2001-09-03")), "2001-09-03");
}

TEST(LoadSeries, SampleFileHasEightTheories) {
    const auto series = load_series(std::string(FIRMCHAOS_SOURCE_DIR) + "/data/sample_metrics.csv");
    ASSERT_EQ(series.size(), 8u);
    for (std::size_t i = 0; i < series.size(); ++i) {
        EXPECT_EQ(series[i].theory, kTheories[i]);
        EXPECT_EQ(series[i].values.size(), series[i].timestamps.size());
    }
}

TEST(LoadSeries, GroupsInterleavedRows) {
    const auto s = parse(
        "date,theory,value\n"
        "2020-01-01,managerial,1\n"
        "2020-01-01,evolutionary,5\n"
        "2020-01-02,managerial,2.5\n"
        "\n"
        "2020-01-03,evolutionary,-4e-1\n");
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[0].theory, Theory::managerial);
    EXPECT_EQ(s[0].values, (std::vector<double>{1.0, 2.5}));
    EXPECT_EQ(s[1].values, (std::vector<double>{5.0, -0.4}));
}

TEST(LoadSeries, Errors) {
    EXPECT_EQ(error_line<UnknownTheoryError>("date,theory,value\n2020-01-01,marketing,1\n"), 2u);
    EXPECT_THROW(parse(""), ParseError);
    EXPECT_EQ(error_line<ParseError>("date,value\n"), 1u);
    EXPECT_EQ(error_line<ParseError>("date,theory,value\n2020-01-01,managerial,1\n2020-01-02,managerial,x\n"), 3u);
    EXPECT_EQ(error_line<ParseError>("date,theory,value\n2020-01-01,managerial\n"), 2u);
    EXPECT_EQ(error_line<ParseError>("date,theory,value\n2020-01-01,managerial,1,2\n"), 2u);
    EXPECT_EQ(error_line<ParseError>("date,theory,value\n2020-02-30,managerial,1\n"), 2u);
    EXPECT_EQ(error_line<NonMonotonicDateError>(
                  "date,theory,value\n2020-01-02,managerial,1\n2020-01-03,behavioural,1\n2020-01-02,managerial,2\n"),
              4u);
    EXPECT_EQ(error_line<ParseError>("date,theory,value\n2020-01-01,managerial,1\n"), 2u);
    EXPECT_EQ(error_line<ParseError>("date,theory,value\n\n"), 2u);
    EXPECT_THROW(load_series("/nonexistent/metrics.csv"), InputError);
}

TEST(WriteSeries, RoundTripsRandomSeries) {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> value(-1e6, 1e6);
    std::uniform_int_distribution<int> gap(1, 40), len(2, 60), count(1, 8);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<MetricSeries> series;
        std::vector<Theory> theories(kTheories.begin(), kTheories.end());
        std::shuffle(theories.begin(), theories.end(), rng);
        theories.resize(count(rng));
        std::sort(theories.begin(), theories.end(), [](Theory a, Theory b) { return index_of(a) < index_of(b); });
        for (Theory t : theories) {
            MetricSeries s{t, {}, {}};
            Date d = *parse_date("1995-06-15");
            const int n = len(rng);
            for (int i = 0; i < n; ++i) {
                d += std::chrono::days(gap(rng));
                s.timestamps.push_back(d);
                s.values.push_back(value(rng));
            }
            series.push_back(std::move(s));
        }
        std::ostringstream out;
        write_series(out, series);
        ASSERT_EQ(parse(out.str()), series);
    }
}

// A least-squares line leaks into a sine over a short window, inflating the
// half-range by roughly 1/(cycles in window); 60 cycles keep it under 2%.
TEST(DetrendedAmplitude, PureSine) {
    for (double phase : {0.0, 0.7, std::numbers::pi / 2.0}) {
        for (double a : {0.2, 1.0, 7.5}) {
            const auto s = daily(Theory::behavioural, 1800, [=](double d) {
                return 3.0 + a * std::sin(2.0 * std::numbers::pi * d / 30.0 + phase);
            });
            EXPECT_NEAR(detrended_amplitude(s), a, 0.02 * a) << phase;
        }
    }
}

TEST(DetrendedAmplitude, RemovesLinearTrend) {
    const auto s = daily(Theory::behavioural, 7280,
                         [](double d) { return 100.0 + 0.5 * d + 2.0 * std::sin(2.0 * std::numbers::pi * d / 91.0); });
    EXPECT_NEAR(detrended_amplitude(s), 2.0, 0.04);
    const auto line = daily(Theory::behavioural, 50, [](double d) { return 4.0 - 0.25 * d; });
    EXPECT_NEAR(detrended_amplitude(line), 0.0, 1e-12);
}

TEST(DetrendedAmplitude, ScaleCovariant) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> raw(120);
    for (double& v : raw) v = noise(rng);
    auto base = daily(Theory::environment, raw.size(), [&](double d) { return raw[static_cast<std::size_t>(d)]; });
    const double a = detrended_amplitude(base);
    for (double c : {0.5, 2.0, 4.0, 1024.0}) {
        MetricSeries scaled = base;
        for (double& v : scaled.values) v *= c;
        EXPECT_DOUBLE_EQ(detrended_amplitude(scaled), c * a);
    }
}

TEST(NormalizeToCalibration, Examples) {
    const Calibration cal{};
    const auto line = daily(Theory::managerial, 20, [](double d) { return 2.0 * d; });
    EXPECT_NEAR(normalize_to_calibration(line, cal).map.lambda(), cal.lambda_min, 1e-12);

    MetricSeries two{Theory::managerial, {*parse_date("2020-01-01"), *parse_date("2020-02-01")}, {0.0, 1.0}};
    const TheoryChannel ch = normalize_to_calibration(two, cal);
    EXPECT_DOUBLE_EQ(ch.x0, 0.95);
    EXPECT_EQ(ch.theory, Theory::managerial);
    EXPECT_FALSE(ch.exponent);

    MetricSeries flat{Theory::managerial, {*parse_date("2020-01-01"), *parse_date("2020-02-01")}, {3.0, 3.0}};
    EXPECT_THROW(normalize_to_calibration(flat, cal), DegenerateSeriesError);
}

TEST(NormalizeToCalibration, ChannelsAreValid) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> v(-50.0, 50.0);
    const Calibration cal{0.0, 20.0, 2.5, 4.0};
    for (int trial = 0; trial < 200; ++trial) {
        const auto s = daily(Theory::transaction_cost, 30, [&](double) { return v(rng); });
        const TheoryChannel ch = normalize_to_calibration(s, cal);
        EXPECT_GE(ch.x0, 0.05);
        EXPECT_LE(ch.x0, 0.95);
        EXPECT_GE(ch.map.lambda(), cal.lambda_min);
        EXPECT_LE(ch.map.lambda(), cal.lambda_max);
    }
}

TEST(NormalizeToCalibration, SampleFileOscillatingChannel) {
    const auto series = load_series(std::string(FIRMCHAOS_SOURCE_DIR) + "/data/sample_metrics.csv");
    for (const MetricSeries& s : series) {
        const TheoryChannel ch = normalize_to_calibration(s, Calibration{});
        if (s.theory == Theory::behavioural) {
            EXPECT_NEAR(ch.map.lambda(), 3.9, 0.01);
        } else {
            EXPECT_NEAR(ch.map.lambda(), 2.5, 1e-6);
        }
    }
}
