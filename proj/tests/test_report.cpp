#include "visnec/error.hpp"
#include "visnec/report.hpp"
#include "visnec/rng.hpp"
#include "visnec/serialize.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace visnec;

namespace {

const char* kNames[10] = {"VQAv2", "GQA", "LLaVA-Wild", "SQA-I", "TextVQA",
                          "MME-P", "MMBench-en", "MMBench-cn", "POPE", "MM-Vet"};
const double kFull[10] = {79.1, 63.0, 67.9, 68.4, 57.9, 1476.9, 64.3, 58.3, 86.4, 30.0};
const double kRandom[10] = {75.3, 55.1, 58.8, 67.8, 54.3, 1397.5, 61.0, 53.5, 84.9, 30.2};
const double kVisNec[10] = {78.0, 60.8, 69.8, 67.9, 56.2, 1457.2, 64.9, 59.1, 86.0, 32.1};

std::vector<BenchmarkScore> rows(const double* values) {
    std::vector<BenchmarkScore> out;
    for (int i = 0; i < 10; ++i) out.push_back({kNames[i], values[i], kFull[i]});
    return out;
}

// Straight ratio average, written out by hand.
double reference_rel(const double* values) {
    double s = 0.0;
    for (int i = 0; i < 10; ++i) s += values[i] / kFull[i];
    return 100.0 * s / 10.0;
}

std::vector<VisNecScore> as_scores(const std::vector<double>& v) {
    std::vector<VisNecScore> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back({"s" + std::to_string(i), v[i]});
    return out;
}

std::vector<SampleCategory> cats(const std::vector<VisNecScore>& s) {
    std::vector<SampleCategory> out;
    for (const auto& x : s) out.push_back(categorize(x, CategoryConfig{}));
    return out;
}

}  // namespace

TEST_CASE("rel averages for two benchmark rows") {
    const auto random = relative_performance(rows(kRandom));
    const auto visnec = relative_performance(rows(kVisNec));
    CHECK(std::abs(random.average_rel_percent - 94.2) <= 0.15);
    CHECK(std::abs(visnec.average_rel_percent - 100.2) <= 0.15);
    CHECK(random.average_rel_percent == doctest::Approx(reference_rel(kRandom)).epsilon(1e-12));
    CHECK(visnec.average_rel_percent == doctest::Approx(reference_rel(kVisNec)).epsilon(1e-12));
    CHECK(relative_performance(rows(kFull)).average_rel_percent == doctest::Approx(100.0));
    REQUIRE(random.per_benchmark.size() == 10);
    CHECK(random.per_benchmark[9].rel_percent == doctest::Approx(100.0 * 30.2 / 30.0));
}

TEST_CASE("rel is invariant to rescaling a benchmark") {
    auto a = rows(kVisNec);
    auto b = a;
    b[5].value /= 1000.0;
    b[5].full_value /= 1000.0;
    CHECK(relative_performance(a).average_rel_percent ==
          doctest::Approx(relative_performance(b).average_rel_percent).epsilon(1e-12));
}

TEST_CASE("rel errors") {
    CHECK_THROWS_AS(relative_performance({}), Error);
    std::vector<BenchmarkScore> zero = {{"x", 1.0, 0.0}};
    try {
        relative_performance(zero);
        FAIL("zero baseline accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonPositiveBaseline);
    }
}

TEST_CASE("benchmark csv parsing") {
    const auto r = parse_benchmark_csv("name,value,full_value\n# comment\nGQA, 60.8, 63.0\n\nPOPE,86,86.4\r\n");
    REQUIRE(r.size() == 2);
    CHECK(r[0].name == "GQA");
    CHECK(r[0].value == 60.8);
    CHECK(r[1].full_value == 86.4);
    CHECK(parse_benchmark_csv("a,1,2\n").size() == 1);
    CHECK_THROWS_AS(parse_benchmark_csv("a,1\n"), Error);
    CHECK_THROWS_AS(parse_benchmark_csv("a,1,2\nb,x,2\n"), Error);
}

TEST_CASE("score_stats basic moments and quantiles") {
    const auto s = as_scores({1, 2, 3, 4});
    const auto st = score_stats(s, cats(s), 4);
    CHECK(st.count == 4);
    CHECK(st.min == 1.0);
    CHECK(st.max == 4.0);
    CHECK(st.mean == 2.5);
    CHECK(st.stddev == doctest::Approx(std::sqrt(1.25)));
    CHECK(st.quantiles[2] == 2.5);
    CHECK(st.quantiles[0] == doctest::Approx(1.15));
    CHECK(st.categories.vision_critical == 4);

    const auto one = as_scores({-0.7});
    const auto st1 = score_stats(one, cats(one), 5);
    CHECK(st1.stddev == 0.0);
    CHECK(st1.quantiles[4] == -0.7);
    CHECK(st1.categories.misaligned == 1);
    CHECK(st1.histogram[0].count == 1);

    CHECK_THROWS_AS(score_stats(std::span<const VisNecScore>{}, {}, 5), Error);
}

TEST_CASE("median matches a sort oracle and histogram preserves mass") {
    SplitMix64 rng(31);
    std::vector<double> v;
    for (int i = 0; i < 1000; ++i) v.push_back(rng.uniform() * 6.0 - 3.0);
    const auto s = as_scores(v);
    const auto st = score_stats(s, cats(s), 50);

    auto sorted = v;
    std::sort(sorted.begin(), sorted.end());
    CHECK(st.quantiles[2] == doctest::Approx((sorted[499] + sorted[500]) / 2.0).epsilon(1e-15));
    CHECK(st.quantiles[0] <= st.quantiles[1]);
    CHECK(st.quantiles[3] <= st.quantiles[4]);

    std::size_t mass = 0;
    for (const auto& b : st.histogram) mass += b.count;
    CHECK(mass == 1000);
    CHECK(st.histogram.size() == 50);
    CHECK(st.histogram.front().lower == st.min);
    CHECK(st.histogram.back().upper == st.max);
    CHECK(st.categories.total() == 1000);
}

TEST_CASE("cluster_summary rows") {
    const auto scores = as_scores({0.5, -1.0, 2.0});
    const std::vector<std::vector<std::string>> part = {{"s0", "s1"}, {}, {"s2"}};
    auto rows = cluster_summary(part, scores);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].size == 2);
    CHECK(rows[0].positive_count == 1);
    CHECK(*rows[0].mean_score == doctest::Approx(-0.25));
    CHECK(!rows[1].mean_score);
    CHECK(rows[1].size == 0);
    CHECK(!rows[0].selected_count);

    SelectionResult sel;
    sel.selected = {{"s2", 2, 2.0, 1}, {"s0", 0, 0.5, 1}};
    rows = cluster_summary(part, scores, &sel);
    CHECK(rows[0].selected_count == std::optional<std::size_t>(1));
    CHECK(rows[1].selected_count == std::optional<std::size_t>(0));
    CHECK(rows[2].selected_count == std::optional<std::size_t>(1));

    const std::vector<std::vector<std::string>> missing = {{"s0"}, {"s2"}};
    CHECK_THROWS_AS(cluster_summary(missing, scores), Error);
}

TEST_CASE("report rendering is stable and complete") {
    const auto s = as_scores({-1.0, 0.1, 0.3, 2.0});
    const auto st = score_stats(s, cats(s), 4);
    const std::vector<std::vector<std::string>> part = {{"s0", "s1"}, {"s2", "s3"}};
    const auto clusters = cluster_summary(part, s);
    ReportInputs in;
    in.stats = &st;
    in.clusters = &clusters;
    in.embedding_provenance = "unit-test";
    const auto a = format_report_json(in);
    CHECK(a == format_report_json(in));
    const auto j = Json::parse(a);
    CHECK(j["embedding_provenance"] == "unit-test");
    CHECK(j.dump().find("misaligned") != std::string::npos);
    const auto txt = format_report_txt(in);
    CHECK(txt.find("unit-test") != std::string::npos);
}
