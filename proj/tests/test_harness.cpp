#include "fqgraph/harness.hpp"

#include <doctest.h>

#include <sstream>

using namespace fqg;

namespace {

ExperimentConfig config_from_text(const std::string& text) {
    return parse_config(OrderedJson::parse(text));
}

} // namespace

TEST_CASE("config parsing validates the schema") {
    ExperimentConfig empty = config_from_text(R"({"jobs": []})");
    CHECK(empty.jobs.empty());

    ExperimentConfig cfg = config_from_text(R"({
      "jobs": [{"id": "a", "q": 5, "d": 2, "t": 1, "relation": "dist",
                "set": "randn:m=8", "seed": 3, "reps": 2,
                "count": {"cycles": [3], "paths": [1], "oracle": true},
                "theorems": [{"id": "path_growth", "k": 2}]}],
      "threads": 2
    })");
    REQUIRE(cfg.jobs.size() == 1);
    CHECK(cfg.jobs[0].reps == 2);
    CHECK(cfg.jobs[0].count.cycles == std::vector<unsigned>{3});
    CHECK(cfg.jobs[0].theorems.size() == 1);
    CHECK(cfg.threads == 2);

    CHECK_THROWS_AS(config_from_text(R"({"bogus": 1})"), Error);
    CHECK_THROWS_AS(config_from_text(R"({"jobs": [{"q": 5, "d": 2, "wat": 0}]})"), Error);
    CHECK_THROWS_AS(config_from_text(R"({"jobs": [{"d": 2}]})"), Error); // q missing
    CHECK_THROWS_AS(config_from_text(R"({"jobs": [{"q": 5, "d": 2, "count": {"beep": 1}}]})"), Error);
    CHECK_THROWS_AS(config_from_text(R"({"jobs": [{"q": 5, "d": 2, "theorems": [{"id": "xx"}]}]})"),
                    Error);
}

TEST_CASE("zero jobs produce an empty record list and exit code 0") {
    std::vector<ResultRecord> records = run_experiment(config_from_text(R"({"jobs": []})"));
    CHECK(records.empty());
    CHECK(exit_code_for(records) == 0);
    CHECK(records_to_json(records, false).dump() == R"({"records":[]})");
}

TEST_CASE("experiments run counts and verifications") {
    ExperimentConfig cfg = config_from_text(R"({
      "jobs": [{"id": "j", "q": 5, "d": 2, "t": 1, "relation": "dist",
                "set": "randn:m=10", "seed": 5, "reps": 3,
                "count": {"cycles": [3, 4], "paths": [1, 2], "nondegenerate": true, "oracle": true},
                "theorems": [{"id": "edge_identity"}, {"id": "path_growth", "k": 3},
                             {"id": "path_recursion", "n": 4}]}]
    })");
    std::vector<ResultRecord> records = run_experiment(cfg);
    REQUIRE(records.size() == 3);
    for (const ResultRecord& rec : records) {
        CHECK(rec.error.empty());
        CHECK(rec.set_size == 10);
        CHECK(rec.oracle_checked);
        CHECK(rec.oracle_match);
        CHECK(rec.counts.size() == 2 + 2 * 2); // P_1 P_2 + (C,N) x (3,4)
        CHECK(rec.reports.size() == 3);
        for (const BoundReport& rep : rec.reports) CHECK(rep.pass());
    }
    CHECK(exit_code_for(records) == 0);
    // distinct reps get distinct derived seeds
    CHECK(records[0].seed != records[1].seed);
}

TEST_CASE("records serialize exact integers as strings") {
    ExperimentConfig cfg = config_from_text(R"({
      "jobs": [{"q": 3, "d": 2, "t": 2, "set": "full",
                "count": {"cycles": [3]}}]
    })");
    std::vector<ResultRecord> records = run_experiment(cfg);
    OrderedJson j = record_to_json(records[0], false);
    CHECK(j["counts"]["C_3"].is_string());
    CHECK(j["input"]["E_size"] == 9);
}

TEST_CASE("same config and seeds give byte-identical JSON and matching CSV") {
    const char* text = R"({
      "jobs": [{"id": "det", "q": 5, "d": 2, "t": 1, "relation": "prod",
                "set": "rand:p=0.5", "seed": 21, "reps": 2,
                "count": {"cycles": [4], "paths": [2]},
                "theorems": [{"id": "edge_identity"}, {"id": "edge_functional", "fg_max": 4}]}]
    })";
    std::vector<ResultRecord> a = run_experiment(config_from_text(text));
    std::vector<ResultRecord> b = run_experiment(config_from_text(text));
    CHECK(records_to_json(a, false).dump(2) == records_to_json(b, false).dump(2));

    // CSV row count = sum of per-job theorem counts
    std::string csv = render_csv(a);
    std::size_t rows = 0;
    for (char c : csv)
        if (c == '\n') ++rows;
    CHECK(rows == 1 + 2 * 2); // header + reps x theorems

    std::string tsv = render_tsv(a);
    CHECK(tsv.find("edge_functional") != std::string::npos);
}

TEST_CASE("threaded runs produce the same records as sequential runs") {
    const char* text = R"({
      "jobs": [{"id": "t", "q": 5, "d": 2, "t": 1, "set": "randn:m=9", "seed": 8, "reps": 4,
                "count": {"cycles": [3, 4], "nondegenerate": true},
                "theorems": [{"id": "path_growth", "k": 4}]}]
    })";
    ExperimentConfig cfg1 = config_from_text(text);
    ExperimentConfig cfg2 = config_from_text(text);
    cfg2.threads = 4;
    CHECK(records_to_json(run_experiment(cfg1), false).dump() ==
          records_to_json(run_experiment(cfg2), false).dump());
}

TEST_CASE("per-job errors are recorded, not thrown") {
    ExperimentConfig cfg = config_from_text(R"({
      "jobs": [{"q": 5, "d": 2, "t": 1, "set": "randn:m=99"},
               {"q": 5, "d": 2, "t": 1, "set": "randn:m=4", "count": {"cycles": [3]}}]
    })");
    std::vector<ResultRecord> records = run_experiment(cfg);
    REQUIRE(records.size() == 2);
    CHECK(!records[0].error.empty()); // m > q^d
    CHECK(records[1].error.empty());
    CHECK(exit_code_for(records) == 0); // a recipe error is not a theorem violation
}

TEST_CASE("a non-vacuous failing report forces exit code 2") {
    ResultRecord rec;
    BoundReport rep;
    rep.theorem = "synthetic";
    rep.verdict = Verdict::Fail;
    rec.reports.push_back(rep);
    CHECK(exit_code_for({rec}) == 2);
    rec.reports[0].verdict = Verdict::Vacuous;
    CHECK(exit_code_for({rec}) == 0);
    rec.reports[0].verdict = Verdict::Conditional;
    CHECK(exit_code_for({rec}) == 0);
}

TEST_CASE("resource-cap errors surface as exit code 3") {
    ExperimentConfig cfg = config_from_text(R"({
      "jobs": [{"q": 5, "d": 2, "t": 1, "set": "full", "count": {"cycles": [65]}}]
    })");
    std::vector<ResultRecord> records = run_experiment(cfg);
    CHECK(records[0].error_code == "TooLong");
    CHECK(exit_code_for(records) == 3);
}

TEST_CASE("selftest config parses and runs clean") {
    ExperimentConfig cfg = parse_config(OrderedJson::parse(selftest_config_text()));
    std::vector<ResultRecord> records = run_experiment(cfg);
    CHECK(!records.empty());
    for (const ResultRecord& rec : records) {
        CHECK(rec.error.empty());
        CHECK(rec.oracle_match);
        for (const BoundReport& rep : rec.reports) CHECK(!rep.fail());
    }
    CHECK(exit_code_for(records) == 0);
}
