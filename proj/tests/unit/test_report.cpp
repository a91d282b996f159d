#include <doctest.h>

#include <fstream>
#include <sstream>

#include "arsenal/config.hpp"
#include "arsenal/report.hpp"

using namespace arsenal;

namespace {

SimReport small_report(EngineKind kind = EngineKind::arsenal) {
  ExperimentConfig cfg;
  cfg.name = "small";
  cfg.trace.name = "phased";
  cfg.trace.pattern = phased_stride_sequential(1500, 3);
  cfg.trace.length = 6000;
  cfg.engine.kind = kind;
  return run_experiment(cfg);
}

std::string render(const SimReport& r, ReportFormat f) {
  std::ostringstream os;
  emit_report(r, f, os);
  return os.str();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_SUITE("report") {
  TEST_CASE("same report serializes to identical bytes") {
    const auto r = small_report();
    CHECK(render(r, ReportFormat::json) == render(r, ReportFormat::json));
    CHECK(render(r, ReportFormat::csv) == render(r, ReportFormat::csv));
    CHECK(render(small_report(), ReportFormat::json) == render(r, ReportFormat::json));
  }

  TEST_CASE("json round trips through its own schema") {
    for (auto kind : {EngineKind::arsenal, EngineKind::none}) {
      const auto r = small_report(kind);
      const auto text = render(r, ReportFormat::json);
      const auto back = report_from_json(Json::parse(text));
      CHECK(render(back, ReportFormat::json) == text);
      CHECK(back.timeline == r.timeline);
      CHECK(back.metrics == r.metrics);
    }
  }

  TEST_CASE("json carries the full selection timeline") {
    const auto r = small_report();
    const auto j = to_json(r);
    REQUIRE(j.contains("timeline"));
    CHECK(j["timeline"].size() == r.timeline.size());
    CHECK(r.timeline.size() > 5);
    const auto& first = j["timeline"][0];
    for (const char* key : {"phase_index", "decided_at", "chosen", "board"}) CHECK(first.contains(key));
  }

  TEST_CASE("csv header matches the documented column list") {
    CHECK(csv_header() ==
          "experiment,engine,trace,accesses,hits,prefetch_hits,late_prefetch_hits,misses,pf_requested,pf_issued,"
          "pf_dropped,pf_filled,pf_useful,amat,baseline_amat,speedup_proxy,accuracy,coverage,late_rate,phases");
    const auto text = render(small_report(EngineKind::none), ReportFormat::csv);
    std::istringstream in(text);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header == csv_header());
    CHECK(std::count(row.begin(), row.end(), ',') == std::count(header.begin(), header.end(), ','));
    CHECK(row.rfind("small,none,phased,", 0) == 0);
  }

  TEST_CASE("unwritable sink is an io error") {
    const auto r = small_report(EngineKind::none);
    CHECK_THROWS_AS(emit_report_file(r, ReportFormat::json, "/nonexistent-dir/out.json"), IoError);
    std::ostringstream bad;
    bad.setstate(std::ios::badbit);
    CHECK_THROWS_AS(emit_report(r, ReportFormat::csv, bad), IoError);
  }

  TEST_CASE("format names") {
    CHECK(parse_format("csv") == ReportFormat::csv);
    CHECK(parse_format("json") == ReportFormat::json);
    CHECK_THROWS_AS(parse_format("xml"), ConfigError);
  }

  TEST_CASE("golden report for the sample experiment") {
    const std::string dir = ARSENAL_TEST_DATA;
    const auto cfg = experiment_from_json(load_json_file(dir + "/experiment.json"));
    const auto text = render(run_experiment(cfg), ReportFormat::json);
    CHECK(text == slurp(dir + "/golden_report.json"));
  }
}

TEST_SUITE("config") {
  TEST_CASE("unknown keys are rejected") {
    CHECK_THROWS_AS(experiment_from_json(Json::parse(R"({"cache": {"setz": 4}})")), ConfigError);
    CHECK_THROWS_AS(experiment_from_json(Json::parse(R"({"bogus": 1})")), ConfigError);
    CHECK_THROWS_AS(experiment_from_json(Json::parse(R"({"engine": "nope"})")), ConfigError);
  }

  TEST_CASE("fields override defaults") {
    const auto cfg = experiment_from_json(Json::parse(
        R"({"engine": "arsenal-tc1", "cache": {"sets": 128}, "arsenal": {"eval_cnt": 256, "filter": "exact"}})"));
    CHECK(cfg.cache.sets == 128);
    CHECK(cfg.cache.ways == 8);
    CHECK(cfg.engine.arsenal.policy == SelectionPolicy::test_case_1);
    CHECK(cfg.engine.arsenal.eval_cnt == 256);
    CHECK(cfg.engine.arsenal.filter_kind == FilterKind::exact);
  }

  TEST_CASE("pattern argument") {
    const auto p = parse_pattern_arg("stride:stride=256,pc=0x10", 9);
    CHECK(p.kind == PatternKind::stride);
    CHECK(p.stride == 256);
    CHECK(p.pc == 0x10);
    CHECK(p.seed == 9);
    CHECK_THROWS_AS(parse_pattern_arg("stride:bogus=1"), ConfigError);
  }
}
