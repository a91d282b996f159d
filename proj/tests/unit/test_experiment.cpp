#include <doctest.h>

#include "arsenal/experiment.hpp"

using namespace arsenal;

namespace {

ExperimentConfig config(const std::string& preset, std::uint64_t length, const std::string& engine) {
  ExperimentConfig cfg;
  cfg.trace.name = preset;
  cfg.trace.pattern = preset_pattern(preset, 5);
  cfg.trace.length = length;
  cfg.engine.set_from_label(engine);
  return cfg;
}

}  // namespace

TEST_SUITE("experiment") {
  TEST_CASE("no-prefetch baseline is the identity") {
    const auto r = run_experiment(config("random", 20000, "none"));
    CHECK(r.stats.pf_requested == 0);
    CHECK(r.stats.pf_issued == 0);
    REQUIRE(r.metrics.speedup_proxy);
    CHECK(*r.metrics.speedup_proxy == doctest::Approx(1.0));
    CHECK(*r.baseline_amat == doctest::Approx(r.metrics.amat));
  }

  TEST_CASE("conservation of demands and prefetches") {
    for (const char* engine : {"arsenal-tc1", "arsenal-tc2", "next-line", "ip-stride", "spp", "mlop", "tskid"}) {
      for (const char* preset : {"phased", "pcdelta", "random"}) {
        auto cfg = config(preset, 15000, engine);
        cfg.with_baseline = false;
        const auto r = run_experiment(cfg);
        INFO(engine << " on " << preset);
        const auto& s = r.stats;
        CHECK(s.accesses() == 15000);
        CHECK(s.hits + s.prefetch_hits + s.late_prefetch_hits + s.misses == 15000);
        CHECK(s.pf_issued == s.pf_filled + s.pf_late_merged + r.pf_in_flight_end);
        CHECK(s.pf_requested == s.pf_issued + s.pf_dropped);
        std::uint64_t issued = 0, useful = 0;
        for (std::size_t c = 0; c < kComponentCount; ++c) {
          issued += s.issued_by[c];
          useful += s.useful_by[c];
        }
        CHECK(issued == s.pf_issued);
        CHECK(useful == s.prefetch_hits + s.late_prefetch_hits);
      }
    }
  }

  TEST_CASE("warmup accesses are excluded from statistics") {
    auto cfg = config("sequential", 10000, "next-line");
    cfg.warmup = 1000;
    const auto r = run_experiment(cfg);
    CHECK(r.stats.accesses() == 9000);
  }

  TEST_CASE("standalone next-line covers a sequential stream") {
    auto cfg = config("sequential", 100000, "next-line");
    cfg.warmup = 1000;
    const auto r = run_experiment(cfg);
    CHECK(r.metrics.coverage >= 0.9);
    CHECK(*r.metrics.speedup_proxy > 1.0);
  }

  TEST_CASE("arsenal on a phased trace picks ip-stride then next-line") {
    auto cfg = config("phased", 20000, "arsenal-tc2");
    cfg.trace.pattern = phased_stride_sequential(10000, 5);
    const auto r = run_experiment(cfg);
    REQUIRE(r.timeline.size() >= 30);
    CHECK(r.timeline[10].chosen == ComponentId::ip_stride);
    CHECK(r.timeline.back().chosen == ComponentId::next_line);
  }

  TEST_CASE("identical configs give identical reports") {
    const auto a = run_experiment(config("pcdelta", 20000, "arsenal-tc1"));
    const auto b = run_experiment(config("pcdelta", 20000, "arsenal-tc1"));
    CHECK(a.stats.pf_issued == b.stats.pf_issued);
    CHECK(a.timeline == b.timeline);
    CHECK(a.metrics == b.metrics);
  }

  TEST_CASE("compare rows hold every roster engine and the oracle") {
    CompareConfig cfg;
    for (const char* p : {"sequential", "stride"}) {
      TraceSource t;
      t.name = p;
      t.pattern = preset_pattern(p, 2);
      t.length = 20000;
      cfg.traces.push_back(t);
    }
    cfg.arsenal.set_from_label("arsenal-tc2");
    cfg.jobs = 3;
    const auto rep = run_compare(cfg);
    REQUIRE(rep.rows.size() == 2);
    std::vector<std::string> engines;
    for (const auto& e : rep.rows[0].entries) engines.push_back(e.engine);
    CHECK(engines == std::vector<std::string>{"none", "spp", "ip-stride", "next-line", "arsenal-tc2"});
    CHECK(rep.rows[1].best_component == "ip-stride");
    CHECK(rep.summary.back().engine == "best-per-trace");

    cfg.jobs = 1;
    const auto serial = run_compare(cfg);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t k = 0; k < serial.rows[i].entries.size(); ++k)
        CHECK(serial.rows[i].entries[k].amat == rep.rows[i].entries[k].amat);
  }

  TEST_CASE("invalid configurations are rejected") {
    ExperimentConfig cfg;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);  // no trace source
    cfg.trace.file = "/nonexistent.trace";
    CHECK_THROWS_AS(run_experiment(cfg), IoError);
    EngineConfig e;
    CHECK_THROWS_AS(e.set_from_label("bogus"), ConfigError);
  }
}
