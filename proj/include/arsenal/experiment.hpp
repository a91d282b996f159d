#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "arsenal/arsenal.hpp"
#include "arsenal/cache.hpp"
#include "arsenal/metrics.hpp"
#include "arsenal/prefetchers.hpp"
#include "arsenal/trace.hpp"

namespace arsenal {

enum class EngineKind : std::uint8_t { none, standalone, arsenal };

struct EngineConfig {
  EngineKind kind = EngineKind::arsenal;
  ComponentId component = ComponentId::next_line;  // standalone only
  ArsenalConfig arsenal;
  ComponentConfigs components;

  /// "arsenal-tc1", "arsenal-tc2", a component name, or "none".
  std::string label() const;
  /// Applies an engine name on top of this config. Throws ConfigError on unknown names.
  void set_from_label(const std::string& name);
};

struct TraceSource {
  std::string name;
  std::string file;                    // text trace, if set
  std::optional<PatternSpec> pattern;  // otherwise synthetic
  std::uint64_t length = 1'000'000;

  std::vector<AccessEvent> load() const;
  std::string display_name() const;
};

struct ExperimentConfig {
  std::string name = "experiment";
  TraceSource trace;
  CacheConfig cache;
  EngineConfig engine;
  std::uint64_t warmup = 0;  // accesses excluded from statistics
  bool with_baseline = true;

  void validate() const;
};

struct SimReport {
  std::string name;
  std::string engine;
  std::string trace;
  std::uint64_t warmup = 0;
  CacheStats stats;
  std::uint64_t pf_in_flight_end = 0;
  std::optional<double> baseline_amat;
  Metrics metrics;
  std::vector<SelectionRecord> timeline;
  std::vector<std::string> notes;
};

/// One trace-driven simulation: cache plus the configured prefetching engine.
class Simulator {
 public:
  Simulator(const CacheConfig& cache, const EngineConfig& engine);

  /// fill_due -> access -> (on PAE) engine -> enqueue.
  AccessOutcome step(const AccessEvent& event);

  const Cache& cache() const { return cache_; }
  Cache& cache() { return cache_; }
  Arsenal* arsenal() { return arsenal_.get(); }
  const Arsenal* arsenal() const { return arsenal_.get(); }
  Prefetcher* standalone() { return standalone_.get(); }

 private:
  Cache cache_;
  EngineKind kind_;
  std::unique_ptr<Arsenal> arsenal_;
  std::unique_ptr<Prefetcher> standalone_;
};

/// Runs cfg.engine over events; with_baseline adds a NoPrefetch run of the same events.
SimReport run_events(const ExperimentConfig& cfg, std::span<const AccessEvent> events);
SimReport run_experiment(const ExperimentConfig& cfg);

struct CompareConfig {
  std::vector<TraceSource> traces;
  CacheConfig cache;
  EngineConfig arsenal;  // kind must be arsenal; its roster defines the standalone set
  std::uint64_t warmup = 0;
  unsigned jobs = 1;
};

struct CompareEntry {
  std::string engine;
  double amat = 0.0;
  double speedup = 0.0;
  SimReport report;
};

struct CompareRow {
  std::string trace;
  double baseline_amat = 0.0;
  std::vector<CompareEntry> entries;  // none, roster components, arsenal
  std::string best_component;        // per-trace oracle over standalone components
  double best_component_speedup = 0.0;
};

struct CompareSummary {
  std::string engine;
  double mean_speedup = 0.0;
};

struct CompareReport {
  std::vector<CompareRow> rows;
  std::vector<CompareSummary> summary;  // includes "best-per-trace"
};

/// Arsenal vs each standalone roster component vs NoPrefetch vs the best-per-trace
/// oracle. Experiments may run on cfg.jobs threads; results are ordered by index.
CompareReport run_compare(const CompareConfig& cfg);

}  // namespace arsenal
