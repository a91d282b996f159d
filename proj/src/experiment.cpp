#include "arsenal/experiment.hpp"

#include <algorithm>
#include <future>

namespace arsenal {

std::string EngineConfig::label() const {
  switch (kind) {
    case EngineKind::none: return "none";
    case EngineKind::standalone: return std::string(to_string(component));
    case EngineKind::arsenal: return arsenal.policy == SelectionPolicy::test_case_1 ? "arsenal-tc1" : "arsenal-tc2";
  }
  return "none";
}

void EngineConfig::set_from_label(const std::string& name) {
  if (name == "none") {
    kind = EngineKind::none;
  } else if (name == "arsenal-tc1" || name == "arsenal-tc2") {
    kind = EngineKind::arsenal;
    arsenal.policy = name == "arsenal-tc1" ? SelectionPolicy::test_case_1 : SelectionPolicy::test_case_2;
  } else if (auto id = parse_component(name)) {
    kind = EngineKind::standalone;
    component = *id;
  } else {
    throw ConfigError("unknown engine '" + name + "'");
  }
}

std::vector<AccessEvent> TraceSource::load() const {
  if (!file.empty()) return read_trace_file(file);
  if (!pattern) throw ConfigError("trace source needs a file or a pattern");
  return generate(*pattern, length);
}

std::string TraceSource::display_name() const {
  if (!name.empty()) return name;
  if (!file.empty()) return file;
  return "pattern";
}

void ExperimentConfig::validate() const {
  cache.validate();
  if (engine.kind == EngineKind::arsenal) engine.arsenal.validate();
  if (trace.file.empty()) {
    if (!trace.pattern) throw ConfigError("trace source needs a file or a pattern");
    trace.pattern->validate();
  }
}

Simulator::Simulator(const CacheConfig& cache, const EngineConfig& engine) : cache_(cache), kind_(engine.kind) {
  const unsigned bits = cache.line_bits();
  if (kind_ == EngineKind::arsenal) arsenal_ = std::make_unique<Arsenal>(engine.arsenal, engine.components, bits);
  if (kind_ == EngineKind::standalone) standalone_ = make_prefetcher(engine.component, engine.components, bits);
}

AccessOutcome Simulator::step(const AccessEvent& event) {
  cache_.fill_due(event.seq);
  const auto out = cache_.access(event);
  if (!out.is_pae || kind_ == EngineKind::none) return out;

  const PaeContext ctx{event.pc, out.line, event.seq, out.kind};
  if (arsenal_) {
    for (const auto& r : arsenal_->on_pae(ctx)) cache_.enqueue_prefetch(r.line, r.source, event.seq);
  } else {
    const auto source = standalone_->id();
    for (const auto& l : standalone_->on_pae(ctx)) cache_.enqueue_prefetch(l, source, event.seq);
  }
  return out;
}

namespace {

struct RunResult {
  CacheStats stats;
  std::uint64_t in_flight = 0;
  std::vector<SelectionRecord> timeline;
};

RunResult simulate(const CacheConfig& cache, const EngineConfig& engine, std::span<const AccessEvent> events,
                   std::uint64_t warmup) {
  Simulator sim(cache, engine);
  std::uint64_t n = 0;
  for (const auto& ev : events) {
    if (n++ == warmup && warmup > 0) sim.cache().reset_stats();
    sim.step(ev);
  }
  RunResult r{sim.cache().stats(), sim.cache().in_flight().size(), {}};
  if (const auto* a = sim.arsenal()) r.timeline = a->timeline();
  return r;
}

}  // namespace

SimReport run_events(const ExperimentConfig& cfg, std::span<const AccessEvent> events) {
  cfg.validate();
  if (events.size() <= cfg.warmup) throw ConfigError("trace has no accesses after warmup");

  SimReport report;
  report.name = cfg.name;
  report.engine = cfg.engine.label();
  report.trace = cfg.trace.display_name();
  report.warmup = cfg.warmup;

  auto run = simulate(cfg.cache, cfg.engine, events, cfg.warmup);
  report.stats = run.stats;
  report.pf_in_flight_end = run.in_flight;
  report.timeline = std::move(run.timeline);

  if (cfg.with_baseline) {
    if (cfg.engine.kind == EngineKind::none) {
      report.baseline_amat = amat(run.stats, cfg.cache);
    } else {
      EngineConfig none = cfg.engine;
      none.kind = EngineKind::none;
      report.baseline_amat = amat(simulate(cfg.cache, none, events, cfg.warmup).stats, cfg.cache);
    }
  }
  report.metrics = compute_metrics(report.stats, cfg.cache, report.baseline_amat);
  return report;
}

SimReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto events = cfg.trace.load();
  return run_events(cfg, events);
}

CompareReport run_compare(const CompareConfig& cfg) {
  if (cfg.arsenal.kind != EngineKind::arsenal) throw ConfigError("compare needs an arsenal engine");
  if (cfg.traces.empty()) throw ConfigError("compare needs at least one trace");

  const auto components = roster(cfg.arsenal.arsenal.policy);
  std::vector<EngineConfig> engines;
  {
    EngineConfig none = cfg.arsenal;
    none.kind = EngineKind::none;
    engines.push_back(none);
    for (auto id : components) {
      EngineConfig e = cfg.arsenal;
      e.kind = EngineKind::standalone;
      e.component = id;
      engines.push_back(e);
    }
    engines.push_back(cfg.arsenal);
  }

  struct Job {
    std::size_t trace;
    std::size_t engine;
  };
  std::vector<std::vector<AccessEvent>> traces;
  traces.reserve(cfg.traces.size());
  for (const auto& t : cfg.traces) traces.push_back(t.load());

  std::vector<Job> jobs;
  for (std::size_t t = 0; t < traces.size(); ++t)
    for (std::size_t e = 0; e < engines.size(); ++e) jobs.push_back({t, e});

  std::vector<RunResult> results(jobs.size());
  const std::size_t workers = std::max(1u, cfg.jobs);
  for (std::size_t base = 0; base < jobs.size(); base += workers) {
    std::vector<std::future<RunResult>> batch;
    for (std::size_t j = base; j < std::min(jobs.size(), base + workers); ++j) {
      batch.push_back(std::async(workers > 1 ? std::launch::async : std::launch::deferred, [&, j] {
        return simulate(cfg.cache, engines[jobs[j].engine], traces[jobs[j].trace], cfg.warmup);
      }));
    }
    for (std::size_t k = 0; k < batch.size(); ++k) results[base + k] = batch[k].get();
  }

  CompareReport report;
  std::vector<double> sums(engines.size() + 1, 0.0);
  for (std::size_t t = 0; t < traces.size(); ++t) {
    CompareRow row;
    row.trace = cfg.traces[t].display_name();
    const auto& base_stats = results[t * engines.size()].stats;
    row.baseline_amat = amat(base_stats, cfg.cache);
    for (std::size_t e = 0; e < engines.size(); ++e) {
      auto& run = results[t * engines.size() + e];
      CompareEntry entry;
      entry.engine = engines[e].label();
      entry.report.name = row.trace + "/" + entry.engine;
      entry.report.engine = entry.engine;
      entry.report.trace = row.trace;
      entry.report.warmup = cfg.warmup;
      entry.report.stats = run.stats;
      entry.report.pf_in_flight_end = run.in_flight;
      entry.report.timeline = std::move(run.timeline);
      entry.report.baseline_amat = row.baseline_amat;
      entry.report.metrics = compute_metrics(run.stats, cfg.cache, row.baseline_amat);
      entry.amat = entry.report.metrics.amat;
      entry.speedup = *entry.report.metrics.speedup_proxy;
      sums[e] += entry.speedup;
      if (engines[e].kind == EngineKind::standalone && entry.speedup > row.best_component_speedup) {
        row.best_component_speedup = entry.speedup;
        row.best_component = entry.engine;
      }
      row.entries.push_back(std::move(entry));
    }
    sums.back() += row.best_component_speedup;
    report.rows.push_back(std::move(row));
  }
  const double n = static_cast<double>(traces.size());
  for (std::size_t e = 0; e < engines.size(); ++e) report.summary.push_back({engines[e].label(), sums[e] / n});
  report.summary.push_back({"best-per-trace", sums.back() / n});
  return report;
}

}  // namespace arsenal
