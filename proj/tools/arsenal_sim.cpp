// Command-line driver: run | compare | overhead | gen
#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "arsenal/config.hpp"

namespace {

using namespace arsenal;

struct CommonOptions {
  std::string config;
  std::vector<std::string> traces;
  std::vector<std::string> patterns;
  std::uint64_t length = 1'000'000;
  std::string engine;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> warmup;
  std::string out;
  std::string format = "json";
};

void add_common(CLI::App* cmd, CommonOptions& o, bool multi) {
  cmd->add_option("--config", o.config, "Experiment configuration file (JSON)")->check(CLI::ExistingFile);
  if (multi) {
    cmd->add_option("--trace", o.traces, "Text trace file (repeatable)");
    cmd->add_option("--pattern", o.patterns, "Synthetic pattern preset[:key=value,...] (repeatable)");
  } else {
    cmd->add_option("--trace", o.traces, "Text trace file")->expected(1);
    cmd->add_option("--pattern", o.patterns, "Synthetic pattern preset[:key=value,...]")->expected(1);
  }
  cmd->add_option("--length", o.length, "Events per synthetic trace");
  cmd->add_option("--engine", o.engine, "arsenal-tc1|arsenal-tc2|spp|ip-stride|next-line|mlop|tskid|none");
  cmd->add_option("--seed", o.seed, "Seed for synthetic traces and Bloom hashing");
  cmd->add_option("--warmup", o.warmup, "Accesses excluded from statistics");
  cmd->add_option("--out", o.out, "Output file (default stdout)");
  cmd->add_option("--format", o.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
}

std::vector<TraceSource> sources(const CommonOptions& o) {
  std::vector<TraceSource> out;
  for (const auto& t : o.traces) out.push_back(TraceSource{t, t, std::nullopt, 0});
  for (const auto& p : o.patterns) out.push_back(TraceSource{p, "", parse_pattern_arg(p, o.seed.value_or(1)), o.length});
  return out;
}

template <typename Report>
void write(const Report& report, const CommonOptions& o) {
  const auto format = parse_format(o.format);
  if (o.out.empty()) {
    emit_report(report, format, std::cout);
    return;
  }
  std::ofstream file(o.out, std::ios::binary);
  if (!file) throw IoError("cannot open '" + o.out + "' for writing");
  emit_report(report, format, file);
}

int cmd_run(const CommonOptions& o) {
  ExperimentConfig cfg = o.config.empty() ? ExperimentConfig{} : experiment_from_json(load_json_file(o.config));
  auto src = sources(o);
  if (src.size() > 1) throw ConfigError("run takes one trace");
  if (!src.empty()) cfg.trace = src.front();
  if (cfg.trace.file.empty() && !cfg.trace.pattern) throw ConfigError("run needs --trace, --pattern or a config trace");
  if (!o.engine.empty()) cfg.engine.set_from_label(o.engine);
  if (o.seed) apply_seed(cfg, *o.seed);
  if (o.warmup) cfg.warmup = *o.warmup;
  write(run_experiment(cfg), o);
  return 0;
}

int cmd_compare(const CommonOptions& o, unsigned jobs) {
  CompareConfig cfg = o.config.empty() ? CompareConfig{} : compare_from_json(load_json_file(o.config));
  for (auto& s : sources(o)) cfg.traces.push_back(std::move(s));
  if (cfg.traces.empty())
    for (const auto& name : preset_names()) cfg.traces.push_back(TraceSource{name, "", preset_pattern(name), o.length});
  if (!o.engine.empty()) {
    cfg.arsenal.set_from_label(o.engine);
    if (cfg.arsenal.kind != EngineKind::arsenal) throw ConfigError("compare --engine must be arsenal-tc1 or arsenal-tc2");
  }
  if (o.seed) apply_seed(cfg, *o.seed);
  if (o.warmup) cfg.warmup = *o.warmup;
  if (jobs > 0) cfg.jobs = jobs;
  const auto report = run_compare(cfg);
  write(report, o);
  if (!o.out.empty()) std::cout << format_compare_table(report);
  return 0;
}

int cmd_overhead(const std::string& which, const std::string& format) {
  std::vector<OverheadReport> reports;
  if (which == "tc1" || which == "both")
    reports.push_back(overhead(2, 2000, 0.01, {{"tskid", 52.5}, {"mlop", 12.0}}));
  if (which == "tc2" || which == "both")
    reports.push_back(overhead(3, 2000, 0.01, {{"spp", 5.73}, {"ip-stride", 5.47}, {"next-line", 0.0}}));
  if (which == "single") reports.push_back(overhead(1, 2000, 0.01, {}));
  if (format == "json") {
    Json arr = Json::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    std::cout << arr.dump(2) << '\n';
  } else {
    for (const auto& r : reports) std::cout << format_overhead(r) << '\n';
  }
  return 0;
}

int cmd_gen(const CommonOptions& o) {
  if (o.patterns.size() != 1) throw ConfigError("gen needs exactly one --pattern");
  const auto spec = parse_pattern_arg(o.patterns.front(), o.seed.value_or(1));
  const auto events = generate(spec, o.length);
  if (o.out.empty()) {
    write_trace(std::cout, events);
    return 0;
  }
  std::ofstream file(o.out, std::ios::binary);
  if (!file) throw IoError("cannot open '" + o.out + "' for writing");
  write_trace(file, events);
  if (!file) throw IoError("failed writing '" + o.out + "'");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trace-driven cache simulator with an Arsenal meta-prefetcher"};
  app.require_subcommand(1);

  CommonOptions run_opts, cmp_opts, gen_opts;
  unsigned jobs = 0;
  std::string which = "both", ov_format = "text";

  auto* run = app.add_subcommand("run", "Run one experiment and emit its report");
  add_common(run, run_opts, false);
  auto* cmp = app.add_subcommand("compare", "Arsenal vs standalone components vs no prefetching");
  add_common(cmp, cmp_opts, true);
  cmp->add_option("--jobs", jobs, "Parallel experiments");
  auto* ov = app.add_subcommand("overhead", "Print the hardware storage budget");
  ov->add_option("--case", which, "tc1|tc2|both|single")->check(CLI::IsMember({"tc1", "tc2", "both", "single"}));
  ov->add_option("--format", ov_format, "text|json")->check(CLI::IsMember({"text", "json"}));
  auto* gen = app.add_subcommand("gen", "Write a synthetic trace file");
  gen->add_option("--pattern", gen_opts.patterns, "Pattern preset[:key=value,...]")->required()->expected(1);
  gen->add_option("--length", gen_opts.length, "Number of events");
  gen->add_option("--seed", gen_opts.seed, "Generator seed");
  gen->add_option("--out", gen_opts.out, "Output trace file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_opts);
    if (cmp->parsed()) return cmd_compare(cmp_opts, jobs);
    if (ov->parsed()) return cmd_overhead(which, ov_format);
    if (gen->parsed()) return cmd_gen(gen_opts);
  } catch (const TraceParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
