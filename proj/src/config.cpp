#include "arsenal/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

namespace arsenal {

namespace {

void check_keys(const Json& j, std::initializer_list<std::string_view> allowed, std::string_view where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError("unknown field '" + key + "' in " + std::string(where));
  }
}

template <typename T>
void read(const Json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

std::uint64_t parse_u64(const std::string& s) {
  try {
    std::size_t pos = 0;
    const auto v = std::stoull(s, &pos, 0);
    if (pos != s.size()) throw ConfigError("bad number '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("bad number '" + s + "'");
  }
}

std::int64_t parse_i64(const std::string& s) {
  try {
    std::size_t pos = 0;
    const auto v = std::stoll(s, &pos, 0);
    if (pos != s.size()) throw ConfigError("bad number '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("bad number '" + s + "'");
  }
}

void seed_pattern(PatternSpec& p, std::uint64_t seed) {
  p.seed = seed;
  for (auto& s : p.segments) seed_pattern(s.pattern, seed);
}

}  // namespace

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
}

CacheConfig cache_from_json(const Json& j, CacheConfig c) {
  check_keys(j, {"sets", "ways", "line_size", "hit_latency", "miss_latency", "late_latency", "prefetch_fill_delay",
                 "prefetch_queue_capacity"},
             "cache");
  read(j, "sets", c.sets);
  read(j, "ways", c.ways);
  read(j, "line_size", c.line_size);
  read(j, "hit_latency", c.hit_latency);
  read(j, "miss_latency", c.miss_latency);
  read(j, "late_latency", c.late_latency);
  read(j, "prefetch_fill_delay", c.prefetch_fill_delay);
  read(j, "prefetch_queue_capacity", c.prefetch_queue_capacity);
  c.validate();
  return c;
}

ArsenalConfig arsenal_from_json(const Json& j, ArsenalConfig c) {
  check_keys(j, {"score_inc", "score_dec", "min_score", "next_line_min_score", "eval_cnt", "tskid_selection_attempt",
                 "bf_fpp", "bf_est_cap", "policy", "filter", "master_seed", "prefetch_counter_bits", "score_bits",
                 "spp_wins_ties"},
             "arsenal");
  read(j, "score_inc", c.score_inc);
  read(j, "score_dec", c.score_dec);
  read(j, "min_score", c.min_score);
  read(j, "next_line_min_score", c.next_line_min_score);
  read(j, "eval_cnt", c.eval_cnt);
  read(j, "tskid_selection_attempt", c.tskid_selection_attempt);
  read(j, "bf_fpp", c.bf_fpp);
  read(j, "bf_est_cap", c.bf_est_cap);
  read(j, "master_seed", c.master_seed);
  read(j, "prefetch_counter_bits", c.prefetch_counter_bits);
  read(j, "score_bits", c.score_bits);
  read(j, "spp_wins_ties", c.spp_wins_ties);
  if (j.contains("policy")) {
    const auto p = j.at("policy").get<std::string>();
    if (p == "tc1" || p == "test_case_1") c.policy = SelectionPolicy::test_case_1;
    else if (p == "tc2" || p == "test_case_2") c.policy = SelectionPolicy::test_case_2;
    else throw ConfigError("unknown arsenal.policy '" + p + "'");
  }
  if (j.contains("filter")) {
    const auto f = j.at("filter").get<std::string>();
    if (f == "bloom") c.filter_kind = FilterKind::bloom;
    else if (f == "exact") c.filter_kind = FilterKind::exact;
    else throw ConfigError("unknown arsenal.filter '" + f + "'");
  }
  c.validate();
  return c;
}

ComponentConfigs components_from_json(const Json& j, ComponentConfigs c) {
  check_keys(j, {"next_line", "ip_stride", "spp", "mlop", "tskid"}, "components");
  if (j.contains("next_line")) {
    const auto& s = j.at("next_line");
    check_keys(s, {"degree", "max_degree", "score_divisor"}, "components.next_line");
    read(s, "degree", c.next_line.degree);
    read(s, "max_degree", c.next_line.max_degree);
    read(s, "score_divisor", c.next_line.score_divisor);
  }
  if (j.contains("ip_stride")) {
    const auto& s = j.at("ip_stride");
    check_keys(s, {"table_size", "degree", "confidence_threshold"}, "components.ip_stride");
    read(s, "table_size", c.ip_stride.table_size);
    read(s, "degree", c.ip_stride.degree);
    read(s, "confidence_threshold", c.ip_stride.confidence_threshold);
  }
  if (j.contains("spp")) {
    const auto& s = j.at("spp");
    check_keys(s, {"st_entries", "pt_entries", "ghr_entries", "max_depth", "lookahead_threshold"}, "components.spp");
    read(s, "st_entries", c.spp.st_entries);
    read(s, "pt_entries", c.spp.pt_entries);
    read(s, "ghr_entries", c.spp.ghr_entries);
    read(s, "max_depth", c.spp.max_depth);
    read(s, "lookahead_threshold", c.spp.lookahead_threshold);
  }
  if (j.contains("mlop")) {
    const auto& s = j.at("mlop");
    check_keys(s, {"zones", "levels", "max_offset", "round_length", "score_threshold"}, "components.mlop");
    read(s, "zones", c.mlop.zones);
    read(s, "levels", c.mlop.levels);
    read(s, "max_offset", c.mlop.max_offset);
    read(s, "round_length", c.mlop.round_length);
    read(s, "score_threshold", c.mlop.score_threshold);
  }
  if (j.contains("tskid")) {
    const auto& s = j.at("tskid");
    check_keys(s, {"table_size", "confidence_threshold", "lead", "verification_expiry", "max_pending", "max_delayed"},
               "components.tskid");
    read(s, "table_size", c.tskid.table_size);
    read(s, "confidence_threshold", c.tskid.confidence_threshold);
    read(s, "lead", c.tskid.lead);
    read(s, "verification_expiry", c.tskid.verification_expiry);
    read(s, "max_pending", c.tskid.max_pending);
    read(s, "max_delayed", c.tskid.max_delayed);
  }
  return c;
}

PatternSpec pattern_from_json(const Json& j) {
  if (j.contains("preset")) {
    check_keys(j, {"preset", "seed", "segment_length"}, "pattern");
    std::uint64_t seed = 1;
    read(j, "seed", seed);
    const auto name = j.at("preset").get<std::string>();
    if (name == "phased" && j.contains("segment_length"))
      return phased_stride_sequential(j.at("segment_length").get<std::uint64_t>(), seed);
    return preset_pattern(name, seed);
  }
  check_keys(j, {"kind", "start", "stride", "pc", "pc_count", "working_set_lines", "line_size", "streams", "segments",
                 "seed"},
             "pattern");
  PatternSpec p;
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "sequential") p.kind = PatternKind::sequential;
  else if (kind == "stride") p.kind = PatternKind::stride;
  else if (kind == "random_working_set") p.kind = PatternKind::random_working_set;
  else if (kind == "pc_delta") p.kind = PatternKind::pc_delta;
  else if (kind == "phased") p.kind = PatternKind::phased;
  else throw ConfigError("unknown pattern kind '" + kind + "'");
  read(j, "start", p.start);
  read(j, "stride", p.stride);
  read(j, "pc", p.pc);
  read(j, "pc_count", p.pc_count);
  read(j, "working_set_lines", p.working_set_lines);
  read(j, "line_size", p.line_size);
  read(j, "seed", p.seed);
  if (j.contains("streams")) {
    for (const auto& s : j.at("streams")) {
      check_keys(s, {"pc", "start", "delta"}, "pattern.streams[]");
      PcStream st;
      read(s, "pc", st.pc);
      read(s, "start", st.start);
      read(s, "delta", st.delta);
      p.streams.push_back(st);
    }
  }
  if (j.contains("segments")) {
    for (const auto& s : j.at("segments")) {
      check_keys(s, {"pattern", "length"}, "pattern.segments[]");
      p.segments.push_back(PhasedSegment{pattern_from_json(s.at("pattern")), s.at("length").get<std::uint64_t>()});
    }
  }
  p.validate();
  return p;
}

TraceSource trace_from_json(const Json& j) {
  check_keys(j, {"name", "file", "pattern", "length"}, "trace");
  TraceSource t;
  read(j, "name", t.name);
  read(j, "file", t.file);
  read(j, "length", t.length);
  if (j.contains("pattern")) t.pattern = pattern_from_json(j.at("pattern"));
  if (t.file.empty() && !t.pattern) throw ConfigError("trace needs 'file' or 'pattern'");
  return t;
}

PatternSpec parse_pattern_arg(const std::string& arg, std::uint64_t seed) {
  const auto colon = arg.find(':');
  const std::string name = arg.substr(0, colon);
  PatternSpec p = preset_pattern(name, seed);
  if (colon == std::string::npos) return p;

  std::stringstream rest(arg.substr(colon + 1));
  std::string kv;
  while (std::getline(rest, kv, ',')) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("pattern option '" + kv + "' is not key=value");
    const auto key = kv.substr(0, eq);
    const auto value = kv.substr(eq + 1);
    if (key == "start") p.start = parse_u64(value);
    else if (key == "stride") p.stride = parse_i64(value);
    else if (key == "pc") p.pc = parse_u64(value);
    else if (key == "pcs") p.pc_count = static_cast<std::uint32_t>(parse_u64(value));
    else if (key == "ws") p.working_set_lines = parse_u64(value);
    else if (key == "segment" && p.kind == PatternKind::phased) p = phased_stride_sequential(parse_u64(value), seed);
    else throw ConfigError("unknown pattern option '" + key + "' for '" + name + "'");
  }
  p.validate();
  return p;
}

namespace {

EngineConfig engine_from_json(const Json& j) {
  EngineConfig e;
  if (j.contains("arsenal")) e.arsenal = arsenal_from_json(j.at("arsenal"));
  if (j.contains("components")) e.components = components_from_json(j.at("components"));
  if (j.contains("engine")) e.set_from_label(j.at("engine").get<std::string>());
  return e;
}

}  // namespace

ExperimentConfig experiment_from_json(const Json& j) {
  check_keys(j, {"name", "seed", "warmup", "engine", "trace", "traces", "cache", "arsenal", "components"}, "config");
  ExperimentConfig cfg;
  read(j, "name", cfg.name);
  read(j, "warmup", cfg.warmup);
  if (j.contains("cache")) cfg.cache = cache_from_json(j.at("cache"));
  cfg.engine = engine_from_json(j);
  if (j.contains("trace")) cfg.trace = trace_from_json(j.at("trace"));
  if (j.contains("seed")) apply_seed(cfg, j.at("seed").get<std::uint64_t>());
  return cfg;
}

CompareConfig compare_from_json(const Json& j) {
  check_keys(j, {"name", "seed", "warmup", "engine", "trace", "traces", "cache", "arsenal", "components", "jobs"},
             "config");
  CompareConfig cfg;
  read(j, "warmup", cfg.warmup);
  read(j, "jobs", cfg.jobs);
  if (j.contains("cache")) cfg.cache = cache_from_json(j.at("cache"));
  cfg.arsenal = engine_from_json(j);
  if (cfg.arsenal.kind != EngineKind::arsenal) cfg.arsenal.kind = EngineKind::arsenal;
  if (j.contains("traces"))
    for (const auto& t : j.at("traces")) cfg.traces.push_back(trace_from_json(t));
  if (j.contains("trace")) cfg.traces.push_back(trace_from_json(j.at("trace")));
  if (j.contains("seed")) apply_seed(cfg, j.at("seed").get<std::uint64_t>());
  return cfg;
}

void apply_seed(ExperimentConfig& cfg, std::uint64_t seed) {
  if (cfg.trace.pattern) seed_pattern(*cfg.trace.pattern, seed);
  cfg.engine.arsenal.master_seed = seed;
}

void apply_seed(CompareConfig& cfg, std::uint64_t seed) {
  for (auto& t : cfg.traces)
    if (t.pattern) seed_pattern(*t.pattern, seed);
  cfg.arsenal.arsenal.master_seed = seed;
}

}  // namespace arsenal
