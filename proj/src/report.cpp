#include "arsenal/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace arsenal {

namespace {

template <typename T>
Json nullable(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

std::optional<double> opt_double(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

Json component_name(const std::optional<ComponentId>& id) {
  return id ? Json(std::string(to_string(*id))) : Json(nullptr);
}

ComponentId component_from(const Json& j) {
  auto id = parse_component(j.get<std::string>());
  if (!id) throw ConfigError("unknown component '" + j.get<std::string>() + "'");
  return *id;
}

std::string fmt_double(const std::optional<double>& v) {
  if (!v) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", *v);
  return buf;
}

}  // namespace

ReportFormat parse_format(std::string_view name) {
  if (name == "json") return ReportFormat::json;
  if (name == "csv") return ReportFormat::csv;
  throw ConfigError("unknown format '" + std::string(name) + "'");
}

Json to_json(const SimReport& r) {
  Json j;
  j["name"] = r.name;
  j["engine"] = r.engine;
  j["trace"] = r.trace;
  j["warmup"] = r.warmup;

  const auto& s = r.stats;
  Json stats;
  stats["accesses"] = s.accesses();
  stats["hits"] = s.hits;
  stats["prefetch_hits"] = s.prefetch_hits;
  stats["late_prefetch_hits"] = s.late_prefetch_hits;
  stats["misses"] = s.misses;
  stats["pf_requested"] = s.pf_requested;
  stats["pf_dropped"] = s.pf_dropped;
  stats["pf_issued"] = s.pf_issued;
  stats["pf_filled"] = s.pf_filled;
  stats["pf_late_merged"] = s.pf_late_merged;
  stats["pf_evicted_unused"] = s.pf_evicted_unused;
  stats["pf_in_flight_end"] = r.pf_in_flight_end;
  j["stats"] = std::move(stats);

  const auto& m = r.metrics;
  Json metrics;
  metrics["amat"] = m.amat;
  metrics["baseline_amat"] = nullable(r.baseline_amat);
  metrics["speedup_proxy"] = nullable(m.speedup_proxy);
  metrics["useful"] = m.useful;
  metrics["accuracy"] = nullable(m.accuracy);
  metrics["coverage"] = m.coverage;
  metrics["late_rate"] = nullable(m.late_rate);
  Json comps = Json::array();
  for (const auto& c : m.components) {
    Json cj;
    cj["component"] = std::string(to_string(c.id));
    cj["issued"] = c.issued;
    cj["useful"] = c.useful;
    cj["accuracy"] = nullable(c.accuracy);
    comps.push_back(std::move(cj));
  }
  metrics["components"] = std::move(comps);
  j["metrics"] = std::move(metrics);

  Json timeline = Json::array();
  for (const auto& rec : r.timeline) {
    Json tj;
    tj["phase_index"] = rec.phase_index;
    tj["decided_at"] = rec.decided_at;
    tj["pae_index"] = rec.pae_index;
    tj["chosen"] = component_name(rec.chosen);
    Json board = Json::array();
    for (const auto& b : rec.board) {
      Json bj;
      bj["component"] = std::string(to_string(b.id));
      bj["eval_counter"] = b.eval_counter;
      bj["prefetch_counter"] = b.prefetch_counter;
      bj["score"] = b.score;
      board.push_back(std::move(bj));
    }
    tj["board"] = std::move(board);
    timeline.push_back(std::move(tj));
  }
  j["timeline"] = std::move(timeline);
  j["notes"] = r.notes;
  return j;
}

SimReport report_from_json(const Json& j) {
  SimReport r;
  r.name = j.at("name").get<std::string>();
  r.engine = j.at("engine").get<std::string>();
  r.trace = j.at("trace").get<std::string>();
  r.warmup = j.at("warmup").get<std::uint64_t>();

  const auto& s = j.at("stats");
  r.stats.hits = s.at("hits").get<std::uint64_t>();
  r.stats.prefetch_hits = s.at("prefetch_hits").get<std::uint64_t>();
  r.stats.late_prefetch_hits = s.at("late_prefetch_hits").get<std::uint64_t>();
  r.stats.misses = s.at("misses").get<std::uint64_t>();
  r.stats.pf_requested = s.at("pf_requested").get<std::uint64_t>();
  r.stats.pf_dropped = s.at("pf_dropped").get<std::uint64_t>();
  r.stats.pf_issued = s.at("pf_issued").get<std::uint64_t>();
  r.stats.pf_filled = s.at("pf_filled").get<std::uint64_t>();
  r.stats.pf_late_merged = s.at("pf_late_merged").get<std::uint64_t>();
  r.stats.pf_evicted_unused = s.at("pf_evicted_unused").get<std::uint64_t>();
  r.pf_in_flight_end = s.at("pf_in_flight_end").get<std::uint64_t>();

  const auto& m = j.at("metrics");
  r.metrics.amat = m.at("amat").get<double>();
  r.baseline_amat = opt_double(m.at("baseline_amat"));
  r.metrics.speedup_proxy = opt_double(m.at("speedup_proxy"));
  r.metrics.useful = m.at("useful").get<std::uint64_t>();
  r.metrics.accuracy = opt_double(m.at("accuracy"));
  r.metrics.coverage = m.at("coverage").get<double>();
  r.metrics.late_rate = opt_double(m.at("late_rate"));
  for (const auto& cj : m.at("components")) {
    ComponentMetrics c;
    c.id = component_from(cj.at("component"));
    c.issued = cj.at("issued").get<std::uint64_t>();
    c.useful = cj.at("useful").get<std::uint64_t>();
    c.accuracy = opt_double(cj.at("accuracy"));
    r.stats.issued_by[static_cast<std::size_t>(c.id)] = c.issued;
    r.stats.useful_by[static_cast<std::size_t>(c.id)] = c.useful;
    r.metrics.components.push_back(c);
  }

  for (const auto& tj : j.at("timeline")) {
    SelectionRecord rec;
    rec.phase_index = tj.at("phase_index").get<std::uint64_t>();
    rec.decided_at = tj.at("decided_at").get<std::uint64_t>();
    rec.pae_index = tj.at("pae_index").get<std::uint64_t>();
    if (!tj.at("chosen").is_null()) rec.chosen = component_from(tj.at("chosen"));
    for (const auto& bj : tj.at("board")) {
      rec.board.push_back(ScoreboardEntry{component_from(bj.at("component")), bj.at("eval_counter").get<std::uint32_t>(),
                                          bj.at("prefetch_counter").get<std::uint32_t>(),
                                          bj.at("score").get<std::uint32_t>()});
    }
    r.timeline.push_back(std::move(rec));
  }
  r.notes = j.at("notes").get<std::vector<std::string>>();
  return r;
}

Json to_json(const CompareReport& report) {
  Json j;
  Json rows = Json::array();
  for (const auto& row : report.rows) {
    Json rj;
    rj["trace"] = row.trace;
    rj["baseline_amat"] = row.baseline_amat;
    rj["best_component"] = row.best_component;
    rj["best_component_speedup"] = row.best_component_speedup;
    Json entries = Json::array();
    for (const auto& e : row.entries) {
      Json ej;
      ej["engine"] = e.engine;
      ej["amat"] = e.amat;
      ej["speedup"] = e.speedup;
      ej["report"] = to_json(e.report);
      entries.push_back(std::move(ej));
    }
    rj["entries"] = std::move(entries);
    rows.push_back(std::move(rj));
  }
  j["rows"] = std::move(rows);
  Json summary = Json::array();
  for (const auto& s : report.summary) {
    Json sj;
    sj["engine"] = s.engine;
    sj["mean_speedup"] = s.mean_speedup;
    summary.push_back(std::move(sj));
  }
  j["summary"] = std::move(summary);
  return j;
}

Json to_json(const OverheadReport& r) {
  Json j;
  j["components"] = r.components;
  j["counter_bits_per_component"] = r.counter_bits_per_component;
  j["bit_table_bytes"] = r.bit_table_bytes;
  j["bloom_bytes_per_component"] = r.bloom_bytes_per_component;
  j["thresholds_bytes_per_component"] = r.thresholds_bytes_per_component;
  j["per_component_kb"] = OverheadReport::kb(r.per_component_bytes);
  j["framework_kb"] = OverheadReport::kb(r.framework_bytes);
  Json costs = Json::array();
  for (const auto& c : r.component_costs) {
    Json cj;
    cj["name"] = c.name;
    cj["kb"] = c.kb;
    costs.push_back(std::move(cj));
  }
  j["component_costs"] = std::move(costs);
  j["grand_total_kb"] = OverheadReport::kb(r.grand_total_bytes);
  j["notes"] = r.notes;
  return j;
}

std::string_view csv_header() {
  return "experiment,engine,trace,accesses,hits,prefetch_hits,late_prefetch_hits,misses,pf_requested,pf_issued,"
         "pf_dropped,pf_filled,pf_useful,amat,baseline_amat,speedup_proxy,accuracy,coverage,late_rate,phases";
}

std::string csv_row(const SimReport& r) {
  const auto& s = r.stats;
  std::ostringstream os;
  os << r.name << ',' << r.engine << ',' << r.trace << ',' << s.accesses() << ',' << s.hits << ',' << s.prefetch_hits
     << ',' << s.late_prefetch_hits << ',' << s.misses << ',' << s.pf_requested << ',' << s.pf_issued << ','
     << s.pf_dropped << ',' << s.pf_filled << ',' << r.metrics.useful << ',' << fmt_double(r.metrics.amat) << ','
     << fmt_double(r.baseline_amat) << ',' << fmt_double(r.metrics.speedup_proxy) << ','
     << fmt_double(r.metrics.accuracy) << ',' << fmt_double(r.metrics.coverage) << ','
     << fmt_double(r.metrics.late_rate) << ',' << r.timeline.size();
  return os.str();
}

void emit_report(const SimReport& report, ReportFormat format, std::ostream& sink) {
  if (format == ReportFormat::json) {
    sink << to_json(report).dump(2) << '\n';
  } else {
    sink << csv_header() << '\n' << csv_row(report) << '\n';
  }
  if (!sink) throw IoError("failed writing report");
}

void emit_report(const CompareReport& report, ReportFormat format, std::ostream& sink) {
  if (format == ReportFormat::json) {
    sink << to_json(report).dump(2) << '\n';
  } else {
    sink << csv_header() << '\n';
    for (const auto& row : report.rows)
      for (const auto& e : row.entries) sink << csv_row(e.report) << '\n';
  }
  if (!sink) throw IoError("failed writing report");
}

void emit_report_file(const SimReport& report, ReportFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  emit_report(report, format, out);
}

std::string format_compare_table(const CompareReport& report) {
  std::ostringstream os;
  char buf[64];
  if (report.rows.empty()) return {};
  std::size_t width = 5;
  for (const auto& row : report.rows) width = std::max(width, row.trace.size());
  auto pad = [&](const std::string& text) { os << text << std::string(width - text.size(), ' '); };
  pad("trace");
  for (const auto& e : report.rows.front().entries) {
    std::snprintf(buf, sizeof buf, " %12s", e.engine.c_str());
    os << buf;
  }
  os << "  best-per-trace\n";
  for (const auto& row : report.rows) {
    pad(row.trace);
    for (const auto& e : row.entries) {
      std::snprintf(buf, sizeof buf, " %12.4f", e.speedup);
      os << buf;
    }
    std::snprintf(buf, sizeof buf, "  %.4f (%s)\n", row.best_component_speedup, row.best_component.c_str());
    os << buf;
  }
  pad("mean");
  for (const auto& s : report.summary) {
    std::snprintf(buf, sizeof buf, " %s=%.4f", s.engine.c_str(), s.mean_speedup);
    os << buf;
  }
  os << '\n';
  return os.str();
}

std::string format_overhead(const OverheadReport& r) {
  std::ostringstream os;
  char buf[128];
  std::snprintf(buf, sizeof buf, "components             %u\n", r.components);
  os << buf;
  std::snprintf(buf, sizeof buf, "counters / component   %u bits\n", r.counter_bits_per_component);
  os << buf;
  std::snprintf(buf, sizeof buf, "bloom / component      %.1f B (bit table %llu B)\n", r.bloom_bytes_per_component,
                static_cast<unsigned long long>(r.bit_table_bytes));
  os << buf;
  std::snprintf(buf, sizeof buf, "thresholds / component %.1f B\n", r.thresholds_bytes_per_component);
  os << buf;
  std::snprintf(buf, sizeof buf, "framework              %.3f KB (%.3f KB each)\n", OverheadReport::kb(r.framework_bytes),
                OverheadReport::kb(r.per_component_bytes));
  os << buf;
  for (const auto& c : r.component_costs) {
    std::snprintf(buf, sizeof buf, "  %-20s %.3f KB\n", c.name.c_str(), c.kb);
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "total                  %.3f KB\n", OverheadReport::kb(r.grand_total_bytes));
  os << buf;
  for (const auto& n : r.notes) os << "note: " << n << '\n';
  return os.str();
}

}  // namespace arsenal
