#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "arsenal/bloom_filter.hpp"
#include "arsenal/prefetchers.hpp"

namespace arsenal {

enum class SelectionPolicy : std::uint8_t { test_case_1, test_case_2 };

/// Component roster for a policy: {tskid, mlop} or {spp, ip_stride, next_line}.
std::vector<ComponentId> roster(SelectionPolicy policy);

struct ArsenalConfig {
  std::uint32_t score_inc = 4;
  std::uint32_t score_dec = 1;
  std::uint32_t min_score = 0;
  std::uint32_t next_line_min_score = 1500;
  std::uint32_t eval_cnt = 512;
  std::uint32_t tskid_selection_attempt = 10000;
  double bf_fpp = 0.01;
  std::uint64_t bf_est_cap = 2000;
  SelectionPolicy policy = SelectionPolicy::test_case_2;

  FilterKind filter_kind = FilterKind::bloom;
  std::uint64_t master_seed = 0x4172'7365'6e61'6c00ULL;
  std::uint32_t prefetch_counter_bits = 12;
  std::uint32_t score_bits = 11;
  /// Tie between spp and ip_stride in test case 2 goes to spp when set.
  bool spp_wins_ties = true;

  void validate() const;
  std::uint32_t score_max() const { return (1u << score_bits) - 1; }
  std::uint32_t prefetch_counter_max() const { return (1u << prefetch_counter_bits) - 1; }
};

struct ScoreboardEntry {
  ComponentId id = ComponentId::next_line;
  std::uint32_t eval_counter = 0;      // PAEs this phase
  std::uint32_t prefetch_counter = 0;  // candidate lines this phase
  std::uint32_t score = 0;

  bool operator==(const ScoreboardEntry&) const = default;
};

struct SelectionRecord {
  std::uint64_t phase_index = 0;
  Seq decided_at = 0;
  std::uint64_t pae_index = 0;  // PAEs seen by the engine up to and including the deciding one
  std::optional<ComponentId> chosen;
  std::vector<ScoreboardEntry> board;  // state at decision time, before the reset

  bool operator==(const SelectionRecord&) const = default;
};

struct PrefetchRequest {
  LineAddress line;
  ComponentId source = ComponentId::next_line;
  Seq issue_seq = 0;
};

/// Per-PAE trace of everything that feeds scoring, for offline recomputation.
struct PaeLogRecord {
  LineAddress demand;
  std::vector<bool> probe_hits;                      // roster order
  std::vector<std::vector<LineAddress>> candidates;  // roster order
  std::vector<std::uint32_t> scores_after_probe;     // roster order
  bool selection_fired = false;
};

struct Tc1Scores {
  std::uint32_t tskid_score = 0;
  std::uint32_t mlop_score = 0;
  std::uint32_t tskid_attempts = 0;
  std::uint32_t mlop_attempts = 0;
};

struct Tc2Scores {
  std::uint32_t spp = 0;
  std::uint32_t ip_stride = 0;
  std::uint32_t next_line = 0;
};

/// T-SKID / MLOP selection. T-SKID wins on a higher score or when its attempts
/// exceed tskid_selection_attempt; otherwise MLOP wins on a higher score or equal
/// attempts; otherwise the previous choice stands.
std::optional<ComponentId> select_test_case_1(const Tc1Scores& s, const ArsenalConfig& config,
                                              std::optional<ComponentId> previous);

/// SPP / IP-stride / next-line selection; std::nullopt when no score clears its threshold.
std::optional<ComponentId> select_test_case_2(const Tc2Scores& s, const ArsenalConfig& config);

/// Runs every roster component in shadow mode on each PAE, scores them against
/// their own filters, and forwards only the selected component's candidates.
class Arsenal {
 public:
  explicit Arsenal(ArsenalConfig config, const ComponentConfigs& components = {}, unsigned line_bits = 6);

  std::vector<PrefetchRequest> on_pae(const PaeContext& ctx);

  /// Probes every filter for the demanded line and applies +score_inc / -score_dec.
  /// Returns the applied per-component change (after saturation), roster order.
  std::vector<std::int32_t> score_demand(LineAddress line);

  /// Clears counters, scores and filters; retunes next-line degree from its
  /// pre-reset score. The current selection is kept.
  void phase_reset();

  std::optional<ComponentId> selected() const { return selected_; }
  std::span<const ScoreboardEntry> scoreboard() const { return board_; }
  const std::vector<SelectionRecord>& timeline() const { return timeline_; }
  const std::vector<ComponentId>& components() const { return roster_; }
  const ArsenalConfig& config() const { return config_; }
  std::uint64_t phase_index() const { return phase_; }

  Prefetcher& component(ComponentId id);
  const Prefetcher& component(ComponentId id) const;

  /// Optional sink for per-PAE records; pass nullptr to disable.
  void set_log(std::vector<PaeLogRecord>* log) { log_ = log; }

 private:
  std::size_t slot(ComponentId id) const;
  std::optional<ComponentId> decide() const;

  ArsenalConfig config_;
  std::vector<ComponentId> roster_;
  std::vector<std::unique_ptr<Prefetcher>> prefetchers_;
  std::vector<ShadowFilter> filters_;
  std::vector<ScoreboardEntry> board_;
  std::optional<ComponentId> selected_;
  std::vector<SelectionRecord> timeline_;
  std::uint64_t phase_ = 0;
  std::uint64_t pae_count_ = 0;
  std::vector<PaeLogRecord>* log_ = nullptr;
};

}  // namespace arsenal
