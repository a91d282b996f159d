#include "arsenal/arsenal.hpp"

#include <algorithm>
#include <stdexcept>

namespace arsenal {

std::vector<ComponentId> roster(SelectionPolicy policy) {
  if (policy == SelectionPolicy::test_case_1) return {ComponentId::tskid, ComponentId::mlop};
  return {ComponentId::spp, ComponentId::ip_stride, ComponentId::next_line};
}

void ArsenalConfig::validate() const {
  if (eval_cnt == 0) throw ConfigError("arsenal.eval_cnt must be >= 1");
  if (score_bits == 0 || score_bits > 31) throw ConfigError("arsenal.score_bits must be in [1,31]");
  if (prefetch_counter_bits == 0 || prefetch_counter_bits > 31)
    throw ConfigError("arsenal.prefetch_counter_bits must be in [1,31]");
  if (bf_est_cap == 0) throw ConfigError("arsenal.bf_est_cap must be >= 1");
  if (!(bf_fpp > 0.0 && bf_fpp < 1.0)) throw ConfigError("arsenal.bf_fpp must be in (0,1)");
}

std::optional<ComponentId> select_test_case_1(const Tc1Scores& s, const ArsenalConfig& config,
                                              std::optional<ComponentId> previous) {
  if (s.tskid_score > s.mlop_score || s.tskid_attempts > config.tskid_selection_attempt) return ComponentId::tskid;
  if (s.mlop_score > s.tskid_score || s.mlop_attempts == s.tskid_attempts) return ComponentId::mlop;
  return previous;
}

std::optional<ComponentId> select_test_case_2(const Tc2Scores& s, const ArsenalConfig& config) {
  const bool spp_leads = config.spp_wins_ties ? s.spp >= s.ip_stride : s.spp > s.ip_stride;
  const ComponentId leader = spp_leads ? ComponentId::spp : ComponentId::ip_stride;
  const std::uint32_t lead = std::max(s.spp, s.ip_stride);

  if (lead >= s.next_line && lead > config.min_score) return leader;
  const bool next_line_max = s.next_line > s.spp && s.next_line > s.ip_stride;
  if (next_line_max && s.next_line > config.next_line_min_score) return ComponentId::next_line;
  if (next_line_max && lead > config.min_score) return leader;
  return std::nullopt;
}

Arsenal::Arsenal(ArsenalConfig config, const ComponentConfigs& components, unsigned line_bits)
    : config_(config), roster_(roster(config.policy)) {
  config_.validate();
  for (std::size_t i = 0; i < roster_.size(); ++i) {
    prefetchers_.push_back(make_prefetcher(roster_[i], components, line_bits));
    filters_.emplace_back(config_.filter_kind, BloomParams{config_.bf_est_cap, config_.bf_fpp, config_.master_seed + i});
    board_.push_back(ScoreboardEntry{roster_[i]});
  }
}

std::size_t Arsenal::slot(ComponentId id) const {
  auto it = std::find(roster_.begin(), roster_.end(), id);
  if (it == roster_.end()) throw std::out_of_range("component not in roster");
  return static_cast<std::size_t>(it - roster_.begin());
}

Prefetcher& Arsenal::component(ComponentId id) { return *prefetchers_[slot(id)]; }
const Prefetcher& Arsenal::component(ComponentId id) const { return *prefetchers_[slot(id)]; }

std::vector<std::int32_t> Arsenal::score_demand(LineAddress line) {
  std::vector<std::int32_t> deltas(roster_.size());
  for (std::size_t i = 0; i < roster_.size(); ++i) {
    auto& b = board_[i];
    const auto before = b.score;
    const bool hit = filters_[i].query(line);
    b.score = hit ? sat_add(b.score, config_.score_inc, config_.score_max()) : sat_sub(b.score, config_.score_dec);
    deltas[i] = static_cast<std::int32_t>(b.score) - static_cast<std::int32_t>(before);
    if (log_ != nullptr) log_->back().probe_hits[i] = hit;
  }
  return deltas;
}

std::optional<ComponentId> Arsenal::decide() const {
  if (config_.policy == SelectionPolicy::test_case_1) {
    const auto& t = board_[slot(ComponentId::tskid)];
    const auto& m = board_[slot(ComponentId::mlop)];
    return select_test_case_1({t.score, m.score, t.prefetch_counter, m.prefetch_counter}, config_, selected_);
  }
  return select_test_case_2({board_[slot(ComponentId::spp)].score, board_[slot(ComponentId::ip_stride)].score,
                             board_[slot(ComponentId::next_line)].score},
                            config_);
}

std::vector<PrefetchRequest> Arsenal::on_pae(const PaeContext& ctx) {
  ++pae_count_;
  if (log_ != nullptr) {
    PaeLogRecord rec;
    rec.demand = ctx.line;
    rec.probe_hits.assign(roster_.size(), false);
    rec.candidates.resize(roster_.size());
    log_->push_back(std::move(rec));
  }

  score_demand(ctx.line);
  if (log_ != nullptr)
    for (const auto& b : board_) log_->back().scores_after_probe.push_back(b.score);

  std::vector<PrefetchRequest> requests;
  for (std::size_t i = 0; i < roster_.size(); ++i) {
    auto candidates = prefetchers_[i]->on_pae(ctx);
    for (const auto& c : candidates) filters_[i].insert(c);
    auto& b = board_[i];
    b.eval_counter = std::min(b.eval_counter + 1, config_.eval_cnt);
    b.prefetch_counter =
        sat_add(b.prefetch_counter, static_cast<std::uint32_t>(candidates.size()), config_.prefetch_counter_max());
    if (selected_ == roster_[i])
      for (const auto& c : candidates) requests.push_back(PrefetchRequest{c, roster_[i], ctx.seq});
    if (log_ != nullptr) log_->back().candidates[i] = std::move(candidates);
  }

  if (std::all_of(board_.begin(), board_.end(), [&](const ScoreboardEntry& b) { return b.eval_counter >= config_.eval_cnt; })) {
    selected_ = decide();
    timeline_.push_back(SelectionRecord{phase_, ctx.seq, pae_count_, selected_, board_});
    if (log_ != nullptr) log_->back().selection_fired = true;
    phase_reset();
  }
  return requests;
}

void Arsenal::phase_reset() {
  for (std::size_t i = 0; i < roster_.size(); ++i) {
    if (roster_[i] == ComponentId::next_line)
      static_cast<NextLinePrefetcher&>(*prefetchers_[i]).set_degree(board_[i].score);
    board_[i].eval_counter = 0;
    board_[i].prefetch_counter = 0;
    board_[i].score = 0;
    filters_[i].clear();
  }
  ++phase_;
}

}  // namespace arsenal
