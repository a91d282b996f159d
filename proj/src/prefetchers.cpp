#include "arsenal/prefetchers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

namespace arsenal {

std::optional<LineAddress> Prefetcher::offset_line(LineAddress base, std::int64_t delta) const {
  if (delta >= 0) {
    const auto d = static_cast<std::uint64_t>(delta);
    if (base.value > max_line_ || max_line_ - base.value < d) return std::nullopt;
    return LineAddress{base.value + d};
  }
  const auto d = static_cast<std::uint64_t>(-(delta + 1)) + 1;
  if (base.value < d) return std::nullopt;
  return LineAddress{base.value - d};
}

// ---------------------------------------------------------------------------
// next-line

NextLinePrefetcher::NextLinePrefetcher(NextLineConfig config)
    : config_(config), degree_(std::clamp<std::uint32_t>(config.degree, 1, std::max(1u, config.max_degree))) {}

std::vector<LineAddress> NextLinePrefetcher::on_pae(const PaeContext& ctx) {
  std::vector<LineAddress> out;
  out.reserve(degree_);
  for (std::uint32_t i = 1; i <= degree_; ++i)
    if (auto l = offset_line(ctx.line, i)) out.push_back(*l);
  return out;
}

void NextLinePrefetcher::set_degree(std::uint32_t score) {
  const std::uint32_t raw = 1 + score / std::max(1u, config_.score_divisor);
  degree_ = std::clamp<std::uint32_t>(raw, 1, std::max(1u, config_.max_degree));
}

// ---------------------------------------------------------------------------
// IP-stride

void StrideTracker::train(std::int64_t observed) {
  if (observed == stride) {
    confidence = std::min(confidence + 1, 3u);
    return;
  }
  if (confidence > 0) --confidence;
  if (confidence == 0) {
    stride = observed;
    confidence = 1;
  }
}

IpStridePrefetcher::IpStridePrefetcher(IpStrideConfig config) : config_(config), table_(std::max(1u, config.table_size)) {}

std::vector<LineAddress> IpStridePrefetcher::on_pae(const PaeContext& ctx) {
  ++clock_;
  auto hit = std::find_if(table_.begin(), table_.end(), [&](const IpStrideEntry& e) { return e.valid && e.pc == ctx.pc; });
  if (hit == table_.end()) {
    auto victim = std::min_element(table_.begin(), table_.end(), [](const IpStrideEntry& a, const IpStrideEntry& b) {
      if (a.valid != b.valid) return !a.valid;
      return a.lru_stamp < b.lru_stamp;
    });
    *victim = IpStrideEntry{true, ctx.pc, ctx.line, {}, clock_};
    return {};
  }

  auto& e = *hit;
  e.lru_stamp = clock_;
  const auto observed = static_cast<std::int64_t>(ctx.line.value - e.last_line.value);
  e.tracker.train(observed);
  e.last_line = ctx.line;

  std::vector<LineAddress> out;
  if (e.tracker.confidence >= config_.confidence_threshold && e.tracker.stride != 0) {
    out.reserve(config_.degree);
    for (std::uint32_t i = 1; i <= config_.degree; ++i)
      if (auto l = offset_line(ctx.line, e.tracker.stride * static_cast<std::int64_t>(i))) out.push_back(*l);
  }
  return out;
}

// ---------------------------------------------------------------------------
// SPP

SppPrefetcher::SppPrefetcher(SppConfig config)
    : config_(config),
      st_(std::max(1u, config.st_entries)),
      pt_(std::max(1u, config.pt_entries)),
      ghr_(std::max(1u, config.ghr_entries)) {}

std::uint32_t SppPrefetcher::encode_delta(std::int32_t delta) {
  return delta < 0 ? (static_cast<std::uint32_t>(-delta) & 0x3F) | 0x40 : static_cast<std::uint32_t>(delta) & 0x3F;
}

std::uint32_t SppPrefetcher::next_signature(std::uint32_t signature, std::int32_t delta) {
  return ((signature << kSignatureShift) ^ encode_delta(delta)) & ((1u << kSignatureBits) - 1);
}

void SppPrefetcher::train(std::uint32_t signature, std::int32_t delta) {
  auto& e = pt_[signature % config_.pt_entries];
  if (e.c_sig >= kCounterMax) {
    e.c_sig /= 2;
    for (auto& s : e.slots) s.c_delta /= 2;
  }
  auto match = std::find_if(e.slots.begin(), e.slots.end(),
                            [delta](const PatternSlot& s) { return s.c_delta > 0 && s.delta == delta; });
  if (match != e.slots.end()) {
    ++match->c_delta;
  } else {
    auto weakest = std::min_element(e.slots.begin(), e.slots.end(),
                                    [](const PatternSlot& a, const PatternSlot& b) { return a.c_delta < b.c_delta; });
    *weakest = PatternSlot{delta, 1};
  }
  ++e.c_sig;
}

std::optional<std::uint32_t> SppPrefetcher::bootstrap(std::int32_t offset) {
  const GhrEntry* best = nullptr;
  for (const auto& g : ghr_) {
    if (!g.valid) continue;
    const std::int32_t target = g.last_offset + g.delta;
    const std::int32_t wrapped = ((target % static_cast<std::int32_t>(kPageLines)) + kPageLines) % kPageLines;
    if (wrapped != offset) continue;
    if (best == nullptr || g.confidence > best->confidence) best = &g;
  }
  if (best == nullptr) return std::nullopt;
  ++stats_.ghr_bootstraps;
  return next_signature(best->signature, best->delta);
}

void SppPrefetcher::lookahead(std::uint32_t signature, std::uint64_t page, std::int32_t offset,
                              std::vector<LineAddress>& out) {
  last_chain_.clear();
  double confidence = 1.0;
  double previous = 1.0;
  std::uint32_t depth = 0;
  while (depth < config_.max_depth) {
    const auto& e = pt_[signature % config_.pt_entries];
    if (e.c_sig == 0) break;
    const auto best = std::max_element(e.slots.begin(), e.slots.end(), [](const PatternSlot& a, const PatternSlot& b) {
      return a.c_delta < b.c_delta;
    });
    if (best->c_delta == 0) break;
    confidence *= static_cast<double>(best->c_delta) / static_cast<double>(e.c_sig);
    if (confidence < config_.lookahead_threshold) break;

    const std::int32_t next = offset + best->delta;
    if (next < 0 || next >= static_cast<std::int32_t>(kPageLines)) {
      ghr_[ghr_next_] = GhrEntry{true, signature, confidence, offset, best->delta};
      ghr_next_ = (ghr_next_ + 1) % ghr_.size();
      ++stats_.ghr_inserts;
      break;
    }
    if (auto line = offset_line(LineAddress{page * kPageLines}, next)) out.push_back(*line);
    if (confidence > previous) ++stats_.nonmonotone_steps;
    previous = confidence;
    last_chain_.push_back(confidence);
    ++depth;
    ++stats_.steps;
    signature = next_signature(signature, best->delta);
    offset = next;
  }
  ++stats_.chains;
  stats_.max_depth = std::max(stats_.max_depth, depth);
}

std::vector<LineAddress> SppPrefetcher::on_pae(const PaeContext& ctx) {
  const std::uint64_t page = ctx.line.value / kPageLines;
  const auto offset = static_cast<std::int32_t>(ctx.line.value % kPageLines);
  auto& entry = st_[page % st_.size()];
  std::vector<LineAddress> out;

  if (!entry.valid || entry.page != page) {
    const auto boot = bootstrap(offset);
    entry = SignatureEntry{true, page, boot.value_or(0), offset};
    if (boot && *boot != 0) lookahead(*boot, page, offset, out);
    return out;
  }

  const std::int32_t delta = offset - entry.last_offset;
  if (delta == 0) return out;
  if (entry.signature != 0 && std::abs(delta) < static_cast<std::int32_t>(kPageLines)) train(entry.signature, delta);
  entry.signature = next_signature(entry.signature, delta);
  entry.last_offset = offset;
  lookahead(entry.signature, page, offset, out);
  return out;
}

// ---------------------------------------------------------------------------
// MLOP

MlopPrefetcher::MlopPrefetcher(MlopConfig config)
    : config_(config),
      zones_(std::max(1u, config.zones)),
      scores_(static_cast<std::size_t>(config.levels) * (2 * config.max_offset + 1), 0),
      selected_(config.levels) {}

std::size_t MlopPrefetcher::score_index(std::uint32_t level, std::int32_t offset) const {
  return static_cast<std::size_t>(level - 1) * (2 * config_.max_offset + 1) +
         static_cast<std::size_t>(offset + config_.max_offset);
}

std::uint32_t MlopPrefetcher::score(std::uint32_t level, std::int32_t offset) const {
  return scores_[score_index(level, offset)];
}

MlopPrefetcher::Zone& MlopPrefetcher::zone_for(std::uint64_t tag) {
  auto hit = std::find_if(zones_.begin(), zones_.end(), [tag](const Zone& z) { return z.valid && z.tag == tag; });
  if (hit != zones_.end()) return *hit;
  auto victim = std::min_element(zones_.begin(), zones_.end(), [](const Zone& a, const Zone& b) {
    if (a.valid != b.valid) return !a.valid;
    return a.lru_stamp < b.lru_stamp;
  });
  *victim = Zone{};
  victim->valid = true;
  victim->tag = tag;
  return *victim;
}

void MlopPrefetcher::end_round() {
  std::vector<std::int32_t> taken;
  for (std::uint32_t level = 1; level <= config_.levels; ++level) {
    std::optional<std::int32_t> best;
    std::uint32_t best_score = 0;
    // Walk offsets by increasing |o|, positive first, so strict '>' keeps the tie-break.
    for (std::int32_t mag = 1; mag <= config_.max_offset; ++mag) {
      for (std::int32_t o : {mag, -mag}) {
        const auto s = score(level, o);
        if (!best || s > best_score) {
          best = o;
          best_score = s;
        }
      }
    }
    auto& slot = selected_[level - 1];
    slot.reset();
    if (best && best_score >= config_.score_threshold && std::find(taken.begin(), taken.end(), *best) == taken.end()) {
      slot = best;
      taken.push_back(*best);
    }
  }
  std::fill(scores_.begin(), scores_.end(), 0);
  round_counter_ = 0;
}

std::vector<LineAddress> MlopPrefetcher::on_pae(const PaeContext& ctx) {
  const std::uint64_t now = ++pae_count_;
  auto& zone = zone_for(ctx.line.value / kZoneLines);
  zone.lru_stamp = now;
  const auto x = static_cast<std::int32_t>(ctx.line.value % kZoneLines);

  for (std::int32_t o = -config_.max_offset; o <= config_.max_offset; ++o) {
    if (o == 0) continue;
    const std::int32_t y = x - o;
    if (y < 0 || y >= static_cast<std::int32_t>(kZoneLines) || ((zone.bitmap >> y) & 1) == 0) continue;
    const std::uint64_t age = now - zone.stamps[static_cast<std::size_t>(y)];
    const auto top = static_cast<std::uint32_t>(std::min<std::uint64_t>(age, config_.levels));
    for (std::uint32_t level = 1; level <= top; ++level) ++scores_[score_index(level, o)];
  }
  zone.bitmap |= 1ULL << x;
  zone.stamps[static_cast<std::size_t>(x)] = now;

  if (++round_counter_ >= config_.round_length) end_round();

  std::vector<LineAddress> out;
  for (const auto& o : selected_) {
    if (!o) continue;
    const std::int32_t y = x + *o;
    if (y < 0 || y >= static_cast<std::int32_t>(kZoneLines)) continue;
    if (auto l = offset_line(ctx.line, *o)) out.push_back(*l);
  }
  return out;
}

// ---------------------------------------------------------------------------
// T-SKID

TskidPrefetcher::TskidPrefetcher(TskidConfig config) : config_(config), table_(std::max(1u, config.table_size)) {}

const TskidPrefetcher::TargetEntry* TskidPrefetcher::entry(std::uint64_t pc) const {
  auto it = std::find_if(table_.begin(), table_.end(), [pc](const TargetEntry& e) { return e.valid && e.pc == pc; });
  return it == table_.end() ? nullptr : &*it;
}

TskidPrefetcher::TargetEntry& TskidPrefetcher::lookup_or_allocate(std::uint64_t pc, LineAddress line, bool& allocated) {
  auto it = std::find_if(table_.begin(), table_.end(), [pc](const TargetEntry& e) { return e.valid && e.pc == pc; });
  allocated = it == table_.end();
  if (!allocated) return *it;
  auto victim = std::min_element(table_.begin(), table_.end(), [](const TargetEntry& a, const TargetEntry& b) {
    if (a.valid != b.valid) return !a.valid;
    return a.lru_stamp < b.lru_stamp;
  });
  *victim = TargetEntry{};
  victim->valid = true;
  victim->pc = pc;
  victim->last_line = line;
  return *victim;
}

std::vector<LineAddress> TskidPrefetcher::on_pae(const PaeContext& ctx) {
  ++clock_;

  // verification: learn how long after the trigger the predicted line was used
  std::erase_if(pending_, [&](const PendingVerification& p) { return ctx.seq - p.trigger_seq > config_.verification_expiry; });
  std::erase_if(pending_, [&](const PendingVerification& p) {
    if (p.predicted != ctx.line) return false;
    auto it = std::find_if(table_.begin(), table_.end(), [&](const TargetEntry& e) { return e.valid && e.pc == p.pc; });
    if (it != table_.end()) it->use_distance = ctx.seq - p.trigger_seq;
    return true;
  });

  bool allocated = false;
  auto& e = lookup_or_allocate(ctx.pc, ctx.line, allocated);
  e.lru_stamp = clock_;
  if (!allocated) {
    e.tracker.train(static_cast<std::int64_t>(ctx.line.value - e.last_line.value));
    e.last_line = ctx.line;
    if (e.tracker.confidence >= config_.confidence_threshold && e.tracker.stride != 0) {
      if (auto target = offset_line(ctx.line, e.tracker.stride)) {
        const Seq delay = e.use_distance > config_.lead ? e.use_distance - config_.lead : 0;
        const Delayed d{*target, ctx.seq + delay};
        auto pos = std::upper_bound(delayed_.begin(), delayed_.end(), d.release_seq,
                                    [](Seq r, const Delayed& x) { return r < x.release_seq; });
        delayed_.insert(pos, d);
        if (delayed_.size() > config_.max_delayed) delayed_.erase(delayed_.end() - 1);
        pending_.push_back(PendingVerification{ctx.pc, *target, ctx.seq});
        if (pending_.size() > config_.max_pending) pending_.erase(pending_.begin());
      }
    }
  }

  std::vector<LineAddress> out;
  auto due = std::find_if(delayed_.begin(), delayed_.end(), [&](const Delayed& d) { return d.release_seq > ctx.seq; });
  for (auto it = delayed_.begin(); it != due; ++it) out.push_back(it->line);
  delayed_.erase(delayed_.begin(), due);
  return out;
}

// ---------------------------------------------------------------------------

std::unique_ptr<Prefetcher> make_prefetcher(ComponentId id, const ComponentConfigs& configs, unsigned line_bits) {
  std::unique_ptr<Prefetcher> p;
  switch (id) {
    case ComponentId::next_line: p = std::make_unique<NextLinePrefetcher>(configs.next_line); break;
    case ComponentId::ip_stride: p = std::make_unique<IpStridePrefetcher>(configs.ip_stride); break;
    case ComponentId::spp: p = std::make_unique<SppPrefetcher>(configs.spp); break;
    case ComponentId::mlop: p = std::make_unique<MlopPrefetcher>(configs.mlop); break;
    case ComponentId::tskid: p = std::make_unique<TskidPrefetcher>(configs.tskid); break;
  }
  p->set_line_bits(line_bits);
  return p;
}

}  // namespace arsenal
