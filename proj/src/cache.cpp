#include "arsenal/cache.hpp"

#include <algorithm>
#include <utility>
#include <bit>
#include <stdexcept>

namespace arsenal {

void CacheConfig::validate() const {
  if (sets == 0 || !std::has_single_bit(sets)) throw ConfigError("cache.sets must be a power of two");
  if (line_size == 0 || !std::has_single_bit(line_size))
    throw ConfigError("cache.line_size must be a power of two");
  if (ways == 0) throw ConfigError("cache.ways must be >= 1");
  if (!(hit_latency < late_latency && late_latency <= miss_latency))
    throw ConfigError("cache latencies must satisfy hit < late <= miss");
}

unsigned CacheConfig::line_bits() const { return static_cast<unsigned>(std::countr_zero(line_size)); }

double amat(const CacheStats& stats, const CacheConfig& config) {
  const auto total = stats.accesses();
  if (total == 0) throw std::invalid_argument("empty statistics");
  const double cycles = static_cast<double>(stats.hits + stats.prefetch_hits) * config.hit_latency +
                        static_cast<double>(stats.late_prefetch_hits) * config.late_latency +
                        static_cast<double>(stats.misses) * config.miss_latency;
  return cycles / static_cast<double>(total);
}

Cache::Cache(CacheConfig config) : config_(config) {
  config_.validate();
  line_bits_ = config_.line_bits();
  lines_.resize(static_cast<std::size_t>(config_.sets) * config_.ways);
  in_flight_.reserve(config_.prefetch_queue_capacity);
}

CacheLineState* Cache::find(LineAddress line) {
  return const_cast<CacheLineState*>(std::as_const(*this).find(line));
}

const CacheLineState* Cache::find(LineAddress line) const {
  const auto base = set_index(line) * config_.ways;
  for (std::size_t w = 0; w < config_.ways; ++w) {
    const auto& l = lines_[base + w];
    if (l.valid && l.tag == line.value) return &l;
  }
  return nullptr;
}

CacheLineState& Cache::victim(LineAddress line) {
  const auto base = lines_.begin() + static_cast<std::ptrdiff_t>(set_index(line) * config_.ways);
  const auto end = base + config_.ways;
  if (auto invalid = std::find_if(base, end, [](const CacheLineState& l) { return !l.valid; }); invalid != end)
    return *invalid;
  return *std::min_element(base, end, [](const CacheLineState& a, const CacheLineState& b) {
    return a.lru_stamp < b.lru_stamp;
  });
}

void Cache::install(LineAddress line, bool prefetched, ComponentId source) {
  auto& slot = victim(line);
  if (slot.valid && slot.prefetched) ++stats_.pf_evicted_unused;
  slot = CacheLineState{line.value, true, prefetched, ++clock_, source};
}

bool Cache::is_resident(LineAddress line) const { return find(line) != nullptr; }

bool Cache::is_in_flight(LineAddress line) const {
  return std::any_of(in_flight_.begin(), in_flight_.end(),
                     [line](const InFlightPrefetch& p) { return p.line == line; });
}

std::optional<CacheLineState> Cache::probe(LineAddress line) const {
  if (const auto* l = find(line)) return *l;
  return std::nullopt;
}

AccessOutcome Cache::access(const AccessEvent& event) {
  AccessOutcome out;
  out.line = line_of(event.addr);

  if (auto* l = find(out.line)) {
    l->lru_stamp = ++clock_;
    out.latency = config_.hit_latency;
    if (l->prefetched) {
      l->prefetched = false;
      out.kind = OutcomeKind::prefetch_hit;
      out.useful_source = l->source;
      ++stats_.prefetch_hits;
      ++stats_.useful_by[static_cast<std::size_t>(l->source)];
    } else {
      out.kind = OutcomeKind::hit;
      ++stats_.hits;
    }
  } else if (auto it = std::find_if(in_flight_.begin(), in_flight_.end(),
                                    [&](const InFlightPrefetch& p) { return p.line == out.line; });
             it != in_flight_.end()) {
    out.kind = OutcomeKind::late_prefetch_hit;
    out.latency = config_.late_latency;
    out.useful_source = it->source;
    ++stats_.late_prefetch_hits;
    ++stats_.pf_late_merged;
    ++stats_.useful_by[static_cast<std::size_t>(it->source)];
    const auto source = it->source;
    in_flight_.erase(it);
    install(out.line, false, source);
  } else {
    out.kind = OutcomeKind::miss;
    out.latency = config_.miss_latency;
    ++stats_.misses;
    install(out.line, false, ComponentId::next_line);
  }
  out.is_pae = out.kind != OutcomeKind::hit;
  return out;
}

bool Cache::enqueue_prefetch(LineAddress line, ComponentId source, Seq now) {
  ++stats_.pf_requested;
  if (find(line) != nullptr || is_in_flight(line) || in_flight_.size() >= config_.prefetch_queue_capacity) {
    ++stats_.pf_dropped;
    return false;
  }
  in_flight_.push_back(InFlightPrefetch{line, now, now + config_.prefetch_fill_delay, source});
  ++stats_.pf_issued;
  ++stats_.issued_by[static_cast<std::size_t>(source)];
  return true;
}

std::size_t Cache::fill_due(Seq now) {
  std::size_t filled = 0;
  auto keep = in_flight_.begin();
  for (auto it = in_flight_.begin(); it != in_flight_.end(); ++it) {
    if (it->fill_seq <= now) {
      install(it->line, true, it->source);
      ++filled;
    } else {
      *keep++ = *it;
    }
  }
  in_flight_.erase(keep, in_flight_.end());
  stats_.pf_filled += filled;
  return filled;
}

}  // namespace arsenal
