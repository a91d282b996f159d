#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "arsenal/types.hpp"

namespace arsenal {

struct CacheConfig {
  std::uint32_t sets = 64;
  std::uint32_t ways = 8;
  std::uint32_t line_size = 64;
  std::uint32_t hit_latency = 4;
  std::uint32_t miss_latency = 200;
  std::uint32_t late_latency = 100;
  std::uint32_t prefetch_fill_delay = 40;
  std::uint32_t prefetch_queue_capacity = 16;

  /// Throws ConfigError if the geometry or latency ordering is invalid.
  void validate() const;
  unsigned line_bits() const;
};

struct AccessEvent {
  std::uint64_t pc = 0;
  std::uint64_t addr = 0;
  bool is_write = false;
  Seq seq = 0;

  bool operator==(const AccessEvent&) const = default;
};

enum class OutcomeKind : std::uint8_t { hit, prefetch_hit, late_prefetch_hit, miss };

struct AccessOutcome {
  OutcomeKind kind = OutcomeKind::miss;
  std::uint32_t latency = 0;
  bool is_pae = false;
  LineAddress line;
  /// Component whose prefetch made this access useful (prefetch hits and late hits).
  std::optional<ComponentId> useful_source;
};

struct CacheLineState {
  std::uint64_t tag = 0;  // full line address
  bool valid = false;
  bool prefetched = false;
  std::uint64_t lru_stamp = 0;
  ComponentId source = ComponentId::next_line;
};

struct InFlightPrefetch {
  LineAddress line;
  Seq issue_seq = 0;
  Seq fill_seq = 0;
  ComponentId source = ComponentId::next_line;
};

/// Outcome counts plus prefetch bookkeeping. Conservation:
///   pf_requested == pf_dropped + pf_filled + pf_late_merged + in-flight
struct CacheStats {
  std::uint64_t hits = 0;
  std::uint64_t prefetch_hits = 0;
  std::uint64_t late_prefetch_hits = 0;
  std::uint64_t misses = 0;

  std::uint64_t pf_requested = 0;
  std::uint64_t pf_dropped = 0;
  std::uint64_t pf_issued = 0;  // accepted into the in-flight queue
  std::uint64_t pf_filled = 0;
  std::uint64_t pf_late_merged = 0;
  std::uint64_t pf_evicted_unused = 0;

  std::array<std::uint64_t, kComponentCount> issued_by{};
  std::array<std::uint64_t, kComponentCount> useful_by{};

  std::uint64_t accesses() const { return hits + prefetch_hits + late_prefetch_hits + misses; }
  std::uint64_t pae_count() const { return prefetch_hits + late_prefetch_hits + misses; }
};

/// Average access latency for the given outcome mix. Throws std::invalid_argument
/// ("empty statistics") when no accesses were recorded.
double amat(const CacheStats& stats, const CacheConfig& config);

/// Set-associative LRU cache with a bounded list of in-flight prefetches.
class Cache {
 public:
  explicit Cache(CacheConfig config);

  /// Classifies one demand access. Callers must drain due fills with
  /// fill_due(event.seq) first.
  AccessOutcome access(const AccessEvent& event);

  bool enqueue_prefetch(LineAddress line, ComponentId source, Seq now);

  /// Installs every in-flight prefetch with fill_seq <= now; returns how many.
  std::size_t fill_due(Seq now);

  LineAddress line_of(std::uint64_t addr) const { return LineAddress{addr >> line_bits_}; }
  bool is_resident(LineAddress line) const;
  bool is_in_flight(LineAddress line) const;
  std::optional<CacheLineState> probe(LineAddress line) const;

  const std::vector<InFlightPrefetch>& in_flight() const { return in_flight_; }
  const CacheStats& stats() const { return stats_; }
  void reset_stats() { stats_ = {}; }
  const CacheConfig& config() const { return config_; }

 private:
  std::size_t set_index(LineAddress line) const { return line.value & (config_.sets - 1); }
  CacheLineState* find(LineAddress line);
  const CacheLineState* find(LineAddress line) const;
  CacheLineState& victim(LineAddress line);
  void install(LineAddress line, bool prefetched, ComponentId source);

  CacheConfig config_;
  unsigned line_bits_;
  std::vector<CacheLineState> lines_;
  std::vector<InFlightPrefetch> in_flight_;
  std::uint64_t clock_ = 0;
  CacheStats stats_;
};

}  // namespace arsenal
