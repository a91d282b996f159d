#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "arsenal/cache.hpp"

namespace arsenal {

struct ComponentMetrics {
  ComponentId id = ComponentId::next_line;
  std::uint64_t issued = 0;
  std::uint64_t useful = 0;
  std::optional<double> accuracy;

  bool operator==(const ComponentMetrics&) const = default;
};

/// A prefetch is useful when its line is demanded before eviction: a prefetch
/// hit, or a late hit on a line still in flight.
struct Metrics {
  std::uint64_t useful = 0;
  std::optional<double> accuracy;  // useful / (filled + late-merged); null when nothing filled
  double coverage = 0.0;           // useful / (useful + misses)
  std::optional<double> late_rate; // late / useful
  double amat = 0.0;
  std::optional<double> speedup_proxy;  // baseline_amat / amat
  std::vector<ComponentMetrics> components;

  bool operator==(const Metrics&) const = default;
};

/// Throws std::invalid_argument when no demand accesses were recorded.
Metrics compute_metrics(const CacheStats& stats, const CacheConfig& cache, std::optional<double> baseline_amat);

/// Storage fields of one component's Bloom filter, itemized as in the hardware
/// budget (bits unless noted).
struct BloomAccounting {
  std::uint32_t fpp_bits = 5;
  std::uint32_t seed_bits = 32;
  std::uint32_t inserted_count_bits = 11;
  std::uint32_t projected_count_bits = 11;
  std::uint32_t table_size_bits = 15;
  std::uint32_t salt_count_bits = 3;
  std::uint32_t salt_entries = 135;
  std::uint32_t salt_entry_bits = 32;
};

struct ComponentCost {
  std::string name;
  double kb = 0.0;
};

struct OverheadReport {
  std::uint32_t components = 0;
  std::uint32_t counter_bits_per_component = 0;  // eval 9 + prefetch 12 + score 11
  std::uint64_t bit_table_bytes = 0;
  double bloom_bytes_per_component = 0.0;
  double thresholds_bytes_per_component = 0.0;
  double per_component_bytes = 0.0;
  double framework_bytes = 0.0;
  std::vector<ComponentCost> component_costs;
  double component_bytes = 0.0;
  double grand_total_bytes = 0.0;
  std::vector<std::string> notes;

  static double kb(double bytes) { return bytes / 1024.0; }
};

inline constexpr std::uint32_t kEvalCounterBits = 9;
inline constexpr std::uint32_t kPrefetchCounterBits = 12;
inline constexpr std::uint32_t kScoreBits = 11;

/// Framework cost is N x (counters + Bloom filter + thresholds); grand total adds
/// the component prefetchers' own storage. KB = 1024 bytes.
OverheadReport overhead(std::uint32_t n_components, std::uint64_t bloom_capacity, double bloom_fpp,
                        const std::vector<ComponentCost>& component_costs, const BloomAccounting& bloom = {},
                        double thresholds_kb = 0.1);

}  // namespace arsenal
