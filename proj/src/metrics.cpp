#include "arsenal/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "arsenal/bloom_filter.hpp"

namespace arsenal {

Metrics compute_metrics(const CacheStats& stats, const CacheConfig& cache, std::optional<double> baseline_amat) {
  if (stats.accesses() == 0) throw std::invalid_argument("no demand accesses");
  Metrics m;
  m.useful = stats.prefetch_hits + stats.late_prefetch_hits;
  const auto filled = stats.pf_filled + stats.pf_late_merged;
  if (filled > 0) m.accuracy = static_cast<double>(m.useful) / static_cast<double>(filled);
  const auto denom = m.useful + stats.misses;
  m.coverage = denom == 0 ? 0.0 : static_cast<double>(m.useful) / static_cast<double>(denom);
  if (m.useful > 0) m.late_rate = static_cast<double>(stats.late_prefetch_hits) / static_cast<double>(m.useful);
  m.amat = amat(stats, cache);
  if (baseline_amat) m.speedup_proxy = *baseline_amat / m.amat;

  for (std::size_t i = 0; i < kComponentCount; ++i) {
    if (stats.issued_by[i] == 0 && stats.useful_by[i] == 0) continue;
    ComponentMetrics c{static_cast<ComponentId>(i), stats.issued_by[i], stats.useful_by[i], std::nullopt};
    if (c.issued > 0) c.accuracy = static_cast<double>(c.useful) / static_cast<double>(c.issued);
    m.components.push_back(c);
  }
  return m;
}

OverheadReport overhead(std::uint32_t n_components, std::uint64_t bloom_capacity, double bloom_fpp,
                        const std::vector<ComponentCost>& component_costs, const BloomAccounting& bloom,
                        double thresholds_kb) {
  if (n_components == 0) throw ConfigError("overhead needs at least one component");
  const auto sizing = derive_parameters(bloom_capacity, bloom_fpp);

  OverheadReport r;
  r.components = n_components;
  r.counter_bits_per_component = kEvalCounterBits + kPrefetchCounterBits + kScoreBits;
  r.bit_table_bytes = (sizing.bits + 7) / 8;
  const std::uint64_t bloom_bits = bloom.fpp_bits + bloom.seed_bits + bloom.inserted_count_bits +
                                   bloom.projected_count_bits + bloom.table_size_bits + bloom.salt_count_bits +
                                   r.bit_table_bytes * 8 +
                                   static_cast<std::uint64_t>(bloom.salt_entries) * bloom.salt_entry_bits;
  r.bloom_bytes_per_component = static_cast<double>(bloom_bits) / 8.0;
  r.thresholds_bytes_per_component = thresholds_kb * 1024.0;
  r.per_component_bytes =
      r.counter_bits_per_component / 8.0 + r.bloom_bytes_per_component + r.thresholds_bytes_per_component;
  r.framework_bytes = r.per_component_bytes * n_components;
  r.component_costs = component_costs;
  for (const auto& c : component_costs) r.component_bytes += c.kb * 1024.0;
  r.grand_total_bytes = r.framework_bytes + r.component_bytes;

  const double counter_kb = OverheadReport::kb(r.counter_bits_per_component / 8.0);
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "scoreboard counters are %u bits (%.4f KB) per component; the published 0.03 KB figure is not "
                "reproduced by this accounting",
                r.counter_bits_per_component, counter_kb);
  r.notes.emplace_back(buf);
  std::snprintf(buf, sizeof buf, "bit table: %llu bits -> %llu bytes, %u hash functions",
                static_cast<unsigned long long>(sizing.bits), static_cast<unsigned long long>(r.bit_table_bytes),
                sizing.hashes);
  r.notes.emplace_back(buf);
  return r;
}

}  // namespace arsenal
