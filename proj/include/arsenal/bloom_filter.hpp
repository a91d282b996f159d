#pragma once

#include <cstdint>
#include <unordered_set>
#include <variant>
#include <vector>

#include "arsenal/types.hpp"

namespace arsenal {

struct BloomSizing {
  std::uint64_t bits = 0;    // m
  std::uint32_t hashes = 0;  // k
};

/// Optimal sizing for n expected elements at false-positive probability p:
/// m = ceil(n ln(1/p) / ln(2)^2), k = max(1, round(m/n ln 2)).
/// Throws ConfigError unless n >= 1 and 0 < p < 1.
BloomSizing derive_parameters(std::uint64_t projected_capacity, double target_fpp);

struct BloomParams {
  std::uint64_t projected_capacity = 2000;
  double target_fpp = 0.01;
  std::uint64_t seed = 0;
};

/// Bloom filter over line addresses using seeded double hashing:
/// bit_i = (h1 + i * h2) mod m.
class BloomFilter {
 public:
  explicit BloomFilter(BloomParams params);

  void insert(LineAddress line);
  bool query(LineAddress line) const;
  void clear();

  const BloomParams& params() const { return params_; }
  std::uint64_t bit_count() const { return sizing_.bits; }
  std::uint32_t hash_count() const { return sizing_.hashes; }
  std::uint64_t inserted_count() const { return inserted_; }
  std::uint64_t popcount() const;

  /// Bit positions probed for a line, in hash order.
  std::vector<std::uint64_t> positions(LineAddress line) const;

 private:
  template <typename F>
  void for_each_position(LineAddress line, F&& f) const;

  BloomParams params_;
  BloomSizing sizing_;
  std::vector<std::uint64_t> words_;
  std::uint64_t inserted_ = 0;
};

/// Exact-membership stand-in with the same interface, used to measure the
/// Bloom filter's contribution to scoring.
class ExactSet {
 public:
  void insert(LineAddress line) { set_.insert(line); ++inserted_; }
  bool query(LineAddress line) const { return set_.contains(line); }
  void clear() { set_.clear(); inserted_ = 0; }
  std::uint64_t inserted_count() const { return inserted_; }

 private:
  std::unordered_set<LineAddress> set_;
  std::uint64_t inserted_ = 0;
};

enum class FilterKind : std::uint8_t { bloom, exact };

/// Per-component shadow set: either a Bloom filter or an exact set.
class ShadowFilter {
 public:
  ShadowFilter(FilterKind kind, BloomParams params);

  void insert(LineAddress line);
  bool query(LineAddress line) const;
  void clear();
  FilterKind kind() const { return std::holds_alternative<BloomFilter>(impl_) ? FilterKind::bloom : FilterKind::exact; }

 private:
  std::variant<BloomFilter, ExactSet> impl_;
};

}  // namespace arsenal
