#include "arsenal/bloom_filter.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace arsenal {

namespace {

// splitmix64 finalizer
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

BloomSizing derive_parameters(std::uint64_t projected_capacity, double target_fpp) {
  if (projected_capacity == 0) throw ConfigError("bloom projected capacity must be >= 1");
  if (!(target_fpp > 0.0 && target_fpp < 1.0)) throw ConfigError("bloom false-positive probability must be in (0,1)");
  const double n = static_cast<double>(projected_capacity);
  const double ln2 = std::log(2.0);
  const double m = std::ceil(n * std::log(1.0 / target_fpp) / (ln2 * ln2));
  const double k = std::round(m / n * ln2);
  return BloomSizing{static_cast<std::uint64_t>(m), static_cast<std::uint32_t>(std::max(1.0, k))};
}

BloomFilter::BloomFilter(BloomParams params)
    : params_(params), sizing_(derive_parameters(params.projected_capacity, params.target_fpp)) {
  words_.assign((sizing_.bits + 63) / 64, 0);
}

template <typename F>
void BloomFilter::for_each_position(LineAddress line, F&& f) const {
  const std::uint64_t h1 = mix64(line.value ^ mix64(params_.seed));
  const std::uint64_t h2 = mix64(line.value ^ mix64(params_.seed ^ 0x5bd1e9955bd1e995ULL)) | 1;
  for (std::uint32_t i = 0; i < sizing_.hashes; ++i) f((h1 + i * h2) % sizing_.bits);
}

void BloomFilter::insert(LineAddress line) {
  for_each_position(line, [this](std::uint64_t bit) { words_[bit >> 6] |= 1ULL << (bit & 63); });
  ++inserted_;
}

bool BloomFilter::query(LineAddress line) const {
  bool all = true;
  for_each_position(line, [&](std::uint64_t bit) { all = all && ((words_[bit >> 6] >> (bit & 63)) & 1); });
  return all;
}

void BloomFilter::clear() {
  std::fill(words_.begin(), words_.end(), 0);
  inserted_ = 0;
}

std::uint64_t BloomFilter::popcount() const {
  std::uint64_t n = 0;
  for (auto w : words_) n += static_cast<std::uint64_t>(std::popcount(w));
  return n;
}

std::vector<std::uint64_t> BloomFilter::positions(LineAddress line) const {
  std::vector<std::uint64_t> out;
  out.reserve(sizing_.hashes);
  for_each_position(line, [&](std::uint64_t bit) { out.push_back(bit); });
  return out;
}

ShadowFilter::ShadowFilter(FilterKind kind, BloomParams params)
    : impl_(kind == FilterKind::bloom ? std::variant<BloomFilter, ExactSet>(BloomFilter(params))
                                      : std::variant<BloomFilter, ExactSet>(ExactSet{})) {}

void ShadowFilter::insert(LineAddress line) {
  std::visit([line](auto& f) { f.insert(line); }, impl_);
}

bool ShadowFilter::query(LineAddress line) const {
  return std::visit([line](const auto& f) { return f.query(line); }, impl_);
}

void ShadowFilter::clear() {
  std::visit([](auto& f) { f.clear(); }, impl_);
}

}  // namespace arsenal
