#include <doctest.h>

#include <random>
#include <unordered_set>

#include "arsenal/bloom_filter.hpp"

using namespace arsenal;

// m = ceil(n ln(1/p) / ln(2)^2), k = round(m/n ln 2), evaluated offline at 50-digit precision.
TEST_CASE("derive_parameters matches the sizing formulas") {
  auto a = derive_parameters(2000, 0.01);
  CHECK(a.bits == 19171);
  CHECK(a.hashes == 7);
  CHECK(std::abs((a.bits + 7) / 8.0 - 2399.0) / 2399.0 < 0.01);

  auto b = derive_parameters(1, 0.5);
  CHECK(b.bits == 2);
  CHECK(b.hashes == 1);

  auto c = derive_parameters(1000, 0.01);
  CHECK(c.bits == 9586);
  CHECK(c.hashes == 7);
}

TEST_CASE("derive_parameters rejects bad inputs") {
  CHECK_THROWS_AS(derive_parameters(0, 0.01), ConfigError);
  CHECK_THROWS_AS(derive_parameters(10, 0.0), ConfigError);
  CHECK_THROWS_AS(derive_parameters(10, 1.0), ConfigError);
  CHECK_THROWS_AS(derive_parameters(10, -0.5), ConfigError);
}

TEST_CASE("insert / query / clear") {
  BloomFilter f(BloomParams{});
  CHECK_FALSE(f.query(LineAddress{42}));

  f.insert(LineAddress{42});
  CHECK(f.query(LineAddress{42}));
  const auto bits = f.popcount();
  f.insert(LineAddress{42});
  CHECK(f.inserted_count() == 2);
  CHECK(f.popcount() == bits);

  f.clear();
  CHECK_FALSE(f.query(LineAddress{42}));
  CHECK(f.inserted_count() == 0);
  CHECK(f.popcount() == 0);

  f.insert(LineAddress{42});
  CHECK(f.query(LineAddress{42}));
}

TEST_CASE("clear makes a used filter indistinguishable from a fresh one") {
  BloomParams p{2000, 0.01, 9};
  BloomFilter used(p), fresh(p);
  used.clear();
  CHECK(used.popcount() == 0);
  for (std::uint64_t i = 0; i < 100; ++i) used.insert(LineAddress{i * 977});
  used.clear();
  for (std::uint64_t i = 0; i < 100; ++i) CHECK_FALSE(used.query(LineAddress{i * 977}));
  for (std::uint64_t i = 0; i < 500; ++i) CHECK(used.query(LineAddress{i}) == fresh.query(LineAddress{i}));
}

TEST_CASE("property: no false negatives") {
  std::mt19937_64 rng(2024);
  BloomFilter f(BloomParams{2000, 0.01, 3});
  std::vector<LineAddress> inserted;
  for (int i = 0; i < 100'000; ++i) {
    LineAddress l{rng()};
    f.insert(l);
    inserted.push_back(l);
  }
  std::size_t missing = 0;
  for (auto l : inserted) missing += f.query(l) ? 0 : 1;
  CHECK(missing == 0);
}

TEST_CASE("empirical false-positive rate at projected capacity") {
  std::mt19937_64 rng(77);
  BloomFilter f(BloomParams{2000, 0.01, 11});
  std::unordered_set<std::uint64_t> members;
  while (members.size() < 2000) members.insert(rng() >> 8);
  for (auto m : members) f.insert(LineAddress{m});

  std::size_t probes = 0, positives = 0;
  while (probes < 100'000) {
    const auto x = rng() >> 8;
    if (members.contains(x)) continue;
    ++probes;
    positives += f.query(LineAddress{x}) ? 1 : 0;
  }
  const double rate = static_cast<double>(positives) / static_cast<double>(probes);
  MESSAGE("measured false-positive rate " << rate);
  CHECK(rate <= 0.02);
}

TEST_CASE("hash positions are deterministic and seed dependent") {
  BloomFilter a(BloomParams{2000, 0.01, 5}), b(BloomParams{2000, 0.01, 5}), c(BloomParams{2000, 0.01, 6});
  for (std::uint64_t x : {0ULL, 1ULL, 123456789ULL, ~0ULL}) {
    CHECK(a.positions(LineAddress{x}) == b.positions(LineAddress{x}));
    CHECK(a.positions(LineAddress{x}) != c.positions(LineAddress{x}));
    for (auto p : a.positions(LineAddress{x})) CHECK(p < a.bit_count());
  }
}

TEST_CASE("shadow filter kinds") {
  ShadowFilter exact(FilterKind::exact, {});
  ShadowFilter bloom(FilterKind::bloom, {});
  CHECK(exact.kind() == FilterKind::exact);
  CHECK(bloom.kind() == FilterKind::bloom);
  exact.insert(LineAddress{3});
  bloom.insert(LineAddress{3});
  CHECK(exact.query(LineAddress{3}));
  CHECK(bloom.query(LineAddress{3}));
  CHECK_FALSE(exact.query(LineAddress{4}));
  exact.clear();
  bloom.clear();
  CHECK_FALSE(exact.query(LineAddress{3}));
  CHECK_FALSE(bloom.query(LineAddress{3}));
}
