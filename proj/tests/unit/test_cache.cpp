#include <doctest.h>

#include <list>
#include <map>
#include <random>

#include "arsenal/cache.hpp"

using namespace arsenal;

namespace {

AccessEvent ev_line(std::uint64_t line, Seq seq) { return AccessEvent{0x400, line * 64, false, seq}; }

// Reference model: per-set recency lists plus an in-flight map, written
// independently of Cache's stamp-based LRU.
class ReferenceCache {
 public:
  explicit ReferenceCache(CacheConfig c) : c_(c), sets_(c.sets) {}

  OutcomeKind access(std::uint64_t line, Seq now) {
    fill(now);
    auto& set = sets_[line % c_.sets];
    for (auto it = set.begin(); it != set.end(); ++it) {
      if (it->first == line) {
        const bool pf = it->second;
        set.erase(it);
        set.push_front({line, false});
        return pf ? OutcomeKind::prefetch_hit : OutcomeKind::hit;
      }
    }
    if (auto it = flight_.find(line); it != flight_.end()) {
      order_.remove(line);
      flight_.erase(it);
      install(line, false);
      return OutcomeKind::late_prefetch_hit;
    }
    install(line, false);
    return OutcomeKind::miss;
  }

  bool prefetch(std::uint64_t line, Seq now) {
    for (auto& l : sets_[line % c_.sets])
      if (l.first == line) return false;
    if (flight_.contains(line) || flight_.size() >= c_.prefetch_queue_capacity) return false;
    flight_[line] = now + c_.prefetch_fill_delay;
    order_.push_back(line);
    return true;
  }

  void fill(Seq now) {
    for (auto it = order_.begin(); it != order_.end();) {
      if (flight_[*it] <= now) {
        flight_.erase(*it);
        install(*it, true);
        it = order_.erase(it);
      } else {
        ++it;
      }
    }
  }

 private:
  void install(std::uint64_t line, bool pf) {
    auto& set = sets_[line % c_.sets];
    if (set.size() == c_.ways) set.pop_back();
    set.push_front({line, pf});
  }

  CacheConfig c_;
  std::vector<std::list<std::pair<std::uint64_t, bool>>> sets_;
  std::map<std::uint64_t, Seq> flight_;
  std::list<std::uint64_t> order_;
};

}  // namespace

TEST_CASE("cold access misses, re-access hits") {
  Cache cache(CacheConfig{});
  auto first = cache.access(ev_line(7, 0));
  CHECK(first.kind == OutcomeKind::miss);
  CHECK(first.latency == 200);
  CHECK(first.is_pae);

  auto second = cache.access(ev_line(7, 1));
  CHECK(second.kind == OutcomeKind::hit);
  CHECK(second.latency == 4);
  CHECK_FALSE(second.is_pae);
}

TEST_CASE("filled prefetch yields exactly one prefetch hit") {
  Cache cache(CacheConfig{});
  REQUIRE(cache.enqueue_prefetch(LineAddress{9}, ComponentId::next_line, 0));
  CHECK(cache.in_flight().front().fill_seq == 40);

  cache.fill_due(100);
  auto a = cache.access(ev_line(9, 100));
  CHECK(a.kind == OutcomeKind::prefetch_hit);
  CHECK(a.is_pae);
  CHECK(a.latency == 4);
  REQUIRE(a.useful_source);
  CHECK(*a.useful_source == ComponentId::next_line);

  cache.fill_due(101);
  auto b = cache.access(ev_line(9, 101));
  CHECK(b.kind == OutcomeKind::hit);
  CHECK_FALSE(b.is_pae);
}

TEST_CASE("demand to an in-flight line is a late prefetch hit") {
  Cache cache(CacheConfig{});
  REQUIRE(cache.enqueue_prefetch(LineAddress{12}, ComponentId::spp, 0));
  cache.fill_due(10);
  auto a = cache.access(ev_line(12, 10));
  CHECK(a.kind == OutcomeKind::late_prefetch_hit);
  CHECK(a.latency == 100);
  CHECK(a.is_pae);
  CHECK(cache.in_flight().empty());
  auto state = cache.probe(LineAddress{12});
  REQUIRE(state);
  CHECK_FALSE(state->prefetched);
  CHECK(cache.stats().useful_by[static_cast<std::size_t>(ComponentId::spp)] == 1);
}

TEST_CASE("enqueue_prefetch drop rules") {
  Cache cache(CacheConfig{});
  cache.access(ev_line(5, 0));

  SUBCASE("resident line is dropped without state change") {
    CHECK_FALSE(cache.enqueue_prefetch(LineAddress{5}, ComponentId::next_line, 1));
    CHECK(cache.in_flight().empty());
    CHECK(cache.stats().pf_dropped == 1);
  }
  SUBCASE("fresh line is accepted with fill_seq = now + delay") {
    CHECK(cache.enqueue_prefetch(LineAddress{6}, ComponentId::next_line, 3));
    CHECK(cache.in_flight().front().fill_seq == 43);
    CHECK_FALSE(cache.enqueue_prefetch(LineAddress{6}, ComponentId::next_line, 4));
  }
  SUBCASE("capacity bound") {
    for (std::uint64_t i = 0; i < 16; ++i) CHECK(cache.enqueue_prefetch(LineAddress{100 + i}, ComponentId::spp, 1));
    CHECK_FALSE(cache.enqueue_prefetch(LineAddress{200}, ComponentId::spp, 1));
    CHECK(cache.stats().pf_dropped == 1);
    CHECK(cache.in_flight().size() == 16);
  }
}

TEST_CASE("fill_due installs exactly the due entries") {
  Cache cache(CacheConfig{});
  CHECK(cache.fill_due(0) == 0);

  cache.enqueue_prefetch(LineAddress{1}, ComponentId::next_line, 0);
  CHECK(cache.fill_due(40) == 1);
  auto s = cache.probe(LineAddress{1});
  REQUIRE(s);
  CHECK(s->prefetched);

  cache.enqueue_prefetch(LineAddress{2}, ComponentId::next_line, 10);
  cache.enqueue_prefetch(LineAddress{3}, ComponentId::next_line, 20);
  cache.enqueue_prefetch(LineAddress{4}, ComponentId::next_line, 30);
  CHECK(cache.fill_due(60) == 2);
  CHECK(cache.in_flight().size() == 1);
  CHECK(cache.is_in_flight(LineAddress{4}));
}

TEST_CASE("amat arithmetic") {
  CacheConfig c;
  CacheStats s;
  CHECK_THROWS_WITH_AS(amat(s, c), "empty statistics", std::invalid_argument);
  s.hits = 100;
  CHECK(amat(s, c) == doctest::Approx(4.0));
  s = {};
  s.hits = 90;
  s.misses = 10;
  CHECK(amat(s, c) == doctest::Approx(23.6));
  s = {};
  s.prefetch_hits = 50;
  s.misses = 50;
  CHECK(amat(s, c) == doctest::Approx(102.0));
}

TEST_CASE("config validation") {
  CacheConfig c;
  c.sets = 48;
  CHECK_THROWS_AS(Cache{c}, ConfigError);
  c = {};
  c.line_size = 48;
  CHECK_THROWS_AS(Cache{c}, ConfigError);
  c = {};
  c.ways = 0;
  CHECK_THROWS_AS(Cache{c}, ConfigError);
  c = {};
  c.late_latency = 300;
  CHECK_THROWS_AS(Cache{c}, ConfigError);
}

TEST_CASE("LRU evicts the least recently touched line") {
  CacheConfig c;
  c.sets = 1;
  c.ways = 2;
  Cache cache(c);
  cache.access(ev_line(1, 0));
  cache.access(ev_line(2, 1));
  cache.access(ev_line(1, 2));  // 2 becomes LRU
  cache.access(ev_line(3, 3));
  CHECK(cache.is_resident(LineAddress{1}));
  CHECK_FALSE(cache.is_resident(LineAddress{2}));
  CHECK(cache.is_resident(LineAddress{3}));
}

TEST_CASE("property: cache agrees with the reference model on random streams") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    CacheConfig c;
    c.sets = 4;
    c.ways = 2;
    c.prefetch_fill_delay = seed % 5;
    c.prefetch_queue_capacity = 4;
    Cache cache(c);
    ReferenceCache ref(c);
    std::mt19937_64 rng(seed);
    std::map<std::uint64_t, int> pf_hits_since_fill;

    for (Seq t = 0; t < 3000; ++t) {
      const std::uint64_t line = rng() % 24;
      if (rng() % 3 == 0) {
        const std::uint64_t pl = rng() % 24;
        CHECK(cache.enqueue_prefetch(LineAddress{pl}, ComponentId::next_line, t) == ref.prefetch(pl, t));
      }
      cache.fill_due(t);
      const auto out = cache.access(ev_line(line, t));
      const auto expect = ref.access(line, t);
      REQUIRE(out.kind == expect);
      CHECK(out.is_pae == (out.kind != OutcomeKind::hit));
    }
    const auto& s = cache.stats();
    CHECK(s.pf_requested == s.pf_dropped + s.pf_filled + s.pf_late_merged + cache.in_flight().size());
  }
}

TEST_CASE("determinism: identical runs give identical outcome sequences") {
  auto run = [] {
    Cache cache(CacheConfig{});
    std::mt19937_64 rng(42);
    std::vector<OutcomeKind> kinds;
    for (Seq t = 0; t < 5000; ++t) {
      if (t % 7 == 0) cache.enqueue_prefetch(LineAddress{rng() % 2048}, ComponentId::mlop, t);
      cache.fill_due(t);
      kinds.push_back(cache.access(ev_line(rng() % 2048, t)).kind);
    }
    return kinds;
  };
  CHECK(run() == run());
}
