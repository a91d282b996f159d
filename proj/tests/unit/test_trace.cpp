#include <doctest.h>

#include <set>
#include <sstream>

#include "arsenal/trace.hpp"

using namespace arsenal;

namespace {

std::vector<AccessEvent> parse(const std::string& text) {
  std::istringstream in(text);
  return parse_trace(in);
}

int error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const TraceParseError& e) {
    return static_cast<int>(e.line());
  }
  return -1;
}

std::vector<std::uint64_t> lines(const std::vector<AccessEvent>& events) {
  std::vector<std::uint64_t> out;
  for (const auto& e : events) out.push_back(e.addr >> 6);
  return out;
}

}  // namespace

TEST_SUITE("trace parsing") {
  TEST_CASE("single record") {
    const auto ev = parse("0x400 0x1000 R\n");
    REQUIRE(ev.size() == 1);
    CHECK(ev[0].pc == 0x400);
    CHECK(ev[0].addr == 0x1000);
    CHECK_FALSE(ev[0].is_write);
    CHECK(ev[0].seq == 0);
  }

  TEST_CASE("comments and blank lines are skipped, seq counts records") {
    const auto ev = parse("# comment\n\n0x1 0x40 W\n  \n0x2 0x80 R\n");
    REQUIRE(ev.size() == 2);
    CHECK(ev[0].is_write);
    CHECK(ev[0].seq == 0);
    CHECK(ev[1].seq == 1);
  }

  TEST_CASE("empty input is an empty trace") {
    CHECK(parse("").empty());
    CHECK(parse("# nothing\n").empty());
  }

  TEST_CASE("malformed lines report their line number") {
    CHECK(error_line("0x400 zzz R\n") == 1);
    CHECK(error_line("# c\n0x400 0x1000 R\n0x400 0x1000 X\n") == 3);
    CHECK(error_line("400 0x1000 R\n") == 1);
    CHECK(error_line("0x400 0x1000\n") == 1);
    CHECK(error_line("0x400 0x1000 R extra\n") == 1);
  }

  TEST_CASE("missing file is an io error") {
    CHECK_THROWS_AS(read_trace_file("/nonexistent/trace.txt"), IoError);
  }

  TEST_CASE("write then parse round trips") {
    const auto events = generate(preset_pattern("random", 3), 500);
    std::ostringstream out;
    write_trace(out, events);
    const auto back = parse(out.str());
    REQUIRE(back.size() == events.size());
    for (std::size_t i = 0; i < events.size(); ++i) {
      CHECK(back[i].pc == events[i].pc);
      CHECK(back[i].addr == events[i].addr);
      CHECK(back[i].is_write == events[i].is_write);
      CHECK(back[i].seq == i);
    }
  }
}

TEST_SUITE("trace generation") {
  TEST_CASE("sequential from 0") {
    PatternSpec s;
    s.kind = PatternKind::sequential;
    CHECK(lines(generate(s, 4)) == std::vector<std::uint64_t>{0, 1, 2, 3});
  }

  TEST_CASE("stride of four lines") {
    PatternSpec s;
    s.kind = PatternKind::stride;
    s.stride = 0x100;
    const auto ev = generate(s, 3);
    CHECK(lines(ev) == std::vector<std::uint64_t>{0, 4, 8});
    for (const auto& e : ev) CHECK(e.pc == s.pc);
  }

  TEST_CASE("random working set stays inside its line set") {
    PatternSpec s;
    s.kind = PatternKind::random_working_set;
    s.working_set_lines = 100;
    s.start = 64 * 1000;
    std::set<std::uint64_t> seen;
    for (auto l : lines(generate(s, 5000))) {
      CHECK(l >= 1000);
      CHECK(l < 1100);
      seen.insert(l);
    }
    CHECK(seen.size() > 90);
  }

  TEST_CASE("pc-delta cycles its streams") {
    PatternSpec s;
    s.kind = PatternKind::pc_delta;
    s.streams = {{0xA, 0, 64}, {0xB, 64 * 1000, -128}};
    const auto ev = generate(s, 6);
    CHECK(ev[0].pc == 0xA);
    CHECK(ev[1].pc == 0xB);
    CHECK(lines(ev) == std::vector<std::uint64_t>{0, 1000, 1, 998, 2, 996});
  }

  TEST_CASE("phased concatenates its segments and keeps sub-pattern state") {
    PatternSpec a;
    a.kind = PatternKind::sequential;
    PatternSpec b;
    b.kind = PatternKind::stride;
    b.start = 64 * 5000;
    b.stride = 64 * 10;
    PatternSpec p;
    p.kind = PatternKind::phased;
    p.segments = {{a, 3}, {b, 2}};
    CHECK(lines(generate(p, 10)) == std::vector<std::uint64_t>{0, 1, 2, 5000, 5010, 3, 4, 5, 5020, 5030});
    const auto ev = generate(p, 10);
    for (std::size_t i = 0; i < ev.size(); ++i) CHECK(ev[i].seq == i);
  }

  TEST_CASE("generation is deterministic in spec and seed") {
    for (const auto& name : preset_names()) {
      const auto a = generate(preset_pattern(name, 42), 3000);
      const auto b = generate(preset_pattern(name, 42), 3000);
      REQUIRE(a.size() == b.size());
      bool same = true;
      for (std::size_t i = 0; i < a.size(); ++i) same &= a[i].pc == b[i].pc && a[i].addr == b[i].addr;
      CHECK(same);
    }
    const auto r1 = generate(preset_pattern("random", 1), 100);
    const auto r2 = generate(preset_pattern("random", 2), 100);
    bool differ = false;
    for (std::size_t i = 0; i < 100; ++i) differ |= r1[i].addr != r2[i].addr;
    CHECK(differ);
  }

  TEST_CASE("invalid specs are rejected") {
    PatternSpec s;
    s.kind = PatternKind::stride;
    s.stride = 0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    PatternSpec p;
    p.kind = PatternKind::phased;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p.segments = {{PatternSpec{}, 0}};
    CHECK_THROWS_AS(p.validate(), ConfigError);
    CHECK_THROWS_AS(preset_pattern("nope"), ConfigError);
  }
}
