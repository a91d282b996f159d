#include "arsenal/trace.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace arsenal {

namespace {

bool parse_hex(std::string_view tok, std::uint64_t& out) {
  if (tok.size() < 3 || tok[0] != '0' || (tok[1] != 'x' && tok[1] != 'X')) return false;
  const auto* first = tok.data() + 2;
  const auto* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, out, 16);
  return ec == std::errc{} && ptr == last;
}

}  // namespace

std::vector<AccessEvent> parse_trace(std::istream& in) {
  std::vector<AccessEvent> events;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;

    std::istringstream fields(line);
    std::string pc_tok, addr_tok, op_tok, extra;
    if (!(fields >> pc_tok >> addr_tok >> op_tok)) throw TraceParseError(lineno, "expected 'PC ADDR R|W'");
    if (fields >> extra) throw TraceParseError(lineno, "trailing field '" + extra + "'");

    AccessEvent ev;
    if (!parse_hex(pc_tok, ev.pc)) throw TraceParseError(lineno, "bad pc '" + pc_tok + "'");
    if (!parse_hex(addr_tok, ev.addr)) throw TraceParseError(lineno, "bad address '" + addr_tok + "'");
    if (op_tok == "R") {
      ev.is_write = false;
    } else if (op_tok == "W") {
      ev.is_write = true;
    } else {
      throw TraceParseError(lineno, "bad op '" + op_tok + "'");
    }
    ev.seq = events.size();
    events.push_back(ev);
  }
  return events;
}

std::vector<AccessEvent> read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trace file '" + path + "'");
  return parse_trace(in);
}

void write_trace(std::ostream& out, std::span<const AccessEvent> events) {
  char buf[64];
  for (const auto& e : events) {
    const int n = std::snprintf(buf, sizeof buf, "0x%llx 0x%llx %c\n", static_cast<unsigned long long>(e.pc),
                                static_cast<unsigned long long>(e.addr), e.is_write ? 'W' : 'R');
    out.write(buf, n);
  }
}

void PatternSpec::validate() const {
  if (line_size == 0 || (line_size & (line_size - 1)) != 0) throw ConfigError("pattern.line_size must be a power of two");
  switch (kind) {
    case PatternKind::sequential:
    case PatternKind::random_working_set:
      if (pc_count == 0) throw ConfigError("pattern.pc_count must be >= 1");
      if (kind == PatternKind::random_working_set && working_set_lines == 0)
        throw ConfigError("pattern.working_set_lines must be >= 1");
      break;
    case PatternKind::stride:
      if (stride == 0) throw ConfigError("pattern.stride must be non-zero");
      break;
    case PatternKind::pc_delta:
      if (streams.empty()) throw ConfigError("pc_delta pattern needs at least one stream");
      break;
    case PatternKind::phased:
      if (segments.empty()) throw ConfigError("phased pattern needs at least one segment");
      for (const auto& s : segments) {
        if (s.length == 0) throw ConfigError("phased segment lengths must be positive");
        s.pattern.validate();
      }
      break;
  }
}

PatternGenerator::PatternGenerator(const PatternSpec& spec) : spec_(spec), rng_(spec.seed) {
  spec_.validate();
  if (spec_.kind == PatternKind::phased) {
    for (std::size_t i = 0; i < spec_.segments.size(); ++i) {
      auto child = spec_.segments[i].pattern;
      child.seed ^= spec_.seed * 0x9e3779b97f4a7c15ULL + i;
      children_.push_back(std::make_unique<PatternGenerator>(child));
    }
    segment_remaining_ = spec_.segments.front().length;
  }
}

PatternGenerator::~PatternGenerator() = default;
PatternGenerator::PatternGenerator(PatternGenerator&&) noexcept = default;
PatternGenerator& PatternGenerator::operator=(PatternGenerator&&) noexcept = default;

// Plain modulo keeps the mapping identical across standard libraries, unlike
// std::uniform_int_distribution.
std::uint64_t PatternGenerator::draw(std::uint64_t bound) { return rng_() % bound; }

std::uint64_t PatternGenerator::draw_pc() {
  return spec_.pc_count <= 1 ? spec_.pc : spec_.pc + 4 * draw(spec_.pc_count);
}

AccessEvent PatternGenerator::next() {
  AccessEvent ev;
  ev.seq = seq_++;
  const std::uint64_t i = step_++;
  switch (spec_.kind) {
    case PatternKind::sequential:
      ev.pc = draw_pc();
      ev.addr = spec_.start + i * spec_.line_size;
      break;
    case PatternKind::stride:
      ev.pc = spec_.pc;
      ev.addr = spec_.start + i * static_cast<std::uint64_t>(spec_.stride);
      break;
    case PatternKind::random_working_set:
      ev.pc = draw_pc();
      ev.addr = spec_.start + draw(spec_.working_set_lines) * spec_.line_size;
      break;
    case PatternKind::pc_delta: {
      const auto& s = spec_.streams[i % spec_.streams.size()];
      const std::uint64_t k = i / spec_.streams.size();
      ev.pc = s.pc;
      ev.addr = s.start + k * static_cast<std::uint64_t>(s.delta);
      break;
    }
    case PatternKind::phased: {
      --segment_remaining_;
      const auto child = children_[segment_]->next();
      ev.pc = child.pc;
      ev.addr = child.addr;
      ev.is_write = child.is_write;
      if (segment_remaining_ == 0) {
        segment_ = (segment_ + 1) % children_.size();
        segment_remaining_ = spec_.segments[segment_].length;
      }
      break;
    }
  }
  return ev;
}

std::vector<AccessEvent> generate(const PatternSpec& spec, std::uint64_t length) {
  PatternGenerator gen(spec);
  std::vector<AccessEvent> out;
  out.reserve(length);
  for (std::uint64_t i = 0; i < length; ++i) out.push_back(gen.next());
  return out;
}

namespace {

// Four streams whose strides leave the 4 KiB page on every access.
std::vector<PcStream> stride_streams() {
  return {{0x401000, 1ULL << 36, 67 * 64},
          {0x401010, 2ULL << 36, 131 * 64},
          {0x401020, 3ULL << 36, 79 * 64},
          {0x401030, 4ULL << 36, -97 * 64}};
}

}  // namespace

PatternSpec phased_stride_sequential(std::uint64_t segment_length, std::uint64_t seed) {
  PatternSpec strided;
  strided.kind = PatternKind::pc_delta;
  strided.streams = stride_streams();

  PatternSpec sequential;
  sequential.kind = PatternKind::sequential;
  sequential.start = 8ULL << 36;
  sequential.pc = 0x402000;
  sequential.pc_count = 256;

  PatternSpec phased;
  phased.kind = PatternKind::phased;
  phased.segments = {{strided, segment_length}, {sequential, segment_length}};
  phased.seed = seed;
  return phased;
}

std::vector<std::string> preset_names() { return {"sequential", "stride", "pcdelta", "random", "phased"}; }

PatternSpec preset_pattern(const std::string& name, std::uint64_t seed) {
  PatternSpec p;
  p.seed = seed;
  if (name == "sequential") {
    p.kind = PatternKind::sequential;
    p.start = 8ULL << 36;
    p.pc = 0x402000;
    p.pc_count = 256;
  } else if (name == "stride") {
    p.kind = PatternKind::stride;
    p.start = 1ULL << 36;
    p.stride = 67 * 64;
    p.pc = 0x401000;
  } else if (name == "pcdelta") {
    p.kind = PatternKind::pc_delta;
    p.streams = stride_streams();
  } else if (name == "random") {
    p.kind = PatternKind::random_working_set;
    p.start = 16ULL << 36;
    p.pc = 0x403000;
    p.pc_count = 16;
    p.working_set_lines = 1 << 16;
  } else if (name == "phased") {
    p = phased_stride_sequential(50'000, seed);
  } else {
    throw ConfigError("unknown pattern preset '" + name + "'");
  }
  return p;
}

}  // namespace arsenal
