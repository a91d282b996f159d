#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "arsenal/cache.hpp"

namespace arsenal {

/// Reads "PC ADDR R|W" records (0x-prefixed hex, '#' comments, blank lines
/// ignored). Throws TraceParseError naming the 1-based line number.
std::vector<AccessEvent> parse_trace(std::istream& in);
std::vector<AccessEvent> read_trace_file(const std::string& path);
void write_trace(std::ostream& out, std::span<const AccessEvent> events);

enum class PatternKind : std::uint8_t { sequential, stride, random_working_set, pc_delta, phased };

struct PcStream {
  std::uint64_t pc = 0;
  std::uint64_t start = 0;
  std::int64_t delta = 0;  // bytes
};

struct PhasedSegment;

struct PatternSpec {
  PatternKind kind = PatternKind::sequential;
  std::uint64_t start = 0;
  std::int64_t stride = 64;       // bytes, stride kind
  std::uint64_t pc = 0x400000;    // first pc of the pool
  std::uint32_t pc_count = 1;     // sequential / random: pcs drawn uniformly from the pool
  std::uint64_t working_set_lines = 4096;
  std::uint32_t line_size = 64;
  std::vector<PcStream> streams;         // pc_delta
  std::vector<PhasedSegment> segments;   // phased, cycled in order
  std::uint64_t seed = 1;

  /// Throws ConfigError on invalid parameters.
  void validate() const;
};

struct PhasedSegment {
  PatternSpec pattern;
  std::uint64_t length = 0;
};

/// Streaming generator; deterministic in (spec, seed). Phased sub-patterns keep
/// their own address state across repetitions.
class PatternGenerator {
 public:
  explicit PatternGenerator(const PatternSpec& spec);
  ~PatternGenerator();
  PatternGenerator(PatternGenerator&&) noexcept;
  PatternGenerator& operator=(PatternGenerator&&) noexcept;

  AccessEvent next();
  /// Index of the phased segment the next event comes from (0 for flat patterns).
  std::size_t current_segment() const { return segment_; }

 private:
  std::uint64_t draw(std::uint64_t bound);
  std::uint64_t draw_pc();

  PatternSpec spec_;
  std::mt19937_64 rng_;
  std::uint64_t step_ = 0;
  Seq seq_ = 0;
  std::vector<std::unique_ptr<PatternGenerator>> children_;
  std::size_t segment_ = 0;
  std::uint64_t segment_remaining_ = 0;
};

std::vector<AccessEvent> generate(const PatternSpec& spec, std::uint64_t length);

/// Named synthetic workloads: "sequential", "stride", "pcdelta", "random", "phased".
PatternSpec preset_pattern(const std::string& name, std::uint64_t seed = 1);
std::vector<std::string> preset_names();

/// Alternating multi-PC stride / random-PC sequential trace used to exercise
/// prefetcher switching.
PatternSpec phased_stride_sequential(std::uint64_t segment_length, std::uint64_t seed = 1);

}  // namespace arsenal
