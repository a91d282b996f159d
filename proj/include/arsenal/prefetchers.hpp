#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "arsenal/cache.hpp"
#include "arsenal/types.hpp"

namespace arsenal {

/// A prefetch activation event: a miss, a prefetch hit, or a late prefetch hit.
struct PaeContext {
  std::uint64_t pc = 0;
  LineAddress line;
  Seq seq = 0;
  OutcomeKind outcome_kind = OutcomeKind::miss;
};

struct NextLineConfig {
  std::uint32_t degree = 5;
  std::uint32_t max_degree = 5;
  std::uint32_t score_divisor = 512;
};

struct IpStrideConfig {
  std::uint32_t table_size = 64;
  std::uint32_t degree = 8;
  std::uint32_t confidence_threshold = 2;
};

struct SppConfig {
  std::uint32_t st_entries = 256;
  std::uint32_t pt_entries = 512;
  std::uint32_t ghr_entries = 8;
  std::uint32_t max_depth = 8;
  double lookahead_threshold = 0.25;
};

struct MlopConfig {
  std::uint32_t zones = 64;
  std::uint32_t levels = 8;
  std::int32_t max_offset = 16;
  std::uint32_t round_length = 256;
  std::uint32_t score_threshold = 16;
};

struct TskidConfig {
  std::uint32_t table_size = 64;
  std::uint32_t confidence_threshold = 2;
  std::uint64_t lead = 4;
  std::uint64_t verification_expiry = 1024;
  std::uint32_t max_pending = 256;
  std::uint32_t max_delayed = 256;
};

struct ComponentConfigs {
  NextLineConfig next_line;
  IpStrideConfig ip_stride;
  SppConfig spp;
  MlopConfig mlop;
  TskidConfig tskid;
};

/// Uniform shadow interface: given a PAE, propose candidate lines. Implementations
/// never look at cache contents.
class Prefetcher {
 public:
  virtual ~Prefetcher() = default;

  virtual ComponentId id() const = 0;
  virtual std::vector<LineAddress> on_pae(const PaeContext& ctx) = 0;

  /// Highest addressable line; candidates past either end of the address space are dropped.
  void set_line_bits(unsigned line_bits) { max_line_ = ~std::uint64_t{0} >> line_bits; }
  std::uint64_t max_line() const { return max_line_; }

 protected:
  std::optional<LineAddress> offset_line(LineAddress base, std::int64_t delta) const;

 private:
  std::uint64_t max_line_ = ~std::uint64_t{0} >> 6;
};

class NextLinePrefetcher final : public Prefetcher {
 public:
  explicit NextLinePrefetcher(NextLineConfig config = {});

  ComponentId id() const override { return ComponentId::next_line; }
  std::vector<LineAddress> on_pae(const PaeContext& ctx) override;

  /// degree = clamp(1 + score / score_divisor, 1, max_degree)
  void set_degree(std::uint32_t score);
  std::uint32_t degree() const { return degree_; }

 private:
  NextLineConfig config_;
  std::uint32_t degree_;
};

/// Shared per-PC stride training. A mismatching stride costs one confidence
/// point; when confidence drains to zero the new stride is adopted with
/// confidence 1 (it has been observed once).
struct StrideTracker {
  std::int64_t stride = 0;
  std::uint32_t confidence = 0;

  void train(std::int64_t observed);
};

struct IpStrideEntry {
  bool valid = false;
  std::uint64_t pc = 0;
  LineAddress last_line;
  StrideTracker tracker;
  std::uint64_t lru_stamp = 0;
};

class IpStridePrefetcher final : public Prefetcher {
 public:
  explicit IpStridePrefetcher(IpStrideConfig config = {});

  ComponentId id() const override { return ComponentId::ip_stride; }
  std::vector<LineAddress> on_pae(const PaeContext& ctx) override;

  const std::vector<IpStrideEntry>& table() const { return table_; }

 private:
  IpStrideConfig config_;
  std::vector<IpStrideEntry> table_;
  std::uint64_t clock_ = 0;
};

/// Lookahead chain instrumentation.
struct SppChainStats {
  std::uint64_t chains = 0;
  std::uint64_t steps = 0;
  std::uint32_t max_depth = 0;
  std::uint64_t nonmonotone_steps = 0;  // path confidence rose along a chain
  std::uint64_t ghr_inserts = 0;
  std::uint64_t ghr_bootstraps = 0;
};

class SppPrefetcher final : public Prefetcher {
 public:
  static constexpr std::uint32_t kPageLines = 64;
  static constexpr std::uint32_t kSignatureBits = 12;
  static constexpr std::uint32_t kSignatureShift = 3;
  static constexpr std::uint32_t kCounterMax = 15;
  static constexpr std::size_t kDeltaSlots = 4;

  struct PatternSlot {
    std::int32_t delta = 0;
    std::uint32_t c_delta = 0;
  };
  struct PatternEntry {
    std::array<PatternSlot, kDeltaSlots> slots{};
    std::uint32_t c_sig = 0;
  };

  explicit SppPrefetcher(SppConfig config = {});

  ComponentId id() const override { return ComponentId::spp; }
  std::vector<LineAddress> on_pae(const PaeContext& ctx) override;

  /// 7-bit sign-magnitude delta encoding used in signatures.
  static std::uint32_t encode_delta(std::int32_t delta);
  static std::uint32_t next_signature(std::uint32_t signature, std::int32_t delta);

  const PatternEntry& pattern(std::uint32_t signature) const { return pt_[signature % config_.pt_entries]; }
  const SppChainStats& chain_stats() const { return stats_; }
  /// Path confidences of the emitted steps of the most recent chain.
  const std::vector<double>& last_chain() const { return last_chain_; }

 private:
  struct SignatureEntry {
    bool valid = false;
    std::uint64_t page = 0;
    std::uint32_t signature = 0;
    std::int32_t last_offset = 0;
  };
  struct GhrEntry {
    bool valid = false;
    std::uint32_t signature = 0;
    double confidence = 0.0;
    std::int32_t last_offset = 0;
    std::int32_t delta = 0;
  };

  void train(std::uint32_t signature, std::int32_t delta);
  void lookahead(std::uint32_t signature, std::uint64_t page, std::int32_t offset, std::vector<LineAddress>& out);
  std::optional<std::uint32_t> bootstrap(std::int32_t offset);

  SppConfig config_;
  std::vector<SignatureEntry> st_;
  std::vector<PatternEntry> pt_;
  std::vector<GhrEntry> ghr_;
  std::size_t ghr_next_ = 0;
  SppChainStats stats_;
  std::vector<double> last_chain_;
};

class MlopPrefetcher final : public Prefetcher {
 public:
  static constexpr std::uint32_t kZoneLines = 64;

  explicit MlopPrefetcher(MlopConfig config = {});

  ComponentId id() const override { return ComponentId::mlop; }
  std::vector<LineAddress> on_pae(const PaeContext& ctx) override;

  /// Selected offset per lookahead level (index 0 is level 1).
  const std::vector<std::optional<std::int32_t>>& selected_offsets() const { return selected_; }
  std::uint32_t score(std::uint32_t level, std::int32_t offset) const;

 private:
  struct Zone {
    bool valid = false;
    std::uint64_t tag = 0;
    std::uint64_t bitmap = 0;
    std::array<std::uint64_t, kZoneLines> stamps{};
    std::uint64_t lru_stamp = 0;
  };

  Zone& zone_for(std::uint64_t tag);
  std::size_t score_index(std::uint32_t level, std::int32_t offset) const;
  void end_round();

  MlopConfig config_;
  std::vector<Zone> zones_;
  std::vector<std::uint32_t> scores_;
  std::vector<std::optional<std::int32_t>> selected_;
  std::uint64_t pae_count_ = 0;
  std::uint32_t round_counter_ = 0;
};

class TskidPrefetcher final : public Prefetcher {
 public:
  struct TargetEntry {
    bool valid = false;
    std::uint64_t pc = 0;
    LineAddress last_line;
    StrideTracker tracker;
    std::uint64_t use_distance = 0;
    std::uint64_t lru_stamp = 0;
  };
  struct PendingVerification {
    std::uint64_t pc = 0;
    LineAddress predicted;
    Seq trigger_seq = 0;
  };
  struct Delayed {
    LineAddress line;
    Seq release_seq = 0;
  };

  explicit TskidPrefetcher(TskidConfig config = {});

  ComponentId id() const override { return ComponentId::tskid; }
  std::vector<LineAddress> on_pae(const PaeContext& ctx) override;

  const TargetEntry* entry(std::uint64_t pc) const;
  const std::vector<Delayed>& delay_queue() const { return delayed_; }
  const std::vector<PendingVerification>& pending() const { return pending_; }

 private:
  TargetEntry& lookup_or_allocate(std::uint64_t pc, LineAddress line, bool& allocated);

  TskidConfig config_;
  std::vector<TargetEntry> table_;
  std::vector<PendingVerification> pending_;
  std::vector<Delayed> delayed_;  // sorted by release_seq
  std::uint64_t clock_ = 0;
};

std::unique_ptr<Prefetcher> make_prefetcher(ComponentId id, const ComponentConfigs& configs, unsigned line_bits = 6);

}  // namespace arsenal
