#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace arsenal {

/// Cache-line granular address (byte address >> log2(line_size)).
struct LineAddress {
  std::uint64_t value = 0;

  constexpr auto operator<=>(const LineAddress&) const = default;
};

/// Demand-access index. Every time quantity in the simulator is measured in
/// these ticks; there is no cycle clock.
using Seq = std::uint64_t;

enum class ComponentId : std::uint8_t { next_line, ip_stride, spp, mlop, tskid };

inline constexpr std::size_t kComponentCount = 5;

std::string_view to_string(ComponentId id);
std::optional<ComponentId> parse_component(std::string_view name);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TraceParseError : public std::runtime_error {
 public:
  TraceParseError(std::size_t line, const std::string& what)
      : std::runtime_error("trace line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Saturating add/subtract on an unsigned counter bounded by [0, max].
constexpr std::uint32_t sat_add(std::uint32_t v, std::uint32_t inc, std::uint32_t max) {
  return (max - v < inc) ? max : v + inc;
}
constexpr std::uint32_t sat_sub(std::uint32_t v, std::uint32_t dec) { return v < dec ? 0 : v - dec; }

}  // namespace arsenal

template <>
struct std::hash<arsenal::LineAddress> {
  std::size_t operator()(const arsenal::LineAddress& l) const noexcept {
    return std::hash<std::uint64_t>{}(l.value);
  }
};
