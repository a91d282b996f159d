#include "arsenal/types.hpp"

#include <array>

namespace arsenal {

namespace {
constexpr std::array<std::string_view, kComponentCount> kNames = {"next-line", "ip-stride", "spp", "mlop", "tskid"};
}

std::string_view to_string(ComponentId id) { return kNames[static_cast<std::size_t>(id)]; }

std::optional<ComponentId> parse_component(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i)
    if (kNames[i] == name) return static_cast<ComponentId>(i);
  // underscore spellings are accepted for config files
  if (name == "next_line") return ComponentId::next_line;
  if (name == "ip_stride") return ComponentId::ip_stride;
  return std::nullopt;
}

}  // namespace arsenal
