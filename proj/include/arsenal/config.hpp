#pragma once

#include <string>

#include "arsenal/experiment.hpp"
#include "arsenal/report.hpp"

namespace arsenal {

/// Experiment configuration file (JSON). Every section is optional; missing
/// fields keep their defaults and unknown fields are rejected.
///
///   {
///     "name": "...", "seed": 1, "warmup": 0, "engine": "arsenal-tc2",
///     "trace": {"file": "t.trace"} | {"pattern": {...}, "length": 1000000},
///     "traces": [ ...trace objects, for compare... ],
///     "cache": {"sets": 64, ...},
///     "arsenal": {"score_inc": 4, ...},
///     "components": {"next_line": {...}, "ip_stride": {...}, "spp": {...}, "mlop": {...}, "tskid": {...}}
///   }
Json load_json_file(const std::string& path);

CacheConfig cache_from_json(const Json& j, CacheConfig base = {});
ArsenalConfig arsenal_from_json(const Json& j, ArsenalConfig base = {});
ComponentConfigs components_from_json(const Json& j, ComponentConfigs base = {});
PatternSpec pattern_from_json(const Json& j);
TraceSource trace_from_json(const Json& j);

/// "preset[:key=value,...]" with keys start, stride, pc, pcs, ws, segment.
PatternSpec parse_pattern_arg(const std::string& arg, std::uint64_t seed = 1);

ExperimentConfig experiment_from_json(const Json& j);
CompareConfig compare_from_json(const Json& j);

/// Sets the synthetic-trace seed (recursively) and the Bloom master seed.
void apply_seed(ExperimentConfig& cfg, std::uint64_t seed);
void apply_seed(CompareConfig& cfg, std::uint64_t seed);

}  // namespace arsenal
