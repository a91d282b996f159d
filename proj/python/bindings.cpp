#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "arsenal/arsenal.hpp"
#include "arsenal/bloom_filter.hpp"
#include "arsenal/config.hpp"
#include "arsenal/experiment.hpp"
#include "arsenal/metrics.hpp"
#include "arsenal/report.hpp"
#include "arsenal/trace.hpp"

namespace py = pybind11;
using namespace arsenal;

namespace {

std::optional<std::string> name_of(const std::optional<ComponentId>& id) {
  if (!id) return std::nullopt;
  return std::string(to_string(*id));
}

std::vector<py::tuple> events_to_tuples(const std::vector<AccessEvent>& events) {
  std::vector<py::tuple> out;
  out.reserve(events.size());
  for (const auto& e : events) out.push_back(py::make_tuple(e.pc, e.addr, e.is_write));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cache simulator and adaptive prefetcher selection";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<TraceParseError>(m, "TraceParseError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  m.def("derive_parameters", [](std::uint64_t n, double p) {
    const auto s = derive_parameters(n, p);
    return py::make_tuple(s.bits, s.hashes);
  }, py::arg("capacity"), py::arg("fpp"), "Optimal (bits, hash count) for a Bloom filter.");

  py::class_<BloomFilter>(m, "BloomFilter")
      .def(py::init([](std::uint64_t capacity, double fpp, std::uint64_t seed) {
             return BloomFilter(BloomParams{capacity, fpp, seed});
           }),
           py::arg("capacity") = 2000, py::arg("fpp") = 0.01, py::arg("seed") = 0)
      .def("insert", [](BloomFilter& f, std::uint64_t line) { f.insert(LineAddress{line}); })
      .def("query", [](const BloomFilter& f, std::uint64_t line) { return f.query(LineAddress{line}); })
      .def("__contains__", [](const BloomFilter& f, std::uint64_t line) { return f.query(LineAddress{line}); })
      .def("clear", &BloomFilter::clear)
      .def_property_readonly("bit_count", &BloomFilter::bit_count)
      .def_property_readonly("hash_count", &BloomFilter::hash_count)
      .def_property_readonly("inserted_count", &BloomFilter::inserted_count);

  m.def("select_test_case_1",
        [](std::uint32_t tskid_score, std::uint32_t mlop_score, std::uint32_t tskid_attempts,
           std::uint32_t mlop_attempts, std::optional<std::string> previous) {
          std::optional<ComponentId> prev;
          if (previous) prev = parse_component(*previous);
          return name_of(select_test_case_1({tskid_score, mlop_score, tskid_attempts, mlop_attempts},
                                            ArsenalConfig{}, prev));
        },
        py::arg("tskid_score"), py::arg("mlop_score"), py::arg("tskid_attempts") = 0, py::arg("mlop_attempts") = 0,
        py::arg("previous") = py::none());

  m.def("select_test_case_2",
        [](std::uint32_t spp, std::uint32_t ip_stride, std::uint32_t next_line) {
          return name_of(select_test_case_2({spp, ip_stride, next_line}, ArsenalConfig{}));
        },
        py::arg("spp"), py::arg("ip_stride"), py::arg("next_line"));

  m.def("overhead_json",
        [](std::uint32_t n, const std::vector<std::pair<std::string, double>>& costs) {
          std::vector<ComponentCost> cc;
          for (const auto& [name, kb] : costs) cc.push_back({name, kb});
          return to_json(overhead(n, 2000, 0.01, cc)).dump();
        },
        py::arg("components"), py::arg("costs") = std::vector<std::pair<std::string, double>>{});

  m.def("generate",
        [](const std::string& preset, std::uint64_t length, std::uint64_t seed) {
          return events_to_tuples(generate(preset_pattern(preset, seed), length));
        },
        py::arg("preset"), py::arg("length"), py::arg("seed") = 1);

  m.def("parse_trace", [](const std::string& text) {
    std::istringstream in(text);
    return events_to_tuples(parse_trace(in));
  });

  m.def("run_experiment_json", [](const std::string& config) {
    ExperimentConfig cfg = experiment_from_json(Json::parse(config));
    SimReport report;
    {
      py::gil_scoped_release release;
      report = run_experiment(cfg);
    }
    return to_json(report).dump();
  });

  m.def("run_compare_json", [](const std::string& config) {
    CompareConfig cfg = compare_from_json(Json::parse(config));
    CompareReport report;
    {
      py::gil_scoped_release release;
      report = run_compare(cfg);
    }
    return to_json(report).dump();
  });
}
