#include <map>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bmr/b3.hpp"
#include "bmr/group.hpp"
#include "bmr/hecke.hpp"
#include "bmr/report.hpp"

namespace py = pybind11;
using namespace bmr;

namespace {

const Catalog& catalog_at(const std::string& dir) {
  static std::map<std::string, Catalog> cache;
  auto it = cache.find(dir);
  if (it == cache.end()) it = cache.emplace(dir, Catalog::load(dir)).first;
  return it->second;
}

std::string resolve(const std::string& dir) { return dir.empty() ? Catalog::default_dir() : dir; }

}  // namespace

PYBIND11_MODULE(_bmr_hecke, m) {
  py::register_exception<CatalogError>(m, "CatalogError");
  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<B3Error>(m, "B3Error");

  m.attr("DEFAULT_PRIME") = kDefaultPrime;

  m.def("group_ids", [](const std::string& dir) { return catalog_at(resolve(dir)).ids(); }, py::arg("catalog_dir") = "");
  m.def("catalog_checksum", [](const std::string& dir) { return catalog_at(resolve(dir)).checksum(); },
        py::arg("catalog_dir") = "");

  m.def(
      "group_order",
      [](const std::string& id, const std::string& dir) {
        return enumerate(catalog_at(resolve(dir)).get(id, Flavor::BMR)).size;
      },
      py::arg("group"), py::arg("catalog_dir") = "");

  m.def(
      "verify_iso",
      [](const std::string& id, const std::string& dir) {
        IsoReport r = verify_iso(catalog_at(resolve(dir)).entry(id));
        py::dict d;
        d["pass"] = r.pass();
        d["bmr_order"] = r.bmr_order;
        d["er_order"] = r.er_order;
        d["failures"] = r.failures();
        return d;
      },
      py::arg("group"), py::arg("catalog_dir") = "");

  // Runs one report task and returns the JSON document as a string.
  m.def(
      "run",
      [](const std::vector<std::string>& groups, const std::string& task, const std::vector<std::uint64_t>& seeds,
         std::uint64_t prime, const std::string& mode, const std::string& dir) {
        RunConfig cfg;
        cfg.groups = groups;
        cfg.tasks = {parse_task(task)};
        cfg.seeds = seeds;
        cfg.prime = prime;
        if (mode == "exact") cfg.mode = CoeffMode::Exact;
        else if (mode != "modp") throw ConfigError("mode must be modp or exact");
        py::gil_scoped_release release;
        return run(cfg, catalog_at(resolve(dir))).to_json().dump();
      },
      py::arg("groups"), py::arg("task"), py::arg("seeds") = std::vector<std::uint64_t>{1},
      py::arg("prime") = kDefaultPrime, py::arg("mode") = "modp", py::arg("catalog_dir") = "");

  m.def(
      "b3_condition",
      [](std::vector<std::uint64_t> lambda, std::uint64_t root, std::uint64_t prime) {
        RepSpec s;
        s.k = static_cast<int>(lambda.size());
        s.lambda = std::move(lambda);
        s.root = root;
        s.prime = prime;
        return irreducibility_condition(s);
      },
      py::arg("lam"), py::arg("root") = 0, py::arg("prime") = kDefaultPrime);

  m.def(
      "b3_brute_irreducible",
      [](std::vector<std::uint64_t> lambda, std::uint64_t root, std::uint64_t prime) {
        RepSpec s;
        s.k = static_cast<int>(lambda.size());
        s.lambda = std::move(lambda);
        s.root = root;
        s.prime = prime;
        return brute_irreducible(build_rep(s));
      },
      py::arg("lam"), py::arg("root") = 0, py::arg("prime") = kDefaultPrime);
}
