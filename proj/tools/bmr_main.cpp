// Batch front-end for the catalog checks, freeness certificates and B3 representations.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "bmr/report.hpp"

namespace {

struct Options {
  std::string groups = "all";
  std::string seeds = "1";
  std::uint64_t prime = bmr::kDefaultPrime;
  std::string mode = "modp";
  std::string out;
  std::string catalog_dir;
  unsigned jobs = 0;
  std::size_t max_vectors = 4'000'000;
  std::uint64_t exact_limit = 100;
  std::string dims = "2,3,4,5";
  std::string certificate_dir;
  bool quiet = false;
};

void add_common(CLI::App* sub, Options& o, bool seeded) {
  sub->add_option("--groups", o.groups, "Groups, e.g. G4..G9,G12 or all")->capture_default_str();
  if (seeded) sub->add_option("--seeds", o.seeds, "Seeds, e.g. 1..5")->capture_default_str();
  sub->add_option("--prime", o.prime, "Prime modulus")->capture_default_str();
  sub->add_option("--out", o.out, "Write the JSON report here");
  sub->add_option("--catalog-dir", o.catalog_dir, "Catalog directory (default: $BMR_CATALOG_DIR or the built-in path)");
  sub->add_option("--jobs,-j", o.jobs, "Worker threads (0 = all cores)")->capture_default_str();
  sub->add_flag("--quiet,-q", o.quiet, "No summary table; print the JSON report on stdout unless --out is given");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Presentation checks, Hecke algebra freeness certificates and B3 representations"};
  app.require_subcommand(1);
  Options o;

  auto* info = app.add_subcommand("group-info", "Enumerate each group and check its order and center");
  add_common(info, o, false);
  auto* iso = app.add_subcommand("iso-check", "Verify the BMR <-> ER generator maps");
  add_common(iso, o, false);
  auto* free = app.add_subcommand("freeness", "Certify that the spanning set is a basis of the Hecke algebra");
  add_common(free, o, true);
  free->add_option("--mode", o.mode, "modp or exact")->check(CLI::IsMember({"modp", "exact"}))->capture_default_str();
  free->add_option("--max-vectors", o.max_vectors, "Vector enumeration cap")->capture_default_str();
  free->add_option("--exact-limit", o.exact_limit, "Skip exact mode above this |W| (0 = no limit)")->capture_default_str();
  free->add_option("--certificate-dir", o.certificate_dir, "Write each certificate to this directory");
  auto* alg = app.add_subcommand("group-algebra", "Specialize parameters to roots of unity and compare with CW");
  add_common(alg, o, true);
  alg->add_option("--max-vectors", o.max_vectors, "Vector enumeration cap")->capture_default_str();
  auto* b3 = app.add_subcommand("b3rep", "Check the low-dimensional B3 representations");
  b3->add_option("--dims", o.dims, "Dimensions among 2..5")->capture_default_str();
  b3->add_option("--seeds", o.seeds, "Seeds, e.g. 1..100")->capture_default_str();
  b3->add_option("--prime", o.prime, "Prime modulus")->capture_default_str();
  b3->add_option("--out", o.out, "Write the JSON report here");
  b3->add_option("--jobs,-j", o.jobs, "Worker threads (0 = all cores)")->capture_default_str();
  b3->add_flag("--quiet,-q", o.quiet, "No summary table; print the JSON report on stdout unless --out is given");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and friends exit 0; usage errors share the config-error code.
    int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  bmr::RunConfig cfg;
  bmr::Report report;
  try {
    auto* sub = app.get_subcommands().front();
    cfg.tasks = {bmr::parse_task(sub->get_name())};
    cfg.seeds = bmr::parse_seed_list(o.seeds);
    cfg.prime = o.prime;
    cfg.mode = o.mode == "exact" ? bmr::CoeffMode::Exact : bmr::CoeffMode::ModP;
    cfg.out_path = o.out;
    cfg.jobs = o.jobs;
    cfg.max_vectors = o.max_vectors;
    cfg.exact_limit = o.exact_limit;
    cfg.certificate_dir = o.certificate_dir;
    cfg.b3_dims.clear();
    for (auto d : bmr::parse_seed_list(o.dims)) cfg.b3_dims.push_back(static_cast<int>(d));

    bmr::Catalog cat = bmr::Catalog::load(o.catalog_dir.empty() ? bmr::Catalog::default_dir() : o.catalog_dir);
    if (cfg.tasks[0] != bmr::Task::B3Reps) cfg.groups = bmr::parse_group_list(o.groups, cat);
    report = bmr::run(cfg, cat);
  } catch (const bmr::ConfigError& ex) {
    std::cerr << "configuration error: " << ex.what() << "\n";
    return 3;
  } catch (const bmr::CatalogError& ex) {
    std::cerr << "catalog error: " << ex.what() << "\n";
    return 3;
  }

  const std::string text = report.to_json().dump(2) + "\n";
  if (cfg.out_path.empty()) {
    if (o.quiet) std::cout << text;
  } else {
    std::ofstream f(cfg.out_path);
    if (!f) {
      std::cerr << "cannot write " << cfg.out_path << "\n";
      return 3;
    }
    f << text;
  }
  if (!o.quiet) std::cout << report.summary();
  return report.pass() ? 0 : 2;
}
