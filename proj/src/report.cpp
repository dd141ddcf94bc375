#include "bmr/report.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <set>
#include <sstream>
#include <thread>

#include "bmr/b3.hpp"
#include "bmr/group.hpp"

namespace bmr {

using nlohmann::json;

namespace {

constexpr const char* kTaskNames[] = {"group-info", "iso-check", "freeness", "group-algebra", "b3rep"};

// Freeness is open for these groups; the engine does not attempt them.
const std::set<std::string> kOpenCases = {"G17", "G18", "G19", "G20", "G21"};

Record make_record(const std::string& group, Task task, std::uint64_t seed) {
  Record r;
  r.group = group;
  r.task = to_string(task);
  r.seed = seed;
  return r;
}

void skip(Record& r, const std::string& code, const std::string& reason) {
  r.status = "skipped";
  r.details["reason_code"] = code;
  r.details["reason"] = reason;
}

json matrix_json(const ModpMat& m) { return json(m); }

std::vector<std::string> check_json_list(const std::vector<CheckResult>& checks, json& out) {
  std::vector<std::string> failed;
  for (const auto& c : checks) {
    out.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    if (!c.pass) failed.push_back(c.name);
  }
  return failed;
}

std::uint64_t stated_order(const GroupEntry& e) { return e.bmr.group_order; }

bool has_roots_of_unity(const HeckeSpec& spec, std::uint64_t prime) {
  for (int e : spec.class_order)
    if ((prime - 1) % static_cast<std::uint64_t>(e) != 0) return false;
  return true;
}

template <class F>
Record guarded(Record r, F&& body) {
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& ex) {
    r.status = "error";
    r.details["error"] = ex.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

// Sort key: catalog groups numerically, then B3 dimensions after them.
std::tuple<int, std::string, int, std::uint64_t> sort_key(const Record& r) {
  int n = group_number(r.group);
  if (n < 0) n = 1000;
  int t = 0;
  for (int i = 0; i < 5; ++i)
    if (r.task == kTaskNames[i]) t = i;
  return {n, r.group, t, r.seed};
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

std::string to_string(Task t) { return kTaskNames[static_cast<int>(t)]; }

Task parse_task(const std::string& name) {
  for (int i = 0; i < 5; ++i)
    if (name == kTaskNames[i]) return static_cast<Task>(i);
  if (name == "b3-reps") return Task::B3Reps;
  throw ConfigError("unknown task '" + name + "'");
}

std::vector<std::string> parse_group_list(const std::string& text, const Catalog& cat) {
  std::vector<std::string> out;
  const auto ids = cat.ids();
  for (const auto& item : split(text, ',')) {
    if (item == "all") {
      out.insert(out.end(), ids.begin(), ids.end());
      continue;
    }
    auto dots = item.find("..");
    if (dots == std::string::npos) {
      if (!cat.has(item)) throw ConfigError("unknown group '" + item + "'");
      out.push_back(item);
      continue;
    }
    std::string lo = item.substr(0, dots), hi = item.substr(dots + 2);
    if (!hi.empty() && hi[0] != 'G') hi = "G" + hi;
    int a = group_number(lo), b = group_number(hi);
    if (a < 0 || b < 0 || a > b) throw ConfigError("bad group range '" + item + "'");
    for (const auto& id : ids)
      if (group_number(id) >= a && group_number(id) <= b) out.push_back(id);
  }
  std::vector<std::string> uniq;
  for (const auto& g : out)
    if (std::find(uniq.begin(), uniq.end(), g) == uniq.end()) uniq.push_back(g);
  return uniq;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  try {
    for (const auto& item : split(text, ',')) {
      auto dots = item.find("..");
      if (dots == std::string::npos) {
        out.push_back(std::stoull(item));
        continue;
      }
      std::uint64_t a = std::stoull(item.substr(0, dots)), b = std::stoull(item.substr(dots + 2));
      if (a > b) throw ConfigError("bad seed range '" + item + "'");
      for (std::uint64_t s = a; s <= b; ++s) out.push_back(s);
    }
  } catch (const std::logic_error&) {
    throw ConfigError("bad seed list '" + text + "'");
  }
  return out;
}

void validate_config(const RunConfig& cfg, const Catalog& cat) {
  if (cfg.tasks.empty()) throw ConfigError("no tasks selected");
  bool needs_groups = std::any_of(cfg.tasks.begin(), cfg.tasks.end(), [](Task t) { return t != Task::B3Reps; });
  if (needs_groups && cfg.groups.empty()) throw ConfigError("no groups selected");
  for (const auto& g : cfg.groups)
    if (!cat.has(g)) throw ConfigError("unknown group '" + g + "'");
  if (cfg.seeds.empty()) throw ConfigError("no seeds selected");
  if (cfg.prime < 3 || !is_prime(cfg.prime)) throw ConfigError("modulus " + std::to_string(cfg.prime) + " is not an odd prime");
  if (cfg.prime >= (1ULL << 62)) throw ConfigError("modulus must be below 2^62");
  for (int k : cfg.b3_dims)
    if (k < 2 || k > 5) throw ConfigError("B3 dimensions must lie in 2..5");
}

Record run_group_info(const Catalog& cat, const std::string& group) {
  return guarded(make_record(group, Task::GroupInfo, 0), [&](Record& r) {
    const auto& e = cat.entry(group);
    Presentation p = cat.get(group, Flavor::BMR);
    EnumStats st;
    CosetTable t = enumerate(p, {}, &st);
    CenterCheck cc = center_check(t, p);
    r.order = t.size;
    r.center_order = cc.order;
    r.details["generators"] = p.generators;
    r.details["orders"] = p.orders;
    json rels = json::array();
    for (const auto& rel : p.relations) rels.push_back(p.format(rel.lhs) + " = " + p.format(rel.rhs));
    r.details["relations"] = rels;
    r.details["center_word"] = p.format(p.center);
    r.details["center_central"] = cc.central;
    r.details["stated_order"] = e.bmr.group_order;
    r.details["stated_center_order"] = e.bmr.center_order;
    r.details["max_live_cosets"] = st.max_live;
    bool ok = cc.central;
    if (e.bmr.group_order && t.size != e.bmr.group_order) ok = false;
    if (e.bmr.center_order && cc.order != e.bmr.center_order) ok = false;
    r.status = ok ? "pass" : "fail";
  });
}

Record run_iso_check(const Catalog& cat, const std::string& group) {
  return guarded(make_record(group, Task::IsoCheck, 0), [&](Record& r) {
    IsoReport rep = verify_iso(cat.entry(group));
    r.order = rep.bmr_order;
    r.details["bmr_order"] = rep.bmr_order;
    r.details["er_order"] = rep.er_order;
    json rels = json::array();
    for (const auto& c : rep.relations) rels.push_back({{"map", c.map}, {"relation", c.relation}, {"pass", c.pass}});
    json trips = json::array();
    for (const auto& c : rep.round_trips)
      trips.push_back({{"composite", c.composite}, {"generator", c.generator}, {"pass", c.pass}});
    r.details["relations"] = rels;
    r.details["round_trips"] = trips;
    r.details["failures"] = rep.failures();
    if (!rep.error.empty()) r.details["error"] = rep.error;
    r.status = rep.pass() ? "pass" : "fail";
  });
}

Record run_freeness(const Catalog& cat, const std::string& group, std::uint64_t seed, const RunConfig& cfg) {
  return guarded(make_record(group, Task::Freeness, seed), [&](Record& r) {
    const auto& e = cat.entry(group);
    if (kOpenCases.count(group)) return skip(r, "open_case", "open case: freeness is not attempted for G17-G21");
    if (!e.spanning) return skip(r, "no_recipe", "no spanning set recipe in the catalog");
    HeckeSpec spec = make_hecke_spec(e);
    SpanningSet basis = expand_spanning_set(e);
    if (cfg.mode == CoeffMode::Exact && cfg.exact_limit && basis.expected_size > cfg.exact_limit)
      return skip(r, "exact_too_large", "|W| = " + std::to_string(basis.expected_size) +
                                            " exceeds the exact-mode limit " + std::to_string(cfg.exact_limit));
    CertifyOptions opts;
    opts.mode = cfg.mode;
    opts.prime = cfg.prime;
    opts.seed = seed;
    opts.max_vectors = cfg.max_vectors;
    CertifyResult res = certify_freeness(spec, basis, opts);
    r.order = stated_order(e) ? stated_order(e) : basis.expected_size;
    r.details["mode"] = to_string(cfg.mode);
    r.details["spanning_status"] = e.spanning->status;
    r.details["basis_size"] = basis.words.size();
    r.details["vectors_defined"] = res.stats.vectors_defined;
    r.details["max_live"] = res.stats.max_live;
    r.details["dimension"] = res.stats.dimension;
    if (res.certificate) {
      const auto& cert = *res.certificate;
      r.rank = cert.rank;
      json checks = json::array();
      check_json_list(cert.checks, checks);
      r.details["checks"] = checks;
      if (cfg.mode == CoeffMode::ModP) r.details["point"] = cert.point.assignment;
      if (!cfg.certificate_dir.empty()) {
        std::filesystem::create_directories(cfg.certificate_dir);
        auto path = std::filesystem::path(cfg.certificate_dir) /
                    (group + "_" + to_string(cfg.mode) + "_" + std::to_string(seed) + ".cert");
        std::ofstream(path) << serialize_certificate(cert);
        r.details["certificate_file"] = path.filename().string();
      }
    }
    if (res.failure) {
      r.rank = res.failure->rank ? res.failure->rank : r.rank.value_or(0);
      r.details["failure"] = {{"kind", to_string(res.failure->kind)},
                              {"message", res.failure->message},
                              {"dimension", res.failure->dimension},
                              {"rank", res.failure->rank},
                              {"basis_size", res.failure->basis_size}};
    }
    r.status = res.ok() && r.rank == r.order ? "pass" : "fail";
  });
}

Record run_group_algebra(const Catalog& cat, const std::string& group, std::uint64_t seed, const RunConfig& cfg) {
  return guarded(make_record(group, Task::GroupAlgebra, seed), [&](Record& r) {
    const auto& e = cat.entry(group);
    if (kOpenCases.count(group)) return skip(r, "open_case", "open case: freeness is not attempted for G17-G21");
    if (!e.spanning) return skip(r, "no_recipe", "no spanning set recipe in the catalog");
    HeckeSpec spec = make_hecke_spec(e);
    if (!has_roots_of_unity(spec, cfg.prime))
      return skip(r, "prime_lacks_roots", "p - 1 is not divisible by every generator order");
    SpanningSet basis = expand_spanning_set(e);
    CertifyOptions opts;
    opts.mode = CoeffMode::ModP;
    opts.prime = cfg.prime;
    opts.seed = seed;
    opts.max_vectors = cfg.max_vectors;
    opts.point = roots_of_unity_point(spec, cfg.prime);
    CertifyResult res = certify_freeness(spec, basis, opts);
    r.details["point"] = opts.point->assignment;
    if (!res.certificate) {
      r.details["failure"] = {{"kind", to_string(res.failure->kind)}, {"message", res.failure->message}};
      r.status = "fail";
      return;
    }
    CosetTable table = enumerate(cat.get(group, Flavor::BMR));
    r.order = table.size;
    r.rank = res.certificate->rank;
    GroupAlgebraReport rep = group_algebra_check(spec, *res.certificate, table, seed);
    r.details["powers_ok"] = rep.powers_ok;
    r.details["algebra_dim"] = rep.algebra_dim;
    r.details["dimension_ok"] = rep.dimension_ok;
    r.details["charpoly_ok"] = rep.charpoly_ok;
    r.details["failures"] = rep.failures;
    r.status = res.ok() && rep.pass() ? "pass" : "fail";
  });
}

Record run_b3(int k, std::uint64_t seed, std::uint64_t prime) {
  Record rec;
  rec.group = "B3k" + std::to_string(k);
  rec.task = to_string(Task::B3Reps);
  rec.seed = seed;
  return guarded(rec, [&](Record& r) {
    PrimeField F(prime);
    RepSpec s = random_rep_spec(k, seed, prime);
    r.details["k"] = k;
    r.details["lambda"] = s.lambda;
    if (k >= 4) r.details["root"] = s.root;
    const auto cond = condition_value(s);
    const bool predicted = irreducibility_condition(s);
    r.details["condition"] = cond;
    r.details["condition_nonzero"] = predicted;
    if (k == 5) {
      // No matrix model: the condition is recorded without an oracle verdict.
      r.details["note"] = "no matrix model in dimension 5; condition evaluated only";
      r.status = "pass";
      return;
    }
    bool ok = true;
    json branches = json::array();
    for (int branch = 0; branch < (k == 4 ? 2 : 1); ++branch) {
      RepSpec sb = k == 4 ? random_rep_spec(k, seed, prime, branch) : s;
      RepPair pair = build_rep(sb);
      bool braid = mat_mul(mat_mul(pair.A, pair.B, F), pair.A, F) == mat_mul(mat_mul(pair.B, pair.A, F), pair.B, F);
      // charpoly(A) = prod (X - l_i)
      std::vector<std::uint64_t> expect{1};
      for (auto l : sb.lambda) {
        std::vector<std::uint64_t> next(expect.size() + 1, 0);
        for (std::size_t i = 0; i < expect.size(); ++i) {
          next[i + 1] = F.add(next[i + 1], expect[i]);
          next[i] = F.sub(next[i], F.mul(l, expect[i]));
        }
        expect = std::move(next);
      }
      bool spectrum = mat_charpoly(pair.A, F) == expect;
      std::uint64_t prod = 1;
      for (auto l : sb.lambda) prod = F.mul(prod, l);
      bool det = mat_det(pair.A, F) == prod;
      bool irreducible = brute_irreducible(pair);
      bool agree = irreducible == irreducibility_condition(sb);
      branches.push_back({{"root", sb.root},
                          {"braid", braid},
                          {"spectrum", spectrum},
                          {"det", det},
                          {"brute_irreducible", irreducible},
                          {"agrees", agree},
                          {"A", matrix_json(pair.A)},
                          {"B", matrix_json(pair.B)}});
      ok = ok && braid && spectrum && det && agree;
    }
    r.details["branches"] = branches;
    if (k <= 3) {
      SymbolicRep sym = symbolic_rep(k);
      bool sbraid = poly_mul(poly_mul(sym.A, sym.B), sym.A) == poly_mul(poly_mul(sym.B, sym.A), sym.B);
      r.details["symbolic_braid"] = sbraid;
      ok = ok && sbraid;
    }
    if (k == 3) {
      ConjugatorReport c = ordered_triangular_conjugate(s);
      r.details["conjugator"] = {{"det", c.det},
                                 {"det_formula", c.det_formula_ok},
                                 {"a_lower_triangular", c.a_triangular},
                                 {"b_upper_triangular", c.b_triangular}};
      ok = ok && c.det_formula_ok && c.a_triangular && c.b_triangular;
    }
    r.status = ok ? "pass" : "fail";
  });
}

json to_json(const Record& r) {
  auto opt = [](const std::optional<std::uint64_t>& v) { return v ? json(*v) : json(nullptr); };
  return {{"group", r.group},
          {"task", r.task},
          {"seed", r.seed},
          {"status", r.status},
          {"rank", opt(r.rank)},
          {"order", opt(r.order)},
          {"center_order", opt(r.center_order)},
          {"details", r.details}};
}

bool Report::pass() const {
  return std::none_of(records.begin(), records.end(), [](const Record& r) { return r.failed(); });
}

json Report::to_json() const {
  json recs = json::array();
  for (const auto& r : records) recs.push_back(bmr::to_json(r));
  std::vector<std::string> tasks;
  for (Task t : config.tasks) tasks.push_back(to_string(t));
  std::size_t failed = std::count_if(records.begin(), records.end(), [](const Record& r) { return r.failed(); });
  std::size_t skipped = std::count_if(records.begin(), records.end(), [](const Record& r) { return r.status == "skipped"; });
  return {{"catalog_sha256", catalog_checksum},
          {"config",
           {{"groups", config.groups},
            {"tasks", tasks},
            {"seeds", config.seeds},
            {"prime", config.prime},
            {"mode", to_string(config.mode)}}},
          {"records", recs},
          {"summary", {{"records", records.size()}, {"failed", failed}, {"skipped", skipped}, {"pass", pass()}}}};
}

std::string Report::summary() const {
  std::ostringstream out;
  auto num = [](const std::optional<std::uint64_t>& v) { return v ? std::to_string(*v) : std::string("-"); };
  out << std::left << std::setw(8) << "group" << std::setw(15) << "task" << std::setw(6) << "seed" << std::setw(9)
      << "status" << std::setw(8) << "rank" << std::setw(8) << "order" << std::setw(8) << "center" << std::setw(9)
      << "seconds" << "note\n";
  for (const auto& r : records) {
    std::string note;
    if (r.details.contains("reason")) note = r.details["reason"].get<std::string>();
    else if (r.details.contains("failure")) note = r.details["failure"]["message"].get<std::string>();
    else if (r.details.contains("error")) note = r.details["error"].get<std::string>();
    std::ostringstream secs;
    secs << std::fixed << std::setprecision(2) << r.seconds;
    out << std::left << std::setw(8) << r.group << std::setw(15) << r.task << std::setw(6) << r.seed << std::setw(9)
        << r.status << std::setw(8) << num(r.rank) << std::setw(8) << num(r.order) << std::setw(8)
        << num(r.center_order) << std::setw(9) << secs.str() << note << "\n";
  }
  std::size_t failed = std::count_if(records.begin(), records.end(), [](const Record& r) { return r.failed(); });
  out << records.size() << " records, " << failed << " failed; overall " << (pass() ? "PASS" : "FAIL") << "\n";
  out << "catalog sha256 " << catalog_checksum << "\n";
  return out.str();
}

Report run(const RunConfig& cfg, const Catalog& cat) {
  validate_config(cfg, cat);
  std::vector<std::function<Record()>> jobs;
  for (Task t : cfg.tasks) {
    if (t == Task::B3Reps) {
      for (int k : cfg.b3_dims)
        for (auto seed : cfg.seeds) jobs.push_back([=] { return run_b3(k, seed, cfg.prime); });
      continue;
    }
    for (const auto& g : cfg.groups) {
      switch (t) {
        case Task::GroupInfo:
          jobs.push_back([&cat, g] { return run_group_info(cat, g); });
          break;
        case Task::IsoCheck:
          jobs.push_back([&cat, g] { return run_iso_check(cat, g); });
          break;
        case Task::Freeness:
          if (cfg.mode == CoeffMode::Exact) {
            // The exact certificate does not depend on a seed.
            jobs.push_back([&cat, &cfg, g] { return run_freeness(cat, g, 0, cfg); });
          } else {
            for (auto seed : cfg.seeds) jobs.push_back([&cat, &cfg, g, seed] { return run_freeness(cat, g, seed, cfg); });
          }
          break;
        case Task::GroupAlgebra:
          for (auto seed : cfg.seeds)
            jobs.push_back([&cat, &cfg, g, seed] { return run_group_algebra(cat, g, seed, cfg); });
          break;
        case Task::B3Reps:
          break;
      }
    }
  }

  Report report;
  report.catalog_checksum = cat.checksum();
  report.config = cfg;
  report.records.resize(jobs.size());
  unsigned workers = cfg.jobs ? cfg.jobs : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(jobs.size(), 1)));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) report.records[i] = jobs[i]();
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::sort(report.records.begin(), report.records.end(),
            [](const Record& a, const Record& b) { return sort_key(a) < sort_key(b); });
  return report;
}

}  // namespace bmr
