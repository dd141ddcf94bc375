#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "bmr/group.hpp"
#include "bmr/hecke.hpp"

using namespace bmr;

namespace {

const Catalog& catalog() {
  static const Catalog cat = Catalog::load(Catalog::default_dir());
  return cat;
}

using Dense = std::vector<std::vector<std::uint64_t>>;

Dense dense_word(const FreenessCertificate& c, const Word& w) {
  PrimeField F(c.prime);
  const std::size_t n = c.dim();
  Dense m(n, std::vector<std::uint64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  for (int x : unit_letters(w)) {
    // m <- m * L_x
    const auto& L = c.modp[static_cast<std::size_t>(x)];
    Dense next(n, std::vector<std::uint64_t>(n, 0));
    for (std::size_t j = 0; j < n; ++j)
      for (const auto& [k, v] : L.cols[j])
        for (std::size_t i = 0; i < n; ++i)
          if (m[i][static_cast<std::size_t>(k)])
            next[i][j] = F.add(next[i][j], F.mul(m[i][static_cast<std::size_t>(k)], v));
    m = std::move(next);
  }
  return m;
}

std::uint64_t trace(const Dense& m, const PrimeField& F) {
  std::uint64_t t = 0;
  for (std::size_t i = 0; i < m.size(); ++i) t = F.add(t, m[i][i]);
  return t;
}

std::size_t index_of(const FreenessCertificate& c, const Word& w) {
  auto it = std::find(c.basis.begin(), c.basis.end(), w);
  REQUIRE(it != c.basis.end());
  return static_cast<std::size_t>(it - c.basis.begin());
}

CertifyResult certify(const std::string& id, std::uint64_t seed, CoeffMode mode = CoeffMode::ModP) {
  const auto& e = catalog().entry(id);
  CertifyOptions o;
  o.seed = seed;
  o.mode = mode;
  return certify_freeness(make_hecke_spec(e), expand_spanning_set(e), o);
}

const std::vector<std::string> kRecipeGroups = {"G4",  "G5",  "G6",  "G7",  "G8",  "G9",  "G10",
                                                "G11", "G12", "G13", "G14", "G15", "G16"};

}  // namespace

TEST_CASE("power relation coefficients") {
  auto v = make_varset({"u1", "u2", "u3"});
  auto P = [&](const std::string& s) { return LaurentPoly::parse(s, v); };
  auto a = eq1_coeffs({P("u1"), P("u2")});
  REQUIRE(a.size() == 2);
  CHECK(a[1] == P("u1 + u2"));
  CHECK(a[0] == P("-u1*u2"));
  auto b = eq1_coeffs({P("u1"), P("u2"), P("u3")});
  REQUIRE(b.size() == 3);
  CHECK(b[2] == P("u1 + u2 + u3"));
  CHECK(b[1] == P("-u1*u2 - u1*u3 - u2*u3"));
  CHECK(b[0] == P("u1*u2*u3"));
  auto c = eq1_coeffs({P("1"), P("-1")});
  CHECK(c[1].is_zero());
  CHECK(c[0].is_one());
}

TEST_CASE("Hecke spec parameter layout") {
  HeckeSpec g6 = make_hecke_spec(catalog().entry("G6"));
  REQUIRE(g6.class_params.size() == 2);
  CHECK(g6.class_params[0].size() == 2);
  CHECK(g6.class_params[1].size() == 3);
  CHECK(g6.vars->size() == 5);
  CHECK(g6.group_order == 48);
  // Conjugate generators share one parameter set.
  HeckeSpec g12 = make_hecke_spec(catalog().entry("G12"));
  CHECK(g12.class_params.size() == 1);
  CHECK(g12.params_of(0) == g12.params_of(2));
}

TEST_CASE("spanning sets have exactly |W| distinct words") {
  for (const auto& id : kRecipeGroups) {
    CAPTURE(id);
    SpanningSet s = expand_spanning_set(catalog().entry(id));
    CHECK(s.words.size() == s.expected_size);
    CHECK(s.expected_size == enumerate(catalog().get(id, Flavor::BMR)).size);
    CHECK(std::set<Word>(s.words.begin(), s.words.end()).size() == s.words.size());
  }
  CHECK(expand_spanning_set(catalog().entry("G6")).words.size() == 48);
  CHECK(expand_spanning_set(catalog().entry("G8")).words.size() == 96);
  CHECK(expand_spanning_set(catalog().entry("G15")).words.size() == 288);
  CHECK_THROWS_AS(expand_spanning_set(catalog().entry("G22")), SpanningError);
}

TEST_CASE("subalgebra exponents") {
  CHECK(subalgebra_exponents(2) == std::vector<int>{0, 1});
  CHECK(subalgebra_exponents(3) == std::vector<int>{0, 1, -1});
  CHECK(subalgebra_exponents(4).size() == 4);
}

TEST_CASE("G4 and G12 certify at five points") {
  for (const std::string id : {"G4", "G12"}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      CAPTURE(id);
      CAPTURE(seed);
      CertifyResult r = certify(id, seed);
      REQUIRE(r.ok());
      CHECK(r.certificate->rank == catalog().entry(id).bmr.group_order);
      CHECK(r.certificate->checks.size() == 4);
      CHECK(r.certificate->all_checks_pass());
    }
  }
}

TEST_CASE("exact certificates for G4 and G6") {
  for (const std::string id : {"G4", "G6"}) {
    CAPTURE(id);
    CertifyResult r = certify(id, 0, CoeffMode::Exact);
    REQUIRE(r.ok());
    CHECK(r.certificate->rank == catalog().entry(id).bmr.group_order);
    CHECK(r.certificate->all_checks_pass());
    CHECK(r.certificate->exact.size() == 2 * catalog().entry(id).bmr.generators.size());
  }
}

TEST_CASE("exact and prime-field certificates agree under specialization") {
  const auto& e = catalog().entry("G4");
  HeckeSpec spec = make_hecke_spec(e);
  CertifyResult ex = certify("G4", 0, CoeffMode::Exact);
  CertifyResult mp = certify("G4", 3);
  REQUIRE(ex.ok());
  REQUIRE(mp.ok());
  REQUIRE(ex.certificate->basis == mp.certificate->basis);
  const SpecPoint& pt = mp.certificate->point;
  for (std::size_t x = 0; x < ex.certificate->exact.size(); ++x) {
    const auto& E = ex.certificate->exact[x];
    const auto& M = mp.certificate->modp[x];
    for (std::size_t j = 0; j < E.cols.size(); ++j) {
      std::vector<std::uint64_t> a(E.n, 0), b(E.n, 0);
      for (const auto& [i, v] : E.cols[j]) a[static_cast<std::size_t>(i)] = specialize(v, pt).value;
      for (const auto& [i, v] : M.cols[j]) b[static_cast<std::size_t>(i)] = v;
      CHECK(a == b);
    }
  }
}

TEST_CASE("certificates are deterministic in the seed") {
  CertifyResult a = certify("G6", 4), b = certify("G6", 4), c = certify("G6", 5);
  REQUIRE(a.ok());
  REQUIRE(c.ok());
  CHECK(serialize_certificate(*a.certificate) == serialize_certificate(*b.certificate));
  CHECK(a.certificate->point.assignment == b.certificate->point.assignment);
  CHECK(a.certificate->point.assignment != c.certificate->point.assignment);
}

TEST_CASE("certificate serialization layout") {
  CertifyResult r = certify("G4", 1);
  REQUIRE(r.ok());
  std::string text = serialize_certificate(*r.certificate);
  CHECK(text.rfind("certificate 1\ngroup G4\nmode modp\nseed 1\nprime 2147483629\n", 0) == 0);
  CHECK(text.find("dimension 24\nrank 24\nbasis\n0 ") != std::string::npos);
  CHECK(text.find("matrix t^-1\nnonzeros ") != std::string::npos);
  CHECK(text.find("check inverse pass") != std::string::npos);
  CHECK(text.find("check center_commutes pass") != std::string::npos);
}

TEST_CASE("a spanning set with one word deleted is rank deficient") {
  const auto& e = catalog().entry("G6");
  SpanningSet s = expand_spanning_set(e);
  s.words.erase(s.words.begin() + 17);
  CertifyOptions o;
  CertifyResult r = certify_freeness(make_hecke_spec(e), s, o);
  CHECK_FALSE(r.ok());
  REQUIRE(r.failure.has_value());
  CHECK(r.failure->kind == FailureKind::RankDeficient);
  CHECK(r.failure->rank == 47);
  CHECK(r.failure->dimension == 48);
  CHECK(r.failure->message.find("deficiency 1") != std::string::npos);
}

TEST_CASE("vector cap produces a structured failure") {
  const auto& e = catalog().entry("G7");
  CertifyOptions o;
  o.max_vectors = 40;
  CertifyResult r = certify_freeness(make_hecke_spec(e), expand_spanning_set(e), o);
  REQUIRE(r.failure.has_value());
  CHECK(r.failure->kind == FailureKind::CapExceeded);
}

TEST_CASE("rank agrees with the coset table for the fast groups") {
  for (const std::string id : {"G5", "G7", "G8", "G13", "G14"}) {
    CAPTURE(id);
    CertifyResult r = certify(id, 1);
    REQUIRE(r.ok());
    CHECK(r.certificate->rank == enumerate(catalog().get(id, Flavor::BMR)).size);
  }
}

TEST_CASE("structure constants") {
  CertifyResult r = certify("G6", 2);
  REQUIRE(r.ok());
  const auto& c = *r.certificate;
  PrimeField F(c.prime);
  const std::size_t n = c.dim();
  const std::size_t one = index_of(c, Word{});
  std::vector<std::uint64_t> e_one(n, 0);
  e_one[one] = 1;

  for (std::size_t j = 0; j < n; j += 7) {
    auto row = structure_constants(c, one, j);
    std::vector<std::uint64_t> ej(n, 0);
    ej[j] = 1;
    CHECK(row == ej);
  }

  Presentation p = catalog().get("G6", Flavor::BMR, true);
  CHECK(structure_constants(c, index_of(c, p.word("t")), index_of(c, p.word("t^-1"))) == e_one);

  // b_i b_j recomputed from the product matrix of the concatenated word.
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t i = rng() % n, j = rng() % n;
    Dense m = dense_word(c, concat(c.basis[i], c.basis[j]));
    std::vector<std::uint64_t> expect(n);
    for (std::size_t k = 0; k < n; ++k) expect[k] = m[k][one];
    CHECK(structure_constants(c, i, j) == expect);
  }
}

TEST_CASE("exact structure constants specialize to the prime-field ones") {
  const auto& e = catalog().entry("G4");
  HeckeSpec spec = make_hecke_spec(e);
  CertifyResult ex = certify("G4", 0, CoeffMode::Exact);
  CertifyResult mp = certify("G4", 2);
  REQUIRE(ex.ok());
  REQUIRE(mp.ok());
  for (std::size_t i = 0; i < 24; i += 5)
    for (std::size_t j = 0; j < 24; j += 3) {
      auto exact = structure_constants_exact(spec, *ex.certificate, i, j);
      auto modp = structure_constants(*mp.certificate, i, j);
      for (std::size_t k = 0; k < 24; ++k) CHECK(specialize(exact[k], mp.certificate->point).value == modp[k]);
    }
}

TEST_CASE("trace of L_z does not depend on the basis order") {
  const auto& e = catalog().entry("G5");
  HeckeSpec spec = make_hecke_spec(e);
  SpanningSet s = expand_spanning_set(e);
  CertifyOptions o;
  o.seed = 9;
  CertifyResult a = certify_freeness(spec, s, o);
  std::reverse(s.words.begin(), s.words.end());
  CertifyResult b = certify_freeness(spec, s, o);
  REQUIRE(a.ok());
  REQUIRE(b.ok());
  PrimeField F(a.certificate->prime);
  CHECK(trace(dense_word(*a.certificate, spec.braid.center), F) == trace(dense_word(*b.certificate, spec.braid.center), F));
}

TEST_CASE("characteristic polynomial of a permutation matrix") {
  PrimeField F(101);
  Dense cyc = {{0, 0, 0, 1}, {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}};
  CHECK(charpoly_modp(cyc, F) == std::vector<std::uint64_t>{100, 0, 0, 0, 1});
  Dense diag = {{2, 0}, {0, 3}};
  CHECK(charpoly_modp(diag, F) == std::vector<std::uint64_t>{6, 96, 1});
}

TEST_CASE("group algebra at roots of unity") {
  for (const std::string id : {"G5", "G6", "G12"}) {
    CAPTURE(id);
    const auto& e = catalog().entry(id);
    HeckeSpec spec = make_hecke_spec(e);
    CertifyOptions o;
    o.point = roots_of_unity_point(spec, kDefaultPrime);
    CertifyResult r = certify_freeness(spec, expand_spanning_set(e), o);
    REQUIRE(r.ok());
    GroupAlgebraReport rep = group_algebra_check(spec, *r.certificate, enumerate(catalog().get(id, Flavor::BMR)));
    CHECK(rep.powers_ok);
    CHECK(rep.dimension_ok);
    CHECK(rep.charpoly_ok);
    CHECK(rep.algebra_dim == e.bmr.group_order);
    CHECK(rep.failures.empty());
  }
}

TEST_CASE("G12 at the +-1 point") {
  const auto& e = catalog().entry("G12");
  HeckeSpec spec = make_hecke_spec(e);
  SpecPoint pt = roots_of_unity_point(spec, kDefaultPrime);
  std::set<std::uint64_t> vals;
  for (const auto& [name, v] : pt.assignment) vals.insert(v);
  CHECK(vals == std::set<std::uint64_t>{1, kDefaultPrime - 1});
}

TEST_CASE("a perturbed root of unity breaks L_g^e = I") {
  const auto& e = catalog().entry("G5");
  HeckeSpec spec = make_hecke_spec(e);
  CertifyOptions o;
  o.point = roots_of_unity_point(spec, kDefaultPrime);
  auto& first = o.point->assignment.begin()->second;
  first = PrimeField(kDefaultPrime).add(first, 1);
  CertifyResult r = certify_freeness(spec, expand_spanning_set(e), o);
  REQUIRE(r.ok());
  GroupAlgebraReport rep = group_algebra_check(spec, *r.certificate, enumerate(catalog().get("G5", Flavor::BMR)));
  CHECK_FALSE(rep.powers_ok);
  CHECK_FALSE(rep.pass());
}

TEST_CASE("roots of unity need e | p - 1") {
  HeckeSpec g16 = make_hecke_spec(catalog().entry("G16"));
  CHECK_THROWS_AS(roots_of_unity_point(g16, kDefaultPrime), RingError);
}
