#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "bmr/b3.hpp"

using namespace bmr;

namespace {

const PrimeField F(kDefaultPrime);

bool braid(const RepPair& p) {
  return mat_mul(mat_mul(p.A, p.B, F), p.A, F) == mat_mul(mat_mul(p.B, p.A, F), p.B, F);
}

std::vector<std::uint64_t> expected_charpoly(const std::vector<std::uint64_t>& roots) {
  std::vector<std::uint64_t> c{1};
  for (auto l : roots) {
    std::vector<std::uint64_t> next(c.size() + 1, 0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] = F.add(next[i + 1], c[i]);
      next[i] = F.sub(next[i], F.mul(l, c[i]));
    }
    c = std::move(next);
  }
  return c;
}

std::uint64_t prod(const std::vector<std::uint64_t>& xs) {
  std::uint64_t p = 1;
  for (auto x : xs) p = F.mul(p, x);
  return p;
}

RepSpec spec(std::vector<std::uint64_t> l, std::uint64_t root = 0) {
  RepSpec s;
  s.k = static_cast<int>(l.size());
  s.lambda = std::move(l);
  s.root = root;
  return s;
}

}  // namespace

TEST_CASE("symbolic braid relation and spectrum for k = 2, 3") {
  for (int k : {2, 3}) {
    CAPTURE(k);
    SymbolicRep s = symbolic_rep(k);
    CHECK(poly_mul(poly_mul(s.A, s.B), s.A) == poly_mul(poly_mul(s.B, s.A), s.B));
    // char(A) = prod (X - l_i): compare coefficient lists.
    auto v = s.vars;
    auto L = [&](int i) { return LaurentPoly::variable(v, static_cast<std::size_t>(i)); };
    std::vector<LaurentPoly> expect{LaurentPoly::constant(v, 1)};
    for (int i = 0; i < k; ++i) {
      std::vector<LaurentPoly> next(expect.size() + 1, LaurentPoly(v));
      for (std::size_t j = 0; j < expect.size(); ++j) {
        next[j + 1] += expect[j];
        next[j] -= L(i) * expect[j];
      }
      expect = std::move(next);
    }
    CHECK(poly_charpoly(s.A) == expect);
    CHECK(poly_charpoly(s.B) == expect);
    LaurentPoly det = LaurentPoly::constant(v, 1);
    for (int i = 0; i < k; ++i) det *= L(i);
    CHECK(poly_det(s.A) == det);
  }
  CHECK_THROWS_AS(symbolic_rep(4), B3Error);
}

TEST_CASE("k = 2 with lambda = (1, zeta)") {
  std::uint64_t zeta = F.root_of_unity(3);
  RepSpec s = spec({1, zeta});
  CHECK(irreducibility_condition(s));
  CHECK(braid(build_rep(s)));
}

TEST_CASE("k = 2 condition examples") {
  CHECK(condition_value(spec({1, 1})) == 1);
  CHECK(irreducibility_condition(spec({1, 1})));
  std::uint64_t w = F.root_of_unity(6);
  RepSpec s = spec({1, w});
  CHECK(condition_value(s) == 0);
  CHECK_FALSE(irreducibility_condition(s));
  RepPair p = build_rep(s);
  CHECK_FALSE(brute_irreducible(p));
  CHECK(invariant_subspace_witness(p, s) == 1);
}

TEST_CASE("equal eigenvalues at k = 2 stay irreducible") {
  // A fixes only e1 and B only e2, so no common eigenvector.
  RepSpec s = spec({5, 5});
  CHECK(irreducibility_condition(s));
  CHECK(brute_irreducible(build_rep(s)));
}

TEST_CASE("k = 3 braid relation at random points") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    RepSpec s = random_rep_spec(3, seed);
    RepPair p = build_rep(s);
    CHECK(braid(p));
    CHECK(mat_charpoly(p.A, F) == expected_charpoly(s.lambda));
    CHECK(mat_charpoly(p.B, F) == expected_charpoly(s.lambda));
  }
}

TEST_CASE("k = 3 on the vanishing locus is reducible") {
  // l1^2 = -l2 l3
  std::uint64_t l1 = 7, l2 = 11, l3 = F.neg(F.mul(49, F.inv(11)));
  RepSpec s = spec({l1, l2, l3});
  CHECK_FALSE(irreducibility_condition(s));
  RepPair p = build_rep(s);
  CHECK_FALSE(brute_irreducible(p));
  CHECK(generated_algebra_dim(p) < 9);
  CHECK(invariant_subspace_witness(p, s).has_value());
}

TEST_CASE("k = 4 braid relation, spectrum and determinant on both root branches") {
  for (int branch = 0; branch < 2; ++branch)
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      RepSpec s = random_rep_spec(4, seed, kDefaultPrime, branch);
      CHECK(F.mul(s.root, s.root) == prod(s.lambda));
      RepPair p = build_rep(s);
      CHECK(braid(p));
      CHECK(mat_charpoly(p.A, F) == expected_charpoly(s.lambda));
      CHECK(mat_det(p.A, F) == prod(s.lambda));
      CHECK(mat_det(p.B, F) == prod(s.lambda));
    }
}

TEST_CASE("the two k = 4 branches are distinct representations") {
  RepSpec a = random_rep_spec(4, 3, kDefaultPrime, 0), b = random_rep_spec(4, 3, kDefaultPrime, 1);
  CHECK(a.lambda == b.lambda);
  CHECK(a.root == F.neg(b.root));
  CHECK(build_rep(a).A != build_rep(b).A);
}

TEST_CASE("k = 4 condition agrees with the oracle") {
  for (int branch = 0; branch < 2; ++branch)
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
      RepSpec s = random_rep_spec(4, seed, kDefaultPrime, branch);
      CHECK(irreducibility_condition(s) == brute_irreducible(build_rep(s)));
    }
  // r = l1^2 is a vanishing factor.
  std::uint64_t l1 = 3, l2 = 5, l3 = 7, r = 9;
  RepSpec s = spec({l1, l2, l3, F.mul(81, F.inv(105))}, r);
  CHECK_FALSE(irreducibility_condition(s));
  RepPair p = build_rep(s);
  CHECK_FALSE(brute_irreducible(p));
  CHECK(invariant_subspace_witness(p, s).has_value());
  // r = l1 l2 + l3 l4 with r^2 = l1 l2 l3 l4: l1 l2 = r mu, l3 l4 = r / mu, mu^2 - mu + 1 = 0.
  std::uint64_t mu = F.root_of_unity(6), rr = 40, a1 = 4, a3 = 6;
  RepSpec t = spec({a1, F.mul(F.mul(rr, mu), F.inv(a1)), a3, F.mul(F.mul(rr, F.inv(mu)), F.inv(a3))}, rr);
  REQUIRE(F.mul(rr, rr) == prod(t.lambda));
  CHECK_FALSE(irreducibility_condition(t));
  CHECK_FALSE(brute_irreducible(build_rep(t)));
}

TEST_CASE("oracle agreement on 100 random points for k = 2 and k = 3") {
  for (int k : {2, 3}) {
    int disagreements = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      RepSpec s = random_rep_spec(k, 1000 + seed);
      if (irreducibility_condition(s) != brute_irreducible(build_rep(s))) ++disagreements;
    }
    CHECK(disagreements == 0);
  }
}

TEST_CASE("oracle agreement on the vanishing loci") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 30; ++trial) {
    std::uint64_t l1 = rng() % (kDefaultPrime - 1) + 1, l2 = rng() % (kDefaultPrime - 1) + 1;
    // Each tt1 factor in turn.
    RepSpec a = spec({l1, l2, F.neg(F.mul(F.mul(l1, l1), F.inv(l2)))});
    RepSpec b = spec({l1, l2, F.neg(F.mul(F.mul(l2, l2), F.inv(l1)))});
    RepSpec c = spec({l1, l2, 0});
    for (auto* s : {&a, &b}) {
      CHECK_FALSE(irreducibility_condition(*s));
      CHECK_FALSE(brute_irreducible(build_rep(*s)));
    }
    // l3^2 = -l1 l2 needs a square root.
    auto roots = kth_roots(F.neg(F.mul(l1, l2)), 2, F);
    if (!roots.empty()) {
      c.lambda[2] = roots[0];
      CHECK_FALSE(irreducibility_condition(c));
      CHECK_FALSE(brute_irreducible(build_rep(c)));
    }
  }
}

TEST_CASE("conditions are symmetric in the eigenvalues") {
  for (int k : {2, 3}) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      RepSpec s = random_rep_spec(k, seed);
      std::uint64_t v = condition_value(s);
      std::sort(s.lambda.begin(), s.lambda.end());
      do {
        CHECK(condition_value(s) == v);
      } while (std::next_permutation(s.lambda.begin(), s.lambda.end()));
    }
  }
}

TEST_CASE("k = 3 conjugator") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    RepSpec s = random_rep_spec(3, seed);
    ConjugatorReport c = ordered_triangular_conjugate(s);
    CHECK(c.det_formula_ok);
    CHECK(c.a_triangular);
    CHECK(c.b_triangular);
  }
  // Symbolic determinant.
  auto v = symbolic_rep(3).vars;
  auto P = [&](const std::string& t) { return LaurentPoly::parse(t, v); };
  auto q = P("l3^2 + l1*l2");
  CHECK(poly_det(symbolic_conjugator(v)) == P("l1") * P("l1^2 + l2*l3") * q * q);
  // On the tt1 locus det D = 0 and the conjugator is refused.
  RepSpec bad = spec({7, 11, F.neg(F.mul(49, F.inv(11)))});
  CHECK_THROWS_AS(ordered_triangular_conjugate(bad), B3Error);
  CHECK_THROWS_AS(ordered_triangular_conjugate(random_rep_spec(2, 1)), B3Error);
}

TEST_CASE("k = 5 evaluates the condition only") {
  RepSpec s = random_rep_spec(5, 1);
  CHECK(F.pow(s.root, 5) == prod(s.lambda));
  CHECK_THROWS_AS(build_rep(s), B3Error);
  CHECK(condition_value(s) != 0);
  CHECK(irreducibility_condition(s));
  // r~^2 + l1 r~ + l1^2 = 0 when r~ = w l1 with w a primitive cube root of unity.
  std::uint64_t w = F.root_of_unity(3), l1 = 2, l2 = 3, l3 = 5, l4 = 7;
  std::uint64_t t = F.mul(w, l1);
  RepSpec z = spec({l1, l2, l3, l4, F.mul(F.pow(t, 5), F.inv(prod({l1, l2, l3, l4})))}, t);
  CHECK(condition_value(z) == 0);
  CHECK_FALSE(irreducibility_condition(z));
  // det A = -l_i^6 / l_j is excluded even when the product is nonzero.
  std::uint64_t d = F.neg(F.mul(F.pow(l1, 6), F.inv(l2)));
  RepSpec e = spec({l1, l2, l3, l4, F.mul(d, F.inv(prod({l1, l2, l3, l4})))});
  auto roots = kth_roots(d, 5, F);
  REQUIRE(roots.size() == 1);
  e.root = roots[0];
  CHECK_FALSE(irreducibility_condition(e));
}

TEST_CASE("malformed specs") {
  CHECK_THROWS_AS(build_rep(spec({1, 0})), B3Error);
  CHECK_THROWS_AS(build_rep(spec({1})), B3Error);
  CHECK_THROWS_AS(build_rep(spec({1, 2, 3, 4}, 5)), B3Error);
  CHECK_THROWS_AS(random_rep_spec(6, 1), B3Error);
}

TEST_CASE("k-th roots") {
  // 5 does not divide p - 1: unique fifth roots.
  for (std::uint64_t x : {2ULL, 12345ULL, 987654321ULL}) {
    auto r = kth_roots(F.pow(x, 5), 5, F);
    REQUIRE(r.size() == 1);
    CHECK(r[0] == x);
  }
  auto sq = kth_roots(F.pow(777, 2), 2, F);
  REQUIRE(sq.size() == 2);
  CHECK(std::find(sq.begin(), sq.end(), 777) != sq.end());
  CHECK(kth_roots(0, 2, F) == std::vector<std::uint64_t>{0});
  // A non-residue has no square root.
  std::uint64_t g = F.primitive_root();
  CHECK(kth_roots(g, 2, F).empty());
  PrimeField small(31);
  CHECK(kth_roots(1, 3, small).size() == 3);
  CHECK_THROWS_AS(kth_roots(8, 3, F), B3Error);
}

TEST_CASE("random specs are seeded") {
  CHECK(random_rep_spec(4, 8).lambda == random_rep_spec(4, 8).lambda);
  CHECK(random_rep_spec(3, 8).lambda != random_rep_spec(3, 9).lambda);
  for (int k = 2; k <= 5; ++k) {
    RepSpec s = random_rep_spec(k, 17);
    auto l = s.lambda;
    std::sort(l.begin(), l.end());
    CHECK(std::adjacent_find(l.begin(), l.end()) == l.end());
  }
}
