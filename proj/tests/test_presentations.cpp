#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "bmr/catalog.hpp"

using namespace bmr;
namespace fs = std::filesystem;

namespace {

const Catalog& catalog() {
  static const Catalog cat = Catalog::load(Catalog::default_dir());
  return cat;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Copy of the catalog in a fresh temporary directory.
fs::path copy_catalog(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("bmr_catalog_" + tag + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  for (const auto& f : fs::directory_iterator(catalog().dir())) fs::copy_file(f.path(), dir / f.path().filename());
  return dir;
}

}  // namespace

TEST_CASE("word operations reduce freely") {
  std::vector<std::string> g{"s", "t", "u"};
  CHECK(concat(parse_word("s t", g), parse_word("t^-1 s", g)) == parse_word("s^2", g));
  CHECK(format_word(inverse(parse_word("s t u", g)), g) == "u^-1 t^-1 s^-1");
  CHECK(power(parse_word("s t", g), 3) == parse_word("s t s t s t", g));
  CHECK(power(parse_word("s t", g), -1) == parse_word("t^-1 s^-1", g));
  CHECK(parse_word("1", g).empty());
  CHECK(format_word(Word{}, g) == "1");
  CHECK(parse_word("sts", g) == parse_word("s t s", g));
  CHECK(parse_word("(s t)^3", g).length() == 6);
  CHECK(parse_word("s s^-1 t t^-1", g).empty());
  CHECK_THROWS_AS(parse_word("s q", g), WordError);
}

TEST_CASE("G6 BMR entry") {
  Presentation p = catalog().get("G6", Flavor::BMR);
  CHECK(p.generators == std::vector<std::string>{"s", "t"});
  CHECK(p.orders == std::vector<int>{2, 3});
  REQUIRE(p.relations.size() == 1);
  CHECK(p.relations[0].lhs == p.word("s t s t s t"));
  CHECK(p.relations[0].rhs == p.word("t s t s t s"));
  CHECK(p.center == power(p.word("s t"), 3));
  CHECK(p.center_order == 4);
  CHECK(p.group_order == 48);
}

TEST_CASE("G12 BMR entry") {
  Presentation p = catalog().get("G12", Flavor::BMR);
  CHECK(p.orders == std::vector<int>{2, 2, 2});
  REQUIRE(p.relations.size() == 2);
  CHECK(p.relations[0].lhs == p.word("s t u s"));
  CHECK(p.relations[0].rhs == p.word("t u s t"));
  CHECK(p.relations[1].rhs == p.word("u s t u"));
  CHECK(p.center == power(p.word("s t u"), 4));
  CHECK(p.center_order == 2);
  CHECK(p.group_order == 48);
}

TEST_CASE("G7 ER entry expands the central shorthand") {
  Presentation p = catalog().get("G7", Flavor::ER);
  CHECK(p.generators == std::vector<std::string>{"a", "b", "c"});
  CHECK(p.orders == std::vector<int>{2, 3, 3});
  Word abc = p.word("a b c");
  for (const auto& g : p.generators) {
    RelationPair commute{concat(abc, p.word(g)), concat(p.word(g), abc)};
    CHECK(std::find(p.relations.begin(), p.relations.end(), commute) != p.relations.end());
  }
}

TEST_CASE("G13 ER has four generators") {
  CHECK(catalog().get("G13", Flavor::ER).generators.size() == 4);
}

TEST_CASE("braid flavor drops every order") {
  for (const auto& id : catalog().ids()) {
    Presentation b = catalog().get(id, Flavor::BMR, true);
    CHECK(b.braid);
    for (int e : b.orders) CHECK(e == 0);
    CHECK(b.relations.size() == catalog().get(id, Flavor::BMR).relations.size());
  }
}

TEST_CASE("translate") {
  const GroupEntry& g4 = catalog().entry("G4");
  CHECK(translate(g4.er.word("a"), g4.phi2) == g4.bmr.word("s^-1 t^-1 s^-1"));
  CHECK(translate(g4.bmr.word("s"), g4.phi1) == g4.er.word("c"));
  CHECK(translate(Word{}, g4.phi1).empty());
  GenMap broken = g4.phi1;
  broken.images[1].reset();
  try {
    translate(g4.bmr.word("s t"), broken);
    FAIL("expected CatalogError");
  } catch (const CatalogError& ex) {
    CHECK(std::string(ex.what()).find("'t'") != std::string::npos);
  }
}

TEST_CASE("catalog covers G4..G22 in numeric order with complete maps") {
  auto ids = catalog().ids();
  REQUIRE(ids.size() == 19);
  CHECK(ids.front() == "G4");
  CHECK(ids[6] == "G10");
  CHECK(ids.back() == "G22");
  for (const auto& id : ids) {
    const auto& e = catalog().entry(id);
    CHECK(e.phi1.images.size() == e.bmr.generators.size());
    CHECK(e.phi2.images.size() == e.er.generators.size());
    for (const auto& im : e.phi1.images) CHECK(im.has_value());
    for (const auto& im : e.phi2.images) CHECK(im.has_value());
    if (e.bmr.center_order && e.bmr.group_order) CHECK(e.bmr.group_order % e.bmr.center_order == 0);
  }
  CHECK(catalog().checksum().size() == 64);
  CHECK_THROWS_AS(catalog().entry("G3"), CatalogError);
}

TEST_CASE("serialize then parse is the identity on every entry") {
  for (const auto& id : catalog().ids()) {
    const GroupEntry& e = catalog().entry(id);
    GroupEntry back = parse_group_file(serialize_group(e), id);
    back.sha256 = e.sha256;
    CHECK(back == e);
    CHECK(serialize_group(back) == serialize_group(e));
  }
}

TEST_CASE("a modified file fails its checksum") {
  fs::path dir = copy_catalog("tamper");
  std::string text = slurp(dir / "G5.pres");
  text.replace(text.find("order = 72"), 10, "order = 73");
  std::ofstream(dir / "G5.pres") << text;
  CHECK_THROWS_AS(Catalog::load(dir.string()), CatalogError);
  fs::remove_all(dir);
}

TEST_CASE("unlisted files and missing manifests are rejected") {
  fs::path dir = copy_catalog("extra");
  fs::copy_file(dir / "G5.pres", dir / "G99.pres");
  CHECK_THROWS_AS(Catalog::load(dir.string()), CatalogError);
  fs::remove(dir / "G99.pres");
  CHECK_NOTHROW(Catalog::load(dir.string()));
  fs::remove(dir / "SHA256SUMS");
  CHECK_THROWS_AS(Catalog::load(dir.string()), CatalogError);
  fs::remove_all(dir);
  CHECK_THROWS_AS(Catalog::load("/nonexistent/catalog"), CatalogError);
}

TEST_CASE("malformed group files are rejected") {
  std::string good = slurp(fs::path(catalog().dir()) / "G6.pres");
  CHECK_NOTHROW(parse_group_file(good));

  std::string undeclared = good;
  undeclared.replace(undeclared.find("bmr: s t s t s t"), 16, "bmr: s t s q s t");
  CHECK_THROWS(parse_group_file(undeclared));

  std::string bad_center = good;
  bad_center.replace(bad_center.find("center_order = 4"), 16, "center_order = 5");
  CHECK_THROWS_AS(parse_group_file(bad_center), CatalogError);

  std::string no_phi = good.substr(0, good.find("[phi1]"));
  CHECK_THROWS_AS(parse_group_file(no_phi), CatalogError);
}

TEST_CASE("sha256") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
