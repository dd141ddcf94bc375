#include "bmr/catalog.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#ifndef BMR_DEFAULT_CATALOG_DIR
#define BMR_DEFAULT_CATALOG_DIR "catalog"
#endif

namespace bmr {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

struct Line {
  int number;
  std::string section;
  std::string text;
};

class GroupFileParser {
 public:
  GroupFileParser(const std::string& text, std::string origin) : origin_(std::move(origin)) {
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int n = 0;
    while (std::getline(in, raw)) {
      ++n;
      std::string line = raw;
      if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') fail(n, "malformed section header");
        section = line.substr(1, line.size() - 2);
        static const std::set<std::string> known = {"meta", "generators", "orders", "relations",
                                                    "braid_relations", "center", "phi1", "phi2",
                                                    "spanning"};
        if (!known.count(section)) fail(n, "unknown section [" + section + "]");
        continue;
      }
      if (section.empty()) fail(n, "content before the first section");
      lines_.push_back({n, section, line});
    }
  }

  GroupEntry parse() {
    GroupEntry e;
    e.bmr.flavor = Flavor::BMR;
    e.er.flavor = Flavor::ER;

    for (const auto& l : in("generators")) {
      auto [flavor, rest] = flavored(l);
      pres(e, flavor).generators = split_ws(rest);
    }
    for (Presentation* p : {&e.bmr, &e.er}) {
      if (p->generators.empty()) fail(0, to_string(p->flavor) + " generators missing");
      p->orders.assign(p->generators.size(), 0);
    }

    for (const auto& l : in("meta")) {
      auto [key, value] = keyed(l);
      if (key == "group") {
        e.id = value;
      } else if (key == "order") {
        e.bmr.group_order = e.er.group_order = number(l, value);
      } else if (key == "center_order") {
        e.bmr.center_order = e.er.center_order = number(l, value);
      } else if (key == "classes") {
        e.bmr.classes = classes(l, e.bmr, value);
      } else if (key == "er_classes") {
        e.er.classes = classes(l, e.er, value);
      } else {
        fail(l.number, "unknown meta key '" + key + "'");
      }
    }
    if (e.id.empty()) fail(0, "meta group id missing");
    e.bmr.group = e.er.group = e.id;
    for (Presentation* p : {&e.bmr, &e.er}) {
      if (p->classes.empty())
        for (std::size_t g = 0; g < p->generators.size(); ++g) p->classes.push_back({static_cast<int>(g)});
    }

    for (const auto& l : in("orders")) {
      auto [flavor, rest] = flavored(l);
      Presentation& p = pres(e, flavor);
      auto toks = split_ws(rest);
      if (toks.size() % 2 != 0) fail(l.number, "orders come in 'generator order' pairs");
      for (std::size_t i = 0; i < toks.size(); i += 2) {
        int g = p.gen_index(toks[i]);
        if (g < 0) fail(l.number, "unknown generator '" + toks[i] + "'");
        p.orders[static_cast<std::size_t>(g)] = static_cast<int>(number(l, toks[i + 1]));
      }
    }

    for (const auto& l : in("relations")) {
      auto [flavor, rest] = flavored(l);
      Presentation& p = pres(e, flavor);
      auto pairs = relation(l, p, rest);
      p.relations.insert(p.relations.end(), pairs.begin(), pairs.end());
    }
    for (const auto& l : in("braid_relations")) {
      auto [flavor, rest] = flavored(l);
      if (flavor != Flavor::ER) fail(l.number, "braid_relations override is only for er");
      if (!e.er_braid_relations) e.er_braid_relations.emplace();
      auto pairs = relation(l, e.er, rest);
      e.er_braid_relations->insert(e.er_braid_relations->end(), pairs.begin(), pairs.end());
    }

    bool er_center = false;
    for (const auto& l : in("center")) {
      auto [flavor, rest] = flavored(l);
      pres(e, flavor).center = word(l, pres(e, flavor), rest);
      if (flavor == Flavor::ER) er_center = true;
    }

    e.phi1 = genmap(e.bmr, e.er, "phi1");
    e.phi2 = genmap(e.er, e.bmr, "phi2");
    if (!er_center) e.er.center = translate(e.bmr.center, e.phi1);

    auto sp = in("spanning");
    if (!sp.empty()) {
      SpanningRecipe r;
      for (const auto& l : sp) {
        if (l.text.rfind("term:", 0) == 0) {
          r.terms.push_back(trim(l.text.substr(5)));
          continue;
        }
        auto [key, value] = keyed(l);
        if (key == "status") {
          r.status = value;
        } else if (key == "z") {
          auto dots = value.find("..");
          if (dots == std::string::npos) fail(l.number, "z range must read 'a..b'");
          r.z_min = static_cast<int>(number(l, trim(value.substr(0, dots))));
          r.z_max = static_cast<int>(number(l, trim(value.substr(dots + 2))));
        } else {
          fail(l.number, "unknown spanning key '" + key + "'");
        }
      }
      if (r.status != "thesis" && r.status != "reconstructed")
        fail(0, "spanning status must be 'thesis' or 'reconstructed'");
      e.spanning = r;
    }
    return e;
  }

 private:
  std::vector<Line> in(const std::string& section) const {
    std::vector<Line> out;
    for (const auto& l : lines_)
      if (l.section == section) out.push_back(l);
    return out;
  }

  std::pair<Flavor, std::string> flavored(const Line& l) const {
    if (l.text.rfind("bmr:", 0) == 0) return {Flavor::BMR, trim(l.text.substr(4))};
    if (l.text.rfind("er:", 0) == 0) return {Flavor::ER, trim(l.text.substr(3))};
    fail(l.number, "expected a 'bmr:' or 'er:' prefix");
  }

  std::pair<std::string, std::string> keyed(const Line& l) const {
    auto eq = l.text.find('=');
    if (eq == std::string::npos) fail(l.number, "expected 'key = value'");
    return {trim(l.text.substr(0, eq)), trim(l.text.substr(eq + 1))};
  }

  static Presentation& pres(GroupEntry& e, Flavor f) { return f == Flavor::BMR ? e.bmr : e.er; }

  std::uint64_t number(const Line& l, const std::string& s) const {
    try {
      std::size_t used = 0;
      long long v = std::stoll(s, &used);
      if (used != s.size() || v < 0) throw std::invalid_argument(s);
      return static_cast<std::uint64_t>(v);
    } catch (const std::exception&) {
      fail(l.number, "expected a non-negative integer, got '" + s + "'");
    }
  }

  Word word(const Line& l, const Presentation& p, const std::string& text) const {
    try {
      return p.word(text);
    } catch (const WordError& err) {
      fail(l.number, err.what());
    }
  }

  std::vector<std::vector<int>> classes(const Line& l, const Presentation& p, const std::string& text) const {
    std::vector<std::vector<int>> out;
    std::string part;
    std::istringstream in(text);
    while (std::getline(in, part, '|')) {
      std::vector<int> cls;
      for (const auto& name : split_ws(part)) {
        int g = p.gen_index(name);
        if (g < 0) fail(l.number, "unknown generator '" + name + "' in classes");
        cls.push_back(g);
      }
      if (cls.empty()) fail(l.number, "empty conjugacy class");
      out.push_back(cls);
    }
    return out;
  }

  std::vector<RelationPair> relation(const Line& l, const Presentation& p, const std::string& text) const {
    auto eq = text.find('=');
    if (eq == std::string::npos || text.find('=', eq + 1) != std::string::npos)
      fail(l.number, "relation must read 'lhs = rhs'");
    Word lhs = word(l, p, trim(text.substr(0, eq)));
    std::string rhs_text = trim(text.substr(eq + 1));
    if (rhs_text == "central") {
      std::vector<RelationPair> out;
      for (std::size_t g = 0; g < p.generators.size(); ++g) {
        Word gw({Letter{static_cast<int>(g), 1}});
        out.push_back({concat(lhs, gw), concat(gw, lhs)});
      }
      return out;
    }
    return {RelationPair{lhs, word(l, p, rhs_text)}};
  }

  GenMap genmap(const Presentation& src, const Presentation& dst, const std::string& section) const {
    GenMap m;
    m.source = src.flavor;
    m.target = dst.flavor;
    m.source_generators = src.generators;
    m.target_generators = dst.generators;
    m.images.assign(src.generators.size(), std::nullopt);
    for (const auto& l : in(section)) {
      auto arrow = l.text.find("->");
      if (arrow == std::string::npos) fail(l.number, "map line must read 'gen -> word'");
      std::string name = trim(l.text.substr(0, arrow));
      int g = src.gen_index(name);
      if (g < 0) fail(l.number, "unknown source generator '" + name + "'");
      m.images[static_cast<std::size_t>(g)] = word(l, dst, trim(l.text.substr(arrow + 2)));
    }
    return m;
  }

  [[noreturn]] void fail(int line, const std::string& what) const {
    throw CatalogError(origin_ + (line > 0 ? ":" + std::to_string(line) : "") + ": " + what);
  }

  std::string origin_;
  std::vector<Line> lines_;
};

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw CatalogError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string order_line(const Presentation& p) {
  std::string out;
  for (std::size_t g = 0; g < p.generators.size(); ++g) {
    if (p.orders[g] == 0) continue;
    if (!out.empty()) out += ' ';
    out += p.generators[g] + ' ' + std::to_string(p.orders[g]);
  }
  return out;
}

std::string classes_line(const Presentation& p) {
  std::string out;
  for (const auto& cls : p.classes) {
    if (!out.empty()) out += " | ";
    for (std::size_t i = 0; i < cls.size(); ++i) {
      if (i) out += ' ';
      out += p.generators[static_cast<std::size_t>(cls[i])];
    }
  }
  return out;
}

}  // namespace

std::string to_string(Flavor f) { return f == Flavor::BMR ? "bmr" : "er"; }

int Presentation::gen_index(const std::string& name) const {
  for (std::size_t g = 0; g < generators.size(); ++g)
    if (generators[g] == name) return static_cast<int>(g);
  return -1;
}

std::vector<Word> Presentation::relators() const {
  std::vector<Word> out;
  for (std::size_t g = 0; g < orders.size(); ++g)
    if (orders[g] > 0) out.push_back(Word({Letter{static_cast<int>(g), orders[g]}}));
  for (const auto& r : relations) {
    Word w = concat(r.lhs, inverse(r.rhs));
    if (!w.empty()) out.push_back(w);
  }
  return out;
}

Word translate(const Word& w, const GenMap& map) {
  Word out;
  for (const auto& l : w.letters) {
    const auto& img = map.images.at(static_cast<std::size_t>(l.gen));
    if (!img)
      throw CatalogError("generator '" + map.source_generators.at(static_cast<std::size_t>(l.gen)) +
                         "' has no image");
    out = concat(out, power(*img, l.exp));
  }
  return out;
}

GroupEntry parse_group_file(const std::string& text, const std::string& origin) {
  GroupEntry e = GroupFileParser(text, origin).parse();
  validate(e);
  return e;
}

void validate(const GroupEntry& e) {
  auto bad = [&](const std::string& what) { throw CatalogError(e.id + ": " + what); };
  for (const Presentation* p : {&e.bmr, &e.er}) {
    if (p->orders.size() != p->generators.size()) bad("order list length mismatch");
    std::set<std::string> names(p->generators.begin(), p->generators.end());
    if (names.size() != p->generators.size()) bad("duplicate generator names");
    if (p->group_order && p->center_order && p->group_order % p->center_order != 0)
      bad("center order does not divide group order");
    std::vector<int> seen(p->generators.size(), 0);
    for (const auto& cls : p->classes)
      for (int g : cls) ++seen.at(static_cast<std::size_t>(g));
    for (int s : seen)
      if (s != 1) bad(to_string(p->flavor) + " classes do not partition the generators");
    for (const auto& cls : p->classes)
      for (int g : cls)
        if (p->orders[static_cast<std::size_t>(g)] != p->orders[static_cast<std::size_t>(cls[0])])
          bad("generators of one class have different orders");
  }
  for (int o : e.bmr.orders)
    if (o < 2) bad("every bmr generator needs an order of at least 2");
  for (const GenMap* m : {&e.phi1, &e.phi2})
    for (std::size_t g = 0; g < m->images.size(); ++g)
      if (!m->images[g]) bad("map has no image for generator '" + m->source_generators[g] + "'");
  if (e.spanning && e.spanning->z_min > e.spanning->z_max) bad("empty z range");
}

std::string serialize_group(const GroupEntry& e) {
  std::ostringstream out;
  out << "[meta]\n";
  out << "group = " << e.id << "\n";
  out << "order = " << e.bmr.group_order << "\n";
  out << "center_order = " << e.bmr.center_order << "\n";
  out << "classes = " << classes_line(e.bmr) << "\n";
  out << "er_classes = " << classes_line(e.er) << "\n";
  out << "\n[generators]\n";
  for (const Presentation* p : {&e.bmr, &e.er}) {
    out << to_string(p->flavor) << ":";
    for (const auto& g : p->generators) out << ' ' << g;
    out << "\n";
  }
  out << "\n[orders]\n";
  for (const Presentation* p : {&e.bmr, &e.er}) {
    std::string ol = order_line(*p);
    if (!ol.empty()) out << to_string(p->flavor) << ": " << ol << "\n";
  }
  out << "\n[relations]\n";
  for (const Presentation* p : {&e.bmr, &e.er})
    for (const auto& r : p->relations)
      out << to_string(p->flavor) << ": " << p->format(r.lhs) << " = " << p->format(r.rhs) << "\n";
  if (e.er_braid_relations) {
    out << "\n[braid_relations]\n";
    for (const auto& r : *e.er_braid_relations)
      out << "er: " << e.er.format(r.lhs) << " = " << e.er.format(r.rhs) << "\n";
  }
  out << "\n[center]\n";
  out << "bmr: " << e.bmr.format(e.bmr.center) << "\n";
  out << "er: " << e.er.format(e.er.center) << "\n";
  for (const GenMap* m : {&e.phi1, &e.phi2}) {
    out << "\n[" << (m == &e.phi1 ? "phi1" : "phi2") << "]\n";
    for (std::size_t g = 0; g < m->images.size(); ++g)
      out << m->source_generators[g] << " -> " << format_word(*m->images[g], m->target_generators) << "\n";
  }
  if (e.spanning) {
    out << "\n[spanning]\n";
    out << "status = " << e.spanning->status << "\n";
    out << "z = " << e.spanning->z_min << ".." << e.spanning->z_max << "\n";
    for (const auto& t : e.spanning->terms) out << "term: " << t << "\n";
  }
  return out.str();
}

Presentation braid_flavor(const GroupEntry& e, Flavor f) {
  Presentation p = f == Flavor::BMR ? e.bmr : e.er;
  p.braid = true;
  std::fill(p.orders.begin(), p.orders.end(), 0);
  if (f == Flavor::ER && e.er_braid_relations) p.relations = *e.er_braid_relations;
  return p;
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw CatalogError("SHA-256 computation failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

int group_number(const std::string& id) {
  if (id.size() < 2 || (id[0] != 'G' && id[0] != 'g')) return -1;
  for (std::size_t i = 1; i < id.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(id[i]))) return -1;
  return std::stoi(id.substr(1));
}

std::string Catalog::default_dir() {
  if (const char* env = std::getenv("BMR_CATALOG_DIR"); env && *env) return env;
  return BMR_DEFAULT_CATALOG_DIR;
}

Catalog Catalog::load(const std::string& dir) {
  namespace fs = std::filesystem;
  Catalog c;
  c.dir_ = dir;
  fs::path root(dir);
  fs::path manifest = root / "SHA256SUMS";
  if (!fs::exists(manifest)) throw CatalogError("catalog manifest missing: " + manifest.string());
  std::string manifest_text = read_file(manifest);
  c.checksum_ = sha256_hex(manifest_text);

  std::set<std::string> listed;
  std::istringstream in(manifest_text);
  std::string line;
  while (std::getline(in, line)) {
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks.size() != 2) throw CatalogError("malformed manifest line: " + line);
    std::string name = toks[1];
    if (!name.empty() && name[0] == '*') name.erase(0, 1);
    listed.insert(name);
    std::string text = read_file(root / name);
    std::string digest = sha256_hex(text);
    if (digest != toks[0]) throw CatalogError("checksum mismatch for " + name);
    GroupEntry e = parse_group_file(text, name);
    e.sha256 = digest;
    if (c.entries_.count(e.id)) throw CatalogError("duplicate group " + e.id);
    c.entries_.emplace(e.id, std::move(e));
  }
  for (const auto& f : fs::directory_iterator(root))
    if (f.path().extension() == ".pres" && !listed.count(f.path().filename().string()))
      throw CatalogError("catalog file not listed in manifest: " + f.path().filename().string());
  return c;
}

const GroupEntry& Catalog::entry(const std::string& id) const {
  auto it = entries_.find(id);
  if (it == entries_.end()) throw CatalogError("unknown group '" + id + "'");
  return it->second;
}

Presentation Catalog::get(const std::string& id, Flavor f, bool braid) const {
  const GroupEntry& e = entry(id);
  if (braid) return braid_flavor(e, f);
  return f == Flavor::BMR ? e.bmr : e.er;
}

std::vector<std::string> Catalog::ids() const {
  std::vector<std::string> out;
  for (const auto& [id, e] : entries_) out.push_back(id);
  std::sort(out.begin(), out.end(),
            [](const std::string& a, const std::string& b) { return group_number(a) < group_number(b); });
  return out;
}

}  // namespace bmr
