#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bmr/word.hpp"

namespace bmr {

class CatalogError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Flavor { BMR, ER };

std::string to_string(Flavor f);

struct RelationPair {
  Word lhs;
  Word rhs;
  bool operator==(const RelationPair&) const = default;
};

struct Presentation {
  std::string group;
  Flavor flavor = Flavor::BMR;
  /// Braid flavor: every generator order is 0.
  bool braid = false;
  std::vector<std::string> generators;
  /// Per generator; 0 means no order relation.
  std::vector<int> orders;
  std::vector<RelationPair> relations;
  Word center;
  /// 0 when unknown.
  std::uint64_t center_order = 0;
  std::uint64_t group_order = 0;
  /// Partition of generator indices into conjugacy classes.
  std::vector<std::vector<int>> classes;

  int gen_index(const std::string& name) const;
  Word word(const std::string& text) const { return parse_word(text, generators); }
  std::string format(const Word& w) const { return format_word(w, generators); }
  /// Relators used by enumeration: lhs rhs^-1 for every pair plus g^e for positive orders.
  std::vector<Word> relators() const;

  bool operator==(const Presentation&) const = default;
};

struct GenMap {
  Flavor source = Flavor::BMR;
  Flavor target = Flavor::ER;
  std::vector<std::string> source_generators;
  std::vector<std::string> target_generators;
  /// Indexed by source generator.
  std::vector<std::optional<Word>> images;

  bool operator==(const GenMap&) const = default;
};

/// Letter-by-letter substitution; throws CatalogError naming a generator without an image.
Word translate(const Word& w, const GenMap& map);

struct SpanningRecipe {
  /// "thesis" or "reconstructed".
  std::string status;
  int z_min = 0;
  int z_max = 0;
  /// Each term is text like `<s> t^-1 <s>`: `<g>` ranges over the monomial basis of g's subalgebra.
  std::vector<std::string> terms;

  bool operator==(const SpanningRecipe&) const = default;
};

struct GroupEntry {
  std::string id;
  Presentation bmr;
  Presentation er;
  /// Optional ER relations replacing er.relations in braid flavor.
  std::optional<std::vector<RelationPair>> er_braid_relations;
  GenMap phi1;
  GenMap phi2;
  std::optional<SpanningRecipe> spanning;
  std::string sha256;

  bool operator==(const GroupEntry&) const = default;
};

/// Parses one group file.
GroupEntry parse_group_file(const std::string& text, const std::string& origin = "<memory>");
/// Inverse of parse_group_file; central shorthands come back expanded.
std::string serialize_group(const GroupEntry& e);
/// Checks the structural invariants; throws CatalogError.
void validate(const GroupEntry& e);

/// Same relations with every order dropped (ER uses its override section when present).
Presentation braid_flavor(const GroupEntry& e, Flavor f);

std::string sha256_hex(const std::string& data);

class Catalog {
 public:
  /// Loads every *.pres file listed in SHA256SUMS under `dir`, verifying checksums.
  static Catalog load(const std::string& dir);
  /// Directory from BMR_CATALOG_DIR, else the build-time default.
  static std::string default_dir();

  const GroupEntry& entry(const std::string& id) const;
  Presentation get(const std::string& id, Flavor f, bool braid = false) const;
  bool has(const std::string& id) const { return entries_.count(id) != 0; }
  /// Ids in numeric order G4, G5, ..., G22.
  std::vector<std::string> ids() const;
  /// SHA-256 of the manifest, which pins every file.
  const std::string& checksum() const { return checksum_; }
  const std::string& dir() const { return dir_; }

 private:
  std::map<std::string, GroupEntry> entries_;
  std::string checksum_;
  std::string dir_;
};

/// Numeric part of "G13" for sorting; -1 if malformed.
int group_number(const std::string& id);

}  // namespace bmr
