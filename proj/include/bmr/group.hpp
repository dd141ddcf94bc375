#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bmr/catalog.hpp"

namespace bmr {

class EnumerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Image of each point, 0-based.
using Perm = std::vector<int>;

/// Regular right action of a finite group on its elements (cosets of the trivial subgroup).
/// Column 2g is generator g, column 2g+1 its inverse. Coset 0 is the identity.
struct CosetTable {
  std::string group;
  std::vector<std::string> generators;
  std::size_t size = 0;
  /// action[col][coset]
  std::vector<Perm> action;

  std::size_t columns() const { return action.size(); }
};

struct EnumOptions {
  std::size_t max_cosets = 100000;
};

struct EnumStats {
  std::size_t max_live = 0;
  std::size_t total_defined = 0;
  std::size_t lookaheads = 0;
};

/// Hasler-Lindenberg-Todd style enumeration with lookahead. Cosets are
/// renumbered in breadth-first order afterwards, so the result is canonical.
/// Throws EnumerationError for braid-flavor input or when the cap is exceeded.
CosetTable enumerate(const Presentation& p, const EnumOptions& opts = {}, EnumStats* stats = nullptr);

Perm identity_perm(std::size_t n);
/// Apply a, then b.
Perm compose(const Perm& a, const Perm& b);
Perm invert(const Perm& a);
/// Least common multiple of the cycle lengths.
std::uint64_t perm_order(const Perm& a);
/// Action of w: coset c goes to c.w, reading w left to right.
Perm eval_word(const CosetTable& t, const Word& w);

struct CenterCheck {
  bool central = false;
  std::uint64_t order = 0;
};

CenterCheck center_check(const CosetTable& t, const Presentation& p);

struct RelationCheck {
  /// "phi1" or "phi2".
  std::string map;
  /// Relation in the source presentation, e.g. "s t s = t s t".
  std::string relation;
  bool pass = false;
};

struct RoundTripCheck {
  /// "phi2.phi1" on BMR generators or "phi1.phi2" on ER generators.
  std::string composite;
  std::string generator;
  bool pass = false;
};

struct IsoReport {
  std::string group;
  std::uint64_t bmr_order = 0;
  std::uint64_t er_order = 0;
  std::vector<RelationCheck> relations;
  std::vector<RoundTripCheck> round_trips;
  bool orders_equal = false;
  /// Set when a map is missing an image or enumeration failed.
  std::string error;

  bool pass() const;
  /// Human-readable list of failing items.
  std::vector<std::string> failures() const;
};

IsoReport verify_iso(const GroupEntry& e, const EnumOptions& opts = {});
/// Same checks with caller-supplied maps (used for negative controls).
IsoReport verify_iso(const GroupEntry& e, const GenMap& phi1, const GenMap& phi2, const EnumOptions& opts = {});

}  // namespace bmr
