#include "bmr/group.hpp"

namespace bmr {

namespace {

// Every defining relation of p as (lhs, rhs), order relations included.
std::vector<RelationPair> defining_pairs(const Presentation& p) {
  std::vector<RelationPair> out;
  for (std::size_t g = 0; g < p.orders.size(); ++g)
    if (p.orders[g] > 0) out.push_back({Word({Letter{static_cast<int>(g), p.orders[g]}}), Word()});
  out.insert(out.end(), p.relations.begin(), p.relations.end());
  return out;
}

void check_relations(const Presentation& src, const GenMap& map, const CosetTable& target,
                     const std::string& name, IsoReport& report) {
  for (const auto& r : defining_pairs(src)) {
    RelationCheck c;
    c.map = name;
    c.relation = src.format(r.lhs) + " = " + src.format(r.rhs);
    c.pass = eval_word(target, translate(r.lhs, map)) == eval_word(target, translate(r.rhs, map));
    report.relations.push_back(std::move(c));
  }
}

void check_round_trip(const Presentation& p, const GenMap& first, const GenMap& second,
                      const CosetTable& table, const std::string& name, IsoReport& report) {
  for (std::size_t g = 0; g < p.generators.size(); ++g) {
    Word gw({Letter{static_cast<int>(g), 1}});
    RoundTripCheck c;
    c.composite = name;
    c.generator = p.generators[g];
    c.pass = eval_word(table, translate(translate(gw, first), second)) == table.action[2 * g];
    report.round_trips.push_back(std::move(c));
  }
}

}  // namespace

bool IsoReport::pass() const {
  if (!error.empty() || !orders_equal) return false;
  for (const auto& r : relations)
    if (!r.pass) return false;
  for (const auto& r : round_trips)
    if (!r.pass) return false;
  return !relations.empty() && !round_trips.empty();
}

std::vector<std::string> IsoReport::failures() const {
  std::vector<std::string> out;
  if (!error.empty()) out.push_back(error);
  if (!orders_equal)
    out.push_back("orders differ: bmr " + std::to_string(bmr_order) + ", er " + std::to_string(er_order));
  for (const auto& r : relations)
    if (!r.pass) out.push_back(r.map + " does not preserve relation " + r.relation);
  for (const auto& r : round_trips)
    if (!r.pass) out.push_back(r.composite + " moves generator " + r.generator);
  return out;
}

IsoReport verify_iso(const GroupEntry& e, const EnumOptions& opts) { return verify_iso(e, e.phi1, e.phi2, opts); }

IsoReport verify_iso(const GroupEntry& e, const GenMap& phi1, const GenMap& phi2, const EnumOptions& opts) {
  IsoReport report;
  report.group = e.id;
  try {
    CosetTable bmr = enumerate(e.bmr, opts);
    CosetTable er = enumerate(e.er, opts);
    report.bmr_order = bmr.size;
    report.er_order = er.size;
    report.orders_equal = bmr.size == er.size;
    check_relations(e.bmr, phi1, er, "phi1", report);
    check_relations(e.er, phi2, bmr, "phi2", report);
    check_round_trip(e.bmr, phi1, phi2, bmr, "phi2.phi1", report);
    check_round_trip(e.er, phi2, phi1, er, "phi1.phi2", report);
  } catch (const std::exception& ex) {
    report.error = ex.what();
  }
  return report;
}

}  // namespace bmr
