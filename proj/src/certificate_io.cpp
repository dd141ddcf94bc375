#include <algorithm>
#include <sstream>
#include <tuple>

#include "bmr/hecke.hpp"

namespace bmr {

namespace {

template <class T, class Fmt>
void write_matrix(std::ostringstream& out, const SparseMatrix<T>& m, Fmt fmt) {
  std::vector<std::tuple<int, int, std::string>> triplets;
  for (std::size_t j = 0; j < m.cols.size(); ++j)
    for (const auto& [i, v] : m.cols[j]) triplets.emplace_back(i, static_cast<int>(j), fmt(v));
  std::sort(triplets.begin(), triplets.end());
  out << "nonzeros " << triplets.size() << "\n";
  for (const auto& [i, j, v] : triplets) out << i << ' ' << j << ' ' << v << "\n";
}

std::string letter_name(const std::vector<std::string>& gens, std::size_t col) {
  return gens.at(col / 2) + (col % 2 ? "^-1" : "");
}

}  // namespace

std::string serialize_certificate(const FreenessCertificate& cert) {
  std::ostringstream out;
  out << "certificate 1\n";
  out << "group " << cert.group << "\n";
  out << "mode " << to_string(cert.mode) << "\n";
  if (cert.mode == CoeffMode::ModP) {
    out << "seed " << cert.seed << "\n";
    out << "prime " << cert.prime << "\n";
    for (const auto& [name, v] : cert.point.assignment) out << "param " << name << ' ' << v << "\n";
  }
  out << "dimension " << cert.dim() << "\n";
  out << "rank " << cert.rank << "\n";
  out << "basis\n";
  for (std::size_t k = 0; k < cert.basis.size(); ++k)
    out << k << ' ' << format_word(cert.basis[k], cert.generators) << "\n";
  const std::size_t ncols = cert.mode == CoeffMode::ModP ? cert.modp.size() : cert.exact.size();
  for (std::size_t x = 0; x < ncols; ++x) {
    out << "matrix " << letter_name(cert.generators, x) << "\n";
    if (cert.mode == CoeffMode::ModP)
      write_matrix(out, cert.modp[x], [](std::uint64_t v) { return std::to_string(v); });
    else
      write_matrix(out, cert.exact[x], [](const LaurentPoly& v) { return v.str(); });
  }
  for (const auto& c : cert.checks) {
    out << "check " << c.name << ' ' << (c.pass ? "pass" : "fail");
    if (!c.detail.empty()) out << ' ' << c.detail;
    out << "\n";
  }
  return out.str();
}

}  // namespace bmr
