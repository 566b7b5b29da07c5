#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "mrd/classifier.hpp"
#include "mrd/constructions.hpp"

namespace mrd {

// One record of a catalog file:
//
//   name <unique name>
//   source <tag>                 (optional)
//   <q> <n>
//   meta key=value key=value     (optional, repeatable)
//   n matrices of n digit rows, blank lines between them allowed
struct CatalogEntry {
  std::string name;
  std::string source;
  int q = 2;
  int n = 0;
  std::vector<MatrixGF> basis;
  std::map<std::string, std::string> meta;
  int line = 0;  // line of the `name` record

  Presemifield presemifield() const;
};

struct CatalogError : std::runtime_error {
  CatalogError(const std::string& what, int line) : std::runtime_error(what), line(line) {}
  int line = 0;
};

// Parses and validates every entry: the basis must span n dimensions, every
// nonzero element must be invertible, and names and spans must be unique.
std::vector<CatalogEntry> parse_catalog(const std::string& text, const std::string& origin = "catalog");
std::vector<CatalogEntry> load_catalog(const std::string& path);
std::string format_catalog(const std::vector<CatalogEntry>& entries, const std::string& comment = "");

std::vector<Presemifield> presemifields(const std::vector<CatalogEntry>& entries);

// $MRD_CATALOG_DIR if set, otherwise the bundled data directory.
std::string catalog_dir();
// <catalog_dir>/order<q^n>.txt
std::string bundled_catalog_path(int q, int n);

struct FamilyAttribution {
  std::string entry;
  std::string claim;  // e.g. "family=field", "left_idealiser=9"
  bool verified = false;
  std::string detail;
};

// Re-checks the checkable metadata claims (field family, idealiser orders,
// transpose and dual partners).
std::vector<FamilyAttribution> verify_catalog_against_families(const std::vector<CatalogEntry>& entries);

// Isotopy class representatives from a from-scratch search, named and
// annotated with Knuth orbit, transpose/dual partners and idealiser orders.
std::vector<CatalogEntry> build_catalog(int q, int n, const ExtensionOptions& opt = {});

struct ReportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kReportVersion = 1;

std::string report_to_json(const Classification& c);
Classification report_from_json(const std::string& text);
void save_report(const Classification& c, const std::string& path);
Classification load_report(const std::string& path);

std::string census_to_json(const Census& c);

}  // namespace mrd
