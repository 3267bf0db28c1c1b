#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hkl/hkmodels.hpp"

namespace hkl {

inline constexpr std::string_view config_format = "hklattice-config/1";
inline constexpr int report_schema_version = 1;

// One lattice family as read from a config file. Basis vectors are always
// available as classes under their basis names.
struct LatticeConfig {
  std::string label;
  IntLattice lattice;
  std::map<std::string, IntVec> classes;  // extra named classes
  std::optional<std::vector<RatVec>> gluing;
  std::optional<WallProfile> profile;     // nullopt: default profile
  std::optional<std::string> plucker;     // class name
  std::map<std::string, IntMat> matrices;

  IntVec cls(const std::string& name) const;
  const IntMat& matrix(const std::string& name) const;
  std::optional<GluingSubgroup> gluing_subgroup() const;
  FamilyConfig family() const;  // needs an ns-role lattice and a plucker class
};

// Errors carry the field path and the line it was found on.
LatticeConfig parse_config(std::string_view text, const std::string& source = "<string>");
LatticeConfig load_config(const std::string& path);
std::string dump_config(const LatticeConfig& c);

std::vector<std::string> builtin_config_names();  // includes the unconfigured "c_nonsyz"
LatticeConfig builtin_config(const std::string& name);
std::string builtin_config_text(const std::string& name);

enum class CheckStatus { pass, fail, skipped, inconclusive };
std::string_view to_string(CheckStatus s);

struct Check {
  std::string id;
  std::string anchor;
  CheckStatus status = CheckStatus::fail;
  std::string computed;
  std::string expected;
  std::string provenance;  // paper | derived | trivial
};

struct ScenarioReport {
  std::string scenario;
  std::vector<Check> checks;
  // 0 all pass (skips allowed), 1 any failure, 2 inconclusive without failures
  int exit_code() const;
};

std::vector<std::string> builtin_scenarios();
// A built-in scenario name or a path to a config file.
ScenarioReport run_scenario(const std::string& name);

enum class ReportFormat { json, text };
std::string emit_report(const ScenarioReport& r, ReportFormat f);

// Row-major, "[[a,b],[c,d]]"; column j is the image of basis vector j.
std::string format_matrix(const IntMat& m);
std::string fixture_text();                 // the bundled fixture file
std::string reprint_fixtures();             // A, B, G1-G4 reprinted from the configs

}  // namespace hkl
