#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace curveswarm::cli {

struct CriterionResult {
  std::string group;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct AcceptanceOptions {
  /// Directory holding sync.json and balance.json.
  std::filesystem::path config_dir;
  /// Skip the rose closed-loop scenarios and the dt-halving reruns.
  bool fast = false;
  /// Empty means every group: geometry, graph, sync, balance, properties.
  std::vector<std::string> groups;
};

std::vector<std::string> acceptance_groups();

/// Runs the selected groups. Config problems propagate as exceptions.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options);

/// One "PASS|FAIL  group  name  detail" line per criterion plus a summary.
void print_acceptance(std::ostream& out, const std::vector<CriterionResult>& results);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace curveswarm::cli
