/**
 * @file cli.hpp
 * @brief Command layer of sddtool. Each command builds a registry problem,
 *        runs the library, writes CSV/JSON files and returns a RunReport.
 */
#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "sdd/io.hpp"

namespace sddtool {

/// Flags shared by every subcommand. Defaults are recorded in each report.
struct Options {
  std::string key;
  std::vector<std::string> param_kv;  // repeated --param name=value
  std::string params_doc;             // --params: JSON file path or inline object
  std::string out_dir = "out";
  std::vector<double> taus;
  double eps = 1e-4;
  double step = 1e-3;
  double tol_red = 1e-8;
  double margin = 1e-9;
  std::size_t grid = 256;
  double t_end = 1.0;       // horizon for plain integrations and red checks
  std::string which = "all";
  bool timing = false;
  bool parallel = true;
};

struct Verdict {
  std::string item;
  std::string verdict;
  bool pass = true;
  std::string detail;
};

struct RunReport {
  std::string command;
  std::string problem;
  sdd::ParamMap params;
  sdd::io::Json flags;
  std::vector<std::string> outputs;  // file names relative to the output directory
  std::vector<Verdict> verdicts;
  sdd::io::Json max_residuals = sdd::io::Json::object();
  sdd::io::Json details = sdd::io::Json::object();
  double wall_time = -1.0;  // seconds; serialized only when timing was requested

  [[nodiscard]] bool passed() const;
  [[nodiscard]] sdd::io::Json to_json() const;
};

/// Parses --param strings and the --params document into a registry parameter map.
[[nodiscard]] sdd::ParamMap collect_params(const Options& o);

[[nodiscard]] std::string cmd_list();
[[nodiscard]] RunReport cmd_verify(const Options& o);
[[nodiscard]] RunReport cmd_branches(const Options& o);
[[nodiscard]] RunReport cmd_classify(const Options& o);
[[nodiscard]] RunReport cmd_certify(const Options& o);
[[nodiscard]] RunReport cmd_export3d(const Options& o);
[[nodiscard]] RunReport cmd_sweep(const Options& o);

/// Full command line entry point. Returns 0 iff every verdict passes, 1 on a
/// failed verdict and 2 on usage or model errors.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace sddtool
