#pragma once

#include "lcw/io.hpp"
#include "lcw/levi_civita.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lcw::cli {

enum ExitCode { kOk = 0, kMathFailure = 1, kInputError = 2, kNonConvergence = 3 };

struct Options {
  std::string method = "auto";
  std::optional<double> tol;
  long max_iter = 10000;
  bool timings = false;
  std::vector<std::vector<double>> points;  // oracle evaluation points
};

struct Result {
  io::Json report;
  int exit_code = kOk;
};

Result run_check(const io::GeometrySpec& spec, const Options& opt);
Result run_connect(const io::GeometrySpec& spec, const Options& opt);
Result run_projections(const io::GeometrySpec& spec, const Options& opt);
Result run_oracle(const io::GeometrySpec& spec, const Options& opt);
Result run_junk(const io::GeometrySpec& spec, const Options& opt);
Result run_compare(const io::GeometrySpec& spec, const Options& opt);

// dispatch by command name; maps exceptions onto exit codes and an "error" report
Result run(const std::string& command, const std::string& spec_path, const Options& opt);

std::vector<double> parse_point(const std::string& text);

}  // namespace lcw::cli
