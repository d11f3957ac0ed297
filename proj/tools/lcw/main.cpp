#include "pipeline.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  using namespace lcw::cli;
  CLI::App app{"Levi-Civita connections on noncommutative one-forms"};
  app.require_subcommand(1);

  Options opt;
  std::string spec, out;
  std::vector<std::string> points;

  auto add_common = [&](CLI::App* sub, bool method) {
    sub->add_option("spec", spec, "geometry document (JSON)")->required();
    if (method) sub->add_option("--method", opt.method, "construction method");
    sub->add_option("--tol", opt.tol, "tolerance for floating-point checks");
    sub->add_option("--max-iter", opt.max_iter, "iteration cap for series and projections");
    sub->add_option("--out", out, "write the report here instead of stdout");
    sub->add_flag("--timings", opt.timings, "include wall-clock timings in the report");
  };
  add_common(app.add_subcommand("check", "validate a geometry"), false);
  add_common(app.add_subcommand("connect", "construct and certify the Levi-Civita connection"), true);
  add_common(app.add_subcommand("projections", "limit projection and Friedrichs angle of P and Q"), true);
  auto* oracle = app.add_subcommand("oracle", "classical Christoffel symbols of a grid metric");
  add_common(oracle, false);
  oracle->add_option("--point", points, "evaluation point x,y,z (repeatable)");
  add_common(app.add_subcommand("junk", "junk tensors of the test generators"), false);
  add_common(app.add_subcommand("compare", "engine connection against the classical oracle"), true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kInputError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  Result r;
  try {
    for (const auto& p : points) opt.points.push_back(parse_point(p));
    r = run(command, spec, opt);
  } catch (const lcw::io::InputError& e) {
    r.exit_code = kInputError;
    r.report = lcw::io::Json{{"command", command}, {"error", e.what()}};
    r.report["exit_code"] = r.exit_code;
  }

  const std::string text = r.report.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out);
    if (!f) {
      std::cerr << "cannot write " << out << "\n";
      return kInputError;
    }
    f << text;
  }
  if (r.report.contains("error")) std::cerr << "lcw: " << r.report["error"].get<std::string>() << "\n";
  return r.exit_code;
}
