#include "pipeline.hpp"

#include "lcw/flat.hpp"
#include "lcw/oracle.hpp"

#include <chrono>
#include <set>
#include <cmath>
#include <sstream>

namespace lcw::cli {

using io::Json;

namespace {

class Stopwatch {
public:
  explicit Stopwatch(bool on) : on_(on), t0_(std::chrono::steady_clock::now()) {}
  void lap(const std::string& what) {
    if (!on_) return;
    auto t = std::chrono::steady_clock::now();
    laps_[what] = std::chrono::duration<double, std::milli>(t - t0_).count();
    t0_ = t;
  }
  void attach(Json& report) const {
    if (on_) report["timings_ms"] = laps_;
  }

private:
  bool on_;
  std::chrono::steady_clock::time_point t0_;
  Json laps_ = Json::object();
};

Json geometry_echo(const Geometry& g) {
  const Algebra& a = *g.algebra;
  Json j;
  j["name"] = g.name;
  j["backend"] = to_string(a.backend());
  if (a.theta()) j["theta"] = to_string(*a.theta());
  else j["theta"] = a.theta_value();
  j["field"] = a.exact() ? "exact" : "approx";
  if (a.backend() == Backend::grid) j["grid"] = a.grid_shape()->sizes();
  if (a.backend() == Backend::fuzzy) j["q"] = a.modulus();
  j["frame_size"] = g.frame->size();
  j["closed_frame"] = g.closed;
  j["psi"] = g.psi_source;
  return j;
}

Json validation_json(const ValidationReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    Json j{{"name", c.name}, {"passed", c.passed}, {"exact", c.exact}, {"residual", io::number(c.residual)}};
    if (!c.note.empty()) j["note"] = c.note;
    checks.push_back(j);
  }
  return Json{{"passed", r.passed()}, {"checks", checks}};
}

Json projection_json(const TwoProjectionReport& r, double braid_residual) {
  Json j;
  j["method"] = r.method;
  j["s3_relation"] = r.s3;
  j["braid_residual"] = io::number(braid_residual);
  j["concordant"] = r.concordant;
  j["pi_rank"] = io::number(r.pi_rank);
  j["friedrichs_angle"] = io::number(r.friedrichs_angle);
  j["angle_source"] = r.angle_from_group ? "group" : "flat";
  if (r.method == "iterative") {
    j["iterations"] = r.iterations;
    j["residual"] = io::number(r.residual);
  }
  return j;
}

Json certification_json(const CertificationReport& c) {
  Json res = Json::object();
  for (const auto& [k, v] : c.residuals) res[k] = io::number(v);
  return Json{{"passed", c.all()},
              {"exact", c.exact},
              {"hermitian", c.hermitian},
              {"torsion_free", c.torsion_free},
              {"dag_concordant", c.dag_concordant},
              {"bimodule", c.bimodule},
              {"metric_compatible", c.metric_compatible},
              {"residuals", res}};
}

double tol_for(const Geometry& g, const Options& opt) { return opt.tol.value_or(g.tolerance); }

ProjectionMethod projection_method(const std::string& m) {
  if (m == "auto") return ProjectionMethod::automatic;
  if (m == "iterative") return ProjectionMethod::iterative;
  if (m == "group" || m == "group-average") return ProjectionMethod::group_average;
  throw io::InputError("unknown projection method \"" + m + "\" (auto, iterative, group)");
}

struct Built {
  GeometryPtr g;
  ValidationReport validation;
};

Built build_and_validate(const io::GeometrySpec& spec) {
  Built b;
  b.g = io::build(spec);
  b.validation = validate(*b.g);
  return b;
}

double norm_or_zero(const TensorElement& t) { return t.is_zero() ? 0.0 : tensor_norm(t); }

struct ConnectionRun {
  Connection c;
  ProjectionPair pq;
  TwoProjectionReport proj;
  double braid = 0;
  Json info;
};

ConnectionRun construct(const GeometryPtr& g, const Options& opt, Stopwatch& sw) {
  static const std::set<std::string> methods = {"auto", "series", "closed", "grassmann"};
  if (!methods.count(opt.method)) throw io::InputError("unknown connection method \"" + opt.method + "\" (auto, series, closed, grassmann)");
  const double tol = tol_for(*g, opt);
  ConnectionRun r{grassmann(g), build_PQ(g->psi), {}, 0, Json::object()};
  braid_relation(r.pq.P, r.pq.Q, tol, &r.braid);
  r.proj = limit_projection(r.pq.P, r.pq.Q, ProjectionMethod::automatic, std::min(tol, 1e-12), opt.max_iter);
  sw.lap("projections");
  if (opt.method == "grassmann") return r;
  auto series = [&] {
    SeriesInfo si;
    Connection c = connection_form_series(g, r.pq, r.proj, std::min(tol, 1e-12), opt.max_iter, &si);
    r.info["series_terms"] = si.terms;
    r.info["geometric_tail"] = si.geometric_tail;
    return c;
  };
  if (opt.method == "series") {
    r.c = series();
  } else if (opt.method == "closed") {
    r.c = connection_form_closed(g, r.pq, tol);
  } else {
    try {
      r.c = connection_form_closed(g, r.pq, tol);
    } catch (const HypothesisFailure& e) {
      r.info["closed_form_skipped"] = e.what();
      r.c = series();
    }
    if (r.c.method == "closed" && r.proj.pi) {
      Connection s = series();
      ComparisonReport cmp = compare_mod_sym3(s, r.c, *r.proj.pi, tol);
      r.info["series_agrees"] = cmp.equivalent;
      r.info["series_difference"] = io::number(cmp.residual);
    }
  }
  sw.lap("connection");
  return r;
}

Json connection_json(const ConnectionRun& r) {
  Json j;
  j["method"] = r.c.method;
  for (const auto& [k, v] : r.info.items()) j[k] = v;
  j["A_zero"] = r.c.A.is_zero();
  j["A_norm"] = io::number(norm_or_zero(r.c.A));
  j["A"] = io::encode_tensor(r.c.A);
  return j;
}

std::string generator_label(int k, int axes) {
  if (k < 2 * axes) return "U" + std::to_string(k / 2) + (k % 2 ? "*" : "");
  return "U0 U1 + 2";
}

}  // namespace

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw io::InputError("malformed point \"" + text + "\"");
    }
  }
  if (v.empty()) throw io::InputError("empty point");
  return v;
}

Result run_check(const io::GeometrySpec& spec, const Options& opt) {
  Stopwatch sw(opt.timings);
  Built b = build_and_validate(spec);
  sw.lap("validate");
  Result r;
  r.report["command"] = "check";
  r.report["geometry"] = geometry_echo(*b.g);
  r.report["validation"] = validation_json(b.validation);
  r.exit_code = b.validation.passed() ? kOk : kMathFailure;
  sw.attach(r.report);
  return r;
}

Result run_connect(const io::GeometrySpec& spec, const Options& opt) {
  Stopwatch sw(opt.timings);
  Built b = build_and_validate(spec);
  sw.lap("validate");
  Result r;
  r.report["command"] = "connect";
  r.report["geometry"] = geometry_echo(*b.g);
  r.report["validation"] = validation_json(b.validation);
  if (!b.validation.passed()) {
    r.exit_code = kMathFailure;
    r.report["error"] = "geometry failed validation";
    return r;
  }
  ConnectionRun run = construct(b.g, opt, sw);
  r.report["projections"] = projection_json(run.proj, run.braid);
  r.report["connection"] = connection_json(run);
  const double tol = tol_for(*b.g, opt);
  CertificationReport cert = certify(run.c, run.pq, tol);
  sw.lap("certify");
  r.report["certification"] = certification_json(cert);
  TensorElement tt = torsion_tensor(run.c, run.pq);
  r.report["torsion"] = Json{{"zero", near_zero(tt, tol)}, {"norm", io::number(norm_or_zero(tt))}};
  double curv = 0;
  for (int j = 0; j < b.g->frame->size(); ++j)
    curv = std::max(curv, norm_or_zero(curvature(run.c, TensorElement::basis(b.g->frame, {j}))));
  r.report["curvature"] = Json{{"zero", b.g->algebra->exact() ? curv == 0.0 : curv <= tol}, {"max_norm", io::number(curv)}};
  sw.lap("torsion_curvature");
  r.exit_code = cert.all() ? kOk : kMathFailure;
  sw.attach(r.report);
  return r;
}

Result run_projections(const io::GeometrySpec& spec, const Options& opt) {
  Stopwatch sw(opt.timings);
  GeometryPtr g = io::build(spec);
  ProjectionPair pq = build_PQ(g->psi);
  const double tol = tol_for(*g, opt);
  double braid = 0;
  braid_relation(pq.P, pq.Q, tol, &braid);
  TwoProjectionReport rep =
      limit_projection(pq.P, pq.Q, projection_method(opt.method), std::min(tol, 1e-12), opt.max_iter);
  sw.lap("projections");
  Result r;
  r.report["command"] = "projections";
  r.report["geometry"] = geometry_echo(*g);
  r.report["projections"] = projection_json(rep, braid);
  r.exit_code = rep.concordant ? kOk : kMathFailure;
  sw.attach(r.report);
  return r;
}

Result run_oracle(const io::GeometrySpec& spec, const Options& opt) {
  if (!spec.metric) throw io::InputError("the oracle needs a grid geometry with a diagonal metric");
  const oracle::MetricField& m = *spec.metric;
  std::vector<std::vector<double>> pts = opt.points;
  if (pts.empty()) pts.push_back(std::vector<double>(m.dim(), 0.0));
  Result r;
  r.report["command"] = "oracle";
  r.report["name"] = spec.input.name;
  r.report["index_order"] = "christoffel[nu][mu][rho] = Gamma^nu_{mu rho}";
  Json out = Json::array();
  for (const auto& x : pts) {
    if (static_cast<int>(x.size()) != m.dim()) throw io::InputError("point dimension does not match the metric");
    oracle::Table3 t = oracle::christoffel(m, x);
    Json gam = Json::array();
    for (int nu = 0; nu < m.dim(); ++nu) {
      Json a = Json::array();
      for (int mu = 0; mu < m.dim(); ++mu) {
        Json b = Json::array();
        for (int rho = 0; rho < m.dim(); ++rho) b.push_back(io::number(t(nu, mu, rho)));
        a.push_back(b);
      }
      gam.push_back(a);
    }
    out.push_back(Json{{"point", x}, {"christoffel", gam}});
  }
  r.report["points"] = out;
  return r;
}

Result run_junk(const io::GeometrySpec& spec, const Options& opt) {
  Stopwatch sw(opt.timings);
  GeometryPtr g = io::build(spec);
  const double tol = tol_for(*g, opt);
  auto gens = test_generators(g->algebra);
  auto junk = junk_from_connection(*g, gens);
  Result r;
  r.report["command"] = "junk";
  r.report["geometry"] = geometry_echo(*g);
  Json list = Json::array();
  bool ok = true;
  for (size_t k = 0; k < junk.size(); ++k) {
    const TensorElement& j = junk[k];
    TensorElement off = j - g->psi.apply(j);
    bool in_image = near_zero(off, tol);
    ok = ok && in_image;
    Json e{{"generator", generator_label(static_cast<int>(k), g->axes())},
           {"zero", j.is_zero()},
           {"in_image_of_psi", in_image},
           {"residual", io::number(norm_or_zero(off))}};
    if (g->closed) {
      TensorElement gi = grassmann_image(*g, differential0(*g, gens[k]));
      bool gi_ok = near_zero(gi - g->psi.apply(gi), tol);
      ok = ok && gi_ok;
      e["grassmann_image_in_image_of_psi"] = gi_ok;
    }
    list.push_back(e);
  }
  sw.lap("junk");
  r.report["generators"] = list;
  r.report["passed"] = ok;
  r.exit_code = ok ? kOk : kMathFailure;
  sw.attach(r.report);
  return r;
}

Result run_compare(const io::GeometrySpec& spec, const Options& opt) {
  if (!spec.metric) throw io::InputError("compare needs a commutative grid geometry with a diagonal metric");
  Stopwatch sw(opt.timings);
  Built b = build_and_validate(spec);
  Options o = opt;
  if (o.method == "grassmann") throw io::InputError("compare needs a Levi-Civita method");
  ConnectionRun run = construct(b.g, o, sw);
  const double tol = opt.tol.value_or(1e-8);
  oracle::Comparison cc = oracle::compare_connection(run.c, *spec.metric);
  oracle::Comparison rc = oracle::compare_curvature(run.c, *spec.metric);
  sw.lap("oracle");
  Result r;
  r.report["command"] = "compare";
  r.report["geometry"] = geometry_echo(*b.g);
  r.report["validation"] = validation_json(b.validation);
  r.report["connection_method"] = run.c.method;
  r.report["tolerance"] = tol;
  r.report["connection"] = Json{{"max_abs", io::number(cc.max_abs)}, {"points", cc.points}, {"passed", cc.max_abs <= tol}};
  r.report["curvature"] = Json{{"max_abs", io::number(rc.max_abs)}, {"points", rc.points}, {"passed", rc.max_abs <= tol}};
  bool ok = b.validation.passed() && cc.max_abs <= tol && rc.max_abs <= tol;
  r.report["passed"] = ok;
  r.exit_code = ok ? kOk : kMathFailure;
  sw.attach(r.report);
  return r;
}

Result run(const std::string& command, const std::string& spec_path, const Options& opt) {
  Result r;
  r.report["command"] = command;
  try {
    io::GeometrySpec spec = io::load_geometry(spec_path);
    if (command == "check") return run_check(spec, opt);
    if (command == "connect") return run_connect(spec, opt);
    if (command == "projections") return run_projections(spec, opt);
    if (command == "oracle") return run_oracle(spec, opt);
    if (command == "junk") return run_junk(spec, opt);
    if (command == "compare") return run_compare(spec, opt);
    throw io::InputError("unknown command \"" + command + "\"");
  } catch (const io::InputError& e) {
    r.exit_code = kInputError;
    r.report["error"] = e.what();
  } catch (const std::invalid_argument& e) {
    r.exit_code = kInputError;
    r.report["error"] = e.what();
  } catch (const NonConvergence& e) {
    r.exit_code = kNonConvergence;
    r.report["error"] = e.what();
    r.report["residual"] = io::number(e.residual);
  } catch (const HypothesisFailure& e) {
    r.exit_code = kMathFailure;
    r.report["error"] = e.what();
    r.report["residual"] = io::number(e.residual);
  } catch (const std::exception& e) {
    r.exit_code = kMathFailure;
    r.report["error"] = e.what();
  }
  r.report["exit_code"] = r.exit_code;
  return r;
}

}  // namespace lcw::cli
