#include "lcw/io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace lcw::io {

namespace {

Rational parse_rational(const Json& j) {
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<long long>()));
  if (!j.is_string()) throw InputError("expected a rational such as \"3/4\", got " + j.dump());
  Rational r;
  std::string s = j.get<std::string>();
  if (s.empty() || r.set_str(s, 10) != 0) throw InputError("malformed rational \"" + s + "\"");
  if (r.get_den() == 0) throw InputError("zero denominator in \"" + s + "\"");
  r.canonicalize();
  return r;
}

double parse_double(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_rational(j).get_d();
  throw InputError("expected a number, got " + j.dump());
}

const Json& require(const Json& obj, const char* key) {
  if (!obj.contains(key)) throw InputError(std::string("missing field \"") + key + "\"");
  return obj.at(key);
}

void only_keys(const Json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw InputError(where + " must be an object");
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) throw InputError("unknown field \"" + k + "\" in " + where);
}

std::vector<int> int_list(const Json& j, const std::string& what) {
  if (!j.is_array()) throw InputError(what + " must be an array of integers");
  std::vector<int> v;
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw InputError(what + " must be an array of integers");
    v.push_back(x.get<int>());
  }
  return v;
}

ElemMatrix decode_matrix(const AlgebraPtr& alg, const Json& j, const std::string& what) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw InputError(what + " must be a non-empty array of rows");
  const int rows = static_cast<int>(j.size()), cols = static_cast<int>(j[0].size());
  ElemMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != cols) throw InputError(what + " has ragged rows");
    for (int c = 0; c < cols; ++c) m(r, c) = decode_element(alg, j[r][c]);
  }
  return m;
}

std::vector<std::vector<Element>> decode_rows(const AlgebraPtr& alg, const Json& j, const std::string& what) {
  if (!j.is_array()) throw InputError(what + " must be an array");
  std::vector<std::vector<Element>> out;
  for (const auto& row : j) {
    if (!row.is_array()) throw InputError(what + " entries must be arrays");
    std::vector<Element> r;
    for (const auto& e : row) r.push_back(decode_element(alg, e));
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<TrigTerm> decode_trig(const Json& j, int axes, const std::string& what) {
  std::vector<TrigTerm> terms;
  if (!j.is_array()) {
    if (!j.is_number() && !j.is_string()) throw InputError(what + " must be a number or a list of {\"k\", \"c\"} terms");
    terms.push_back({std::vector<int>(axes, 0), Complex(parse_double(j), 0.0)});
    return terms;
  }
  for (const auto& t : j) {
    only_keys(t, {"k", "c"}, what);
    std::vector<int> k = int_list(require(t, "k"), what + ".k");
    if (static_cast<int>(k.size()) != axes) throw InputError(what + ": wave vector has the wrong length");
    const Json& c = require(t, "c");
    Complex z;
    if (c.is_array()) {
      if (c.size() != 2) throw InputError(what + ": complex coefficients are [re, im]");
      z = Complex(parse_double(c[0]), parse_double(c[1]));
    } else {
      z = Complex(parse_double(c), 0.0);
    }
    terms.push_back({k, z});
  }
  return terms;
}

oracle::TrigPolynomial to_poly(const std::vector<TrigTerm>& t) { return oracle::TrigPolynomial{t}; }

AlgebraPtr decode_algebra(const Json& doc) {
  const std::string backend = require(doc, "backend").get<std::string>();
  const std::string field = doc.value("field", std::string("exact"));
  if (field != "exact" && field != "approx") throw InputError("field must be \"exact\" or \"approx\"");
  const FieldKind fk = field == "exact" ? FieldKind::exact : FieldKind::approx;
  if (backend == "grid") {
    if (doc.contains("field") && fk == FieldKind::exact) throw InputError("the grid backend is floating-point only");
    if (doc.contains("theta") && parse_rational(doc.at("theta")) != 0) throw InputError("the grid backend is commutative");
    const Json& g = require(doc, "grid");
    only_keys(g, {"sizes"}, "grid");
    std::vector<int> sizes = int_list(require(g, "sizes"), "grid.sizes");
    if (sizes.empty()) throw InputError("grid.sizes must not be empty");
    for (int s : sizes)
      if (s < 2) throw InputError("grid sizes must be at least 2");
    return Algebra::grid(sizes);
  }
  if (backend == "laurent") {
    if (!doc.contains("theta")) return Algebra::laurent(Rational(0), fk);
    const Json& t = doc.at("theta");
    if (t.is_number_float()) {
      if (fk == FieldKind::exact) throw InputError("a floating theta needs \"field\": \"approx\"");
      return Algebra::laurent_irrational(t.get<double>());
    }
    return Algebra::laurent(parse_rational(t), fk);
  }
  if (backend == "fuzzy") {
    Rational th = parse_rational(require(doc, "theta"));
    mpz_class whole;
    mpz_fdiv_q(whole.get_mpz_t(), th.get_num().get_mpz_t(), th.get_den().get_mpz_t());
    th -= Rational(whole);
    int q = static_cast<int>(th.get_den().get_si());
    int p = static_cast<int>(th.get_num().get_si());
    if (doc.contains("q")) {
      int qq = doc.at("q").get<int>();
      if (qq != q) throw InputError("q must equal the reduced denominator of theta");
    }
    try {
      return Algebra::fuzzy(q, p, fk);
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
  }
  throw InputError("unknown backend \"" + backend + "\"");
}

}  // namespace

Scalar decode_scalar(const AlgebraPtr& alg, const Json& j) {
  if (j.is_number_integer()) return alg->from_int(j.get<long long>());
  if (j.is_string()) return alg->from_rational(parse_rational(j));
  if (j.is_number_float()) {
    if (alg->exact()) throw InputError("floating-point coefficient " + j.dump() + " in an exact geometry");
    return alg->from_complex(Complex(j.get<double>(), 0.0));
  }
  if (j.is_array()) {
    if (j.size() != 2) throw InputError("complex coefficients are [re, im]");
    if (alg->exact()) throw InputError("floating-point coefficient " + j.dump() + " in an exact geometry");
    return alg->from_complex(Complex(parse_double(j[0]), parse_double(j[1])));
  }
  if (j.is_object()) {
    if (j.contains("zeta")) {
      only_keys(j, {"zeta"}, "scalar");
      if (!alg->exact() || !alg->cyclotomic()) throw InputError("\"zeta\" coefficients need an exact geometry");
      std::vector<Rational> c;
      for (const auto& x : j.at("zeta")) c.push_back(parse_rational(x));
      return Scalar(Cyclo::from_coefficients(*alg->cyclotomic(), c));
    }
    only_keys(j, {"re", "im"}, "scalar");
    Scalar re = j.contains("re") ? decode_scalar(alg, j.at("re")) : alg->zero();
    Scalar im = j.contains("im") ? decode_scalar(alg, j.at("im")) : alg->zero();
    return re + alg->imag_unit() * im;
  }
  throw InputError("cannot read a scalar from " + j.dump());
}

Element decode_element(const AlgebraPtr& alg, const Json& j) {
  if (alg->backend() == Backend::grid) {
    auto terms = decode_trig(j, alg->axes(), "grid element");
    return Element::from_grid(alg, GridFunction::trig(alg->grid_shape(), terms));
  }
  if (!j.is_array()) return Element::constant(alg, decode_scalar(alg, j));
  std::vector<Element::Term> terms;
  for (const auto& t : j) {
    only_keys(t, {"deg", "c"}, "element term");
    std::vector<int> d = int_list(require(t, "deg"), "deg");
    if (d.size() != 2) throw InputError("degrees have two components");
    terms.push_back({Degree{d[0], d[1]}, decode_scalar(alg, require(t, "c"))});
  }
  return Element::from_terms(alg, std::move(terms));
}

GeometrySpec parse_geometry(const Json& doc) {
  only_keys(doc, {"$schema", "name", "description", "backend", "theta", "q", "field", "grid", "metric", "presentation",
                  "frame", "psi", "tolerance"},
            "geometry");
  GeometrySpec spec;
  spec.document = doc;
  GeometryInput& in = spec.input;
  in.name = doc.value("name", std::string("unnamed"));
  in.algebra = decode_algebra(doc);
  const AlgebraPtr& alg = in.algebra;
  if (doc.contains("tolerance")) {
    double t = parse_double(doc.at("tolerance"));
    if (!(t > 0)) throw InputError("tolerance must be positive");
    spec.tolerance = t;
  }
  if (doc.contains("metric")) {
    const Json& m = doc.at("metric");
    only_keys(m, {"diagonal"}, "metric");
    if (alg->backend() != Backend::grid) throw InputError("\"metric\" is for the grid backend; use \"presentation\"");
    const Json& diag = require(m, "diagonal");
    if (!diag.is_array() || static_cast<int>(diag.size()) != alg->axes())
      throw InputError("metric.diagonal needs one entry per grid axis");
    std::vector<Element> entries;
    std::vector<oracle::TrigPolynomial> polys;
    for (size_t i = 0; i < diag.size(); ++i) {
      auto terms = decode_trig(diag[i], alg->axes(), "metric.diagonal[" + std::to_string(i) + "]");
      entries.push_back(Element::from_grid(alg, GridFunction::trig(alg->grid_shape(), terms)));
      polys.push_back(to_poly(terms));
    }
    in.diagonal_metric = std::move(entries);
    spec.metric = oracle::MetricField::diagonal(std::move(polys));
  }
  if (doc.contains("presentation")) {
    const Json& p = doc.at("presentation");
    only_keys(p, {"inverse_metric", "expansion"}, "presentation");
    in.presentation = Presentation{decode_matrix(alg, require(p, "inverse_metric"), "presentation.inverse_metric"),
                                   decode_matrix(alg, require(p, "expansion"), "presentation.expansion")};
  }
  if (doc.contains("frame")) {
    const Json& f = doc.at("frame");
    only_keys(f, {"degrees", "gram", "dagger_matrix", "coordinate_forms", "frame_differentials", "universal_lift_correction"},
              "frame");
    if (f.contains("degrees")) {
      std::vector<Degree> d;
      for (const auto& x : f.at("degrees")) {
        auto v = int_list(x, "frame.degrees");
        if (v.size() != 2) throw InputError("frame degrees have two components");
        d.push_back({v[0], v[1]});
      }
      in.degrees = d;
    }
    if (f.contains("gram")) in.gram = decode_matrix(alg, f.at("gram"), "frame.gram");
    if (f.contains("dagger_matrix")) in.dagger = decode_matrix(alg, f.at("dagger_matrix"), "frame.dagger_matrix");
    if (f.contains("coordinate_forms")) in.coordinate_forms = decode_matrix(alg, f.at("coordinate_forms"), "frame.coordinate_forms");
    if (f.contains("frame_differentials"))
      in.frame_differentials = decode_rows(alg, f.at("frame_differentials"), "frame.frame_differentials");
    if (f.contains("universal_lift_correction"))
      in.lifts = decode_rows(alg, f.at("universal_lift_correction"), "frame.universal_lift_correction");
  }
  if (doc.contains("psi")) {
    const Json& p = doc.at("psi");
    if (p.is_string()) {
      if (p.get<std::string>() != "sigma-theta") throw InputError("psi must be \"sigma-theta\" or a matrix");
    } else {
      ElemMatrix m = decode_matrix(alg, p, "psi");
      std::vector<ModuleOperator::Row> rows(m.rows());
      for (int i = 0; i < m.rows(); ++i)
        for (int k = 0; k < m.cols(); ++k)
          if (!m(i, k).is_zero()) rows[i].push_back({k, m(i, k)});
      in.psi = std::move(rows);
    }
  }
  if (!in.presentation && !in.diagonal_metric && !(in.degrees && in.gram && in.dagger))
    throw InputError("a geometry needs a presentation, a grid metric, or explicit frame data");
  return spec;
}

GeometrySpec parse_geometry_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("invalid JSON: ") + e.what());
  }
  try {
    return parse_geometry(doc);
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed geometry: ") + e.what());
  }
}

GeometrySpec load_geometry(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_geometry_text(ss.str());
}

GeometryPtr build(const GeometrySpec& spec) {
  GeometryPtr g;
  try {
    g = build_geometry(spec.input);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  if (!spec.tolerance) return g;
  auto copy = std::make_shared<Geometry>(*g);
  copy->tolerance = *spec.tolerance;
  return copy;
}

Json number(double x) {
  if (std::isfinite(x)) return x;
  return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

Json encode_scalar(const Scalar& s) {
  if (s.is_neutral()) return "0";
  if (s.is_approx()) {
    Complex z = s.approx();
    return Json::array({number(z.real()), number(z.imag())});
  }
  const Cyclo& c = s.exact();
  if (c.is_rational()) return to_string(c.rational_part());
  Json a = Json::array();
  for (const auto& r : c.coefficients()) a.push_back(to_string(r));
  return Json{{"zeta", a}};
}

Json encode_element(const Element& e) {
  if (e.is_neutral() || e.is_zero()) return Json::array();
  if (e.is_grid()) {
    const GridFunction& g = e.grid();
    if (g.is_constant()) return encode_scalar(Scalar(g.constant_value()));
    return Json{{"sup", number(g.sup_norm())}};
  }
  Json a = Json::array();
  for (const auto& [d, c] : e.terms()) a.push_back(Json{{"deg", {d.n1, d.n2}}, {"c", encode_scalar(c)}});
  return a;
}

Json encode_tensor(const TensorElement& t) {
  Json a = Json::array();
  if (!t.valid()) return a;
  for (size_t i = 0; i < t.size(); ++i) {
    if (t[i].is_zero()) continue;
    a.push_back(Json{{"index", t.frame()->unflatten(i, t.rank())}, {"c", encode_element(t[i])}});
  }
  return a;
}

}  // namespace lcw::io
