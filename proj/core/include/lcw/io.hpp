#pragma once

#include "lcw/calculus.hpp"
#include "lcw/oracle.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace lcw::io {

using Json = nlohmann::ordered_json;

class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct GeometrySpec {
  GeometryInput input;
  std::optional<oracle::MetricField> metric;  // grid specs with a diagonal metric
  std::optional<double> tolerance;
  Json document;
};

GeometrySpec parse_geometry(const Json& doc);
GeometrySpec parse_geometry_text(const std::string& text);
GeometrySpec load_geometry(const std::string& path);
// build and apply the tolerance from the document
GeometryPtr build(const GeometrySpec& spec);

Scalar decode_scalar(const AlgebraPtr& alg, const Json& j);
Element decode_element(const AlgebraPtr& alg, const Json& j);

// exact rationals as "p/q", other exact scalars as {"zeta": [...]}, floating ones as [re, im]
Json encode_scalar(const Scalar& s);
// terms [{"deg": [a, b], "c": ...}]; grid elements are summarized by their sup norm
Json encode_element(const Element& e);
// nonzero canonical coordinates [{"index": [...], "c": ...}]
Json encode_tensor(const TensorElement& t);
// finite doubles unchanged, others as strings so reports stay valid JSON
Json number(double x);

}  // namespace lcw::io
