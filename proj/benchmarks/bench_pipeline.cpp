#include "lcw/io.hpp"
#include "lcw/levi_civita.hpp"
#include "lcw/oracle.hpp"

#include <benchmark/benchmark.h>

using namespace lcw;

namespace {

GeometryPtr load(const char* name) {
  return io::build(io::load_geometry(std::string(LCW_GEOMETRY_DIR) + "/" + name + ".json"));
}

GeometryPtr grid(int n) {
  io::GeometrySpec spec = io::load_geometry(std::string(LCW_GEOMETRY_DIR) + "/grid-t3-curved.json");
  spec.document["grid"]["sizes"] = {n, n, n};
  return io::build(io::parse_geometry(spec.document));
}

void BM_CycloMul(benchmark::State& st) {
  AlgebraPtr a = Algebra::laurent(Rational(1, 7), FieldKind::exact);
  Scalar x = a->lambda_power(3) + a->from_rational(Rational(2, 3)), y = a->lambda_power(5) - a->imag_unit();
  for (auto _ : st) benchmark::DoNotOptimize(x * y);
}
BENCHMARK(BM_CycloMul);

void BM_Validate(benchmark::State& st) {
  GeometryPtr g = load("fuzzy-q5-curved");
  for (auto _ : st) benchmark::DoNotOptimize(validate(*g));
}
BENCHMARK(BM_Validate)->Unit(benchmark::kMillisecond);

void BM_LimitProjection(benchmark::State& st) {
  GeometryPtr g = to_approx(load("fuzzy-q5-curved"));
  ProjectionPair pq = build_PQ(g->psi);
  auto method = st.range(0) ? ProjectionMethod::iterative : ProjectionMethod::group_average;
  for (auto _ : st) benchmark::DoNotOptimize(limit_projection(pq.P, pq.Q, method));
  st.SetLabel(st.range(0) ? "iterative" : "group-average");
}
BENCHMARK(BM_LimitProjection)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ConnectionFuzzy(benchmark::State& st) {
  GeometryPtr g = load("fuzzy-q5-curved");
  ProjectionPair pq = build_PQ(g->psi);
  TwoProjectionReport rep = limit_projection(pq.P, pq.Q);
  for (auto _ : st) {
    if (st.range(0)) benchmark::DoNotOptimize(connection_form_series(g, pq, rep));
    else benchmark::DoNotOptimize(connection_form_closed(g, pq));
  }
  st.SetLabel(st.range(0) ? "series" : "closed");
}
BENCHMARK(BM_ConnectionFuzzy)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_CertifyFuzzy(benchmark::State& st) {
  GeometryPtr g = load("fuzzy-q5-curved");
  ProjectionPair pq = build_PQ(g->psi);
  Connection c = connection_form_closed(g, pq);
  for (auto _ : st) benchmark::DoNotOptimize(certify(c, pq));
}
BENCHMARK(BM_CertifyFuzzy)->Unit(benchmark::kMillisecond);

void BM_GridConnection(benchmark::State& st) {
  GeometryPtr g = grid(static_cast<int>(st.range(0)));
  ProjectionPair pq = build_PQ(g->psi);
  for (auto _ : st) benchmark::DoNotOptimize(connection_form_closed(g, pq));
}
BENCHMARK(BM_GridConnection)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_GridCompare(benchmark::State& st) {
  io::GeometrySpec spec = io::load_geometry(std::string(LCW_GEOMETRY_DIR) + "/grid-t3-curved.json");
  GeometryPtr g = io::build(spec);
  Connection c = connection_form_closed(g, build_PQ(g->psi));
  for (auto _ : st) benchmark::DoNotOptimize(oracle::compare_connection(c, *spec.metric));
}
BENCHMARK(BM_GridCompare)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
