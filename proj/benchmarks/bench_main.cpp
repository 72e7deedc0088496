// Hot paths of the pipeline: exact polynomial arithmetic, symbolic
// determinants, the dense 9x9 eigensolver, and constraint-matrix assembly.

#include <benchmark/benchmark.h>

#include <vector>

#include "coneray/biquadratic.hpp"
#include "coneray/corpus.hpp"
#include "coneray/extremality.hpp"
#include "coneray/gram_family.hpp"
#include "coneray/hompoly.hpp"
#include "coneray/poly_matrix.hpp"
#include "coneray/psd.hpp"
#include "coneray/sphere_opt.hpp"

namespace {

using namespace coneray;

HomPoly random_poly(int nvars, int degree, uint64_t seed) {
  Rng rng(seed);
  HomPoly p = HomPoly::zero(nvars, degree, Mode::Exact);
  for (const Exps& e : monomial_basis(nvars, degree)) {
    long long c = static_cast<long long>(rng.raw() % 19) - 9;
    if (c != 0) p.add_term(e, Rational(c));
  }
  return p;
}

void BM_PolyMul(benchmark::State& state) {
  HomPoly a = random_poly(3, 3, 11);
  HomPoly b = random_poly(3, 3, 12);
  for (auto _ : state) {
    HomPoly c = a * b;
    benchmark::DoNotOptimize(c.term_count());
  }
}
BENCHMARK(BM_PolyMul);

void BM_AcousticDet(benchmark::State& state) {
  PolyMatrix t = corpus("choi-lam").acoustic_matrix();
  for (auto _ : state) {
    HomPoly d = t.det();
    benchmark::DoNotOptimize(d.term_count());
  }
}
BENCHMARK(BM_AcousticDet);

void BM_CofactorMatrix(benchmark::State& state) {
  PolyMatrix t = corpus("choi-lam").acoustic_matrix();
  for (auto _ : state) {
    PolyMatrix c = t.cofactor_matrix();
    benchmark::DoNotOptimize(c.at(2, 2).term_count());
  }
}
BENCHMARK(BM_CofactorMatrix);

void BM_SymEig9(benchmark::State& state) {
  GramFamily fam = minor_shift_family(BiquadraticForm::from_tensor(corpus("choi-lam")));
  std::vector<double> vals;
  std::vector<std::vector<double>> vecs;
  for (auto _ : state) {
    sym_eig(fam.base, vals, vecs);
    benchmark::DoNotOptimize(vals[0]);
  }
}
BENCHMARK(BM_SymEig9);

void BM_ZeroConstraints(benchmark::State& state) {
  HomPoly det = corpus("choi-lam").acoustic_matrix().det();
  ZeroSet zs = find_zeros(det);
  for (auto _ : state) {
    ConstraintSystem cs = zero_constraints(det, zs);
    benchmark::DoNotOptimize(cs.rows.size());
  }
}
BENCHMARK(BM_ZeroConstraints);

}  // namespace

BENCHMARK_MAIN();
