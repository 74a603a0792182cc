#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <stdexcept>

#include "jwb/counterex.hpp"
#include "jwb/sampling.hpp"

using namespace jwb;
using counterex::LinearMap;
using linalg::SparseVec;
using strucalg::AlgebraPtr;

namespace {

SparseVec e(int32_t i, Rat c = Rat(1)) { return {{i, c}}; }

LinearMap zero_map(const AlgebraPtr& a) {
  return LinearMap(a, a, std::vector<SparseVec>(static_cast<size_t>(a->dim())));
}

strucalg::PolyElement random_poly(const AlgebraPtr& a, sampling::Rng& rng) {
  strucalg::PolyElement p{a, {}};
  for (int t = 0; t < 4; ++t) {
    int i = static_cast<int>(rng.next(4));
    int j = static_cast<int>(rng.next(4));
    p = strucalg::poly_add(p, strucalg::poly_term(a, i, j, rng.element(a->dim())));
  }
  return p;
}

}  // namespace

TEST_CASE("inner derivations") {
  AlgebraPtr m2 = strucalg::matrix_algebra(2);
  LinearMap zero = counterex::inner_derivation(m2, m2->unit());
  for (const auto& col : zero.columns()) CHECK(col.empty());

  LinearMap ad12 = counterex::inner_derivation(m2, e(1));
  CHECK(ad12.apply(e(2)) == SparseVec{{0, Rat(1)}, {3, Rat(-1)}});  // [e12,e21] = e11 - e22

  AlgebraPtr g4 = strucalg::grassmann_algebra(4);
  LinearMap ad1 = counterex::inner_derivation(g4, e(1));
  CHECK(ad1.apply(e(2)) == e(3, Rat(2)));  // [e1,e2] = 2 e1e2

  // identity is linear but breaks Leibniz
  CHECK_THROWS_AS(counterex::validate_derivation(LinearMap::identity(m2)),
                  std::invalid_argument);
}

TEST_CASE("twisted product with zero derivations") {
  AlgebraPtr m2 = strucalg::matrix_algebra(2);
  auto inst = counterex::build_lapp(m2, zero_map(m2), zero_map(m2),
                                    strucalg::zero_subspace(m2));
  CHECK(inst.b->dim() == 8);
  CHECK(inst.b->is_unital());
  CHECK(inst.bracket_condition);
  CHECK(inst.classification.jordan);
  CHECK(inst.classification.hom);
  // no pair obstructs: the difference of products is identically zero
  CHECK(!counterex::lapp_obstruction(inst, e(0), e(1)));
  CHECK(!counterex::lapp_obstruction(inst, e(1), e(2)));
}

TEST_CASE("bracket condition failure is detected and mirrored by the map") {
  AlgebraPtr m2 = strucalg::matrix_algebra(2);
  LinearMap d = counterex::inner_derivation(m2, e(1));  // ad e12
  LinearMap g = counterex::inner_derivation(m2, e(2));  // ad e21
  auto inst = counterex::build_lapp(m2, d, g, strucalg::zero_subspace(m2));
  CHECK(!inst.bracket_condition);
  CHECK(!inst.bracket_witness.empty());
  CHECK(!inst.classification.jordan);
  REQUIRE(inst.classification.counterexample.has_value());

  // with J = A the condition trivially holds and phi(x) = (x)
  auto full = counterex::build_lapp(m2, d, g, strucalg::full_subspace(m2));
  CHECK(full.b->dim() == 4);
  CHECK(!full.aq.has_value());
  CHECK(full.bracket_condition);
  CHECK(full.classification.hom);
  CHECK(!counterex::lapp_obstruction(full, e(1), e(2)));  // everything lies in J

  // same derivation twice: the obstruction expression vanishes identically
  auto same = counterex::build_lapp(m2, d, d, strucalg::zero_subspace(m2));
  for (int32_t i = 0; i < 4; ++i)
    for (int32_t j = 0; j < 4; ++j) CHECK(!counterex::lapp_obstruction(same, e(i), e(j)));

  // a non-ideal subspace is rejected
  strucalg::Subspace bad = strucalg::span_subspace(m2, {e(0)});
  CHECK_THROWS_AS(counterex::build_lapp(m2, d, g, bad), std::invalid_argument);
}

TEST_CASE("grassmann instance with its nearly-standard witnesses") {
  auto r = counterex::build_examb(4, 30, 20260816);
  CHECK(r.obstruction_value == e(15, Rat(8)));  // 8 e1e2e3e4
  CHECK(r.inst.bracket_condition);
  CHECK(r.inst.classification.jordan);
  CHECK(!r.inst.classification.hom);
  CHECK(!r.inst.classification.antihom);
  CHECK(r.witness_ok);
  CHECK(counterex::lapp_obstruction(r.inst, e(4), e(8)));  // (e3, e4)

  // phi1 + phi2 = phi columnwise
  for (size_t i = 0; i < r.inst.phi.columns().size(); ++i)
    CHECK(linalg::sv_add(r.phi1.columns()[i], r.phi2.columns()[i]) ==
          r.inst.phi.columns()[i]);

  // not surjective onto B, so the splitting search reports inconclusive
  auto dec = jordanmaps::standard_decompose(r.inst.phi);
  CHECK(!dec.found);
  CHECK(dec.diagnosis.find("surjective") != std::string::npos);

  CHECK_THROWS_AS(counterex::build_examb(3), std::invalid_argument);
}

TEST_CASE("partial derivative pair commutes") {
  AlgebraPtr t2 = strucalg::upper_triangular(2, false);
  sampling::Rng rng(7);
  for (int s = 0; s < 20; ++s) {
    strucalg::PolyElement p = random_poly(t2, rng);
    CHECK(counterex::PolyDerivationPair::d(counterex::PolyDerivationPair::g(p)) ==
          counterex::PolyDerivationPair::g(counterex::PolyDerivationPair::d(p)));
  }
}

TEST_CASE("polynomial-extension non-standardness certificate") {
  AlgebraPtr t2 = strucalg::upper_triangular(2, false);
  auto rep = counterex::build_cfin_c(t2);
  CHECK(rep.certified);
  CHECK(rep.pair.k.dim() == 1);  // K(T2) = span{e12}
  REQUIRE(rep.membership.witness_bidegree.has_value());
  CHECK(*rep.membership.witness_bidegree == std::pair<int, int>(0, 0));
  // the obstruction is exactly 1 (x) 1
  REQUIRE(rep.obstruction.coeffs.size() == 1);
  CHECK(rep.obstruction.coeffs.count({0, 0}) == 1);
  CHECK(rep.obstruction.coeffs.at({0, 0}) == t2->unit());

  // scalars: commutative, K = 0, certificate still produced
  auto scalars = counterex::build_cfin_c(strucalg::grassmann_algebra(0));
  CHECK(scalars.certified);
  CHECK(scalars.pair.k.dim() == 0);

  // full matrix algebras are rejected: commutators generate everything
  CHECK_THROWS_AS(counterex::build_cfin_c(strucalg::matrix_algebra(2)),
                  std::invalid_argument);
  // so are non-unital algebras
  CHECK_THROWS_AS(counterex::build_cfin_c(strucalg::upper_triangular(3, true)),
                  std::invalid_argument);
}

TEST_CASE("nearly-standard obstruction witness membership") {
  AlgebraPtr t2 = strucalg::upper_triangular(2, false);
  auto rep = counterex::build_cfin_d(t2, e(0));  // e11
  CHECK(rep.witness);
  CHECK(rep.kz.dim() == 2);  // span{e12} + span{1}

  CHECK(!counterex::build_cfin_d(t2, t2->unit()).witness);  // 1 is central
  CHECK(!counterex::build_cfin_d(t2, e(1)).witness);        // e12 is a commutator

  AlgebraPtr m2 = strucalg::matrix_algebra(2);
  for (int32_t i = 0; i < 4; ++i) CHECK(!counterex::build_cfin_d(m2, e(i)).witness);

  CHECK_THROWS_AS(counterex::build_cfin_d(strucalg::upper_triangular(3, true), e(0)),
                  std::invalid_argument);
}
