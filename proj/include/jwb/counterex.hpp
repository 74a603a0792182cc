#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jwb/jordanmaps.hpp"
#include "jwb/strucalg.hpp"

namespace jwb::counterex {

using jordanmaps::LinearMap;
using linalg::SparseVec;
using strucalg::AlgebraPtr;
using strucalg::Subspace;

// Throws std::invalid_argument unless d is an endomorphism of one whole
// algebra satisfying the Leibniz rule on all basis pairs (the rule is
// bilinear, so the basis sweep is a proof).
void validate_derivation(const LinearMap& d);

// x -> [a, x]; validated like any other derivation.
LinearMap inner_derivation(const AlgebraPtr& alg, const SparseVec& a);

// The twisted product B = A x A/J carrying
//   (x,u) * (y,v) = (xy, pi(d(x)g(y)) + pi(x)v + u pi(y)),
// together with phi(x) = (x, 1/2 pi(d(g(x)))). The product is associative for
// any pair of derivations; phi is a Jordan homomorphism exactly when
// [g(x), d(x)] lies in J for every x, which is quadratic in x and therefore
// certified on the spanning family {e_i} and {e_i + e_j}.
struct LappInstance {
  AlgebraPtr a;
  LinearMap d, g;
  Subspace j;
  std::optional<strucalg::QuotientResult> aq;  // A/J data; empty when J = A
  AlgebraPtr b;
  LinearMap phi;
  bool bracket_condition;     // [g(x), d(x)] in J on the spanning family
  std::string bracket_witness;  // violating element when the condition fails
  jordanmaps::JordanWitness classification;
};

LappInstance build_lapp(const AlgebraPtr& a, const LinearMap& d, const LinearMap& g,
                        const Subspace& j);

// True iff g(s)d(t) - d(s)g(t) lies outside J; true certifies that phi is
// not a sum of a homomorphism and an antihomomorphism with orthogonal images.
bool lapp_obstruction(const LappInstance& inst, const SparseVec& s, const SparseVec& t);

// Grassmann instance on n >= 4 generators: d = ad(e1), g = ad(e2), J = 0.
// Construction re-derives and checks the whole chain: [a,x][b,x] = 0 on
// seeded samples, d(x)g(x) = g(x)d(x) = 0 on the basis, dg = 0 as a matrix,
// and the obstruction g(e3)d(e4) - d(e3)g(e4) = 8 e1e2e3e4.
struct ExambResult {
  LappInstance inst;
  LinearMap phi1, phi2;         // (x, e1[e2,x]) and (0, -e1[e2,x])
  bool witness_ok;              // phi = phi1 + phi2 with the one-sided product rule
  SparseVec obstruction_value;  // in the Grassmann algebra
};
ExambResult build_examb(int n, int samples = 20, uint64_t seed = 1);

// 1 (x) d/dx1 and 1 (x) d/dx2 acting on polynomial-coefficient elements; the
// ideal they are measured against is K(A) in every bidegree slice.
struct PolyDerivationPair {
  AlgebraPtr a;
  Subspace k;
  static strucalg::PolyElement d(const strucalg::PolyElement& p);
  static strucalg::PolyElement g(const strucalg::PolyElement& p);
};

// Non-standardness certificate over the polynomial extension: with
// s = 1 (x) x2 and t = 1 (x) x1 the difference g(s)d(t) - d(s)g(t) evaluates
// to 1 (x) 1, and the certificate is its failure to lie in K(A) slicewise.
// Requires a unital algebra whose commutator ideal is proper.
struct CfinCReport {
  PolyDerivationPair pair;
  strucalg::PolyElement obstruction;
  strucalg::SliceMembership membership;  // against k; fails at bidegree (0,0)
  bool certified;
};
CfinCReport build_cfin_c(const AlgebraPtr& a);

// Witness that no nearly-standard decomposition exists over the polynomial
// extension: an element outside K(A) + Z(A). Requires a unital algebra.
struct CfinDReport {
  Subspace kz;  // K(A) + Z(A)
  SparseVec element;
  bool witness;  // element escapes K(A) + Z(A)
};
CfinDReport build_cfin_d(const AlgebraPtr& a, const SparseVec& elem);

}  // namespace jwb::counterex
