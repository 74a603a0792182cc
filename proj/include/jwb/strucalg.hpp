#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "jwb/freealg.hpp"
#include "jwb/linalg.hpp"

namespace jwb::strucalg {

using linalg::RowEchelon;
using linalg::SparseVec;

class StructureAlgebra;
using AlgebraPtr = std::shared_ptr<const StructureAlgebra>;

// Finite-dimensional associative algebra over Q given by basis labels and a
// sparse structure tensor. Products of basis pairs are stored only when
// nonzero; associativity is validated at construction over every triple that
// could make either side nonzero (triples with e_i e_j = 0 = e_j e_k have
// both sides zero by bilinearity, so the sweep is still exhaustive).
class StructureAlgebra {
 public:
  using Key = std::pair<int32_t, int32_t>;
  using ProductMap = std::map<Key, SparseVec>;

  static AlgebraPtr create(std::string name, std::vector<std::string> labels,
                           ProductMap products, std::optional<SparseVec> unit,
                           bool validate = true);

  int dim() const { return static_cast<int>(labels_.size()); }
  const std::string& name() const { return name_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const ProductMap& products() const { return products_; }

  // e_i * e_j; the empty vector when the product vanishes.
  const SparseVec& basis_product(int32_t i, int32_t j) const;

  bool is_unital() const { return unit_.has_value(); }
  const SparseVec& unit() const;

  SparseVec mul(const SparseVec& x, const SparseVec& y) const;
  SparseVec jordan(const SparseVec& x, const SparseVec& y) const {
    return linalg::sv_add(mul(x, y), mul(y, x));
  }
  SparseVec comm(const SparseVec& x, const SparseVec& y) const {
    return linalg::sv_sub(mul(x, y), mul(y, x));
  }
  SparseVec power(const SparseVec& x, int n) const;  // n >= 1

  std::string show(const SparseVec& v) const {
    return linalg::sv_to_string(v, labels_);
  }

  // Lists of partners with a nonzero product, per basis index; used by the
  // construction-time validators to skip triples that vanish identically.
  const std::vector<std::vector<int32_t>>& right_partners() const { return right_of_; }
  const std::vector<std::vector<int32_t>>& left_partners() const { return left_of_; }

 private:
  StructureAlgebra() = default;
  std::string name_;
  std::vector<std::string> labels_;
  ProductMap products_;
  std::optional<SparseVec> unit_;
  std::unordered_map<uint64_t, const SparseVec*> index_;
  std::vector<std::vector<int32_t>> right_of_, left_of_;
};

// Element with a parent pointer; arithmetic delegates to the parent tensor.
struct AlgElement {
  AlgebraPtr alg;
  SparseVec v;

  AlgElement() = default;
  AlgElement(AlgebraPtr a, SparseVec vec) : alg(std::move(a)), v(std::move(vec)) {}

  friend AlgElement operator+(const AlgElement& a, const AlgElement& b) {
    return {a.alg, linalg::sv_add(a.v, b.v)};
  }
  friend AlgElement operator-(const AlgElement& a, const AlgElement& b) {
    return {a.alg, linalg::sv_sub(a.v, b.v)};
  }
  friend AlgElement operator*(const AlgElement& a, const AlgElement& b) {
    return {a.alg, a.alg->mul(a.v, b.v)};
  }
  friend AlgElement operator*(const Rat& c, const AlgElement& a) {
    return {a.alg, linalg::sv_scale(a.v, c)};
  }
  bool operator==(const AlgElement& o) const { return v == o.v; }
  bool is_zero() const { return v.empty(); }
  std::string str() const { return alg->show(v); }
};

AlgElement basis_element(const AlgebraPtr& a, int32_t i);
AlgElement unit_element(const AlgebraPtr& a);

// Subspace of an algebra's underlying vector space, canonical echelon basis.
struct Subspace {
  AlgebraPtr alg;
  RowEchelon space;

  Subspace() = default;
  Subspace(AlgebraPtr a, RowEchelon s) : alg(std::move(a)), space(std::move(s)) {}
  int dim() const { return space.dim(); }
  bool contains(const SparseVec& v) const { return space.contains(v); }
  bool operator==(const Subspace& o) const { return space == o.space; }
};

Subspace zero_subspace(const AlgebraPtr& a);
Subspace full_subspace(const AlgebraPtr& a);
Subspace span_subspace(const AlgebraPtr& a, const std::vector<SparseVec>& vecs);

// ----- constructors -----

AlgebraPtr build_algebra(std::string name, std::vector<std::string> labels,
                         const std::vector<std::tuple<int, int, int, Rat>>& structure,
                         std::optional<SparseVec> unit);

AlgebraPtr matrix_algebra(int n);
AlgebraPtr grassmann_algebra(int n);
AlgebraPtr upper_triangular(int n, bool strict);
AlgebraPtr direct_sum(const AlgebraPtr& a, const AlgebraPtr& b);
AlgebraPtr opposite(const AlgebraPtr& a);

// Quotient A/I with the projection data: basis of A/I corresponds to the
// non-pivot coordinates of I's echelon basis (deterministic representatives).
struct QuotientResult {
  AlgebraPtr algebra;
  std::vector<int32_t> rep_indices;        // A-basis index per quotient basis
  // pi(v): coordinates of v + I in the quotient basis.
  SparseVec project(const SparseVec& v) const;
  Subspace ideal;                          // the ideal quotiented out
};
QuotientResult quotient(const AlgebraPtr& a, const Subspace& ideal);

// Bilinear form on basis pairs, sparse. Used for cocycle extensions.
using BilinearForm = std::map<StructureAlgebra::Key, Rat>;

Rat form_value(const BilinearForm& f, const SparseVec& x, const SparseVec& y);

// A ⊕ Fz with a*b = ab + f(a,b) z and z annihilating; valid iff f satisfies
// f(ab,c) = f(a,bc) on all basis triples (checked with the same sparse-sweep
// exhaustiveness as associativity).
AlgebraPtr cocycle_extension(const AlgebraPtr& a, const BilinearForm& f,
                             const std::string& name = "");

// ----- involutions -----

class InvolutionMap {
 public:
  InvolutionMap(AlgebraPtr alg, std::vector<SparseVec> cols);
  const AlgebraPtr& algebra() const { return alg_; }
  const std::vector<SparseVec>& columns() const { return cols_; }
  SparseVec apply(const SparseVec& v) const;
  // Throws std::invalid_argument (with a witness pair) unless the map is
  // linear of order 2 and an antiautomorphism on all basis pairs.
  void validate() const;

 private:
  AlgebraPtr alg_;
  std::vector<SparseVec> cols_;
};

InvolutionMap involution_transpose(const AlgebraPtr& matrix_alg, int n);
InvolutionMap involution_symplectic(const AlgebraPtr& m2);
// Builds A ⊕ A^op together with the exchange involution a + b^op -> b + a^op.
std::pair<AlgebraPtr, InvolutionMap> exchange_involution(const AlgebraPtr& a);

// +1 eigenspace H(A,*); validated closed under the Jordan product.
Subspace symmetric_part(const InvolutionMap& star);

// ----- subspace machinery -----

Subspace subalgebra_span(const AlgebraPtr& a, const std::vector<SparseVec>& gens);
// Least ideal containing (include_gens) or generated by sandwiching (strict
// non-unital reading, include_gens = false) the generators.
Subspace ideal_span(const AlgebraPtr& a, const std::vector<SparseVec>& gens,
                    bool include_gens = true);
Subspace commutator_ideal(const AlgebraPtr& a);
Subspace center(const AlgebraPtr& a);
Subspace annihilator(const AlgebraPtr& a);
// {x in W : x w = w x = 0 for all w in W} — the annihilator of W inside W.
Subspace annihilator_within(const Subspace& w);

// Value of the T-ideal generated by gen on A: span of all multilinear-family
// values on basis tuples, closed to an ideal. unital_reading=false gives the
// strict span{a f(...) b : a, b in A} semantics.
Subspace tideal_value(const freealg::TIdealGenerator& gen, const AlgebraPtr& a,
                      bool unital_reading = true);

// Thrown when the center cannot be split over Q (a minimal-polynomial factor
// without rational roots blocks the analysis); callers may report
// "inconclusive" rather than risking a wrong list.
struct InconclusiveCenter : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// All idempotents of Z(A): every subset sum of the primitive ones, each
// verified e^2 = e and central. Throws InconclusiveCenter when the rational
// splitting fails.
std::vector<SparseVec> central_idempotents(const AlgebraPtr& a);

// ----- polynomial-coefficient extension A ⊗ F[x1,x2] -----

struct PolyElement {
  AlgebraPtr alg;
  std::map<std::pair<int, int>, SparseVec> coeffs;  // bidegree -> coefficient

  bool is_zero() const { return coeffs.empty(); }
  bool operator==(const PolyElement& o) const { return coeffs == o.coeffs; }
};

PolyElement poly_term(const AlgebraPtr& a, int i, int j, SparseVec coeff);
PolyElement poly_add(const PolyElement& p, const PolyElement& q);
PolyElement poly_sub(const PolyElement& p, const PolyElement& q);
PolyElement poly_mul(const PolyElement& p, const PolyElement& q);
PolyElement poly_derive(const PolyElement& p, int axis);  // axis in {1,2}
struct SliceMembership {
  bool all_contained;
  std::optional<std::pair<int, int>> witness_bidegree;
};
SliceMembership poly_slice_membership(const PolyElement& p, const Subspace& w);

// ----- Jordan cube inclusions -----

struct CubeReport {
  Subspace cube;        // span{u v u : u, v in I}
  Subspace cube_circ;   // span{(I o I) o I}
  bool forms_agree;
  bool holds;           // J*I^3 and I^3*J inside span(I I)
  std::string witness;  // empty when holds
};
// Preconditions validated: j_amb closed under o, I a Jordan ideal of j_amb.
CubeReport check_lema2(const Subspace& j_amb, const Subspace& ideal);

// Random-sample check of (x o y) o z - (x o z) o y = [x,[y,z]] in A.
bool check_triple_identity(const AlgebraPtr& a, int samples, uint64_t seed);

}  // namespace jwb::strucalg
