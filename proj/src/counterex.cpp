#include "jwb/counterex.hpp"

#include <stdexcept>

#include "jwb/sampling.hpp"

namespace jwb::counterex {

namespace {

SparseVec shifted(const SparseVec& v, int32_t off) {
  SparseVec out;
  out.reserve(v.size());
  for (const auto& [i, c] : v) out.emplace_back(i + off, c);
  return out;
}

}  // namespace

void validate_derivation(const LinearMap& d) {
  if (d.restricted() || d.domain_algebra() != d.codomain())
    throw std::invalid_argument("derivation must map a whole algebra to itself");
  const AlgebraPtr& a = d.domain_algebra();
  const auto& cols = d.columns();
  for (int32_t i = 0; i < a->dim(); ++i)
    for (int32_t j = 0; j < a->dim(); ++j) {
      SparseVec lhs = d.apply(a->basis_product(i, j));
      SparseVec rhs =
          linalg::sv_add(a->mul(cols[static_cast<size_t>(i)], linalg::sv_unit(j)),
                         a->mul(linalg::sv_unit(i), cols[static_cast<size_t>(j)]));
      if (lhs != rhs)
        throw std::invalid_argument("Leibniz rule fails at (" + a->labels()[static_cast<size_t>(i)] +
                                    ", " + a->labels()[static_cast<size_t>(j)] + ")");
    }
}

LinearMap inner_derivation(const AlgebraPtr& alg, const SparseVec& a) {
  LinearMap d = LinearMap::from_function(
      alg, alg, [&](const SparseVec& x) { return alg->comm(a, x); });
  validate_derivation(d);
  return d;
}

LappInstance build_lapp(const AlgebraPtr& a, const LinearMap& d, const LinearMap& g,
                        const Subspace& j) {
  if (d.domain_algebra() != a || g.domain_algebra() != a || j.alg != a)
    throw std::invalid_argument("derivations and ideal must live on the same algebra");
  validate_derivation(d);
  validate_derivation(g);

  const int32_t n = a->dim();
  std::optional<strucalg::QuotientResult> aq;
  if (j.dim() < n) aq = strucalg::quotient(a, j);  // also verifies J is an ideal
  const AlgebraPtr qalg = aq ? aq->algebra : nullptr;
  auto project = [&](const SparseVec& v) { return aq ? aq->project(v) : SparseVec{}; };

  std::vector<std::string> labels;
  for (const auto& l : a->labels()) labels.push_back("a." + l);
  if (qalg)
    for (const auto& l : qalg->labels()) labels.push_back("q." + l);

  strucalg::StructureAlgebra::ProductMap products;
  const auto& dcols = d.columns();
  const auto& gcols = g.columns();
  for (int32_t i = 0; i < n; ++i)
    for (int32_t jj = 0; jj < n; ++jj) {
      SparseVec entry = a->basis_product(i, jj);
      SparseVec tw = project(a->mul(dcols[static_cast<size_t>(i)], gcols[static_cast<size_t>(jj)]));
      if (!tw.empty()) {
        SparseVec sh = shifted(tw, n);
        entry.insert(entry.end(), sh.begin(), sh.end());
      }
      if (!entry.empty()) products[{i, jj}] = std::move(entry);
    }
  if (qalg) {
    std::vector<SparseVec> pis;
    for (int32_t i = 0; i < n; ++i) pis.push_back(aq->project(linalg::sv_unit(i)));
    for (int32_t i = 0; i < n; ++i)
      for (int32_t l = 0; l < qalg->dim(); ++l) {
        SparseVec p = qalg->mul(pis[static_cast<size_t>(i)], linalg::sv_unit(l));
        if (!p.empty()) products[{i, n + l}] = shifted(p, n);
        SparseVec q = qalg->mul(linalg::sv_unit(l), pis[static_cast<size_t>(i)]);
        if (!q.empty()) products[{n + l, i}] = shifted(q, n);
      }
  }
  std::optional<SparseVec> unit;
  if (a->is_unital()) unit = a->unit();  // (1, 0): derivations kill 1, pi(1) is the quotient unit
  AlgebraPtr b = strucalg::StructureAlgebra::create(
      a->name() + "*" + (qalg ? qalg->name() : "0"), std::move(labels), std::move(products),
      std::move(unit));

  std::vector<SparseVec> phi_cols;
  for (int32_t i = 0; i < n; ++i) {
    SparseVec col = linalg::sv_unit(i);
    SparseVec tw = project(d.apply(gcols[static_cast<size_t>(i)]));
    if (!tw.empty()) {
      SparseVec sh = shifted(linalg::sv_scale(tw, Rat(1, 2)), n);
      col.insert(col.end(), sh.begin(), sh.end());
    }
    phi_cols.push_back(std::move(col));
  }
  LinearMap phi(a, b, std::move(phi_cols));

  // [g(x), d(x)] is quadratic in x: the basis plus all pairwise sums certify
  // it for every x (char 0 polarization).
  bool cond = true;
  std::string witness;
  auto bracket_in_j = [&](const SparseVec& x, const SparseVec& gx, const SparseVec& dx) {
    if (j.contains(a->comm(gx, dx))) return true;
    cond = false;
    witness = a->show(x);
    return false;
  };
  for (int32_t i = 0; i < n && cond; ++i)
    bracket_in_j(linalg::sv_unit(i), gcols[static_cast<size_t>(i)], dcols[static_cast<size_t>(i)]);
  for (int32_t i = 0; i < n && cond; ++i)
    for (int32_t k = i + 1; k < n && cond; ++k)
      bracket_in_j(linalg::sv_add(linalg::sv_unit(i), linalg::sv_unit(k)),
                   linalg::sv_add(gcols[static_cast<size_t>(i)], gcols[static_cast<size_t>(k)]),
                   linalg::sv_add(dcols[static_cast<size_t>(i)], dcols[static_cast<size_t>(k)]));

  jordanmaps::JordanWitness cls = jordanmaps::is_jordan_hom(phi);
  return LappInstance{a,  d,   g,    j,       std::move(aq), b,
                      phi, cond, witness, cls};
}

bool lapp_obstruction(const LappInstance& inst, const SparseVec& s, const SparseVec& t) {
  const AlgebraPtr& a = inst.a;
  SparseVec val = linalg::sv_sub(a->mul(inst.g.apply(s), inst.d.apply(t)),
                                 a->mul(inst.d.apply(s), inst.g.apply(t)));
  return !inst.j.contains(val);
}

ExambResult build_examb(int n, int samples, uint64_t seed) {
  if (n < 4) throw std::invalid_argument("the construction needs at least 4 generators");
  AlgebraPtr a = strucalg::grassmann_algebra(n);
  const SparseVec e1 = linalg::sv_unit(1), e2 = linalg::sv_unit(2);
  LinearMap d = inner_derivation(a, e1);
  LinearMap g = inner_derivation(a, e2);

  // [a,x][b,x] = 0: a consequence of [[A,A],A] = 0, spot-checked honestly.
  sampling::Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    SparseVec u = rng.element(a->dim());
    SparseVec v = rng.element(a->dim());
    SparseVec x = rng.element(a->dim());
    if (!a->mul(a->comm(u, x), a->comm(v, x)).empty())
      throw std::logic_error("commutator product failed to vanish");
  }
  for (int32_t i = 0; i < a->dim(); ++i) {
    const SparseVec& dx = d.columns()[static_cast<size_t>(i)];
    const SparseVec& gx = g.columns()[static_cast<size_t>(i)];
    if (!a->mul(dx, gx).empty() || !a->mul(gx, dx).empty())
      throw std::logic_error("d(x)g(x) failed to vanish on a basis element");
  }
  LinearMap dg = jordanmaps::compose(d, g);
  for (const auto& col : dg.columns())
    if (!col.empty()) throw std::logic_error("dg failed to vanish as a matrix");

  LappInstance inst = build_lapp(a, d, g, strucalg::zero_subspace(a));

  const SparseVec e3 = linalg::sv_unit(4), e4 = linalg::sv_unit(8);
  SparseVec obstruction = linalg::sv_sub(a->mul(g.apply(e3), d.apply(e4)),
                                         a->mul(d.apply(e3), g.apply(e4)));
  if (obstruction != SparseVec{{15, Rat(8)}})
    throw std::logic_error("obstruction is not 8 e1e2e3e4");

  const int32_t dim = a->dim();
  std::vector<SparseVec> cols1, cols2;
  for (int32_t i = 0; i < dim; ++i) {
    SparseVec w = inst.aq->project(a->mul(e1, a->comm(e2, linalg::sv_unit(i))));
    SparseVec col1 = linalg::sv_unit(i);
    SparseVec sh = shifted(w, dim);
    col1.insert(col1.end(), sh.begin(), sh.end());
    cols1.push_back(std::move(col1));
    cols2.push_back(shifted(linalg::sv_scale(w, Rat(-1)), dim));
  }
  LinearMap phi1(a, inst.b, std::move(cols1));
  LinearMap phi2(a, inst.b, std::move(cols2));
  bool ok = jordanmaps::check_nearly_standard_witness(inst.phi, phi1, phi2);
  return ExambResult{std::move(inst), std::move(phi1), std::move(phi2), ok,
                     std::move(obstruction)};
}

strucalg::PolyElement PolyDerivationPair::d(const strucalg::PolyElement& p) {
  return strucalg::poly_derive(p, 1);
}

strucalg::PolyElement PolyDerivationPair::g(const strucalg::PolyElement& p) {
  return strucalg::poly_derive(p, 2);
}

CfinCReport build_cfin_c(const AlgebraPtr& a) {
  if (!a->is_unital())
    throw std::invalid_argument("the polynomial-extension certificate needs a unital algebra");
  Subspace k = strucalg::commutator_ideal(a);
  if (k.dim() == a->dim())
    throw std::invalid_argument("commutators already generate " + a->name() +
                                "; the certificate's hypothesis fails");
  strucalg::PolyElement s = strucalg::poly_term(a, 0, 1, a->unit());
  strucalg::PolyElement t = strucalg::poly_term(a, 1, 0, a->unit());
  strucalg::PolyElement obstruction =
      strucalg::poly_sub(strucalg::poly_mul(PolyDerivationPair::g(s), PolyDerivationPair::d(t)),
                         strucalg::poly_mul(PolyDerivationPair::d(s), PolyDerivationPair::g(t)));
  strucalg::SliceMembership membership = strucalg::poly_slice_membership(obstruction, k);
  return CfinCReport{PolyDerivationPair{a, k}, std::move(obstruction), membership,
                     !membership.all_contained};
}

CfinDReport build_cfin_d(const AlgebraPtr& a, const SparseVec& elem) {
  if (!a->is_unital())
    throw std::invalid_argument("the nearly-standard witness needs a unital algebra");
  Subspace k = strucalg::commutator_ideal(a);
  Subspace z = strucalg::center(a);
  linalg::RowEchelon sum;
  for (const auto& [p, row] : k.space.rows()) sum.insert(row);
  for (const auto& [p, row] : z.space.rows()) sum.insert(row);
  Subspace kz(a, std::move(sum));
  bool witness = !kz.contains(elem);
  return CfinDReport{std::move(kz), elem, witness};
}

}  // namespace jwb::counterex
