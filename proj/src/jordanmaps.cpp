#include "jwb/jordanmaps.hpp"

#include <sstream>

#include "json.hpp"
#include "jwb/sampling.hpp"

namespace jwb::jordanmaps {

namespace {

std::string pair_witness(const AlgebraPtr& a, const SparseVec& x, const SparseVec& y) {
  return "(" + a->show(x) + ", " + a->show(y) + ")";
}

SparseVec random_domain_element(sampling::Rng& rng, const LinearMap& phi) {
  if (!phi.restricted()) return rng.element(phi.domain_algebra()->dim());
  SparseVec v;
  std::vector<SparseVec> basis = phi.domain_space().space.basis();
  for (int t = 0; t < 4 && !basis.empty(); ++t) {
    size_t k = static_cast<size_t>(rng.next(basis.size()));
    v = linalg::sv_axpy(v, rng.rat(), basis[k]);
  }
  return v;
}

bool domain_product_closed(const LinearMap& phi) {
  if (!phi.restricted()) return true;
  const auto& sp = phi.domain_space();
  std::vector<SparseVec> basis = sp.space.basis();
  for (const auto& x : basis)
    for (const auto& y : basis)
      if (!sp.contains(phi.domain_algebra()->mul(x, y))) return false;
  return true;
}

}  // namespace

LinearMap::LinearMap(AlgebraPtr domain, AlgebraPtr codomain, std::vector<SparseVec> cols)
    : domain_alg_(std::move(domain)), codomain_(std::move(codomain)), cols_(std::move(cols)) {
  if (static_cast<int>(cols_.size()) != domain_alg_->dim())
    throw std::invalid_argument("linear map: column count differs from domain dimension");
}

LinearMap::LinearMap(Subspace domain, AlgebraPtr codomain, std::vector<SparseVec> cols)
    : domain_alg_(domain.alg), codomain_(std::move(codomain)), space_(std::move(domain)),
      cols_(std::move(cols)) {
  if (static_cast<int>(cols_.size()) != space_->dim())
    throw std::invalid_argument("linear map: column count differs from domain dimension");
}

LinearMap LinearMap::from_function(const AlgebraPtr& domain, const AlgebraPtr& codomain,
                                   const std::function<SparseVec(const SparseVec&)>& f) {
  std::vector<SparseVec> cols;
  for (int32_t i = 0; i < domain->dim(); ++i) cols.push_back(f(linalg::sv_unit(i)));
  return LinearMap(domain, codomain, std::move(cols));
}

LinearMap LinearMap::from_function(const Subspace& domain, const AlgebraPtr& codomain,
                                   const std::function<SparseVec(const SparseVec&)>& f) {
  std::vector<SparseVec> cols;
  for (const auto& b : domain.space.basis()) cols.push_back(f(b));
  return LinearMap(domain, codomain, std::move(cols));
}

LinearMap LinearMap::identity(const AlgebraPtr& a) {
  return from_function(a, a, [](const SparseVec& v) { return v; });
}

const Subspace& LinearMap::domain_space() const {
  if (!space_) throw std::logic_error("map domain is the whole algebra");
  return *space_;
}

std::vector<SparseVec> LinearMap::domain_basis() const {
  if (space_) return space_->space.basis();
  std::vector<SparseVec> out;
  for (int32_t i = 0; i < domain_alg_->dim(); ++i) out.push_back(linalg::sv_unit(i));
  return out;
}

SparseVec LinearMap::apply(const SparseVec& v) const {
  if (!space_) {
    SparseVec out;
    for (const auto& [i, c] : v) out = linalg::sv_axpy(out, c, cols_[static_cast<size_t>(i)]);
    return out;
  }
  std::vector<Rat> coords;
  SparseVec res = space_->space.reduce_with_coords(v, &coords);
  if (!res.empty())
    throw std::invalid_argument("map argument (" + domain_alg_->show(v) +
                                ") lies outside the restricted domain");
  SparseVec out;
  for (size_t k = 0; k < coords.size(); ++k)
    if (coords[k] != 0) out = linalg::sv_axpy(out, coords[k], cols_[k]);
  return out;
}

int LinearMap::rank() const { return linalg::span_of(cols_).dim(); }

LinearMap compose(const LinearMap& psi, const LinearMap& phi) {
  if (psi.restricted())
    throw std::invalid_argument("compose: outer map must be defined on a whole algebra");
  if (psi.domain_algebra() != phi.codomain())
    throw std::invalid_argument("compose: codomain/domain mismatch");
  std::vector<SparseVec> cols;
  for (const auto& c : phi.columns()) cols.push_back(psi.apply(c));
  if (phi.restricted()) return LinearMap(phi.domain_space(), psi.codomain(), std::move(cols));
  return LinearMap(phi.domain_algebra(), psi.codomain(), std::move(cols));
}

JordanWitness is_jordan_hom(const LinearMap& phi, int samples, uint64_t seed) {
  const AlgebraPtr& a = phi.domain_algebra();
  const AlgebraPtr& b = phi.codomain();
  std::vector<SparseVec> basis = phi.domain_basis();
  if (phi.restricted()) {
    for (const auto& x : basis)
      for (const auto& y : basis)
        if (!phi.domain_space().contains(a->jordan(x, y)))
          throw std::invalid_argument("domain is not closed under the Jordan product at " +
                                      pair_witness(a, x, y));
  }
  JordanWitness w;
  w.jordan = true;
  for (const auto& x : basis) {
    SparseVec px = phi.apply(x);
    for (const auto& y : basis) {
      SparseVec lhs = phi.apply(a->jordan(x, y));
      SparseVec rhs = b->jordan(px, phi.apply(y));
      if (lhs != rhs) {
        w.jordan = false;
        w.counterexample = {x, y};
        return w;
      }
    }
  }
  const bool assoc = domain_product_closed(phi);
  if (assoc) {
    w.hom = true;
    w.antihom = true;
    for (const auto& x : basis) {
      SparseVec px = phi.apply(x);
      for (const auto& y : basis) {
        SparseVec pxy = phi.apply(a->mul(x, y));
        SparseVec py = phi.apply(y);
        if (pxy != b->mul(px, py)) w.hom = false;
        if (pxy != b->mul(py, px)) w.antihom = false;
        if (!w.hom && !w.antihom) break;
      }
      if (!w.hom && !w.antihom) break;
    }
    // Squared and sandwich consequences, spot-checked.
    sampling::Rng rng(seed);
    for (int s = 0; s < samples; ++s) {
      SparseVec x = random_domain_element(rng, phi);
      SparseVec y = random_domain_element(rng, phi);
      SparseVec px = phi.apply(x), py = phi.apply(y);
      if (phi.apply(a->mul(x, x)) != b->mul(px, px) ||
          phi.apply(a->mul(a->mul(x, y), x)) != b->mul(b->mul(px, py), px)) {
        w.jordan = false;
        w.counterexample = {x, y};
        return w;
      }
    }
  }
  return w;
}

CheckReport check_jr_identities(const LinearMap& phi) {
  const AlgebraPtr& a = phi.domain_algebra();
  const AlgebraPtr& b = phi.codomain();
  if (!domain_product_closed(phi))
    throw std::invalid_argument("jr identities need a domain closed under the product");
  std::vector<SparseVec> basis = phi.domain_basis();
  std::vector<SparseVec> images;
  images.reserve(basis.size());
  for (const auto& x : basis) images.push_back(phi.apply(x));
  // The cubic term (a phi(x)) b vanishes for an image phi(e_k) = sum over t
  // unless some first-step product e_s e_t (s in supp(a), t in supp(image))
  // has support meeting a left partner set of supp(b); by bilinearity the
  // skipped images contribute exactly zero, so the sweep stays exhaustive.
  // carriers[t] lists the domain indices whose image touches t.
  const size_t bdim = static_cast<size_t>(b->dim());
  std::vector<std::vector<size_t>> carriers(bdim);
  for (size_t k = 0; k < images.size(); ++k)
    for (const auto& [s, c] : images[k]) carriers[static_cast<size_t>(s)].push_back(k);
  std::vector<uint32_t> mark_a(bdim, 0), mark_b(bdim, 0);
  std::vector<uint32_t> kmark(images.size(), 0);
  std::vector<size_t> cand;
  uint32_t tick = 0;
  CheckReport rep;
  for (size_t ui = 0; ui < basis.size(); ++ui) {
    for (size_t vi = 0; vi < basis.size(); ++vi) {
      SparseVec puv = phi.apply(a->mul(basis[ui], basis[vi]));
      SparseVec av = linalg::sv_sub(puv, b->mul(images[ui], images[vi]));
      SparseVec bv = linalg::sv_sub(puv, b->mul(images[vi], images[ui]));
      if (!b->mul(av, bv).empty() || !b->mul(bv, av).empty()) {
        rep.passed = false;
        rep.witness = "ab = ba = 0 fails at " + pair_witness(a, basis[ui], basis[vi]);
        return rep;
      }
      if (av.empty() && bv.empty()) continue;  // a = b = 0 kills the cubic identity
      ++tick;
      for (const auto& [w, cw] : av)
        for (int32_t r : b->left_partners()[static_cast<size_t>(w)])
          mark_a[static_cast<size_t>(r)] = tick;
      for (const auto& [w, cw] : bv)
        for (int32_t r : b->left_partners()[static_cast<size_t>(w)])
          mark_b[static_cast<size_t>(r)] = tick;
      cand.clear();
      auto gather = [&](const SparseVec& first, const std::vector<uint32_t>& second_left) {
        for (const auto& [s, cs] : first)
          for (int32_t t : b->right_partners()[static_cast<size_t>(s)]) {
            bool hit = false;
            for (const auto& [r, cr] : b->basis_product(s, t))
              if (second_left[static_cast<size_t>(r)] == tick) {
                hit = true;
                break;
              }
            if (!hit) continue;
            for (size_t k : carriers[static_cast<size_t>(t)])
              if (kmark[k] != tick) {
                kmark[k] = tick;
                cand.push_back(k);
              }
          }
      };
      gather(av, mark_b);
      gather(bv, mark_a);
      for (size_t k : cand) {
        const SparseVec& img = images[k];
        SparseVec sum =
            linalg::sv_add(b->mul(b->mul(av, img), bv), b->mul(b->mul(bv, img), av));
        if (!sum.empty()) {
          rep.passed = false;
          rep.witness = "a phi(x) b + b phi(x) a = 0 fails at " +
                        pair_witness(a, basis[ui], basis[vi]);
          return rep;
        }
      }
    }
  }
  return rep;
}

namespace {

// One side of (ene): sum_{i=0}^{m} y^i w y^{m-i} with y^0 skipped.
SparseVec ene_sum(const AlgebraPtr& alg, const SparseVec& y, const SparseVec& w, int m) {
  SparseVec acc;
  for (int i = 0; i <= m; ++i) {
    SparseVec t = w;
    if (i > 0) t = alg->mul(alg->power(y, i), t);
    if (m - i > 0) t = alg->mul(t, alg->power(y, m - i));
    acc = linalg::sv_add(acc, t);
  }
  return acc;
}

SparseVec ene_rhs(const AlgebraPtr& alg, const SparseVec& py, const SparseVec& pw, int m) {
  SparseVec acc;
  for (int i = 0; i <= m; ++i) {
    SparseVec t = pw;
    if (i > 0) t = alg->mul(alg->power(py, i), t);
    if (m - i > 0) t = alg->mul(t, alg->power(py, m - i));
    acc = linalg::sv_add(acc, t);
  }
  return acc;
}

SparseVec ene_defect(const LinearMap& phi, const SparseVec& y, const SparseVec& w, int m) {
  SparseVec lhs = phi.apply(ene_sum(phi.domain_algebra(), y, w, m));
  SparseVec rhs = ene_rhs(phi.codomain(), phi.apply(y), phi.apply(w), m);
  return linalg::sv_sub(lhs, rhs);
}

constexpr uint64_t kExpansionBudget = uint64_t(1) << 22;

// d^slots * 2^splits, saturating once past the budget.
uint64_t expansion_cost(uint64_t d, int slots, int splits) {
  if (d == 0) return 0;
  uint64_t cost = uint64_t(1) << splits;
  for (int t = 0; t < slots; ++t) {
    if (cost > kExpansionBudget) return kExpansionBudget + 1;
    cost *= d;
  }
  return cost;
}

}  // namespace

CheckReport check_ene(const LinearMap& phi, int m_max, int samples, uint64_t seed,
                      bool exhaustive) {
  const AlgebraPtr& a = phi.domain_algebra();
  CheckReport rep;
  if (!exhaustive) {
    sampling::Rng rng(seed);
    for (int s = 0; s < samples; ++s) {
      SparseVec y = random_domain_element(rng, phi);
      SparseVec w = random_domain_element(rng, phi);
      for (int m = 0; m <= m_max; ++m) {
        if (!ene_defect(phi, y, w, m).empty()) {
          rep.passed = false;
          rep.witness = "power-sum identity fails at m = " + std::to_string(m) + " with y = " +
                        a->show(y) + ", w = " + a->show(w);
          return rep;
        }
      }
    }
    return rep;
  }
  // Finite-difference multilinear expansion: for homogeneous degree m in y the
  // alternating sum over subsets extracts the multilinearization, and its
  // vanishing on all basis tuples proves the identity over Q.
  std::vector<SparseVec> basis = phi.domain_basis();
  const uint64_t d = basis.size();
  for (int m = 1; m <= m_max; ++m) {
    if (expansion_cost(d, m + 1, m) > kExpansionBudget)
      throw std::invalid_argument("exhaustive expansion exceeds the budget at m = " +
                                  std::to_string(m));
  }
  for (int m = 1; m <= m_max; ++m) {
    std::vector<size_t> tup(static_cast<size_t>(m) + 1, 0);  // tup[0..m-1] = y slots, tup[m] = w
    for (;;) {
      SparseVec total;
      for (uint32_t mask = 0; mask < (uint32_t(1) << m); ++mask) {
        SparseVec y;
        for (int t = 0; t < m; ++t)
          if (mask & (uint32_t(1) << t)) y = linalg::sv_add(y, basis[tup[static_cast<size_t>(t)]]);
        int sign = (m - __builtin_popcount(mask)) % 2 == 0 ? 1 : -1;
        total = linalg::sv_axpy(total, Rat(sign),
                                ene_defect(phi, y, basis[tup[static_cast<size_t>(m)]], m));
      }
      if (!total.empty()) {
        rep.passed = false;
        rep.witness = "multilinearized power-sum identity fails at m = " + std::to_string(m);
        return rep;
      }
      size_t t = 0;
      while (t <= static_cast<size_t>(m) && ++tup[t] == d) tup[t++] = 0;
      if (t > static_cast<size_t>(m)) break;
    }
  }
  return rep;
}

CheckReport check_deve(const LinearMap& phi, int samples, uint64_t seed, bool exhaustive) {
  const AlgebraPtr& a = phi.domain_algebra();
  const AlgebraPtr& b = phi.codomain();
  CheckReport rep;
  auto defect = [&](const SparseVec& x, const SparseVec& u, const SparseVec& v) {
    SparseVec lhs = phi.apply(a->comm(x, a->comm(u, v)));
    SparseVec rhs = b->comm(phi.apply(x), b->comm(phi.apply(u), phi.apply(v)));
    return linalg::sv_sub(lhs, rhs);
  };
  if (exhaustive) {
    // Trilinear, so basis triples are a proof.
    std::vector<SparseVec> basis = phi.domain_basis();
    for (const auto& x : basis)
      for (const auto& u : basis)
        for (const auto& v : basis)
          if (!defect(x, u, v).empty()) {
            rep.passed = false;
            rep.witness = "double-bracket identity fails at (" + a->show(x) + ", " +
                          a->show(u) + ", " + a->show(v) + ")";
            return rep;
          }
    return rep;
  }
  sampling::Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    SparseVec x = random_domain_element(rng, phi);
    SparseVec u = random_domain_element(rng, phi);
    SparseVec v = random_domain_element(rng, phi);
    if (!defect(x, u, v).empty()) {
      rep.passed = false;
      rep.witness = "double-bracket identity fails at (" + a->show(x) + ", " + a->show(u) +
                    ", " + a->show(v) + ")";
      return rep;
    }
  }
  return rep;
}

namespace {

SparseVec le2_defect(const LinearMap& phi, const SparseVec& u, const SparseVec& v,
                     const SparseVec& x, int n) {
  const AlgebraPtr& a = phi.domain_algebra();
  const AlgebraPtr& b = phi.codomain();
  SparseVec y = a->comm(u, v);
  SparseVec lhs = phi.apply(y.empty() ? SparseVec{} : a->comm(x, a->power(y, n)));
  SparseVec ytilde = b->comm(phi.apply(u), phi.apply(v));
  SparseVec py = phi.apply(y);
  SparseVec t = n == 1 ? ytilde : b->mul(b->power(py, n - 1), ytilde);
  SparseVec rhs = b->comm(phi.apply(x), t);
  return linalg::sv_sub(lhs, rhs);
}

}  // namespace

CheckReport check_le2(const LinearMap& phi, const std::vector<int>& n_set, int samples,
                      uint64_t seed, bool exhaustive) {
  for (int n : n_set) {
    if (n == 2)
      throw std::invalid_argument(
          "n = 2 is excluded from the bracket-power identity; use le2_n2_search");
    if (n < 1) throw std::invalid_argument("bracket-power exponent must be >= 1");
  }
  const AlgebraPtr& a = phi.domain_algebra();
  CheckReport rep;
  if (!exhaustive) {
    sampling::Rng rng(seed);
    for (int s = 0; s < samples; ++s) {
      SparseVec u = random_domain_element(rng, phi);
      SparseVec v = random_domain_element(rng, phi);
      SparseVec x = random_domain_element(rng, phi);
      for (int n : n_set) {
        if (!le2_defect(phi, u, v, x, n).empty()) {
          rep.passed = false;
          rep.witness = "bracket-power identity fails at n = " + std::to_string(n) +
                        " with u = " + a->show(u) + ", v = " + a->show(v) + ", x = " + a->show(x);
          return rep;
        }
      }
    }
    return rep;
  }
  // Finite-difference expansion over (u^n, v^n, x): homogeneous multidegree
  // (n, n, 1), so vanishing of the alternating subset sums on basis tuples is
  // a proof.
  std::vector<SparseVec> basis = phi.domain_basis();
  const uint64_t d = basis.size();
  for (int n : n_set) {
    if (expansion_cost(d, 2 * n + 1, 2 * n) > kExpansionBudget)
      throw std::invalid_argument("exhaustive expansion exceeds the budget at n = " +
                                  std::to_string(n));
  }
  for (int n : n_set) {
    std::vector<size_t> tup(static_cast<size_t>(2 * n + 1), 0);
    for (;;) {
      SparseVec total;
      for (uint32_t um = 0; um < (uint32_t(1) << n); ++um) {
        SparseVec uu;
        for (int t = 0; t < n; ++t)
          if (um & (uint32_t(1) << t)) uu = linalg::sv_add(uu, basis[tup[static_cast<size_t>(t)]]);
        int usign = (n - __builtin_popcount(um)) % 2 == 0 ? 1 : -1;
        for (uint32_t vm = 0; vm < (uint32_t(1) << n); ++vm) {
          SparseVec vv;
          for (int t = 0; t < n; ++t)
            if (vm & (uint32_t(1) << t))
              vv = linalg::sv_add(vv, basis[tup[static_cast<size_t>(n + t)]]);
          int sign = usign * ((n - __builtin_popcount(vm)) % 2 == 0 ? 1 : -1);
          total = linalg::sv_axpy(
              total, Rat(sign),
              le2_defect(phi, uu, vv, basis[tup[static_cast<size_t>(2 * n)]], n));
        }
      }
      if (!total.empty()) {
        rep.passed = false;
        rep.witness = "multilinearized bracket-power identity fails at n = " + std::to_string(n);
        return rep;
      }
      size_t t = 0;
      while (t < static_cast<size_t>(2 * n + 1) && ++tup[t] == d) tup[t++] = 0;
      if (t >= static_cast<size_t>(2 * n + 1)) break;
    }
  }
  return rep;
}

N2Exploration le2_n2_search(const LinearMap& phi, int samples, uint64_t seed) {
  const AlgebraPtr& a = phi.domain_algebra();
  sampling::Rng rng(seed);
  N2Exploration out;
  out.samples = samples;
  for (int s = 0; s < samples; ++s) {
    SparseVec u = random_domain_element(rng, phi);
    SparseVec v = random_domain_element(rng, phi);
    SparseVec x = random_domain_element(rng, phi);
    if (!le2_defect(phi, u, v, x, 2).empty()) {
      ++out.violations;
      if (out.example.empty())
        out.example = "u = " + a->show(u) + ", v = " + a->show(v) + ", x = " + a->show(x);
    }
  }
  return out;
}

DecomposeResult standard_decompose(const LinearMap& phi) {
  if (phi.restricted())
    throw std::invalid_argument("decomposition search expects a whole-algebra domain");
  const AlgebraPtr& a = phi.domain_algebra();
  const AlgebraPtr& b = phi.codomain();
  JordanWitness w = is_jordan_hom(phi);
  if (!w.jordan)
    throw std::invalid_argument("decomposition search requires a Jordan homomorphism");
  DecomposeResult out;
  if (phi.rank() != b->dim()) {
    out.diagnosis = "map is not surjective (rank " + std::to_string(phi.rank()) + " < dim " +
                    std::to_string(b->dim()) + ")";
    return out;
  }
  if (!b->is_unital()) {
    out.diagnosis = "codomain has no unit; the complementary candidate 1 - e is undefined";
    return out;
  }
  std::vector<SparseVec> candidates;
  try {
    candidates = strucalg::central_idempotents(b);
  } catch (const strucalg::InconclusiveCenter& e) {
    out.diagnosis = e.what();
    return out;
  }
  const int dim = a->dim();
  std::vector<SparseVec> images;
  for (int32_t i = 0; i < dim; ++i) images.push_back(phi.apply(linalg::sv_unit(i)));
  auto scaled_is_hom = [&](const SparseVec& eps, bool anti) {
    std::vector<SparseVec> scaled;
    scaled.reserve(images.size());
    for (const auto& img : images) scaled.push_back(b->mul(eps, img));
    for (int32_t i = 0; i < dim; ++i)
      for (int32_t j = 0; j < dim; ++j) {
        SparseVec lhs;
        for (const auto& [k, c] : a->basis_product(i, j))
          lhs = linalg::sv_axpy(lhs, c, scaled[static_cast<size_t>(k)]);
        SparseVec rhs = anti ? b->mul(scaled[static_cast<size_t>(j)], scaled[static_cast<size_t>(i)])
                             : b->mul(scaled[static_cast<size_t>(i)], scaled[static_cast<size_t>(j)]);
        if (lhs != rhs) return false;
      }
    return true;
  };
  for (const auto& eps : candidates) {
    SparseVec comp = linalg::sv_sub(b->unit(), eps);
    if (!scaled_is_hom(eps, false) || !scaled_is_hom(comp, true)) continue;
    // The two halves must annihilate each other; automatic, but audited.
    for (const auto& x : images)
      for (const auto& y : images)
        if (!b->mul(b->mul(eps, x), b->mul(comp, y)).empty())
          throw std::logic_error("decomposition halves fail to annihilate");
    if (!out.found) {
      out.found = true;
      out.epsilon = eps;
    }
    out.all_passing.push_back(eps);
  }
  if (!out.found) {
    std::ostringstream os;
    os << "no central idempotent splits the map;";
    os << " domain unital: " << (a->is_unital() ? "yes" : "no") << ";";
    os << " commutators generate the domain: "
       << (strucalg::commutator_ideal(a).dim() == a->dim() ? "yes" : "no");
    out.diagnosis = os.str();
  }
  return out;
}

bool check_nearly_standard_witness(const LinearMap& phi, const LinearMap& phi1,
                                   const LinearMap& phi2) {
  const AlgebraPtr& a = phi.domain_algebra();
  const AlgebraPtr& b = phi.codomain();
  if (phi1.domain_algebra() != a || phi2.domain_algebra() != a || phi1.codomain() != b ||
      phi2.codomain() != b || phi.restricted() || phi1.restricted() || phi2.restricted())
    throw std::invalid_argument("witness maps must share the whole-algebra domain and codomain");
  for (int i = 0; i < phi.domain_dim(); ++i)
    if (phi.columns()[static_cast<size_t>(i)] !=
        linalg::sv_add(phi1.columns()[static_cast<size_t>(i)],
                       phi2.columns()[static_cast<size_t>(i)]))
      return false;
  const int dim = a->dim();
  for (int32_t i = 0; i < dim; ++i) {
    SparseVec px = phi.apply(linalg::sv_unit(i));
    for (int32_t j = 0; j < dim; ++j) {
      SparseVec lhs = phi.apply(a->basis_product(i, j));
      SparseVec rhs = linalg::sv_add(
          b->mul(px, phi1.apply(linalg::sv_unit(j))),
          b->mul(phi2.apply(linalg::sv_unit(j)), px));
      if (lhs != rhs) return false;
    }
  }
  return true;
}

namespace {

// Exact unit of a structure tensor, when one exists: solves u e_i = e_i = e_i u
// as one stacked sparse system over the k unknown coefficients of u.
std::optional<SparseVec> tensor_unit(int k, const strucalg::StructureAlgebra::ProductMap& products) {
  std::vector<std::vector<std::pair<int32_t, Rat>>> left(static_cast<size_t>(k)),
      right(static_cast<size_t>(k));
  const int32_t off = static_cast<int32_t>(k) * k;
  for (const auto& [key, p] : products) {
    auto [x, y] = key;
    for (const auto& [r, c] : p) {
      left[static_cast<size_t>(x)].emplace_back(y * k + r, c);
      right[static_cast<size_t>(y)].emplace_back(off + x * k + r, c);
    }
  }
  std::vector<SparseVec> cols;
  for (int j = 0; j < k; ++j) {
    SparseVec col = std::move(left[static_cast<size_t>(j)]);
    col.insert(col.end(), right[static_cast<size_t>(j)].begin(),
               right[static_cast<size_t>(j)].end());
    cols.push_back(std::move(col));
  }
  SparseVec target;
  for (int32_t i = 0; i < k; ++i) target.emplace_back(i * k + i, Rat(1));
  for (int32_t i = 0; i < k; ++i) target.emplace_back(off + i * k + i, Rat(1));
  std::optional<std::vector<Rat>> sol = linalg::solve(cols, target);
  if (!sol) return std::nullopt;
  std::vector<std::pair<int32_t, Rat>> u;
  for (int32_t j = 0; j < k; ++j)
    if ((*sol)[static_cast<size_t>(j)] != 0) u.emplace_back(j, (*sol)[static_cast<size_t>(j)]);
  return linalg::sv_normalize(std::move(u));
}

}  // namespace

AnnQuotient ann_quotient_map(const LinearMap& phi) {
  const AlgebraPtr& b = phi.codomain();
  AnnQuotient out;
  out.b_prime = strucalg::subalgebra_span(b, phi.columns());
  out.ann = strucalg::zero_subspace(b);
  if (out.b_prime.dim() == 0) return out;  // zero image: both algebras degenerate

  // B' as an algebra in its own coordinates.
  std::vector<SparseVec> basis = out.b_prime.space.basis();
  const int k = static_cast<int>(basis.size());
  std::vector<std::string> labels;
  for (int i = 0; i < k; ++i) labels.push_back("s" + std::to_string(i));
  strucalg::StructureAlgebra::ProductMap products;
  for (int32_t i = 0; i < k; ++i)
    for (int32_t j = 0; j < k; ++j) {
      SparseVec p = b->mul(basis[static_cast<size_t>(i)], basis[static_cast<size_t>(j)]);
      if (p.empty()) continue;
      std::vector<Rat> coords;
      SparseVec res = out.b_prime.space.reduce_with_coords(p, &coords);
      if (!res.empty()) throw std::logic_error("image span is not multiplicatively closed");
      SparseVec pc;
      for (int t = 0; t < k; ++t)
        if (coords[static_cast<size_t>(t)] != 0) pc.emplace_back(t, coords[static_cast<size_t>(t)]);
      if (!pc.empty()) products[{i, j}] = std::move(pc);
    }
  std::optional<SparseVec> unit = tensor_unit(k, products);
  out.b_prime_algebra = strucalg::StructureAlgebra::create(
      b->name() + "'", std::move(labels), std::move(products), std::move(unit));

  strucalg::Subspace ann_local = strucalg::annihilator(out.b_prime_algebra);
  for (const auto& [p, row] : ann_local.space.rows()) {
    SparseVec amb;
    for (const auto& [t, c] : row) amb = linalg::sv_axpy(amb, c, basis[static_cast<size_t>(t)]);
    out.ann.space.insert(amb);
  }
  if (ann_local.dim() == k) return out;  // quotient collapses to zero

  strucalg::QuotientResult q = strucalg::quotient(out.b_prime_algebra, ann_local);
  out.bq = q.algebra;
  std::vector<SparseVec> cols;
  for (const auto& c : phi.columns()) {
    std::vector<Rat> coords;
    SparseVec res = out.b_prime.space.reduce_with_coords(c, &coords);
    if (!res.empty()) throw std::logic_error("image escapes its own span");
    SparseVec local;
    for (int t = 0; t < k; ++t)
      if (coords[static_cast<size_t>(t)] != 0) local.emplace_back(t, coords[static_cast<size_t>(t)]);
    cols.push_back(q.project(local));
  }
  if (phi.restricted())
    out.phi_bar = LinearMap(phi.domain_space(), out.bq, std::move(cols));
  else
    out.phi_bar = LinearMap(phi.domain_algebra(), out.bq, std::move(cols));
  return out;
}

std::string save_map_json(const LinearMap& phi) {
  nlohmann::json j;
  j["domain"] = phi.domain_algebra()->name();
  j["codomain"] = phi.codomain()->name();
  nlohmann::json rows = nlohmann::json::array();
  const int cod = phi.codomain()->dim();
  for (int32_t i = 0; i < cod; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& col : phi.columns()) row.push_back(rat_to_string(linalg::sv_get(col, i)));
    rows.push_back(std::move(row));
  }
  j["matrix"] = std::move(rows);
  return j.dump(2) + "\n";
}

LinearMap load_map_json(const std::string& text, const AlgebraPtr& domain,
                        const AlgebraPtr& codomain) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("map JSON: ") + e.what());
  }
  try {
    if (j.at("domain").get<std::string>() != domain->name() ||
        j.at("codomain").get<std::string>() != codomain->name())
      throw std::invalid_argument("map JSON: algebra names do not match");
    const auto& rows = j.at("matrix");
    if (static_cast<int>(rows.size()) != codomain->dim())
      throw std::invalid_argument("map JSON: row count differs from codomain dimension");
    std::vector<std::vector<std::pair<int32_t, Rat>>> raw(
        static_cast<size_t>(domain->dim()));
    for (int32_t i = 0; i < codomain->dim(); ++i) {
      const auto& row = rows[static_cast<size_t>(i)];
      if (static_cast<int>(row.size()) != domain->dim())
        throw std::invalid_argument("map JSON: column count differs from domain dimension");
      for (int32_t jx = 0; jx < domain->dim(); ++jx) {
        Rat c = rat_from_string(row[static_cast<size_t>(jx)].get<std::string>());
        if (c != 0) raw[static_cast<size_t>(jx)].emplace_back(i, c);
      }
    }
    std::vector<SparseVec> cols;
    for (auto& r : raw) cols.push_back(linalg::sv_normalize(std::move(r)));
    return LinearMap(domain, codomain, std::move(cols));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("map JSON: ") + e.what());
  }
}

}  // namespace jwb::jordanmaps
