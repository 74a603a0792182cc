#include "jwb/strucalg.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <tuple>

#include "jwb/sampling.hpp"

namespace jwb::strucalg {

namespace {

uint64_t key64(int32_t i, int32_t j) {
  return (static_cast<uint64_t>(static_cast<uint32_t>(i)) << 32) |
         static_cast<uint32_t>(j);
}

void check_vec_range(const SparseVec& v, int dim, const char* what) {
  int32_t prev = -1;
  for (const auto& [i, c] : v) {
    if (i < 0 || i >= dim) throw std::invalid_argument(std::string(what) + ": index out of range");
    if (i <= prev) throw std::invalid_argument(std::string(what) + ": indices not strictly ascending");
    if (c == 0) throw std::invalid_argument(std::string(what) + ": stored zero coefficient");
    prev = i;
  }
}

// Sorted deduplicated union of partner lists.
std::vector<int32_t> partner_union(const std::vector<const std::vector<int32_t>*>& lists) {
  std::vector<int32_t> out;
  for (const auto* l : lists) out.insert(out.end(), l->begin(), l->end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

const SparseVec& StructureAlgebra::basis_product(int32_t i, int32_t j) const {
  static const SparseVec kZero;
  auto it = index_.find(key64(i, j));
  return it == index_.end() ? kZero : *it->second;
}

const SparseVec& StructureAlgebra::unit() const {
  if (!unit_) throw std::logic_error(name_ + " has no unit");
  return *unit_;
}

SparseVec StructureAlgebra::mul(const SparseVec& x, const SparseVec& y) const {
  std::map<int32_t, Rat> acc;
  for (const auto& [i, ci] : x) {
    for (const auto& [j, cj] : y) {
      auto it = index_.find(key64(i, j));
      if (it == index_.end()) continue;
      Rat c = ci * cj;
      for (const auto& [k, ck] : *it->second) acc[k] += c * ck;
    }
  }
  SparseVec out;
  for (auto& [k, c] : acc)
    if (c != 0) out.emplace_back(k, std::move(c));
  return out;
}

SparseVec StructureAlgebra::power(const SparseVec& x, int n) const {
  if (n < 1) throw std::invalid_argument("power: exponent must be >= 1");
  SparseVec out = x;
  for (int t = 1; t < n; ++t) out = mul(out, x);
  return out;
}

AlgebraPtr StructureAlgebra::create(std::string name, std::vector<std::string> labels,
                                    ProductMap products, std::optional<SparseVec> unit,
                                    bool validate) {
  auto alg = std::shared_ptr<StructureAlgebra>(new StructureAlgebra());
  alg->name_ = std::move(name);
  alg->labels_ = std::move(labels);
  alg->products_ = std::move(products);
  alg->unit_ = std::move(unit);
  const int dim = alg->dim();
  if (dim == 0) throw std::invalid_argument("algebra must have dimension >= 1");
  {
    std::set<std::string> seen;
    for (const auto& l : alg->labels_) {
      if (l.empty()) throw std::invalid_argument("empty basis label");
      if (!seen.insert(l).second) throw std::invalid_argument("duplicate basis label: " + l);
    }
  }
  alg->right_of_.assign(dim, {});
  alg->left_of_.assign(dim, {});
  for (auto it = alg->products_.begin(); it != alg->products_.end();) {
    const auto& [i, j] = it->first;
    if (i < 0 || i >= dim || j < 0 || j >= dim)
      throw std::invalid_argument("structure entry index out of range");
    check_vec_range(it->second, dim, "structure entry");
    if (it->second.empty()) {
      it = alg->products_.erase(it);
      continue;
    }
    alg->index_.emplace(key64(i, j), &it->second);
    alg->right_of_[i].push_back(j);
    alg->left_of_[j].push_back(i);
    ++it;
  }
  if (alg->unit_) check_vec_range(*alg->unit_, dim, "unit");

  if (validate) {
    auto mul_vb = [&](const SparseVec& v, int32_t k) {
      std::map<int32_t, Rat> acc;
      for (const auto& [t, c] : v)
        for (const auto& [s, cs] : alg->basis_product(t, k)) acc[s] += c * cs;
      SparseVec out;
      for (auto& [s, c] : acc)
        if (c != 0) out.emplace_back(s, std::move(c));
      return out;
    };
    auto mul_bv = [&](int32_t i, const SparseVec& v) {
      std::map<int32_t, Rat> acc;
      for (const auto& [t, c] : v)
        for (const auto& [s, cs] : alg->basis_product(i, t)) acc[s] += c * cs;
      SparseVec out;
      for (auto& [s, c] : acc)
        if (c != 0) out.emplace_back(s, std::move(c));
      return out;
    };
    auto fail = [&](int32_t i, int32_t j, int32_t k, const SparseVec& lhs, const SparseVec& rhs) {
      std::ostringstream os;
      os << alg->name_ << ": associativity fails at (" << alg->labels_[i] << ", "
         << alg->labels_[j] << ", " << alg->labels_[k] << "): (ab)c = " << alg->show(lhs)
         << " but a(bc) = " << alg->show(rhs);
      throw std::invalid_argument(os.str());
    };
    // Triples with e_i e_j != 0; candidate k limited to indices that can make
    // either side nonzero.
    for (const auto& [ij, pij] : alg->products_) {
      const auto& [i, j] = ij;
      std::vector<const std::vector<int32_t>*> lists{&alg->right_of_[j]};
      for (const auto& [t, c] : pij) lists.push_back(&alg->right_of_[t]);
      std::vector<int32_t> ks;
      for (const auto* l : lists) ks.insert(ks.end(), l->begin(), l->end());
      std::sort(ks.begin(), ks.end());
      ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
      for (int32_t k : ks) {
        SparseVec lhs = mul_vb(pij, k);
        SparseVec rhs = mul_bv(i, alg->basis_product(j, k));
        if (lhs != rhs) fail(i, j, k, lhs, rhs);
      }
    }
    // Remaining triples with e_j e_k != 0 but e_i e_j = 0: left side is zero.
    for (const auto& [jk, pjk] : alg->products_) {
      const auto& [j, k] = jk;
      std::vector<int32_t> is;
      for (const auto& [s, c] : pjk)
        is.insert(is.end(), alg->left_of_[s].begin(), alg->left_of_[s].end());
      std::sort(is.begin(), is.end());
      is.erase(std::unique(is.begin(), is.end()), is.end());
      for (int32_t i : is) {
        if (alg->index_.count(key64(i, j))) continue;  // covered above
        SparseVec rhs = mul_bv(i, pjk);
        if (!rhs.empty()) fail(i, j, k, {}, rhs);
      }
    }
    if (alg->unit_) {
      for (int32_t i = 0; i < dim; ++i) {
        if (alg->mul(*alg->unit_, linalg::sv_unit(i)) != linalg::sv_unit(i) ||
            alg->mul(linalg::sv_unit(i), *alg->unit_) != linalg::sv_unit(i))
          throw std::invalid_argument(alg->name_ + ": declared unit fails on " +
                                      alg->labels_[i]);
      }
    }
  }
  return alg;
}

AlgElement basis_element(const AlgebraPtr& a, int32_t i) {
  if (i < 0 || i >= a->dim()) throw std::invalid_argument("basis index out of range");
  return {a, linalg::sv_unit(i)};
}

AlgElement unit_element(const AlgebraPtr& a) { return {a, a->unit()}; }

Subspace zero_subspace(const AlgebraPtr& a) { return {a, RowEchelon()}; }

Subspace full_subspace(const AlgebraPtr& a) {
  RowEchelon e;
  for (int32_t i = 0; i < a->dim(); ++i) e.insert(linalg::sv_unit(i));
  return {a, std::move(e)};
}

Subspace span_subspace(const AlgebraPtr& a, const std::vector<SparseVec>& vecs) {
  return {a, linalg::span_of(vecs)};
}

// ----- constructors -----

AlgebraPtr build_algebra(std::string name, std::vector<std::string> labels,
                         const std::vector<std::tuple<int, int, int, Rat>>& structure,
                         std::optional<SparseVec> unit) {
  std::map<StructureAlgebra::Key, std::vector<std::pair<int32_t, Rat>>> raw;
  for (const auto& [i, j, k, c] : structure)
    raw[{i, j}].emplace_back(static_cast<int32_t>(k), c);
  StructureAlgebra::ProductMap products;
  for (auto& [ij, entries] : raw) {
    SparseVec v = linalg::sv_normalize(std::move(entries));
    if (!v.empty()) products.emplace(ij, std::move(v));
  }
  return StructureAlgebra::create(std::move(name), std::move(labels),
                                  std::move(products), std::move(unit));
}

AlgebraPtr matrix_algebra(int n) {
  if (n < 1) throw std::invalid_argument("matrix_algebra: n must be >= 1");
  auto idx = [n](int i, int j) { return static_cast<int32_t>(i * n + j); };
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      labels.push_back("e" + std::to_string(i + 1) +
                       (n > 9 ? "_" : "") + std::to_string(j + 1));
  StructureAlgebra::ProductMap products;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        products[{idx(i, j), idx(j, k)}] = linalg::sv_unit(idx(i, k));
  SparseVec unit;
  for (int i = 0; i < n; ++i) unit.emplace_back(idx(i, i), Rat(1));
  return StructureAlgebra::create("M" + std::to_string(n), std::move(labels),
                                  std::move(products), std::move(unit));
}

AlgebraPtr grassmann_algebra(int n) {
  if (n < 0 || n > 16) throw std::invalid_argument("grassmann_algebra: n out of range");
  const int dim = 1 << n;
  std::vector<std::string> labels;
  for (int s = 0; s < dim; ++s) {
    if (s == 0) {
      labels.push_back("1");
      continue;
    }
    std::string l;
    for (int b = 0; b < n; ++b)
      if (s & (1 << b)) l += "e" + std::to_string(b + 1);
    labels.push_back(std::move(l));
  }
  StructureAlgebra::ProductMap products;
  for (int s = 0; s < dim; ++s) {
    for (int t = 0; t < dim; ++t) {
      if (s & t) continue;  // repeated generator squares to zero
      // Sign: generators of t move left past the generators of s above them.
      int swaps = 0;
      for (int b = 0; b < n; ++b)
        if (t & (1 << b)) swaps += __builtin_popcount(static_cast<unsigned>(s) >> (b + 1));
      products[{s, t}] = {{static_cast<int32_t>(s | t), Rat(swaps % 2 == 0 ? 1 : -1)}};
    }
  }
  return StructureAlgebra::create("G" + std::to_string(n), std::move(labels),
                                  std::move(products), linalg::sv_unit(0));
}

AlgebraPtr upper_triangular(int n, bool strict) {
  if (n < 1 || (strict && n < 2))
    throw std::invalid_argument("upper_triangular: n too small");
  std::vector<std::pair<int, int>> pos;
  for (int i = 0; i < n; ++i)
    for (int j = strict ? i + 1 : i; j < n; ++j) pos.emplace_back(i, j);
  auto idx = [&pos](int i, int j) {
    auto it = std::find(pos.begin(), pos.end(), std::make_pair(i, j));
    return static_cast<int32_t>(it - pos.begin());
  };
  std::vector<std::string> labels;
  for (auto [i, j] : pos)
    labels.push_back("e" + std::to_string(i + 1) + (n > 9 ? "_" : "") +
                     std::to_string(j + 1));
  StructureAlgebra::ProductMap products;
  for (auto [i, j] : pos)
    for (auto [k, l] : pos)
      if (j == k) products[{idx(i, j), idx(k, l)}] = linalg::sv_unit(idx(i, l));
  std::optional<SparseVec> unit;
  if (!strict) {
    SparseVec u;
    for (int i = 0; i < n; ++i) u.emplace_back(idx(i, i), Rat(1));
    unit = std::move(u);
  }
  return StructureAlgebra::create((strict ? "UT" : "T") + std::to_string(n) +
                                      (strict ? "^0" : ""),
                                  std::move(labels), std::move(products), std::move(unit));
}

AlgebraPtr direct_sum(const AlgebraPtr& a, const AlgebraPtr& b) {
  const int da = a->dim();
  std::vector<std::string> labels;
  for (const auto& l : a->labels()) labels.push_back("p1." + l);
  for (const auto& l : b->labels()) labels.push_back("p2." + l);
  StructureAlgebra::ProductMap products = a->products();
  for (const auto& [ij, v] : b->products()) {
    SparseVec shifted;
    for (const auto& [k, c] : v) shifted.emplace_back(k + da, c);
    products[{ij.first + da, ij.second + da}] = std::move(shifted);
  }
  std::optional<SparseVec> unit;
  if (a->is_unital() && b->is_unital()) {
    SparseVec u = a->unit();
    for (const auto& [k, c] : b->unit()) u.emplace_back(k + da, c);
    unit = std::move(u);
  }
  return StructureAlgebra::create(a->name() + " (+) " + b->name(), std::move(labels),
                                  std::move(products), std::move(unit));
}

AlgebraPtr opposite(const AlgebraPtr& a) {
  StructureAlgebra::ProductMap products;
  for (const auto& [ij, v] : a->products()) products[{ij.second, ij.first}] = v;
  std::optional<SparseVec> unit;
  if (a->is_unital()) unit = a->unit();
  return StructureAlgebra::create(a->name() + "^op", a->labels(), std::move(products),
                                  std::move(unit));
}

SparseVec QuotientResult::project(const SparseVec& v) const {
  SparseVec res = ideal.space.reduce(v);
  SparseVec out;
  for (const auto& [i, c] : res) {
    auto it = std::lower_bound(rep_indices.begin(), rep_indices.end(), i);
    if (it == rep_indices.end() || *it != i)
      throw std::logic_error("quotient projection: residue outside representatives");
    out.emplace_back(static_cast<int32_t>(it - rep_indices.begin()), c);
  }
  return out;
}

QuotientResult quotient(const AlgebraPtr& a, const Subspace& ideal) {
  const int dim = a->dim();
  // Verify the subspace really is a two-sided ideal.
  for (const auto& [p, row] : ideal.space.rows()) {
    for (int32_t k = 0; k < dim; ++k) {
      if (!ideal.space.contains(a->mul(linalg::sv_unit(k), row)))
        throw std::invalid_argument(a->name() + ": not a left ideal at " +
                                    a->labels()[k] + " * (" + a->show(row) + ")");
      if (!ideal.space.contains(a->mul(row, linalg::sv_unit(k))))
        throw std::invalid_argument(a->name() + ": not a right ideal at (" +
                                    a->show(row) + ") * " + a->labels()[k]);
    }
  }
  QuotientResult q;
  q.ideal = ideal;
  for (int32_t i = 0; i < dim; ++i)
    if (!ideal.space.rows().count(i)) q.rep_indices.push_back(i);
  if (q.rep_indices.empty()) throw std::invalid_argument("quotient by the full algebra");
  std::vector<std::string> labels;
  for (int32_t r : q.rep_indices) labels.push_back(a->labels()[r]);
  StructureAlgebra::ProductMap products;
  const int qdim = static_cast<int>(q.rep_indices.size());
  for (int32_t i = 0; i < qdim; ++i) {
    for (int32_t j = 0; j < qdim; ++j) {
      SparseVec p = a->basis_product(q.rep_indices[i], q.rep_indices[j]);
      if (p.empty()) continue;
      SparseVec img = q.project(p);
      if (!img.empty()) products[{i, j}] = std::move(img);
    }
  }
  std::optional<SparseVec> unit;
  if (a->is_unital()) {
    SparseVec u = q.project(a->unit());
    if (!u.empty()) unit = std::move(u);
  }
  q.algebra = StructureAlgebra::create(a->name() + "/I", std::move(labels),
                                       std::move(products), std::move(unit));
  return q;
}

Rat form_value(const BilinearForm& f, const SparseVec& x, const SparseVec& y) {
  Rat s(0);
  for (const auto& [i, ci] : x)
    for (const auto& [j, cj] : y) {
      auto it = f.find({i, j});
      if (it != f.end()) s += ci * cj * it->second;
    }
  return s;
}

AlgebraPtr cocycle_extension(const AlgebraPtr& a, const BilinearForm& f,
                             const std::string& name) {
  const int dim = a->dim();
  std::vector<std::vector<int32_t>> f_right(dim), f_left(dim);
  for (const auto& [ij, c] : f) {
    const auto& [i, j] = ij;
    if (i < 0 || i >= dim || j < 0 || j >= dim)
      throw std::invalid_argument("cocycle form: index out of range");
    if (c == 0) continue;
    f_right[i].push_back(j);
    f_left[j].push_back(i);
  }
  auto fval = [&f](int32_t i, int32_t j) {
    auto it = f.find({i, j});
    return it == f.end() ? Rat(0) : it->second;
  };
  auto f_of = [&fval](const SparseVec& v, int32_t c) {
    Rat s(0);
    for (const auto& [t, ct] : v) s += ct * fval(t, c);
    return s;
  };
  auto f_of_r = [&fval](int32_t aidx, const SparseVec& v) {
    Rat s(0);
    for (const auto& [t, ct] : v) s += ct * fval(aidx, t);
    return s;
  };
  auto fail = [&](int32_t x, int32_t y, int32_t z, const Rat& lhs, const Rat& rhs) {
    std::ostringstream os;
    os << "cocycle law fails at (" << a->labels()[x] << ", " << a->labels()[y] << ", "
       << a->labels()[z] << "): f(ab,c) = " << rat_to_string(lhs)
       << " but f(a,bc) = " << rat_to_string(rhs);
    throw std::invalid_argument(os.str());
  };
  // f(ab, c) = f(a, bc) over every triple where either side can be nonzero;
  // triples with ab = 0 = bc vanish on both sides.
  for (const auto& [ab, pab] : a->products()) {
    const auto& [x, y] = ab;
    std::vector<const std::vector<int32_t>*> lists{&a->right_partners()[y]};
    for (const auto& [t, c] : pab) lists.push_back(&f_right[t]);
    for (int32_t z : partner_union(lists)) {
      Rat lhs = f_of(pab, z);
      Rat rhs = f_of_r(x, a->basis_product(y, z));
      if (lhs != rhs) fail(x, y, z, lhs, rhs);
    }
  }
  for (const auto& [bc, pbc] : a->products()) {
    const auto& [y, z] = bc;
    std::vector<const std::vector<int32_t>*> lists;
    for (const auto& [s, c] : pbc) lists.push_back(&f_left[s]);
    for (int32_t x : partner_union(lists)) {
      if (a->products().count({x, y})) continue;  // covered above
      Rat rhs = f_of_r(x, pbc);
      if (rhs != 0) fail(x, y, z, Rat(0), rhs);
    }
  }

  std::vector<std::string> labels = a->labels();
  std::string zlab = "z";
  while (std::find(labels.begin(), labels.end(), zlab) != labels.end()) zlab += "_";
  labels.push_back(zlab);
  const int32_t zi = dim;
  StructureAlgebra::ProductMap products = a->products();
  for (const auto& [ij, c] : f) {
    if (c == 0) continue;
    SparseVec& v = products[ij];
    v = linalg::sv_add(v, {{zi, c}});
    if (v.empty()) products.erase(ij);
  }
  auto b = StructureAlgebra::create(name.empty() ? a->name() + " [f]" : name,
                                    std::move(labels), std::move(products), std::nullopt);
  // The unit of A survives exactly when f(1, .) = f(., 1) = 0; detect that
  // honestly by testing the embedded unit.
  if (a->is_unital()) {
    const SparseVec& u = a->unit();
    bool ok = true;
    for (int32_t i = 0; i < b->dim() && ok; ++i)
      ok = b->mul(u, linalg::sv_unit(i)) == linalg::sv_unit(i) &&
           b->mul(linalg::sv_unit(i), u) == linalg::sv_unit(i);
    if (ok)
      b = StructureAlgebra::create(b->name(), b->labels(), b->products(), u, false);
  }
  return b;
}

// ----- involutions -----

InvolutionMap::InvolutionMap(AlgebraPtr alg, std::vector<SparseVec> cols)
    : alg_(std::move(alg)), cols_(std::move(cols)) {
  if (static_cast<int>(cols_.size()) != alg_->dim())
    throw std::invalid_argument("involution: wrong number of columns");
  for (const auto& c : cols_) check_vec_range(c, alg_->dim(), "involution column");
}

SparseVec InvolutionMap::apply(const SparseVec& v) const {
  SparseVec out;
  for (const auto& [i, c] : v) out = linalg::sv_axpy(out, c, cols_[static_cast<size_t>(i)]);
  return out;
}

void InvolutionMap::validate() const {
  const int dim = alg_->dim();
  for (int32_t i = 0; i < dim; ++i) {
    if (apply(cols_[static_cast<size_t>(i)]) != linalg::sv_unit(i))
      throw std::invalid_argument(alg_->name() + ": involution is not of order 2 at " +
                                  alg_->labels()[i]);
  }
  auto check_pair = [&](int32_t i, int32_t j) {
    SparseVec lhs = apply(alg_->basis_product(i, j));
    SparseVec rhs = alg_->mul(cols_[static_cast<size_t>(j)], cols_[static_cast<size_t>(i)]);
    if (lhs != rhs) {
      std::ostringstream os;
      os << alg_->name() << ": involution is not an antiautomorphism at ("
         << alg_->labels()[i] << ", " << alg_->labels()[j] << "): (ab)* = "
         << alg_->show(lhs) << " but b* a* = " << alg_->show(rhs);
      throw std::invalid_argument(os.str());
    }
  };
  bool monomial = true;
  for (const auto& c : cols_) monomial = monomial && c.size() == 1;
  if (!monomial) {
    for (int32_t i = 0; i < dim; ++i)
      for (int32_t j = 0; j < dim; ++j) check_pair(i, j);
    return;
  }
  // Monomial involution: e_i e_j = 0 outside the product support forces both
  // sides to vanish except on the support and its image under (i,j) ->
  // (p(j), p(i)); sweeping that set is exhaustive.
  std::set<StructureAlgebra::Key> pairs;
  for (const auto& [ij, v] : alg_->products()) {
    pairs.insert(ij);
    pairs.insert({cols_[static_cast<size_t>(ij.second)].front().first,
                  cols_[static_cast<size_t>(ij.first)].front().first});
  }
  for (const auto& [i, j] : pairs) check_pair(i, j);
}

InvolutionMap involution_transpose(const AlgebraPtr& matrix_alg, int n) {
  if (matrix_alg->dim() != n * n)
    throw std::invalid_argument("involution_transpose: dimension mismatch");
  std::vector<SparseVec> cols(static_cast<size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      cols[static_cast<size_t>(i * n + j)] = linalg::sv_unit(j * n + i);
  InvolutionMap m(matrix_alg, std::move(cols));
  m.validate();
  return m;
}

InvolutionMap involution_symplectic(const AlgebraPtr& m2) {
  if (m2->dim() != 4) throw std::invalid_argument("involution_symplectic: expects M2");
  // x -> trace(x) 1 - x: e11 <-> e22, off-diagonal entries negate.
  std::vector<SparseVec> cols(4);
  cols[0] = linalg::sv_unit(3);
  cols[3] = linalg::sv_unit(0);
  cols[1] = {{1, Rat(-1)}};
  cols[2] = {{2, Rat(-1)}};
  InvolutionMap m(m2, std::move(cols));
  m.validate();
  return m;
}

std::pair<AlgebraPtr, InvolutionMap> exchange_involution(const AlgebraPtr& a) {
  AlgebraPtr s = direct_sum(a, opposite(a));
  const int d = a->dim();
  std::vector<SparseVec> cols(static_cast<size_t>(2 * d));
  for (int32_t i = 0; i < d; ++i) {
    cols[static_cast<size_t>(i)] = linalg::sv_unit(i + d);
    cols[static_cast<size_t>(i + d)] = linalg::sv_unit(i);
  }
  InvolutionMap m(s, std::move(cols));
  m.validate();
  return {std::move(s), std::move(m)};
}

Subspace symmetric_part(const InvolutionMap& star) {
  const AlgebraPtr& a = star.algebra();
  RowEchelon h = linalg::kernel_within(
      full_subspace(a).space,
      [&star](const SparseVec& v) { return linalg::sv_sub(star.apply(v), v); });
  // H(A,*) must be closed under x o y; that is what downstream consumers rely on.
  std::vector<SparseVec> basis = h.basis();
  for (size_t i = 0; i < basis.size(); ++i)
    for (size_t j = i; j < basis.size(); ++j)
      if (!h.contains(a->jordan(basis[i], basis[j])))
        throw std::logic_error(a->name() +
                               ": symmetric part not closed under the Jordan product");
  return {a, std::move(h)};
}

// ----- subspace machinery -----

Subspace subalgebra_span(const AlgebraPtr& a, const std::vector<SparseVec>& gens) {
  RowEchelon e;
  for (const auto& g : gens) e.insert(g);
  std::vector<SparseVec> frontier = e.basis();
  while (!frontier.empty()) {
    std::vector<SparseVec> next;
    std::vector<SparseVec> current = e.basis();
    for (const auto& f : frontier) {
      for (const auto& c : current) {
        for (SparseVec p : {a->mul(f, c), a->mul(c, f)}) {
          if (p.empty()) continue;
          SparseVec r = e.reduce(p);
          if (!r.empty()) {
            e.insert(r);
            next.push_back(std::move(r));
          }
        }
      }
    }
    frontier = std::move(next);
  }
  return {a, std::move(e)};
}

Subspace ideal_span(const AlgebraPtr& a, const std::vector<SparseVec>& gens,
                    bool include_gens) {
  const int dim = a->dim();
  RowEchelon e;
  std::vector<SparseVec> frontier;
  if (include_gens) {
    for (const auto& g : gens) e.insert(g);
    frontier = e.basis();
  } else {
    frontier = gens;
  }
  while (!frontier.empty()) {
    std::vector<SparseVec> next;
    for (const auto& f : frontier) {
      for (int32_t k = 0; k < dim; ++k) {
        for (SparseVec p : {a->mul(linalg::sv_unit(k), f), a->mul(f, linalg::sv_unit(k))}) {
          if (p.empty()) continue;
          SparseVec r = e.reduce(p);
          if (!r.empty()) {
            e.insert(r);
            next.push_back(std::move(r));
          }
        }
      }
    }
    frontier = std::move(next);
  }
  return {a, std::move(e)};
}

Subspace commutator_ideal(const AlgebraPtr& a) {
  std::vector<SparseVec> gens;
  for (int32_t i = 0; i < a->dim(); ++i)
    for (int32_t j = i + 1; j < a->dim(); ++j) {
      SparseVec c = a->comm(linalg::sv_unit(i), linalg::sv_unit(j));
      if (!c.empty()) gens.push_back(std::move(c));
    }
  return ideal_span(a, gens, true);
}

Subspace center(const AlgebraPtr& a) {
  RowEchelon k = full_subspace(a).space;
  for (int32_t i = 0; i < a->dim() && k.dim() > 0; ++i) {
    SparseVec ei = linalg::sv_unit(i);
    k = linalg::kernel_within(k, [&](const SparseVec& v) { return a->comm(v, ei); });
  }
  return {a, std::move(k)};
}

Subspace annihilator(const AlgebraPtr& a) {
  RowEchelon k = full_subspace(a).space;
  for (int32_t i = 0; i < a->dim() && k.dim() > 0; ++i) {
    SparseVec ei = linalg::sv_unit(i);
    k = linalg::kernel_within(k, [&](const SparseVec& v) { return a->mul(v, ei); });
    k = linalg::kernel_within(k, [&](const SparseVec& v) { return a->mul(ei, v); });
  }
  return {a, std::move(k)};
}

Subspace annihilator_within(const Subspace& w) {
  const AlgebraPtr& a = w.alg;
  RowEchelon k = w.space;
  for (const auto& [p, row] : w.space.rows()) {
    if (k.dim() == 0) break;
    k = linalg::kernel_within(k, [&](const SparseVec& v) { return a->mul(v, row); });
    k = linalg::kernel_within(k, [&](const SparseVec& v) { return a->mul(row, v); });
  }
  return {a, std::move(k)};
}

Subspace tideal_value(const freealg::TIdealGenerator& gen, const AlgebraPtr& a,
                      bool unital_reading) {
  const int dim = a->dim();
  RowEchelon values;
  for (size_t mi : gen.multilinear) {
    const freealg::FreePoly& m = gen.family[mi];
    std::vector<uint32_t> vars = freealg::generators_of(m);
    const size_t d = vars.size();
    std::map<uint32_t, size_t> var_pos;
    for (size_t t = 0; t < d; ++t) var_pos[vars[t]] = t;
    std::vector<int32_t> tuple(d, 0);
    for (;;) {
      // Evaluate m with x_{vars[t]} = e_{tuple[t]}.
      std::map<int32_t, Rat> acc;
      for (const auto& [word, c] : m.terms()) {
        SparseVec cur = linalg::sv_unit(tuple[var_pos.at(word.front())]);
        for (size_t t = 1; t < word.size() && !cur.empty(); ++t)
          cur = a->mul(cur, linalg::sv_unit(tuple[var_pos.at(word[t])]));
        for (const auto& [k, ck] : cur) acc[k] += c * ck;
      }
      SparseVec val;
      for (auto& [k, c] : acc)
        if (c != 0) val.emplace_back(k, std::move(c));
      if (!val.empty()) values.insert(val);
      // odometer
      size_t t = 0;
      while (t < d && ++tuple[t] == dim) tuple[t++] = 0;
      if (t == d) break;
    }
  }
  if (unital_reading) return ideal_span(a, values.basis(), true);
  // Strict reading: span of two-sided sandwiches a v b only.
  RowEchelon out;
  for (const auto& [p, v] : values.rows())
    for (int32_t i = 0; i < dim; ++i) {
      SparseVec left = a->mul(linalg::sv_unit(i), v);
      if (left.empty()) continue;
      for (int32_t j = 0; j < dim; ++j) {
        SparseVec s = a->mul(left, linalg::sv_unit(j));
        if (!s.empty()) out.insert(s);
      }
    }
  return {a, std::move(out)};
}

// ----- central idempotents -----

namespace {

using DenseMat = std::vector<std::vector<Rat>>;  // cols[j][i]

DenseMat mat_mul(const DenseMat& x, const DenseMat& y) {
  const size_t k = x.size();
  DenseMat out(k, std::vector<Rat>(k, Rat(0)));
  for (size_t j = 0; j < k; ++j)
    for (size_t t = 0; t < k; ++t) {
      const Rat& c = y[j][t];
      if (c == 0) continue;
      for (size_t i = 0; i < k; ++i)
        if (x[t][i] != 0) out[j][i] += x[t][i] * c;
    }
  return out;
}

DenseMat mat_identity(size_t k) {
  DenseMat out(k, std::vector<Rat>(k, Rat(0)));
  for (size_t i = 0; i < k; ++i) out[i][i] = 1;
  return out;
}

SparseVec mat_flatten(const DenseMat& m) {
  SparseVec out;
  for (size_t j = 0; j < m.size(); ++j)
    for (size_t i = 0; i < m.size(); ++i)
      if (m[j][i] != 0)
        out.emplace_back(static_cast<int32_t>(j * m.size() + i), m[j][i]);
  return out;
}

// Monic minimal polynomial, ascending coefficients.
std::vector<Rat> min_poly(const DenseMat& m) {
  const size_t k = m.size();
  std::vector<SparseVec> flats;
  RowEchelon seen;
  DenseMat p = mat_identity(k);
  for (;;) {
    SparseVec f = mat_flatten(p);
    if (!seen.insert(f)) {
      auto coeffs = linalg::solve(flats, f);
      if (!coeffs) throw std::logic_error("min_poly: dependence vanished");
      std::vector<Rat> out = *coeffs;
      for (Rat& c : out) c = -c;
      out.push_back(Rat(1));
      return out;
    }
    flats.push_back(std::move(f));
    p = mat_mul(p, m);
  }
}

Rat poly_eval(const std::vector<Rat>& coeffs, const Rat& x) {
  Rat v(0);
  for (size_t t = coeffs.size(); t-- > 0;) v = v * x + coeffs[t];
  return v;
}

// Divides by (x - r); remainder must be zero.
std::vector<Rat> poly_deflate(const std::vector<Rat>& coeffs, const Rat& r) {
  std::vector<Rat> out(coeffs.size() - 1, Rat(0));
  Rat carry(0);
  for (size_t t = coeffs.size(); t-- > 1;) {
    carry = coeffs[t] + carry * r;
    out[t - 1] = carry;
  }
  return out;
}

std::vector<BigInt> divisors_of(BigInt n, bool* ok) {
  if (n < 0) n = -n;
  *ok = true;
  if (n > BigInt(1000000000000LL)) {  // give up: caller reports inconclusive
    *ok = false;
    return {};
  }
  std::vector<BigInt> out;
  for (BigInt d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      out.push_back(n / d);
    }
  }
  return out;
}

struct RootAnalysis {
  std::vector<std::pair<Rat, int>> roots;  // root, multiplicity
  std::vector<Rat> leftover;               // root-free cofactor (deg >= 1) or empty
  bool candidates_enumerable = true;
};

RootAnalysis rational_roots(std::vector<Rat> p) {
  RootAnalysis out;
  // Strip trailing zero coefficients (shouldn't occur for monic input).
  while (!p.empty() && p.back() == 0) p.pop_back();
  if (p.size() <= 1) return out;
  // Factor out x^e.
  int zero_mult = 0;
  while (p.size() > 1 && p.front() == 0) {
    p.erase(p.begin());
    ++zero_mult;
  }
  if (zero_mult > 0) out.roots.emplace_back(Rat(0), zero_mult);
  if (p.size() <= 1) return out;
  // Clear denominators for the rational-root candidate set.
  BigInt lcm_den(1);
  for (const Rat& c : p) {
    BigInt d = boost::multiprecision::denominator(c);
    lcm_den = lcm_den / boost::multiprecision::gcd(lcm_den, d) * d;
  }
  std::vector<BigInt> ip;
  for (const Rat& c : p) ip.push_back(boost::multiprecision::numerator(Rat(c * lcm_den)));
  bool ok0 = true, okl = true;
  std::vector<BigInt> num_divs = divisors_of(ip.front(), &ok0);
  std::vector<BigInt> den_divs = divisors_of(ip.back(), &okl);
  if (!ok0 || !okl) {
    out.candidates_enumerable = false;
    out.leftover = p;
    return out;
  }
  std::set<Rat> candidates;
  for (const BigInt& a : num_divs)
    for (const BigInt& b : den_divs) {
      candidates.insert(Rat(a, b));
      candidates.insert(Rat(-a, b));
    }
  for (const Rat& r : candidates) {
    int mult = 0;
    while (p.size() > 1 && poly_eval(p, r) == 0) {
      p = poly_deflate(p, r);
      ++mult;
    }
    if (mult > 0) out.roots.emplace_back(r, mult);
    if (p.size() <= 1) break;
  }
  if (p.size() > 1) out.leftover = std::move(p);
  return out;
}

}  // namespace

std::vector<SparseVec> central_idempotents(const AlgebraPtr& a) {
  Subspace z = center(a);
  std::vector<SparseVec> mults = z.space.basis();
  std::vector<SparseVec> primitives;

  std::vector<RowEchelon> work;
  if (z.dim() > 0) work.push_back(z.space);
  std::vector<RowEchelon> final_blocks;
  while (!work.empty()) {
    RowEchelon blk = std::move(work.back());
    work.pop_back();
    const size_t k = static_cast<size_t>(blk.dim());
    if (k == 0) continue;
    if (k == 1) {
      final_blocks.push_back(std::move(blk));
      continue;
    }
    std::vector<SparseVec> basis = blk.basis();
    bool split = false, unresolved = false;
    for (const SparseVec& m : mults) {
      // Matrix of multiplication by m on the block.
      DenseMat mat(k, std::vector<Rat>(k, Rat(0)));
      for (size_t j = 0; j < k; ++j) {
        std::vector<Rat> coords;
        SparseVec res = blk.reduce_with_coords(a->mul(m, basis[j]), &coords);
        if (!res.empty())
          throw std::logic_error("central block not invariant under a central multiplier");
        for (size_t i = 0; i < k; ++i) mat[j][i] = coords[i];
      }
      RootAnalysis ra = rational_roots(min_poly(mat));
      const bool has_leftover = !ra.leftover.empty();
      if (ra.roots.size() + (has_leftover ? 1 : 0) <= 1) {
        if (has_leftover) unresolved = true;  // single irrational factor
        continue;  // multiplier does not split this block
      }
      // Primary decomposition along this multiplier.
      std::vector<RowEchelon> pieces;
      size_t total = 0;
      auto kernel_piece = [&](const DenseMat& op) {
        std::vector<SparseVec> cols;
        for (size_t j = 0; j < k; ++j) {
          SparseVec col;
          for (size_t i = 0; i < k; ++i)
            if (op[j][i] != 0) col.emplace_back(static_cast<int32_t>(i), op[j][i]);
          cols.push_back(std::move(col));
        }
        RowEchelon coord_ker = linalg::kernel(cols);
        RowEchelon piece;
        for (const auto& [p, crow] : coord_ker.rows()) {
          SparseVec v;
          for (const auto& [t, c] : crow) v = linalg::sv_axpy(v, c, basis[static_cast<size_t>(t)]);
          piece.insert(v);
        }
        return piece;
      };
      for (const auto& [lambda, mult] : ra.roots) {
        DenseMat shifted = mat;
        for (size_t i = 0; i < k; ++i) shifted[i][i] -= lambda;
        DenseMat op = mat_identity(k);
        for (int t = 0; t < mult; ++t) op = mat_mul(op, shifted);
        pieces.push_back(kernel_piece(op));
        total += static_cast<size_t>(pieces.back().dim());
      }
      if (has_leftover) {
        // g(M) for the root-free cofactor g.
        DenseMat op(k, std::vector<Rat>(k, Rat(0)));
        for (size_t t = ra.leftover.size(); t-- > 0;) {
          op = mat_mul(op, mat);
          for (size_t i = 0; i < k; ++i) op[i][i] += ra.leftover[t];
        }
        pieces.push_back(kernel_piece(op));
        total += static_cast<size_t>(pieces.back().dim());
      }
      if (total != k) throw std::logic_error("primary decomposition dimension mismatch");
      for (auto& p : pieces) work.push_back(std::move(p));
      split = true;
      break;
    }
    if (split) continue;
    if (unresolved)
      throw InconclusiveCenter(
          a->name() +
          ": central multiplier has a minimal-polynomial factor without rational "
          "roots; idempotent analysis is inconclusive");
    final_blocks.push_back(std::move(blk));
  }

  for (const RowEchelon& blk : final_blocks) {
    std::vector<SparseVec> basis = blk.basis();
    const size_t k = basis.size();
    const int dim = a->dim();
    // Solve (sum c_i b_i) b_j = b_j for all j; stack the constraints.
    std::vector<SparseVec> cols(k);
    SparseVec target;
    for (size_t j = 0; j < k; ++j) {
      for (size_t i = 0; i < k; ++i) {
        for (const auto& [t, c] : a->mul(basis[i], basis[j]))
          cols[i].emplace_back(static_cast<int32_t>(j) * dim + t, c);
      }
      for (const auto& [t, c] : basis[j])
        target.emplace_back(static_cast<int32_t>(j) * dim + t, c);
    }
    auto sol = linalg::solve(cols, target);
    if (!sol) continue;  // block without unit contributes no idempotent
    SparseVec u;
    for (size_t i = 0; i < k; ++i) u = linalg::sv_axpy(u, (*sol)[i], basis[i]);
    if (a->mul(u, u) != u) throw std::logic_error("block unit fails to be idempotent");
    primitives.push_back(std::move(u));
  }

  if (primitives.size() > 16)
    throw std::invalid_argument("central_idempotents: too many blocks to enumerate");
  std::vector<SparseVec> out;
  for (uint32_t mask = 0; mask < (1u << primitives.size()); ++mask) {
    SparseVec e;
    for (size_t i = 0; i < primitives.size(); ++i)
      if (mask & (1u << i)) e = linalg::sv_add(e, primitives[i]);
    if (a->mul(e, e) != e) throw std::logic_error("idempotent candidate fails e^2 = e");
    for (int32_t t = 0; t < a->dim(); ++t)
      if (!a->comm(e, linalg::sv_unit(t)).empty())
        throw std::logic_error("idempotent candidate fails centrality");
    out.push_back(std::move(e));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ----- polynomial-coefficient extension -----

PolyElement poly_term(const AlgebraPtr& a, int i, int j, SparseVec coeff) {
  if (i < 0 || j < 0) throw std::invalid_argument("poly_term: negative bidegree");
  PolyElement p;
  p.alg = a;
  if (!coeff.empty()) p.coeffs[{i, j}] = std::move(coeff);
  return p;
}

PolyElement poly_add(const PolyElement& p, const PolyElement& q) {
  PolyElement out = p;
  if (!out.alg) out.alg = q.alg;
  for (const auto& [bd, v] : q.coeffs) {
    SparseVec s = linalg::sv_add(out.coeffs[bd], v);
    if (s.empty())
      out.coeffs.erase(bd);
    else
      out.coeffs[bd] = std::move(s);
  }
  return out;
}

PolyElement poly_sub(const PolyElement& p, const PolyElement& q) {
  PolyElement neg = q;
  for (auto& [bd, v] : neg.coeffs) v = linalg::sv_scale(v, Rat(-1));
  return poly_add(p, neg);
}

PolyElement poly_mul(const PolyElement& p, const PolyElement& q) {
  PolyElement out;
  out.alg = p.alg ? p.alg : q.alg;
  for (const auto& [bd1, v1] : p.coeffs)
    for (const auto& [bd2, v2] : q.coeffs) {
      SparseVec prod = out.alg->mul(v1, v2);
      if (prod.empty()) continue;
      std::pair<int, int> bd{bd1.first + bd2.first, bd1.second + bd2.second};
      SparseVec s = linalg::sv_add(out.coeffs[bd], prod);
      if (s.empty())
        out.coeffs.erase(bd);
      else
        out.coeffs[bd] = std::move(s);
    }
  return out;
}

PolyElement poly_derive(const PolyElement& p, int axis) {
  if (axis != 1 && axis != 2) throw std::invalid_argument("poly_derive: axis must be 1 or 2");
  PolyElement out;
  out.alg = p.alg;
  for (const auto& [bd, v] : p.coeffs) {
    int d = axis == 1 ? bd.first : bd.second;
    if (d == 0) continue;
    std::pair<int, int> nbd = axis == 1 ? std::pair<int, int>{bd.first - 1, bd.second}
                                        : std::pair<int, int>{bd.first, bd.second - 1};
    SparseVec s = linalg::sv_add(out.coeffs[nbd], linalg::sv_scale(v, Rat(d)));
    if (s.empty())
      out.coeffs.erase(nbd);
    else
      out.coeffs[nbd] = std::move(s);
  }
  return out;
}

SliceMembership poly_slice_membership(const PolyElement& p, const Subspace& w) {
  for (const auto& [bd, v] : p.coeffs)
    if (!w.contains(v)) return {false, bd};
  return {true, std::nullopt};
}

// ----- Jordan cube inclusions -----

CubeReport check_lema2(const Subspace& j_amb, const Subspace& ideal) {
  const AlgebraPtr& a = j_amb.alg;
  std::vector<SparseVec> jb = j_amb.space.basis();
  for (size_t i = 0; i < jb.size(); ++i)
    for (size_t j = i; j < jb.size(); ++j)
      if (!j_amb.contains(a->jordan(jb[i], jb[j])))
        throw std::invalid_argument("ambient space is not closed under the Jordan product");
  if (!ideal.space.is_subspace_of(j_amb.space))
    throw std::invalid_argument("ideal is not contained in the ambient space");
  std::vector<SparseVec> ib = ideal.space.basis();
  for (const auto& u : ib)
    for (const auto& x : jb)
      if (!ideal.contains(a->jordan(u, x)))
        throw std::invalid_argument("subspace is not a Jordan ideal of the ambient space");

  CubeReport rep;
  // span{u v u} via the polarization b_i v b_j + b_j v b_i.
  RowEchelon cube;
  for (size_t i = 0; i < ib.size(); ++i)
    for (size_t j = i; j < ib.size(); ++j)
      for (const auto& v : ib) {
        SparseVec s = linalg::sv_add(a->mul(a->mul(ib[i], v), ib[j]),
                                     a->mul(a->mul(ib[j], v), ib[i]));
        if (!s.empty()) cube.insert(s);
      }
  RowEchelon cube_circ;
  for (const auto& u : ib)
    for (const auto& v : ib)
      for (const auto& w : ib) {
        SparseVec s = a->jordan(a->jordan(u, v), w);
        if (!s.empty()) cube_circ.insert(s);
      }
  rep.forms_agree = cube == cube_circ;
  rep.cube = {a, std::move(cube)};
  rep.cube_circ = {a, std::move(cube_circ)};

  RowEchelon ii;
  for (const auto& u : ib)
    for (const auto& v : ib) {
      SparseVec s = a->mul(u, v);
      if (!s.empty()) ii.insert(s);
    }
  rep.holds = true;
  for (const auto& x : jb) {
    if (!rep.holds) break;
    for (const auto& [p, c] : rep.cube.space.rows()) {
      SparseVec left = a->mul(x, c);
      if (!ii.contains(left)) {
        rep.holds = false;
        rep.witness = "(" + a->show(x) + ") * (" + a->show(c) + ") = " + a->show(left) +
                      " escapes span(I I)";
        break;
      }
      SparseVec right = a->mul(c, x);
      if (!ii.contains(right)) {
        rep.holds = false;
        rep.witness = "(" + a->show(c) + ") * (" + a->show(x) + ") = " + a->show(right) +
                      " escapes span(I I)";
        break;
      }
    }
  }
  return rep;
}

bool check_triple_identity(const AlgebraPtr& a, int samples, uint64_t seed) {
  sampling::Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    SparseVec x = rng.element(a->dim());
    SparseVec y = rng.element(a->dim());
    SparseVec z = rng.element(a->dim());
    SparseVec lhs = linalg::sv_sub(a->jordan(a->jordan(x, y), z), a->jordan(a->jordan(x, z), y));
    SparseVec rhs = a->comm(x, a->comm(y, z));
    if (lhs != rhs) return false;
  }
  return true;
}

}  // namespace jwb::strucalg
