#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "jwb/rational.hpp"

namespace jwb::linalg {

// Sparse vector: (index, nonzero coefficient) pairs, strictly ascending index.
using SparseVec = std::vector<std::pair<int32_t, Rat>>;

SparseVec sv_unit(int32_t i);
SparseVec sv_scale(const SparseVec& v, const Rat& c);
SparseVec sv_add(const SparseVec& a, const SparseVec& b);
SparseVec sv_sub(const SparseVec& a, const SparseVec& b);
// a + c*b
SparseVec sv_axpy(const SparseVec& a, const Rat& c, const SparseVec& b);
Rat sv_get(const SparseVec& v, int32_t i);
// From possibly-unsorted, possibly-duplicated entries.
SparseVec sv_normalize(std::vector<std::pair<int32_t, Rat>> entries);
std::string sv_to_string(const SparseVec& v, const std::vector<std::string>& labels);

// Reduced row echelon form over Q, rows keyed by pivot index. Rows are
// normalized (leading coefficient 1), mutually back-reduced and keyed by
// strictly increasing pivot, so two equal subspaces have identical row maps.
class RowEchelon {
 public:
  RowEchelon() = default;

  int dim() const { return static_cast<int>(rows_.size()); }
  bool empty() const { return rows_.empty(); }
  const std::map<int32_t, SparseVec>& rows() const { return rows_; }
  // Basis in pivot order (the order coordinate vectors refer to).
  std::vector<SparseVec> basis() const;

  // Residue of v modulo the row space (zero iff v is contained).
  SparseVec reduce(const SparseVec& v) const;
  // Also reports the combination: v = sum coords[k]*basis()[k] + residue.
  SparseVec reduce_with_coords(const SparseVec& v, std::vector<Rat>* coords) const;
  bool contains(const SparseVec& v) const { return reduce(v).empty(); }

  // Adds v to the span; returns true when the dimension grew.
  bool insert(const SparseVec& v);

  bool operator==(const RowEchelon& o) const { return rows_ == o.rows_; }
  bool is_subspace_of(const RowEchelon& o) const;

 private:
  std::map<int32_t, SparseVec> rows_;
};

RowEchelon span_of(const std::vector<SparseVec>& vecs);

// Kernel of the linear map sending coordinate k to columns[k]; returned as
// echelonized coordinate vectors (length = columns.size() index space).
RowEchelon kernel(const std::vector<SparseVec>& columns);

// {v in W : T(v) = 0} for linear T, as a subspace of the ambient space.
RowEchelon kernel_within(const RowEchelon& w,
                         const std::function<SparseVec(const SparseVec&)>& t);

// Coordinates c with sum c[k]*columns[k] = target, if the system is solvable.
std::optional<std::vector<Rat>> solve(const std::vector<SparseVec>& columns,
                                      const SparseVec& target);

}  // namespace jwb::linalg
