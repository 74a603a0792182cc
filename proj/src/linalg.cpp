#include "jwb/linalg.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace jwb::linalg {

SparseVec sv_unit(int32_t i) { return {{i, Rat(1)}}; }

SparseVec sv_scale(const SparseVec& v, const Rat& c) {
  if (c == 0) return {};
  SparseVec out;
  out.reserve(v.size());
  for (const auto& [i, x] : v) out.emplace_back(i, x * c);
  return out;
}

SparseVec sv_axpy(const SparseVec& a, const Rat& c, const SparseVec& b) {
  if (c == 0) return a;
  SparseVec out;
  out.reserve(a.size() + b.size());
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, c * b[j].second);
      ++j;
    } else {
      Rat s = a[i].second + c * b[j].second;
      if (s != 0) out.emplace_back(a[i].first, std::move(s));
      ++i, ++j;
    }
  }
  return out;
}

SparseVec sv_add(const SparseVec& a, const SparseVec& b) { return sv_axpy(a, Rat(1), b); }
SparseVec sv_sub(const SparseVec& a, const SparseVec& b) { return sv_axpy(a, Rat(-1), b); }

Rat sv_get(const SparseVec& v, int32_t i) {
  auto it = std::lower_bound(v.begin(), v.end(), i,
                             [](const auto& p, int32_t k) { return p.first < k; });
  if (it != v.end() && it->first == i) return it->second;
  return Rat(0);
}

SparseVec sv_normalize(std::vector<std::pair<int32_t, Rat>> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseVec out;
  for (auto& [i, c] : entries) {
    if (!out.empty() && out.back().first == i) {
      out.back().second += c;
      if (out.back().second == 0) out.pop_back();
    } else if (c != 0) {
      out.emplace_back(i, std::move(c));
    }
  }
  return out;
}

std::string sv_to_string(const SparseVec& v, const std::vector<std::string>& labels) {
  if (v.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [i, c] : v) {
    Rat a = c < 0 ? Rat(-c) : c;
    if (first) {
      if (c < 0) os << "-";
      first = false;
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    const std::string& lab = labels.at(static_cast<size_t>(i));
    if (a != 1) os << rat_to_string(a) << "*";
    os << lab;
  }
  return os.str();
}

namespace {

// Core reduction: processes indices in ascending order; eliminating against a
// row only introduces indices past its pivot, so a single sweep terminates.
// `on_pivot_hit` sees (pivot, coefficient) for each row used.
SparseVec reduce_impl(const std::map<int32_t, SparseVec>& rows, const SparseVec& v,
                      const std::function<void(int32_t, const Rat&)>& on_pivot_hit) {
  std::map<int32_t, Rat> work(v.begin(), v.end());
  SparseVec out;
  while (!work.empty()) {
    auto it = work.begin();
    int32_t idx = it->first;
    Rat c = std::move(it->second);
    work.erase(it);
    if (c == 0) continue;
    auto row_it = rows.find(idx);
    if (row_it == rows.end()) {
      out.emplace_back(idx, std::move(c));
      continue;
    }
    if (on_pivot_hit) on_pivot_hit(idx, c);
    const SparseVec& row = row_it->second;
    for (size_t t = 1; t < row.size(); ++t) work[row[t].first] -= c * row[t].second;
  }
  return out;
}

}  // namespace

std::vector<SparseVec> RowEchelon::basis() const {
  std::vector<SparseVec> out;
  out.reserve(rows_.size());
  for (const auto& [p, row] : rows_) out.push_back(row);
  return out;
}

SparseVec RowEchelon::reduce(const SparseVec& v) const {
  return reduce_impl(rows_, v, nullptr);
}

SparseVec RowEchelon::reduce_with_coords(const SparseVec& v, std::vector<Rat>* coords) const {
  std::map<int32_t, Rat> hit;
  SparseVec res = reduce_impl(rows_, v, [&hit](int32_t p, const Rat& c) { hit[p] += c; });
  if (coords) {
    coords->assign(rows_.size(), Rat(0));
    size_t k = 0;
    for (const auto& [p, row] : rows_) {
      auto it = hit.find(p);
      if (it != hit.end()) (*coords)[k] = it->second;
      ++k;
    }
  }
  return res;
}

bool RowEchelon::insert(const SparseVec& v) {
  SparseVec r = reduce(v);
  if (r.empty()) return false;
  int32_t p = r.front().first;
  Rat lead = r.front().second;
  if (lead != 1) r = sv_scale(r, Rat(1) / lead);
  // Back-reduce existing rows against the new pivot.
  for (auto& [q, row] : rows_) {
    Rat c = sv_get(row, p);
    if (c != 0) row = sv_axpy(row, Rat(-c), r);
  }
  rows_.emplace(p, std::move(r));
  return true;
}

bool RowEchelon::is_subspace_of(const RowEchelon& o) const {
  for (const auto& [p, row] : rows_)
    if (!o.contains(row)) return false;
  return true;
}

RowEchelon span_of(const std::vector<SparseVec>& vecs) {
  RowEchelon e;
  for (const auto& v : vecs) e.insert(v);
  return e;
}

namespace {

// Forward-elimination state for kernel/solve: image rows with the coordinate
// combination (over the original columns) that produced them.
struct ElimState {
  struct ERow {
    SparseVec img;    // leading coefficient 1
    SparseVec coord;  // combination of original columns giving img
  };
  std::map<int32_t, ERow> rows;  // keyed by img pivot

  // Eliminates img against the rows, mirroring every step on coord.
  // Returns the (residue, accumulated coord) pair.
  std::pair<SparseVec, SparseVec> eliminate(SparseVec img, SparseVec coord) const {
    std::map<int32_t, Rat> work(img.begin(), img.end());
    SparseVec out;
    while (!work.empty()) {
      auto it = work.begin();
      int32_t idx = it->first;
      Rat c = std::move(it->second);
      work.erase(it);
      if (c == 0) continue;
      auto row_it = rows.find(idx);
      if (row_it == rows.end()) {
        out.emplace_back(idx, std::move(c));
        continue;
      }
      const ERow& er = row_it->second;
      for (size_t t = 1; t < er.img.size(); ++t)
        work[er.img[t].first] -= c * er.img[t].second;
      coord = sv_axpy(coord, Rat(-c), er.coord);
    }
    return {std::move(out), std::move(coord)};
  }
};

}  // namespace

RowEchelon kernel(const std::vector<SparseVec>& columns) {
  ElimState st;
  RowEchelon ker;
  for (size_t k = 0; k < columns.size(); ++k) {
    auto [res, coord] = st.eliminate(columns[k], sv_unit(static_cast<int32_t>(k)));
    if (res.empty()) {
      ker.insert(coord);  // combination maps to zero
    } else {
      Rat lead = res.front().second;
      if (lead != 1) {
        Rat inv = Rat(1) / lead;
        res = sv_scale(res, inv);
        coord = sv_scale(coord, inv);
      }
      int32_t p = res.front().first;
      st.rows.emplace(p, ElimState::ERow{std::move(res), std::move(coord)});
    }
  }
  return ker;
}

RowEchelon kernel_within(const RowEchelon& w,
                         const std::function<SparseVec(const SparseVec&)>& t) {
  std::vector<SparseVec> basis = w.basis();
  std::vector<SparseVec> cols;
  cols.reserve(basis.size());
  for (const auto& b : basis) cols.push_back(t(b));
  RowEchelon coord_ker = kernel(cols);
  RowEchelon out;
  for (const auto& [p, crow] : coord_ker.rows()) {
    SparseVec v;
    for (const auto& [k, c] : crow)
      v = sv_axpy(v, c, basis[static_cast<size_t>(k)]);
    out.insert(v);
  }
  return out;
}

std::optional<std::vector<Rat>> solve(const std::vector<SparseVec>& columns,
                                      const SparseVec& target) {
  ElimState st;
  for (size_t k = 0; k < columns.size(); ++k) {
    auto [res, coord] = st.eliminate(columns[k], sv_unit(static_cast<int32_t>(k)));
    if (res.empty()) continue;
    Rat lead = res.front().second;
    if (lead != 1) {
      Rat inv = Rat(1) / lead;
      res = sv_scale(res, inv);
      coord = sv_scale(coord, inv);
    }
    int32_t p = res.front().first;
    st.rows.emplace(p, ElimState::ERow{std::move(res), std::move(coord)});
  }
  auto [res, coord] = st.eliminate(target, SparseVec{});
  if (!res.empty()) return std::nullopt;
  // target - sum coord[k]*columns[k] = 0, with coord accumulated negated.
  std::vector<Rat> out(columns.size(), Rat(0));
  for (const auto& [k, c] : coord) out[static_cast<size_t>(k)] = -c;
  return out;
}

}  // namespace jwb::linalg
