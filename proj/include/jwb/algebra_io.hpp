#pragma once

#include <optional>
#include <string>

#include "jwb/strucalg.hpp"

namespace jwb::strucalg {

struct LoadedAlgebra {
  AlgebraPtr algebra;
  std::optional<InvolutionMap> involution;
};

// JSON interchange: { "name", "dim", "labels": [...], "unit": [rational
// strings] | null, "structure": [[i, j, k, "p/q"], ...] (sparse, 0-indexed),
// "involution": [[i, j, "p/q"], ...] | null }. An involution triple [i, j, c]
// states that e_i* contains c e_j. Output is canonical (sorted keys, sorted
// triples, lowest-term rationals), so load -> save -> load is bit-identical.
LoadedAlgebra load_algebra_json(const std::string& text);
LoadedAlgebra load_algebra_file(const std::string& path);
std::string save_algebra_json(const AlgebraPtr& a, const InvolutionMap* star = nullptr);
void save_algebra_file(const std::string& path, const AlgebraPtr& a,
                       const InvolutionMap* star = nullptr);

}  // namespace jwb::strucalg
