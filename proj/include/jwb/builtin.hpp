#pragma once

#include <string>
#include <utility>
#include <vector>

#include "jwb/freealg.hpp"
#include "jwb/jordanmaps.hpp"
#include "jwb/semigroup.hpp"
#include "jwb/strucalg.hpp"

namespace jwb::builtin {

using jordanmaps::LinearMap;
using strucalg::AlgebraPtr;

// The degree-two semigroup instance over (a b^n c ~ c b^n a) with generator
// [x1, x2] and words up to length 6, built once per process on first use.
const semigroup::Pe2Instance& pe2_default();

// Algebras constructible by name: m2, m3, grassmann-<n> (0 <= n <= 8), ut2,
// ut3, ut2-strict, ut3-strict, m2xm2, pe2-default.
// Throws std::invalid_argument for unknown names.
AlgebraPtr algebra(const std::string& name);

// One representative name per family, used by the verification sweeps.
std::vector<std::string> algebra_names();

// Maps by name, relative to an algebra name accepted by algebra():
//   identity        any algebra
//   transpose       m2, m3
//   symplectic      m2
//   swap-transpose  m2xm2: (x, y) -> (x, y^t)
//   pe2             pe2-default: a -> a + a* (domain and codomain differ)
LinearMap map(const std::string& map_name, const std::string& algebra_name);

std::vector<std::string> map_names();

// Validated involutions paired with display names.
std::vector<std::pair<std::string, strucalg::InvolutionMap>> involutions();

// An involution reinterpreted as a linear endomap.
LinearMap involution_as_map(const strucalg::InvolutionMap& star);

// Free-algebra elements for the tideal command: "hall" = [[x1,x2]^2, x3],
// "comm" = [x1, x2]; anything else is parsed as a polynomial expression.
freealg::TIdealGenerator generator(const std::string& name_or_expr);

}  // namespace jwb::builtin
