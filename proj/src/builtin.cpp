#include "jwb/builtin.hpp"

#include <stdexcept>

#include "jwb/linalg.hpp"

namespace jwb::builtin {

using linalg::SparseVec;

const semigroup::Pe2Instance& pe2_default() {
  static const semigroup::Pe2Instance inst = [] {
    auto gen = freealg::make_tideal_generator(
        "comm", freealg::parse_poly("comm(x1,x2)"));
    return semigroup::build_pe2(
        semigroup::build_pe1(semigroup::default_presentation(), gen, 6));
  }();
  return inst;
}

AlgebraPtr algebra(const std::string& name) {
  if (name == "m2") return strucalg::matrix_algebra(2);
  if (name == "m3") return strucalg::matrix_algebra(3);
  if (name == "ut2") return strucalg::upper_triangular(2, false);
  if (name == "ut3") return strucalg::upper_triangular(3, false);
  if (name == "ut2-strict") return strucalg::upper_triangular(2, true);
  if (name == "ut3-strict") return strucalg::upper_triangular(3, true);
  if (name == "m2xm2") {
    AlgebraPtr m2 = strucalg::matrix_algebra(2);
    return strucalg::direct_sum(m2, m2);
  }
  if (name == "pe2-default") return pe2_default().b;
  if (name.rfind("grassmann-", 0) == 0) {
    const std::string tail = name.substr(10);
    if (!tail.empty() && tail.find_first_not_of("0123456789") == std::string::npos &&
        tail.size() <= 2) {
      int n = std::stoi(tail);
      if (n <= 8) return strucalg::grassmann_algebra(n);
    }
    throw std::invalid_argument("grassmann generator count must be 0..8: " + name);
  }
  throw std::invalid_argument("unknown builtin algebra: " + name);
}

std::vector<std::string> algebra_names() {
  return {"m2", "m3", "grassmann-4", "ut2", "ut3", "ut2-strict", "ut3-strict",
          "m2xm2", "pe2-default"};
}

LinearMap involution_as_map(const strucalg::InvolutionMap& star) {
  return LinearMap(star.algebra(), star.algebra(), star.columns());
}

LinearMap map(const std::string& map_name, const std::string& algebra_name) {
  if (map_name == "identity") return LinearMap::identity(algebra(algebra_name));
  if (map_name == "transpose") {
    if (algebra_name == "m2")
      return involution_as_map(strucalg::involution_transpose(algebra("m2"), 2));
    if (algebra_name == "m3")
      return involution_as_map(strucalg::involution_transpose(algebra("m3"), 3));
    throw std::invalid_argument("transpose is built in only for m2 and m3");
  }
  if (map_name == "symplectic") {
    if (algebra_name != "m2")
      throw std::invalid_argument("symplectic is built in only for m2");
    return involution_as_map(strucalg::involution_symplectic(algebra("m2")));
  }
  if (map_name == "swap-transpose") {
    if (algebra_name != "m2xm2")
      throw std::invalid_argument("swap-transpose is built in only for m2xm2");
    AlgebraPtr s = algebra("m2xm2");
    strucalg::InvolutionMap tr = strucalg::involution_transpose(algebra("m2"), 2);
    return LinearMap::from_function(s, s, [tr](const SparseVec& v) {
      SparseVec out;
      for (const auto& [i, c] : v) {
        if (i < 4) {
          out = linalg::sv_axpy(out, c, linalg::sv_unit(i));
        } else {
          for (const auto& [j, cj] : tr.apply(linalg::sv_unit(i - 4)))
            out = linalg::sv_axpy(out, c * cj, linalg::sv_unit(j + 4));
        }
      }
      return out;
    });
  }
  if (map_name == "pe2") {
    if (algebra_name != "pe2-default")
      throw std::invalid_argument("the pe2 map is built in only for pe2-default");
    return *pe2_default().phi;
  }
  throw std::invalid_argument("unknown builtin map: " + map_name);
}

std::vector<std::string> map_names() {
  return {"identity", "transpose", "symplectic", "swap-transpose", "pe2"};
}

std::vector<std::pair<std::string, strucalg::InvolutionMap>> involutions() {
  std::vector<std::pair<std::string, strucalg::InvolutionMap>> out;
  out.emplace_back("transpose-m2", strucalg::involution_transpose(algebra("m2"), 2));
  out.emplace_back("transpose-m3", strucalg::involution_transpose(algebra("m3"), 3));
  out.emplace_back("symplectic-m2", strucalg::involution_symplectic(algebra("m2")));
  out.emplace_back("exchange-m2", strucalg::exchange_involution(algebra("m2")).second);
  out.emplace_back("pe2-star", *pe2_default().star);
  return out;
}

freealg::TIdealGenerator generator(const std::string& name_or_expr) {
  if (name_or_expr == "hall")
    return freealg::make_tideal_generator(
        "hall", freealg::parse_poly("comm(comm(x1,x2)*comm(x1,x2), x3)"));
  if (name_or_expr == "comm")
    return freealg::make_tideal_generator("comm", freealg::parse_poly("comm(x1,x2)"));
  return freealg::make_tideal_generator(name_or_expr,
                                        freealg::parse_poly(name_or_expr));
}

}  // namespace jwb::builtin
