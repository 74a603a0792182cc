#include "jwb/algebra_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace jwb::strucalg {

using nlohmann::json;

LoadedAlgebra load_algebra_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("algebra JSON: ") + e.what());
  }
  try {
    std::string name = j.at("name").get<std::string>();
    int dim = j.at("dim").get<int>();
    if (dim < 1) throw std::invalid_argument("algebra JSON: dim must be >= 1");
    std::vector<std::string> labels = j.at("labels").get<std::vector<std::string>>();
    if (static_cast<int>(labels.size()) != dim)
      throw std::invalid_argument("algebra JSON: labels length differs from dim");
    std::vector<std::tuple<int, int, int, Rat>> structure;
    for (const auto& entry : j.at("structure")) {
      if (!entry.is_array() || entry.size() != 4)
        throw std::invalid_argument("algebra JSON: structure entries are [i, j, k, coeff]");
      structure.emplace_back(entry[0].get<int>(), entry[1].get<int>(), entry[2].get<int>(),
                             rat_from_string(entry[3].get<std::string>()));
    }
    std::optional<SparseVec> unit;
    if (!j.at("unit").is_null()) {
      auto coords = j.at("unit").get<std::vector<std::string>>();
      if (static_cast<int>(coords.size()) != dim)
        throw std::invalid_argument("algebra JSON: unit length differs from dim");
      SparseVec u;
      for (int i = 0; i < dim; ++i) {
        Rat c = rat_from_string(coords[static_cast<size_t>(i)]);
        if (c != 0) u.emplace_back(i, std::move(c));
      }
      unit = std::move(u);
    }
    LoadedAlgebra out;
    out.algebra = build_algebra(std::move(name), std::move(labels), structure, std::move(unit));
    if (j.contains("involution") && !j.at("involution").is_null()) {
      std::vector<std::vector<std::pair<int32_t, Rat>>> raw(static_cast<size_t>(dim));
      for (const auto& entry : j.at("involution")) {
        if (!entry.is_array() || entry.size() != 3)
          throw std::invalid_argument("algebra JSON: involution entries are [i, j, coeff]");
        int i = entry[0].get<int>(), k = entry[1].get<int>();
        if (i < 0 || i >= dim || k < 0 || k >= dim)
          throw std::invalid_argument("algebra JSON: involution index out of range");
        raw[static_cast<size_t>(i)].emplace_back(k, rat_from_string(entry[2].get<std::string>()));
      }
      std::vector<SparseVec> cols;
      cols.reserve(raw.size());
      for (auto& r : raw) cols.push_back(linalg::sv_normalize(std::move(r)));
      InvolutionMap star(out.algebra, std::move(cols));
      star.validate();
      out.involution = std::move(star);
    }
    return out;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("algebra JSON: ") + e.what());
  }
}

LoadedAlgebra load_algebra_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_algebra_json(buf.str());
}

std::string save_algebra_json(const AlgebraPtr& a, const InvolutionMap* star) {
  json j;
  j["name"] = a->name();
  j["dim"] = a->dim();
  j["labels"] = a->labels();
  if (a->is_unital()) {
    std::vector<std::string> coords(static_cast<size_t>(a->dim()), "0");
    for (const auto& [i, c] : a->unit()) coords[static_cast<size_t>(i)] = rat_to_string(c);
    j["unit"] = coords;
  } else {
    j["unit"] = nullptr;
  }
  json structure = json::array();
  for (const auto& [ij, v] : a->products())
    for (const auto& [k, c] : v)
      structure.push_back(json::array({ij.first, ij.second, k, rat_to_string(c)}));
  j["structure"] = std::move(structure);
  if (star) {
    json inv = json::array();
    const auto& cols = star->columns();
    for (size_t i = 0; i < cols.size(); ++i)
      for (const auto& [k, c] : cols[i])
        inv.push_back(json::array({static_cast<int>(i), k, rat_to_string(c)}));
    j["involution"] = std::move(inv);
  } else {
    j["involution"] = nullptr;
  }
  return j.dump(2) + "\n";
}

void save_algebra_file(const std::string& path, const AlgebraPtr& a,
                       const InvolutionMap* star) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open " + path + " for writing");
  out << save_algebra_json(a, star);
}

}  // namespace jwb::strucalg
