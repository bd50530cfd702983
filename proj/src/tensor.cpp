#include "alloysim/tensor.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace alloysim {

namespace {

LinearComb comb(std::initializer_list<std::pair<std::size_t, int>> ws) {
  LinearComb c;
  c.weights.assign(ws.begin(), ws.end());
  return c;
}

}  // namespace

TensorDecomposition strassen() {
  // A and B as 2x2 block grids, flat indices [[0,1],[2,3]].
  // Output maps are the standard recombination; the verify oracle locks
  // down the signs.
  TensorDecomposition d;
  d.a_rows = d.a_cols = d.b_rows = d.b_cols = 2;
  d.terms = {
      // T1 = (A1+A4)(B1+B4) -> C11 + C22
      DecompTerm{comb({{0, 1}, {3, 1}}), comb({{0, 1}, {3, 1}}), comb({{0, 1}, {3, 1}})},
      // T2 = (A3+A4)B1 -> C21 - C22
      DecompTerm{comb({{2, 1}, {3, 1}}), comb({{0, 1}}), comb({{2, 1}, {3, -1}})},
      // T3 = A1(B2-B4) -> C12 + C22
      DecompTerm{comb({{0, 1}}), comb({{1, 1}, {3, -1}}), comb({{1, 1}, {3, 1}})},
      // T4 = A4(B3-B1) -> C11 + C21
      DecompTerm{comb({{3, 1}}), comb({{2, 1}, {0, -1}}), comb({{0, 1}, {2, 1}})},
      // T5 = (A1+A2)B4 -> C12 - C11
      DecompTerm{comb({{0, 1}, {1, 1}}), comb({{3, 1}}), comb({{0, -1}, {1, 1}})},
      // T6 = (A3-A1)(B1+B2) -> C22
      DecompTerm{comb({{2, 1}, {0, -1}}), comb({{0, 1}, {1, 1}}), comb({{3, 1}})},
      // T7 = (A2-A4)(B3+B4) -> C11
      DecompTerm{comb({{1, 1}, {3, -1}}), comb({{2, 1}, {3, 1}}), comb({{0, 1}})},
  };
  return d;
}

TensorDecomposition trivial_decomposition(std::size_t x, std::size_t y, std::size_t z) {
  if (x < 1 || y < 1 || z < 1) throw std::invalid_argument("trivial_decomposition: sizes");
  TensorDecomposition d;
  d.a_rows = x;
  d.a_cols = z;
  d.b_rows = z;
  d.b_cols = y;
  d.terms.reserve(x * y * z);
  for (std::size_t i = 0; i < x; ++i)
    for (std::size_t k = 0; k < z; ++k)
      for (std::size_t j = 0; j < y; ++j)
        d.terms.push_back(DecompTerm{comb({{i * z + k, 1}}), comb({{k * y + j, 1}}),
                                     comb({{i * y + j, 1}})});
  return d;
}

namespace {

LinearComb comb_from_json(const nlohmann::json& j) {
  LinearComb c;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::size_t idx = std::stoul(it.key());
    const int w = it.value().get<int>();
    if (w != 0) c.weights.emplace_back(idx, w);
  }
  return c;
}

nlohmann::json comb_to_json(const LinearComb& c) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [idx, w] : c.weights) j[std::to_string(idx)] = w;
  return j;
}

}  // namespace

TensorDecomposition decomposition_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("decomposition: bad JSON: ") + e.what());
  }
  TensorDecomposition d;
  try {
    const auto& shapes = j.at("shapes");
    d.a_rows = shapes.at("a").at(0).get<std::size_t>();
    d.a_cols = shapes.at("a").at(1).get<std::size_t>();
    d.b_rows = shapes.at("b").at(0).get<std::size_t>();
    d.b_cols = shapes.at("b").at(1).get<std::size_t>();
    for (const auto& term : j.at("terms")) {
      const auto& e = term.at("E");
      if (e.size() != 2)
        throw std::invalid_argument("decomposition: exactly two input maps per term");
      d.terms.push_back(
          DecompTerm{comb_from_json(e.at(0)), comb_from_json(e.at(1)), comb_from_json(term.at("D"))});
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("decomposition: missing field: ") + e.what());
  }
  if (d.a_cols != d.b_rows) throw std::invalid_argument("decomposition: inner grid mismatch");
  if (j.contains("rank") && j.at("rank").get<std::size_t>() != d.terms.size())
    throw std::invalid_argument("decomposition: rank does not match term count");
  if (d.terms.empty()) throw std::invalid_argument("decomposition: no terms");
  for (const auto& t : d.terms) {
    for (const auto& w : t.ea.weights)
      if (w.first >= d.a_rows * d.a_cols) throw std::invalid_argument("decomposition: A index range");
    for (const auto& w : t.eb.weights)
      if (w.first >= d.b_rows * d.b_cols) throw std::invalid_argument("decomposition: B index range");
    for (const auto& w : t.d.weights)
      if (w.first >= d.c_rows() * d.c_cols())
        throw std::invalid_argument("decomposition: output index range");
  }
  return d;
}

std::string decomposition_to_json(const TensorDecomposition& d) {
  nlohmann::json j;
  j["rank"] = d.terms.size();
  j["shapes"]["a"] = {d.a_rows, d.a_cols};
  j["shapes"]["b"] = {d.b_rows, d.b_cols};
  j["terms"] = nlohmann::json::array();
  for (const auto& t : d.terms) {
    nlohmann::json jt;
    jt["E"] = nlohmann::json::array({comb_to_json(t.ea), comb_to_json(t.eb)});
    jt["D"] = comb_to_json(t.d);
    j["terms"].push_back(jt);
  }
  return j.dump(2);
}

TensorDecomposition load_decomposition(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("decomposition: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return decomposition_from_json(ss.str());
}

}  // namespace alloysim
