#pragma once

// JSON persistence for strategies. Numbers are emitted by the shortest
// round-trip representation, so save/load reproduces every double exactly.
// The file also carries the u/v images, which are determined by linearity;
// the loader recomputes and cross-checks them along with image
// orthonormality and POVM validity.

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bases.hpp"
#include "constants.hpp"
#include "hilbert.hpp"
#include "povm.hpp"
#include "probe.hpp"

namespace bb84eve {

namespace detail {

inline nlohmann::ordered_json vector_to_json(const StateVector& v) {
  nlohmann::ordered_json re = nlohmann::ordered_json::array();
  nlohmann::ordered_json im = nlohmann::ordered_json::array();
  for (int i = 0; i < v.dim(); ++i) {
    re.push_back(v[i].real());
    im.push_back(v[i].imag());
  }
  nlohmann::ordered_json j;
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j;
}

inline StateVector vector_from_json(const nlohmann::json& j) {
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (!re.is_array() || !im.is_array() || re.size() != im.size())
    throw std::runtime_error("strategy json: malformed vector");
  StateVector v(static_cast<int>(re.size()));
  for (std::size_t i = 0; i < re.size(); ++i)
    v[static_cast<int>(i)] = cplx(re[i].get<double>(), im[i].get<double>());
  return v;
}

inline nlohmann::ordered_json operator_to_json(const Operator& m) {
  nlohmann::ordered_json re = nlohmann::ordered_json::array();
  nlohmann::ordered_json im = nlohmann::ordered_json::array();
  for (int r = 0; r < m.dim(); ++r) {
    nlohmann::ordered_json row_re = nlohmann::ordered_json::array();
    nlohmann::ordered_json row_im = nlohmann::ordered_json::array();
    for (int c = 0; c < m.dim(); ++c) {
      row_re.push_back(m.at(r, c).real());
      row_im.push_back(m.at(r, c).imag());
    }
    re.push_back(std::move(row_re));
    im.push_back(std::move(row_im));
  }
  nlohmann::ordered_json j;
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j;
}

inline Operator operator_from_json(const nlohmann::json& j) {
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  const int dim = static_cast<int>(re.size());
  if (dim == 0 || static_cast<int>(im.size()) != dim)
    throw std::runtime_error("strategy json: malformed matrix");
  Operator m(dim);
  for (int r = 0; r < dim; ++r) {
    if (static_cast<int>(re[static_cast<std::size_t>(r)].size()) != dim ||
        static_cast<int>(im[static_cast<std::size_t>(r)].size()) != dim)
      throw std::runtime_error("strategy json: ragged matrix");
    for (int c = 0; c < dim; ++c)
      m.at(r, c) = cplx(re[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].get<double>(),
                        im[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].get<double>());
  }
  return m;
}

inline nlohmann::ordered_json povm_to_json(const Povm& p) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const Operator& e : p.elements) arr.push_back(operator_to_json(e));
  return arr;
}

inline Povm povm_from_json(const nlohmann::json& j, int expected_dim, const char* label) {
  Povm p;
  for (const auto& e : j) p.elements.push_back(operator_from_json(e));
  for (const Operator& e : p.elements)
    if (e.dim() != expected_dim)
      throw std::runtime_error(std::string("strategy json: ") + label +
                               " element dimension mismatch");
  if (!is_valid_povm(p))
    throw std::runtime_error(std::string("strategy json: ") + label + " is not a valid POVM");
  return p;
}

}  // namespace detail

inline nlohmann::ordered_json strategy_to_json(const Strategy& s) {
  nlohmann::ordered_json j;
  j["probe_dim"] = s.probe_dim;
  nlohmann::ordered_json images;
  images["x"] = detail::vector_to_json(s.image_x);
  images["y"] = detail::vector_to_json(s.image_y);
  images["u"] = detail::vector_to_json(image_of(s, Signal::U));
  images["v"] = detail::vector_to_json(image_of(s, Signal::V));
  j["images"] = std::move(images);
  j["povm_xy"] = detail::povm_to_json(s.meas_xy);
  j["povm_uv"] = detail::povm_to_json(s.meas_uv);
  return j;
}

inline Strategy strategy_from_json(const nlohmann::json& j) {
  Strategy s;
  s.probe_dim = j.at("probe_dim").get<int>();
  if (s.probe_dim < 1) throw std::runtime_error("strategy json: probe_dim must be positive");
  const auto& images = j.at("images");
  s.image_x = detail::vector_from_json(images.at("x"));
  s.image_y = detail::vector_from_json(images.at("y"));
  if (s.image_x.dim() != 2 * s.probe_dim || s.image_y.dim() != 2 * s.probe_dim)
    throw std::runtime_error("strategy json: image dimension does not match probe_dim");
  if (std::abs(s.image_x.norm() - 1.0) > 1e-9 || std::abs(s.image_y.norm() - 1.0) > 1e-9 ||
      std::abs(inner(s.image_x, s.image_y)) > 1e-9)
    throw std::runtime_error("strategy json: signal images are not orthonormal");

  // u and v are redundant; verify they match the linear combinations.
  const StateVector u = detail::vector_from_json(images.at("u"));
  const StateVector v = detail::vector_from_json(images.at("v"));
  if ((u - image_of(s, Signal::U)).norm() > 1e-9 || (v - image_of(s, Signal::V)).norm() > 1e-9)
    throw std::runtime_error("strategy json: u/v images are not the required combinations");

  s.meas_xy = detail::povm_from_json(j.at("povm_xy"), s.probe_dim, "povm_xy");
  s.meas_uv = detail::povm_from_json(j.at("povm_uv"), s.probe_dim, "povm_uv");
  return s;
}

inline void save_strategy(const std::string& path, const Strategy& s) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_strategy: cannot open " + path);
  out << strategy_to_json(s).dump(2) << '\n';
  if (!out) throw std::runtime_error("save_strategy: write failed for " + path);
}

inline Strategy load_strategy(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_strategy: cannot open " + path);
  nlohmann::json j;
  in >> j;
  return strategy_from_json(j);
}

}  // namespace bb84eve
