/*
 * Copyright (C) 2026 The braket authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef BRAKET_IO_HPP
#define BRAKET_IO_HPP

#include <json.hpp>

#include <complex>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "braket/doubleslit.hpp"
#include "braket/engine.hpp"
#include "braket/error.hpp"
#include "braket/hilbert.hpp"

namespace braket::io {

using nlohmann::json;

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path + "'");
}

inline json parse(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(what + ": malformed JSON: " + e.what());
  }
}

namespace detail {

inline double number(const json& j, const std::string& what) {
  if (!j.is_number()) throw ValidationError(what + " must be a number");
  return j.get<double>();
}

inline Complex complex_pair(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2) throw ValidationError(what + " must be a [re, im] pair");
  return {number(j[0], what), number(j[1], what)};
}

inline const json& field(const json& j, const char* key, const std::string& what) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(what + ": missing key '" + key + "'");
  return j.at(key);
}

}  // namespace detail

// {"dim", "hbar", "free_energies": [...], "interaction": [[[re, im], ...], ...]}
inline ModelData model_data_from_json(const json& j) {
  ModelData d;
  const json& dim = detail::field(j, "dim", "model");
  if (!dim.is_number_integer() || dim.get<long long>() < 1) throw ValidationError("model: dim must be a positive integer");
  d.dim = dim.get<std::size_t>();
  d.hbar = j.contains("hbar") ? detail::number(j.at("hbar"), "model: hbar") : 1.0;
  const json& e = detail::field(j, "free_energies", "model");
  if (!e.is_array()) throw ValidationError("model: free_energies must be an array");
  for (const auto& x : e) d.free_energies.push_back(detail::number(x, "model: free_energies entry"));
  const json& v = detail::field(j, "interaction", "model");
  if (!v.is_array()) throw ValidationError("model: interaction must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(v.size());
  const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(v[0].is_array() ? v[0].size() : 0);
  d.interaction = ComplexMatrix::Zero(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = v[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ValidationError("model: interaction rows must all have the same length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      d.interaction(r, c) = detail::complex_pair(row[static_cast<std::size_t>(c)], "model: interaction entry");
    }
  }
  return d;
}

inline json to_json(const ModelData& d) {
  json j;
  j["dim"] = d.dim;
  j["hbar"] = d.hbar;
  j["free_energies"] = d.free_energies;
  json rows = json::array();
  for (Eigen::Index r = 0; r < d.interaction.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < d.interaction.cols(); ++c) {
      row.push_back({d.interaction(r, c).real(), d.interaction(r, c).imag()});
    }
    rows.push_back(std::move(row));
  }
  j["interaction"] = std::move(rows);
  return j;
}

inline HamiltonianModel model_from_string(const std::string& text) {
  return validate_model(model_data_from_json(parse(text, "model")));
}

inline std::string model_to_string(const HamiltonianModel& m) { return to_json(m.data()).dump(2) + "\n"; }

inline HamiltonianModel load_model(const std::string& path) { return model_from_string(read_text(path)); }

// {"amplitudes": [[re, im], ...], "weights": [...]?}
inline InitialSampler sampler_from_json(const json& j) {
  const json& a = detail::field(j, "amplitudes", "initial state");
  if (!a.is_array()) throw ValidationError("initial state: amplitudes must be an array");
  std::vector<Complex> amps;
  for (const auto& x : a) amps.push_back(detail::complex_pair(x, "initial state: amplitude"));
  std::optional<std::vector<double>> weights;
  if (j.contains("weights")) {
    std::vector<double> w;
    for (const auto& x : j.at("weights")) w.push_back(detail::number(x, "initial state: weight"));
    weights = std::move(w);
  }
  return sampler_from_amplitudes(amps, std::move(weights));
}

inline InitialSampler load_sampler(const std::string& path) {
  return sampler_from_json(parse(read_text(path), "initial state"));
}

/// {"L1", "L2", "d", "a", "n_s", "k" | ("m_e", "E"),
///  "bins": {"min", "max", "count"} | [x, ...], "bin_width"?}
inline doubleslit::SlitGeometry geometry_from_json(const json& j) {
  using detail::field;
  using detail::number;
  doubleslit::SlitGeometry g;
  g.L1 = number(field(j, "L1", "geometry"), "geometry: L1");
  g.L2 = number(field(j, "L2", "geometry"), "geometry: L2");
  g.separation = number(field(j, "d", "geometry"), "geometry: d");
  g.width = number(field(j, "a", "geometry"), "geometry: a");
  const json& ns = field(j, "n_s", "geometry");
  if (!ns.is_number_integer()) throw ValidationError("geometry: n_s must be an integer");
  g.points_per_slit = ns.get<int>();
  if (j.contains("k")) {
    g.k = number(j.at("k"), "geometry: k");
  } else {
    g.k = doubleslit::wavenumber(number(field(j, "m_e", "geometry"), "geometry: m_e"),
                                 number(field(j, "E", "geometry"), "geometry: E"));
  }
  const json& bins = field(j, "bins", "geometry");
  if (bins.is_object()) {
    const auto count = field(bins, "count", "geometry bins").get<long long>();
    if (count < 1) throw ValidationError("geometry: bins.count must be >= 1");
    g.bin_centers = doubleslit::uniform_bins(number(field(bins, "min", "geometry bins"), "geometry: bins.min"),
                                             number(field(bins, "max", "geometry bins"), "geometry: bins.max"),
                                             static_cast<std::size_t>(count));
  } else if (bins.is_array()) {
    for (const auto& x : bins) g.bin_centers.push_back(number(x, "geometry: bin center"));
  } else {
    throw ValidationError("geometry: bins must be an object or an array");
  }
  if (j.contains("bin_width")) {
    g.bin_width = number(j.at("bin_width"), "geometry: bin_width");
  } else if (g.bin_centers.size() >= 2) {
    g.bin_width = (g.bin_centers.back() - g.bin_centers.front()) / static_cast<double>(g.bin_centers.size() - 1);
  } else {
    throw ValidationError("geometry: bin_width required for a single bin");
  }
  doubleslit::validate(g);
  return g;
}

inline doubleslit::SlitGeometry load_geometry(const std::string& path) {
  return geometry_from_json(parse(read_text(path), "geometry"));
}

}  // namespace braket::io

#endif  // BRAKET_IO_HPP
