#pragma once

// State files: {"dim": d, "re": [[...]], "im": [[...]]}, row-major,
// doubles written with 17 significant digits.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qtsallis/states.hpp"

namespace qtsallis {

inline std::string state_to_json(const Matrix& m) {
  std::string out = "{\"dim\": " + std::to_string(m.rows());
  auto emit = [&](const char* key, auto part) {
    out += std::string(", \"") + key + "\": [";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      out += i ? ", [" : "[";
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (j) out += ", ";
        out += detail::fmt_double(part(m(i, j)));
      }
      out += "]";
    }
    out += "]";
  };
  emit("re", [](Complex z) { return z.real(); });
  emit("im", [](Complex z) { return z.imag(); });
  out += "}\n";
  return out;
}

inline Matrix state_matrix_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("state file is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("dim") || !j.contains("re") || !j.contains("im"))
    throw ParseError("state file needs keys dim, re, im");
  if (!j["dim"].is_number_integer()) throw ParseError("dim must be an integer");
  const int d = j["dim"].get<int>();
  if (d < 1 || d > kMaxDim) throw ParseError("dim out of range: " + std::to_string(d));
  Matrix m(d, d);
  auto read_part = [&](const char* key, bool imag) {
    const auto& rows = j[key];
    if (!rows.is_array() || static_cast<int>(rows.size()) != d)
      throw ParseError(std::string(key) + " must have " + std::to_string(d) + " rows");
    for (int i = 0; i < d; ++i) {
      if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != d)
        throw ParseError(std::string(key) + " row " + std::to_string(i) + " has wrong length");
      for (int k = 0; k < d; ++k) {
        if (!rows[i][k].is_number()) throw ParseError(std::string(key) + " entries must be numbers");
        const double v = rows[i][k].get<double>();
        if (imag)
          m(i, k) = Complex(m(i, k).real(), v);
        else
          m(i, k) = Complex(v, 0.0);
      }
    }
  };
  read_part("re", false);
  read_part("im", true);
  return m;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IOError("cannot open " + path.string() + " for writing");
  os << text;
  if (!os) throw IOError("write failed for " + path.string());
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IOError("cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

inline void write_state(const std::filesystem::path& path, const Matrix& m) { write_text_file(path, state_to_json(m)); }
inline void write_state(const std::filesystem::path& path, const DensityMatrix& rho) { write_state(path, rho.matrix()); }

inline DensityMatrix read_state(const std::filesystem::path& path, double tol = kTolDensity) {
  return DensityMatrix::from_matrix(state_matrix_from_json(read_text_file(path)), tol);
}

}  // namespace qtsallis
