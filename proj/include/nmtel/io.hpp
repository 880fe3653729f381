#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nmtel/quantum_core.hpp"
#include "nmtel/teleport.hpp"
#include "nmtel/types.hpp"

namespace nmtel {

// 12 significant digits, locale-independent, deterministic
inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

template <typename Real>
void write_trace_csv(const std::filesystem::path& path, const FidelityTrace<Real>& trace) {
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << (trace.has_m ? "gamma0_t,value,m\n" : "gamma0_t,value\n");
  for (const auto& s : trace.samples) {
    out << format_number(double(s.t)) << ',' << format_number(double(s.value));
    if (trace.has_m) out << ',' << s.m;
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

// 16 complex entries, row-major, each token "re,im", whitespace separated
template <typename Real>
Matrix4<Real> load_custom_state(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open custom state file: " + path.string());
  Matrix4<Real> rho;
  std::string tok;
  int count = 0;
  while (in >> tok) {
    if (count >= 16)
      throw std::invalid_argument("custom state file has more than 16 entries");
    const auto comma = tok.find(',');
    if (comma == std::string::npos || tok.find(',', comma + 1) != std::string::npos)
      throw std::invalid_argument("entry " + std::to_string(count + 1) +
                                  " is not a re,im pair: '" + tok + "'");
    std::size_t used = 0;
    Real re, im;
    try {
      re = Real(std::stod(tok.substr(0, comma), &used));
      if (used != comma) throw std::invalid_argument(tok);
      im = Real(std::stod(tok.substr(comma + 1), &used));
      if (used != tok.size() - comma - 1) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw std::invalid_argument("entry " + std::to_string(count + 1) +
                                  " is not numeric: '" + tok + "'");
    }
    rho(count / 4, count % 4) = Complex<Real>(re, im);
    ++count;
  }
  if (count != 16)
    throw std::invalid_argument("custom state file must hold 16 entries, found " +
                                std::to_string(count));
  validate_density<Real, 4>(rho, "custom initial state");
  return rho;
}

}  // namespace nmtel
