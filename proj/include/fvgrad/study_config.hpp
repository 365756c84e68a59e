#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fvgrad/gradient.hpp"
#include "fvgrad/verify.hpp"

namespace fvgrad {

struct ConfigParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Convergence study configuration.  Flat line-oriented `key = value` text
/// with bracketed section headers:
///
///   [mesh]            generator, nx, ny, amplitude, seed, levels, ratio
///   [schemes]         ids = comma list of scheme ids
///   [fields]          ids = comma list of field ids
///   [solver]          tol, max_iter, relax
///   [output]          path
struct StudyConfig {
  MeshFamily family;
  int levels = 2;
  std::vector<std::string> scheme_ids;
  std::vector<std::string> field_ids;
  SolverOptions solver;
  std::string output_path = "study.csv";
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace detail

inline StudyConfig parse_study_config(std::istream& in) {
  StudyConfig cfg;
  std::string section;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[' && t.back() == ']') {
      section = t.substr(1, t.size() - 2);
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigParseError("line " + std::to_string(lineno) +
                             ": expected 'key = value'");
    }
    const std::string key = detail::trim(t.substr(0, eq));
    const std::string value = detail::trim(t.substr(eq + 1));
    try {
      if (section == "mesh") {
        if (key == "generator") cfg.family.generator = value;
        else if (key == "nx") cfg.family.nx = std::stoi(value);
        else if (key == "ny") cfg.family.ny = std::stoi(value);
        else if (key == "amplitude") cfg.family.amplitude = std::stod(value);
        else if (key == "seed") cfg.family.seed = static_cast<unsigned>(std::stoul(value));
        else if (key == "ratio") cfg.family.ratio = std::stod(value);
        else if (key == "levels") cfg.levels = std::stoi(value);
        else throw ConfigParseError("unknown [mesh] key: " + key);
      } else if (section == "schemes") {
        if (key == "ids") cfg.scheme_ids = detail::split_list(value);
        else throw ConfigParseError("unknown [schemes] key: " + key);
      } else if (section == "fields") {
        if (key == "ids") cfg.field_ids = detail::split_list(value);
        else throw ConfigParseError("unknown [fields] key: " + key);
      } else if (section == "solver") {
        if (key == "tol") cfg.solver.tol = std::stod(value);
        else if (key == "max_iter") cfg.solver.max_iter = std::stoi(value);
        else if (key == "relax") cfg.solver.relax = std::stod(value);
        else throw ConfigParseError("unknown [solver] key: " + key);
      } else if (section == "output") {
        if (key == "path") cfg.output_path = value;
        else throw ConfigParseError("unknown [output] key: " + key);
      } else {
        throw ConfigParseError("key outside a known section at line " +
                               std::to_string(lineno));
      }
    } catch (const std::invalid_argument&) {
      throw ConfigParseError("line " + std::to_string(lineno) +
                             ": bad value for " + key);
    }
  }
  if (cfg.levels < 1) throw ConfigParseError("levels must be >= 1");
  if (cfg.scheme_ids.empty()) throw ConfigParseError("no scheme ids given");
  if (cfg.field_ids.empty()) throw ConfigParseError("no field ids given");
  return cfg;
}

inline StudyConfig parse_study_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigParseError("cannot open config file " + path);
  return parse_study_config(in);
}

}  // namespace fvgrad
