// Copyright 2026 The bosloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bosloc/config.h"

#include <fstream>
#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include "bosloc/error.h"

namespace bosloc {
namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"experiment",
       {"model", "dim", "points_per_unit", "scales", "levels", "kinetic_modes",
        "realizations", "seed", "deltas", "localization_levels", "tol", "solver",
        "dense_cutoff", "block_size", "max_iterations", "max_points", "spectrum_cache",
        "output"}},
      {"gas", {"beta", "rho_bar", "lambda", "tail_model"}},
      {"random", {"profile", "sigma", "peak", "a"}},
      {"weak", {}},
      {"goodbox",
       {"l1", "alpha", "count", "gamma", "energy", "scale", "centers", "decay_levels",
        "delta", "zeta"}},
      {"ids", {"box", "realizations", "e_min", "e_max", "points", "levels"}},
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return d;
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("{}: '{}' is not a number", key, v));
  }
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long d = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return d;
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("{}: '{}' is not an integer", key, v));
  }
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const unsigned long long d = std::stoull(v, &pos, 0);
    if (pos != v.size() || v.front() == '-') throw std::invalid_argument("bad");
    return d;
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("{}: '{}' is not an unsigned integer", key, v));
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "off" || v == "no" || v == "0") return false;
  throw ConfigError(fmt::format("{}: '{}' is not a boolean", key, v));
}

class Section {
 public:
  Section(const pt::ptree* tree, std::string name) : tree_(tree), name_(std::move(name)) {}

  std::optional<std::string> raw(const std::string& key) const {
    if (tree_ == nullptr) return std::nullopt;
    const auto it = tree_->find(key);
    if (it == tree_->not_found()) return std::nullopt;
    return trim(it->second.data());
  }
  std::string full(const std::string& key) const { return name_ + "." + key; }

  void read(const std::string& key, double& out) const {
    if (auto v = raw(key)) out = to_double(full(key), *v);
  }
  void read(const std::string& key, int& out) const {
    if (auto v = raw(key)) out = static_cast<int>(to_int(full(key), *v));
  }
  void read(const std::string& key, std::size_t& out) const {
    if (auto v = raw(key)) out = static_cast<std::size_t>(to_u64(full(key), *v));
  }
  void read(const std::string& key, bool& out) const {
    if (auto v = raw(key)) out = to_bool(full(key), *v);
  }
  void read(const std::string& key, std::string& out) const {
    if (auto v = raw(key)) out = *v;
  }
  void read(const std::string& key, std::vector<double>& out) const {
    if (auto v = raw(key)) {
      out.clear();
      for (const auto& item : split(*v, ',')) out.push_back(to_double(full(key), item));
    }
  }
  void read(const std::string& key, std::vector<int>& out) const {
    if (auto v = raw(key)) {
      out.clear();
      for (const auto& item : split(*v, ','))
        out.push_back(static_cast<int>(to_int(full(key), item)));
    }
  }

 private:
  const pt::ptree* tree_;
  std::string name_;
};

Section section(const pt::ptree& root, const std::string& name) {
  const auto it = root.find(name);
  return {it == root.not_found() ? nullptr : &it->second, name};
}

// "zeroN = y1[,y2,y3] alpha c"
WeakZero parse_zero(const std::string& key, const std::string& value, int dim) {
  std::istringstream in(value);
  std::string ys, alpha, c, extra;
  if (!(in >> ys >> alpha >> c) || (in >> extra)) {
    throw ConfigError(fmt::format("weak.{}: expected 'y alpha c', got '{}'", key, value));
  }
  WeakZero z;
  const auto coords = split(ys, ',');
  if (static_cast<int>(coords.size()) != dim) {
    throw ConfigError(
        fmt::format("weak.{}: zero has {} coordinates, dim is {}", key, coords.size(), dim));
  }
  for (int a = 0; a < dim; ++a) z.y[a] = to_double("weak." + key, coords[a]);
  z.alpha = to_double("weak." + key, alpha);
  z.c = to_double("weak." + key, c);
  return z;
}

}  // namespace

std::string to_string(ModelKind kind) { return kind == ModelKind::kWeak ? "weak" : "random"; }

int ExperimentConfig::levels_at(std::size_t i) const {
  return levels.size() == 1 ? levels.front() : levels.at(i);
}

int ExperimentConfig::kinetic_modes_at(std::size_t i) const {
  if (kinetic_modes.empty()) return levels_at(i);
  return kinetic_modes.size() == 1 ? kinetic_modes.front() : kinetic_modes.at(i);
}

void ExperimentConfig::validate() const {
  if (dim < 1 || dim > 3) throw ConfigError("experiment.dim must be 1, 2 or 3");
  if (points_per_unit < 1) throw ConfigError("experiment.points_per_unit must be positive");
  if (scales.empty()) throw ConfigError("experiment.scales must list at least one side");
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (!(scales[i] >= 1.0)) throw ConfigError("experiment.scales must be >= 1");
    if (i > 0 && !(scales[i] > scales[i - 1]))
      throw ConfigError("experiment.scales must be strictly ascending");
    const double cells = scales[i] * points_per_unit;
    if (std::abs(cells - std::round(cells)) > 1e-9 * cells) {
      throw ConfigError(fmt::format("scale {} times points_per_unit is not an integer",
                                    scales[i]));
    }
    const double n = std::round(cells) - 1.0;
    const double total = std::pow(n, dim);
    if (total > static_cast<double>(max_points)) {
      throw ConfigError(fmt::format("scale {} needs {:.0f} grid points, above max_points {}",
                                    scales[i], total, max_points));
    }
    if (levels.size() != 1 && levels.size() != scales.size()) {
      throw ConfigError("experiment.levels needs one entry or one per scale");
    }
    if (!kinetic_modes.empty() && kinetic_modes.size() != 1 &&
        kinetic_modes.size() != scales.size()) {
      throw ConfigError("experiment.kinetic_modes needs one entry or one per scale");
    }
    if (levels_at(i) < 1 || levels_at(i) > total)
      throw ConfigError(fmt::format("levels at scale {} out of range", scales[i]));
    if (kinetic_modes_at(i) < 1 || kinetic_modes_at(i) > total)
      throw ConfigError(fmt::format("kinetic_modes at scale {} out of range", scales[i]));
  }
  if (realizations < 1) throw ConfigError("experiment.realizations must be positive");
  for (double d : deltas)
    if (!(d > 0.0)) throw ConfigError("experiment.deltas must be positive");
  if (localization_levels < 1) throw ConfigError("experiment.localization_levels must be >= 1");
  if (!(tol > 0.0)) throw ConfigError("experiment.tol must be positive");
  if (eigen.block_size < 1) throw ConfigError("experiment.block_size must be positive");
  try {
    gas.validate();
    if (model == ModelKind::kRandom) {
      random.profile.validate();
      random.strengths.validate();
    } else {
      WeakPotentialSpec w = weak;
      w.normalize();
      if (w.dim != dim) throw ConfigError("weak potential dimension differs from experiment.dim");
    }
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  if (goodbox.count < 1 || goodbox.centers < 1 || goodbox.decay_levels < 1) {
    throw ConfigError("goodbox.count, centers and decay_levels must be positive");
  }
  if (ids.realizations < 1 || ids.points < 1 || !(ids.e_max >= ids.e_min)) {
    throw ConfigError("ids section is inconsistent");
  }
}

std::string ExperimentConfig::canonical() const {
  std::string s;
  auto add = [&](const std::string& k, const std::string& v) { s += k + "=" + v + "\n"; };
  add("model", to_string(model));
  add("dim", std::to_string(dim));
  add("points_per_unit", std::to_string(points_per_unit));
  add("scales", fmt::format("{:.17g}", fmt::join(scales, ",")));
  add("levels", fmt::format("{}", fmt::join(levels, ",")));
  add("kinetic_modes", fmt::format("{}", fmt::join(kinetic_modes, ",")));
  add("realizations", std::to_string(realizations));
  add("seed", std::to_string(seed));
  add("deltas", fmt::format("{:.17g}", fmt::join(deltas, ",")));
  add("localization_levels", std::to_string(localization_levels));
  add("tol", fmt::format("{:.17g}", tol));
  add("solver", std::to_string(static_cast<int>(eigen.method)));
  add("dense_cutoff", std::to_string(eigen.dense_cutoff));
  add("block_size", std::to_string(eigen.block_size));
  add("max_iterations", std::to_string(eigen.max_iterations));
  add("gas", fmt::format("{:.17g},{:.17g},{:.17g},{}", gas.beta, gas.rho_bar, gas.lambda,
                         bosloc::to_string(tail)));
  if (model == ModelKind::kRandom) {
    add("random", random.describe());
  } else {
    add("weak", weak.describe());
  }
  return s;
}

std::uint64_t ExperimentConfig::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

ExperimentConfig parse_config(const std::string& text) {
  pt::ptree root;
  try {
    std::istringstream in(text);
    pt::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(fmt::format("config parse error: {}", e.what()));
  }
  for (const auto& [name, sub] : root) {
    const auto it = known_keys().find(name);
    if (it == known_keys().end()) throw ConfigError(fmt::format("unknown section [{}]", name));
    for (const auto& [key, value] : sub) {
      const bool zero_key = name == "weak" && key.rfind("zero", 0) == 0;
      if (!zero_key && !it->second.contains(key)) {
        throw ConfigError(fmt::format("unknown key {}.{}", name, key));
      }
    }
  }

  ExperimentConfig c;
  const Section ex = section(root, "experiment");
  std::string model = "random";
  ex.read("model", model);
  if (model == "random") {
    c.model = ModelKind::kRandom;
  } else if (model == "weak") {
    c.model = ModelKind::kWeak;
  } else {
    throw ConfigError(fmt::format("experiment.model: unknown model '{}'", model));
  }
  ex.read("dim", c.dim);
  ex.read("points_per_unit", c.points_per_unit);
  ex.read("scales", c.scales);
  c.levels = {8};
  ex.read("levels", c.levels);
  ex.read("kinetic_modes", c.kinetic_modes);
  ex.read("realizations", c.realizations);
  if (auto v = ex.raw("seed")) c.seed = to_u64("experiment.seed", *v);
  ex.read("deltas", c.deltas);
  ex.read("localization_levels", c.localization_levels);
  ex.read("tol", c.tol);
  std::string solver = "auto";
  ex.read("solver", solver);
  if (solver == "auto") {
    c.eigen.method = SolverMethod::kAuto;
  } else if (solver == "dense") {
    c.eigen.method = SolverMethod::kDense;
  } else if (solver == "iterative") {
    c.eigen.method = SolverMethod::kIterative;
  } else {
    throw ConfigError(fmt::format("experiment.solver: unknown solver '{}'", solver));
  }
  ex.read("dense_cutoff", c.eigen.dense_cutoff);
  ex.read("block_size", c.eigen.block_size);
  ex.read("max_iterations", c.eigen.max_iterations);
  ex.read("max_points", c.max_points);
  ex.read("spectrum_cache", c.spectrum_cache);
  ex.read("output", c.output_dir);

  const Section gas = section(root, "gas");
  gas.read("beta", c.gas.beta);
  gas.read("rho_bar", c.gas.rho_bar);
  gas.read("lambda", c.gas.lambda);
  std::string tail = "none";
  gas.read("tail_model", tail);
  c.tail = parse_tail_model(tail);

  const Section rnd = section(root, "random");
  std::string profile = "indicator";
  rnd.read("profile", profile);
  if (profile == "indicator") {
    c.random.profile.shape = ProfileShape::kIndicator;
  } else if (profile == "cosine-bump") {
    c.random.profile.shape = ProfileShape::kCosineBump;
  } else {
    throw ConfigError(fmt::format("random.profile: unknown profile '{}'", profile));
  }
  rnd.read("sigma", c.random.profile.floor);
  c.random.profile.peak = c.random.profile.floor;
  rnd.read("peak", c.random.profile.peak);
  rnd.read("a", c.random.strengths.a);
  c.random.seed = c.seed;

  c.weak.dim = c.dim;
  if (const auto it = root.find("weak"); it != root.not_found()) {
    std::vector<std::pair<std::string, std::string>> zeros;
    for (const auto& [key, value] : it->second) zeros.emplace_back(key, value.data());
    std::sort(zeros.begin(), zeros.end());
    for (const auto& [key, value] : zeros) c.weak.zeros.push_back(parse_zero(key, trim(value), c.dim));
  }
  if (c.model == ModelKind::kWeak && c.weak.zeros.empty()) {
    throw ConfigError("weak model needs at least one [weak] zeroN entry");
  }

  const Section gb = section(root, "goodbox");
  gb.read("l1", c.goodbox.l1);
  gb.read("alpha", c.goodbox.alpha);
  gb.read("count", c.goodbox.count);
  gb.read("gamma", c.goodbox.gamma);
  gb.read("energy", c.goodbox.energy);
  gb.read("scale", c.goodbox.scale);
  gb.read("centers", c.goodbox.centers);
  gb.read("decay_levels", c.goodbox.decay_levels);
  gb.read("delta", c.goodbox.constants.delta);
  gb.read("zeta", c.goodbox.constants.zeta);

  const Section ids = section(root, "ids");
  ids.read("box", c.ids.box);
  ids.read("realizations", c.ids.realizations);
  ids.read("e_min", c.ids.e_min);
  ids.read("e_max", c.ids.e_max);
  ids.read("points", c.ids.points);
  ids.read("levels", c.ids.levels);

  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file {}", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace bosloc
