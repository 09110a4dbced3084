#include "orbitcount/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "orbitcount/errors.hpp"

namespace orbitcount::config {

namespace {

[[noreturn]] void bad(const std::string& what) { throw error(errc::config, what); }

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// Raw entries keyed "section.key", in file order for the digest.
struct RawConfig {
  std::map<std::string, std::string> entries;
  std::map<std::string, bool> consumed;

  const std::string* get(const std::string& key) {
    auto it = entries.find(key);
    if (it == entries.end()) return nullptr;
    consumed[key] = true;
    return &it->second;
  }
};

double parse_number(const std::string& tok, const std::string& key) {
  size_t slash = tok.find('/');
  try {
    if (slash != std::string::npos) {
      double num = std::stod(tok.substr(0, slash));
      double den = std::stod(tok.substr(slash + 1));
      if (den == 0.0) bad(key + ": division by zero");
      return num / den;
    }
    size_t used = 0;
    double v = std::stod(tok, &used);
    if (used != tok.size()) bad(key + ": trailing characters in number '" + tok + "'");
    return v;
  } catch (const std::logic_error&) {
    bad(key + ": cannot parse number '" + tok + "'");
  }
}

std::vector<double> parse_list(const std::string& val, const std::string& key) {
  std::string s = val;
  for (char& c : s)
    if (c == ',') c = ' ';
  std::istringstream in(s);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(parse_number(tok, key));
  return out;
}

long checked_long(double v, const std::string& key) {
  if (std::floor(v) != v) bad(key + ": expected an integer");
  return static_cast<long>(v);
}

void read_double(RawConfig& raw, const std::string& key, double& target) {
  if (const std::string* v = raw.get(key)) target = parse_number(*v, key);
}
void read_int(RawConfig& raw, const std::string& key, int& target) {
  if (const std::string* v = raw.get(key))
    target = static_cast<int>(checked_long(parse_number(*v, key), key));
}
void read_long(RawConfig& raw, const std::string& key, long& target) {
  if (const std::string* v = raw.get(key)) target = checked_long(parse_number(*v, key), key);
}
void read_string(RawConfig& raw, const std::string& key, std::string& target) {
  if (const std::string* v = raw.get(key)) target = *v;
}
void read_int_list(RawConfig& raw, const std::string& key, std::vector<int>& target) {
  if (const std::string* v = raw.get(key)) {
    target.clear();
    for (double d : parse_list(*v, key))
      target.push_back(static_cast<int>(checked_long(d, key)));
  }
}

}  // namespace

Config parse_config(std::istream& in) {
  RawConfig raw;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') bad("line " + std::to_string(lineno) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos) bad("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty()) bad("line " + std::to_string(lineno) + ": empty key");
    std::string full = section.empty() ? key : section + "." + key;
    if (!raw.entries.emplace(full, val).second) bad("duplicate key '" + full + "'");
  }

  Config cfg;
  read_int(raw, "group.rank", cfg.rank);
  read_int_list(raw, "group.involution", cfg.involution);
  read_int_list(raw, "group.order", cfg.order);

  read_string(raw, "space.kind", cfg.kind);
  if (const std::string* v = raw.get("space.weights")) cfg.weights = parse_list(*v, "space.weights");
  read_double(raw, "space.basepoint_x", cfg.basepoint_x);
  read_double(raw, "space.basepoint_y", cfg.basepoint_y);

  read_string(raw, "conjugacy.g", cfg.g);
  read_string(raw, "conjugacy.cylinder_prefix", cfg.cylinder_prefix);

  read_int(raw, "coding.signature_radius", cfg.signature_radius);
  read_int(raw, "coding.verify_len", cfg.verify_len);
  read_int(raw, "coding.state_budget", cfg.state_budget);

  read_int(raw, "potential.depth", cfg.depth);
  read_int_list(raw, "potential.hoelder_depths", cfg.hoelder_depths);

  read_long(raw, "spectral.orbit_budget", cfg.orbit_budget);
  read_double(raw, "spectral.curve_lo", cfg.curve_lo);
  read_double(raw, "spectral.curve_hi", cfg.curve_hi);
  read_double(raw, "spectral.curve_step", cfg.curve_step);
  read_int(raw, "spectral.lattice_max_period", cfg.lattice_max_period);

  read_double(raw, "counting.t_max_full", cfg.t_max_full);
  read_double(raw, "counting.t_max_conj", cfg.t_max_conj);
  read_double(raw, "counting.grid_step", cfg.grid_step);
  read_double(raw, "counting.fit_lo", cfg.fit_lo);
  read_double(raw, "counting.fit_hi", cfg.fit_hi);
  read_int(raw, "counting.cyl_prefix_len", cfg.cyl_prefix_len);
  read_long(raw, "counting.word_budget", cfg.word_budget);
  read_int(raw, "counting.envelope_sample_depth", cfg.envelope_sample_depth);

  // Matrices come as one row-major quadruple per generator, keys a, b, c, ...
  if (cfg.kind == "half_plane") {
    cfg.matrices.clear();
    for (int i = 0; i < cfg.rank; ++i) {
      std::string key = std::string("matrices.") + static_cast<char>('a' + i);
      const std::string* v = raw.get(key);
      if (!v) bad("missing " + key + " for a half-plane space");
      auto vals = parse_list(*v, key);
      if (vals.size() != 4) bad(key + ": expected 4 entries");
      Eigen::Matrix2d m;
      m << vals[0], vals[1], vals[2], vals[3];
      cfg.matrices.push_back(m);
    }
  } else if (cfg.kind != "tree") {
    bad("space.kind must be 'tree' or 'half_plane'");
  }

  for (const auto& [key, val] : raw.entries)
    if (!raw.consumed.count(key)) bad("unknown key '" + key + "'");

  if (cfg.rank < 1) bad("group.rank must be at least 1");
  if (cfg.weights.empty()) cfg.weights.assign(static_cast<size_t>(cfg.rank), 1.0);
  if (static_cast<int>(cfg.weights.size()) != cfg.rank)
    bad("space.weights needs one entry per generator pair");
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::io, "cannot open config file " + path);
  return parse_config(in);
}

group::GeneratorSet Config::make_gens() const {
  group::GeneratorSet gens = group::GeneratorSet::free_group(rank);
  if (!involution.empty()) {
    if (static_cast<int>(involution.size()) != gens.alphabet_size())
      bad("group.involution needs one entry per letter");
    gens.involution = involution;
  }
  if (!order.empty()) {
    if (static_cast<int>(order.size()) != gens.alphabet_size())
      bad("group.order needs one entry per letter");
    gens.order = order;
  }
  gens.validate();
  return gens;
}

geometry::ModelSpace Config::make_space() const {
  group::GeneratorSet gens = make_gens();
  if (kind == "tree") return geometry::make_tree_space(gens, weights);
  return geometry::make_half_plane_space(gens, matrices,
                                         geometry::HalfPlanePoint{basepoint_x, basepoint_y});
}

group::Word Config::g_word() const { return group::parse_word(g, make_gens()); }

uint64_t Config::hash() const {
  char buf[64];
  std::string dump;
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g;", v);
    dump += buf;
  };
  auto str = [&](const std::string& s) {
    dump += s;
    dump += ';';
  };
  num(rank);
  for (int v : involution) num(v);
  for (int v : order) num(v);
  str(kind);
  for (double w : weights) num(w);
  for (const auto& m : matrices)
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) num(m(r, c));
  num(basepoint_x);
  num(basepoint_y);
  str(g);
  str(cylinder_prefix);
  num(signature_radius);
  num(verify_len);
  num(state_budget);
  num(depth);
  for (int d : hoelder_depths) num(d);
  num(static_cast<double>(orbit_budget));
  num(curve_lo);
  num(curve_hi);
  num(curve_step);
  num(lattice_max_period);
  num(t_max_full);
  num(t_max_conj);
  num(grid_step);
  num(fit_lo);
  num(fit_hi);
  num(cyl_prefix_len);
  num(static_cast<double>(word_budget));
  num(envelope_sample_depth);

  uint64_t h = 1469598103934665603ull;
  for (char c : dump) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace orbitcount::config
