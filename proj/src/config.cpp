#include "sg2d/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <variant>

#include "sg2d/io.hpp"

namespace sg2d {

namespace {

struct Value {
  enum Kind { number, string, array } kind = number;
  double num = 0.0;
  std::string raw;  // number text or string contents
  std::vector<double> items;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, const std::string& where) {
  const std::string t = trim(text);
  if (t.empty()) throw std::invalid_argument(where + ": empty value");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE) {
    throw std::invalid_argument(where + ": '" + t + "' is not a number");
  }
  return v;
}

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

Value parse_value(const std::string& text, const std::string& where) {
  Value v;
  const std::string t = trim(text);
  if (t.size() >= 2 && t.front() == '"' && t.back() == '"') {
    v.kind = Value::string;
    v.raw = t.substr(1, t.size() - 2);
  } else if (t.size() >= 2 && t.front() == '[' && t.back() == ']') {
    v.kind = Value::array;
    const std::string body = trim(t.substr(1, t.size() - 2));
    if (!body.empty()) {
      std::stringstream ss(body);
      std::string item;
      while (std::getline(ss, item, ',')) v.items.push_back(parse_number(item, where));
    }
  } else {
    v.kind = Value::number;
    v.raw = t;
    v.num = parse_number(t, where);
  }
  return v;
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

int as_int(const Value& v, const std::string& key) {
  if (v.kind != Value::number || v.num != std::floor(v.num) || std::abs(v.num) > 1e9) {
    throw std::invalid_argument(key + " must be an integer");
  }
  return static_cast<int>(v.num);
}

std::size_t as_count(const Value& v, const std::string& key) {
  if (v.kind != Value::number || v.num != std::floor(v.num) || v.num < 0 || v.num > 1e15) {
    throw std::invalid_argument(key + " must be a non-negative integer");
  }
  return static_cast<std::size_t>(v.num);
}

double as_real(const Value& v, const std::string& key) {
  if (v.kind != Value::number) throw std::invalid_argument(key + " must be a number");
  return v.num;
}

std::string as_string(const Value& v, const std::string& key) {
  if (v.kind != Value::string) throw std::invalid_argument(key + " must be a quoted string");
  return v.raw;
}

std::vector<double> as_list(const Value& v, const std::string& key) {
  if (v.kind != Value::array) throw std::invalid_argument(key + " must be an array [a, b, ...]");
  return v.items;
}

struct Field {
  std::function<void(RunConfig&, const Value&)> set;
  std::function<std::string(const RunConfig&)> get;
};

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

template <class T>
std::string list_text(const std::vector<T>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    if constexpr (std::is_integral_v<T>) {
      out += std::to_string(xs[i]);
    } else {
      out += format_double(xs[i]);
    }
  }
  return out + "]";
}

const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = [] {
    std::vector<std::pair<std::string, Field>> t;
    auto integer = [&](const char* key, int RunConfig::*m) {
      t.push_back({key, {[=](RunConfig& c, const Value& v) { c.*m = as_int(v, key); },
                         [=](const RunConfig& c) { return std::to_string(c.*m); }}});
    };
    auto count = [&](const char* key, std::size_t RunConfig::*m) {
      t.push_back({key, {[=](RunConfig& c, const Value& v) { c.*m = as_count(v, key); },
                         [=](const RunConfig& c) { return std::to_string(c.*m); }}});
    };
    auto real = [&](const char* key, double RunConfig::*m) {
      t.push_back({key, {[=](RunConfig& c, const Value& v) { c.*m = as_real(v, key); },
                         [=](const RunConfig& c) { return format_double(c.*m); }}});
    };
    auto reals = [&](const char* key, std::vector<double> RunConfig::*m) {
      t.push_back({key, {[=](RunConfig& c, const Value& v) { c.*m = as_list(v, key); },
                         [=](const RunConfig& c) { return list_text(c.*m); }}});
    };
    integer("N", &RunConfig::N);
    integer("M", &RunConfig::M);
    real("beta_sq", &RunConfig::beta_sq);
    real("coupling", &RunConfig::coupling);
    t.push_back({"bridge",
                 {[](RunConfig& c, const Value& v) {
                    c.bridge = cutoff_bridge_from_string(as_string(v, "bridge"));
                  },
                  [](const RunConfig& c) { return quoted(to_string(c.bridge)); }}});
    t.push_back({"model",
                 {[](RunConfig& c, const Value& v) {
                    c.model = linear_model_from_string(as_string(v, "model"));
                  },
                  [](const RunConfig& c) { return quoted(to_string(c.model)); }}});
    real("h", &RunConfig::h);
    real("T", &RunConfig::T);
    real("h_ref", &RunConfig::h_ref);
    count("replicas", &RunConfig::replicas);
    count("samples", &RunConfig::samples);
    count("snapshot_every", &RunConfig::snapshot_every);
    real("s", &RunConfig::s);
    count("burn_in", &RunConfig::burn_in);
    count("thin", &RunConfig::thin);
    integer("K", &RunConfig::K);
    integer("N_drift", &RunConfig::N_drift);
    count("iterations", &RunConfig::iterations);
    count("picard_iterations", &RunConfig::picard_iterations);
    real("alpha", &RunConfig::alpha);
    real("epsilon", &RunConfig::epsilon);
    t.push_back({"Ns",
                 {[](RunConfig& c, const Value& v) {
                    c.Ns.clear();
                    for (double x : as_list(v, "Ns")) {
                      if (x != std::floor(x)) throw std::invalid_argument("Ns must hold integers");
                      c.Ns.push_back(static_cast<int>(x));
                    }
                  },
                  [](const RunConfig& c) { return list_text(c.Ns); }}});
    reals("alphas", &RunConfig::alphas);
    reals("beta_sqs", &RunConfig::beta_sqs);
    reals("hs", &RunConfig::hs);
    t.push_back({"seed",
                 {[](RunConfig& c, const Value& v) {
                    if (v.kind != Value::number || v.raw.find_first_not_of("0123456789") != std::string::npos) {
                      throw std::invalid_argument("seed must be an unsigned 64-bit integer");
                    }
                    c.seed = std::stoull(v.raw);
                  },
                  [](const RunConfig& c) { return std::to_string(c.seed); }}});
    t.push_back({"out_dir",
                 {[](RunConfig& c, const Value& v) { c.out_dir = as_string(v, "out_dir"); },
                  [](const RunConfig& c) { return quoted(c.out_dir); }}});
    return t;
  }();
  return table;
}

const Field* find_field(const std::string& key) {
  for (const auto& [name, field] : fields()) {
    if (name == key) return &field;
  }
  return nullptr;
}

std::string suggestion(const std::string& key) {
  std::string best;
  std::size_t best_d = 4;
  for (const auto& [name, field] : fields()) {
    const std::size_t d = edit_distance(key, name);
    if (d < best_d) {
      best_d = d;
      best = name;
    }
  }
  return best.empty() ? "" : " (did you mean '" + best + "'?)";
}

}  // namespace

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& [name, field] : fields()) keys.push_back(name);
  return keys;
}

GridSpec RunConfig::grid() const {
  GridSpec g;
  g.cutoff = N;
  g.points_per_axis = M > 0 ? M : 4 * N;
  g.beta_sq = beta_sq;
  g.coupling = coupling;
  g.bridge = bridge;
  return g;
}

void RunConfig::validate() const {
  grid().validate();
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
  };
  require(h > 0.0 && std::isfinite(h), "h must be > 0");
  require(T > 0.0 && std::isfinite(T), "T must be > 0");
  require(h_ref > 0.0 && h_ref <= h, "h_ref must satisfy 0 < h_ref <= h");
  require(s > 0.0 && s < 1.0, "pCN scale s must lie in (0, 1)");
  require(burn_in >= 1 && thin >= 1, "burn_in and thin must be >= 1");
  require(replicas >= 1 && samples >= 1, "replicas and samples must be >= 1");
  require(snapshot_every >= 1, "snapshot_every must be >= 1");
  require(K >= 1, "K must be >= 1");
  require(N_drift >= 0 && N_drift <= N, "drift band limit must satisfy 0 <= N_drift <= N");
  require(iterations >= 1 && picard_iterations >= 1, "iteration counts must be >= 1");
  require(alpha > 0.0, "alpha must be > 0");
  require(epsilon >= 0.0, "epsilon must be >= 0");
  for (int n : Ns) require(n >= 1, "every entry of Ns must be >= 1");
  for (double a : alphas) require(a > 0.0, "every entry of alphas must be > 0");
  for (double b : beta_sqs) require(b >= 0.0, "every entry of beta_sqs must be >= 0");
  for (double x : hs) require(x > 0.0, "every entry of hs must be > 0");
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig config;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = trim(strip_comment(line));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const std::string where = "line " + std::to_string(lineno);
    if (eq == std::string::npos) throw std::invalid_argument(where + ": expected key = value");
    const std::string key = trim(body.substr(0, eq));
    const Field* field = find_field(key);
    if (!field) throw std::invalid_argument(where + ": unknown key '" + key + "'" + suggestion(key));
    if (!seen.insert(key).second) throw std::invalid_argument(where + ": duplicate key '" + key + "'");
    field->set(config, parse_value(body.substr(eq + 1), where + " (" + key + ")"));
  }
  for (const char* required : {"N", "beta_sq"}) {
    if (!seen.count(required)) throw std::invalid_argument(std::string("missing required key '") + required + "'");
  }
  if (!seen.count("M")) config.M = 4 * config.N;
  if (!seen.count("N_drift")) config.N_drift = std::min(config.N, 2);
  config.validate();
  return config;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string serialize_config(const RunConfig& config) {
  std::string out;
  for (const auto& [name, field] : fields()) out += name + " = " + field.get(config) + "\n";
  return out;
}

}  // namespace sg2d
