#include "restart/cli/kv_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "restart/cli/presets.hpp"

namespace restart::cli {

using train::ConfigError;
using train::ExperimentConfig;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Strips a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted && c == '\\') {
      ++i;
    } else if (c == '"') {
      quoted = !quoted;
    } else if (c == '#' && !quoted) {
      return line.substr(0, i);
    }
  }
  return line;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string parse_string(const std::string& key, const std::string& token) {
  if (token.empty()) throw ConfigError(key, "empty value");
  if (token.front() != '"') {
    if (token.find_first_of(" \t\"[]=") != std::string::npos) throw ConfigError(key, "malformed string " + token);
    return token;
  }
  std::string out;
  std::size_t i = 1;
  for (; i < token.size(); ++i) {
    const char c = token[i];
    if (c == '\\') {
      if (++i == token.size()) break;
      out += token[i];
    } else if (c == '"') {
      break;
    } else {
      out += c;
    }
  }
  if (i != token.size() - 1) throw ConfigError(key, "unterminated or trailing text in string " + token);
  return out;
}

template <class Int>
Int parse_int(const std::string& key, const std::string& token) {
  Int v{};
  const auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || p != token.data() + token.size()) throw ConfigError(key, "expected an integer, got " + token);
  return v;
}

double parse_double(const std::string& key, const std::string& token) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || p != token.data() + token.size() || !std::isfinite(v)) {
    throw ConfigError(key, "expected a finite number, got " + token);
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& token) {
  if (token == "true") return true;
  if (token == "false") return false;
  throw ConfigError(key, "expected true or false, got " + token);
}

std::vector<std::uint64_t> parse_seed_list(const std::string& key, const std::string& token) {
  std::string body = token;
  if (!body.empty() && body.front() == '[') {
    if (body.back() != ']') throw ConfigError(key, "unterminated list " + token);
    body = body.substr(1, body.size() - 2);
  }
  std::vector<std::uint64_t> out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError(key, "empty list element in " + token);
    out.push_back(parse_int<std::uint64_t>(key, item));
  }
  return out;
}

std::string fmt(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, p);
  // Keep a decimal point or exponent so the token reads back as a float.
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

template <class Int>
std::string fmt_int(Int v) {
  return std::to_string(v);
}

struct Field {
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, const std::string& key, const std::string& token)> set;
};

#define RESTART_INT_FIELD(expr, type)                                                             \
  Field {                                                                                         \
    [](const ExperimentConfig& c) { return fmt_int(c.expr); },                                    \
        [](ExperimentConfig& c, const std::string& k, const std::string& t) { c.expr = parse_int<type>(k, t); } \
  }
#define RESTART_DOUBLE_FIELD(expr)                                                                \
  Field {                                                                                         \
    [](const ExperimentConfig& c) { return fmt(c.expr); },                                        \
        [](ExperimentConfig& c, const std::string& k, const std::string& t) { c.expr = parse_double(k, t); } \
  }

const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = {
      {"preset",
       {[](const ExperimentConfig& c) { return quote(c.preset); },
        [](ExperimentConfig& c, const std::string& k, const std::string& t) { c.preset = parse_string(k, t); }}},
      {"env.kind",
       {[](const ExperimentConfig& c) { return quote(train::to_string(c.env.kind)); },
        [](ExperimentConfig& c, const std::string& k, const std::string& t) {
          c.env.kind = train::parse_env_kind(parse_string(k, t), k);
        }}},
      {"env.t_env", RESTART_INT_FIELD(env.t_env, int)},
      {"env.corridor_length", RESTART_INT_FIELD(env.corridor_length, int)},
      {"env.maze_size", RESTART_INT_FIELD(env.maze.size, int)},
      {"env.maze_seed", RESTART_INT_FIELD(env.maze.maze_seed, std::uint64_t)},
      {"env.goal_distance", RESTART_INT_FIELD(env.maze.goal_distance, int)},
      {"env.action_penalty", RESTART_DOUBLE_FIELD(env.maze.action_penalty)},
      {"env.grid_size", RESTART_INT_FIELD(env.grid_size, int)},
      {"memory.variant",
       {[](const ExperimentConfig& c) { return quote(train::to_string(c.memory.variant)); },
        [](ExperimentConfig& c, const std::string& k, const std::string& t) {
          c.memory.variant = train::parse_variant(parse_string(k, t), k);
        }}},
      {"memory.ratio", RESTART_DOUBLE_FIELD(memory.ratio)},
      {"memory.alpha", RESTART_DOUBLE_FIELD(memory.alpha)},
      {"memory.epsilon", RESTART_DOUBLE_FIELD(memory.epsilon)},
      {"memory.capacity", RESTART_INT_FIELD(memory.capacity, std::size_t)},
      {"memory.parent_capacity", RESTART_INT_FIELD(memory.parent_capacity, std::size_t)},
      {"memory.sub_capacity", RESTART_INT_FIELD(memory.sub_capacity, std::size_t)},
      {"memory.t_aug_mode",
       {[](const ExperimentConfig& c) { return quote(train::to_string(c.memory.t_aug_mode)); },
        [](ExperimentConfig& c, const std::string& k, const std::string& t) {
          c.memory.t_aug_mode = train::parse_aug_mode(parse_string(k, t), k);
        }}},
      {"memory.t_aug", RESTART_INT_FIELD(memory.t_aug, int)},
      {"ppo.gamma", RESTART_DOUBLE_FIELD(ppo.gamma)},
      {"ppo.lambda", RESTART_DOUBLE_FIELD(ppo.lambda)},
      {"ppo.clip", RESTART_DOUBLE_FIELD(ppo.clip)},
      {"ppo.epochs", RESTART_INT_FIELD(ppo.epochs, int)},
      {"ppo.minibatch_size", RESTART_INT_FIELD(ppo.minibatch_size, int)},
      {"ppo.learning_rate", RESTART_DOUBLE_FIELD(ppo.learning_rate)},
      {"ppo.entropy_coef", RESTART_DOUBLE_FIELD(ppo.entropy_coef)},
      {"ppo.value_coef", RESTART_DOUBLE_FIELD(ppo.value_coef)},
      {"ppo.steps_per_iteration", RESTART_INT_FIELD(ppo.steps_per_iteration, int)},
      {"ppo.adam_epsilon", RESTART_DOUBLE_FIELD(ppo.adam_epsilon)},
      {"net.hidden", RESTART_INT_FIELD(net.hidden, int)},
      {"net.hidden_layers", RESTART_INT_FIELD(net.hidden_layers, int)},
      {"net.hidden_gain", RESTART_DOUBLE_FIELD(net.hidden_gain)},
      {"net.policy_output_gain", RESTART_DOUBLE_FIELD(net.policy_output_gain)},
      {"net.value_output_gain", RESTART_DOUBLE_FIELD(net.value_output_gain)},
      {"eval.episodes", RESTART_INT_FIELD(eval.episodes, int)},
      {"eval.period", RESTART_INT_FIELD(eval.period, std::int64_t)},
      {"eval.metric",
       {[](const ExperimentConfig& c) { return quote(train::to_string(c.eval.metric)); },
        [](ExperimentConfig& c, const std::string& k, const std::string& t) {
          c.eval.metric = train::parse_metric(parse_string(k, t), k);
        }}},
      {"eval.greedy",
       {[](const ExperimentConfig& c) { return std::string(c.eval.greedy ? "true" : "false"); },
        [](ExperimentConfig& c, const std::string& k, const std::string& t) { c.eval.greedy = parse_bool(k, t); }}},
      {"run.total_steps", RESTART_INT_FIELD(total_steps, std::int64_t)},
      {"run.filter_steps", RESTART_INT_FIELD(filter_steps, std::int64_t)},
      {"run.seeds",
       {[](const ExperimentConfig& c) {
          std::string s = "[";
          for (std::size_t i = 0; i < c.seeds.size(); ++i) s += (i ? ", " : "") + std::to_string(c.seeds[i]);
          return s + "]";
        },
        [](ExperimentConfig& c, const std::string& k, const std::string& t) { c.seeds = parse_seed_list(k, t); }}},
      {"run.out_dir",
       {[](const ExperimentConfig& c) { return quote(c.out_dir); },
        [](ExperimentConfig& c, const std::string& k, const std::string& t) { c.out_dir = parse_string(k, t); }}},
  };
  return table;
}

#undef RESTART_INT_FIELD
#undef RESTART_DOUBLE_FIELD

const Field& lookup(const std::string& key) {
  static const std::map<std::string, const Field*> index = [] {
    std::map<std::string, const Field*> m;
    for (const auto& [k, f] : fields()) m[k] = &f;
    return m;
  }();
  const auto it = index.find(key);
  if (it == index.end()) throw ConfigError(key, "unknown configuration key");
  return *it->second;
}

}  // namespace

std::vector<KvEntry> parse_kv(const std::string& text) {
  std::vector<KvEntry> out;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) throw ConfigError(where, "malformed section header " + line);
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || key.find_first_of(" \t.") != std::string::npos) throw ConfigError(where, "malformed key");
    if (value.empty()) throw ConfigError(section.empty() ? key : section + "." + key, "missing value");
    out.push_back({section.empty() ? key : section + "." + key, value, line_no});
  }
  return out;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, f] : fields()) k.push_back(name);
    return k;
  }();
  return keys;
}

void set_field(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  lookup(key).set(cfg, key, value);
}

std::string get_field(const ExperimentConfig& cfg, const std::string& key) { return lookup(key).get(cfg); }

void apply_override(ExperimentConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError(assignment, "override must have the form key=value");
  const std::string key = trim(assignment.substr(0, eq));
  const std::string value = trim(assignment.substr(eq + 1));
  if (value.empty()) throw ConfigError(key, "missing value");
  if (key == "preset") {
    const std::string name = parse_string(key, value);
    if (!name.empty()) cfg = preset(name);
    cfg.preset = name;
    return;
  }
  set_field(cfg, key, value);
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::string out;
  std::string section;
  for (const auto& [key, field] : fields()) {
    const auto dot = key.find('.');
    const std::string sec = dot == std::string::npos ? "" : key.substr(0, dot);
    const std::string name = dot == std::string::npos ? key : key.substr(dot + 1);
    if (sec != section) {
      out += "\n[" + sec + "]\n";
      section = sec;
    }
    out += name + " = " + field.get(cfg) + "\n";
  }
  return out;
}

ExperimentConfig parse_config(const std::string& text, ExperimentConfig base) {
  const auto entries = parse_kv(text);
  ExperimentConfig cfg = std::move(base);
  for (const auto& e : entries) {
    if (e.key == "preset") {
      const std::string name = parse_string(e.key, e.value);
      if (!name.empty()) cfg = preset(name);
      cfg.preset = name;
    }
  }
  std::map<std::string, int> seen;
  for (const auto& e : entries) {
    if (!seen.emplace(e.key, e.line).second) throw ConfigError(e.key, "duplicate key");
    if (e.key != "preset") set_field(cfg, e.key, e.value);
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

bool same_config(const ExperimentConfig& a, const ExperimentConfig& b) {
  return serialize_config(a) == serialize_config(b);
}

}  // namespace restart::cli
