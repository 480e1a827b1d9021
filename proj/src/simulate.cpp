#include "hdual/simulate.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace hdual {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string canonical_key(std::string_view key) {
  std::string k(key);
  if (k == "t_end") k = "t-end";
  return k;
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys{"mode", "hamiltonian", "observable", "hbar",
                                             "t-end", "dt", "convention", "out"};
  return keys;
}

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<CoeffState> parse_coefficient_list(std::string_view text) {
  if (text.find(',') == std::string_view::npos) return std::nullopt;
  CoeffState s;
  std::size_t index = 0;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = text.find(',', start);
    const std::string_view item = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    if (index >= CoeffState::kSize) throw std::invalid_argument("expected 6 comma-separated coefficients");
    auto v = parse_double(item);
    if (!v || !std::isfinite(*v)) {
      throw std::invalid_argument("malformed coefficient '" + std::string(trim(item)) + "'");
    }
    s.c[index++] = *v;
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (index != CoeffState::kSize) throw std::invalid_argument("expected 6 comma-separated coefficients");
  return s;
}

CoeffState parse_quadratic(std::string_view text) {
  if (auto list = parse_coefficient_list(text)) return *list;
  const CoeffState s = CoeffState::from_expr(parse_expr(text));
  for (double v : s.c) {
    if (!std::isfinite(v)) throw std::invalid_argument("coefficients must be finite");
  }
  return s;
}

}  // namespace

ConfigPairs parse_config_text(std::string_view text) {
  ConfigPairs pairs;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t nl = text.find('\n', start);
    const std::string_view line = trim(text.substr(start, nl == std::string_view::npos ? text.npos : nl - start));
    ++line_no;
    if (!line.empty() && line.front() != '#') {
      const std::size_t eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw ConfigError(std::string(line), "line " + std::to_string(line_no) + " is not of the form key=value");
      }
      pairs.emplace_back(std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))));
    }
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return pairs;
}

ConfigPairs read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

QuadHamiltonian parse_hamiltonian(std::string_view text) {
  text = trim(text);
  if (text == "harmonic") {
    QuadHamiltonian h;
    h.coeffs[Monomial::qq] = 0.5;
    h.coeffs[Monomial::pp] = 0.5;
    return h;
  }
  if (text == "free") {
    QuadHamiltonian h;
    h.coeffs[Monomial::pp] = 0.5;
    return h;
  }
  return QuadHamiltonian{parse_quadratic(text)};
}

CoeffState parse_observable(std::string_view text, const QuadHamiltonian& hamiltonian) {
  text = trim(text);
  if (text == "energy") return hamiltonian.coeffs;
  return parse_quadratic(text);
}

SimConfig build_sim_config(const ConfigPairs& pairs) {
  std::map<std::string, std::string> values;
  for (const auto& [raw_key, value] : pairs) {
    const std::string key = canonical_key(raw_key);
    if (std::find(known_keys().begin(), known_keys().end(), key) == known_keys().end()) {
      throw ConfigError(raw_key, "unknown key");
    }
    values[key] = value;
  }

  auto positive = [&](const std::string& key, double& target) {
    auto it = values.find(key);
    if (it == values.end()) return;
    auto v = parse_double(it->second);
    if (!v || !std::isfinite(*v) || *v <= 0.0) throw ConfigError(key, "expected a positive number, got '" + it->second + "'");
    target = *v;
  };

  SimConfig cfg;
  if (auto it = values.find("mode"); it != values.end()) {
    if (it->second == "classical") {
      cfg.mode = SimMode::classical;
    } else if (it->second == "quantum") {
      cfg.mode = SimMode::quantum;
    } else {
      throw ConfigError("mode", "expected classical|quantum, got '" + it->second + "'");
    }
  }
  if (auto it = values.find("hbar"); it != values.end()) {
    auto v = parse_double(it->second);
    if (!v || !std::isfinite(*v) || *v == 0.0) throw ConfigError("hbar", "expected a finite nonzero number, got '" + it->second + "'");
    cfg.hbar = *v;
  }
  positive("t-end", cfg.t_end);
  positive("dt", cfg.dt);
  if (cfg.dt > cfg.t_end) throw ConfigError("dt", "must not exceed t-end");
  if (auto it = values.find("convention"); it != values.end()) {
    try {
      cfg.convention = parse_time_convention(it->second);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("convention", e.what());
    }
  }
  if (auto it = values.find("out"); it != values.end()) cfg.out = it->second;

  auto it = values.find("hamiltonian");
  if (it == values.end()) throw ConfigError("hamiltonian", "missing");
  try {
    cfg.hamiltonian = parse_hamiltonian(it->second);
  } catch (const std::exception& e) {
    throw ConfigError("hamiltonian", e.what());
  }
  it = values.find("observable");
  if (it == values.end()) throw ConfigError("observable", "missing");
  try {
    cfg.observable = parse_observable(it->second, cfg.hamiltonian);
  } catch (const std::exception& e) {
    throw ConfigError("observable", e.what());
  }
  return cfg;
}

Trajectory run_simulation(const SimConfig& cfg) {
  const RepParams par(cfg.hbar);
  if (cfg.mode == SimMode::quantum) {
    return evolve_quantum(par, cfg.hamiltonian, cfg.observable, cfg.t_end, cfg.dt, cfg.convention);
  }
  // The Poisson flow carries no hbar. Cross-check it against the flow read
  // off the eps-commutator at this hbar before integrating.
  const RateMatrix poisson_rate = classical_rate_matrix(cfg.hamiltonian);
  const RateMatrix commutator_rate = classical_rate_matrix_from_commutator(par, cfg.hamiltonian);
  for (std::size_t i = 0; i < CoeffState::kSize; ++i) {
    for (std::size_t j = 0; j < CoeffState::kSize; ++j) {
      const double scale = std::max(1.0, std::abs(poisson_rate[i][j]));
      if (std::abs(poisson_rate[i][j] - commutator_rate[i][j]) > 1e-12 * scale) {
        throw ClosureViolation("eps-commutator flow disagrees with the Poisson flow");
      }
    }
  }
  return integrate_linear(poisson_rate, cfg.observable, cfg.t_end, cfg.dt);
}

std::string format_number(double v) {
  char buf[64];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

void write_csv(std::ostream& out, const Trajectory& trajectory) {
  out << 't';
  for (auto name : CoeffState::kNames) out << ',' << name;
  out << '\n';
  for (const auto& point : trajectory) {
    out << format_number(point.t);
    for (double v : point.state.c) out << ',' << format_number(v);
    out << '\n';
  }
}

Trajectory read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "t,c_1,c_q,c_p,c_qq,c_qp,c_pp") {
    throw std::invalid_argument("missing or malformed CSV header");
  }
  Trajectory out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    std::array<double, CoeffState::kSize + 1> row{};
    std::size_t index = 0;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      const std::string_view field =
          std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (index >= row.size() || field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
        throw std::invalid_argument("malformed CSV row at line " + std::to_string(line_no));
      }
      row[index++] = v;
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (index != row.size()) throw std::invalid_argument("wrong field count at line " + std::to_string(line_no));
    TrajectoryPoint point;
    point.t = row[0];
    std::copy(row.begin() + 1, row.end(), point.state.c.begin());
    out.push_back(point);
  }
  return out;
}

int cmd_check(std::ostream& out, const CheckOptions& options) {
  return report_suites(run_all_suites(options), out);
}

int cmd_simulate(const std::optional<std::string>& config_path, const ConfigPairs& flags, std::ostream& out,
                 std::ostream& err) {
  SimConfig cfg;
  try {
    ConfigPairs pairs = config_path ? read_config_file(*config_path) : ConfigPairs{};
    pairs.insert(pairs.end(), flags.begin(), flags.end());
    cfg = build_sim_config(pairs);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  err << "hbar=" << format_number(cfg.hbar) << " h=" << format_number(RepParams(cfg.hbar).h())
      << " mode=" << (cfg.mode == SimMode::quantum ? "quantum" : "classical");
  if (cfg.mode == SimMode::quantum) err << " convention=" << to_string(cfg.convention);
  err << '\n';

  Trajectory trajectory;
  try {
    trajectory = run_simulation(cfg);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  if (cfg.out.empty() || cfg.out == "-") {
    write_csv(out, trajectory);
    return 0;
  }
  std::ofstream file(cfg.out, std::ios::binary);
  if (!file) {
    err << "error: config key 'out': cannot open '" << cfg.out << "' for writing\n";
    return 2;
  }
  write_csv(file, trajectory);
  return file ? 0 : 1;
}

}  // namespace hdual
