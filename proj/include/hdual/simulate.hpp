#pragma once

// Simulation configuration, CSV trajectories and the two CLI commands.
//
// Config files hold `key=value` lines (blank lines and lines starting with
// '#' are skipped). The same keys are accepted as `--key value` flags, which
// override the file. Keys: mode, hamiltonian, observable, hbar, t-end, dt,
// convention, out.

#include <iosfwd>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hdual/checks.hpp"
#include "hdual/dynamics.hpp"

namespace hdual {

enum class SimMode { classical, quantum };

struct SimConfig {
  SimMode mode = SimMode::classical;
  QuadHamiltonian hamiltonian;
  CoeffState observable;
  double hbar = 1.0 / (2.0 * std::numbers::pi);  // h = 1
  double t_end = 2.0 * std::numbers::pi;
  double dt = 1e-3;
  TimeConvention convention = TimeConvention::egorov;
  std::string out;  // empty: standard output
};

/// A config key that is unknown, missing, or has an invalid value.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::invalid_argument("config key '" + key + "': " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

using ConfigPairs = std::vector<std::pair<std::string, std::string>>;

ConfigPairs parse_config_text(std::string_view text);
ConfigPairs read_config_file(const std::string& path);

/// Later pairs override earlier ones. Requires `hamiltonian` and `observable`.
SimConfig build_sim_config(const ConfigPairs& pairs);

/// Preset `harmonic` ((q^2 + p^2)/2) or `free` (p^2/2), six comma-separated
/// coefficients in the order 1, q, p, q^2, qp, p^2, or a quadratic expression.
QuadHamiltonian parse_hamiltonian(std::string_view text);
/// Preset `q`, `p` or `energy` (the Hamiltonian), coefficients, or an expression.
CoeffState parse_observable(std::string_view text, const QuadHamiltonian& hamiltonian);

Trajectory run_simulation(const SimConfig& cfg);

/// Shortest decimal form that reads back exactly (17 significant digits).
std::string format_number(double v);

void write_csv(std::ostream& out, const Trajectory& trajectory);
/// Throws std::invalid_argument on a malformed file.
Trajectory read_csv(std::istream& in);

/// `check`: runs every suite, prints one line per suite, returns 0 or 1.
int cmd_check(std::ostream& out, const CheckOptions& options = {});

/// `simulate`: returns 0 on success, 1 on integration failure, 2 on a config
/// error (the message names the key). hbar and h are logged on `err`.
int cmd_simulate(const std::optional<std::string>& config_path, const ConfigPairs& flags, std::ostream& out,
                 std::ostream& err);

}  // namespace hdual
