#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "hdual/simulate.hpp"

using namespace hdual;

namespace {

std::string config_error_key(const ConfigPairs& pairs) {
  try {
    build_sim_config(pairs);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return {};
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("hdual_test_" + name);
}

}  // namespace

TEST_CASE("config text parsing") {
  const auto pairs = parse_config_text("# harmonic run\nmode = quantum\n\nhamiltonian=harmonic\r\nt_end=1.5\n");
  REQUIRE(pairs.size() == 3);
  CHECK(pairs[0] == std::pair<std::string, std::string>{"mode", "quantum"});
  CHECK(pairs[2].first == "t_end");
  CHECK_THROWS_AS(parse_config_text("mode quantum\n"), ConfigError);
}

TEST_CASE("config defaults and overrides") {
  const SimConfig cfg = build_sim_config({{"hamiltonian", "harmonic"}, {"observable", "q"}});
  CHECK(cfg.mode == SimMode::classical);
  CHECK(cfg.hbar == 1.0 / (2.0 * std::numbers::pi));
  CHECK(cfg.t_end == 2.0 * std::numbers::pi);
  CHECK(cfg.dt == 1e-3);
  CHECK(cfg.convention == TimeConvention::egorov);
  CHECK(cfg.out.empty());
  CHECK(cfg.observable == CoeffState::basis(Monomial::q));

  const SimConfig o = build_sim_config({{"hamiltonian", "free"},
                                        {"observable", "energy"},
                                        {"mode", "classical"},
                                        {"mode", "quantum"},
                                        {"t_end", "2"},
                                        {"dt", "0.5"},
                                        {"convention", "paper"}});
  CHECK(o.mode == SimMode::quantum);
  CHECK(o.t_end == 2.0);
  CHECK(o.observable == o.hamiltonian.coeffs);
  CHECK(o.hamiltonian.coeffs[Monomial::pp] == 0.5);
}

TEST_CASE("hamiltonian and observable syntax") {
  CHECK(parse_hamiltonian("0.5*(q^2 + p^2)").coeffs == parse_hamiltonian("harmonic").coeffs);
  CHECK(parse_hamiltonian("0, 0, 0, 0.5, 0, 0.5").coeffs == parse_hamiltonian("harmonic").coeffs);
  CHECK(parse_observable("p", {}) == CoeffState::basis(Monomial::p));
  CHECK(parse_observable("q*p - 2", {})[Monomial::qp] == 1.0);
  CHECK_THROWS(parse_hamiltonian("q^3"));
  CHECK_THROWS(parse_hamiltonian("1,2,3"));
  CHECK_THROWS(parse_observable("1,2,x,4,5,6", {}));
}

TEST_CASE("config errors name the key") {
  CHECK(config_error_key({{"observable", "q"}}) == "hamiltonian");
  CHECK(config_error_key({{"hamiltonian", "harmonic"}}) == "observable");
  const ConfigPairs base{{"hamiltonian", "harmonic"}, {"observable", "q"}};
  auto with = [&](std::string key, std::string value) {
    ConfigPairs p = base;
    p.emplace_back(std::move(key), std::move(value));
    return p;
  };
  CHECK(config_error_key(with("hbar", "0")) == "hbar");
  CHECK(config_error_key(with("hbar", "abc")) == "hbar");
  CHECK(config_error_key(with("dt", "-1")) == "dt");
  CHECK(config_error_key(with("dt", "10")) == "dt");
  CHECK(config_error_key(with("t-end", "0")) == "t-end");
  CHECK(config_error_key(with("mode", "semiclassical")) == "mode");
  CHECK(config_error_key(with("convention", "moyal")) == "convention");
  CHECK(config_error_key(with("colour", "blue")) == "colour");
  CHECK(config_error_key(with("hamiltonian", "q^4")) == "hamiltonian");
  CHECK(config_error_key(with("observable", "sin(q)")) == "observable");
  CHECK(config_error_key(base).empty());
}

TEST_CASE("csv round-trips exactly") {
  const SimConfig cfg = build_sim_config({{"hamiltonian", "0.3, -0.2, 0.1, 0.7, 0.4, 1.1"},
                                          {"observable", "q + 0.5*p^2"},
                                          {"t-end", "1"},
                                          {"dt", "0.01"}});
  const Trajectory tr = run_simulation(cfg);
  std::stringstream buf;
  write_csv(buf, tr);
  const Trajectory back = read_csv(buf);
  REQUIRE(back.size() == tr.size());
  for (std::size_t k = 0; k < tr.size(); ++k) {
    REQUIRE(back[k].t == tr[k].t);
    REQUIRE(back[k].state == tr[k].state);
  }
  std::stringstream bad("t,c_1\n");
  CHECK_THROWS_AS(read_csv(bad), std::invalid_argument);
  std::stringstream short_row("t,c_1,c_q,c_p,c_qq,c_qp,c_pp\n0,1,2\n");
  CHECK_THROWS_AS(read_csv(short_row), std::invalid_argument);
  CHECK(format_number(0.1) == "0.10000000000000001");
}

TEST_CASE("simulate writes deterministic output") {
  const ConfigPairs flags{{"hamiltonian", "harmonic"}, {"observable", "q"}, {"t-end", "1"}, {"dt", "0.01"}};
  std::ostringstream a, b, log;
  CHECK(cmd_simulate(std::nullopt, flags, a, log) == 0);
  CHECK(cmd_simulate(std::nullopt, flags, b, log) == 0);
  CHECK(a.str() == b.str());
  CHECK(log.str().find("hbar=") != std::string::npos);
  CHECK(log.str().find(" h=") != std::string::npos);
}

TEST_CASE("simulate examples") {
  std::ostringstream out, log;
  REQUIRE(cmd_simulate(std::nullopt, {{"hamiltonian", "harmonic"}, {"observable", "q"}}, out, log) == 0);
  std::istringstream in(out.str());
  const Trajectory tr = read_csv(in);
  for (std::size_t k = 0; k < CoeffState::kSize; ++k) CHECK(std::abs(tr.back().state.c[k] - tr.front().state.c[k]) <= 1e-8);

  std::ostringstream qout;
  REQUIRE(cmd_simulate(std::nullopt, {{"hamiltonian", "harmonic"}, {"observable", "q"}, {"mode", "quantum"}}, qout,
                       log) == 0);
  std::istringstream qin(qout.str());
  CHECK(max_trajectory_difference(tr, read_csv(qin)) <= 1e-8);

  std::ostringstream fout;
  REQUIRE(cmd_simulate(std::nullopt, {{"hamiltonian", "free"}, {"observable", "q"}, {"t-end", "2"}}, fout, log) == 0);
  std::istringstream fin(fout.str());
  for (const auto& pt : read_csv(fin)) REQUIRE(std::abs(pt.state[Monomial::p] - pt.t) <= 1e-8);
}

TEST_CASE("simulate reads a config file and flags override it") {
  const auto cfg_path = temp_path("run.cfg");
  const auto out_path = temp_path("run.csv");
  {
    std::ofstream f(cfg_path);
    f << "hamiltonian=harmonic\nobservable=p\nt-end=0.5\ndt=0.1\nout=" << out_path.string() << "\n";
  }
  std::ostringstream out, log;
  CHECK(cmd_simulate(cfg_path.string(), {{"observable", "q"}}, out, log) == 0);
  CHECK(out.str().empty());
  std::ifstream in(out_path);
  const Trajectory tr = read_csv(in);
  CHECK(tr.size() == 6);
  CHECK(tr.front().state == CoeffState::basis(Monomial::q));
  std::filesystem::remove(cfg_path);
  std::filesystem::remove(out_path);
}

TEST_CASE("simulate exit codes") {
  std::ostringstream out, log;
  CHECK(cmd_simulate(std::nullopt, {{"hamiltonian", "harmonic"}, {"observable", "q"}, {"hbar", "0"}}, out, log) == 2);
  CHECK(log.str().find("'hbar'") != std::string::npos);
  CHECK(cmd_simulate(std::string("/nonexistent/dir/run.cfg"), {}, out, log) == 2);
  CHECK(cmd_simulate(std::nullopt,
                     {{"hamiltonian", "harmonic"}, {"observable", "q"}, {"out", "/nonexistent/dir/out.csv"}}, out,
                     log) == 2);
}

TEST_CASE("check passes and notices a broken product") {
  std::ostringstream out;
  CHECK(cmd_check(out) == 0);
  CHECK(out.str().find("all suites passed") != std::string::npos);

  CheckOptions broken;
  broken.multiply = [](const DualComplex& a, const DualComplex& b) {
    DualComplex r = mul(a, b);
    r.re += a.eps * b.eps - a.im_eps * b.im_eps;  // eps^2 = 1
    r.im += a.eps * b.im_eps + a.im_eps * b.eps;
    return r;
  };
  std::ostringstream bad;
  CHECK(cmd_check(bad, broken) == 1);
  bool algebra_failed = false;
  for (const SuiteResult& r : run_all_suites(broken)) {
    if (r.name.starts_with("algebra.") && !r.passed) algebra_failed = true;
  }
  CHECK(algebra_failed);
}
