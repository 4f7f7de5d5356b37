// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "mdisc/cli/commands.hpp"
#include "mdisc/convexity.hpp"
#include "mdisc/hull.hpp"
#include "mdisc/oracle.hpp"
#include "mdisc/rng.hpp"
#include "mdisc/simulator.hpp"
#include "mdisc/strategies.hpp"

using namespace mdisc;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Outcome oracle_agreement() {
  double worst = 0.0;
  int targets = 0;
  bool certified = true;
  for (int j = 1; j <= 7; ++j) {
    const double theta = j * kPi / 30;
    const MeasurementPair pair = measurement_pair(theta);
    for (int k = 0; k < 6; ++k) {
      const double target = pair.c() * k / 5.0;
      const OracleResult r = optimize_povm(pair, target);
      worst = std::max(worst, std::abs(r.point.p_success - entangled_success(theta, target).p_success));
      certified = certified && r.certified;
      ++targets;
    }
  }
  return {worst <= 1e-4 && certified,
          "max |P_S - closed form| = " + fmt("%.2e", worst) + " over " + std::to_string(targets) + " targets"};
}

Outcome hull_reproduction() {
  double dev = 0.0, tan = 0.0;
  for (double c : {0.3, 0.5, 0.7, 0.9}) {
    const HullReport r = hull_verify(c, 10000, 7);
    dev = std::max(dev, r.max_deviation);
    tan = std::max(tan, r.tangency_error);
  }
  return {dev <= 1e-6 && tan <= 1e-6,
          "max deviation " + fmt("%.2e", dev) + ", max tangency error " + fmt("%.2e", tan)};
}

Outcome appendix_convexity() {
  double min_d2 = 1e300, max_rel = 0.0, max_concave = -1e300;
  for (int i = 1; i <= 19; ++i) {
    const double c = 0.05 * i;
    const double pib = boundary_PIB(c);
    for (int k = 0; k < 30; ++k) {
      const double p = 1e-3 + (pib - 2e-3) * k / 29.0;
      const FiniteDifferenceCheck fd = finite_difference_check(c, p);
      min_d2 = std::min(min_d2, fd.analytic);
      max_rel = std::max(max_rel, fd.rel_err);
    }
    const double p_end = 0.5 * (1.0 + c * c);
    for (int k = 1; k <= 30; ++k) {
      max_concave = std::max(max_concave, concave_second_derivative(c, pib + (p_end - pib) * k / 30.0));
    }
  }
  return {min_d2 >= -1e-9 && max_rel <= 1e-3 && max_concave < 0.0,
          "min convex d2 " + fmt("%.3e", min_d2) + ", max rel err " + fmt("%.2e", max_rel) +
              ", max concave d2 " + fmt("%.3e", max_concave)};
}

Outcome idp_endpoint() {
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double theta = k * (kPi / 4) / 99.0;
    const double c = std::cos(2 * theta);
    const StrategyPoint p = entangled_success(theta, c);
    worst = std::max({worst, std::abs(p.p_success - 2 * std::sin(theta) * std::sin(theta)), std::abs(p.p_error),
                      std::abs(p.p_inconclusive - c)});
  }
  return {worst <= 1e-12, "max deviation " + fmt("%.2e", worst) + " over 100 angles"};
}

Outcome entanglement_advantage() {
  double min_adv = 1e300, zero_adv = 0.0;
  for (int j = 1; j <= 7; ++j) {
    const double theta = j * kPi / 30;
    zero_adv = std::max(zero_adv, std::abs(advantage(theta, 0.0)));
    for (int k = 1; k <= 100 && k / 100.0 <= std::cos(2 * theta); ++k) {
      min_adv = std::min(min_adv, advantage(theta, k / 100.0));
    }
  }
  return {min_adv > 0.0 && zero_adv <= 1e-12,
          "min advantage for P_I >= 0.01: " + fmt("%.3e", min_adv) + ", |advantage at 0| " + fmt("%.1e", zero_adv)};
}

Outcome monte_carlo() {
  const double expected = entangled_success(kPi / 6, 0.3).p_success;
  int ps_ok = 0, pi_ok = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    ExperimentConfig c;
    c.theta = kPi / 6;
    c.transmittance = 0.6;
    c.trials = 1000000;
    c.seed = seed;
    const Estimate e = estimate(run_trials(c), c.imperfections);
    ps_ok += std::abs(e.point.p_success - expected) <= 4 * e.se_success;
    pi_ok += std::abs(e.point.p_inconclusive - 0.3) <= 4 * e.se_inconclusive;
  }
  return {ps_ok >= 9 && pi_ok == 10,
          "P_S within 4 sigma for " + std::to_string(ps_ok) + "/10 seeds, P_I for " + std::to_string(pi_ok) + "/10"};
}

nlohmann::json cli_json(const std::vector<std::string>& args, int& status) {
  std::ostringstream out, err;
  status = cli::run(args, out, err);
  return status == 0 ? nlohmann::json::parse(out.str()) : nlohmann::json{};
}

Outcome unambiguous_scan() {
  int status = 0;
  const auto ideal = cli_json({"simulate", "--mode", "unambiguous", "--t-grid", "0:1:0.1", "--trials", "1000000",
                               "--seed", "42", "--format", "json"},
                              status);
  if (status != 0) return {false, "ideal scan exited with " + std::to_string(status)};
  std::uint64_t errors = 0;
  int within = 0;
  for (const auto& r : ideal["rows"]) {
    const double th = r["theta"].get<double>();
    errors += r["error_coincidences"].get<std::uint64_t>();
    const bool ps = std::abs(r["p_success"].get<double>() - 2 * std::sin(th) * std::sin(th)) <=
                    4 * r["se_success"].get<double>() + 1e-12;
    const bool pi = std::abs(r["p_inconclusive"].get<double>() - std::cos(2 * th)) <=
                    4 * r["se_inconclusive"].get<double>() + 1e-12;
    within += ps && pi;
  }
  const auto noisy = cli_json({"simulate", "--mode", "unambiguous", "--t-grid", "0:1:0.1", "--trials", "1000000",
                               "--seed", "42", "--noise", "preset_paperlike", "--format", "json"},
                              status);
  if (status != 0) return {false, "noisy scan exited with " + std::to_string(status)};
  const double max_pe = noisy["summary"]["max_p_error"].get<double>();
  const std::size_t rows = ideal["rows"].size();
  return {rows == 11 && errors == 0 && within == 11 && max_pe <= 0.032,
          std::to_string(rows) + " rows, " + std::to_string(errors) + " error coincidences, " +
              std::to_string(within) + "/11 rows within 4 sigma, preset max P_E " + fmt("%.4f", max_pe)};
}

Outcome symmetrization() {
  CounterRng rng(20240601, 0);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const MeasurementPair pair = measurement_pair(rng.uniform(0.0, kPi / 4));
    Mat2 a[3][2];
    for (auto& blk : a) {
      for (auto& m : blk) {
        Mat2 l;
        l << rng.normal(), rng.normal(), rng.normal(), rng.normal();
        m = l * l.transpose();
      }
    }
    Tester t;
    TesterComponent* comps[3] = {&t.guess_m, &t.guess_n, &t.inconclusive};
    for (int i = 0; i < 2; ++i) {
      Eigen::SelfAdjointEigenSolver<Mat2> es(a[0][i] + a[1][i] + a[2][i]);
      const Mat2 w = es.eigenvectors() * es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
                     es.eigenvectors().transpose();
      for (int j = 0; j < 3; ++j) (i == 0 ? comps[j]->H0 : comps[j]->H1) = 0.5 * w * a[j][i] * w;
    }
    const StrategyPoint p = tester_probabilities(t, pair);
    const StrategyPoint q = tester_probabilities(symmetrize(t), pair);
    worst = std::max({worst, std::abs(p.p_success - q.p_success), std::abs(p.p_error - q.p_error),
                      std::abs(p.p_inconclusive - q.p_inconclusive)});
  }
  return {worst <= 1e-12, "max change " + fmt("%.2e", worst) + " over 100 random testers"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / "mdisc_acceptance_replay";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::vector<std::vector<std::string>> commands{
      {"curves", "--theta", "0.6283", "--pi-grid", "0:0.5:0.01"},
      {"hull", "--c", "0.9", "--samples", "10000", "--seed", "7"},
      {"convexity"},
      {"oracle", "--theta", "0.5236", "--pi", "0.3"},
      {"simulate", "--mode", "intermediate", "--trials", "20000", "--seed", "5"},
      {"simulate", "--mode", "unambiguous", "--trials", "100000", "--noise", "preset_paperlike"},
  };
  int identical = 0;
  for (std::size_t k = 0; k < commands.size(); ++k) {
    const std::string target = (dir / ("run" + std::to_string(k))).string();
    auto args = commands[k];
    args.insert(args.end(), {"--out", target});
    std::ostringstream out, err;
    if (cli::run(args, out, err) != 0) continue;
    const std::string table = slurp(target);
    const std::string manifest = slurp(target + ".manifest.json");
    fs::remove(target);
    fs::remove(target + ".manifest.json");
    std::ofstream(dir / "saved.json", std::ios::binary) << manifest;
    if (cli::run({"replay", "--manifest", (dir / "saved.json").string()}, out, err) != 0) continue;
    identical += slurp(target) == table && slurp(target + ".manifest.json") == manifest;
  }
  fs::remove_all(dir);
  return {identical == static_cast<int>(commands.size()),
          std::to_string(identical) + "/" + std::to_string(commands.size()) + " commands replayed byte-identically"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> check;
    double budget_s;
  };
  const std::vector<Criterion> criteria{
      {"closed-form/oracle agreement", oracle_agreement, 300.0},
      {"hull reproduction", hull_reproduction, 30.0},
      {"second-derivative convexity", appendix_convexity, 10.0},
      {"error-free endpoint identity", idp_endpoint, 1.0},
      {"entanglement advantage", entanglement_advantage, 10.0},
      {"Monte Carlo convergence", monte_carlo, 60.0},
      {"unambiguous scan", unambiguous_scan, 60.0},
      {"symmetrization invariance", symmetrization, 5.0},
      {"replay determinism", determinism, 120.0},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.pass && secs <= c.budget_s;
    failed += !pass;
    std::printf("%s  %-30s %s (%.2f s, budget %.0f s)\n", pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs,
                c.budget_s);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
