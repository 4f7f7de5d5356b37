#include "mdisc/simulator.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "mdisc/errors.hpp"
#include "mdisc/geometry.hpp"
#include "mdisc/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mdisc {

namespace {

struct Cell {
  Setting x;
  int i;
  Readout k;
};

/// Per-run constants shared by every trial.
struct TrialModel {
  // conditional B states after A's outcome i, before feed-forward: [X][i]
  std::array<std::array<Vec2, 2>, 2> collapsed;
  double sqrt_t;
  double one_minus_t;
  double split_t;
  double split_r;
  double sigma;
  double visibility;
  std::array<double, 2> eta_a;
  std::array<double, 3> eta_b;
  bool feed_forward;
  bool thinning;
};

TrialModel make_model(const ExperimentConfig& config) {
  const MeasurementPair pair = measurement_pair(config.theta);
  const ImperfectionModel& im = config.imperfections;
  TrialModel m{};
  const std::array<std::array<Vec2, 2>, 2> outcomes{{{pair.phi.amplitudes(), pair.phi_perp.amplitudes()},
                                                      {pair.psi.amplitudes(), pair.psi_perp.amplitudes()}}};
  for (int x = 0; x < 2; ++x) {
    for (int i = 0; i < 2; ++i) {
      const Vec2& a = outcomes[x][i];
      m.collapsed[x][i] = Vec2(-a(1), a(0));
    }
  }
  m.sqrt_t = std::sqrt(config.transmittance);
  m.one_minus_t = 1.0 - config.transmittance;
  m.split_t = std::sqrt(0.5 + im.splitter_imbalance);
  m.split_r = std::sqrt(0.5 - im.splitter_imbalance);
  m.sigma = im.phase_noise_sigma_rad;
  m.visibility = im.singlet_visibility;
  m.eta_a = {im.eta_d0, im.eta_d1};
  m.eta_b = {im.eta_da, im.eta_db, im.eta_di};
  m.feed_forward = config.feed_forward;
  m.thinning = !(im.eta_d0 == 1.0 && im.eta_d1 == 1.0 && im.eta_da == 1.0 && im.eta_db == 1.0 && im.eta_di == 1.0);
  return m;
}

std::optional<Cell> simulate_trial(const TrialModel& m, std::uint64_t seed, std::uint64_t trial) {
  CounterRng rng(seed, trial);
  const Setting x = rng.uniform() < 0.5 ? Setting::M : Setting::N;
  const int i = rng.uniform() < 0.5 ? 0 : 1;

  Vec2 b;
  if (m.visibility >= 1.0 || rng.uniform() < m.visibility) {
    b = m.collapsed[static_cast<int>(x)][i];
  } else {
    b = rng.uniform() < 0.5 ? Vec2(1.0, 0.0) : Vec2(0.0, 1.0);
  }

  // sigma_Y up to a global phase followed by the M <-> N relabeling of the
  // analyzer basis: a bit flip of the photon.
  if (m.feed_forward && i == 0) b = Vec2(b(1), b(0));

  Readout k;
  const double b0sq = b(0) * b(0);
  if (rng.uniform() < m.one_minus_t * b0sq) {
    k = Readout::I;
  } else {
    const double a0 = m.sqrt_t * b(0);
    const double a1 = b(1);
    const double norm = a0 * a0 + a1 * a1;
    const double cos_chi = m.sigma > 0.0 ? std::cos(m.sigma * rng.normal()) : 1.0;
    const double tr = 2.0 * m.split_t * m.split_r * a0 * a1 * cos_chi;
    const double p_plus =
        (m.split_t * m.split_t * a0 * a0 + m.split_r * m.split_r * a1 * a1 + tr) / norm;
    k = rng.uniform() < p_plus ? Readout::B : Readout::A;
  }

  if (m.thinning && !(rng.uniform() < m.eta_a[i] * m.eta_b[static_cast<int>(k)])) return std::nullopt;
  return Cell{x, i, k};
}

void run_range(const TrialModel& m, std::uint64_t seed, std::uint64_t begin, std::uint64_t end,
               CoincidenceCounts& out) {
  for (std::uint64_t t = begin; t < end; ++t) {
    if (const auto cell = simulate_trial(m, seed, t)) ++out.at(cell->x, cell->i, cell->k);
  }
}

double binomial_se(double p, std::uint64_t n) {
  if (n == 0) return std::numeric_limits<double>::quiet_NaN();
  return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
}

}  // namespace

void ExperimentConfig::validate() const {
  if (!(transmittance >= 0.0 && transmittance <= 1.0)) throw ValidationError("transmittance must lie in [0, 1]");
  if (trials < 1) throw ValidationError("trials must be >= 1");
  imperfections.validate();
  measurement_pair(theta);
}

std::uint64_t CoincidenceCounts::total() const { return std::accumulate(cells.begin(), cells.end(), std::uint64_t{0}); }

bool is_success_cell(Setting x, int i, Readout k) {
  if (k == Readout::I) return false;
  const bool detector_a = k == Readout::A;
  const bool first = i == 0;
  return x == Setting::M ? (first == detector_a) : (first != detector_a);
}

std::uint64_t CoincidenceCounts::success_count() const {
  std::uint64_t n = 0;
  for (Setting x : {Setting::M, Setting::N})
    for (int i = 0; i < 2; ++i)
      for (Readout k : {Readout::A, Readout::B})
        if (is_success_cell(x, i, k)) n += at(x, i, k);
  return n;
}

std::uint64_t CoincidenceCounts::inconclusive_count() const {
  std::uint64_t n = 0;
  for (Setting x : {Setting::M, Setting::N})
    for (int i = 0; i < 2; ++i) n += at(x, i, Readout::I);
  return n;
}

std::uint64_t CoincidenceCounts::error_count() const { return total() - success_count() - inconclusive_count(); }

CoincidenceCounts& CoincidenceCounts::operator+=(const CoincidenceCounts& other) {
  for (std::size_t j = 0; j < cells.size(); ++j) cells[j] += other.cells[j];
  return *this;
}

CoincidenceCounts run_trials_serial(const ExperimentConfig& config) {
  config.validate();
  const TrialModel model = make_model(config);
  CoincidenceCounts counts;
  run_range(model, config.seed, 0, config.trials, counts);
  return counts;
}

CoincidenceCounts run_trials(const ExperimentConfig& config) {
  config.validate();
  const TrialModel model = make_model(config);
  constexpr std::uint64_t kChunk = 1 << 14;
  const auto n_chunks = static_cast<std::int64_t>((config.trials + kChunk - 1) / kChunk);
  CoincidenceCounts counts;
#pragma omp parallel
  {
    CoincidenceCounts local;
#pragma omp for schedule(static)
    for (std::int64_t c = 0; c < n_chunks; ++c) {
      const std::uint64_t begin = static_cast<std::uint64_t>(c) * kChunk;
      run_range(model, config.seed, begin, std::min(config.trials, begin + kChunk), local);
    }
#pragma omp critical
    counts += local;
  }
  return counts;
}

Estimate estimate(const CoincidenceCounts& counts, const ImperfectionModel& eff) {
  if (counts.total() == 0) throw ValidationError("estimate needs at least one coincidence");
  eff.validate();
  const std::array<double, 2> eta_a{eff.eta_d0, eff.eta_d1};
  const std::array<double, 3> eta_b{eff.eta_da, eff.eta_db, eff.eta_di};

  double success = 0.0;
  double inconclusive = 0.0;
  double total = 0.0;
  for (Setting x : {Setting::M, Setting::N}) {
    for (int i = 0; i < 2; ++i) {
      for (Readout k : {Readout::A, Readout::B, Readout::I}) {
        const double rescaled = static_cast<double>(counts.at(x, i, k)) / (eta_a[i] * eta_b[static_cast<int>(k)]);
        total += rescaled;
        if (k == Readout::I) {
          inconclusive += rescaled;
        } else if (is_success_cell(x, i, k)) {
          success += rescaled;
        }
      }
    }
  }

  Estimate e;
  e.point = StrategyPoint::from_success_inconclusive(success / total, inconclusive / total);
  e.coincidences = counts.total();
  e.se_success = binomial_se(e.point.p_success, e.coincidences);
  e.se_error = binomial_se(e.point.p_error, e.coincidences);
  e.se_inconclusive = binomial_se(e.point.p_inconclusive, e.coincidences);

  const std::uint64_t conclusive = e.coincidences - counts.inconclusive_count();
  const double conclusive_rate = e.point.p_success + e.point.p_error;
  if (conclusive == 0 || !(conclusive_rate > 0.0)) {
    e.relative_success = std::numeric_limits<double>::quiet_NaN();
    e.se_relative = std::numeric_limits<double>::quiet_NaN();
  } else {
    e.relative_success = e.point.p_success / conclusive_rate;
    e.se_relative = binomial_se(e.relative_success, conclusive);
  }
  return e;
}

StrategyPoint protocol_prediction(double theta, double transmittance) {
  if (!(transmittance >= 0.0 && transmittance <= 1.0)) throw ValidationError("transmittance must lie in [0, 1]");
  const MeasurementPair pair = measurement_pair(theta);
  const double cos_t = std::cos(pair.theta);
  const double p_inc = (1.0 - transmittance) * cos_t * cos_t;
  const double p_success = 0.5 * (1.0 - p_inc + std::sqrt(transmittance) * pair.s());
  return StrategyPoint::from_success_inconclusive(p_success, p_inc);
}

std::vector<double> default_scan_thetas() {
  std::vector<double> out;
  for (int j = 1; j <= 7; ++j) out.push_back(j * std::numbers::pi / 30.0);
  return out;
}

std::vector<double> default_scan_transmittances() {
  std::vector<double> out;
  for (int j = 10; j >= 1; --j) out.push_back(j / 10.0);
  return out;
}

namespace {

ScanRow scan_row(double theta, double transmittance, std::uint64_t trials, std::uint64_t seed,
                 const ImperfectionModel& imperfections, bool feed_forward = true) {
  ExperimentConfig config;
  config.theta = theta;
  config.transmittance = transmittance;
  config.trials = trials;
  config.seed = seed;
  config.imperfections = imperfections;
  config.feed_forward = feed_forward;
  ScanRow row;
  row.theta = theta;
  row.transmittance = transmittance;
  row.counts = run_trials(config);
  row.measured = estimate(row.counts, imperfections);
  row.predicted = protocol_prediction(theta, transmittance);
  row.optimal_success = entangled_envelope(theta, row.predicted.p_inconclusive).p_success;
  return row;
}

}  // namespace

ScanTable scan_intermediate(const std::vector<double>& thetas, const std::vector<double>& transmittances,
                            std::uint64_t trials, std::uint64_t seed, const ImperfectionModel& imperfections,
                            bool feed_forward) {
  if (thetas.empty() || transmittances.empty()) throw ValidationError("scan grids must be non-empty");
  ScanTable table;
  std::uint64_t r = 0;
  for (double theta : thetas) {
    for (double t : transmittances) {
      table.rows.push_back(scan_row(theta, t, trials, splitmix64(seed + r), imperfections, feed_forward));
      ++r;
    }
  }
  return table;
}

ScanTable scan_unambiguous(const std::vector<double>& transmittances, std::uint64_t trials, std::uint64_t seed,
                           const ImperfectionModel& imperfections) {
  if (transmittances.empty()) throw ValidationError("scan grid must be non-empty");
  ScanTable table;
  std::uint64_t r = 0;
  for (double t : transmittances) {
    if (!(t >= 0.0 && t <= 1.0)) throw ValidationError("transmittance must lie in [0, 1]");
    const double theta = std::min(std::atan(std::sqrt(t)), std::numbers::pi / 4.0);
    table.rows.push_back(scan_row(theta, t, trials, splitmix64(seed + r), imperfections));
    ++r;
  }
  return table;
}

}  // namespace mdisc
