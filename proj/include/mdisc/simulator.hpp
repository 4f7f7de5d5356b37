#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "mdisc/noise_config.hpp"
#include "mdisc/strategies.hpp"

namespace mdisc {

enum class Setting : int { M = 0, N = 1 };
enum class Readout : int { A = 0, B = 1, I = 2 };

struct ExperimentConfig {
  double theta = 0.0;
  double transmittance = 1.0;  ///< VRC transmittance T = f^2
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  ImperfectionModel imperfections{};
  bool feed_forward = true;  ///< false skips the conditional correction on qubit B

  void validate() const;
};

/// The 12 coincidence counts C_ik^X.
struct CoincidenceCounts {
  std::array<std::uint64_t, 12> cells{};

  static constexpr std::size_t index(Setting x, int i, Readout k) {
    return (static_cast<std::size_t>(x) * 2 + static_cast<std::size_t>(i)) * 3 + static_cast<std::size_t>(k);
  }
  std::uint64_t& at(Setting x, int i, Readout k) { return cells[index(x, i, k)]; }
  std::uint64_t at(Setting x, int i, Readout k) const { return cells[index(x, i, k)]; }

  std::uint64_t total() const;
  /// Raw counts in the four success, error and inconclusive cells.
  std::uint64_t success_count() const;
  std::uint64_t error_count() const;
  std::uint64_t inconclusive_count() const;

  CoincidenceCounts& operator+=(const CoincidenceCounts& other);
  bool operator==(const CoincidenceCounts&) const = default;
};

/// True when coincidence (i, k) under setting X is a correct guess.
bool is_success_cell(Setting x, int i, Readout k);

CoincidenceCounts run_trials(const ExperimentConfig& config);
CoincidenceCounts run_trials_serial(const ExperimentConfig& config);

struct Estimate {
  StrategyPoint point;
  double se_success = 0.0;
  double se_error = 0.0;
  double se_inconclusive = 0.0;
  double relative_success = 0.0;  ///< P_S / (P_S + P_E), NaN without conclusive events
  double se_relative = 0.0;
  std::uint64_t coincidences = 0;
};

/// Efficiency-rescaled estimator. Throws ValidationError for all-zero counts.
Estimate estimate(const CoincidenceCounts& counts, const ImperfectionModel& efficiencies);

/// Noise-free prediction of the feed-forward protocol at (theta, T). Equals
/// entangled_success when T >= tan^2 theta.
StrategyPoint protocol_prediction(double theta, double transmittance);

struct ScanRow {
  double theta = 0.0;
  double transmittance = 0.0;
  Estimate measured;
  StrategyPoint predicted;  ///< protocol_prediction(theta, T)
  double optimal_success = 0.0;  ///< entangled_envelope at the predicted P_I
  CoincidenceCounts counts;
};

struct ScanTable {
  std::vector<ScanRow> rows;
};

/// Default grids of the intermediate scan: theta_j = j pi / 30 for j = 1..7, T = 1, 0.9, ..., 0.1.
std::vector<double> default_scan_thetas();
std::vector<double> default_scan_transmittances();

/// Row r uses seed splitmix64(seed + r), so rows are independent and reproducible.
ScanTable scan_intermediate(const std::vector<double>& thetas, const std::vector<double>& transmittances,
                            std::uint64_t trials, std::uint64_t seed,
                            const ImperfectionModel& imperfections = {}, bool feed_forward = true);

/// For each T sets theta = arctan sqrt(T), the angle at which the filter is the IDP filter.
ScanTable scan_unambiguous(const std::vector<double>& transmittances, std::uint64_t trials, std::uint64_t seed,
                           const ImperfectionModel& imperfections = {});

}  // namespace mdisc
