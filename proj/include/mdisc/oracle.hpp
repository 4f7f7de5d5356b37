#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "mdisc/geometry.hpp"
#include "mdisc/strategies.hpp"

namespace mdisc {

using Mat4 = Eigen::Matrix4d;

/// T_k = H0 (x) |0><0| + H1 (x) |1><1|, the measurement register being the
/// second tensor factor.
struct TesterComponent {
  Mat2 H0 = Mat2::Zero();
  Mat2 H1 = Mat2::Zero();

  Mat4 process_operator() const;
};

/// Process POVM {T_M, T_N, T_I}.
struct Tester {
  TesterComponent guess_m;
  TesterComponent guess_n;
  TesterComponent inconclusive;
};

/// Outcome-0 blocks of a covariant real tester; they sum to rho = I/2.
struct PovmTriple {
  Mat2 h_m = Mat2::Zero();
  Mat2 h_n = Mat2::Zero();
  Mat2 h_i = Mat2::Zero();

  Mat2 rho() const { return h_m + h_n + h_i; }
  /// Covariant extension: H_{k,1} = sigma_Y H_{k,0} sigma_Y^dagger.
  Tester to_tester() const;
};

/// E_X = X0^T (x) |0><0| + X1^T (x) |1><1|.
struct MeasurementOperatorPair {
  Mat4 E_M;
  Mat4 E_N;
};

MeasurementOperatorPair measurement_operators(const MeasurementPair& pair);

/// Smallest eigenvalue of a symmetric 2x2 block.
double min_eigenvalue(const Mat2& m);

/// Trace formulas on the full two-qubit operators. Throws ValidationError
/// unless every T_k >= 0 and T_M + T_N + T_I = rho (x) I to 1e-8 for a density rho.
StrategyPoint tester_probabilities(const Tester& tester, const MeasurementPair& pair);

/// Covariance substitution H_{k,0} -> (H_{k,0} + s H_{k,1} s^T)/2,
/// H_{k,1} -> (H_{k,1} + s H_{k,0} s^T)/2 with s = sigma_Y.
Tester symmetrize(const Tester& tester);

/// P_S = Tr[H_M M0] + Tr[H_N N0], P_E = Tr[H_N M0] + Tr[H_M N0],
/// P_I = Tr[H_I (M0 + N0)]. Throws ValidationError unless the blocks are PSD
/// and sum to I/2 (1e-10).
StrategyPoint reduced_probabilities(const PovmTriple& blocks, const MeasurementPair& pair);

/// Singlet probe, sigma_Y feed-forward on outcome 0, filter, then |+->
/// readout (|+> guesses M).
Tester singlet_tester(const MeasurementPair& pair, const FilterOperator& filter);

enum class OracleMethod { Grid, Ascent };
std::string_view to_string(OracleMethod m);
OracleMethod parse_oracle_method(std::string_view name);

struct OracleOptions {
  OracleMethod method = OracleMethod::Ascent;
  double tol = 1e-4;
  std::uint64_t seed = 1;
  int restarts = 20;            ///< ascent
  int grid_resolution = 180;    ///< grid: angle steps per block over [0, pi)
  bool parallel = true;         ///< OpenMP across restarts / grid rows
};

struct OracleResult {
  StrategyPoint point;
  PovmTriple blocks;
  bool certified = false;          ///< enough restarts agree with the best value
  int agreeing_restarts = 0;       ///< restarts within tol of the best P_S
  std::vector<double> restart_success;  ///< best P_S per restart (ascent)
  std::size_t candidates = 0;      ///< in-bin candidates (grid)
};

/// Maximizes P_S over covariant real testers at P_I = target. The returned
/// point hits the target exactly (a final mixing step absorbs the residual of
/// the penalty solve). Throws DomainError unless target in [0, cos 2theta].
OracleResult optimize_povm(const MeasurementPair& pair, double p_inc_target,
                           const OracleOptions& options = {});

/// Diagnostic: optimizes over non-covariant testers with a free density rho
/// (full two-qubit trace formulas). Used to confirm that rho = I/2 loses nothing.
struct FreeRhoResult {
  StrategyPoint point;
  Tester tester;
  Mat2 rho;
};
FreeRhoResult optimize_free_rho(const MeasurementPair& pair, double p_inc_target, std::uint64_t seed,
                                int restarts = 6);

/// Exhaustive single-qubit probe scan: probe angles and q on a resolution^2
/// grid (Eq.-10 statistics through explicit projectors and canonical
/// relabeling), two-point mixtures via the upper hull, read at the target.
StrategyPoint brute_force_single(const MeasurementPair& pair, double p_inc_target, int resolution,
                                 bool parallel = true);

}  // namespace mdisc
