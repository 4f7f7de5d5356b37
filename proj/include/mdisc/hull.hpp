#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mdisc/strategies.hpp"

namespace mdisc {

struct PlanePoint {
  double x;
  double y;
};

/// Upper convex hull (monotone chain), ordered by increasing x. Collinear
/// interior points are dropped; for x equal to within 1e-14 only the highest
/// point is kept.
std::vector<PlanePoint> upper_hull(std::vector<PlanePoint> points);

/// Piecewise-linear value of an upper hull at x; nullopt outside its x-range.
std::optional<double> hull_value_at(const std::vector<PlanePoint>& hull, double x);

/// Where the sampled strategies come from.
enum class SampleKind : std::uint8_t { CurveGrid, RandomProbe, Refinement };

struct SampledStrategy {
  PlanePoint point;  ///< (P_I, P_S)
  SampleKind kind;
};

struct HullReport {
  double c = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  bool degenerate = false;  ///< c = 0 or c = 1: hull is a single segment
  std::vector<SampledStrategy> samples;
  std::vector<PlanePoint> hull;  ///< upper hull restricted to P_I <= (1 + c^2)/2
  PlanePoint point_a{};          ///< minimum-error point
  PlanePoint point_u{};          ///< unambiguous end point
  std::optional<PlanePoint> point_t;            ///< analytic tangency point
  std::optional<PlanePoint> numeric_tangency;   ///< hull vertex adjacent to A
  double tangency_error = 0.0;  ///< |numeric P_I,T - analytic P_I,T|
  double max_deviation = 0.0;   ///< max |hull - analytic optimum| on [0, P_I,U]
};

/// Deviation and tangency tolerance used by hull_verify callers.
inline constexpr double kHullTolerance = 1e-6;

/// Samples n pure single-qubit strategies (a P_I grid over the optimal pure
/// curve, seeded random (probe, q) points, and refinement rounds around the
/// tangency vertex), builds their upper hull, and compares it with the
/// analytic single-qubit optimum. Requires n >= 100.
HullReport hull_verify(double c, std::size_t n_samples, std::uint64_t seed);

/// Sampling kernels; the serial versions are the reference for tests.
std::vector<SampledStrategy> sample_curve_grid(const PairAngle& pa, double lo, double hi,
                                               std::size_t count, SampleKind kind);
std::vector<SampledStrategy> sample_curve_grid_serial(const PairAngle& pa, double lo, double hi,
                                                      std::size_t count, SampleKind kind);
std::vector<SampledStrategy> sample_random_probes(const PairAngle& pa, std::size_t count,
                                                  std::uint64_t seed);
std::vector<SampledStrategy> sample_random_probes_serial(const PairAngle& pa, std::size_t count,
                                                         std::uint64_t seed);

}  // namespace mdisc
