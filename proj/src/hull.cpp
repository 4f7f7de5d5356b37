#include "mdisc/hull.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mdisc/errors.hpp"
#include "mdisc/rng.hpp"

namespace mdisc {

namespace {

double cross(const PlanePoint& o, const PlanePoint& a, const PlanePoint& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

SampledStrategy curve_sample(const PairAngle& pa, double p, SampleKind kind) {
  const StrategyPoint sp = single_pure_curve(pa, p).point;
  return {{sp.p_inconclusive, sp.p_success}, kind};
}

SampledStrategy random_sample(const PairAngle& pa, std::uint64_t seed, std::size_t k) {
  CounterRng rng(seed, k);
  const double angle = rng.uniform(0.0, std::numbers::pi / 2);
  const double q = rng.uniform();
  const StrategyPoint sp = single_probe_point(pa, angle, q);
  return {{sp.p_inconclusive, sp.p_success}, SampleKind::RandomProbe};
}

double grid_at(double lo, double hi, std::size_t k, std::size_t count) {
  if (count == 1) return lo;
  if (k + 1 == count) return hi;
  return lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count - 1);
}

std::vector<PlanePoint> to_points(const std::vector<SampledStrategy>& samples) {
  std::vector<PlanePoint> pts;
  pts.reserve(samples.size());
  for (const auto& s : samples) pts.push_back(s.point);
  return pts;
}

}  // namespace

namespace {
constexpr double kSameAbscissa = 1e-14;
}  // namespace

std::vector<PlanePoint> upper_hull(std::vector<PlanePoint> points) {
  std::sort(points.begin(), points.end(), [](const PlanePoint& a, const PlanePoint& b) {
    return a.x < b.x || (a.x == b.x && a.y > b.y);
  });
  std::vector<PlanePoint> hull;
  for (const auto& p : points) {
    // Abscissae closer than rounding noise count as equal: keep the higher point,
    // otherwise a near-zero edge with arbitrary direction stalls the popping.
    if (!hull.empty() && p.x - hull.back().x <= kSameAbscissa) {
      if (p.y <= hull.back().y) continue;
      hull.pop_back();
    }
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) >= 0.0) hull.pop_back();
    hull.push_back(p);
  }
  return hull;
}

std::optional<double> hull_value_at(const std::vector<PlanePoint>& hull, double x) {
  if (hull.empty() || x < hull.front().x || x > hull.back().x) return std::nullopt;
  auto it = std::lower_bound(hull.begin(), hull.end(), x,
                             [](const PlanePoint& p, double v) { return p.x < v; });
  if (it->x == x) return it->y;
  const PlanePoint& b = *it;
  const PlanePoint& a = *(it - 1);
  const double t = (x - a.x) / (b.x - a.x);
  return a.y + t * (b.y - a.y);
}

std::vector<SampledStrategy> sample_curve_grid(const PairAngle& pa, double lo, double hi,
                                               std::size_t count, SampleKind kind) {
  std::vector<SampledStrategy> out(count);
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < n; ++k) {
    out[k] = curve_sample(pa, grid_at(lo, hi, k, count), kind);
  }
  return out;
}

std::vector<SampledStrategy> sample_curve_grid_serial(const PairAngle& pa, double lo, double hi,
                                                      std::size_t count, SampleKind kind) {
  std::vector<SampledStrategy> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(curve_sample(pa, grid_at(lo, hi, k, count), kind));
  return out;
}

std::vector<SampledStrategy> sample_random_probes(const PairAngle& pa, std::size_t count,
                                                  std::uint64_t seed) {
  std::vector<SampledStrategy> out(count);
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < n; ++k) out[k] = random_sample(pa, seed, k);
  return out;
}

std::vector<SampledStrategy> sample_random_probes_serial(const PairAngle& pa, std::size_t count,
                                                         std::uint64_t seed) {
  std::vector<SampledStrategy> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(random_sample(pa, seed, k));
  return out;
}

HullReport hull_verify(double c, std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 100) throw ValidationError("hull_verify needs at least 100 samples");
  const PairAngle pa = PairAngle::from_overlap(c);
  const double p_u = 0.5 * (1.0 + c * c);

  HullReport report;
  report.c = c;
  report.n_samples = n_samples;
  report.seed = seed;
  report.degenerate = (c == 0.0 || c == 1.0);
  report.point_a = {0.0, 0.5 * (1.0 + pa.s)};
  report.point_u = {p_u, 0.5 * (1.0 - c * c)};

  const std::size_t n_grid = n_samples / 2;
  const std::size_t n_random = n_samples / 4;
  std::size_t n_refine = n_samples - n_grid - n_random;

  report.samples = sample_curve_grid(pa, 0.0, p_u, n_grid, SampleKind::CurveGrid);
  auto random = sample_random_probes(pa, n_random, seed);
  report.samples.insert(report.samples.end(), random.begin(), random.end());

  auto restricted_hull = [&] {
    std::vector<PlanePoint> hull = upper_hull(to_points(report.samples));
    // Random probes reach P_I up to (1 + c)/2; the optimum is defined up to U.
    std::erase_if(hull, [&](const PlanePoint& p) { return p.x > p_u; });
    return hull;
  };

  if (!report.degenerate) {
    const double p_t = tangent_PIT(c);
    report.point_t = PlanePoint{p_t, concave_branch(pa, p_t).p_success};

    // Zoom onto the vertex next to A: each round resamples the curve on a
    // bracket one grid spacing wide around it.
    const std::size_t round_size = std::max<std::size_t>(50, n_samples / 20);
    double half_width = p_u / static_cast<double>(n_grid - 1);
    while (n_refine > 0) {
      const std::vector<PlanePoint> hull = restricted_hull();
      if (hull.size() < 2) break;
      const double centre = hull[1].x;
      const std::size_t m = std::min(round_size, n_refine);
      const double lo = std::max(0.0, centre - half_width);
      const double hi = std::min(p_u, centre + half_width);
      auto extra = sample_curve_grid(pa, lo, hi, m, SampleKind::Refinement);
      report.samples.insert(report.samples.end(), extra.begin(), extra.end());
      n_refine -= m;
      half_width = std::max((hi - lo) / static_cast<double>(std::max<std::size_t>(m, 2) - 1), 1e-15);
    }
  } else if (n_refine > 0) {
    auto extra = sample_curve_grid(pa, 0.0, p_u, n_refine, SampleKind::Refinement);
    report.samples.insert(report.samples.end(), extra.begin(), extra.end());
  }

  report.hull = restricted_hull();
  if (!report.degenerate && report.hull.size() >= 2) {
    report.numeric_tangency = report.hull[1];
    report.tangency_error = std::abs(report.hull[1].x - report.point_t->x);
  }

  // Deviation on hull vertices plus a uniform probe grid over [0, U].
  auto analytic = [&](double p) { return single_optimal(pa, p).point.p_success; };
  double dev = 0.0;
  for (const auto& v : report.hull) dev = std::max(dev, std::abs(v.y - analytic(v.x)));
  constexpr int kProbe = 2001;
  for (int k = 0; k < kProbe; ++k) {
    const double p = p_u * k / (kProbe - 1);
    const auto h = hull_value_at(report.hull, p);
    dev = std::max(dev, h ? std::abs(*h - analytic(p)) : std::abs(analytic(p)));
  }
  report.max_deviation = dev;
  return report;
}

}  // namespace mdisc
