#include "mdisc/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "mdisc/errors.hpp"
#include "mdisc/hull.hpp"
#include "mdisc/rng.hpp"

namespace mdisc {

namespace {

using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

constexpr double kPsdTol = 1e-10;
constexpr double kInf = std::numeric_limits<double>::infinity();

double trace_product(const Mat2& a, const Mat2& b) { return (a.array() * b.transpose().array()).sum(); }

double min_eigenvalue4(const Mat4& m) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// Unchecked Eq.-5 style evaluation on the full operators.
StrategyPoint tester_probabilities_unchecked(const Tester& t, const MeasurementOperatorPair& e) {
  const Mat4 tm = t.guess_m.process_operator();
  const Mat4 tn = t.guess_n.process_operator();
  const Mat4 ti = t.inconclusive.process_operator();
  const Mat4 em = e.E_M.transpose();
  const Mat4 en = e.E_N.transpose();
  const double ps = 0.5 * ((tm * em).trace() + (tn * en).trace());
  const double pe = 0.5 * ((tm * en).trace() + (tn * em).trace());
  const double pi = 0.5 * (ti * (em + en)).trace();
  return {ps, pe, pi};
}

StrategyPoint reduced_unchecked(const PovmTriple& b, const MeasurementPair& pair) {
  return {trace_product(b.h_m, pair.M0) + trace_product(b.h_n, pair.N0),
          trace_product(b.h_n, pair.M0) + trace_product(b.h_m, pair.N0),
          trace_product(b.h_i, pair.M0 + pair.N0)};
}

// Inverse square root of a symmetric positive-definite 2x2 matrix; nullopt
// when it is (numerically) singular.
std::optional<Mat2> inverse_sqrt(const Mat2& s) {
  Eigen::SelfAdjointEigenSolver<Mat2> es(s);
  if (es.eigenvalues().minCoeff() <= 1e-14 * std::max(1.0, es.eigenvalues().maxCoeff())) return std::nullopt;
  return es.operatorInverseSqrt();
}

Mat2 sqrt_psd(const Mat2& s) {
  Eigen::SelfAdjointEigenSolver<Mat2> es(s);
  return es.operatorSqrt();
}

Mat2 gram(const double* v) {
  Mat2 l;
  l << v[0], v[1], v[2], v[3];
  return l * l.transpose();
}

// Three Gram matrices normalized to sum to `total`:
// H_k = total^{1/2} S^{-1/2} A_k S^{-1/2} total^{1/2} with S = sum A_k.
std::optional<std::array<Mat2, 3>> normalized_povm(const double* v, const Mat2& total_sqrt) {
  const std::array<Mat2, 3> a{gram(v), gram(v + 4), gram(v + 8)};
  const auto inv = inverse_sqrt(a[0] + a[1] + a[2]);
  if (!inv) return std::nullopt;
  std::array<Mat2, 3> h;
  for (int k = 0; k < 3; ++k) h[k] = total_sqrt * (*inv) * a[k] * (*inv) * total_sqrt;
  return h;
}

PovmTriple blend(const PovmTriple& a, const PovmTriple& b, double w) {
  return {(1 - w) * a.h_m + w * b.h_m, (1 - w) * a.h_n + w * b.h_n, (1 - w) * a.h_i + w * b.h_i};
}

TesterComponent blend(const TesterComponent& a, const TesterComponent& b, double w) {
  return {(1 - w) * a.H0 + w * b.H0, (1 - w) * a.H1 + w * b.H1};
}

Tester blend(const Tester& a, const Tester& b, double w) {
  return {blend(a.guess_m, b.guess_m, w), blend(a.guess_n, b.guess_n, w),
          blend(a.inconclusive, b.inconclusive, w)};
}

PovmTriple shrink_inconclusive(const PovmTriple& a, double k) {
  return {a.h_m + 0.5 * (1 - k) * a.h_i, a.h_n + 0.5 * (1 - k) * a.h_i, k * a.h_i};
}

Tester shrink_inconclusive(const Tester& a, double k) {
  auto part = [&](const TesterComponent& g) {
    return TesterComponent{g.H0 + 0.5 * (1 - k) * a.inconclusive.H0, g.H1 + 0.5 * (1 - k) * a.inconclusive.H1};
  };
  return {part(a.guess_m), part(a.guess_n), {k * a.inconclusive.H0, k * a.inconclusive.H1}};
}

// Moves P_I exactly onto `target`: an excess is removed by handing a fraction
// of the inconclusive element to the two guesses, a deficit is filled by
// mixing in the always-inconclusive tester `all_inconclusive`. Both keep
// positivity and normalization.
template <class T, class Eval>
T mix_to_target(const T& x, double target, const T& all_inconclusive, Eval&& eval) {
  const double pi = eval(x).p_inconclusive;
  if (pi < target) return blend(x, all_inconclusive, (target - pi) / (1.0 - pi));
  if (pi > target) return shrink_inconclusive(x, target / pi);
  return x;
}

// --- BFGS on a numerically differentiated objective ------------------------

template <class F>
VecX numeric_gradient(F& f, const VecX& x) {
  VecX g(x.size());
  VecX probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = 1e-6 * (1.0 + std::abs(x[i]));
    probe[i] = x[i] + h;
    const double fp = f(probe);
    probe[i] = x[i] - h;
    const double fm = f(probe);
    probe[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

template <class F>
VecX bfgs_minimize(F&& f, VecX x, int max_iter = 400, double gtol = 1e-10) {
  const Eigen::Index n = x.size();
  MatX hinv = MatX::Identity(n, n);
  double fx = f(x);
  VecX g = numeric_gradient(f, x);
  for (int it = 0; it < max_iter && g.norm() > gtol; ++it) {
    VecX d = -hinv * g;
    double slope = g.dot(d);
    if (!(slope < 0.0)) {
      hinv.setIdentity();
      d = -g;
      slope = -g.squaredNorm();
    }
    double step = 1.0;
    VecX x_new = x + d;
    double f_new = f(x_new);
    while (!(f_new <= fx + 1e-4 * step * slope) && step > 1e-14) {
      step *= 0.5;
      x_new = x + step * d;
      f_new = f(x_new);
    }
    if (!(f_new <= fx)) break;
    const VecX g_new = numeric_gradient(f, x_new);
    const VecX s = x_new - x;
    const VecX y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-16) {
      const double rho = 1.0 / sy;
      const MatX id = MatX::Identity(n, n);
      hinv = (id - rho * s * y.transpose()) * hinv * (id - rho * y * s.transpose()) + rho * s * s.transpose();
    }
    const bool stalled = std::abs(fx - f_new) <= 1e-16 * (1.0 + std::abs(fx));
    x = x_new;
    fx = f_new;
    g = g_new;
    if (stalled) break;
  }
  return x;
}

// Augmented-Lagrangian maximization of P_S subject to P_I = target over a
// parameter vector; `eval` maps parameters to a StrategyPoint (nullopt when
// the parameterization is singular).
template <class Eval>
VecX constrained_ascent(Eval&& eval, VecX x, double target) {
  double lambda = 0.0;
  for (double mu : {1e2, 1e3, 1e4}) {
    for (int round = 0; round < 4; ++round) {
      auto objective = [&](const VecX& v) {
        const auto p = eval(v);
        if (!p) return kInf;
        const double g = p->p_inconclusive - target;
        return -(p->p_success - lambda * g - 0.5 * mu * g * g);
      };
      x = bfgs_minimize(objective, x);
      if (const auto p = eval(x)) lambda += mu * (p->p_inconclusive - target);
    }
  }
  return x;
}

void require_target(const MeasurementPair& pair, double target) {
  const double c = std::max(0.0, pair.c());
  if (!(target >= 0.0 && target <= c + 1e-14)) {
    std::ostringstream msg;
    msg << "infeasible target P_I = " << target << ": must lie in [0, cos 2theta = " << c << "]";
    throw DomainError(msg.str());
  }
}

const Mat2 kHalfIdentity = 0.5 * Mat2::Identity();

struct RestartOutcome {
  PovmTriple blocks;
  StrategyPoint point;
};

RestartOutcome run_restart(const MeasurementPair& pair, double target, std::uint64_t seed, int index) {
  CounterRng rng(seed, static_cast<std::uint64_t>(index));
  // Rank-1 starting blocks: angles uniform on [0, pi), weights uniform on the simplex.
  std::array<double, 3> w{};
  double wsum = 0.0;
  for (double& wk : w) wsum += (wk = -std::log(rng.uniform()));
  VecX x(12);
  for (int k = 0; k < 3; ++k) {
    const double a = rng.uniform(0.0, std::numbers::pi);
    const double r = std::sqrt(w[k] / wsum);
    x[4 * k + 0] = r * std::cos(a);
    x[4 * k + 2] = r * std::sin(a);
    x[4 * k + 1] = 1e-3 * rng.normal();
    x[4 * k + 3] = 1e-3 * rng.normal();
  }
  const Mat2 total_sqrt = std::sqrt(0.5) * Mat2::Identity();
  auto blocks_of = [&](const VecX& v) -> std::optional<PovmTriple> {
    const auto h = normalized_povm(v.data(), total_sqrt);
    if (!h) return std::nullopt;
    return PovmTriple{(*h)[0], (*h)[1], (*h)[2]};
  };
  auto eval = [&](const VecX& v) -> std::optional<StrategyPoint> {
    const auto b = blocks_of(v);
    if (!b) return std::nullopt;
    return reduced_unchecked(*b, pair);
  };
  x = constrained_ascent(eval, x, target);
  PovmTriple best = blocks_of(x).value_or(PovmTriple{kHalfIdentity, Mat2::Zero(), Mat2::Zero()});
  const PovmTriple high{Mat2::Zero(), Mat2::Zero(), kHalfIdentity};
  best = mix_to_target(best, target, high, [&](const PovmTriple& b) { return reduced_unchecked(b, pair); });
  StrategyPoint p = reduced_unchecked(best, pair);
  return {best, StrategyPoint::from_success_inconclusive(p.p_success, p.p_inconclusive)};
}

OracleResult optimize_ascent(const MeasurementPair& pair, double target, const OracleOptions& opt) {
  const int n = std::max(1, opt.restarts);
  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic) if (opt.parallel)
  for (int r = 0; r < n; ++r) outcomes[r] = run_restart(pair, target, opt.seed, r);

  // Deterministic best-of: highest P_S, ties to the lowest restart index.
  int best = 0;
  for (int r = 1; r < n; ++r) {
    if (outcomes[r].point.p_success > outcomes[best].point.p_success) best = r;
  }
  OracleResult res;
  res.point = outcomes[best].point;
  res.blocks = outcomes[best].blocks;
  for (const auto& o : outcomes) {
    res.restart_success.push_back(o.point.p_success);
    if (o.point.p_success >= res.point.p_success - opt.tol) ++res.agreeing_restarts;
  }
  res.certified = res.agreeing_restarts >= std::min(3, n) &&
                  std::abs(res.point.p_inconclusive - target) <= 1e-9;
  return res;
}

struct GridBest {
  double ps = -kInf;
  long index = std::numeric_limits<long>::max();
  PovmTriple blocks;
};

OracleResult optimize_grid(const MeasurementPair& pair, double target, const OracleOptions& opt) {
  const int g = std::max(8, opt.grid_resolution);
  std::vector<double> cc(g), cs(g), ss(g);
  std::vector<Vec2> dir(g);
  for (int k = 0; k < g; ++k) {
    const double a = std::numbers::pi * k / g;
    dir[k] = Vec2(std::cos(a), std::sin(a));
    cc[k] = dir[k][0] * dir[k][0];
    cs[k] = dir[k][0] * dir[k][1];
    ss[k] = dir[k][1] * dir[k][1];
  }
  const PovmTriple low{kHalfIdentity, Mat2::Zero(), Mat2::Zero()};
  const PovmTriple high{Mat2::Zero(), Mat2::Zero(), kHalfIdentity};
  auto eval = [&](const PovmTriple& b) { return reduced_unchecked(b, pair); };

  auto consider = [&](GridBest& best, std::size_t& count, const PovmTriple& b, long index) {
    const double pi = eval(b).p_inconclusive;
    if (std::abs(pi - target) > opt.tol) return;
    ++count;
    const PovmTriple fixed = mix_to_target(b, target, high, eval);
    const double ps = eval(fixed).p_success;
    if (ps > best.ps || (ps == best.ps && index < best.index)) best = {ps, index, fixed};
  };

  std::vector<GridBest> row_best(g);
  std::vector<std::size_t> row_count(g, 0);
#pragma omp parallel for schedule(dynamic) if (opt.parallel)
  for (int m = 0; m < g; ++m) {
    GridBest best;
    std::size_t count = 0;
    const Mat2 pm = dir[m] * dir[m].transpose();
    // Two-outcome projective tester (no inconclusive element).
    const Vec2 perp(-dir[m][1], dir[m][0]);
    consider(best, count, {0.5 * pm, 0.5 * perp * perp.transpose(), Mat2::Zero()}, static_cast<long>(m) * g * g);
    for (int n = 0; n < g; ++n) {
      for (int i = 0; i < g; ++i) {
        // Solve sum_k w_k v_k v_k^T = I for three rank-1 elements.
        const double det = cc[m] * (cs[n] * ss[i] - ss[n] * cs[i]) - cc[n] * (cs[m] * ss[i] - ss[m] * cs[i]) +
                           cc[i] * (cs[m] * ss[n] - ss[m] * cs[n]);
        if (std::abs(det) < 1e-12) continue;
        // Cramer's rule with right-hand side (1, 0, 1) over rows (cc, cs, ss).
        const double wm = (1.0 * (cs[n] * ss[i] - ss[n] * cs[i]) - cc[n] * (0.0 * ss[i] - 1.0 * cs[i]) +
                           cc[i] * (0.0 * ss[n] - 1.0 * cs[n])) / det;
        const double wn = (cc[m] * (0.0 * ss[i] - 1.0 * cs[i]) - 1.0 * (cs[m] * ss[i] - ss[m] * cs[i]) +
                           cc[i] * (cs[m] * 1.0 - ss[m] * 0.0)) / det;
        const double wi = (cc[m] * (cs[n] * 1.0 - ss[n] * 0.0) - cc[n] * (cs[m] * 1.0 - ss[m] * 0.0) +
                           1.0 * (cs[m] * ss[n] - ss[m] * cs[n])) / det;
        if (wm < 0.0 || wn < 0.0 || wi < 0.0) continue;
        const PovmTriple b{0.5 * wm * pm, 0.5 * wn * dir[n] * dir[n].transpose(), 0.5 * wi * dir[i] * dir[i].transpose()};
        consider(best, count, b, (static_cast<long>(m) * g + n) * g + i);
      }
    }
    row_best[m] = best;
    row_count[m] = count;
  }

  GridBest best;
  OracleResult res;
  for (int m = 0; m < g; ++m) {
    res.candidates += row_count[m];
    const auto& b = row_best[m];
    if (b.ps > best.ps || (b.ps == best.ps && b.index < best.index)) best = b;
  }
  if (res.candidates == 0) {
    res.blocks = mix_to_target(low, target, high, eval);
  } else {
    res.blocks = best.blocks;
  }
  const StrategyPoint p = eval(res.blocks);
  res.point = StrategyPoint::from_success_inconclusive(p.p_success, p.p_inconclusive);
  res.certified = res.candidates > 0;
  res.agreeing_restarts = res.certified ? 1 : 0;
  return res;
}

}  // namespace

Mat4 TesterComponent::process_operator() const {
  Mat4 t = Mat4::Zero();
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      t(2 * a, 2 * b) = H0(a, b);
      t(2 * a + 1, 2 * b + 1) = H1(a, b);
    }
  }
  return t;
}

Tester PovmTriple::to_tester() const {
  const Mat2 s = sigma_y();
  auto cov = [&](const Mat2& h) { return TesterComponent{h, s * h * s.transpose()}; };
  return {cov(h_m), cov(h_n), cov(h_i)};
}

MeasurementOperatorPair measurement_operators(const MeasurementPair& pair) {
  auto e = [](const Mat2& x0, const Mat2& x1) {
    return TesterComponent{x0.transpose(), x1.transpose()}.process_operator();
  };
  return {e(pair.M0, pair.M1), e(pair.N0, pair.N1)};
}

double min_eigenvalue(const Mat2& m) {
  const double a = m(0, 0);
  const double d = m(1, 1);
  const double b = 0.5 * (m(0, 1) + m(1, 0));
  return 0.5 * (a + d - std::hypot(a - d, 2.0 * b));
}

StrategyPoint tester_probabilities(const Tester& tester, const MeasurementPair& pair) {
  const Mat4 tm = tester.guess_m.process_operator();
  const Mat4 tn = tester.guess_n.process_operator();
  const Mat4 ti = tester.inconclusive.process_operator();
  const std::pair<const char*, const Mat4*> parts[] = {{"T_M", &tm}, {"T_N", &tn}, {"T_I", &ti}};
  for (const auto& [name, op] : parts) {
    const double ev = min_eigenvalue4(*op);
    if (ev < -kPsdTol) {
      std::ostringstream msg;
      msg << name << " is not positive semidefinite (min eigenvalue " << ev << ")";
      throw ValidationError(msg.str());
    }
  }
  const Mat4 sum = tm + tn + ti;
  Mat2 rho;
  rho << sum(0, 0), sum(0, 2), sum(2, 0), sum(2, 2);
  const Mat4 expected = TesterComponent{rho, rho}.process_operator();
  const double residual = (sum - expected).cwiseAbs().maxCoeff();
  const double trace_residual = std::abs(rho.trace() - 1.0);
  if (residual > 1e-8 || trace_residual > 1e-8 || min_eigenvalue(rho) < -1e-8) {
    std::ostringstream msg;
    msg << "T_M + T_N + T_I != rho (x) I: block residual " << residual << ", |Tr rho - 1| = " << trace_residual;
    throw ValidationError(msg.str());
  }
  return tester_probabilities_unchecked(tester, measurement_operators(pair));
}

Tester symmetrize(const Tester& t) {
  const Mat2 s = sigma_y();
  auto sym = [&](const TesterComponent& c) {
    return TesterComponent{0.5 * (c.H0 + s * c.H1 * s.transpose()), 0.5 * (c.H1 + s * c.H0 * s.transpose())};
  };
  return {sym(t.guess_m), sym(t.guess_n), sym(t.inconclusive)};
}

StrategyPoint reduced_probabilities(const PovmTriple& blocks, const MeasurementPair& pair) {
  const std::pair<const char*, const Mat2*> parts[] = {
      {"H_M0", &blocks.h_m}, {"H_N0", &blocks.h_n}, {"H_I0", &blocks.h_i}};
  for (const auto& [name, h] : parts) {
    const double ev = min_eigenvalue(*h);
    if (ev < -kPsdTol) {
      std::ostringstream msg;
      msg << name << " is not positive semidefinite (min eigenvalue " << ev << ")";
      throw ValidationError(msg.str());
    }
  }
  const double residual = (blocks.rho() - kHalfIdentity).cwiseAbs().maxCoeff();
  if (residual > 1e-10) {
    std::ostringstream msg;
    msg << "blocks do not sum to I/2 (max residual " << residual << ")";
    throw ValidationError(msg.str());
  }
  return reduced_unchecked(blocks, pair);
}

Tester singlet_tester(const MeasurementPair& pair, const FilterOperator& filter) {
  (void)pair;
  const Mat2 f = filter.matrix();
  const Mat2 pi_m = f * PureQubitState::plus().projector() * f;
  const Mat2 pi_n = f * PureQubitState::minus().projector() * f;
  const Mat2 pi_i = Mat2::Identity() - f * f;
  return PovmTriple{0.5 * pi_m, 0.5 * pi_n, 0.5 * pi_i}.to_tester();
}

std::string_view to_string(OracleMethod m) { return m == OracleMethod::Grid ? "grid" : "ascent"; }

OracleMethod parse_oracle_method(std::string_view name) {
  if (name == "grid") return OracleMethod::Grid;
  if (name == "ascent") return OracleMethod::Ascent;
  throw ValidationError("unknown oracle method: " + std::string(name));
}

OracleResult optimize_povm(const MeasurementPair& pair, double p_inc_target, const OracleOptions& options) {
  require_target(pair, p_inc_target);
  p_inc_target = std::clamp(p_inc_target, 0.0, std::max(0.0, pair.c()));
  return options.method == OracleMethod::Grid ? optimize_grid(pair, p_inc_target, options)
                                              : optimize_ascent(pair, p_inc_target, options);
}

FreeRhoResult optimize_free_rho(const MeasurementPair& pair, double target, std::uint64_t seed, int restarts) {
  require_target(pair, target);
  const MeasurementOperatorPair ops = measurement_operators(pair);

  struct Decoded {
    Tester tester;
    Mat2 rho;
  };
  // Layout: R (4) | outcome-0 POVM (12) | outcome-1 POVM (12).
  auto decode = [&](const VecX& v) -> std::optional<Decoded> {
    const Mat2 rr = gram(v.data());
    if (rr.trace() <= 1e-12) return std::nullopt;
    const Mat2 rho = rr / rr.trace();
    const Mat2 rs = sqrt_psd(rho);
    const auto h0 = normalized_povm(v.data() + 4, rs);
    const auto h1 = normalized_povm(v.data() + 16, rs);
    if (!h0 || !h1) return std::nullopt;
    return Decoded{{{(*h0)[0], (*h1)[0]}, {(*h0)[1], (*h1)[1]}, {(*h0)[2], (*h1)[2]}}, rho};
  };
  auto eval = [&](const VecX& v) -> std::optional<StrategyPoint> {
    const auto d = decode(v);
    if (!d) return std::nullopt;
    return tester_probabilities_unchecked(d->tester, ops);
  };

  std::optional<FreeRhoResult> best;
  for (int r = 0; r < restarts; ++r) {
    CounterRng rng(seed, static_cast<std::uint64_t>(r));
    VecX x(28);
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = rng.normal();
    x = constrained_ascent(eval, x, target);
    const auto d = decode(x);
    if (!d) continue;
    const Tester high{{}, {}, {d->rho, d->rho}};
    const Tester fixed = mix_to_target(d->tester, target, high,
                                       [&](const Tester& t) { return tester_probabilities_unchecked(t, ops); });
    const StrategyPoint p = tester_probabilities(fixed, pair);
    if (!best || p.p_success > best->point.p_success) best = FreeRhoResult{p, fixed, d->rho};
  }
  if (!best) throw DomainError("free-rho optimization found no nonsingular tester");
  return *best;
}

StrategyPoint brute_force_single(const MeasurementPair& pair, double target, int resolution, bool parallel) {
  if (resolution < 100) throw DomainError("brute_force_single requires resolution >= 100");
  const int r = resolution;

  auto row_points = [&](int j, std::vector<PlanePoint>& out) {
    const PureQubitState probe = PureQubitState::at_angle(0.5 * std::numbers::pi * j / r);
    const Mat2 rho = probe.projector();
    const Relabeling lab = canonicalize_probe(trace_product(pair.M0, rho), trace_product(pair.N0, rho));
    for (int l = 0; l <= r; ++l) {
      const double q = static_cast<double>(l) / r;
      // Outcome 0 -> guess M, outcome 1 -> guess N with probability q.
      const double ps = 0.5 * (lab.p_m0 + q * (1.0 - lab.p_n0));
      const double pi = 0.5 * (1.0 - q) * ((1.0 - lab.p_m0) + (1.0 - lab.p_n0));
      out.push_back({pi, ps});
    }
  };

  std::vector<PlanePoint> hull;
  if (parallel) {
    std::vector<std::vector<PlanePoint>> partial(static_cast<std::size_t>(r) + 1);
#pragma omp parallel for schedule(static)
    for (int j = 0; j <= r; ++j) {
      std::vector<PlanePoint> pts;
      pts.reserve(static_cast<std::size_t>(r) + 1);
      row_points(j, pts);
      partial[j] = upper_hull(std::move(pts));
    }
    std::vector<PlanePoint> merged;
    for (const auto& h : partial) merged.insert(merged.end(), h.begin(), h.end());
    hull = upper_hull(std::move(merged));
  } else {
    std::vector<PlanePoint> all;
    all.reserve(static_cast<std::size_t>(r + 1) * (r + 1));
    for (int j = 0; j <= r; ++j) row_points(j, all);
    hull = upper_hull(std::move(all));
  }

  const double grid_tol = 1.0 / r;
  double p = target;
  if (!hull.empty() && p > hull.back().x && p <= hull.back().x + grid_tol) p = hull.back().x;
  const auto value = hull_value_at(hull, p);
  if (!value) throw DomainError("target P_I is not reachable with single-qubit probes");
  return StrategyPoint::from_success_inconclusive(*value, target);
}

}  // namespace mdisc
