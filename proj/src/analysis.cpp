#include "ehnet/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "ehnet/errors.hpp"

namespace ehnet {

double gap_b1(const SystemParams& sys, int d_max) {
  const double d = d_max, mu = sys.mu_max, R = sys.R_max;
  return 2 * d * d * mu * mu + 0.5 * R * R + 2 * d * mu * R;
}

double gap_b2(const SystemParams& sys, double gamma) {
  const double k = 1 - sys.eta;
  const double t1 = sys.P_max / sys.xi + k * gamma;
  const double t2 = -sys.xi * sys.e_max + k * gamma;
  return 0.5 * std::max(t1 * t1, t2 * t2);
}

double gap_b3(const SystemParams& sys, double gamma) {
  const double u = sys.E_max - gamma;
  return sys.eta * (1 - sys.eta) * std::max(u * u, gamma * gamma);
}

GapBound gap_bound(const SystemParams& sys, int N, int d_max, double V, double gamma) {
  const ParamWindow w(sys);
  if (!w.admits(V, gamma)) {
    std::ostringstream os;
    os << "(V, Gamma) = (" << V << ", " << gamma << ") outside the window: V_max = " << w.v_max()
       << ", Gamma in [" << w.gamma_min(V) << ", " << w.gamma_max(V) << "]";
    throw ValidationError(os.str());
  }
  GapBound g;
  g.V = V;
  g.gamma = gamma;
  g.B1 = gap_b1(sys, d_max);
  g.B2 = gap_b2(sys, gamma);
  g.B3 = gap_b3(sys, gamma);
  g.B = double(N) * N * g.B1 + N * (g.B2 + g.B3);
  g.gap = g.B / V;
  return g;
}

kernels::GapCoefficients gap_coefficients(const SystemParams& sys, int N, int d_max) {
  kernels::GapCoefficients c;
  c.n2_b1 = double(N) * N * gap_b1(sys, d_max);
  c.n = N;
  c.a = sys.P_max / sys.xi;
  c.b = -sys.xi * sys.e_max;
  c.k = 1 - sys.eta;
  c.leak = sys.eta * (1 - sys.eta);
  c.cap = sys.E_max;
  return c;
}

namespace {

constexpr double kInvPhi = 0.6180339887498948482;

// Same arithmetic as the scalar kernel.
double objective(const kernels::GapCoefficients& c, double V, double g) {
  const double t1 = c.a + c.k * g;
  const double t2 = c.b + c.k * g;
  const double b2 = 0.5 * std::max(t1 * t1, t2 * t2);
  const double u = c.cap - g;
  const double b3 = c.leak * std::max(u * u, g * g);
  return c.n2_b1 / V + (c.n * (b2 + b3)) / V;
}

// argmin over [lo, hi] of B2 + B3, by enumerating the candidates.
double best_gamma(const kernels::GapCoefficients& c, double lo, double hi) {
  std::vector<double> cand = {lo, hi, c.cap / 2};
  if (c.k > 0) cand.push_back(-(c.a + c.b) / (2 * c.k));
  // 0.5 (p + k g)^2 + leak (r - g)^2  =>  g = (2 leak r - k p) / (k^2 + 2 leak)
  const double den = c.k * c.k + 2 * c.leak;
  if (den > 0) {
    for (double r : {c.cap, 0.0}) {
      for (double p : {c.a, c.b}) cand.push_back((2 * c.leak * r - c.k * p) / den);
    }
  }
  double best = lo, fbest = objective(c, 1.0, lo);
  for (double g : cand) {
    if (!(g >= lo && g <= hi)) continue;
    const double f = objective(c, 1.0, g);
    if (f < fbest) {
      fbest = f;
      best = g;
    }
  }
  return best;
}

void check_cap(const ParamWindow& w, double V_cap) {
  if (!(V_cap > 0)) throw ValidationError("V cap must be > 0");
  if (V_cap > w.v_max() * (1 + 1e-12)) {
    std::ostringstream os;
    os << "V cap " << V_cap << " exceeds V_max = " << w.v_max();
    throw ValidationError(os.str());
  }
  if (w.gamma_min(V_cap) > w.gamma_max(V_cap)) {
    throw ValidationError("empty (V, Gamma) window at the V cap");
  }
}

}  // namespace

GapOptimum minimize_gap(const SystemParams& sys, int N, int d_max, double V_cap) {
  const ParamWindow w(sys);
  check_cap(w, V_cap);
  const kernels::GapCoefficients c = gap_coefficients(sys, N, d_max);
  auto at = [&](double V) {
    const double g = best_gamma(c, w.gamma_min(V), w.gamma_max(V));
    return GapOptimum{V, g, objective(c, V, g)};
  };

  constexpr int kScan = 256;
  const double lo = V_cap * 1e-9;
  std::vector<GapOptimum> scan;
  for (int i = 0; i <= kScan; ++i) scan.push_back(at(lo + (V_cap - lo) * i / kScan));
  std::size_t k = 0;
  for (std::size_t i = 1; i < scan.size(); ++i) {
    if (scan[i].value < scan[k].value) k = i;
  }
  double a = scan[k > 0 ? k - 1 : 0].V;
  double b = scan[std::min(k + 1, scan.size() - 1)].V;
  GapOptimum best = scan[k];
  double x1 = b - kInvPhi * (b - a), x2 = a + kInvPhi * (b - a);
  GapOptimum f1 = at(x1), f2 = at(x2);
  while (b - a > 1e-12 * V_cap) {
    if (f1.value <= f2.value) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = at(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = at(x2);
    }
  }
  for (const GapOptimum& o : {f1, f2, at(V_cap)}) {
    if (o.value < best.value) best = o;
  }
  return best;
}

GapOptimum grid_minimize_gap(const SystemParams& sys, int N, int d_max, double V_cap, int steps) {
  const ParamWindow w(sys);
  check_cap(w, V_cap);
  if (steps < 2) throw ValidationError("grid needs at least 2 steps");
  const kernels::GapCoefficients c = gap_coefficients(sys, N, d_max);
  std::vector<double> V(steps), G(steps), out(steps);
  GapOptimum best{0, 0, kUnlimited};
  for (int i = 0; i < steps; ++i) {
    const double v = V_cap * (i + 1) / steps;
    const double g0 = w.gamma_min(v), g1 = w.gamma_max(v);
    if (g0 > g1) continue;
    for (int j = 0; j < steps; ++j) {
      V[j] = v;
      G[j] = g0 + (g1 - g0) * j / (steps - 1);
    }
    kernels::gap_objective(V, G, c, out);
    for (int j = 0; j < steps; ++j) {
      if (out[j] < best.value) best = {v, G[j], out[j]};
    }
  }
  return best;
}

bool jensen_holds(const RunMetrics& m, double tol) {
  return m.utility >= m.mean_slot_utility - tol * (1 + std::abs(m.utility));
}

std::string_view to_string(SweepParam p) {
  switch (p) {
    case SweepParam::gamma: return "gamma";
    case SweepParam::V: return "V";
    case SweepParam::e_max: return "e_max";
  }
  return "?";
}

SweepParam parse_sweep_param(std::string_view name) {
  if (name == "gamma") return SweepParam::gamma;
  if (name == "V") return SweepParam::V;
  if (name == "e_max") return SweepParam::e_max;
  throw ValidationError("unknown sweep parameter '" + std::string(name) + "' (gamma, V or e_max)");
}

std::vector<SweepPoint> sweep(const Scenario& scenario, SweepParam param,
                              const std::vector<double>& values,
                              const std::vector<Algorithm>& algorithms, const EnsembleSpec& base) {
  std::vector<SweepPoint> points;
  for (double value : values) {
    Scenario sc = scenario;
    EnsembleSpec spec = base;
    switch (param) {
      case SweepParam::gamma: spec.gamma = value; break;
      case SweepParam::V: spec.V = value; break;
      case SweepParam::e_max: sc.system.e_max = value; break;
    }
    const ValidationReport report = validate_system(sc.system);
    for (Algorithm a : algorithms) {
      SweepPoint p;
      p.value = value;
      p.algorithm = std::string(to_string(a));
      if (!report.ok()) {
        p.ok = false;
        p.message = report.to_string();
      } else {
        spec.algorithm = a;
        try {
          p.summary = run_ensemble(sc, spec);
        } catch (const ValidationError& e) {
          p.ok = false;
          p.message = e.what();
        }
      }
      points.push_back(std::move(p));
    }
  }
  return points;
}

std::vector<SweepPoint> compare_algorithms(const Scenario& scenario, double V, std::int64_t horizon,
                                           int runs, const std::vector<double>& e_max_values,
                                           std::uint64_t base_seed, int threads) {
  EnsembleSpec spec;
  spec.V = V;
  spec.horizon = horizon;
  spec.runs = runs;
  spec.base_seed = base_seed;
  spec.threads = threads;
  return sweep(scenario, SweepParam::e_max, e_max_values,
               {Algorithm::proposed, Algorithm::esa, Algorithm::greedy}, spec);
}

std::string sweep_csv(const std::vector<SweepPoint>& points) {
  std::ostringstream os;
  os.precision(17);
  os << "param_value,algorithm,mean_utility,std_utility,energy_utilization\n";
  for (const auto& p : points) {
    if (!p.ok) continue;
    os << p.value << ',' << p.algorithm << ',' << p.summary.utility.mean << ','
       << p.summary.utility.std << ',' << p.summary.energy_utilization.mean << '\n';
  }
  return os.str();
}

}  // namespace ehnet
