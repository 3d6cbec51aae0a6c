#include "opdyn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "opdyn/error.hpp"

namespace opdyn {

namespace {

void check_state(const SignedMultigraph& g, const OpinionVector& b) {
  if (static_cast<int>(b.size()) != g.size()) {
    throw InputError("opinion vector has " + std::to_string(b.size()) + " entries, graph has " +
                     std::to_string(g.size()) + " agents");
  }
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (!g.spectrum().contains(b[i])) {
      throw DomainError("opinion of agent " + std::to_string(i + 1) + " lies outside the spectrum");
    }
  }
}

std::size_t at(int i) { return static_cast<std::size_t>(i); }

}  // namespace

std::string_view to_string(UpdateRule rule) {
  return rule == UpdateRule::Continuous ? "continuous" : "discrete";
}

UpdateRule natural_rule(const SignedMultigraph& g) {
  return g.spectrum().is_discrete() ? UpdateRule::Discrete : UpdateRule::Continuous;
}

std::string_view LimitReport::status_name() const {
  if (converged()) return "converged";
  if (oscillating()) return "oscillating";
  return "undetermined";
}

double max_abs_diff(const OpinionVector& a, const OpinionVector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

OpinionVector step_continuous(const SignedMultigraph& g, const OpinionVector& b) {
  if (g.spectrum().is_discrete()) throw WrongRule("continuous averaging needs an interval spectrum");
  check_state(g, b);
  const int n = g.size();
  const OpinionSpectrum& s = g.spectrum();
  OpinionVector next(at(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
      const double w = g.weight(i, j);
      if (w == 0.0) continue;
      acc += w * g.signal(i, j, b[at(j)]);
    }
    // a convex combination of in-spectrum values; clamp absorbs rounding
    next[at(i)] = s.is_bounded() ? std::clamp(acc, s.lo(), s.hi()) : acc;
  }
  return next;
}

OpinionVector step_discrete(const SignedMultigraph& g, const OpinionVector& b, TieRule tie) {
  if (!g.spectrum().is_discrete()) throw WrongRule("weighted majority needs a discrete spectrum");
  check_state(g, b);
  const int n = g.size();
  const int k = g.spectrum().size();
  OpinionVector next(at(n), 0.0);
  std::vector<double> score(at(k));
  for (int i = 0; i < n; ++i) {
    std::fill(score.begin(), score.end(), 0.0);
    for (int j = 0; j < n; ++j) {
      const double w = g.weight(i, j);
      if (w == 0.0) continue;
      score[static_cast<std::size_t>(g.signal(i, j, b[at(j)]))] += w;
    }
    const double best = *std::max_element(score.begin(), score.end());
    const auto current = static_cast<std::size_t>(b[at(i)]);
    if (tie == TieRule::KeepCurrentElseLowest && score[current] >= best - kScoreTieTolerance) {
      next[at(i)] = b[at(i)];
      continue;
    }
    for (int label = 0; label < k; ++label) {
      if (score[at(label)] >= best - kScoreTieTolerance) {
        next[at(i)] = label;
        break;
      }
    }
  }
  return next;
}

OpinionVector step(const SignedMultigraph& g, const OpinionVector& b, UpdateRule rule, TieRule tie) {
  return rule == UpdateRule::Continuous ? step_continuous(g, b) : step_discrete(g, b, tie);
}

namespace {

Simulation simulate_discrete(const SignedMultigraph& g, const OpinionVector& b0, const SimulationOptions& opt) {
  Simulation sim;
  sim.trajectory.rule = UpdateRule::Discrete;
  sim.trajectory.steps.push_back(b0);
  sim.report.tol = 0.0;
  sim.report.confirm_window = 1;
  sim.report.cycle_buffer = 0;

  std::map<OpinionVector, int> first_seen{{b0, 0}};
  for (int t = 1; t <= opt.t_max; ++t) {
    OpinionVector next = step_discrete(g, sim.trajectory.steps.back(), opt.tie);
    sim.trajectory.steps.push_back(next);
    auto [it, inserted] = first_seen.emplace(std::move(next), t);
    if (inserted) continue;
    const int t0 = it->second;
    const int period = t - t0;
    if (period == 1) {
      sim.report.status = Converged{it->first, t0};
    } else {
      Oscillating osc;
      osc.period = period;
      osc.orbit.assign(sim.trajectory.steps.begin() + t0, sim.trajectory.steps.begin() + t);
      sim.report.status = osc;
    }
    return sim;
  }
  sim.report.status = Undetermined{opt.t_max};
  return sim;
}

Simulation simulate_continuous(const SignedMultigraph& g, const OpinionVector& b0, const SimulationOptions& opt) {
  Simulation sim;
  auto& steps = sim.trajectory.steps;
  sim.trajectory.rule = UpdateRule::Continuous;
  steps.push_back(b0);
  sim.report.tol = opt.tol;
  sim.report.confirm_window = opt.confirm_window;
  sim.report.cycle_buffer = opt.cycle_buffer;

  const int lag = opt.cycle_buffer;
  std::vector<double> diff{0.0};  // diff[t] = |b(t) - b(t-1)|_inf
  int quiet = 0;

  auto close = [&](int a, int b) {
    const auto& x = steps[at(a)];
    const auto& y = steps[at(b)];
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (std::abs(x[i] - y[i]) >= opt.tol) return false;
    }
    return true;
  };
  auto amplitude = [&](int t, int k) {
    double m = 0.0;
    for (int u = t - k + 1; u <= t; ++u) m = std::max(m, diff[at(u)]);
    return m;
  };

  for (int t = 1; t <= opt.t_max; ++t) {
    steps.push_back(step_continuous(g, steps.back()));
    diff.push_back(max_abs_diff(steps[at(t)], steps[at(t - 1)]));

    quiet = diff.back() < opt.tol ? quiet + 1 : 0;
    if (quiet >= opt.confirm_window) {
      sim.report.status = Converged{steps.back(), t - opt.confirm_window};
      return sim;
    }

    if (t < 2 * lag) continue;
    for (int k = 2; k <= lag; ++k) {
      if (!close(t, t - k) || !close(t - lag, t - lag - k)) continue;
      const double now = amplitude(t, k);
      const double before = amplitude(t - lag, k);
      // a non-constant orbit whose amplitude is not decaying
      if (now > opt.tol && now >= before * (1.0 - 1e-6)) {
        Oscillating osc;
        osc.period = k;
        osc.orbit.assign(steps.begin() + (t - k + 1), steps.end());
        sim.report.status = osc;
        return sim;
      }
      break;
    }
  }
  sim.report.status = Undetermined{opt.t_max};
  return sim;
}

}  // namespace

Simulation simulate(const SignedMultigraph& g, const OpinionVector& b0, const SimulationOptions& options) {
  if (options.t_max < 1) throw InputError("t_max must be at least 1");
  if (options.rule == UpdateRule::Continuous && g.spectrum().is_discrete()) {
    throw WrongRule("continuous averaging needs an interval spectrum");
  }
  if (options.rule == UpdateRule::Discrete && !g.spectrum().is_discrete()) {
    throw WrongRule("weighted majority needs a discrete spectrum");
  }
  check_state(g, b0);
  return options.rule == UpdateRule::Discrete ? simulate_discrete(g, b0, options)
                                              : simulate_continuous(g, b0, options);
}

double utility_continuous(const SignedMultigraph& g, const OpinionVector& b, int i) {
  double u = 0.0;
  for (int j = 0; j < g.size(); ++j) {
    const double w = g.weight(i, j);
    if (w == 0.0) continue;
    const double gap = b[at(i)] - g.signal(i, j, b[at(j)]);
    u -= w * gap * gap;
  }
  return u;
}

double utility_discrete(const SignedMultigraph& g, const OpinionVector& b, int i) {
  double u = 0.0;
  for (int j = 0; j < g.size(); ++j) {
    const double w = g.weight(i, j);
    if (w == 0.0) continue;
    if (g.signal(i, j, b[at(j)]) != b[at(i)]) u -= w;
  }
  return u;
}

}  // namespace opdyn
