#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Core>

#include "kahler/errors.hpp"

namespace kahler::ode {

using State = Eigen::VectorXd;
using Rhs = std::function<void(double t, const State& y, State& dy)>;

struct Options {
  double rtol = 1e-10;
  double atol = 1e-12;
  double h_init = 0.0;      ///< 0 selects a starting step automatically
  double h_max = 0.0;       ///< 0 means |t_end - t0|
  double fixed_step = 0.0;  ///< > 0 disables adaptivity
  long max_steps = 1'000'000;
};

/// One accepted step with its continuous extension (Hairer's contd5 form).
struct DenseStep {
  double t0 = 0.0;
  double h = 0.0;
  State r1, r2, r3, r4, r5;

  State operator()(double t) const {
    const double theta = (t - t0) / h;
    const double theta1 = 1.0 - theta;
    return r1 + theta * (r2 + theta1 * (r3 + theta * (r4 + theta1 * r5)));
  }
};

struct Solution {
  std::vector<DenseStep> steps;
  double t_end = 0.0;
  bool stopped = false;  ///< the stop predicate ended integration early
  long rejected = 0;

  /// Continuous solution on the integrated interval (either direction).
  State at(double t) const {
    if (steps.empty()) throw TruncationError("ode: empty solution", t);
    const bool forward = steps.front().h > 0.0;
    auto it = std::lower_bound(steps.begin(), steps.end(), t, [forward](const DenseStep& s, double x) {
      return forward ? s.t0 + s.h < x : s.t0 + s.h > x;
    });
    if (it == steps.end()) {
      const DenseStep& last = steps.back();
      if (std::abs(t - (last.t0 + last.h)) <= 1e-14 * std::max(1.0, std::abs(t))) return last.r1 + last.r2;
      throw TruncationError("ode: evaluation point beyond integrated range", t_end);
    }
    return (*it)(t);
  }
  State final_state() const { return steps.back().r1 + steps.back().r2; }
};

/// Dormand-Prince 5(4) with PI step control. Step endpoints land exactly on
/// every point of `stops` (sorted in the direction of integration). When
/// `stop` returns true for an accepted endpoint the integration ends there.
inline Solution integrate(const Rhs& f, double t0, const State& y0, double t_end, const Options& opt,
                          const std::vector<double>& stops = {},
                          const std::function<bool(double, const State&)>& stop = nullptr) {
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                   a76 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;
  constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                   d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                   d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

  Solution sol;
  const double dir = t_end >= t0 ? 1.0 : -1.0;
  const double span = std::abs(t_end - t0);
  const double h_max = opt.h_max > 0.0 ? opt.h_max : span;
  const long n = y0.size();
  if (span == 0.0) {
    sol.t_end = t0;
    DenseStep s{t0, 0.0, y0, State::Zero(n), State::Zero(n), State::Zero(n), State::Zero(n)};
    sol.steps.push_back(s);
    return sol;
  }

  State k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), yt(n), y1(n), err(n);
  double t = t0;
  State y = y0;
  f(t, y, k1);

  auto scale = [&](const State& a, const State& b) {
    return (opt.atol + opt.rtol * a.cwiseAbs().cwiseMax(b.cwiseAbs()).array()).matrix();
  };

  double h;
  if (opt.fixed_step > 0.0) {
    h = opt.fixed_step;
  } else if (opt.h_init > 0.0) {
    h = opt.h_init;
  } else {
    const State sc = scale(y, y);
    const double d0 = (y.array() / sc.array()).matrix().norm() / std::sqrt(double(n));
    const double dd1 = (k1.array() / sc.array()).matrix().norm() / std::sqrt(double(n));
    double h0 = (d0 < 1e-5 || dd1 < 1e-5) ? 1e-6 : 0.01 * d0 / dd1;
    h0 = std::min(h0, h_max);
    yt = y + dir * h0 * k1;
    f(t + dir * h0, yt, k2);
    const double dd2 = ((k2 - k1).array() / sc.array()).matrix().norm() / std::sqrt(double(n)) / h0;
    const double h1 = std::max(dd1, dd2) <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                                                   : std::pow(0.01 / std::max(dd1, dd2), 1.0 / 5.0);
    h = std::min({100 * h0, h1, h_max});
  }

  std::size_t next_stop = 0;
  while (next_stop < stops.size() && dir * (stops[next_stop] - t0) <= 0.0) ++next_stop;

  double err_old = 1e-4;
  long steps_taken = 0;
  bool last = false;
  while (!last) {
    if (++steps_taken > opt.max_steps) throw IntegrationStalled("ode: step limit exceeded", t);
    double target = t_end;
    if (next_stop < stops.size() && dir * (stops[next_stop] - t_end) < 0.0) target = stops[next_stop];
    double hs = std::min(h, h_max);
    bool hits_target = false;
    if (hs >= std::abs(target - t) * (1.0 - 1e-12)) {
      hs = std::abs(target - t);
      hits_target = true;
    } else if (opt.fixed_step > 0.0 && hs > 0.5 * std::abs(target - t)) {
      // keep the fixed grid aligned: fall through with the nominal step
    }
    if (hs < 1e-14 * std::max(1.0, std::abs(t))) throw IntegrationStalled("ode: step size underflow", t);
    const double hh = dir * hs;

    yt = y + hh * a21 * k1;
    f(t + c2 * hh, yt, k2);
    yt = y + hh * (a31 * k1 + a32 * k2);
    f(t + c3 * hh, yt, k3);
    yt = y + hh * (a41 * k1 + a42 * k2 + a43 * k3);
    f(t + c4 * hh, yt, k4);
    yt = y + hh * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    f(t + c5 * hh, yt, k5);
    yt = y + hh * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    const double t_new = hits_target ? target : t + hh;
    f(t + hh, yt, k6);
    y1 = y + hh * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    f(t_new, y1, k7);

    double err_norm = 0.0;
    if (opt.fixed_step <= 0.0) {
      err = hh * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      err_norm = (err.array() / scale(y, y1).array()).matrix().norm() / std::sqrt(double(n));
      if (!std::isfinite(err_norm)) {
        h = 0.1 * hs;
        ++sol.rejected;
        continue;
      }
      if (err_norm > 1.0) {
        h = hs * std::max(0.2, 0.9 * std::pow(err_norm, -0.2));
        ++sol.rejected;
        continue;
      }
    }

    DenseStep ds;
    ds.t0 = t;
    ds.h = t_new - t;
    ds.r1 = y;
    ds.r2 = y1 - y;
    ds.r3 = hh * k1 - ds.r2;
    ds.r4 = ds.r2 - hh * k7 - ds.r3;
    ds.r5 = hh * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
    sol.steps.push_back(std::move(ds));

    t = t_new;
    y = y1;
    k1 = k7;
    if (hits_target) {
      if (target == t_end) last = true;
      while (next_stop < stops.size() && dir * (stops[next_stop] - t) <= 0.0) ++next_stop;
    }
    if (stop && stop(t, y)) {
      sol.stopped = true;
      last = true;
    }
    if (opt.fixed_step <= 0.0) {
      const double e = std::max(err_norm, 1e-10);
      double fac = 0.9 * std::pow(e, -0.7 / 5.0) * std::pow(err_old, 0.4 / 5.0);
      fac = std::clamp(fac, 0.2, 10.0);
      h = hs * fac;
      err_old = e;
    }
  }
  sol.t_end = t;
  return sol;
}

}  // namespace kahler::ode
