#ifndef HOLAB_ODE_HPP
#define HOLAB_ODE_HPP

#include <cmath>
#include <functional>

#include "holab/error.hpp"
#include "holab/matrix.hpp"

namespace holab {

struct OdeOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double max_step = 0.0;  // 0 = unlimited
  long max_steps = 200000;
};

using OdeRhs = std::function<Vector(double, const Vector&)>;
using OdeStepCallback = std::function<void(double, const Vector&)>;

/// Dormand-Prince 5(4) embedded pair with standard step control. Integrates
/// from t0 to t1 in either direction; the callback runs after every accepted
/// step and may throw to abort (domain escapes).
inline Vector ode_integrate(const OdeRhs& rhs, double t0, double t1, Vector y0,
                            const OdeOptions& opts = {},
                            const OdeStepCallback* on_step = nullptr) {
  if (t0 == t1) return y0;
  const double dir = t1 > t0 ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);
  double h = span / 100.0;
  if (opts.max_step > 0.0) h = std::min(h, opts.max_step);

  double t = t0;
  Vector y = std::move(y0);
  const Eigen::Index n = y.size();

  Vector k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
  for (long step = 0; step < opts.max_steps; ++step) {
    if (std::abs(t1 - t) <= 1e-15 * (1.0 + std::abs(t1))) return y;
    h = std::min(h, std::abs(t1 - t));
    const double hs = dir * h;

    k1 = rhs(t, y);
    k2 = rhs(t + hs * (1.0 / 5.0), y + hs * (1.0 / 5.0) * k1);
    k3 = rhs(t + hs * (3.0 / 10.0), y + hs * ((3.0 / 40.0) * k1 + (9.0 / 40.0) * k2));
    k4 = rhs(t + hs * (4.0 / 5.0),
             y + hs * ((44.0 / 45.0) * k1 - (56.0 / 15.0) * k2 + (32.0 / 9.0) * k3));
    k5 = rhs(t + hs * (8.0 / 9.0),
             y + hs * ((19372.0 / 6561.0) * k1 - (25360.0 / 2187.0) * k2 +
                       (64448.0 / 6561.0) * k3 - (212.0 / 729.0) * k4));
    k6 = rhs(t + hs, y + hs * ((9017.0 / 3168.0) * k1 - (355.0 / 33.0) * k2 +
                               (46732.0 / 5247.0) * k3 + (49.0 / 176.0) * k4 -
                               (5103.0 / 18656.0) * k5));
    Vector y5 = y + hs * ((35.0 / 384.0) * k1 + (500.0 / 1113.0) * k3 +
                          (125.0 / 192.0) * k4 - (2187.0 / 6784.0) * k5 +
                          (11.0 / 84.0) * k6);
    k7 = rhs(t + hs, y5);
    Vector err_vec = hs * ((71.0 / 57600.0) * k1 - (71.0 / 16695.0) * k3 +
                           (71.0 / 1920.0) * k4 - (17253.0 / 339200.0) * k5 +
                           (22.0 / 525.0) * k6 - (1.0 / 40.0) * k7);

    if (!y5.allFinite() || !err_vec.allFinite())
      throw error("ode: non-finite state during integration");

    double err = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double scale = opts.abs_tol + opts.rel_tol * std::max(std::abs(y(i)), std::abs(y5(i)));
      err = std::max(err, std::abs(err_vec(i)) / scale);
    }
    if (n == 0) err = 0.0;

    if (err <= 1.0) {
      t += hs;
      y = y5;
      if (on_step) (*on_step)(t, y);
    }
    double factor = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
    factor = std::min(5.0, std::max(0.2, factor));
    h *= factor;
    if (opts.max_step > 0.0) h = std::min(h, opts.max_step);
    if (h < 1e-14 * span) throw error("ode: step size underflow");
  }
  throw error("ode: step limit exceeded");
}

}  // namespace holab

#endif
