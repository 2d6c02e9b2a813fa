#include "dcsl/minimize.hpp"

#include <cmath>
#include <cstddef>

namespace dcsl {

namespace {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

double norm_inf(const Vec& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

Vec central_gradient(const ObjectiveFn& f, const Vec& x, double step_rel) {
  const std::size_t n = x.size();
  Vec g(n, 0.0);
  Vec probe = x;
  for (std::size_t i = 0; i < n; ++i) {
    const double h = step_rel * std::max(std::abs(x[i]), 1.0);
    probe[i] = x[i] + h;
    const double fp = f(probe);
    probe[i] = x[i] - h;
    const double fm = f(probe);
    probe[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

}  // namespace

MinimizeResult minimize_bfgs(const ObjectiveFn& f, std::span<const double> x0,
                             const MinimizeOptions& options) {
  const std::size_t n = x0.size();
  MinimizeResult result;
  result.x.assign(x0.begin(), x0.end());
  result.fx = f(result.x);
  if (!std::isfinite(result.fx)) return result;  // unusable start

  // Inverse-Hessian approximation, dense; n is tiny here.
  std::vector<Vec> h_inv(n, Vec(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) h_inv[i][i] = 1.0;

  Vec g = central_gradient(f, result.x, options.fd_step_rel);
  for (double gi : g)
    if (!std::isfinite(gi)) return result;

  const auto stationary = [&](const Vec& grad, double fx) {
    return norm_inf(grad) <= options.gradient_tol * std::max(1.0, std::abs(fx));
  };
  if (stationary(g, result.fx)) {
    result.converged = true;
    return result;
  }

  constexpr double kArmijoC = 1e-4;

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    result.iterations = iter + 1;

    Vec direction(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) direction[i] -= h_inv[i][j] * g[j];

    double slope = dot(direction, g);
    if (slope >= 0.0) {  // curvature went bad; restart from steepest descent
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) h_inv[i][j] = (i == j) ? 1.0 : 0.0;
        direction[i] = -g[i];
      }
      slope = dot(direction, g);
      if (slope >= 0.0) {  // zero gradient: already at a stationary point
        result.converged = true;
        return result;
      }
    }

    // Backtracking Armijo line search.
    double t = 1.0;
    Vec x_new(n, 0.0);
    double f_new = 0.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t i = 0; i < n; ++i) x_new[i] = result.x[i] + t * direction[i];
      f_new = f(x_new);
      if (std::isfinite(f_new) && f_new <= result.fx + kArmijoC * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) return result;  // stall: no acceptable step

    const double decrease = result.fx - f_new;
    const double rel = decrease / std::max(std::abs(result.fx), 1e-300);

    Vec g_new = central_gradient(f, x_new, options.fd_step_rel);
    bool grad_ok = true;
    for (double gi : g_new)
      if (!std::isfinite(gi)) grad_ok = false;

    if (grad_ok) {
      Vec s(n, 0.0), y(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        s[i] = x_new[i] - result.x[i];
        y[i] = g_new[i] - g[i];
      }
      const double sy = dot(s, y);
      if (sy > 1e-12 * norm2(s) * norm2(y)) {
        // BFGS inverse update: H <- (I - r s y')H(I - r y s') + r s s'
        const double rho = 1.0 / sy;
        Vec hy(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) hy[i] += h_inv[i][j] * y[j];
        const double yhy = dot(y, hy);
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = 0; j < n; ++j) {
            h_inv[i][j] += -rho * (s[i] * hy[j] + hy[i] * s[j]) +
                           rho * (1.0 + rho * yhy) * s[i] * s[j];
          }
        }
      }
      g = std::move(g_new);
    }

    result.x = std::move(x_new);
    result.fx = f_new;

    if (rel < options.convergence_tol || (grad_ok && stationary(g, result.fx))) {
      result.converged = true;
      return result;
    }
    if (!grad_ok) return result;
  }
  return result;
}

}  // namespace dcsl
