#include "forksched/singlefork.hpp"

#include <cmath>
#include <limits>

#include "forksched/analytic.hpp"
#include "forksched/errors.hpp"
#include "forksched/rootfind.hpp"

namespace forksched {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_sf(double alpha, double u, double x) {
  if (!(alpha > 0.0)) throw validation_error("alpha = c*mu*N must be > 0");
  if (!(u >= 0.0) || !std::isfinite(u))
    throw validation_error("normalized forking time u must be finite and >= 0");
  if (!(x > 0.0) || !(x <= 1.0))
    throw validation_error("initial fraction x must lie in (0, 1]");
}

void check_cmu_n(double cmu, int N) {
  if (!(cmu > 0.0) || !std::isfinite(cmu))
    throw validation_error("cmu must be finite and > 0");
  if (N < 2) throw validation_error("server count N must be at least 2");
}

// Scaled cost slope in x for general x in (0, 1]; equals g at x = 1/N.
double cost_slope_scaled(double alpha, double u, double x) {
  if (u >= 1.0) {
    const double a = std::exp(-alpha * x * (u - 1.0));
    const double b = std::exp(-alpha * x * u);
    return 1.0 - (1.0 / x - 1.0) * ((u - 1.0) * a - u * b) -
           (a - b) / (alpha * x * x);
  }
  const double q = -std::expm1(-alpha * x * u);
  return u + (1.0 / x - 1.0) * u * (1.0 - q) - q / (alpha * x * x);
}

double g_lower(double cmu, int N, double u) {
  const double b = std::exp(-cmu * u);
  return u + (N - 1.0) * u * b - (N / cmu) * (-std::expm1(-cmu * u));
}

double g_upper(double cmu, int N, double u) {
  const double a = std::exp(-cmu * (u - 1.0));
  const double b = std::exp(-cmu * u);
  return 1.0 - (N - 1.0) * ((u - 1.0) * a - u * b) - (N / cmu) * (a - b);
}

double g_value(double cmu, int N, double u) {
  return u > 1.0 ? g_upper(cmu, N, u) : g_lower(cmu, N, u);
}

// Positive root of e^y = 1 + (N-1) y; requires N >= 3.
double exp_linear_root(int N) {
  auto f = [N](double y) { return std::expm1(y) - (N - 1.0) * y; };
  auto [lo, hi] = expand_bracket_up(f, 1e-12, 1.0);
  return bisect(f, lo, hi, 1e-14);
}

}  // namespace

double sf_mean_completion(double c, double alpha, double u, double x, int K) {
  check_sf(alpha, u, x);
  if (!(c > 0.0)) throw validation_error("startup shift c must be > 0");
  if (K < 1) throw validation_error("task count K must be at least 1");
  const double q = -std::expm1(-alpha * x * u);
  return c + c / alpha *
                 (harmonic(K) +
                  (1.0 - x) / x * geometric_harmonic(q, K));
}

double sf_mean_cost(double lambda, double mu, double alpha, double u,
                    double x) {
  check_sf(alpha, u, x);
  if (!(lambda > 0.0) || !(mu > 0.0))
    throw validation_error("need lambda > 0 and mu > 0");
  double b;
  if (u >= 1.0) {
    b = (1.0 - x) / x *
            (std::exp(-alpha * x * (u - 1.0)) - std::exp(-alpha * x * u)) -
        alpha * (1.0 - x);
  } else {
    b = (1.0 - x) / x * (-std::expm1(-alpha * x * u)) -
        alpha * (1.0 - x) * u;
  }
  return lambda / mu * (1.0 + alpha + b);
}

SfGradients sf_gradients(double c, double lambda, double mu, double alpha,
                         double u, double x, int K) {
  check_sf(alpha, u, x);
  if (!(c > 0.0) || !(lambda > 0.0) || !(mu > 0.0) || K < 1)
    throw validation_error("sf_gradients: bad c, lambda, mu, or K");
  const double q = -std::expm1(-alpha * x * u);
  const double qk = std::pow(q, K);
  SfGradients out;
  out.dS_du = c * (1.0 - x) * (1.0 - qk);
  out.dS_dx = -c / (alpha * x * x) * geometric_harmonic(q, K) +
              u / x * out.dS_du;
  if (u >= 1.0) {
    const double a = std::exp(-alpha * x * (u - 1.0));
    const double bb = std::exp(-alpha * x * u);
    out.dW_du = -lambda / mu * alpha * (1.0 - x) * (a - bb);
  } else {
    out.dW_du = -lambda / mu * alpha * (1.0 - x) * q;
  }
  out.dW_dx = alpha * lambda / mu * cost_slope_scaled(alpha, u, x);
  return out;
}

GDerivs g_funcs(double cmu, int N, double u) {
  check_cmu_n(cmu, N);
  if (!(u > 0.0)) throw validation_error("g_funcs: u must be > 0");
  GDerivs out;
  if (u > 1.0) {
    const double a = std::exp(-cmu * (u - 1.0));
    const double b = std::exp(-cmu * u);
    const double lin = (u - 1.0) * a - u * b;
    out.g = 1.0 - (N - 1.0) * lin - (N / cmu) * (a - b);
    out.gprime = cmu * (N - 1.0) * lin + (a - b);
    out.gsecond = cmu * ((N - 2.0) * (a - b) - cmu * (N - 1.0) * lin);
  } else {
    const double b = std::exp(-cmu * u);
    out.g = g_lower(cmu, N, u);
    out.gprime = 1.0 - b * (cmu * (N - 1.0) * u + 1.0);
    out.gsecond = cmu * b * (cmu * (N - 1.0) * u - (N - 2.0));
  }
  return out;
}

double g_second_one_sided(double cmu, int N, double u, Branch side) {
  check_cmu_n(cmu, N);
  if (!(u > 0.0)) throw validation_error("g_second_one_sided: u must be > 0");
  if (side == Branch::from_below) {
    const double b = std::exp(-cmu * u);
    return cmu * b * (cmu * (N - 1.0) * u - (N - 2.0));
  }
  const double a = std::exp(-cmu * (u - 1.0));
  const double b = std::exp(-cmu * u);
  return cmu * ((N - 2.0) * (a - b) - cmu * (N - 1.0) * ((u - 1.0) * a - u * b));
}

ThresholdReport thresholds(double cmu, int N) {
  check_cmu_n(cmu, N);
  ThresholdReport r;
  r.v3 = kNaN;
  r.x_prime = kNaN;
  r.v0 = 1.0 / cmu - 1.0 / (cmu * (N - 1.0));
  r.v1 = 1.0 + r.v0 + 1.0 / std::expm1(cmu);
  const bool closed = std::log1p(cmu * (N - 1.0)) / cmu >= 1.0;
  r.v2_closed_form = closed;
  if (closed) {
    r.v2 = 1.0 - 1.0 / (cmu * (N - 1.0)) + 1.0 / std::expm1(cmu);
  } else if (N == 2) {
    // expm1(z) > z for z > 0: no positive root, the minimum sits at 0.
    r.v2 = 0.0;
  } else {
    r.v2 = exp_linear_root(N) / cmu;
  }
  r.v3_above_one = (1.0 - cmu / N) * std::expm1(cmu) / cmu > 1.0;
  return r;
}

double v3_threshold(double cmu, int N) {
  check_cmu_n(cmu, N);
  const ThresholdReport r = thresholds(cmu, N);
  auto g = [cmu, N](double u) { return g_value(cmu, N, u); };
  const double lo = std::max(r.v2, 1e-12);
  if (g(lo) >= 0.0) return r.v2;
  // g is increasing on [v2, inf) with limit 1, so doubling finds a bracket.
  double hi = lo + std::max(1.0, lo);
  int guard = 0;
  while (g(hi) < 0.0) {
    hi = lo + 2.0 * (hi - lo);
    if (++guard > 200)
      throw numerical_error("v3_threshold: failed to bracket the root of g");
  }
  return bisect(g, lo, hi, 1e-10 * std::max(1.0, hi));
}

ThresholdReport full_thresholds(double cmu, int N) {
  ThresholdReport r = thresholds(cmu, N);
  r.v3 = v3_threshold(cmu, N);
  if (N >= 3) {
    auto f = [N](double x) {
      return (N - x) * std::expm1(x) - static_cast<double>(N) * x;
    };
    r.x_prime = bisect(f, static_cast<double>(N - 2), static_cast<double>(N),
                       1e-12);
  }
  return r;
}

double lambert_wm1_approx(double z) {
  const double lo = -std::exp(-1.0);
  if (!(z >= lo) || !(z < 0.0))
    throw validation_error("lambert_wm1_approx: z must lie in [-1/e, 0)");
  constexpr double m1 = 0.3361;
  constexpr double m2 = -0.0042;
  constexpr double m3 = -0.0201;
  const double sigma = std::max(0.0, -1.0 - std::log(-z));
  const double inner = 1.0 + m2 * sigma * std::exp(m3 * std::sqrt(sigma));
  return -1.0 - sigma -
         2.0 / m1 *
             (1.0 - 1.0 / (1.0 + m1 * std::sqrt(0.5 * sigma) / inner));
}

V3Approx v3_approximations(double cmu, int N) {
  check_cmu_n(cmu, N);
  if (N < 3)
    throw validation_error("v3_approximations: need N >= 3");
  V3Approx out;
  out.small_cmu = exp_linear_root(N) / cmu;
  out.large_n = -lambert_wm1_approx(-cmu / (N * std::expm1(cmu))) / cmu;
  return out;
}

double optimal_initial_fraction(double cmu, int N, double u) {
  check_cmu_n(cmu, N);
  if (!(u > 0.0))
    throw validation_error("optimal_initial_fraction: u must be > 0");
  const double v3 = v3_threshold(cmu, N);
  const double xmin = 1.0 / N;
  if (u >= v3) return xmin;
  const double alpha = cmu * N;
  auto slope = [alpha, u](double x) { return cost_slope_scaled(alpha, u, x); };
  return bisect(slope, xmin, 1.0, 1e-12);
}

InitialServerChoice optimal_initial_servers(double c, double mu, int N,
                                            double t1, double lambda) {
  if (!(c > 0.0) || !(mu > 0.0) || !(lambda > 0.0))
    throw validation_error("optimal_initial_servers: need c, mu, lambda > 0");
  if (N < 2) throw validation_error("server count N must be at least 2");
  if (!(t1 > 0.0))
    throw validation_error("optimal_initial_servers: t1 must be > 0");
  const double cmu = c * mu;
  const double u = t1 / c;
  const double alpha = cmu * N;
  InitialServerChoice out;
  out.x_star = optimal_initial_fraction(cmu, N, u);
  const double target = out.x_star * N;
  const int cands[2] = {static_cast<int>(std::floor(target)),
                        static_cast<int>(std::ceil(target))};
  out.n0_star = 0;
  out.cost = std::numeric_limits<double>::infinity();
  // floor comes first, so ties keep the smaller count
  for (int cand : cands) {
    const int n0 = std::min(std::max(cand, 1), N - 1);
    const double w = sf_mean_cost(lambda, mu, alpha, u, n0 / double(N));
    if (w < out.cost) {
      out.cost = w;
      out.n0_star = n0;
    }
  }
  return out;
}

}  // namespace forksched
