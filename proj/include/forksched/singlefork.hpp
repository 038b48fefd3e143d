#pragma once

namespace forksched {

// Single-fork designs in normalized coordinates: each task gets N servers in
// total, a fraction x = n0/N starts at time 0 and the rest at t1 = u * c,
// with alpha = c * mu * N. Valid for any u > 0, including forking before the
// startup shift completes (u < 1).

double sf_mean_completion(double c, double alpha, double u, double x, int K);
double sf_mean_cost(double lambda, double mu, double alpha, double u, double x);

struct SfGradients {
  double dS_du;
  double dS_dx;
  double dW_du;
  double dW_dx;
};
SfGradients sf_gradients(double c, double lambda, double mu, double alpha,
                         double u, double x, int K);

// g(u) is the cost slope in x at x = 1/N, rescaled by mu / (alpha * lambda).
// Its sign decides whether forking everything late beats adding early
// servers. g and g' are continuous; g'' jumps by cmu * (N - 2) at u = 1.
struct GDerivs {
  double g;
  double gprime;
  double gsecond;
};
GDerivs g_funcs(double cmu, int N, double u);

enum class Branch { from_below, from_above };
double g_second_one_sided(double cmu, int N, double u, Branch side);

struct ThresholdReport {
  double v0;  // where g' changes sign pattern on the early branch
  double v1;  // inflection location of g beyond u = 1
  double v2;  // location of the minimum of g
  double v3;  // unique root of g on [v2, inf); NaN until full_thresholds
  bool v2_closed_form;  // closed branch vs implicit-root branch for v2
  bool v3_above_one;    // (1 - cmu/N) (e^cmu - 1) / cmu > 1
  double x_prime;       // branch point of the v3 > 1 condition; NaN for N < 3
};

ThresholdReport thresholds(double cmu, int N);
ThresholdReport full_thresholds(double cmu, int N);

double v3_threshold(double cmu, int N);

struct V3Approx {
  double small_cmu;  // y / cmu with e^y = 1 + (N-1) y, y > 0
  double large_n;    // -W_{-1}(-cmu / (N (e^cmu - 1))) / cmu
};
V3Approx v3_approximations(double cmu, int N);

// Barry et al. analytic approximation of the W_{-1} branch on [-1/e, 0),
// accurate to about 0.025% relative error.
double lambert_wm1_approx(double z);

// Minimizer of mean cost over x in [1/N, 1] at fixed u; returns 1/N exactly
// when u >= v3.
double optimal_initial_fraction(double cmu, int N, double u);

struct InitialServerChoice {
  double x_star;
  int n0_star;
  double cost;  // mean cost at n0_star
};

// Integer-feasible choice: rounds N * x_star both ways, clamps to [1, N-1],
// and keeps the cheaper count (ties go to the smaller one).
InitialServerChoice optimal_initial_servers(double c, double mu, int N,
                                            double t1, double lambda);

}  // namespace forksched
