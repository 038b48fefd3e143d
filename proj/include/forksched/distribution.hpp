#pragma once

#include <variant>

#include "forksched/rng.hpp"

namespace forksched {

// Execution time = deterministic startup shift c plus Exp(mu) tail.
struct ShiftedExp {
  double c;
  double mu;
  ShiftedExp(double c, double mu);
};

struct ParetoDist {
  double xm;     // scale, support lower bound
  double shape;  // tail exponent; mean finite iff shape > 1
  ParetoDist(double xm, double shape);
};

struct WeibullDist {
  double scale;
  double shape;
  WeibullDist(double scale, double shape);
};

using ServiceDistribution = std::variant<ShiftedExp, ParetoDist, WeibullDist>;

// P{T > t}; t must be >= 0.
double ccdf(const ServiceDistribution& dist, double t);

double mean(const ServiceDistribution& dist);

// Inverse transform: the t with ccdf(t) = tail_prob, tail_prob in (0,1).
double quantile_from_tail(const ServiceDistribution& dist, double tail_prob);

double sample(const ServiceDistribution& dist, RngStream& stream);

double support_lower_bound(const ServiceDistribution& dist);

}  // namespace forksched
