#include "forksched/distribution.hpp"

#include <cmath>

#include "forksched/errors.hpp"

namespace forksched {

ShiftedExp::ShiftedExp(double c, double mu) : c(c), mu(mu) {
  if (!(c >= 0.0) || !std::isfinite(c)) {
    throw validation_error("shifted_exp: shift c must be finite and >= 0");
  }
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw validation_error("shifted_exp: rate mu must be finite and > 0");
  }
}

ParetoDist::ParetoDist(double xm, double shape) : xm(xm), shape(shape) {
  if (!(xm > 0.0) || !std::isfinite(xm)) {
    throw validation_error("pareto: scale xm must be finite and > 0");
  }
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw validation_error("pareto: shape must be finite and > 0");
  }
}

WeibullDist::WeibullDist(double scale, double shape) : scale(scale), shape(shape) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw validation_error("weibull: scale must be finite and > 0");
  }
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw validation_error("weibull: shape must be finite and > 0");
  }
}

double ccdf(const ServiceDistribution& dist, double t) {
  if (!(t >= 0.0)) {
    throw validation_error("ccdf: t must be >= 0");
  }
  return std::visit(
      [t](const auto& d) -> double {
        using D = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<D, ShiftedExp>) {
          return t <= d.c ? 1.0 : std::exp(-d.mu * (t - d.c));
        } else if constexpr (std::is_same_v<D, ParetoDist>) {
          return t <= d.xm ? 1.0 : std::pow(d.xm / t, d.shape);
        } else {
          return std::exp(-std::pow(t / d.scale, d.shape));
        }
      },
      dist);
}

double mean(const ServiceDistribution& dist) {
  return std::visit(
      [](const auto& d) -> double {
        using D = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<D, ShiftedExp>) {
          return d.c + 1.0 / d.mu;
        } else if constexpr (std::is_same_v<D, ParetoDist>) {
          if (d.shape <= 1.0) {
            throw validation_error("pareto: mean is infinite for shape <= 1");
          }
          return d.xm * d.shape / (d.shape - 1.0);
        } else {
          return d.scale * std::tgamma(1.0 + 1.0 / d.shape);
        }
      },
      dist);
}

double quantile_from_tail(const ServiceDistribution& dist, double tail_prob) {
  if (!(tail_prob > 0.0) || !(tail_prob < 1.0)) {
    throw validation_error("quantile_from_tail: tail_prob must be in (0,1)");
  }
  return std::visit(
      [u = tail_prob](const auto& d) -> double {
        using D = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<D, ShiftedExp>) {
          return d.c - std::log(u) / d.mu;
        } else if constexpr (std::is_same_v<D, ParetoDist>) {
          return d.xm * std::pow(u, -1.0 / d.shape);
        } else {
          return d.scale * std::pow(-std::log(u), 1.0 / d.shape);
        }
      },
      dist);
}

double sample(const ServiceDistribution& dist, RngStream& stream) {
  return quantile_from_tail(dist, stream.next_uniform());
}

double support_lower_bound(const ServiceDistribution& dist) {
  return std::visit(
      [](const auto& d) -> double {
        using D = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<D, ShiftedExp>) {
          return d.c;
        } else if constexpr (std::is_same_v<D, ParetoDist>) {
          return d.xm;
        } else {
          return 0.0;
        }
      },
      dist);
}

}  // namespace forksched
