#pragma once

#include <string>
#include <vector>

#include "forksched/optimize.hpp"

namespace forksched {

// Inclusive log-spaced grid with `steps` points.
std::vector<double> log_grid(double lo, double hi, int steps);

// Reproduction tables for the shipped reference figures. All return CSV text
// with a header row; cells use shortest round-trip formatting.

// Mean completion time over the (t1, n0) single-fork grid
// (c=8, mu=0.01, N=12, K=10): columns t1,n0,ES.
std::string fig2_table();

// Mean cost over the same grid (lambda=1): columns t1,n0,EW.
std::string fig3_table();

// Latency/cost tradeoff: single-fork curves at t1 in {2c,4c,6c,8c} plus the
// checkpoint-replication comparator; columns series,t1,n0,ES,EW. The
// published table was computed with the truncated gamma 0.577.
std::string fig4_table(double gamma_em = 0.577);

// Joint-optimization frontiers (c=mu=lambda=1, K=25): proposed multi-fork
// sweep vs the comparator; columns series,beta,ES,EW,joint,stages_json.
std::string fig7_table(const OptimizerOptions& opts,
                       const std::vector<double>& proposed_betas,
                       const std::vector<double>& baseline_betas);
std::string fig7_table();

}  // namespace forksched
