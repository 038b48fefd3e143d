#pragma once

// Shared helpers for the unit suites and the acceptance runner. Everything
// here is doctest-free so the acceptance binary can reuse it.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <sys/wait.h>
#include <utility>
#include <vector>

#include "forksched/analytic.hpp"
#include "forksched/schedule.hpp"

namespace testsupport {

// ---------------------------------------------------------------------------
// Files and fixtures

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

inline std::string data_path(const std::string& rel) {
#ifdef FORKSCHED_DATA_DIR
  return std::string(FORKSCHED_DATA_DIR) + "/" + rel;
#else
  return rel;
#endif
}

// Splits one CSV line; quotes group fields and are stripped.
inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
    } else if (ch == ',' && !quoted) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline Csv parse_csv(const std::string& text) {
  Csv csv;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (first) {
      csv.header = fields;
      first = false;
    } else {
      csv.rows.push_back(fields);
    }
  }
  return csv;
}

inline Csv read_csv(const std::string& path) { return parse_csv(read_file(path)); }

inline int csv_col(const Csv& csv, const std::string& name) {
  for (std::size_t i = 0; i < csv.header.size(); ++i)
    if (csv.header[i] == name) return static_cast<int>(i);
  throw std::runtime_error("csv column not found: " + name);
}

// key=value lines, e.g. CLI scalar output.
inline std::map<std::string, std::string> parse_kv(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

// ---------------------------------------------------------------------------
// Quadrature

namespace detail {
inline double simpson_rec(const std::function<double(double)>& f, double a,
                          double fa, double b, double fb, double m, double fm,
                          double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

inline double adaptive_simpson(const std::function<double(double)>& f, double a,
                               double b, double tol = 1e-10) {
  if (!(b > a)) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, 48);
}

// E[S] for a gap-valid shifted-exponential schedule, straight from
// E[S] = integral of P{S > t}: exact c head, kink-aligned panels, and an
// analytic bound cutting the tail at 1e-13 of the running total.
inline double quad_mean_completion(const forksched::ForkSchedule& schedule,
                                   double c, double mu, int K) {
  const auto d = forksched::derive(schedule);
  const int m = schedule.m();
  const double t_m = schedule.stages[static_cast<std::size_t>(m)].t;
  const double tau_m = d.utilization[static_cast<std::size_t>(m)];
  const int N = d.total;

  // P{S > T + s} <= K exp(-mu tau_m - mu N s) for s >= 0, T = t_m + c.
  const double head = K * std::exp(-mu * tau_m) / (mu * N);
  double tail_len = 1.0;
  if (head > 0.0) {
    const double want = 1e-13 * std::max(1.0, c + head);
    tail_len = std::max(1.0, std::log(head / want) / (mu * N));
  }

  std::vector<double> knots;
  knots.push_back(c);
  for (int i = 1; i <= m; ++i)
    knots.push_back(schedule.stages[static_cast<std::size_t>(i)].t + c);
  knots.push_back(t_m + c + tail_len);

  auto f = [&](double t) {
    return forksched::makespan_ccdf(schedule, c, mu, K, t);
  };
  double total = c;  // ccdf == 1 on [0, c]
  for (std::size_t i = 0; i + 1 < knots.size(); ++i)
    total += adaptive_simpson(f, knots[i], knots[i + 1], 1e-12);
  return total;
}

// ---------------------------------------------------------------------------
// Random inputs

// Gap-valid schedule: every consecutive gap is at least c (drawn in
// [c, 4c]), batch sizes in [0, max_batch] with n0 >= 1.
inline forksched::ForkSchedule random_gap_schedule(std::mt19937_64& rng,
                                                   double c,
                                                   int max_extra_stages = 4,
                                                   int max_batch = 6) {
  std::uniform_int_distribution<int> m_dist(0, max_extra_stages);
  std::uniform_int_distribution<int> n0_dist(1, max_batch);
  std::uniform_int_distribution<int> n_dist(0, max_batch);
  std::uniform_real_distribution<double> gap_dist(1.0, 4.0);

  std::vector<forksched::Stage> stages;
  stages.push_back({0.0, n0_dist(rng)});
  const int extra = m_dist(rng);
  double t = 0.0;
  for (int i = 0; i < extra; ++i) {
    t += c * gap_dist(rng);
    stages.push_back({t, n_dist(rng)});
  }
  return forksched::ForkSchedule::normalized(std::move(stages));
}

// ---------------------------------------------------------------------------
// Statistics

// Two-sided KS distance between a sample and an analytic ccdf.
inline double ks_statistic(std::vector<double> samples,
                           const std::function<double(double)>& ccdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double tail = ccdf(samples[i]);
    const double hi = (n - static_cast<double>(i)) / n;        // just before x_i
    const double lo = (n - static_cast<double>(i) - 1.0) / n;  // at x_i
    d = std::max(d, std::max(std::fabs(tail - hi), std::fabs(tail - lo)));
  }
  return d;
}

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::fabs(a), std::fabs(b));
  if (scale < 1e-300) return 0.0;
  return std::fabs(a - b) / scale;
}

inline double central_diff(const std::function<double(double)>& f, double x,
                           double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Five-point stencil, O(h^4): tolerates a much larger step, which keeps the
// cancellation noise far below tight relative tolerances.
inline double central_diff4(const std::function<double(double)>& f, double x,
                            double h) {
  return (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) /
         (12.0 * h);
}

// ---------------------------------------------------------------------------
// CLI harness

#ifdef FORKSCHED_CLI_PATH
struct CliResult {
  int exit_code;
  std::string output;  // stdout and stderr interleaved
};

// Runs the installed binary through the shell; env_prefix can inject or
// clear variables, e.g. "FORKSCHED_SEED=7" or "env -u FORKSCHED_SEED".
inline CliResult run_cli(const std::string& args,
                         const std::string& env_prefix = "") {
  std::string cmd;
  if (!env_prefix.empty()) cmd += env_prefix + " ";
  cmd += std::string(FORKSCHED_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed: " + cmd);
  std::string out;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  const int status = pclose(pipe);
  int code = -1;
  if (status >= 0 && WIFEXITED(status)) code = WEXITSTATUS(status);
  return {code, out};
}
#endif

}  // namespace testsupport
