#include "core/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/dynamics.hpp"
#include "core/errors.hpp"
#include "core/format.hpp"
#include "core/graph.hpp"
#include "core/landscape.hpp"
#include "core/rng.hpp"

namespace lgcorr {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

class NeumaierAccumulator {
 public:
  void add(double v) {
    double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace

double compensated_sum(std::span<const double> x) {
  NeumaierAccumulator acc;
  for (double v : x) acc.add(v);
  return acc.value();
}

double lse(std::span<const double> x) {
  if (x.empty()) throw InvalidArgument("lse: empty input");
  if (x.size() == 1) return x[0];
  double m = *std::max_element(x.begin(), x.end());
  NeumaierAccumulator acc;
  for (double v : x) acc.add(std::exp(v - m));
  return m + std::log(acc.value());
}

double population_mean(std::span<const double> x) {
  if (x.empty()) throw InvalidArgument("population_mean: empty input");
  return compensated_sum(x) / static_cast<double>(x.size());
}

double population_variance(std::span<const double> x) {
  if (x.empty()) throw InvalidArgument("population_variance: empty input");
  auto [mn, mx] = std::minmax_element(x.begin(), x.end());
  if (*mn == *mx) return 0.0;
  const double mean = population_mean(x);
  NeumaierAccumulator sq;
  NeumaierAccumulator lin;  // residual of the mean, for the two-pass correction
  for (double v : x) {
    double d = v - mean;
    sq.add(d * d);
    lin.add(d);
  }
  const double n = static_cast<double>(x.size());
  double var = (sq.value() - lin.value() * lin.value() / n) / n;
  return var > 0.0 ? var : 0.0;
}

double population_covariance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.empty())
    throw InvalidArgument("population_covariance: size mismatch or empty input");
  const double mx = population_mean(x);
  const double my = population_mean(y);
  NeumaierAccumulator acc;
  for (std::size_t i = 0; i < x.size(); ++i) {
    acc.add((x[i] - mx) * (y[i] - my));
  }
  return acc.value() / static_cast<double>(x.size());
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  const double vx = population_variance(x);
  const double vy = population_variance(y);
  if (vx < kDegenerateVariance || vy < kDegenerateVariance) return std::nullopt;
  double rho = population_covariance(x, y) / std::sqrt(vx * vy);
  return std::clamp(rho, -1.0, 1.0);
}

double rho_from_decomposition(double rho_hat, double r) {
  return (1.0 + rho_hat * r) / std::sqrt(1.0 + 2.0 * rho_hat * r + r * r);
}

RhoReport rho_report(std::span<const double> neg_log_pi,
                     std::span<const double> log_q,
                     std::span<const double> wells,
                     std::span<const double> barrier_lse,
                     std::int32_t degree, bool reversible) {
  const std::size_t n = neg_log_pi.size();
  if (n < 2 || log_q.size() != n || wells.size() != n || barrier_lse.size() != n)
    throw InvalidArgument("rho_report: vectors must share a common length >= 2");

  RhoReport rep;
  rep.n = static_cast<std::int32_t>(n);
  rep.degree = degree;
  rep.var_w = population_variance(wells);
  rep.var_a = population_variance(barrier_lse);

  const double var_pi = population_variance(neg_log_pi);
  const double var_q = population_variance(log_q);
  rep.degenerate = var_pi < kDegenerateVariance || var_q < kDegenerateVariance;

  const bool a_constant = rep.var_a <= kDegenerateVariance;
  if (rep.var_w >= kDegenerateVariance) {
    rep.r = a_constant ? 0.0 : std::sqrt(rep.var_a / rep.var_w);
  } else {
    rep.r = kNan;
  }
  if (a_constant || rep.var_w < kDegenerateVariance) {
    rep.rho_hat = 0.0;  // correlation with a constant is undefined; report 0
  } else {
    rep.rho_hat = pearson(wells, barrier_lse).value();
  }

  if (rep.degenerate) {
    rep.rho = kNan;
    return rep;
  }

  if (reversible && a_constant) {
    // log q differs from -log pi by an exact constant: perfectly collinear.
    rep.rho = 1.0;
  } else {
    rep.rho = pearson(neg_log_pi, log_q).value();
  }

  if (reversible) {
    const double decomposed = rho_from_decomposition(rep.rho_hat, rep.r);
    rep.decomposition_gap = std::abs(rep.rho - decomposed);
    if (!(rep.decomposition_gap <= 1e-10)) {
      throw InvalidState("rho_report: reversible decomposition identity violated, gap = " +
                         format_double(rep.decomposition_gap));
    }
  }
  return rep;
}

double finite_n_coefficient(std::int32_t n) {
  if (n < 6)
    throw InvalidArgument("finite_n_coefficient: n must be >= 6, got " + std::to_string(n));
  const double nn = static_cast<double>(n);
  return 4.0 * nn / (nn - 3.0) +
         2.0 * std::sqrt(1720.0) * nn / ((nn - 3.0) * std::sqrt(nn - 5.0));
}

BoundEvaluation disorder_bound(std::int32_t n, double sigma_b, double sigma_w) {
  if (!(sigma_w > 0.0)) throw InvalidArgument("disorder_bound: sigma_w must be positive");
  if (!(sigma_b >= 0.0)) throw InvalidArgument("disorder_bound: sigma_b must be nonnegative");
  BoundEvaluation ev;
  ev.n = n;
  ev.c_r = finite_n_coefficient(n);
  ev.parameter = sigma_b / sigma_w;
  ev.rho_lower_bound = 1.0 - 2.0 * ev.c_r * ev.parameter * ev.parameter;
  ev.asymptotic_coefficient = 8.0;
  return ev;
}

BoundEvaluation locality_bound(std::int32_t n, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw InvalidArgument("locality_bound: lambda must lie in [0, 1]");
  BoundEvaluation ev;
  ev.n = n;
  ev.c_r = finite_n_coefficient(n);
  ev.parameter = lambda;
  const double u = 1.0 - lambda;
  ev.rho_lower_bound = 1.0 - 4.0 * ev.c_r * u * u;
  ev.asymptotic_coefficient = 16.0;
  return ev;
}

InverseVarianceMoments inverse_variance_moments(std::int32_t n, double sigma_w) {
  if (n < 6)
    throw InvalidArgument("inverse_variance_moments: n must be >= 6, got " + std::to_string(n));
  if (!(sigma_w > 0.0))
    throw InvalidArgument("inverse_variance_moments: sigma_w must be positive");
  const double nn = static_cast<double>(n);
  const double s2 = sigma_w * sigma_w;
  InverseVarianceMoments m;
  m.mean = nn / ((nn - 3.0) * s2);
  m.variance = 2.0 * nn * nn / ((nn - 3.0) * (nn - 3.0) * (nn - 5.0) * s2 * s2);
  return m;
}

double central_moment_bound(int m, double sigma) {
  if (m < 1) throw InvalidArgument("central_moment_bound: m must be >= 1");
  if (!(sigma > 0.0)) throw InvalidArgument("central_moment_bound: sigma must be positive");
  const double half = static_cast<double>(m) / 2.0;
  return static_cast<double>(m) * std::tgamma(half) * std::pow(2.0 * sigma * sigma, half);
}

namespace {

struct MeanWithError {
  double mean;
  double std_error;
};

MeanWithError sample_mean(std::span<const double> x) {
  const double n = static_cast<double>(x.size());
  const double mean = population_mean(x);
  NeumaierAccumulator sq;
  for (double v : x) {
    double d = v - mean;
    sq.add(d * d);
  }
  const double sample_var = sq.value() / (n - 1.0);
  return {mean, std::sqrt(sample_var / n)};
}

// Sample variance with the large-sample standard error
// sqrt((m4 - s^4 (T-3)/(T-1)) / T).
MeanWithError sample_variance(std::span<const double> x) {
  const double n = static_cast<double>(x.size());
  const double mean = population_mean(x);
  NeumaierAccumulator sq, quad;
  for (double v : x) {
    double d = v - mean;
    sq.add(d * d);
    quad.add(d * d * d * d);
  }
  const double s2 = sq.value() / (n - 1.0);
  const double m4 = quad.value() / n;
  double var_of_var = (m4 - s2 * s2 * (n - 3.0) / (n - 1.0)) / n;
  if (var_of_var < 0.0) var_of_var = 0.0;
  return {s2, std::sqrt(var_of_var)};
}

}  // namespace

MomentSuiteReport empirical_moment_suite(const Graph& graph, double sigma_w,
                                         double sigma_b, std::int64_t trials,
                                         std::uint64_t seed) {
  if (trials < 2) throw InvalidArgument("empirical_moment_suite: trials must be >= 2");
  const std::int32_t n = graph.num_vertices();
  if (n < 6) throw InvalidArgument("empirical_moment_suite: graph must have >= 6 vertices");
  if (!(sigma_w > 0.0)) throw InvalidArgument("empirical_moment_suite: sigma_w must be positive");
  if (!(sigma_b >= 0.0)) throw InvalidArgument("empirical_moment_suite: sigma_b must be nonnegative");

  auto graph_shared = std::make_shared<const Graph>(graph);
  const std::uint64_t stream = fnv1a64("moment-suite");

  std::vector<double> var_a(trials), var_a_sq(trials), inv_var_w(trials);
  for (std::int64_t t = 0; t < trials; ++t) {
    const std::uint64_t s = derive_seed(seed, stream, static_cast<std::uint64_t>(t));
    Landscape ls = Landscape::sample_iid(graph_shared, sigma_w, sigma_b, 0.0, s);
    const std::vector<double> a = barrier_functional(ls);
    const double va = population_variance(a);
    var_a[t] = va;
    var_a_sq[t] = va * va;
    inv_var_w[t] = 1.0 / population_variance(ls.wells());
  }

  const InverseVarianceMoments target = inverse_variance_moments(n, sigma_w);
  const double sb2 = sigma_b * sigma_b;

  MomentSuiteReport rep;
  rep.trials = trials;
  rep.n = n;
  rep.sigma_w = sigma_w;
  rep.sigma_b = sigma_b;

  auto one_sided = [](std::string name, MeanWithError est, double bound) {
    MomentCheck c;
    c.name = std::move(name);
    c.estimate = est.mean;
    c.std_error = est.std_error;
    c.bound = bound;
    c.two_sided = false;
    c.pass = est.mean <= bound + 3.0 * est.std_error;
    return c;
  };
  auto two_sided = [](std::string name, MeanWithError est, double target_value) {
    MomentCheck c;
    c.name = std::move(name);
    c.estimate = est.mean;
    c.std_error = est.std_error;
    c.bound = target_value;
    c.two_sided = true;
    c.pass = std::abs(est.mean - target_value) <= 3.0 * est.std_error;
    return c;
  };

  rep.checks.push_back(one_sided("E[Var A_I]", sample_mean(var_a), 4.0 * sb2));
  rep.checks.push_back(one_sided("E[(Var A_I)^2]", sample_mean(var_a_sq), 1720.0 * sb2 * sb2));
  rep.checks.push_back(two_sided("E[1/Var W_I]", sample_mean(inv_var_w), target.mean));
  rep.checks.push_back(two_sided("V[1/Var W_I]", sample_variance(inv_var_w), target.variance));

  rep.all_pass = std::all_of(rep.checks.begin(), rep.checks.end(),
                             [](const MomentCheck& c) { return c.pass; });
  return rep;
}

}  // namespace lgcorr
