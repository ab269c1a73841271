#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lgcorr {

class Graph;

// All variances and covariances in this project use the population (1/n)
// convention. The ratio r^2 = Var A / Var W divides two of them, so the
// convention cancels only because it is applied uniformly; do not mix in
// (n-1)-divisor values.
inline constexpr double kDegenerateVariance = 1e-24;

// Neumaier-compensated sum.
double compensated_sum(std::span<const double> x);

// Stable log-sum-exp with max shift; exact for singletons. Throws
// InvalidArgument on empty input.
double lse(std::span<const double> x);

double population_mean(std::span<const double> x);

// Corrected two-pass population variance. Returns exactly 0 when all
// entries are identical.
double population_variance(std::span<const double> x);

double population_covariance(std::span<const double> x, std::span<const double> y);

// Pearson correlation, clamped to [-1, 1]. nullopt when either variance is
// below kDegenerateVariance.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

struct RhoReport {
  double rho = 0.0;      // Corr(-log pi, log q); NaN when degenerate
  double rho_hat = 0.0;  // Corr(W, A); 0 by convention when Var A == 0
  double r = 0.0;        // sqrt(Var A / Var W)
  double var_w = 0.0;
  double var_a = 0.0;
  std::int32_t n = 0;
  std::int32_t degree = 0;
  bool degenerate = false;  // variance of -log pi or log q below threshold
  double decomposition_gap = 0.0;  // |rho - rho(rho_hat, r)|, reversible only
};

// rho expressed through the exact reversible decomposition:
// (1 + rho_hat * r) / sqrt(1 + 2 * rho_hat * r + r^2).
double rho_from_decomposition(double rho_hat, double r);

// Assembles the correlation report from the per-state vectors. In reversible
// mode the direct correlation must agree with the decomposition to 1e-10;
// a larger gap indicates a numerical fault and throws InvalidState.
RhoReport rho_report(std::span<const double> neg_log_pi,
                     std::span<const double> log_q,
                     std::span<const double> wells,
                     std::span<const double> barrier_lse,
                     std::int32_t degree, bool reversible);

struct BoundEvaluation {
  std::int32_t n = 0;
  double parameter = 0.0;  // sigma_b / sigma_w, or lambda
  double c_r = 0.0;        // finite-n coefficient
  double rho_lower_bound = 0.0;
  double asymptotic_coefficient = 0.0;  // 8 or 16
};

// Finite-n coefficient c_r(n) = 4n/(n-3) + 2*sqrt(1720)*n/((n-3)*sqrt(n-5)).
// Decreases to 4 as n grows; requires n >= 6.
double finite_n_coefficient(std::int32_t n);

// Expected-correlation lower bound 1 - 2*c_r(n)*(sigma_b/sigma_w)^2 for
// i.i.d. barrier disorder.
BoundEvaluation disorder_bound(std::int32_t n, double sigma_b, double sigma_w);

// Trap-dynamics specialization: 1 - 4*c_r(n)*(1-lambda)^2.
BoundEvaluation locality_bound(std::int32_t n, double lambda);

struct InverseVarianceMoments {
  double mean;      // n / ((n-3) sigma_w^2)
  double variance;  // 2 n^2 / ((n-3)^2 (n-5) sigma_w^4)
};

// Moments of 1/Var(W_I) for i.i.d. centered Gaussian wells; n >= 6 so the
// variance is finite.
InverseVarianceMoments inverse_variance_moments(std::int32_t n, double sigma_w);

// Central-moment bound m * Gamma(m/2) * (2 sigma^2)^(m/2) for 1-Lipschitz
// functions of an i.i.d. Gaussian vector.
double central_moment_bound(int m, double sigma);

struct MomentCheck {
  std::string name;
  double estimate = 0.0;
  double std_error = 0.0;
  double bound = 0.0;   // upper bound, or two-sided target
  bool two_sided = false;
  bool pass = false;
};

struct MomentSuiteReport {
  std::int64_t trials = 0;
  std::int32_t n = 0;
  double sigma_w = 0.0;
  double sigma_b = 0.0;
  std::vector<MomentCheck> checks;
  bool all_pass = false;
};

// Monte Carlo estimates of E[Var A_I], E[(Var A_I)^2], E[1/Var W_I] and
// V[1/Var W_I] over fresh i.i.d. landscapes, compared against the
// closed-form targets at 3 standard errors.
MomentSuiteReport empirical_moment_suite(const Graph& graph, double sigma_w,
                                         double sigma_b, std::int64_t trials,
                                         std::uint64_t seed);

}  // namespace lgcorr
