#include "core/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include <Eigen/Dense>

#include "core/errors.hpp"
#include "core/format.hpp"
#include "core/stats.hpp"

namespace lgcorr {

std::string stationary_method_name(StationaryMethod m) {
  switch (m) {
    case StationaryMethod::closed_form: return "closed_form";
    case StationaryMethod::linear_solve: return "linear_solve";
    case StationaryMethod::power_iteration: return "power_iteration";
  }
  return "unknown";
}

RateMatrix RateMatrix::build(const Landscape& ls) {
  RateMatrix rm;
  rm.graph_ = ls.graph_ptr();
  const Graph& g = *rm.graph_;
  const std::size_t m = static_cast<std::size_t>(g.num_edges());
  rm.log_fwd_.resize(m);
  rm.log_rev_.resize(m);
  for (std::size_t e = 0; e < m; ++e) {
    const Edge edge = g.edges()[e];
    const EdgeId id = static_cast<EdgeId>(e);
    rm.log_fwd_[e] = ls.wells()[static_cast<std::size_t>(edge.u)] -
                     ls.barrier_from(edge.u, id) + ls.force_from(edge.u, id);
    rm.log_rev_[e] = ls.wells()[static_cast<std::size_t>(edge.v)] -
                     ls.barrier_from(edge.v, id) + ls.force_from(edge.v, id);
  }
  return rm;
}

std::vector<double> RateMatrix::exit_log_rates() const {
  const Graph& g = *graph_;
  std::vector<double> out(static_cast<std::size_t>(g.num_vertices()));
  std::vector<double> scratch;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    const auto inc = g.incident(v);
    scratch.clear();
    for (const Graph::Incidence& arc : inc) scratch.push_back(log_rate_from(v, arc.edge));
    out[static_cast<std::size_t>(v)] = lse(scratch);
  }
  return out;
}

std::vector<double> barrier_functional(const Landscape& ls) {
  const Graph& g = ls.graph();
  std::vector<double> out(static_cast<std::size_t>(g.num_vertices()));
  std::vector<double> scratch;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    const auto inc = g.incident(v);
    scratch.clear();
    for (const Graph::Incidence& arc : inc) scratch.push_back(-ls.barrier_from(v, arc.edge));
    out[static_cast<std::size_t>(v)] = lse(scratch);
  }
  return out;
}

StationaryResult stationary_reversible(const Landscape& ls) {
  if (ls.has_forces())
    throw InvalidState("stationary_reversible: landscape has nonzero forces");
  if (!ls.symmetric_barriers())
    throw InvalidState("stationary_reversible: barriers are not symmetric");

  const Graph& g = ls.graph();
  const std::size_t n = static_cast<std::size_t>(g.num_vertices());
  std::vector<double> neg_wells(n);
  for (std::size_t i = 0; i < n; ++i) neg_wells[i] = -ls.wells()[i];
  const double log_z = lse(neg_wells);

  StationaryResult st;
  st.method = StationaryMethod::closed_form;
  st.neg_log_pi.resize(n);
  for (std::size_t i = 0; i < n; ++i) st.neg_log_pi[i] = ls.wells()[i] + log_z;

  // pi_j Q_ji = exp(-logZ - B_ji), so the flux balance reduces to barrier
  // sums; computed honestly for the report.
  const std::vector<double> a = barrier_functional(ls);
  double worst = 0.0;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    double influx = 0.0;
    for (const Graph::Incidence& arc : g.incident(v)) {
      influx += std::exp(-log_z - ls.barrier_from(arc.neighbor, arc.edge));
    }
    const double outflux = std::exp(a[static_cast<std::size_t>(v)] - log_z);
    worst = std::max(worst, std::abs(influx - outflux));
  }
  st.residual = worst;
  return st;
}

double stationary_residual(const RateMatrix& rm, std::span<const double> neg_log_pi) {
  const Graph& g = rm.graph();
  const std::vector<double> log_q = rm.exit_log_rates();
  double worst = 0.0;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    double influx = 0.0;
    for (const Graph::Incidence& arc : g.incident(v)) {
      influx += std::exp(-neg_log_pi[static_cast<std::size_t>(arc.neighbor)] +
                         rm.log_rate_from(arc.neighbor, arc.edge));
    }
    const double outflux = std::exp(-neg_log_pi[static_cast<std::size_t>(v)] +
                                    log_q[static_cast<std::size_t>(v)]);
    worst = std::max(worst, std::abs(influx - outflux));
  }
  return worst;
}

namespace {

struct ScaledRates {
  std::vector<double> fwd, rev;  // exp(log rate - shift)
  std::vector<double> exit;      // exp(log q - shift)
  double shift;
};

ScaledRates materialize_scaled(const RateMatrix& rm) {
  ScaledRates s;
  const auto fwd = rm.log_rates_fwd();
  const auto rev = rm.log_rates_rev();
  double shift = -std::numeric_limits<double>::infinity();
  for (double v : fwd) shift = std::max(shift, v);
  for (double v : rev) shift = std::max(shift, v);
  s.shift = shift;
  s.fwd.resize(fwd.size());
  s.rev.resize(rev.size());
  for (std::size_t e = 0; e < fwd.size(); ++e) {
    s.fwd[e] = std::exp(fwd[e] - shift);
    s.rev[e] = std::exp(rev[e] - shift);
  }
  const std::vector<double> log_q = rm.exit_log_rates();
  s.exit.resize(log_q.size());
  for (std::size_t i = 0; i < log_q.size(); ++i) s.exit[i] = std::exp(log_q[i] - shift);
  return s;
}

StationaryResult finish_from_mass(const RateMatrix& rm, std::vector<double> mass,
                                  StationaryMethod method) {
  const double total = compensated_sum(mass);
  StationaryResult st;
  st.method = method;
  st.neg_log_pi.resize(mass.size());
  for (std::size_t i = 0; i < mass.size(); ++i) {
    if (!(mass[i] > 0.0))
      throw ConvergenceError("stationary_general: nonpositive stationary mass at state " +
                                 std::to_string(i),
                             0.0);
    st.neg_log_pi[i] = -std::log(mass[i] / total);
  }
  st.residual = stationary_residual(rm, st.neg_log_pi);
  return st;
}

StationaryResult solve_dense(const RateMatrix& rm, const ScaledRates& rates) {
  const Graph& g = rm.graph();
  const auto n = static_cast<Eigen::Index>(g.num_vertices());

  // Columns of the generator become rows: M = Q^T with the last balance
  // equation replaced by the normalization sum(pi) = 1.
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Edge edge = g.edges()[static_cast<std::size_t>(e)];
    m(edge.v, edge.u) = rates.fwd[static_cast<std::size_t>(e)];
    m(edge.u, edge.v) = rates.rev[static_cast<std::size_t>(e)];
  }
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = -rates.exit[static_cast<std::size_t>(i)];
  m.row(n - 1).setOnes();

  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  Eigen::VectorXd x = lu.solve(b);
  // One round of iterative refinement tightens the balance residual.
  Eigen::VectorXd correction = lu.solve(b - m * x);
  x += correction;

  std::vector<double> mass(x.data(), x.data() + n);
  return finish_from_mass(rm, std::move(mass), StationaryMethod::linear_solve);
}

StationaryResult solve_power(const RateMatrix& rm, const ScaledRates& rates,
                             const SolveOptions& opts) {
  const Graph& g = rm.graph();
  const std::size_t n = static_cast<std::size_t>(g.num_vertices());
  const double lambda =
      1.01 * *std::max_element(rates.exit.begin(), rates.exit.end());

  std::vector<double> self(n);
  for (std::size_t i = 0; i < n; ++i) self[i] = 1.0 - rates.exit[i] / lambda;

  std::vector<double> cur(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n);
  double change = std::numeric_limits<double>::infinity();
  for (std::int64_t iter = 0; iter < opts.max_iterations; ++iter) {
    for (std::size_t i = 0; i < n; ++i) next[i] = cur[i] * self[i];
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      const Edge edge = g.edges()[static_cast<std::size_t>(e)];
      const std::size_t eu = static_cast<std::size_t>(edge.u);
      const std::size_t ev = static_cast<std::size_t>(edge.v);
      next[ev] += cur[eu] * rates.fwd[static_cast<std::size_t>(e)] / lambda;
      next[eu] += cur[ev] * rates.rev[static_cast<std::size_t>(e)] / lambda;
    }
    const double total = compensated_sum(next);
    change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] /= total;
      change += std::abs(next[i] - cur[i]);
    }
    cur.swap(next);
    if (change < opts.tol) {
      return finish_from_mass(rm, std::move(cur), StationaryMethod::power_iteration);
    }
  }
  // Attach the true balance residual at the point of failure.
  StationaryResult partial = finish_from_mass(rm, std::move(cur), StationaryMethod::power_iteration);
  throw ConvergenceError("stationary_general: power iteration did not reach tol " +
                             format_double(opts.tol) + " within " +
                             std::to_string(opts.max_iterations) +
                             " iterations (last change " + format_double(change) + ")",
                         partial.residual);
}

}  // namespace

StationaryResult stationary_general(const RateMatrix& rm, const SolveOptions& opts) {
  const VertexId n = rm.graph().num_vertices();
  StationaryMethod method;
  if (opts.method) {
    if (*opts.method == StationaryMethod::closed_form)
      throw InvalidArgument("stationary_general: closed_form is not a general method");
    method = *opts.method;
  } else {
    method = n <= opts.dense_threshold ? StationaryMethod::linear_solve
                                       : StationaryMethod::power_iteration;
  }
  const ScaledRates rates = materialize_scaled(rm);
  return method == StationaryMethod::linear_solve ? solve_dense(rm, rates)
                                                  : solve_power(rm, rates, opts);
}

double detailed_balance_residual(const RateMatrix& rm, const StationaryResult& st) {
  const Graph& g = rm.graph();
  double worst = 0.0;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Edge edge = g.edges()[static_cast<std::size_t>(e)];
    const double fwd = std::exp(-st.neg_log_pi[static_cast<std::size_t>(edge.u)] +
                                rm.log_rates_fwd()[static_cast<std::size_t>(e)]);
    const double rev = std::exp(-st.neg_log_pi[static_cast<std::size_t>(edge.v)] +
                                rm.log_rates_rev()[static_cast<std::size_t>(e)]);
    const double scale = std::max(fwd, rev);
    if (scale > 0.0) worst = std::max(worst, std::abs(fwd - rev) / scale);
  }
  return worst;
}

void write_state_csv(std::ostream& out, std::span<const double> neg_log_pi,
                     std::span<const double> log_q, std::span<const double> wells,
                     std::span<const double> barrier_lse) {
  out << "state,neg_log_pi,log_q,W,A\n";
  for (std::size_t i = 0; i < neg_log_pi.size(); ++i) {
    out << i << ',' << format_double(neg_log_pi[i]) << ',' << format_double(log_q[i]) << ','
        << format_double(wells[i]) << ',' << format_double(barrier_lse[i]) << '\n';
  }
}

}  // namespace lgcorr
