#include "core/trajectory.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "core/errors.hpp"
#include "core/format.hpp"
#include "core/stats.hpp"

namespace lgcorr {

Trajectory simulate(const RateMatrix& rm, VertexId start, std::int64_t num_jumps,
                    std::uint64_t seed) {
  Rng rng(seed);
  return simulate(rm, start, num_jumps, rng);
}

Trajectory simulate(const RateMatrix& rm, VertexId start, std::int64_t num_jumps, Rng& rng) {
  const Graph& g = rm.graph();
  if (num_jumps <= 0) throw InvalidArgument("simulate: num_jumps must be positive");
  if (start < 0 || start >= g.num_vertices())
    throw InvalidArgument("simulate: start state out of range");

  // Per-vertex exit rates and jump probabilities, laid out to match the
  // incidence lists. Linear scale is fine at the moderate parameter ranges
  // trajectory experiments run at.
  const std::vector<double> log_q = rm.exit_log_rates();
  std::vector<double> exit_rate(log_q.size());
  for (std::size_t i = 0; i < log_q.size(); ++i) exit_rate[i] = std::exp(log_q[i]);

  std::vector<double> jump_prob;
  std::vector<std::int64_t> jump_offset(static_cast<std::size_t>(g.num_vertices()) + 1, 0);
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    for (const Graph::Incidence& arc : g.incident(v)) {
      jump_prob.push_back(
          std::exp(rm.log_rate_from(v, arc.edge) - log_q[static_cast<std::size_t>(v)]));
    }
    jump_offset[static_cast<std::size_t>(v) + 1] = static_cast<std::int64_t>(jump_prob.size());
  }

  std::exponential_distribution<double> exponential(1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  Trajectory traj;
  traj.states.reserve(static_cast<std::size_t>(num_jumps) + 1);
  traj.holds.reserve(static_cast<std::size_t>(num_jumps) + 1);

  VertexId state = start;
  double total = 0.0;
  for (std::int64_t step = 0; step <= num_jumps; ++step) {
    const double hold = exponential(rng) / exit_rate[static_cast<std::size_t>(state)];
    traj.states.push_back(state);
    traj.holds.push_back(hold);
    total += hold;
    if (step == num_jumps) break;

    const auto inc = g.incident(state);
    const std::size_t base = static_cast<std::size_t>(jump_offset[static_cast<std::size_t>(state)]);
    double u = uniform(rng);
    std::size_t chosen = inc.size() - 1;  // rounding guard: last bucket absorbs
    for (std::size_t k = 0; k < inc.size(); ++k) {
      u -= jump_prob[base + k];
      if (u <= 0.0) {
        chosen = k;
        break;
      }
    }
    state = inc[chosen].neighbor;
  }
  traj.total_time = total;
  return traj;
}

namespace {

struct VisitTotals {
  std::vector<std::int64_t> visits;
  std::vector<double> hold_time;
};

VisitTotals accumulate(const Trajectory& traj, VertexId num_states) {
  if (num_states <= 0) throw InvalidArgument("trajectory estimates: num_states must be positive");
  VisitTotals t;
  t.visits.assign(static_cast<std::size_t>(num_states), 0);
  t.hold_time.assign(static_cast<std::size_t>(num_states), 0.0);
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const auto s = static_cast<std::size_t>(traj.states[i]);
    if (s >= t.visits.size())
      throw InvalidArgument("trajectory estimates: state out of range");
    ++t.visits[s];
    t.hold_time[s] += traj.holds[i];
  }
  return t;
}

}  // namespace

ExitRateEstimates estimate_exit_rates(const Trajectory& traj, VertexId num_states,
                                      std::int64_t min_visits) {
  VisitTotals t = accumulate(traj, num_states);
  ExitRateEstimates est;
  est.min_visits = min_visits;
  est.visits = std::move(t.visits);
  est.q_hat.assign(est.visits.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t s = 0; s < est.visits.size(); ++s) {
    if (est.visits[s] >= min_visits && t.hold_time[s] > 0.0) {
      est.q_hat[s] = static_cast<double>(est.visits[s]) / t.hold_time[s];
    }
  }
  return est;
}

OccupationEstimates estimate_occupation(const Trajectory& traj, VertexId num_states,
                                        std::int64_t min_visits) {
  VisitTotals t = accumulate(traj, num_states);
  const double total = compensated_sum(t.hold_time);
  OccupationEstimates est;
  est.min_visits = min_visits;
  est.visits = std::move(t.visits);
  est.time_share.resize(est.visits.size());
  est.pi_hat.assign(est.visits.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t s = 0; s < est.visits.size(); ++s) {
    est.time_share[s] = t.hold_time[s] / total;
    if (est.visits[s] >= min_visits) est.pi_hat[s] = est.time_share[s];
  }
  return est;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "step,state,hold_time\n";
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    out << i << ',' << traj.states[i] << ',' << format_double(traj.holds[i]) << '\n';
  }
}

}  // namespace lgcorr
