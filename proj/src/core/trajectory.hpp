#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "core/dynamics.hpp"
#include "core/rng.hpp"

namespace lgcorr {

// One exact-event realization: holding times are exponential with the exit
// rate of the current state, jumps follow Q_ij / q_i. Every visited state,
// including the final one, carries a holding time.
struct Trajectory {
  std::vector<VertexId> states;
  std::vector<double> holds;
  double total_time = 0.0;
};

Trajectory simulate(const RateMatrix& rm, VertexId start, std::int64_t num_jumps, Rng& rng);
Trajectory simulate(const RateMatrix& rm, VertexId start, std::int64_t num_jumps,
                    std::uint64_t seed);

struct ExitRateEstimates {
  // q_hat_i = visits / total holding time; NaN where visits < min_visits.
  std::vector<double> q_hat;
  std::vector<std::int64_t> visits;
  std::int64_t min_visits = 0;
};
ExitRateEstimates estimate_exit_rates(const Trajectory& traj, VertexId num_states,
                                      std::int64_t min_visits = 10);

struct OccupationEstimates {
  // pi_hat masked to NaN below min_visits; time_share is the raw holding-time
  // fraction (zero where unvisited), used for distribution distances.
  std::vector<double> pi_hat;
  std::vector<double> time_share;
  std::vector<std::int64_t> visits;
  std::int64_t min_visits = 0;
};
OccupationEstimates estimate_occupation(const Trajectory& traj, VertexId num_states,
                                        std::int64_t min_visits = 10);

// CSV dump: "step,state,hold_time".
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

}  // namespace lgcorr
