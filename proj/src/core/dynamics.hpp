#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "core/landscape.hpp"

namespace lgcorr {

// Transition rates in log scale: log Q_ij = W_i - B_ij + F_ij per oriented
// edge. Linear-scale rates are materialized only inside the general solver.
class RateMatrix {
 public:
  static RateMatrix build(const Landscape& ls);

  const Graph& graph() const { return *graph_; }
  const std::shared_ptr<const Graph>& graph_ptr() const { return graph_; }

  double log_rate_from(VertexId from, EdgeId e) const {
    const Edge edge = graph_->edges()[static_cast<std::size_t>(e)];
    return from == edge.u ? log_fwd_[static_cast<std::size_t>(e)]
                          : log_rev_[static_cast<std::size_t>(e)];
  }
  std::span<const double> log_rates_fwd() const { return log_fwd_; }
  std::span<const double> log_rates_rev() const { return log_rev_; }

  // log q_i as a max-shifted log-sum-exp over the outgoing log rates; never
  // overflows for finite inputs.
  std::vector<double> exit_log_rates() const;

 private:
  RateMatrix() = default;
  std::shared_ptr<const Graph> graph_;
  std::vector<double> log_fwd_;  // u -> v on the canonical edge (u < v)
  std::vector<double> log_rev_;  // v -> u
};

// A_i = log sum_j exp(-B_ij) over the neighbors of i. In the absence of
// forces, log q_i = W_i + A_i.
std::vector<double> barrier_functional(const Landscape& ls);

enum class StationaryMethod { closed_form, linear_solve, power_iteration };

std::string stationary_method_name(StationaryMethod m);

struct StationaryResult {
  std::vector<double> neg_log_pi;  // normalized so sum(exp(-x)) == 1
  StationaryMethod method = StationaryMethod::closed_form;
  double residual = 0.0;  // max_i |(pi Q)_i| after normalization
};

// Boltzmann form -log pi_i = W_i + logZ. Requires zero forces and symmetric
// barriers; throws InvalidState otherwise.
StationaryResult stationary_reversible(const Landscape& ls);

struct SolveOptions {
  std::int64_t dense_threshold = 2048;  // above: uniformized power iteration
  std::int64_t max_iterations = 200000;
  double tol = 1e-13;  // successive L1 change cutoff for power iteration
  std::optional<StationaryMethod> method;  // force a specific path
};

// pi Q = 0 with sum(pi) = 1: dense LU on the transposed generator with one
// balance row replaced by the normalization (plus one refinement pass), or
// power iteration on P = I + Q/Lambda, Lambda = 1.01 * max_i q_i. Rates are
// globally rescaled by the maximum log rate before materialization, which
// leaves pi unchanged.
StationaryResult stationary_general(const RateMatrix& rm, const SolveOptions& opts = {});

// max over edges of |pi_i Q_ij - pi_j Q_ji| / max(pi_i Q_ij, pi_j Q_ji).
double detailed_balance_residual(const RateMatrix& rm, const StationaryResult& st);

// Supporting residual: max_i |(pi Q)_i| for a given effective potential.
double stationary_residual(const RateMatrix& rm, std::span<const double> neg_log_pi);

// Per-state dump, header "state,neg_log_pi,log_q,W,A", states ascending.
void write_state_csv(std::ostream& out, std::span<const double> neg_log_pi,
                     std::span<const double> log_q, std::span<const double> wells,
                     std::span<const double> barrier_lse);

}  // namespace lgcorr
