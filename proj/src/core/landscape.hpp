#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "core/graph.hpp"

namespace lgcorr {

enum class LandscapeMode { iid, rem, separable, manual };

std::string landscape_mode_name(LandscapeMode mode);

// Affine barrier trend f(x) = slope * x + intercept plus a Gaussian residual
// of standard deviation sigma per oriented edge.
struct SeparableSpec {
  double slope = 0.0;
  double intercept = 0.0;
  double sigma = 0.0;
};

struct LandscapeMeta {
  LandscapeMode mode = LandscapeMode::manual;
  double sigma_w = 0.0;
  double sigma_b = 0.0;  // for rem: the induced sqrt(2)*(1-lambda)*sigma_w
  double sigma_f = 0.0;
  double lambda = 0.0;   // rem only
  SeparableSpec separable;
  bool symmetrized = false;
  std::uint64_t seed = 0;
};

// Well depths per vertex, barrier heights per edge and antisymmetric forces
// per edge, with the generation parameters kept for reproducibility.
// Immutable after sampling. Draw order is fixed: wells for vertices
// ascending, then per-edge values for edges ascending by (u, v), so a seed
// always reproduces the same landscape.
class Landscape {
 public:
  static Landscape sample_iid(std::shared_ptr<const Graph> graph, double sigma_w,
                              double sigma_b, double sigma_f, std::uint64_t seed);
  static Landscape sample_rem(std::shared_ptr<const Graph> graph, double lambda,
                              double sigma_w, std::uint64_t seed);
  // One-sided separable form B_ij = f(W_i) + eps_ij on oriented edges.
  // `symmetrize` averages the two orientations; the averaged output no longer
  // has i.i.d. per-vertex residuals and is provided for experimentation only.
  static Landscape sample_separable(std::shared_ptr<const Graph> graph, double sigma_w,
                                    const SeparableSpec& spec, bool symmetrize,
                                    std::uint64_t seed);
  // Explicit values (symmetric barriers); forces may be empty for none.
  static Landscape from_values(std::shared_ptr<const Graph> graph,
                               std::vector<double> wells, std::vector<double> barriers,
                               std::vector<double> forces);

  const Graph& graph() const { return *graph_; }
  const std::shared_ptr<const Graph>& graph_ptr() const { return graph_; }
  std::span<const double> wells() const { return wells_; }

  // Oriented barrier B_{from,to} for edge e incident to `from`.
  double barrier_from(VertexId from, EdgeId e) const;
  // Oriented force F_{from,to}; reading the reverse orientation negates.
  double force_from(VertexId from, EdgeId e) const;

  bool symmetric_barriers() const { return barriers_rev_.empty(); }
  bool has_forces() const { return has_forces_; }
  const LandscapeMeta& meta() const { return meta_; }

  // Canonical JSON: {n, degree, edges, W, B, [B_rev,] F, meta}, arrays in
  // canonical order, floats as shortest round-trip decimals. Byte-identical
  // for identical (graph, parameters, seed).
  std::string to_canonical_json() const;

 private:
  Landscape() = default;

  std::shared_ptr<const Graph> graph_;
  std::vector<double> wells_;
  std::vector<double> barriers_;      // canonical orientation u -> v (u < v)
  std::vector<double> barriers_rev_;  // v -> u; empty when symmetric
  std::vector<double> forces_;        // canonical orientation
  bool has_forces_ = false;
  LandscapeMeta meta_;
};

// True iff the exit rates of the induced chain are not all equal within
// relative tolerance 1e-12 (in log scale). Degenerate draws are rejected
// before any correlation is computed.
bool exit_rates_nondegenerate(const Landscape& ls);

}  // namespace lgcorr
