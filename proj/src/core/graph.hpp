#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "core/rng.hpp"

namespace lgcorr {

using VertexId = std::int32_t;
using EdgeId = std::int64_t;

// Undirected edge, stored once with u < v.
struct Edge {
  VertexId u;
  VertexId v;
  friend bool operator==(Edge a, Edge b) = default;
};

struct GraphDiagnostics {
  bool simple = false;
  bool regular = false;
  bool connected = false;
  std::int32_t degree = 0;  // common degree when regular, vertex-0 degree otherwise
};

struct SwapStats {
  std::int64_t accepted = 0;
  std::int64_t proposed = 0;
  std::int64_t rejected_structure = 0;     // self-loop or duplicate edge
  std::int64_t rejected_connectivity = 0;  // swap would disconnect the graph

  std::string describe() const;
};

// Double-edge-swap randomization hit the retry cap.
class SwapRetryError : public std::runtime_error {
 public:
  SwapRetryError(const std::string& what, SwapStats stats)
      : std::runtime_error(what), stats_(stats) {}
  const SwapStats& stats() const { return stats_; }

 private:
  SwapStats stats_;
};

// Simple undirected graph with a canonical sorted edge list and CSR
// adjacency. Immutable after construction; safe for concurrent reads.
class Graph {
 public:
  static Graph complete(VertexId n);
  static Graph hypercube(int dim);
  static Graph cycle(VertexId n);
  // Vertex i adjacent to i +- s (mod n) for each offset s in [1, n/2].
  static Graph circulant(VertexId n, std::span<const std::int32_t> offsets);
  // Applies `num_swap_pairs` accepted double-edge swaps to a copy of `base`,
  // resampling any proposal that would create a self-loop, a duplicate edge
  // or a disconnected graph. Retry cap: 100 proposals per requested swap.
  static Graph random_regular_by_swaps(const Graph& base, std::int64_t num_swap_pairs,
                                       Rng& rng);
  static Graph random_regular_by_swaps(const Graph& base, std::int64_t num_swap_pairs,
                                       std::uint64_t seed);
  // Arbitrary edge list; used for diagnostics and tests. No regularity or
  // connectivity promise; validate() reports what it finds.
  static Graph from_edges(VertexId n, std::vector<Edge> edges);

  VertexId num_vertices() const { return n_; }
  EdgeId num_edges() const { return static_cast<EdgeId>(edges_.size()); }
  std::int32_t degree() const { return degree_; }
  std::span<const Edge> edges() const { return edges_; }

  struct Incidence {
    VertexId neighbor;
    EdgeId edge;
  };
  std::span<const Incidence> incident(VertexId v) const;
  bool has_edge(VertexId u, VertexId v) const;

  GraphDiagnostics validate() const;
  bool is_connected() const;

  // One "u v" pair per line, u < v, ascending lexicographic order.
  void write_edge_list(std::ostream& out) const;

 private:
  Graph() = default;
  void finalize();  // canonicalize + sort edges, build CSR, set degree_

  VertexId n_ = 0;
  std::int32_t degree_ = 0;
  std::vector<Edge> edges_;
  std::vector<Incidence> incidence_;
  std::vector<std::int64_t> offsets_;
};

}  // namespace lgcorr
