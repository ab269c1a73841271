#include "core/graph.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <unordered_set>

#include "core/errors.hpp"

namespace lgcorr {

namespace {

std::uint64_t pack_edge(VertexId u, VertexId v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
         static_cast<std::uint32_t>(v);
}

bool connected_via_bfs(VertexId n, const std::vector<std::vector<VertexId>>& adj) {
  if (n <= 0) return false;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<VertexId> queue;
  queue.reserve(static_cast<std::size_t>(n));
  queue.push_back(0);
  seen[0] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (VertexId w : adj[static_cast<std::size_t>(queue[head])]) {
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        queue.push_back(w);
      }
    }
  }
  return queue.size() == static_cast<std::size_t>(n);
}

}  // namespace

std::string SwapStats::describe() const {
  return "accepted=" + std::to_string(accepted) + " proposed=" + std::to_string(proposed) +
         " rejected_structure=" + std::to_string(rejected_structure) +
         " rejected_connectivity=" + std::to_string(rejected_connectivity);
}

void Graph::finalize() {
  for (Edge& e : edges_) {
    if (e.u == e.v)
      throw InvalidArgument("graph: self-loop at vertex " + std::to_string(e.u));
    if (e.u < 0 || e.v < 0 || e.u >= n_ || e.v >= n_)
      throw InvalidArgument("graph: edge endpoint out of range");
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges_.begin(), edges_.end(),
            [](Edge a, Edge b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
    throw InvalidArgument("graph: duplicate edge");

  offsets_.assign(static_cast<std::size_t>(n_) + 1, 0);
  for (const Edge& e : edges_) {
    ++offsets_[static_cast<std::size_t>(e.u) + 1];
    ++offsets_[static_cast<std::size_t>(e.v) + 1];
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  incidence_.resize(static_cast<std::size_t>(offsets_.back()));
  std::vector<std::int64_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (EdgeId id = 0; id < num_edges(); ++id) {
    const Edge& e = edges_[static_cast<std::size_t>(id)];
    incidence_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(e.u)]++)] = {e.v, id};
    incidence_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(e.v)]++)] = {e.u, id};
  }
  for (VertexId v = 0; v < n_; ++v) {
    auto begin = incidence_.begin() + offsets_[static_cast<std::size_t>(v)];
    auto end = incidence_.begin() + offsets_[static_cast<std::size_t>(v) + 1];
    std::sort(begin, end,
              [](const Incidence& a, const Incidence& b) { return a.neighbor < b.neighbor; });
  }
  degree_ = n_ > 0 ? static_cast<std::int32_t>(offsets_[1] - offsets_[0]) : 0;
}

std::span<const Graph::Incidence> Graph::incident(VertexId v) const {
  if (v < 0 || v >= n_) throw InvalidArgument("incident: vertex out of range");
  auto begin = offsets_[static_cast<std::size_t>(v)];
  auto end = offsets_[static_cast<std::size_t>(v) + 1];
  return {incidence_.data() + begin, static_cast<std::size_t>(end - begin)};
}

bool Graph::has_edge(VertexId u, VertexId v) const {
  if (u == v || u < 0 || v < 0 || u >= n_ || v >= n_) return false;
  auto inc = incident(u);
  auto it = std::lower_bound(inc.begin(), inc.end(), v,
                             [](const Incidence& a, VertexId b) { return a.neighbor < b; });
  return it != inc.end() && it->neighbor == v;
}

Graph Graph::complete(VertexId n) {
  if (n < 2) throw InvalidArgument("complete: n must be >= 2, got " + std::to_string(n));
  Graph g;
  g.n_ = n;
  g.edges_.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (VertexId u = 0; u < n; ++u)
    for (VertexId v = u + 1; v < n; ++v) g.edges_.push_back({u, v});
  g.finalize();
  return g;
}

Graph Graph::hypercube(int dim) {
  if (dim < 1) throw InvalidArgument("hypercube: dim must be >= 1, got " + std::to_string(dim));
  if (dim > 30)
    throw InvalidArgument("hypercube: dim " + std::to_string(dim) +
                          " overflows 32-bit vertex indices");
  const VertexId n = static_cast<VertexId>(1) << dim;
  Graph g;
  g.n_ = n;
  g.edges_.reserve(static_cast<std::size_t>(dim) * (static_cast<std::size_t>(n) / 2));
  for (VertexId v = 0; v < n; ++v) {
    for (int b = 0; b < dim; ++b) {
      VertexId w = v ^ (static_cast<VertexId>(1) << b);
      if (w > v) g.edges_.push_back({v, w});
    }
  }
  g.finalize();
  return g;
}

Graph Graph::cycle(VertexId n) {
  if (n < 3) throw InvalidArgument("cycle: n must be >= 3, got " + std::to_string(n));
  Graph g;
  g.n_ = n;
  g.edges_.reserve(static_cast<std::size_t>(n));
  for (VertexId v = 0; v + 1 < n; ++v) g.edges_.push_back({v, static_cast<VertexId>(v + 1)});
  g.edges_.push_back({0, static_cast<VertexId>(n - 1)});
  g.finalize();
  return g;
}

Graph Graph::circulant(VertexId n, std::span<const std::int32_t> offsets) {
  if (n < 3) throw InvalidArgument("circulant: n must be >= 3, got " + std::to_string(n));
  if (offsets.empty()) throw InvalidArgument("circulant: offsets must be nonempty");
  std::vector<std::int32_t> offs(offsets.begin(), offsets.end());
  std::sort(offs.begin(), offs.end());
  if (std::adjacent_find(offs.begin(), offs.end()) != offs.end())
    throw InvalidArgument("circulant: duplicate offsets");
  for (std::int32_t s : offs) {
    if (s < 1 || 2 * s > n)
      throw InvalidArgument("circulant: offset " + std::to_string(s) +
                            " outside [1, n/2] for n = " + std::to_string(n));
  }
  // Connected iff gcd(offsets, n) == 1.
  std::int64_t g = n;
  for (std::int32_t s : offs) g = std::gcd(g, static_cast<std::int64_t>(s));
  if (g != 1)
    throw InvalidArgument("circulant: disconnected, gcd(offsets, n) = " + std::to_string(g));

  Graph out;
  out.n_ = n;
  for (std::int32_t s : offs) {
    const VertexId limit = (2 * s == n) ? n / 2 : n;  // half offset pairs vertices once
    for (VertexId i = 0; i < limit; ++i) {
      VertexId j = static_cast<VertexId>((i + s) % n);
      out.edges_.push_back({std::min(i, j), std::max(i, j)});
    }
  }
  out.finalize();
  return out;
}

Graph Graph::from_edges(VertexId n, std::vector<Edge> edges) {
  if (n < 1) throw InvalidArgument("from_edges: n must be >= 1");
  Graph g;
  g.n_ = n;
  g.edges_ = std::move(edges);
  g.finalize();
  return g;
}

Graph Graph::random_regular_by_swaps(const Graph& base, std::int64_t num_swap_pairs,
                                     std::uint64_t seed) {
  Rng rng(seed);
  return random_regular_by_swaps(base, num_swap_pairs, rng);
}

Graph Graph::random_regular_by_swaps(const Graph& base, std::int64_t num_swap_pairs, Rng& rng) {
  if (num_swap_pairs < 0)
    throw InvalidArgument("random_regular_by_swaps: num_swap_pairs must be >= 0");
  if (num_swap_pairs == 0) return base;
  const EdgeId m = base.num_edges();
  if (m < 2) throw InvalidArgument("random_regular_by_swaps: need at least two edges");

  std::vector<Edge> edges(base.edges().begin(), base.edges().end());
  std::unordered_set<std::uint64_t> members;
  members.reserve(edges.size() * 2);
  std::vector<std::vector<VertexId>> adj(static_cast<std::size_t>(base.num_vertices()));
  for (const Edge& e : edges) {
    members.insert(pack_edge(e.u, e.v));
    adj[static_cast<std::size_t>(e.u)].push_back(e.v);
    adj[static_cast<std::size_t>(e.v)].push_back(e.u);
  }
  auto drop_arc = [&adj](VertexId a, VertexId b) {
    auto& list = adj[static_cast<std::size_t>(a)];
    list.erase(std::find(list.begin(), list.end(), b));
  };
  auto apply = [&](std::size_t i1, std::size_t i2, Edge n1, Edge n2) {
    const Edge o1 = edges[i1], o2 = edges[i2];
    members.erase(pack_edge(o1.u, o1.v));
    members.erase(pack_edge(o2.u, o2.v));
    members.insert(pack_edge(n1.u, n1.v));
    members.insert(pack_edge(n2.u, n2.v));
    drop_arc(o1.u, o1.v);
    drop_arc(o1.v, o1.u);
    drop_arc(o2.u, o2.v);
    drop_arc(o2.v, o2.u);
    adj[static_cast<std::size_t>(n1.u)].push_back(n1.v);
    adj[static_cast<std::size_t>(n1.v)].push_back(n1.u);
    adj[static_cast<std::size_t>(n2.u)].push_back(n2.v);
    adj[static_cast<std::size_t>(n2.v)].push_back(n2.u);
    edges[i1] = n1;
    edges[i2] = n2;
  };

  std::uniform_int_distribution<std::size_t> pick(0, edges.size() - 1);
  std::uniform_int_distribution<int> coin(0, 1);
  const std::int64_t retry_cap = 100 * num_swap_pairs;
  SwapStats stats;

  while (stats.accepted < num_swap_pairs) {
    if (stats.proposed >= retry_cap) {
      throw SwapRetryError("random_regular_by_swaps: retry cap " + std::to_string(retry_cap) +
                               " exhausted (" + stats.describe() + ")",
                           stats);
    }
    ++stats.proposed;
    std::size_t i1 = pick(rng);
    std::size_t i2 = pick(rng);
    if (i1 == i2) {
      ++stats.rejected_structure;
      continue;
    }
    VertexId a = edges[i1].u, b = edges[i1].v;
    VertexId c = edges[i2].u, d = edges[i2].v;
    if (coin(rng)) std::swap(c, d);
    // proposed rewiring: (a,b),(c,d) -> (a,c),(b,d)
    if (a == c || a == d || b == c || b == d) {
      ++stats.rejected_structure;
      continue;
    }
    if (members.count(pack_edge(a, c)) || members.count(pack_edge(b, d))) {
      ++stats.rejected_structure;
      continue;
    }
    const Edge n1{std::min(a, c), std::max(a, c)};
    const Edge n2{std::min(b, d), std::max(b, d)};
    apply(i1, i2, n1, n2);
    if (!connected_via_bfs(base.num_vertices(), adj)) {
      // revert
      apply(i1, i2, Edge{std::min(a, b), std::max(a, b)}, Edge{std::min(c, d), std::max(c, d)});
      ++stats.rejected_connectivity;
      continue;
    }
    ++stats.accepted;
  }

  Graph out;
  out.n_ = base.num_vertices();
  out.edges_ = std::move(edges);
  out.finalize();
  return out;
}

GraphDiagnostics Graph::validate() const {
  GraphDiagnostics d;
  // finalize() already rejects loops and duplicates, so stored graphs are simple.
  d.simple = true;
  for (const Edge& e : edges_) {
    if (e.u == e.v || e.u > e.v) d.simple = false;
  }
  d.regular = n_ > 0;
  for (VertexId v = 0; v < n_; ++v) {
    auto deg = offsets_[static_cast<std::size_t>(v) + 1] - offsets_[static_cast<std::size_t>(v)];
    if (deg != degree_) {
      d.regular = false;
      break;
    }
  }
  d.connected = is_connected();
  d.degree = degree_;
  return d;
}

bool Graph::is_connected() const {
  if (n_ <= 0) return false;
  std::vector<char> seen(static_cast<std::size_t>(n_), 0);
  std::vector<VertexId> queue;
  queue.reserve(static_cast<std::size_t>(n_));
  queue.push_back(0);
  seen[0] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (const Incidence& inc : incident(queue[head])) {
      if (!seen[static_cast<std::size_t>(inc.neighbor)]) {
        seen[static_cast<std::size_t>(inc.neighbor)] = 1;
        queue.push_back(inc.neighbor);
      }
    }
  }
  return queue.size() == static_cast<std::size_t>(n_);
}

void Graph::write_edge_list(std::ostream& out) const {
  for (const Edge& e : edges_) {
    out << e.u << ' ' << e.v << '\n';
  }
}

}  // namespace lgcorr
