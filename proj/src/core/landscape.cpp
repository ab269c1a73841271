#include "core/landscape.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "core/errors.hpp"
#include "core/stats.hpp"

namespace lgcorr {

namespace {

using ordered_json = nlohmann::ordered_json;

void check_graph(const std::shared_ptr<const Graph>& graph) {
  if (!graph) throw InvalidArgument("landscape: null graph");
  if (graph->num_vertices() < 2) throw InvalidArgument("landscape: graph has fewer than 2 vertices");
}

std::vector<double> gaussian_draws(Rng& rng, std::size_t count, double sigma) {
  std::vector<double> out(count, 0.0);
  if (sigma > 0.0) {
    std::normal_distribution<double> normal(0.0, sigma);
    for (double& v : out) v = normal(rng);
  }
  return out;
}

void check_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidArgument(std::string("landscape: non-finite ") + what);
  }
}

}  // namespace

std::string landscape_mode_name(LandscapeMode mode) {
  switch (mode) {
    case LandscapeMode::iid: return "iid";
    case LandscapeMode::rem: return "rem";
    case LandscapeMode::separable: return "separable";
    case LandscapeMode::manual: return "manual";
  }
  return "unknown";
}

Landscape Landscape::sample_iid(std::shared_ptr<const Graph> graph, double sigma_w,
                                double sigma_b, double sigma_f, std::uint64_t seed) {
  check_graph(graph);
  if (!(sigma_w > 0.0)) throw InvalidArgument("sample_iid: sigma_w must be positive");
  if (!(sigma_b >= 0.0)) throw InvalidArgument("sample_iid: sigma_b must be nonnegative");
  if (!(sigma_f >= 0.0)) throw InvalidArgument("sample_iid: sigma_f must be nonnegative");

  Rng rng(seed);
  Landscape ls;
  ls.graph_ = std::move(graph);
  const std::size_t n = static_cast<std::size_t>(ls.graph_->num_vertices());
  const std::size_t m = static_cast<std::size_t>(ls.graph_->num_edges());
  ls.wells_ = gaussian_draws(rng, n, sigma_w);
  ls.barriers_ = gaussian_draws(rng, m, sigma_b);
  ls.forces_ = gaussian_draws(rng, m, sigma_f);
  ls.has_forces_ = sigma_f > 0.0;
  ls.meta_.mode = LandscapeMode::iid;
  ls.meta_.sigma_w = sigma_w;
  ls.meta_.sigma_b = sigma_b;
  ls.meta_.sigma_f = sigma_f;
  ls.meta_.seed = seed;
  return ls;
}

Landscape Landscape::sample_rem(std::shared_ptr<const Graph> graph, double lambda,
                                double sigma_w, std::uint64_t seed) {
  check_graph(graph);
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw InvalidArgument("sample_rem: lambda must lie in [0, 1]");
  if (!(sigma_w > 0.0)) throw InvalidArgument("sample_rem: sigma_w must be positive");

  Rng rng(seed);
  Landscape ls;
  ls.graph_ = std::move(graph);
  const std::size_t n = static_cast<std::size_t>(ls.graph_->num_vertices());
  ls.wells_ = gaussian_draws(rng, n, sigma_w);
  ls.barriers_.resize(static_cast<std::size_t>(ls.graph_->num_edges()));
  const double coupling = 1.0 - lambda;
  for (EdgeId e = 0; e < ls.graph_->num_edges(); ++e) {
    const Edge edge = ls.graph_->edges()[static_cast<std::size_t>(e)];
    ls.barriers_[static_cast<std::size_t>(e)] =
        coupling * (ls.wells_[static_cast<std::size_t>(edge.u)] +
                    ls.wells_[static_cast<std::size_t>(edge.v)]);
  }
  ls.forces_.assign(ls.barriers_.size(), 0.0);
  ls.has_forces_ = false;
  ls.meta_.mode = LandscapeMode::rem;
  ls.meta_.sigma_w = sigma_w;
  ls.meta_.sigma_b = std::sqrt(2.0) * coupling * sigma_w;
  ls.meta_.lambda = lambda;
  ls.meta_.seed = seed;
  return ls;
}

Landscape Landscape::sample_separable(std::shared_ptr<const Graph> graph, double sigma_w,
                                      const SeparableSpec& spec, bool symmetrize,
                                      std::uint64_t seed) {
  check_graph(graph);
  if (!(sigma_w > 0.0)) throw InvalidArgument("sample_separable: sigma_w must be positive");
  if (!(spec.sigma > 0.0)) throw InvalidArgument("sample_separable: residual sigma must be positive");

  Rng rng(seed);
  Landscape ls;
  ls.graph_ = std::move(graph);
  const std::size_t n = static_cast<std::size_t>(ls.graph_->num_vertices());
  const std::size_t m = static_cast<std::size_t>(ls.graph_->num_edges());
  ls.wells_ = gaussian_draws(rng, n, sigma_w);

  // Residuals drawn per edge ascending, forward orientation then reverse.
  std::normal_distribution<double> normal(0.0, spec.sigma);
  ls.barriers_.resize(m);
  ls.barriers_rev_.resize(m);
  for (std::size_t e = 0; e < m; ++e) {
    const Edge edge = ls.graph_->edges()[e];
    const double eps_fwd = normal(rng);
    const double eps_rev = normal(rng);
    ls.barriers_[e] =
        spec.slope * ls.wells_[static_cast<std::size_t>(edge.u)] + spec.intercept + eps_fwd;
    ls.barriers_rev_[e] =
        spec.slope * ls.wells_[static_cast<std::size_t>(edge.v)] + spec.intercept + eps_rev;
  }
  if (symmetrize) {
    for (std::size_t e = 0; e < m; ++e) {
      ls.barriers_[e] = 0.5 * (ls.barriers_[e] + ls.barriers_rev_[e]);
    }
    ls.barriers_rev_.clear();
  }
  ls.forces_.assign(m, 0.0);
  ls.has_forces_ = false;
  ls.meta_.mode = LandscapeMode::separable;
  ls.meta_.sigma_w = sigma_w;
  ls.meta_.sigma_b =
      std::sqrt(spec.slope * spec.slope * sigma_w * sigma_w + spec.sigma * spec.sigma);
  ls.meta_.separable = spec;
  ls.meta_.symmetrized = symmetrize;
  ls.meta_.seed = seed;
  return ls;
}

Landscape Landscape::from_values(std::shared_ptr<const Graph> graph, std::vector<double> wells,
                                 std::vector<double> barriers, std::vector<double> forces) {
  check_graph(graph);
  const std::size_t n = static_cast<std::size_t>(graph->num_vertices());
  const std::size_t m = static_cast<std::size_t>(graph->num_edges());
  if (wells.size() != n) throw InvalidArgument("from_values: wells size mismatch");
  if (barriers.size() != m) throw InvalidArgument("from_values: barriers size mismatch");
  if (!forces.empty() && forces.size() != m)
    throw InvalidArgument("from_values: forces size mismatch");
  check_finite(wells, "well depth");
  check_finite(barriers, "barrier height");
  check_finite(forces, "force");

  Landscape ls;
  ls.graph_ = std::move(graph);
  ls.wells_ = std::move(wells);
  ls.barriers_ = std::move(barriers);
  ls.forces_ = std::move(forces);
  if (ls.forces_.empty()) ls.forces_.assign(m, 0.0);
  ls.has_forces_ =
      std::any_of(ls.forces_.begin(), ls.forces_.end(), [](double f) { return f != 0.0; });
  ls.meta_.mode = LandscapeMode::manual;
  return ls;
}

double Landscape::barrier_from(VertexId from, EdgeId e) const {
  const Edge edge = graph_->edges()[static_cast<std::size_t>(e)];
  if (from == edge.u) return barriers_[static_cast<std::size_t>(e)];
  return barriers_rev_.empty() ? barriers_[static_cast<std::size_t>(e)]
                               : barriers_rev_[static_cast<std::size_t>(e)];
}

double Landscape::force_from(VertexId from, EdgeId e) const {
  const double f = forces_[static_cast<std::size_t>(e)];
  const Edge edge = graph_->edges()[static_cast<std::size_t>(e)];
  return from == edge.u ? f : -f;
}

std::string Landscape::to_canonical_json() const {
  ordered_json j;
  j["n"] = graph_->num_vertices();
  j["degree"] = graph_->degree();
  ordered_json edges = ordered_json::array();
  for (const Edge& e : graph_->edges()) edges.push_back({e.u, e.v});
  j["edges"] = std::move(edges);
  j["W"] = wells_;
  j["B"] = barriers_;
  if (!barriers_rev_.empty()) j["B_rev"] = barriers_rev_;
  j["F"] = forces_;

  ordered_json meta;
  meta["mode"] = landscape_mode_name(meta_.mode);
  meta["sigma_w"] = meta_.sigma_w;
  meta["sigma_b"] = meta_.sigma_b;
  meta["sigma_f"] = meta_.sigma_f;
  if (meta_.mode == LandscapeMode::rem) meta["lambda"] = meta_.lambda;
  if (meta_.mode == LandscapeMode::separable) {
    meta["f"] = {{"slope", meta_.separable.slope}, {"intercept", meta_.separable.intercept}};
    meta["sigma"] = meta_.separable.sigma;
    meta["symmetrize"] = meta_.symmetrized;
  }
  meta["seed"] = meta_.seed;
  j["meta"] = std::move(meta);
  return j.dump();
}

bool exit_rates_nondegenerate(const Landscape& ls) {
  const Graph& g = ls.graph();
  std::vector<double> scratch;
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    const auto inc = g.incident(v);
    scratch.clear();
    for (const Graph::Incidence& arc : inc) {
      scratch.push_back(ls.wells()[static_cast<std::size_t>(v)] - ls.barrier_from(v, arc.edge) +
                        ls.force_from(v, arc.edge));
    }
    const double log_q = lse(scratch);
    if (first) {
      lo = hi = log_q;
      first = false;
    } else {
      lo = std::min(lo, log_q);
      hi = std::max(hi, log_q);
    }
  }
  const double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
  return (hi - lo) > 1e-12 * scale;
}

}  // namespace lgcorr
