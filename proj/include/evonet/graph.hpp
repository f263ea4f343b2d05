// evolving random graph state: adjacency under the stationary product law
// plus in-place vertex updates (drop all incident edges, resample each pair).
#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "evonet/params.hpp"
#include "evonet/rng.hpp"

namespace evonet {

class graph_state {
 public:
  explicit graph_state(const model_params& params);

  // draw the whole graph from the stationary law: every unordered pair {i,j}
  // independently present with probability connection_prob(i,j)
  void init_stationary(rng_stream& rng);

  struct update_result {
    std::vector<std::uint32_t> removed;  // former neighbours no longer linked
    std::vector<std::uint32_t> added;    // fresh neighbours not linked before
  };

  // vertex update at v: discard every edge at v, then re-sample each pair
  // {v,j} independently. returns the symmetric difference so callers can
  // patch degree-derived bookkeeping incrementally.
  update_result apply_vertex_update(std::uint32_t v, rng_stream& rng);

  const std::vector<std::uint32_t>& neighbors(std::uint32_t v) const {
    return adj_[v];
  }
  std::uint64_t degree(std::uint32_t v) const { return adj_[v].size(); }
  std::uint64_t edge_count() const { return edges_; }
  std::uint64_t vertex_count() const { return params_.n; }
  const model_params& params() const { return params_; }

  // CSV edge list, header "i,j", one row per edge with i < j, 1-based
  void write_edges_csv(std::ostream& out) const;

  // internal consistency scan (symmetry, sortedness, edge count); throws on
  // violation. test hook, linear in the edge set.
  void check_invariants() const;

 private:
  // append every j in [lo,hi]\{v} that an independent Bernoulli(p(v,j)) coin
  // turns up. p(v,.) is nonincreasing, so doubling blocks with the left
  // endpoint as envelope give O(E[deg] + log n) expected work.
  void sample_range(std::uint32_t v, std::uint64_t lo, std::uint64_t hi,
                    rng_stream& rng, std::vector<std::uint32_t>& out) const;

  model_params params_;
  std::vector<std::vector<std::uint32_t>> adj_;  // index 0 unused
  std::uint64_t edges_ = 0;
};

} // namespace evonet
