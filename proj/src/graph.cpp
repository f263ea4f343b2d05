#include "evonet/graph.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace evonet {

graph_state::graph_state(const model_params& params) : params_(params) {
  params_.validate();
  adj_.assign(params_.n + 1, {});
}

void graph_state::sample_range(std::uint32_t v, std::uint64_t lo,
                               std::uint64_t hi, rng_stream& rng,
                               std::vector<std::uint32_t>& out) const {
  std::uint64_t j = lo;
  while (j <= hi) {
    if (j == v) {
      ++j;
      continue;
    }
    const std::uint64_t block_end = std::min(hi, 2 * j);
    const double pbar = connection_prob(params_, v, j);
    std::uint64_t pos = j;
    while (pos <= block_end) {
      const std::uint64_t skip = rng.geometric_skips(pbar);
      if (skip > block_end - pos) break;
      pos += skip;
      if (pos != v) {
        const double p = connection_prob(params_, v, pos);
        if (p >= pbar || rng.uniform() * pbar < p)
          out.push_back(static_cast<std::uint32_t>(pos));
      }
      ++pos;
    }
    j = block_end + 1;
  }
}

void graph_state::init_stationary(rng_stream& rng) {
  adj_.assign(params_.n + 1, {});
  edges_ = 0;
  std::vector<std::uint32_t> row;
  for (std::uint64_t i = 1; i < params_.n; ++i) {
    row.clear();
    sample_range(static_cast<std::uint32_t>(i), i + 1, params_.n, rng, row);
    for (std::uint32_t j : row) {
      adj_[i].push_back(j);
      adj_[j].push_back(static_cast<std::uint32_t>(i));
      ++edges_;
    }
  }
  // rows fill in increasing order on both sides, so they are already sorted
}

graph_state::update_result graph_state::apply_vertex_update(std::uint32_t v,
                                                            rng_stream& rng) {
  if (v < 1 || v > params_.n)
    throw std::out_of_range("apply_vertex_update: vertex out of range");
  std::vector<std::uint32_t> fresh;
  sample_range(v, 1, params_.n, rng, fresh);

  update_result res;
  const std::vector<std::uint32_t>& old = adj_[v];
  std::set_difference(old.begin(), old.end(), fresh.begin(), fresh.end(),
                      std::back_inserter(res.removed));
  std::set_difference(fresh.begin(), fresh.end(), old.begin(), old.end(),
                      std::back_inserter(res.added));

  for (std::uint32_t j : res.removed) {
    auto& row = adj_[j];
    row.erase(std::lower_bound(row.begin(), row.end(), v));
  }
  for (std::uint32_t j : res.added) {
    auto& row = adj_[j];
    row.insert(std::lower_bound(row.begin(), row.end(), v), v);
  }
  edges_ += res.added.size();
  edges_ -= res.removed.size();
  adj_[v] = std::move(fresh);
  return res;
}

void graph_state::write_edges_csv(std::ostream& out) const {
  out << "i,j\n";
  for (std::uint64_t i = 1; i <= params_.n; ++i)
    for (std::uint32_t j : adj_[i])
      if (j > i) out << i << ',' << j << '\n';
}

void graph_state::check_invariants() const {
  std::uint64_t twice_edges = 0;
  for (std::uint64_t i = 1; i <= params_.n; ++i) {
    const auto& row = adj_[i];
    if (!std::is_sorted(row.begin(), row.end()))
      throw std::logic_error("graph invariant: row not sorted");
    if (std::adjacent_find(row.begin(), row.end()) != row.end())
      throw std::logic_error("graph invariant: duplicate neighbour");
    for (std::uint32_t j : row) {
      if (j < 1 || j > params_.n || j == i)
        throw std::logic_error("graph invariant: bad neighbour index");
      const auto& other = adj_[j];
      if (!std::binary_search(other.begin(), other.end(),
                              static_cast<std::uint32_t>(i)))
        throw std::logic_error("graph invariant: asymmetric edge");
    }
    twice_edges += row.size();
  }
  if (twice_edges != 2 * edges_)
    throw std::logic_error("graph invariant: edge count mismatch");
}

} // namespace evonet
