// event-driven continuous-time simulation of the SIS contact process on the
// evolving graph. the chain is simulated exactly: one exponential clock for
// the total rate, then a channel draw (vertex update / recovery /
// transmission) proportional to the channel rates.
#pragma once

#include <cstdint>
#include <vector>

#include "evonet/graph.hpp"
#include "evonet/params.hpp"
#include "evonet/rng.hpp"

namespace evonet {

// -------------------------------------------------------------------------
// small utilities shared with the tests
// -------------------------------------------------------------------------

// Fenwick (binary indexed) tree over int64 weights, 1-based indices.
class fenwick_tree {
 public:
  explicit fenwick_tree(std::size_t n);
  void add(std::size_t i, std::int64_t delta);
  std::int64_t prefix(std::size_t i) const;  // sum over [1..i]
  std::int64_t total() const { return total_; }
  // smallest i with prefix(i) > r; requires 0 <= r < total()
  std::size_t find(std::int64_t r) const;
  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  std::size_t top_;  // highest power of two <= n
  std::int64_t total_ = 0;
  std::vector<std::int64_t> tree_;
};

// Walker alias table for repeated draws from a fixed discrete distribution.
class discrete_sampler {
 public:
  explicit discrete_sampler(const std::vector<double>& weights);
  // index into the weight vector; two rng draws per sample
  std::size_t sample(rng_stream& rng) const;
  double total() const { return total_; }

 private:
  std::vector<double> threshold_;
  std::vector<std::uint32_t> alias_;
  double total_ = 0.0;
};

// -------------------------------------------------------------------------
// simulation driver
// -------------------------------------------------------------------------

enum class start_mode { all_infected, single_seed, vertex_set };

struct sim_config {
  double t_max = 10.0;
  // when false, vertex updates keep running after extinction up to t_max so a
  // final graph snapshot reflects the full elapsed time
  bool stop_on_extinction = true;
  double record_dt = 0.0;  // density sampling step, > 0; grid is dt, 2dt, ...
  start_mode start = start_mode::all_infected;
  std::uint32_t seed_vertex = 1;
  std::vector<std::uint32_t> initial_set;
};

struct trajectory {
  std::vector<double> t;
  std::vector<std::uint64_t> infected;
  std::uint64_t n = 0;  // vertex count, for density conversion downstream
  bool extinct = false;
  double extinction_time = -1.0;  // set when extinct
  std::uint64_t final_infected = 0;
  std::uint64_t events = 0;
};

class sis_engine {
 public:
  // draws the initial graph from the stationary law using `rng`; the same
  // stream then drives the event loop, so a (master seed, stream index) pair
  // pins the whole replica
  sis_engine(const model_params& params, rng_stream& rng);

  // each call resets the infection state from cfg and advances the graph
  // further in time (the graph law is stationary, so this is harmless)
  trajectory run(const sim_config& cfg);

  const graph_state& graph() const { return graph_; }
  std::uint64_t infected_count() const { return infected_.size(); }
  std::int64_t infected_degree_sum() const { return weight_.total(); }

  // test hook: recompute every incrementally maintained quantity from the
  // graph + infection flags and throw std::logic_error on any mismatch.
  // cheap enough to call between runs, far too slow for the event loop.
  void check_bookkeeping() const;

 private:
  void infect(std::uint32_t v);
  void recover_at(std::size_t list_pos);
  void clear_infections();

  model_params params_;
  rng_stream& rng_;
  graph_state graph_;
  discrete_sampler update_sampler_;  // vertex choice for the update channel
  double update_rate_total_;
  fenwick_tree weight_;                   // deg(i) for infected i, else 0
  std::vector<std::uint8_t> is_infected_; // 1-based flags
  std::vector<std::uint32_t> infected_;   // unordered list of infected
  std::vector<std::uint32_t> where_;      // position of vertex in infected_
};

} // namespace evonet
