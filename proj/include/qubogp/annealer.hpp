// annealer.hpp - digital-annealer-style simulated annealing for QUBO models
//
// Every sweep evaluates the Metropolis test for all single-bit flips at once,
// then flips one accepted bit chosen uniformly. When no flip is accepted the
// dynamic offset grows by offset_increment and is subtracted from every
// delta on the next sweep, so the chain keeps moving out of local minima.
#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "qubogp/qubo.hpp"
#include "qubogp/rng.hpp"

namespace qubogp {

enum class Schedule { geometric, linear };
enum class InitialState { random, balanced };

struct AnnealConfig {
  std::size_t sweeps = 10000;
  std::optional<double> temp_initial;  // max |delta| of the initial state when unset
  double temp_final = 0.1;
  Schedule schedule = Schedule::geometric;
  std::size_t replicas = 1;
  std::uint64_t seed = 0;
  std::optional<double> time_limit;        // seconds per solve
  std::optional<double> offset_increment;  // temp_final / 10 when unset
  InitialState init = InitialState::random;
  std::size_t trace_interval = 0;  // record the current energy every N sweeps; 0 = off
  std::size_t threads = 0;         // 0 = hardware concurrency

  void validate() const {
    if (sweeps < 1) throw std::invalid_argument("sweeps must be at least 1");
    if (replicas < 1) throw std::invalid_argument("replicas must be at least 1");
    if (!(temp_final > 0.0)) throw std::invalid_argument("temp_final must be positive");
    if (temp_initial && !(*temp_initial >= temp_final)) {
      throw std::invalid_argument("temp_initial must be at least temp_final");
    }
    if (offset_increment && !(*offset_increment >= 0.0)) {
      throw std::invalid_argument("offset_increment must be non-negative");
    }
    if (time_limit && !(*time_limit > 0.0)) throw std::invalid_argument("time_limit must be positive");
  }
};

struct SolveResult {
  Assignment best_bits;
  double best_energy = 0.0;
  std::size_t sweeps_done = 0;
  std::size_t flips = 0;
  double wall_time = 0.0;
  std::size_t replica_id = 0;
  std::uint64_t seed = 0;
  std::vector<double> energy_trace;
};

// Symmetric sparse view of the quadratic terms, shared read-only by replicas.
class Couplings {
 public:
  explicit Couplings(const QuboModel& model) {
    const std::size_t n = model.num_vars();
    offsets_.assign(n + 1, 0);
    for (const QuadTerm& t : model.quadratic()) {
      ++offsets_[t.i + 1];
      ++offsets_[t.j + 1];
    }
    std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
    cols_.resize(offsets_[n]);
    vals_.resize(offsets_[n]);
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (const QuadTerm& t : model.quadratic()) {
      cols_[fill[t.i]] = t.j;
      vals_[fill[t.i]++] = t.coeff;
      cols_[fill[t.j]] = t.i;
      vals_[fill[t.j]++] = t.coeff;
    }
  }

  std::size_t num_vars() const { return offsets_.size() - 1; }
  std::span<const var_t> neighbors(var_t i) const { return {cols_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]}; }
  std::span<const double> weights(var_t i) const { return {vals_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]}; }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<var_t> cols_;
  std::vector<double> vals_;
};

// local_field[j] = linear_j + sum_{l != j} q_jl a_l
inline std::vector<double> compute_local_fields(const QuboModel& model, const Couplings& c,
                                                std::span<const std::uint8_t> a) {
  std::vector<double> h(model.linear().begin(), model.linear().end());
  for (var_t j = 0; j < h.size(); ++j) {
    const auto nb = c.neighbors(j);
    const auto w = c.weights(j);
    for (std::size_t t = 0; t < nb.size(); ++t) {
      if (a[nb[t]]) h[j] += w[t];
    }
  }
  return h;
}

// energy(a with bit i flipped) - energy(a), in O(1) from the local field.
inline double delta_energy(std::span<const std::uint8_t> a, std::span<const double> local_field, var_t i) {
  if (i >= a.size() || i >= local_field.size()) throw std::out_of_range("variable index out of range");
  return a[i] ? -local_field[i] : local_field[i];
}

// One annealing chain: bits, cached local fields and incrementally tracked energy.
class AnnealState {
 public:
  AnnealState(const QuboModel& model, const Couplings& couplings, Assignment bits)
      : couplings_(&couplings), bits_(std::move(bits)) {
    if (bits_.size() != model.num_vars()) throw std::invalid_argument("assignment length does not match model");
    field_ = compute_local_fields(model, couplings, bits_);
    energy_ = qubogp::energy(model, bits_);
  }

  std::span<const std::uint8_t> bits() const { return bits_; }
  std::span<const double> local_field() const { return field_; }
  double energy() const { return energy_; }
  std::size_t size() const { return bits_.size(); }

  double delta(var_t i) const { return bits_[i] ? -field_[i] : field_[i]; }

  // O(degree of i in the coupling graph).
  void flip(var_t i) {
    if (i >= bits_.size()) throw std::out_of_range("variable index out of range");
    const double d = delta(i);
    const double sign = bits_[i] ? -1.0 : 1.0;
    bits_[i] ^= 1U;
    energy_ += d;
    const auto nb = couplings_->neighbors(i);
    const auto w = couplings_->weights(i);
    for (std::size_t t = 0; t < nb.size(); ++t) field_[nb[t]] += sign * w[t];
  }

 private:
  const Couplings* couplings_;
  Assignment bits_;
  std::vector<double> field_;
  double energy_ = 0.0;
};

struct SweepResult {
  bool accepted = false;
  var_t flipped = 0;
  double delta = 0.0;
  std::size_t acceptors = 0;
};

// Parallel-trial Metropolis sweep with dynamic offset. `offset` is carried
// between sweeps: reset to 0 after a flip, raised by offset_increment after a
// sweep with no accepted flip.
inline SweepResult sweep(AnnealState& state, double temperature, Rng& rng, double& offset, double offset_increment,
                         std::vector<var_t>& scratch) {
  scratch.clear();
  const std::size_t n = state.size();
  for (var_t i = 0; i < n; ++i) {
    const double d = state.delta(i) - offset;
    if (d <= 0.0 || (temperature > 0.0 && rng.uniform() < std::exp(-d / temperature))) scratch.push_back(i);
  }
  SweepResult r;
  r.acceptors = scratch.size();
  if (scratch.empty()) {
    offset += offset_increment;
    return r;
  }
  r.flipped = scratch[scratch.size() == 1 ? 0 : rng.below(scratch.size())];
  r.delta = state.delta(r.flipped);
  r.accepted = true;
  state.flip(r.flipped);
  offset = 0.0;
  return r;
}

inline double schedule_temperature(Schedule s, double t0, double tf, std::size_t step, std::size_t total) {
  const double frac = static_cast<double>(step) / static_cast<double>(total);
  if (s == Schedule::linear) return t0 + (tf - t0) * frac;
  return t0 * std::pow(tf / t0, frac);
}

// Random bits, or for partition models a uniformly random balanced partition
// with slack bits set to the residual.
inline Assignment initial_assignment(const QuboModel& model, InitialState init, Rng& rng) {
  Assignment a(model.num_vars(), 0);
  if (init == InitialState::random || !model.meta()) {
    for (auto& b : a) b = rng.bit();
    return a;
  }
  const PartitionMeta& meta = *model.meta();
  std::vector<vertex_t> order(meta.n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  Partition p{std::vector<std::uint32_t>(meta.n, 0), meta.k};
  if (meta.k == 2) {
    const BalanceBounds b = balance_bounds(meta.n, 2, meta.epsilon);
    const std::size_t ones = std::clamp((meta.n + 1) / 2, b.lower, b.upper);
    for (std::size_t i = 0; i < ones; ++i) p.labels[order[i]] = 1;
  } else {
    for (std::size_t i = 0; i < meta.n; ++i) p.labels[order[i]] = static_cast<std::uint32_t>(i % meta.k);
  }
  return encode_partition(model, p);
}

namespace detail {
using Clock = std::chrono::steady_clock;
inline constexpr std::size_t kTimeCheckInterval = 1024;
}  // namespace detail

// Runs the chain of replica `replica`. Its RNG stream depends only on
// (cfg.seed, replica), so results do not depend on how many other replicas run.
inline SolveResult run_replica(const QuboModel& model, const Couplings& couplings, const AnnealConfig& cfg,
                               std::size_t replica, std::optional<detail::Clock::time_point> deadline = std::nullopt) {
  const auto start = detail::Clock::now();
  SolveResult out;
  out.replica_id = replica;
  out.seed = derive_seed(cfg.seed, replica);
  Rng rng(out.seed);

  AnnealState state(model, couplings, initial_assignment(model, cfg.init, rng));
  double t0 = 0.0;
  if (cfg.temp_initial) {
    t0 = *cfg.temp_initial;
  } else {
    for (var_t i = 0; i < state.size(); ++i) t0 = std::max(t0, std::abs(state.delta(i)));
  }
  t0 = std::max(t0, cfg.temp_final);
  const double tf = cfg.temp_final;
  const double increment = cfg.offset_increment.value_or(tf / 10.0);

  out.best_bits.assign(state.bits().begin(), state.bits().end());
  double best = state.energy();
  double offset = 0.0;
  std::vector<var_t> scratch;
  scratch.reserve(state.size());

  std::size_t s = 0;
  for (; s < cfg.sweeps; ++s) {
    if (deadline && s % detail::kTimeCheckInterval == 0 && s > 0 && detail::Clock::now() >= *deadline) break;
    const double temp = schedule_temperature(cfg.schedule, t0, tf, s, cfg.sweeps);
    const SweepResult r = sweep(state, temp, rng, offset, increment, scratch);
    if (r.accepted) {
      ++out.flips;
      if (state.energy() < best) {
        best = state.energy();
        std::copy(state.bits().begin(), state.bits().end(), out.best_bits.begin());
      }
    }
    if (cfg.trace_interval && s % cfg.trace_interval == 0) out.energy_trace.push_back(state.energy());
  }
  out.sweeps_done = s;
  out.best_energy = qubogp::energy(model, out.best_bits);
  out.wall_time = std::chrono::duration<double>(detail::Clock::now() - start).count();
  return out;
}

inline SolveResult solve(const QuboModel& model, const Couplings& couplings, const AnnealConfig& cfg) {
  cfg.validate();
  const auto start = detail::Clock::now();
  if (model.num_vars() == 0) {
    SolveResult r;
    r.best_energy = model.constant();
    r.seed = derive_seed(cfg.seed, 0);
    return r;
  }
  std::optional<detail::Clock::time_point> deadline;
  if (cfg.time_limit) {
    deadline = start + std::chrono::duration_cast<detail::Clock::duration>(std::chrono::duration<double>(*cfg.time_limit));
  }

  std::vector<SolveResult> results(cfg.replicas);
  std::size_t workers = cfg.threads ? cfg.threads : std::max(1U, std::thread::hardware_concurrency());
  workers = std::min(workers, cfg.replicas);
  if (workers <= 1) {
    for (std::size_t r = 0; r < cfg.replicas; ++r) results[r] = run_replica(model, couplings, cfg, r, deadline);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t r = next++; r < cfg.replicas; r = next++) {
          results[r] = run_replica(model, couplings, cfg, r, deadline);
        }
      });
    }
  }

  std::size_t best = 0;
  for (std::size_t r = 1; r < results.size(); ++r) {
    if (results[r].best_energy < results[best].best_energy) best = r;
  }
  SolveResult out = std::move(results[best]);
  out.wall_time = std::chrono::duration<double>(detail::Clock::now() - start).count();
  return out;
}

inline SolveResult solve(const QuboModel& model, const AnnealConfig& cfg) {
  const Couplings couplings(model);
  return solve(model, couplings, cfg);
}

}  // namespace qubogp
