#pragma once

// Metropolis single-spin-flip annealing driven by a beta schedule, plus
// fixed-temperature sampling with batched error bars.

#include <cmath>
#include <cstdint>

#include "annealab/lattice.hpp"
#include "annealab/schedule.hpp"

namespace annealab {

struct CaRunParams {
  Schedule schedule;  // classical_beta, length == sweeps
  long sweeps = 0;
  std::uint64_t seed = 0;
  long measure_every = 0;  // sweeps between diagnostic samples, 0 = none
};

struct EnergyStatPoint {
  double beta = 0.0;
  double mean_energy = 0.0;
  double variance = 0.0;  // <E^2> - <E>^2
  double stderr_ = 0.0;
  long count = 0;
};
using EnergyStatistics = std::vector<EnergyStatPoint>;

inline bool metropolis_accept(rng_t& rng, double beta, double delta_e) {
  if (delta_e <= 0.0) return true;
  return uniform01(rng) < std::exp(-beta * delta_e);
}

// one Markov chain over a single instance; one sweep = N proposals at sites
// drawn uniformly with replacement (ergodic at every beta, including 0)
class CaChain {
 public:
  CaChain(const SpinGlassInstance& inst, std::uint64_t seed);

  void sweep(double beta);
  double tracked_energy() const { return energy_; }
  double recompute_energy() const;
  const SpinConfiguration& spins() const { return spins_; }
  rng_t& rng() { return rng_; }

 private:
  const SpinGlassInstance* inst_;
  Adjacency adj_;
  SpinConfiguration spins_;
  double energy_ = 0.0;
  rng_t rng_;
};

struct CaResult {
  SpinConfiguration config;
  double energy = 0.0;     // tracked incrementally across the whole run
  EnergyStatistics stats;  // one single-sample point per measure_every sweeps
};

CaResult ca_anneal(const SpinGlassInstance& inst, const CaRunParams& params);

// fixed-beta sampling; stderr from contiguous batch means
EnergyStatPoint ca_equilibrium_measure(const SpinGlassInstance& inst, double beta,
                                       long warmup_sweeps, long measure_sweeps,
                                       std::uint64_t seed, int batches = 16);

}  // namespace annealab
