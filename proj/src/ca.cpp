#include "annealab/ca.hpp"

#include <stdexcept>

#include "annealab/stats.hpp"

namespace annealab {

CaChain::CaChain(const SpinGlassInstance& inst, std::uint64_t seed)
    : inst_(&inst), adj_(Adjacency::build(inst)), rng_(seed) {
  spins_ = random_configuration(inst.spin_count(), rng_);
  energy_ = energy(inst, spins_);
}

void CaChain::sweep(double beta) {
  const int n = adj_.n;
  for (int p = 0; p < n; ++p) {
    int i = static_cast<int>(uniform_below(rng_, n));
    double de = flip_delta(adj_, spins_, i);
    if (metropolis_accept(rng_, beta, de)) {
      spins_[i] = static_cast<std::int8_t>(-spins_[i]);
      energy_ += de;
    }
  }
}

double CaChain::recompute_energy() const { return energy(*inst_, spins_); }

CaResult ca_anneal(const SpinGlassInstance& inst, const CaRunParams& params) {
  if (params.sweeps < 1) throw std::invalid_argument("sweeps must be >= 1");
  if (params.schedule.kind != ScheduleKind::classical_beta)
    throw std::invalid_argument("ca_anneal needs a classical_beta schedule");
  params.schedule.validate();
  if (static_cast<long>(params.schedule.length()) != params.sweeps)
    throw std::invalid_argument("schedule length " +
                                std::to_string(params.schedule.length()) +
                                " != sweeps " + std::to_string(params.sweeps));
  if (params.measure_every < 0) throw std::invalid_argument("measure_every must be >= 0");

  CaChain chain(inst, params.seed);
  CaResult res;
  for (long k = 0; k < params.sweeps; ++k) {
    double beta = params.schedule.beta[k];
    chain.sweep(beta);
    if (params.measure_every > 0 && (k + 1) % params.measure_every == 0)
      res.stats.push_back({beta, chain.tracked_energy(), 0.0, 0.0, 1});
  }
  res.config = chain.spins();
  res.energy = chain.tracked_energy();
  return res;
}

EnergyStatPoint ca_equilibrium_measure(const SpinGlassInstance& inst, double beta,
                                       long warmup_sweeps, long measure_sweeps,
                                       std::uint64_t seed, int batches) {
  if (warmup_sweeps < 1) throw std::invalid_argument("warmup must be >= 1");
  if (measure_sweeps < 2) throw std::invalid_argument("measure must be >= 2");
  if (beta < 0.0) throw std::invalid_argument("beta must be >= 0");

  CaChain chain(inst, seed);
  for (long k = 0; k < warmup_sweeps; ++k) chain.sweep(beta);
  std::vector<double> samples;
  samples.reserve(measure_sweeps);
  for (long k = 0; k < measure_sweeps; ++k) {
    chain.sweep(beta);
    samples.push_back(chain.tracked_energy());
  }
  EnergyStatPoint pt;
  pt.beta = beta;
  pt.count = measure_sweeps;
  if (measure_sweeps >= 2L * batches) {
    BatchStats bs = batch_stats(samples, batches);
    pt.mean_energy = bs.mean;
    pt.variance = bs.variance;
    pt.stderr_ = bs.stderr_;
  } else {
    // too short to batch; fall back to the naive iid error bar
    pt.mean_energy = mean(samples);
    pt.variance = variance(samples);
    pt.stderr_ = std::sqrt(pt.variance / static_cast<double>(measure_sweeps));
  }
  return pt;
}

}  // namespace annealab
