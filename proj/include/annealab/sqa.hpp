#pragma once

// Discrete-time path-integral Monte Carlo for the transverse-field Ising
// model: M coupled replicas of the classical system, updated by
// Swendsen-Wang cluster moves along the imaginary-time direction only.

#include <cstdint>
#include <vector>

#include "annealab/lattice.hpp"
#include "annealab/schedule.hpp"

namespace annealab {

enum class TimeBoundary { open, periodic };

struct PimcParams {
  int m_slices = 1024;
  double beta = 1.0;
  TimeBoundary time_boundary = TimeBoundary::open;
  Schedule schedule;  // quantum_gamma or hybrid; length == sweeps; ends at gamma 0
  long sweeps = 0;
  std::uint64_t seed = 0;
  long measure_every = 0;             // sweeps between diagnostics, 0 = none
  bool random_slice_readout = false;  // default readout is the best slice
};

// inter-slice coupling K = -(1/2) ln tanh(tau*gamma), > 0 and divergent as
// gamma -> 0; callers handle gamma = 0 as frozen whole-line clusters
double time_coupling(double tau, double gamma);

struct PathConfiguration {
  int n = 0;  // sites
  int m = 0;  // slices
  std::vector<std::int8_t> spins;  // site-major: spins[site*m + slice]

  std::int8_t& at(int site, int slice) { return spins[site * m + slice]; }
  std::int8_t at(int site, int slice) const { return spins[site * m + slice]; }
};

// tau * sum_k E_classical(slice k): the spatial part of the effective action
double path_spatial_action(const SpinGlassInstance& inst, const PathConfiguration& path,
                           double tau);
// -K * sum over time links of s_i^k s_i^{k+1}
double path_time_action(const PathConfiguration& path, double k_coupling,
                        TimeBoundary boundary);
double path_action(const SpinGlassInstance& inst, const PathConfiguration& path,
                   double tau, double k_coupling, TimeBoundary boundary);

// one PIMC chain; exposed so tests can drive it and audit the bookkeeping
class PimcChain {
 public:
  PimcChain(const SpinGlassInstance& inst, int m_slices, TimeBoundary boundary,
            std::uint64_t seed);

  // must be called before sweeping; tau = beta/m
  void set_controls(double beta, double gamma);
  // n site-line cluster moves, sites in sequential order
  void sweep();

  int sites() const { return path_.n; }
  int slices() const { return path_.m; }
  double gamma() const { return gamma_; }
  TimeBoundary boundary() const { return boundary_; }
  const PathConfiguration& path() const { return path_; }

  // time-link alignment estimator of the per-spin transverse magnetization;
  // averages tanh(tau*gamma)^(s s') over the m (periodic) or m-1 (open) links
  double sigma_x_estimate() const;

  double tracked_slice_energy(int k) const { return slice_energy_[k]; }
  double recompute_slice_energy(int k) const;
  double tracked_time_link_sum() const { return time_link_sum_; }
  double recompute_time_link_sum() const;
  int best_slice() const;
  SpinConfiguration slice_config(int k) const;
  rng_t& rng() { return rng_; }

 private:
  void line_move(int site);
  // propose with probability 1/2, then Metropolis on the spatial action;
  // the slice range is inclusive and may wrap under periodic boundaries
  void maybe_flip_segment(int site, int from, int to);
  double flip_slice_delta(int site, int slice) const;

  const SpinGlassInstance* inst_;
  Adjacency adj_;
  TimeBoundary boundary_;
  PathConfiguration path_;
  std::vector<double> slice_energy_;
  double time_link_sum_ = 0.0;
  double beta_ = 0.0, gamma_ = -1.0, tau_ = 0.0;
  double tanh_tg_ = 0.0;  // tanh(tau*gamma); bond probability is 1 - this
  std::vector<int> cuts_;         // scratch: links where the line is severed
  std::vector<double> seg_delta_;  // scratch: per-slice flip energies
  rng_t rng_;
};

struct SqaDiagnostic {
  long sweep = 0;
  double beta = 0.0;
  double gamma = 0.0;
  double best_slice_energy = 0.0;
  double sigma_x = 0.0;
};

struct SqaResult {
  SpinConfiguration config;  // readout slice
  double energy = 0.0;       // its tracked energy
  std::vector<SqaDiagnostic> diagnostics;
};

SqaResult sqa_anneal(const SpinGlassInstance& inst, const PimcParams& params);

struct StiffnessPoint {
  double gamma = 0.0;
  double sigma_x = 0.0;
  double stderr_ = 0.0;
  double c_q = 0.0;  // beta*gamma*(1 - sigma_x^2)
  long count = 0;
};

// fixed-(beta, gamma) sampling; periodic time boundary by default because
// that is the ensemble the diagonalization oracle computes
StiffnessPoint sqa_equilibrium_measure(const SpinGlassInstance& inst, double beta,
                                       double gamma, int m_slices, long warmup_sweeps,
                                       long measure_sweeps, std::uint64_t seed,
                                       TimeBoundary boundary = TimeBoundary::periodic,
                                       int batches = 16);

struct TrotterScanRow {
  int m_slices = 0;
  double sigma_x = 0.0;
  double stderr_ = 0.0;
  double deviation = 0.0;  // |sigma_x - exact continuum value|
};

// measures sigma_x at each slice count and compares against the
// diagonalization oracle; instance must be within the oracle bound
std::vector<TrotterScanRow> trotter_convergence_scan(
    const SpinGlassInstance& inst, double beta, double gamma,
    const std::vector<int>& m_list, long warmup_sweeps, long measure_sweeps,
    std::uint64_t seed, TimeBoundary boundary = TimeBoundary::periodic);

}  // namespace annealab
