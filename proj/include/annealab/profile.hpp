#pragma once

// Ensemble measurement of the fluctuation quantities that drive the adaptive
// schedules, and transverse-field starting-value selection.

#include <cstdint>
#include <vector>

#include "annealab/exact.hpp"
#include "annealab/lattice.hpp"
#include "annealab/schedule.hpp"
#include "annealab/sqa.hpp"

namespace annealab {

struct ProfileSampling {
  long warmup = 500;
  long measure = 2000;
  int batches = 16;
  std::uint64_t seed = 0;
};

// sigma(beta) = <E^2> - <E>^2 per grid point, averaged over the ensemble
FluctuationProfile measure_classical_profile(const std::vector<SpinGlassInstance>& instances,
                                             const std::vector<double>& beta_grid,
                                             const ProfileSampling& sampling);

// denominator beta*gamma0*sqrt(1 - <sx>^2) on an s grid in [0,1), with <sx>
// ensemble-averaged before the square root; gamma(s) = (1-s)*gamma0
FluctuationProfile measure_quantum_profile(const std::vector<SpinGlassInstance>& instances,
                                           const std::vector<double>& s_grid, double beta,
                                           double gamma0, int m_slices,
                                           const ProfileSampling& sampling,
                                           TimeBoundary boundary = TimeBoundary::periodic);

// general-form denominator beta*sqrt(var(H_P - H_D)) with the driver
// -gamma0 * sum sigma^x held fixed along the grid, from the dense oracle;
// only available for oracle-sized instances
FluctuationProfile exact_quantum_profile(const std::vector<SpinGlassInstance>& instances,
                                         const std::vector<double>& s_grid, double beta,
                                         double gamma0, int max_spins = 12);

struct Gamma0Entry {
  double gamma0 = 0.0;
  double median_residual = 0.0;
};

struct Gamma0Choice {
  double best = 0.0;
  std::vector<Gamma0Entry> table;
};

struct Gamma0SearchParams {
  double beta = 16.0;
  int m_slices = 64;
  TimeBoundary boundary = TimeBoundary::open;
  long sweeps = 1000;  // fixed budget per run
  int runs_per_instance = 1;
  std::uint64_t seed = 0;
};

// anneals linear gamma0 -> 0 schedules at a fixed budget over the ensemble;
// smallest median residual energy wins, ties toward smaller gamma0
Gamma0Choice optimize_gamma0(const std::vector<SpinGlassInstance>& instances,
                             const GroundStateRegistry& ground_energies,
                             std::vector<double> gamma0_grid,
                             const Gamma0SearchParams& params);

}  // namespace annealab
