#pragma once

// Exact references for small instances: ground states and thermal averages by
// full enumeration, transverse-field expectation values by dense
// diagonalization, and a ground-state registry file for everything larger.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "annealab/lattice.hpp"

namespace annealab {

struct GroundStateResult {
  double energy = 0.0;
  std::int64_t degeneracy = 0;
  SpinConfiguration config;  // one minimizer
};

// exhaustive minimum over all 2^N configurations, gray-code incremental
GroundStateResult brute_force_ground_state(const SpinGlassInstance& inst,
                                           int max_spins = 30,
                                           double degeneracy_tol = 1e-9);

struct ThermalPoint {
  double beta = 0.0;
  double mean_energy = 0.0;
  double variance = 0.0;  // <E^2> - <E>^2
};

struct ExactClassicalSummary {
  double ground_energy = 0.0;
  std::int64_t ground_degeneracy = 0;
  std::vector<ThermalPoint> table;
};

ExactClassicalSummary exact_classical_thermal(const SpinGlassInstance& inst,
                                              const std::vector<double>& betas,
                                              int max_spins = 24);

struct QuantumPoint {
  double gamma = 0.0;
  double sigma_x = 0.0;        // site-averaged <sigma^x>
  double problem_energy = 0.0; // <H_P>
  double var_pd = 0.0;         // var(H_P - H_D)
};

struct ExactQuantumSummary {
  double beta = 0.0;
  std::vector<QuantumPoint> table;
};

// thermal expectations of H(G) = H_P - G sum_i sigma^x_i at inverse
// temperature beta, by dense diagonalization. var_pd takes H_D at the grid
// point's own field strength unless a fixed driver scale gamma0 >= 0 is given
// (an s-independent driver, as the general adaptive rule needs).
ExactQuantumSummary exact_quantum_expectations(const SpinGlassInstance& inst, double beta,
                                               const std::vector<double>& gammas,
                                               int max_spins = 12, double gamma0 = -1.0);

// instance id -> ground energy; text lines "gs <id> <E0>"
using GroundStateRegistry = std::map<std::string, double>;

GroundStateRegistry import_ground_state(const std::string& path);
void save_ground_state_registry(const GroundStateRegistry& reg, const std::string& path);
// inserting an id twice with a different energy is an error
void merge_ground_state(GroundStateRegistry& reg, const std::string& id, double energy);

}  // namespace annealab
