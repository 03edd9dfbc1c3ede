#include <cmath>
#include <stdexcept>

#include "annealab/exact.hpp"
#include "annealab/profile.hpp"
#include "doctest.h"

using namespace annealab;

TEST_CASE("classical profile reproduces exact energy variances") {
  LatticeSpec spec{2, 2, 2, Boundary::open};
  std::vector<SpinGlassInstance> ens{generate_spin_glass(spec, 1)};
  std::vector<double> grid{0.5, 1.0, 2.0};
  ExactClassicalSummary ex = exact_classical_thermal(ens[0], grid);
  ProfileSampling sampling;
  sampling.warmup = 2000;
  sampling.measure = 30000;
  sampling.seed = 100;
  FluctuationProfile prof = measure_classical_profile(ens, grid, sampling);
  REQUIRE(prof.kind == ProfileKind::classical_beta);
  REQUIRE(prof.control == grid);
  CHECK(prof.ensemble_size == 1);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    double want = ex.table[k].variance;
    CHECK(std::abs(prof.denominator[k] - want) < 4.0 * prof.stderr_[k] + 0.03 * want);
  }
  // fluctuations die off toward low temperature
  CHECK(prof.denominator[0] > prof.denominator[1]);
  CHECK(prof.denominator[1] > prof.denominator[2]);
}

TEST_CASE("classical profile is deterministic and averages the ensemble") {
  LatticeSpec spec{2, 2, 2, Boundary::open};
  std::vector<SpinGlassInstance> ens{generate_spin_glass(spec, 1),
                                     generate_spin_glass(spec, 2)};
  std::vector<double> grid{0.5, 1.5};
  ProfileSampling sampling;
  sampling.warmup = 200;
  sampling.measure = 2000;
  sampling.seed = 7;
  FluctuationProfile a = measure_classical_profile(ens, grid, sampling);
  FluctuationProfile b = measure_classical_profile(ens, grid, sampling);
  CHECK(a.denominator == b.denominator);
  CHECK(a.stderr_ == b.stderr_);
  CHECK(a.ensemble_size == 2);
  for (double se : a.stderr_) CHECK(se >= 0.0);
}

TEST_CASE("quantum profile matches the free-spin closed form") {
  // periodic time links on a free spin measure exactly tanh(beta*gamma) in
  // expectation at any slice count, so the denominator has a closed form
  LatticeSpec one{1, 1, 1, Boundary::open};
  std::vector<SpinGlassInstance> ens{generate_ferromagnet(one)};
  std::vector<double> s_grid{0.0, 0.25, 0.5, 0.75};
  double beta = 1.0, gamma0 = 2.0;
  ProfileSampling sampling;
  sampling.warmup = 1000;
  sampling.measure = 20000;
  sampling.seed = 11;
  FluctuationProfile prof =
      measure_quantum_profile(ens, s_grid, beta, gamma0, 16, sampling);
  REQUIRE(prof.kind == ProfileKind::quantum_s);
  CHECK(prof.beta == beta);
  CHECK(prof.gamma0 == gamma0);
  for (std::size_t k = 0; k < s_grid.size(); ++k) {
    double sx = std::tanh(beta * gamma0 * (1.0 - s_grid[k]));
    double want = beta * gamma0 * std::sqrt(1.0 - sx * sx);
    CHECK(std::abs(prof.denominator[k] - want) < 5.0 * prof.stderr_[k] + 0.02 * want);
  }
  // the transverse field weakens along s, so the denominator grows
  CHECK(prof.denominator.front() < prof.denominator.back());
}

TEST_CASE("quantum profile validates its grid") {
  LatticeSpec one{1, 1, 1, Boundary::open};
  std::vector<SpinGlassInstance> ens{generate_ferromagnet(one)};
  ProfileSampling sampling;
  sampling.seed = 1;
  CHECK_THROWS_AS(measure_quantum_profile(ens, {0.0, 1.0}, 1.0, 2.0, 8, sampling),
                  std::invalid_argument);  // s = 1 means gamma = 0
  CHECK_THROWS_AS(measure_quantum_profile(ens, {0.5, 0.25}, 1.0, 2.0, 8, sampling),
                  std::invalid_argument);  // not increasing
  CHECK_THROWS_AS(measure_quantum_profile(ens, {0.0, 0.5}, 1.0, 0.0, 8, sampling),
                  std::invalid_argument);  // gamma0 must be positive
  CHECK_THROWS_AS(measure_quantum_profile({}, {0.0, 0.5}, 1.0, 2.0, 8, sampling),
                  std::invalid_argument);  // empty ensemble
}

TEST_CASE("oracle-driven quantum profile matches two-level algebra") {
  LatticeSpec one{1, 1, 1, Boundary::open};
  std::vector<SpinGlassInstance> ens{generate_ferromagnet(one, 0, 1.0)};
  double beta = 2.0, gamma0 = 1.0, h = 1.0;
  std::vector<double> s_grid{0.0, 0.5};
  FluctuationProfile prof = exact_quantum_profile(ens, s_grid, beta, gamma0);
  REQUIRE(prof.denominator.size() == 2);
  for (std::size_t k = 0; k < s_grid.size(); ++k) {
    double g = gamma0 * (1.0 - s_grid[k]);
    double omega = std::sqrt(h * h + g * g);
    double sx = g / omega * std::tanh(beta * omega);
    double sz = h / omega * std::tanh(beta * omega);
    // A = H_P - H_D has A^2 = (h^2 + gamma0^2) identically for one spin
    double var = (h * h + gamma0 * gamma0) - (gamma0 * sx - h * sz) * (gamma0 * sx - h * sz);
    CHECK(prof.denominator[k] == doctest::Approx(beta * std::sqrt(var)).epsilon(1e-10));
  }
}

TEST_CASE("transverse-field start selection picks the better residual") {
  LatticeSpec spec{2, 2, 2, Boundary::open};
  std::vector<SpinGlassInstance> ens{generate_spin_glass(spec, 1),
                                     generate_spin_glass(spec, 2)};
  GroundStateRegistry reg;
  for (const auto& inst : ens)
    merge_ground_state(reg, inst.id, brute_force_ground_state(inst).energy);
  Gamma0SearchParams params;
  params.beta = 8.0;
  params.m_slices = 8;
  params.sweeps = 500;
  params.runs_per_instance = 2;
  params.seed = 5;
  Gamma0Choice choice = optimize_gamma0(ens, reg, {2.0, 0.5}, params);
  REQUIRE(choice.table.size() == 2);
  CHECK(choice.table[0].gamma0 == 0.5);  // grid gets sorted
  CHECK(choice.table[1].gamma0 == 2.0);
  CHECK((choice.best == 0.5 || choice.best == 2.0));
  for (const auto& e : choice.table) CHECK(e.median_residual >= -1e-9);

  GroundStateRegistry incomplete;
  merge_ground_state(incomplete, ens[0].id, reg.at(ens[0].id));
  CHECK_THROWS_AS(optimize_gamma0(ens, incomplete, {1.0}, params), std::runtime_error);
}
