#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <vector>

#include "annealab/exact.hpp"
#include "annealab/lattice.hpp"
#include "doctest.h"

using namespace annealab;

namespace {

// naive reference: recompute every configuration energy from scratch
std::vector<double> all_energies(const SpinGlassInstance& inst) {
  int n = inst.spin_count();
  std::vector<double> out;
  out.reserve(std::size_t(1) << n);
  SpinConfiguration s(n);
  for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
    for (int i = 0; i < n; ++i) s[i] = (mask >> i) & 1 ? -1 : 1;
    out.push_back(energy(inst, s));
  }
  return out;
}

}  // namespace

TEST_CASE("brute force ground state agrees with naive enumeration") {
  LatticeSpec spec{2, 2, 2, Boundary::open};
  for (std::uint64_t seed : {1, 2, 3}) {
    SpinGlassInstance inst = generate_spin_glass(spec, seed);
    if (seed == 3) inst.fields[2] = 0.4;
    GroundStateResult gs = brute_force_ground_state(inst);
    std::vector<double> es = all_energies(inst);
    double emin = es[0];
    for (double e : es) emin = std::min(emin, e);
    long long deg = 0;
    for (double e : es)
      if (e <= emin + 1e-9) ++deg;
    CHECK(gs.energy == doctest::Approx(emin).epsilon(1e-13));
    CHECK(gs.degeneracy == deg);
    CHECK(energy(inst, gs.config) == doctest::Approx(emin).epsilon(1e-13));
  }
}

TEST_CASE("zero-field ground states come in global-flip pairs") {
  LatticeSpec spec{2, 2, 2, Boundary::open};
  SpinGlassInstance inst = generate_spin_glass(spec, 1);
  GroundStateResult gs = brute_force_ground_state(inst);
  CHECK(gs.energy == doctest::Approx(-4.155367593497246).epsilon(1e-13));
  CHECK(gs.degeneracy == 2);
  CHECK(gs.degeneracy % 2 == 0);
}

TEST_CASE("ferromagnet golden ground states") {
  LatticeSpec spec{2, 2, 2, Boundary::open};
  GroundStateResult plain = brute_force_ground_state(generate_ferromagnet(spec));
  CHECK(plain.energy == doctest::Approx(-12.0));
  CHECK(plain.degeneracy == 2);
  GroundStateResult pinned =
      brute_force_ground_state(generate_ferromagnet(spec, 0, 0.5));
  CHECK(pinned.energy == doctest::Approx(-12.5));
  CHECK(pinned.degeneracy == 1);
  CHECK(pinned.config[0] == 1);
}

TEST_CASE("enumeration bound is enforced") {
  LatticeSpec spec{4, 4, 4, Boundary::open};
  SpinGlassInstance inst = generate_spin_glass(spec, 1);
  CHECK_THROWS_AS(brute_force_ground_state(inst), std::invalid_argument);
  CHECK_THROWS_AS(exact_classical_thermal(inst, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(exact_quantum_expectations(inst, 1.0, {1.0}), std::invalid_argument);
}

TEST_CASE("thermal table matches naive boltzmann sums") {
  LatticeSpec spec{2, 2, 2, Boundary::open};
  SpinGlassInstance inst = generate_spin_glass(spec, 2);
  std::vector<double> betas{0.0, 0.5, 1.0, 2.0};
  ExactClassicalSummary sum = exact_classical_thermal(inst, betas);
  std::vector<double> es = all_energies(inst);
  double e0 = es[0];
  for (double e : es) e0 = std::min(e0, e);
  CHECK(sum.ground_energy == doctest::Approx(e0).epsilon(1e-13));
  for (std::size_t k = 0; k < betas.size(); ++k) {
    double z = 0.0, m1 = 0.0, m2 = 0.0;
    for (double e : es) {
      double w = std::exp(-betas[k] * (e - e0));
      z += w;
      m1 += w * e;
      m2 += w * e * e;
    }
    m1 /= z;
    m2 /= z;
    CHECK(sum.table[k].mean_energy == doctest::Approx(m1).epsilon(1e-11));
    CHECK(sum.table[k].variance == doctest::Approx(m2 - m1 * m1).epsilon(1e-10));
  }
  // beta = 0 over zero fields: every bond term averages to zero
  CHECK(sum.table[0].mean_energy == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("energy response identity d<E>/dbeta = -var") {
  LatticeSpec spec{2, 2, 2, Boundary::open};
  SpinGlassInstance inst = generate_spin_glass(spec, 1);
  double h = 1e-4;
  for (double beta : {0.5, 1.0, 2.0}) {
    ExactClassicalSummary sum =
        exact_classical_thermal(inst, {beta - h, beta, beta + h});
    double deriv = (sum.table[2].mean_energy - sum.table[0].mean_energy) / (2.0 * h);
    CHECK(deriv == doctest::Approx(-sum.table[1].variance).epsilon(1e-6));
  }
}

TEST_CASE("single spin transverse-field closed forms") {
  LatticeSpec one{1, 1, 1, Boundary::open};
  SpinGlassInstance free_spin = generate_ferromagnet(one);
  ExactQuantumSummary qs = exact_quantum_expectations(free_spin, 2.0, {0.5, 1.0, 3.0});
  for (std::size_t k = 0; k < qs.table.size(); ++k)
    CHECK(qs.table[k].sigma_x ==
          doctest::Approx(std::tanh(2.0 * qs.table[k].gamma)).epsilon(1e-12));

  SpinGlassInstance pinned = generate_ferromagnet(one, 0, 1.0);
  ExactQuantumSummary qp = exact_quantum_expectations(pinned, 2.0, {1.0});
  double omega = std::sqrt(2.0);
  CHECK(qp.table[0].sigma_x ==
        doctest::Approx(std::tanh(2.0 * omega) / omega).epsilon(1e-12));
  // <H_P> = <-sigma_z> = -(h/omega) tanh(beta*omega) at gamma = h = 1
  CHECK(qp.table[0].problem_energy ==
        doctest::Approx(-std::tanh(2.0 * omega) / omega).epsilon(1e-12));
}

TEST_CASE("quantum expectations reduce to classical at gamma 0") {
  LatticeSpec spec{2, 2, 1, Boundary::open};
  SpinGlassInstance inst = generate_spin_glass(spec, 4);
  inst.fields[1] = 0.7;  // break degeneracies
  ExactQuantumSummary q = exact_quantum_expectations(inst, 1.5, {0.0});
  ExactClassicalSummary c = exact_classical_thermal(inst, {1.5});
  CHECK(q.table[0].problem_energy ==
        doctest::Approx(c.table[0].mean_energy).epsilon(1e-10));
  CHECK(q.table[0].sigma_x == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("fixed-driver variance uses the supplied scale") {
  LatticeSpec one{1, 1, 1, Boundary::open};
  SpinGlassInstance pinned = generate_ferromagnet(one, 0, 1.0);
  // var(H_P - H_D) with H_D = -g0 sigma_x scales as g0 enters the operator
  ExactQuantumSummary at_own = exact_quantum_expectations(pinned, 2.0, {1.0});
  ExactQuantumSummary at_fixed = exact_quantum_expectations(pinned, 2.0, {1.0}, 12, 1.0);
  CHECK(at_own.table[0].var_pd == doctest::Approx(at_fixed.table[0].var_pd));
  // A = sigma_x - sigma_z has A^2 = 2, and <sigma_x> = <sigma_z> at gamma = h
  CHECK(at_own.table[0].var_pd == doctest::Approx(2.0).epsilon(1e-10));
  ExactQuantumSummary bigger = exact_quantum_expectations(pinned, 2.0, {1.0}, 12, 3.0);
  CHECK(bigger.table[0].var_pd > at_own.table[0].var_pd);
}

TEST_CASE("golden quantum table for the 2x2x2 seed 1 instance") {
  LatticeSpec spec{2, 2, 2, Boundary::open};
  SpinGlassInstance inst = generate_spin_glass(spec, 1);
  ExactQuantumSummary q = exact_quantum_expectations(inst, 2.0, {0.5, 1.0, 2.0});
  CHECK(q.table[0].sigma_x == doctest::Approx(0.51876504874893803).epsilon(1e-12));
  CHECK(q.table[1].sigma_x == doctest::Approx(0.80342619378120894).epsilon(1e-12));
  CHECK(q.table[2].sigma_x == doctest::Approx(0.96409513796818069).epsilon(1e-12));
  // stronger driving increases transverse alignment
  CHECK(q.table[0].sigma_x < q.table[1].sigma_x);
  CHECK(q.table[1].sigma_x < q.table[2].sigma_x);
}

TEST_CASE("ground state registry round trip and conflicts") {
  GroundStateRegistry reg;
  merge_ground_state(reg, "a", -1.5);
  merge_ground_state(reg, "b", -2.25);
  merge_ground_state(reg, "a", -1.5);  // identical value is fine
  CHECK_THROWS_AS(merge_ground_state(reg, "a", -1.6), std::runtime_error);
  // roundoff-scale disagreement between two evaluations of the same state
  // merges to the lower energy instead of erroring
  merge_ground_state(reg, "a", -1.5 - 1e-12);
  CHECK(reg.at("a") == -1.5 - 1e-12);
  merge_ground_state(reg, "a", -1.5);
  CHECK(reg.at("a") == -1.5 - 1e-12);
  std::string path = "/tmp/annealab_test_registry.txt";
  save_ground_state_registry(reg, path);
  GroundStateRegistry back = import_ground_state(path);
  CHECK(back.size() == 2);
  CHECK(back.at("a") == -1.5 - 1e-12);
  CHECK(back.at("b") == -2.25);
  std::remove(path.c_str());
  CHECK_THROWS_AS(import_ground_state("/tmp/annealab_no_such_file.txt"),
                  std::runtime_error);
}
