#pragma once

// Ising spin glass instances on 3d simple cubic lattices: generation,
// energy evaluation, and a plain-text file format.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "annealab/rng.hpp"

namespace annealab {

enum class Boundary { periodic, open };

struct LatticeSpec {
  int lx = 0, ly = 0, lz = 0;
  Boundary boundary = Boundary::open;

  int site_count() const { return lx * ly * lz; }
  // row-major: x fastest, z slowest
  int site_index(int x, int y, int z) const { return x + lx * (y + ly * z); }
  void validate() const;  // throws std::invalid_argument
};

struct Bond {
  int i = 0;
  int j = 0;  // i < j always
  double coupling = 0.0;
};

// entries are +1 or -1
using SpinConfiguration = std::vector<std::int8_t>;

struct SpinGlassInstance {
  LatticeSpec lattice;
  std::vector<Bond> bonds;
  std::vector<double> fields;
  std::string id;
  std::uint64_t seed = 0;

  int spin_count() const { return lattice.site_count(); }
};

// nearest-neighbor pairs (i<j) in generation order: site index ascending,
// +x then +y then +z from each site
std::vector<std::pair<int, int>> lattice_edges(const LatticeSpec& spec);

// couplings i.i.d. uniform on [-1,1] drawn in lattice_edges order, zero fields
SpinGlassInstance generate_spin_glass(const LatticeSpec& spec, std::uint64_t seed);

// all couplings +1; optional symmetry-breaking field at one site
SpinGlassInstance generate_ferromagnet(const LatticeSpec& spec, int field_site = -1,
                                       double field_strength = 0.0);

// -sum_bonds J s s - sum_i h s
double energy(const SpinGlassInstance& inst, const SpinConfiguration& config);

SpinConfiguration random_configuration(int n, rng_t& rng);

std::string format_instance_id(const LatticeSpec& spec, std::uint64_t seed);

void save_instance(const SpinGlassInstance& inst, const std::string& path);
SpinGlassInstance load_instance(const std::string& path);

// csr neighbor lists shared by the samplers and the enumeration oracle
struct Adjacency {
  int n = 0;
  std::vector<int> offsets;
  std::vector<int> neighbor;
  std::vector<double> coupling;
  std::vector<double> field;

  static Adjacency build(const SpinGlassInstance& inst);

  // sum_{j~i} J_ij s_j + h_i
  double local_field(const SpinConfiguration& s, int i) const {
    double f = field[i];
    for (int k = offsets[i]; k < offsets[i + 1]; ++k)
      f += coupling[k] * s[neighbor[k]];
    return f;
  }
};

// energy change of flipping spin i: 2 s_i (sum_j J_ij s_j + h_i)
inline double flip_delta(const Adjacency& adj, const SpinConfiguration& s, int i) {
  return 2.0 * s[i] * adj.local_field(s, i);
}

}  // namespace annealab
