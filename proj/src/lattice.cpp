#include "annealab/lattice.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace annealab {

void LatticeSpec::validate() const {
  if (lx < 1 || ly < 1 || lz < 1)
    throw std::invalid_argument("lattice dims must be positive, got (" +
                                std::to_string(lx) + "," + std::to_string(ly) + "," +
                                std::to_string(lz) + ")");
  if (boundary == Boundary::periodic && (lx < 3 || ly < 3 || lz < 3))
    throw std::invalid_argument(
        "periodic boundary needs every dim >= 3, otherwise wrap-around bonds "
        "duplicate a nearest-neighbor pair");
  long long n = 1LL * lx * ly * lz;
  if (n > (1LL << 30)) throw std::invalid_argument("lattice too large");
}

std::vector<std::pair<int, int>> lattice_edges(const LatticeSpec& spec) {
  spec.validate();
  std::vector<std::pair<int, int>> edges;
  edges.reserve(3 * static_cast<std::size_t>(spec.site_count()));
  bool per = spec.boundary == Boundary::periodic;
  for (int z = 0; z < spec.lz; ++z)
    for (int y = 0; y < spec.ly; ++y)
      for (int x = 0; x < spec.lx; ++x) {
        int i = spec.site_index(x, y, z);
        if (x + 1 < spec.lx)
          edges.emplace_back(i, spec.site_index(x + 1, y, z));
        else if (per)
          edges.emplace_back(spec.site_index(0, y, z), i);
        if (y + 1 < spec.ly)
          edges.emplace_back(i, spec.site_index(x, y + 1, z));
        else if (per)
          edges.emplace_back(spec.site_index(x, 0, z), i);
        if (z + 1 < spec.lz)
          edges.emplace_back(i, spec.site_index(x, y, z + 1));
        else if (per)
          edges.emplace_back(spec.site_index(x, y, 0), i);
      }
  // the loop above visits sites x-fastest, so edge order is by source site
  // then +x,+y,+z; wrapped pairs are already stored with the smaller index first
  return edges;
}

SpinGlassInstance generate_spin_glass(const LatticeSpec& spec, std::uint64_t seed) {
  SpinGlassInstance inst;
  inst.lattice = spec;
  inst.seed = seed;
  inst.id = format_instance_id(spec, seed);
  inst.fields.assign(spec.site_count(), 0.0);
  rng_t rng(seed);
  for (auto [i, j] : lattice_edges(spec))
    inst.bonds.push_back({i, j, uniform_pm1(rng)});
  return inst;
}

SpinGlassInstance generate_ferromagnet(const LatticeSpec& spec, int field_site,
                                       double field_strength) {
  spec.validate();
  if (field_site >= spec.site_count())
    throw std::invalid_argument("field site " + std::to_string(field_site) +
                                " out of range for N=" + std::to_string(spec.site_count()));
  SpinGlassInstance inst;
  inst.lattice = spec;
  inst.fields.assign(spec.site_count(), 0.0);
  for (auto [i, j] : lattice_edges(spec)) inst.bonds.push_back({i, j, 1.0});
  char buf[96];
  const char* b = spec.boundary == Boundary::periodic ? "p" : "o";
  if (field_site >= 0) {
    inst.fields[field_site] = field_strength;
    std::snprintf(buf, sizeof buf, "fm-%dx%dx%d-%s-site%d-h%g", spec.lx, spec.ly,
                  spec.lz, b, field_site, field_strength);
  } else {
    std::snprintf(buf, sizeof buf, "fm-%dx%dx%d-%s-free", spec.lx, spec.ly, spec.lz, b);
  }
  inst.id = buf;
  return inst;
}

double energy(const SpinGlassInstance& inst, const SpinConfiguration& config) {
  if (static_cast<int>(config.size()) != inst.spin_count())
    throw std::invalid_argument("configuration length " + std::to_string(config.size()) +
                                " != spin count " + std::to_string(inst.spin_count()));
  double e = 0.0;
  for (const Bond& b : inst.bonds) e -= b.coupling * config[b.i] * config[b.j];
  for (std::size_t i = 0; i < inst.fields.size(); ++i) e -= inst.fields[i] * config[i];
  return e;
}

SpinConfiguration random_configuration(int n, rng_t& rng) {
  SpinConfiguration s(n);
  for (int i = 0; i < n; ++i) s[i] = uniform01(rng) < 0.5 ? 1 : -1;
  return s;
}

std::string format_instance_id(const LatticeSpec& spec, std::uint64_t seed) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "sg-%dx%dx%d-%s-s%" PRIu64, spec.lx, spec.ly, spec.lz,
                spec.boundary == Boundary::periodic ? "p" : "o", seed);
  return buf;
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void parse_fail(const std::string& path, int line, const std::string& msg) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace

void save_instance(const SpinGlassInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  const LatticeSpec& l = inst.lattice;
  out << "ising3d " << l.lx << ' ' << l.ly << ' ' << l.lz << ' '
      << (l.boundary == Boundary::periodic ? "periodic" : "open") << '\n';
  if (!inst.id.empty()) out << "id " << inst.id << '\n';
  out << "seed " << inst.seed << '\n';
  for (const Bond& b : inst.bonds)
    out << "b " << b.i << ' ' << b.j << ' ' << fmt_double(b.coupling) << '\n';
  for (std::size_t i = 0; i < inst.fields.size(); ++i)
    if (inst.fields[i] != 0.0) out << "f " << i << ' ' << fmt_double(inst.fields[i]) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path);
}

SpinGlassInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  SpinGlassInstance inst;
  std::string line;
  int lineno = 0;
  bool have_header = false;
  std::set<std::pair<int, int>> seen_bonds;
  std::set<int> seen_fields;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (!have_header) {
      if (tag != "ising3d") parse_fail(path, lineno, "expected 'ising3d' header");
      std::string bstr;
      if (!(ss >> inst.lattice.lx >> inst.lattice.ly >> inst.lattice.lz >> bstr))
        parse_fail(path, lineno, "malformed header");
      if (bstr == "periodic")
        inst.lattice.boundary = Boundary::periodic;
      else if (bstr == "open")
        inst.lattice.boundary = Boundary::open;
      else
        parse_fail(path, lineno, "boundary must be 'periodic' or 'open', got '" + bstr + "'");
      try {
        inst.lattice.validate();
      } catch (const std::exception& e) {
        parse_fail(path, lineno, e.what());
      }
      inst.fields.assign(inst.lattice.site_count(), 0.0);
      have_header = true;
      continue;
    }
    if (tag == "id") {
      if (!(ss >> inst.id)) parse_fail(path, lineno, "malformed id line");
    } else if (tag == "seed") {
      if (!(ss >> inst.seed)) parse_fail(path, lineno, "malformed seed line");
    } else if (tag == "b") {
      Bond b;
      if (!(ss >> b.i >> b.j >> b.coupling)) parse_fail(path, lineno, "malformed bond line");
      if (b.i < 0 || b.j >= inst.spin_count() || b.i >= b.j)
        parse_fail(path, lineno, "bond indices must satisfy 0 <= i < j < N");
      if (!seen_bonds.insert({b.i, b.j}).second)
        parse_fail(path, lineno, "duplicate bond (" + std::to_string(b.i) + "," +
                                     std::to_string(b.j) + ")");
      inst.bonds.push_back(b);
    } else if (tag == "f") {
      int i;
      double h;
      if (!(ss >> i >> h)) parse_fail(path, lineno, "malformed field line");
      if (i < 0 || i >= inst.spin_count()) parse_fail(path, lineno, "field site out of range");
      if (!seen_fields.insert(i).second)
        parse_fail(path, lineno, "duplicate field for site " + std::to_string(i));
      inst.fields[i] = h;
    } else {
      parse_fail(path, lineno, "unknown record '" + tag + "'");
    }
  }
  if (!have_header) parse_fail(path, lineno, "missing 'ising3d' header");
  auto edges = lattice_edges(inst.lattice);
  if (inst.bonds.size() != edges.size())
    throw std::runtime_error(path + ": bond count " + std::to_string(inst.bonds.size()) +
                             " does not match lattice (expected " +
                             std::to_string(edges.size()) + ")");
  std::set<std::pair<int, int>> expect(edges.begin(), edges.end());
  for (const Bond& b : inst.bonds)
    if (!expect.count({b.i, b.j}))
      throw std::runtime_error(path + ": bond (" + std::to_string(b.i) + "," +
                               std::to_string(b.j) + ") is not a nearest-neighbor pair");
  return inst;
}

Adjacency Adjacency::build(const SpinGlassInstance& inst) {
  Adjacency adj;
  adj.n = inst.spin_count();
  adj.field = inst.fields;
  std::vector<int> deg(adj.n, 0);
  for (const Bond& b : inst.bonds) {
    ++deg[b.i];
    ++deg[b.j];
  }
  adj.offsets.assign(adj.n + 1, 0);
  for (int i = 0; i < adj.n; ++i) adj.offsets[i + 1] = adj.offsets[i] + deg[i];
  adj.neighbor.resize(adj.offsets[adj.n]);
  adj.coupling.resize(adj.offsets[adj.n]);
  std::vector<int> cur(adj.offsets.begin(), adj.offsets.end() - 1);
  for (const Bond& b : inst.bonds) {
    adj.neighbor[cur[b.i]] = b.j;
    adj.coupling[cur[b.i]++] = b.coupling;
    adj.neighbor[cur[b.j]] = b.i;
    adj.coupling[cur[b.j]++] = b.coupling;
  }
  return adj;
}

}  // namespace annealab
