#include "annealab/sqa.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "annealab/exact.hpp"
#include "annealab/stats.hpp"

namespace annealab {

double time_coupling(double tau, double gamma) {
  if (!(tau > 0.0) || !(gamma > 0.0))
    throw std::invalid_argument("time_coupling needs tau > 0 and gamma > 0");
  return -0.5 * std::log(std::tanh(tau * gamma));
}

double path_spatial_action(const SpinGlassInstance& inst, const PathConfiguration& path,
                           double tau) {
  double sum = 0.0;
  SpinConfiguration s(path.n);
  for (int k = 0; k < path.m; ++k) {
    for (int i = 0; i < path.n; ++i) s[i] = path.at(i, k);
    sum += energy(inst, s);
  }
  return tau * sum;
}

double path_time_action(const PathConfiguration& path, double k_coupling,
                        TimeBoundary boundary) {
  double sum = 0.0;
  int links = boundary == TimeBoundary::periodic ? path.m : path.m - 1;
  for (int i = 0; i < path.n; ++i)
    for (int l = 0; l < links; ++l)
      sum += path.at(i, l) * path.at(i, (l + 1) % path.m);
  return -k_coupling * sum;
}

double path_action(const SpinGlassInstance& inst, const PathConfiguration& path,
                   double tau, double k_coupling, TimeBoundary boundary) {
  return path_spatial_action(inst, path, tau) + path_time_action(path, k_coupling, boundary);
}

PimcChain::PimcChain(const SpinGlassInstance& inst, int m_slices, TimeBoundary boundary,
                     std::uint64_t seed)
    : inst_(&inst), adj_(Adjacency::build(inst)), boundary_(boundary), rng_(seed) {
  if (m_slices < 2) throw std::invalid_argument("m_slices must be >= 2");
  path_.n = inst.spin_count();
  path_.m = m_slices;
  path_.spins.resize(static_cast<std::size_t>(path_.n) * path_.m);
  for (auto& s : path_.spins) s = uniform01(rng_) < 0.5 ? 1 : -1;
  slice_energy_.resize(m_slices);
  for (int k = 0; k < m_slices; ++k) slice_energy_[k] = recompute_slice_energy(k);
  time_link_sum_ = recompute_time_link_sum();
}

void PimcChain::set_controls(double beta, double gamma) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (gamma < 0.0) throw std::invalid_argument("gamma must be >= 0");
  beta_ = beta;
  gamma_ = gamma;
  tau_ = beta / path_.m;
  tanh_tg_ = gamma > 0.0 ? std::tanh(tau_ * gamma) : 0.0;
}

void PimcChain::sweep() {
  if (gamma_ < 0.0) throw std::logic_error("set_controls before sweeping");
  for (int i = 0; i < path_.n; ++i) line_move(i);
}

double PimcChain::flip_slice_delta(int site, int slice) const {
  double f = adj_.field[site];
  for (int e = adj_.offsets[site]; e < adj_.offsets[site + 1]; ++e)
    f += adj_.coupling[e] * path_.at(adj_.neighbor[e], slice);
  return 2.0 * path_.at(site, slice) * f;
}

void PimcChain::line_move(int site) {
  const int m = path_.m;
  // sever the line into clusters: a bond forms across a time link only
  // between aligned neighbors, with probability 1 - tanh(tau*gamma);
  // at gamma = 0 every link is bonded and the line moves as a whole
  cuts_.clear();
  if (gamma_ > 0.0) {
    const double p_bond = 1.0 - tanh_tg_;
    const std::int8_t* line = &path_.spins[static_cast<std::size_t>(site) * m];
    int links = boundary_ == TimeBoundary::periodic ? m : m - 1;
    for (int l = 0; l < links; ++l) {
      bool aligned = line[l] == line[(l + 1) % m];
      if (!aligned || uniform01(rng_) >= p_bond) cuts_.push_back(l);
    }
  }
  if (boundary_ == TimeBoundary::open) {
    if (cuts_.empty() || cuts_.back() != m - 1) cuts_.push_back(m - 1);
  }
  if (cuts_.empty()) {
    maybe_flip_segment(site, 0, m - 1);
    return;
  }
  // the cluster after a severed link runs to the next severed link (cyclic)
  for (std::size_t c = 0; c < cuts_.size(); ++c) {
    int from = (cuts_[c] + 1) % m;
    int to = cuts_[(c + 1) % cuts_.size()];
    maybe_flip_segment(site, from, to);
  }
}

void PimcChain::maybe_flip_segment(int site, int from, int to) {
  // Swendsen-Wang: each cluster is proposed for a flip with probability 1/2,
  // then the spatial-action change decides acceptance
  if (uniform01(rng_) < 0.5) return;
  const int m = path_.m;
  int len = to - from + 1;
  if (len <= 0) len += m;

  seg_delta_.resize(len);
  double delta = 0.0;
  for (int c = 0, k = from; c < len; ++c, k = (k + 1 == m ? 0 : k + 1)) {
    seg_delta_[c] = flip_slice_delta(site, k);
    delta += seg_delta_[c];
  }
  double da = tau_ * delta;
  if (da > 0.0 && uniform01(rng_) >= std::exp(-da)) return;

  for (int c = 0, k = from; c < len; ++c, k = (k + 1 == m ? 0 : k + 1)) {
    slice_energy_[k] += seg_delta_[c];
    path_.at(site, k) = static_cast<std::int8_t>(-path_.at(site, k));
  }
  // links interior to the segment are unchanged; the two edge links flip sign
  if (len < m) {
    int prev = from == 0 ? m - 1 : from - 1;
    int next = to + 1 == m ? 0 : to + 1;
    bool has_prev = boundary_ == TimeBoundary::periodic || from > 0;
    bool has_next = boundary_ == TimeBoundary::periodic || to + 1 < m;
    if (has_prev) time_link_sum_ += 2.0 * path_.at(site, prev) * path_.at(site, from);
    if (has_next) time_link_sum_ += 2.0 * path_.at(site, to) * path_.at(site, next);
  }
}

double PimcChain::sigma_x_estimate() const {
  if (gamma_ <= 0.0) return 0.0;
  double links = static_cast<double>(boundary_ == TimeBoundary::periodic ? path_.m
                                                                         : path_.m - 1) *
                 path_.n;
  double aligned = 0.5 * (links + time_link_sum_);
  double anti = links - aligned;
  // tanh(tau*gamma)^(s s'): tanh for aligned links, its reciprocal otherwise
  return (aligned * tanh_tg_ + anti / tanh_tg_) / links;
}

double PimcChain::recompute_slice_energy(int k) const {
  SpinConfiguration s(path_.n);
  for (int i = 0; i < path_.n; ++i) s[i] = path_.at(i, k);
  return energy(*inst_, s);
}

double PimcChain::recompute_time_link_sum() const {
  int links = boundary_ == TimeBoundary::periodic ? path_.m : path_.m - 1;
  double sum = 0.0;
  for (int i = 0; i < path_.n; ++i)
    for (int l = 0; l < links; ++l)
      sum += path_.at(i, l) * path_.at(i, (l + 1) % path_.m);
  return sum;
}

int PimcChain::best_slice() const {
  return static_cast<int>(std::min_element(slice_energy_.begin(), slice_energy_.end()) -
                          slice_energy_.begin());
}

SpinConfiguration PimcChain::slice_config(int k) const {
  SpinConfiguration s(path_.n);
  for (int i = 0; i < path_.n; ++i) s[i] = path_.at(i, k);
  return s;
}

SqaResult sqa_anneal(const SpinGlassInstance& inst, const PimcParams& params) {
  if (params.sweeps < 1) throw std::invalid_argument("sweeps must be >= 1");
  if (!(params.beta > 0.0)) throw std::invalid_argument("beta must be positive");
  const Schedule& sch = params.schedule;
  if (!schedule_has_gamma(sch.kind))
    throw std::invalid_argument("sqa_anneal needs a gamma-bearing schedule");
  sch.validate();
  if (static_cast<long>(sch.length()) != params.sweeps)
    throw std::invalid_argument("schedule length " + std::to_string(sch.length()) +
                                " != sweeps " + std::to_string(params.sweeps));
  if (sch.gamma.back() != 0.0)
    throw std::invalid_argument("schedule must end at gamma = 0");
  if (params.measure_every < 0) throw std::invalid_argument("measure_every must be >= 0");

  PimcChain chain(inst, params.m_slices, params.time_boundary, params.seed);
  SqaResult res;
  for (long k = 0; k < params.sweeps; ++k) {
    double beta = sch.kind == ScheduleKind::hybrid ? sch.beta[k] : params.beta;
    chain.set_controls(beta, sch.gamma[k]);
    chain.sweep();
    if (params.measure_every > 0 && (k + 1) % params.measure_every == 0) {
      SqaDiagnostic d;
      d.sweep = k + 1;
      d.beta = beta;
      d.gamma = sch.gamma[k];
      d.best_slice_energy = chain.tracked_slice_energy(chain.best_slice());
      d.sigma_x = chain.sigma_x_estimate();
      res.diagnostics.push_back(d);
    }
  }
  int readout = params.random_slice_readout
                    ? static_cast<int>(uniform_below(chain.rng(), chain.slices()))
                    : chain.best_slice();
  res.config = chain.slice_config(readout);
  res.energy = chain.tracked_slice_energy(readout);
  return res;
}

StiffnessPoint sqa_equilibrium_measure(const SpinGlassInstance& inst, double beta,
                                       double gamma, int m_slices, long warmup_sweeps,
                                       long measure_sweeps, std::uint64_t seed,
                                       TimeBoundary boundary, int batches) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (warmup_sweeps < 1) throw std::invalid_argument("warmup must be >= 1");
  if (measure_sweeps < 2) throw std::invalid_argument("measure must be >= 2");

  PimcChain chain(inst, m_slices, boundary, seed);
  chain.set_controls(beta, gamma);
  for (long k = 0; k < warmup_sweeps; ++k) chain.sweep();
  std::vector<double> samples;
  samples.reserve(measure_sweeps);
  for (long k = 0; k < measure_sweeps; ++k) {
    chain.sweep();
    samples.push_back(chain.sigma_x_estimate());
  }
  StiffnessPoint pt;
  pt.gamma = gamma;
  pt.count = measure_sweeps;
  if (measure_sweeps >= 2L * batches) {
    BatchStats bs = batch_stats(samples, batches);
    pt.sigma_x = bs.mean;
    pt.stderr_ = bs.stderr_;
  } else {
    pt.sigma_x = mean(samples);
    pt.stderr_ = std::sqrt(variance(samples) / static_cast<double>(measure_sweeps));
  }
  pt.c_q = beta * gamma * (1.0 - pt.sigma_x * pt.sigma_x);
  return pt;
}

std::vector<TrotterScanRow> trotter_convergence_scan(
    const SpinGlassInstance& inst, double beta, double gamma,
    const std::vector<int>& m_list, long warmup_sweeps, long measure_sweeps,
    std::uint64_t seed, TimeBoundary boundary) {
  ExactQuantumSummary oracle = exact_quantum_expectations(inst, beta, {gamma});
  double exact = oracle.table.at(0).sigma_x;
  std::vector<TrotterScanRow> rows;
  for (std::size_t idx = 0; idx < m_list.size(); ++idx) {
    StiffnessPoint pt =
        sqa_equilibrium_measure(inst, beta, gamma, m_list[idx], warmup_sweeps,
                                measure_sweeps, derive_seed(seed, idx), boundary);
    rows.push_back({m_list[idx], pt.sigma_x, pt.stderr_, std::abs(pt.sigma_x - exact)});
  }
  return rows;
}

}  // namespace annealab
