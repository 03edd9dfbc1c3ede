#include "annealab/profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "annealab/ca.hpp"
#include "annealab/stats.hpp"

namespace annealab {

namespace {

void check_grid(const std::vector<SpinGlassInstance>& instances,
                const std::vector<double>& grid) {
  if (instances.empty()) throw std::invalid_argument("profile needs at least one instance");
  if (grid.empty()) throw std::invalid_argument("profile grid is empty");
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (grid[k] <= grid[k - 1])
      throw std::invalid_argument("profile grid must be strictly increasing");
}

// mean over instances with a spread-based error bar; a single instance
// falls back to its own within-run error
struct EnsemblePoint {
  double mean = 0.0;
  double stderr_ = 0.0;
};

EnsemblePoint ensemble_reduce(const std::vector<double>& values,
                              const std::vector<double>& within_se) {
  EnsemblePoint pt;
  pt.mean = mean(values);
  if (values.size() == 1) {
    pt.stderr_ = within_se[0];
  } else {
    double v = 0.0;
    for (double x : values) v += (x - pt.mean) * (x - pt.mean);
    v /= static_cast<double>(values.size() - 1);
    pt.stderr_ = std::sqrt(v / static_cast<double>(values.size()));
  }
  return pt;
}

}  // namespace

FluctuationProfile measure_classical_profile(const std::vector<SpinGlassInstance>& instances,
                                             const std::vector<double>& beta_grid,
                                             const ProfileSampling& sampling) {
  check_grid(instances, beta_grid);
  if (sampling.warmup < 1 || sampling.measure < 4)
    throw std::invalid_argument("profile sampling needs warmup >= 1 and measure >= 4");

  FluctuationProfile prof;
  prof.kind = ProfileKind::classical_beta;
  prof.control = beta_grid;
  prof.ensemble_size = static_cast<int>(instances.size());

  int nb = std::max(2, std::min(sampling.batches, static_cast<int>(sampling.measure / 2)));
  std::vector<double> samples(sampling.measure);
  for (std::size_t gi = 0; gi < beta_grid.size(); ++gi) {
    std::vector<double> vars, ses;
    for (std::size_t ii = 0; ii < instances.size(); ++ii) {
      CaChain chain(instances[ii],
                    derive_seed(sampling.seed, gi * instances.size() + ii));
      for (long k = 0; k < sampling.warmup; ++k) chain.sweep(beta_grid[gi]);
      for (long k = 0; k < sampling.measure; ++k) {
        chain.sweep(beta_grid[gi]);
        samples[k] = chain.tracked_energy();
      }
      vars.push_back(variance(samples));
      // error bar on the variance itself: spread of per-batch variances
      std::vector<double> bv(nb);
      long per = sampling.measure / nb;
      for (int b = 0; b < nb; ++b) {
        long lo = b * per;
        long hi = (b == nb - 1) ? sampling.measure : lo + per;
        std::span<const double> batch(samples.data() + lo, hi - lo);
        double m = mean(batch), s = 0.0;
        for (double x : batch) s += (x - m) * (x - m);
        bv[b] = s / static_cast<double>(hi - lo - 1);
      }
      double mb = mean(bv), vb = 0.0;
      for (double x : bv) vb += (x - mb) * (x - mb);
      ses.push_back(std::sqrt(vb / static_cast<double>(nb - 1) / nb));
    }
    EnsemblePoint pt = ensemble_reduce(vars, ses);
    prof.denominator.push_back(pt.mean);
    prof.stderr_.push_back(pt.stderr_);
  }
  prof.validate();
  return prof;
}

FluctuationProfile measure_quantum_profile(const std::vector<SpinGlassInstance>& instances,
                                           const std::vector<double>& s_grid, double beta,
                                           double gamma0, int m_slices,
                                           const ProfileSampling& sampling,
                                           TimeBoundary boundary) {
  check_grid(instances, s_grid);
  if (s_grid.front() < 0.0 || s_grid.back() >= 1.0)
    throw std::invalid_argument("s grid must lie in [0,1) so that gamma stays positive");
  if (!(gamma0 > 0.0)) throw std::invalid_argument("gamma0 must be positive");

  FluctuationProfile prof;
  prof.kind = ProfileKind::quantum_s;
  prof.control = s_grid;
  prof.ensemble_size = static_cast<int>(instances.size());
  prof.beta = beta;
  prof.gamma0 = gamma0;

  for (std::size_t gi = 0; gi < s_grid.size(); ++gi) {
    double gamma = (1.0 - s_grid[gi]) * gamma0;
    std::vector<double> xs, ses;
    for (std::size_t ii = 0; ii < instances.size(); ++ii) {
      StiffnessPoint pt = sqa_equilibrium_measure(
          instances[ii], beta, gamma, m_slices, sampling.warmup, sampling.measure,
          derive_seed(sampling.seed, gi * instances.size() + ii), boundary,
          sampling.batches);
      xs.push_back(pt.sigma_x);
      ses.push_back(pt.stderr_);
    }
    EnsemblePoint ep = ensemble_reduce(xs, ses);
    // the ensemble-averaged magnetization enters before the square root
    double x = std::min(ep.mean, 1.0);
    double root = std::sqrt(std::max(0.0, 1.0 - x * x));
    prof.denominator.push_back(beta * gamma0 * root);
    // first-order error propagation through sqrt(1 - x^2)
    double dd = root > 1e-12 ? beta * gamma0 * x / root * ep.stderr_ : 0.0;
    prof.stderr_.push_back(dd);
  }
  prof.validate();
  return prof;
}

FluctuationProfile exact_quantum_profile(const std::vector<SpinGlassInstance>& instances,
                                         const std::vector<double>& s_grid, double beta,
                                         double gamma0, int max_spins) {
  check_grid(instances, s_grid);
  if (s_grid.front() < 0.0 || s_grid.back() >= 1.0)
    throw std::invalid_argument("s grid must lie in [0,1)");
  if (!(gamma0 > 0.0)) throw std::invalid_argument("gamma0 must be positive");

  std::vector<double> gammas;
  for (double s : s_grid) gammas.push_back((1.0 - s) * gamma0);

  FluctuationProfile prof;
  prof.kind = ProfileKind::quantum_s;
  prof.control = s_grid;
  prof.ensemble_size = static_cast<int>(instances.size());
  prof.beta = beta;
  prof.gamma0 = gamma0;

  std::vector<std::vector<double>> per_point(s_grid.size());
  for (const SpinGlassInstance& inst : instances) {
    ExactQuantumSummary sum = exact_quantum_expectations(inst, beta, gammas, max_spins, gamma0);
    for (std::size_t gi = 0; gi < s_grid.size(); ++gi)
      per_point[gi].push_back(beta * std::sqrt(std::max(0.0, sum.table[gi].var_pd)));
  }
  for (std::size_t gi = 0; gi < s_grid.size(); ++gi) {
    std::vector<double> zeros(per_point[gi].size(), 0.0);
    EnsemblePoint ep = ensemble_reduce(per_point[gi], zeros);
    prof.denominator.push_back(ep.mean);
    prof.stderr_.push_back(ep.stderr_);
  }
  prof.validate();
  return prof;
}

Gamma0Choice optimize_gamma0(const std::vector<SpinGlassInstance>& instances,
                             const GroundStateRegistry& ground_energies,
                             std::vector<double> gamma0_grid,
                             const Gamma0SearchParams& params) {
  if (instances.empty()) throw std::invalid_argument("need at least one instance");
  if (gamma0_grid.empty()) throw std::invalid_argument("gamma0 grid is empty");
  if (params.sweeps < 2 || params.runs_per_instance < 1)
    throw std::invalid_argument("need sweeps >= 2 and runs_per_instance >= 1");
  std::sort(gamma0_grid.begin(), gamma0_grid.end());

  Gamma0Choice out;
  std::uint64_t job = 0;
  for (double g0 : gamma0_grid) {
    Schedule sch = linear_schedule(ScheduleKind::quantum_gamma, g0, 0.0, params.sweeps);
    std::vector<double> residuals;
    for (const SpinGlassInstance& inst : instances) {
      auto it = ground_energies.find(inst.id);
      if (it == ground_energies.end())
        throw std::runtime_error("no ground truth for instance '" + inst.id + "'");
      for (int r = 0; r < params.runs_per_instance; ++r) {
        PimcParams pp;
        pp.m_slices = params.m_slices;
        pp.beta = params.beta;
        pp.time_boundary = params.boundary;
        pp.schedule = sch;
        pp.sweeps = params.sweeps;
        pp.seed = derive_seed(params.seed, job++);
        SqaResult res = sqa_anneal(inst, pp);
        residuals.push_back(res.energy - it->second);
      }
    }
    out.table.push_back({g0, median(residuals)});
  }
  out.best = out.table.front().gamma0;
  double best_med = out.table.front().median_residual;
  for (const Gamma0Entry& e : out.table)
    if (e.median_residual < best_med) {
      best_med = e.median_residual;
      out.best = e.gamma0;
    }
  return out;
}

}  // namespace annealab
