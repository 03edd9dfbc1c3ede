#include "annealab/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "annealab/ca.hpp"
#include "annealab/stats.hpp"
#include "json.hpp"

namespace annealab {

namespace {

using nlohmann::json;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string describe_schedule(const MethodPlan& p, long t_a) {
  char buf[160];
  if (p.method == Method::ca) {
    std::snprintf(buf, sizeof buf, "ca-%s-beta%g:%g-T%ld", family_name(p.family).c_str(),
                  p.beta_start, p.beta_end, t_a);
  } else {
    double g0 = p.family == ScheduleFamily::adaptive && p.profile ? p.profile->gamma0
                                                                  : p.gamma0;
    std::snprintf(buf, sizeof buf, "sqa-%s-g%g-beta%g-M%d-%s-T%ld",
                  family_name(p.family).c_str(), g0, p.beta, p.m_slices,
                  p.boundary == TimeBoundary::open ? "open" : "periodic", t_a);
  }
  return buf;
}

Schedule build_plan_schedule(const MethodPlan& p, long t_a) {
  if (p.method == Method::ca) {
    if (p.family == ScheduleFamily::linear)
      return linear_schedule(ScheduleKind::classical_beta, p.beta_start, p.beta_end, t_a);
    return build_adaptive_schedule(*p.profile, t_a, p.beta_start, p.beta_end);
  }
  if (p.family == ScheduleFamily::linear)
    return linear_schedule(ScheduleKind::quantum_gamma, p.gamma0, 0.0, t_a);
  return build_adaptive_schedule(*p.profile, t_a, 0.0, 1.0);
}

void validate_config(const CampaignConfig& c) {
  std::vector<std::string> bad;
  if (c.instances.empty()) bad.push_back("no instances");
  if (c.plans.empty()) bad.push_back("no method plans");
  if (c.t_a_grid.empty()) bad.push_back("empty t_a grid");
  for (long t : c.t_a_grid)
    if (t < 2) {
      bad.push_back("every t_a must be >= 2");
      break;
    }
  if (c.repetitions < 1) bad.push_back("repetitions must be >= 1");
  if (c.success_tolerance < 0.0) bad.push_back("success tolerance must be >= 0");
  if (!(c.target_probability > 0.0 && c.target_probability < 1.0))
    bad.push_back("target probability must be in (0,1)");
  if (c.workers < 1) bad.push_back("workers must be >= 1");
  for (std::size_t pi = 0; pi < c.plans.size(); ++pi) {
    const MethodPlan& p = c.plans[pi];
    std::string where = "plan " + std::to_string(pi) + ": ";
    if (p.family == ScheduleFamily::adaptive) {
      if (!p.profile) {
        bad.push_back(where + "adaptive family needs a fluctuation profile");
      } else {
        bool classical = p.profile->kind == ProfileKind::classical_beta;
        if (classical != (p.method == Method::ca))
          bad.push_back(where + "profile kind does not match the method");
      }
    }
    if (p.method == Method::ca && !(p.beta_end > p.beta_start))
      bad.push_back(where + "needs beta_end > beta_start");
    if (p.method == Method::sqa && p.family == ScheduleFamily::linear && !(p.gamma0 > 0.0))
      bad.push_back(where + "needs gamma0 > 0");
    if (p.method == Method::sqa && (p.m_slices < 2 || !(p.beta > 0.0)))
      bad.push_back(where + "needs m_slices >= 2 and beta > 0");
  }
  if (!bad.empty()) {
    std::string msg = "invalid campaign config: " + bad[0];
    for (std::size_t k = 1; k < bad.size(); ++k) msg += "; " + bad[k];
    throw std::invalid_argument(msg);
  }
}

}  // namespace

std::string method_name(Method m) { return m == Method::ca ? "ca" : "sqa"; }
std::string family_name(ScheduleFamily f) {
  return f == ScheduleFamily::linear ? "linear" : "adaptive";
}

double presolve_ground_energy(const SpinGlassInstance& inst, int restarts, long sweeps,
                              std::uint64_t seed) {
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  if (sweeps < 2) throw std::invalid_argument("sweeps must be >= 2");
  Adjacency adj = Adjacency::build(inst);
  Schedule sch = linear_schedule(ScheduleKind::classical_beta, 0.1, 10.0, sweeps);
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    CaRunParams params;
    params.schedule = sch;
    params.sweeps = sweeps;
    params.seed = derive_seed(seed, static_cast<std::uint64_t>(r));
    CaResult res = ca_anneal(inst, params);
    SpinConfiguration s = std::move(res.config);
    bool improved = true;
    while (improved) {
      improved = false;
      for (int i = 0; i < inst.spin_count(); ++i)
        if (flip_delta(adj, s, i) < -1e-12) {
          s[i] = -s[i];
          improved = true;
        }
    }
    best = std::min(best, energy(inst, s));
  }
  return best;
}

CampaignResult run_campaign(const CampaignConfig& config) {
  validate_config(config);

  CampaignResult out;
  std::vector<const SpinGlassInstance*> usable;
  std::vector<double> e0s;
  for (const SpinGlassInstance& inst : config.instances) {
    auto it = config.ground_energies.find(inst.id);
    if (it == config.ground_energies.end())
      out.skipped.push_back(inst.id);
    else {
      usable.push_back(&inst);
      e0s.push_back(it->second);
    }
  }

  struct Job {
    std::size_t plan, inst, ta;
    int rep;
  };
  std::vector<Job> jobs;
  for (std::size_t pi = 0; pi < config.plans.size(); ++pi)
    for (std::size_t ti = 0; ti < config.t_a_grid.size(); ++ti)
      for (std::size_t ii = 0; ii < usable.size(); ++ii)
        for (int r = 0; r < config.repetitions; ++r) jobs.push_back({pi, ii, ti, r});

  // schedules are shared read-only across jobs
  std::vector<std::vector<Schedule>> schedules(config.plans.size());
  for (std::size_t pi = 0; pi < config.plans.size(); ++pi)
    for (long t_a : config.t_a_grid)
      schedules[pi].push_back(build_plan_schedule(config.plans[pi], t_a));

  out.records.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::vector<std::string> errors;

  auto run_one = [&](std::size_t j) {
    const Job& job = jobs[j];
    const MethodPlan& plan = config.plans[job.plan];
    const SpinGlassInstance& inst = *usable[job.inst];
    long t_a = config.t_a_grid[job.ta];

    BenchmarkRecord rec;
    rec.index = static_cast<long>(j);
    rec.instance_id = inst.id;
    rec.n_spins = inst.spin_count();
    rec.method = plan.method;
    rec.family = plan.family;
    rec.schedule_desc = describe_schedule(plan, t_a);
    rec.t_a = t_a;
    rec.seed = derive_seed(config.master_seed, j);
    rec.e0 = e0s[job.inst];

    const Schedule& sch = schedules[job.plan][job.ta];
    if (plan.method == Method::ca) {
      CaRunParams params;
      params.schedule = sch;
      params.sweeps = t_a;
      params.seed = rec.seed;
      rec.energy = ca_anneal(inst, params).energy;
    } else {
      PimcParams params;
      params.m_slices = plan.m_slices;
      params.beta = plan.beta;
      params.time_boundary = plan.boundary;
      params.schedule = sch;
      params.sweeps = t_a;
      params.seed = rec.seed;
      rec.energy = sqa_anneal(inst, params).energy;
    }
    rec.e_res = rec.energy - rec.e0;
    rec.e_res_per_spin = rec.e_res / rec.n_spins;
    double tol = config.relative_tolerance
                     ? config.success_tolerance * std::abs(rec.e0)
                     : config.success_tolerance;
    rec.success = rec.e_res <= tol;
    if (config.certified_ground && rec.e_res < -1e-9)
      throw std::runtime_error("energy below registered ground state for '" +
                               rec.instance_id + "' (E_res = " + std::to_string(rec.e_res) +
                               "); the registry entry is wrong");
    out.records[j] = std::move(rec);
  };

  auto worker = [&] {
    while (true) {
      std::size_t j = next.fetch_add(1);
      if (j >= jobs.size()) return;
      try {
        run_one(j);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(err_mu);
        errors.emplace_back(e.what());
      }
    }
  };

  if (config.workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < config.workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (!errors.empty()) {
    std::sort(errors.begin(), errors.end());
    throw std::runtime_error("campaign failed: " + errors.front() +
                             (errors.size() > 1
                                  ? " (+" + std::to_string(errors.size() - 1) + " more)"
                                  : ""));
  }
  return out;
}

Repetitions repetitions_needed(double p, double sbar) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must be in [0,1]");
  if (!(sbar > 0.0 && sbar < 1.0)) throw std::invalid_argument("sbar must be in (0,1)");
  if (p == 1.0) return {1.0, 1};
  if (p == 0.0)
    return {kInfiniteEffort, std::numeric_limits<long>::max()};
  double r = std::log(1.0 - sbar) / std::log(1.0 - p);
  long ri = static_cast<long>(std::ceil(r - 1e-12));
  return {r, std::max(1L, ri)};
}

SuccessEstimate estimate_success_probability(long successes, long trials) {
  if (trials < 0 || successes < 0 || successes > trials)
    throw std::invalid_argument("successes outside [0, trials]");
  SuccessEstimate est;
  est.successes = successes;
  est.trials = trials;
  if (trials > 0) {
    est.p = static_cast<double>(successes) / trials;
    WilsonInterval w = wilson_interval(successes, trials);
    est.lower = w.lower;
    est.upper = w.upper;
  }
  return est;
}

SuccessEstimate estimate_success_probability(std::span<const BenchmarkRecord> records) {
  if (records.empty()) throw std::invalid_argument("need at least one record");
  long succ = 0;
  for (const BenchmarkRecord& r : records) succ += r.success ? 1 : 0;
  return estimate_success_probability(succ, static_cast<long>(records.size()));
}

namespace {

using GroupKey = std::tuple<int, int, int, long>;  // method, family, n, t_a

GroupKey key_of(const BenchmarkRecord& r) {
  return {static_cast<int>(r.method), static_cast<int>(r.family), r.n_spins, r.t_a};
}

struct GroupCounts {
  long successes = 0, trials = 0;
  std::map<std::string, std::pair<long, long>> per_instance;  // id -> (succ, trials)
};

std::map<GroupKey, GroupCounts> group_records(const std::vector<BenchmarkRecord>& records) {
  std::map<GroupKey, GroupCounts> groups;
  for (const BenchmarkRecord& r : records) {
    GroupCounts& g = groups[key_of(r)];
    g.trials += 1;
    g.successes += r.success ? 1 : 0;
    auto& pi = g.per_instance[r.instance_id];
    pi.second += 1;
    pi.first += r.success ? 1 : 0;
  }
  return groups;
}

}  // namespace

std::vector<TtsEntry> compute_tts(const std::vector<BenchmarkRecord>& records, double sbar) {
  std::vector<TtsEntry> entries;
  for (const auto& [key, g] : group_records(records)) {
    TtsEntry e;
    e.method = static_cast<Method>(std::get<0>(key));
    e.family = static_cast<ScheduleFamily>(std::get<1>(key));
    e.n_spins = std::get<2>(key);
    e.t_a = std::get<3>(key);
    e.pooled = estimate_success_probability(g.successes, g.trials);
    std::vector<double> efforts;
    for (const auto& [id, st] : g.per_instance) {
      double p = static_cast<double>(st.first) / st.second;
      efforts.push_back(static_cast<double>(e.t_a) * repetitions_needed(p, sbar).r);
    }
    e.median_effort = median(efforts);
    entries.push_back(e);
  }
  return entries;
}

TtsSummary tts_optimize(const std::vector<BenchmarkRecord>& records, double sbar) {
  TtsSummary sum;
  sum.entries = compute_tts(records, sbar);

  auto groups = group_records(records);
  using ArmKey = std::tuple<int, int, int>;
  std::map<ArmKey, std::vector<const TtsEntry*>> arms;
  for (const TtsEntry& e : sum.entries)
    arms[{static_cast<int>(e.method), static_cast<int>(e.family), e.n_spins}].push_back(&e);

  for (auto& [arm, list] : arms) {
    std::sort(list.begin(), list.end(),
              [](const TtsEntry* a, const TtsEntry* b) { return a->t_a < b->t_a; });
    std::size_t best = 0;
    for (std::size_t k = 1; k < list.size(); ++k)
      if (list[k]->median_effort < list[best]->median_effort) best = k;
    TtsOptimum opt;
    opt.method = static_cast<Method>(std::get<0>(arm));
    opt.family = static_cast<ScheduleFamily>(std::get<1>(arm));
    opt.n_spins = std::get<2>(arm);
    opt.best_t_a = list[best]->t_a;
    opt.best_effort = list[best]->median_effort;
    opt.interior = best > 0 && best + 1 < list.size();
    const GroupCounts& g =
        groups.at({std::get<0>(arm), std::get<1>(arm), std::get<2>(arm), opt.best_t_a});
    for (const auto& [id, st] : g.per_instance) {
      double p = static_cast<double>(st.first) / st.second;
      opt.instance_efforts.push_back(static_cast<double>(opt.best_t_a) *
                                     repetitions_needed(p, sbar).r);
    }
    sum.optima.push_back(opt);
  }
  return sum;
}

ScalingFitResult scaling_fit(const std::vector<ScalingPoint>& points,
                             ScalingAbscissa abscissa, int n_bootstrap,
                             std::uint64_t seed) {
  if (points.size() < 3)
    throw std::invalid_argument("scaling fit needs at least 3 sizes");
  {
    std::set<int> sizes;
    for (const ScalingPoint& p : points) sizes.insert(p.n_spins);
    if (sizes.size() != points.size())
      throw std::invalid_argument("scaling fit sizes must be distinct");
  }
  auto xval = [&](int n) {
    switch (abscissa) {
      case ScalingAbscissa::sqrt_n: return std::sqrt(static_cast<double>(n));
      case ScalingAbscissa::n: return static_cast<double>(n);
      default: return std::cbrt(static_cast<double>(n));
    }
  };
  std::vector<double> xs, ys;
  for (const ScalingPoint& p : points) {
    if (p.instance_efforts.empty())
      throw std::invalid_argument("scaling point with no efforts");
    double med = median(p.instance_efforts);
    if (!std::isfinite(med) || med <= 0.0)
      throw std::invalid_argument("median effort must be finite and positive for N=" +
                                  std::to_string(p.n_spins));
    xs.push_back(xval(p.n_spins));
    ys.push_back(std::log10(med));
  }
  LinearFit fit = linear_fit(xs, ys);

  rng_t rng(seed);
  std::vector<double> slopes;
  slopes.reserve(n_bootstrap);
  std::vector<double> by(points.size());
  std::vector<double> resampled;
  for (int b = 0; b < n_bootstrap; ++b) {
    bool ok = true;
    for (std::size_t k = 0; k < points.size(); ++k) {
      const auto& eff = points[k].instance_efforts;
      resampled.resize(eff.size());
      for (std::size_t i = 0; i < eff.size(); ++i)
        resampled[i] = eff[uniform_below(rng, static_cast<std::uint32_t>(eff.size()))];
      double med = median(resampled);
      if (!std::isfinite(med) || med <= 0.0) {
        ok = false;
        break;
      }
      by[k] = std::log10(med);
    }
    if (ok) slopes.push_back(linear_fit(xs, by).slope);
  }
  if (slopes.size() < static_cast<std::size_t>(std::max(2, n_bootstrap / 2)))
    throw std::runtime_error("bootstrap failed: too many resamples had non-finite efforts");

  ScalingFitResult out;
  out.slope = fit.slope;
  out.intercept = fit.intercept;
  out.lower = quantile(slopes, 0.025);
  out.upper = quantile(slopes, 0.975);
  return out;
}

std::string record_to_json(const BenchmarkRecord& r) {
  json j;
  j["v"] = 1;
  j["idx"] = r.index;
  j["instance"] = r.instance_id;
  j["n"] = r.n_spins;
  j["method"] = method_name(r.method);
  j["family"] = family_name(r.family);
  j["schedule"] = r.schedule_desc;
  j["t_a"] = r.t_a;
  j["seed"] = r.seed;
  j["energy"] = r.energy;
  j["e0"] = r.e0;
  j["e_res"] = r.e_res;
  j["e_res_per_spin"] = r.e_res_per_spin;
  j["success"] = r.success;
  return j.dump();
}

BenchmarkRecord parse_record_json(const std::string& line) {
  json j = json::parse(line);
  if (j.at("v").get<int>() != 1)
    throw std::runtime_error("unsupported record schema version");
  BenchmarkRecord r;
  r.index = j.at("idx").get<long>();
  r.instance_id = j.at("instance").get<std::string>();
  r.n_spins = j.at("n").get<int>();
  std::string m = j.at("method").get<std::string>();
  if (m != "ca" && m != "sqa") throw std::runtime_error("unknown method '" + m + "'");
  r.method = m == "ca" ? Method::ca : Method::sqa;
  std::string f = j.at("family").get<std::string>();
  if (f != "linear" && f != "adaptive")
    throw std::runtime_error("unknown family '" + f + "'");
  r.family = f == "linear" ? ScheduleFamily::linear : ScheduleFamily::adaptive;
  r.schedule_desc = j.at("schedule").get<std::string>();
  r.t_a = j.at("t_a").get<long>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.energy = j.at("energy").get<double>();
  r.e0 = j.at("e0").get<double>();
  r.e_res = j.at("e_res").get<double>();
  r.e_res_per_spin = j.at("e_res_per_spin").get<double>();
  r.success = j.at("success").get<bool>();
  return r;
}

void write_records_jsonl(const std::vector<BenchmarkRecord>& records,
                         const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  for (const BenchmarkRecord& r : records) out << record_to_json(r) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path);
}

std::vector<BenchmarkRecord> read_records_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<BenchmarkRecord> records;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      records.push_back(parse_record_json(line));
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return records;
}

void write_residual_curves_csv(const std::vector<BenchmarkRecord>& records,
                               const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "method,N,t_a,median_Eres_per_spin,q25,q75\n";
  std::map<GroupKey, std::vector<double>> groups;
  for (const BenchmarkRecord& r : records) groups[key_of(r)].push_back(r.e_res_per_spin);
  for (const auto& [key, vals] : groups) {
    std::string label = method_name(static_cast<Method>(std::get<0>(key))) + "-" +
                        family_name(static_cast<ScheduleFamily>(std::get<1>(key)));
    out << label << ',' << std::get<2>(key) << ',' << std::get<3>(key) << ','
        << fmt_double(median(vals)) << ',' << fmt_double(quantile(vals, 0.25)) << ','
        << fmt_double(quantile(vals, 0.75)) << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

void write_tts_csv(const std::vector<TtsEntry>& entries, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "method,N,t_a,successes,trials,p,p_lower,p_upper,median_effort\n";
  for (const TtsEntry& e : entries)
    out << method_name(e.method) << '-' << family_name(e.family) << ',' << e.n_spins << ','
        << e.t_a << ',' << e.pooled.successes << ',' << e.pooled.trials << ','
        << fmt_double(e.pooled.p) << ',' << fmt_double(e.pooled.lower) << ','
        << fmt_double(e.pooled.upper) << ',' << fmt_double(e.median_effort) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path);
}

void write_efforts_csv(const std::vector<TtsOptimum>& optima, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "method,N,best_t_a,best_effort,interior\n";
  for (const TtsOptimum& o : optima)
    out << method_name(o.method) << '-' << family_name(o.family) << ',' << o.n_spins << ','
        << o.best_t_a << ',' << fmt_double(o.best_effort) << ','
        << (o.interior ? "yes" : "no") << '\n';
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace annealab
