// command-line front end: instance generation, ground-state registries,
// fluctuation profiles, schedule construction, single annealing runs, and
// benchmark campaigns. exit codes: 0 ok, 2 config error, 3 runtime error,
// 4 missing ground truth.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "annealab/benchmark.hpp"
#include "annealab/ca.hpp"
#include "annealab/exact.hpp"
#include "annealab/lattice.hpp"
#include "annealab/profile.hpp"
#include "annealab/schedule.hpp"
#include "annealab/sqa.hpp"

namespace {

using namespace annealab;
namespace fs = std::filesystem;

struct missing_ground_truth_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const std::map<std::string, Boundary> kBoundaryNames{{"periodic", Boundary::periodic},
                                                     {"open", Boundary::open}};
const std::map<std::string, TimeBoundary> kTimeBoundaryNames{
    {"open", TimeBoundary::open}, {"periodic", TimeBoundary::periodic}};

std::vector<std::string> list_instance_files(const std::vector<std::string>& files,
                                             const std::string& dir) {
  std::vector<std::string> out = files;
  if (!dir.empty()) {
    if (!fs::is_directory(dir))
      throw std::invalid_argument("instance directory '" + dir + "' does not exist");
    std::vector<std::string> found;
    for (const auto& entry : fs::directory_iterator(dir))
      if (entry.is_regular_file() && entry.path().extension() == ".txt")
        found.push_back(entry.path().string());
    std::sort(found.begin(), found.end());
    out.insert(out.end(), found.begin(), found.end());
  }
  if (out.empty()) throw std::invalid_argument("no instance files given");
  return out;
}

std::vector<SpinGlassInstance> load_instances(const std::vector<std::string>& files,
                                              const std::string& dir) {
  std::vector<SpinGlassInstance> instances;
  for (const std::string& path : list_instance_files(files, dir))
    instances.push_back(load_instance(path));
  return instances;
}

std::vector<double> make_grid(double start, double end, int points) {
  if (points < 2) throw std::invalid_argument("grid needs at least 2 points");
  if (!(end > start)) throw std::invalid_argument("grid needs end > start");
  std::vector<double> g(points);
  for (int k = 0; k < points; ++k)
    g[k] = start + (end - start) * static_cast<double>(k) / (points - 1);
  g.front() = start;
  g.back() = end;
  return g;
}

// ---------------------------------------------------------------- generate

struct GenerateOpts {
  std::vector<int> dims;
  Boundary boundary = Boundary::periodic;
  int count = 1;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out_dir = ".";
  bool ferro = false;
  int field_site = -1;
  double field = 0.0;
  bool dry_run = false;
};

void cmd_generate(const GenerateOpts& o) {
  LatticeSpec spec{o.dims[0], o.dims[1], o.dims[2], o.boundary};
  spec.validate();
  if (o.count < 1) throw std::invalid_argument("count must be >= 1");
  if (o.ferro && o.count != 1)
    throw std::invalid_argument("ferromagnet generation is deterministic, use count 1");
  if (!o.ferro && !o.seed_given)
    throw std::invalid_argument("instance generation is stochastic, a seed is required");
  if (!o.dry_run) fs::create_directories(o.out_dir);
  for (int k = 0; k < o.count; ++k) {
    SpinGlassInstance inst =
        o.ferro ? generate_ferromagnet(spec, o.field_site, o.field)
                : generate_spin_glass(spec, o.seed + static_cast<std::uint64_t>(k));
    if (o.count > 1) inst.id += "-i" + std::to_string(k);
    fs::path path = fs::path(o.out_dir) / (inst.id + ".txt");
    if (!o.dry_run) save_instance(inst, path.string());
    std::cout << path.string() << "\n";
  }
  std::cerr << (o.dry_run ? "would write " : "wrote ") << o.count << " instance"
            << (o.count == 1 ? "" : "s") << "\n";
}

// -------------------------------------------------------------- groundstate

struct GroundstateOpts {
  std::vector<std::string> instance_files;
  std::string instances_dir;
  std::string method = "exact";
  int max_spins = 30;
  int restarts = 32;
  long sweeps = 20000;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out;
  std::string merge;
  bool dry_run = false;
};

void cmd_groundstate(const GroundstateOpts& o) {
  if (o.method == "anneal" && !o.seed_given)
    throw std::invalid_argument("the anneal presolver is stochastic, a seed is required");
  GroundStateRegistry reg;
  if (!o.merge.empty()) reg = import_ground_state(o.merge);
  std::vector<SpinGlassInstance> instances =
      load_instances(o.instance_files, o.instances_dir);
  for (std::size_t k = 0; k < instances.size(); ++k) {
    const SpinGlassInstance& inst = instances[k];
    if (o.method == "exact") {
      GroundStateResult gs = brute_force_ground_state(inst, o.max_spins);
      merge_ground_state(reg, inst.id, gs.energy);
      std::cerr << inst.id << " E0=" << fmt(gs.energy) << " degeneracy=" << gs.degeneracy
                << "\n";
    } else {
      double e0 = presolve_ground_energy(inst, o.restarts, o.sweeps, derive_seed(o.seed, k));
      merge_ground_state(reg, inst.id, e0);
      std::cerr << inst.id << " E0<=" << fmt(e0) << " (presolved, not certified)\n";
    }
  }
  if (o.dry_run) {
    std::cerr << "dry run, registry not written\n";
    return;
  }
  if (o.out.empty()) {
    for (const auto& [id, e0] : reg) std::cout << "gs " << id << " " << fmt(e0) << "\n";
  } else {
    save_ground_state_registry(reg, o.out);
    std::cerr << "registry with " << reg.size() << " entries -> " << o.out << "\n";
  }
}

// ------------------------------------------------------------------ profile

struct ProfileOpts {
  std::string kind;
  std::vector<std::string> instance_files;
  std::string instances_dir;
  double grid_start = -1.0;
  double grid_end = -1.0;
  int grid_points = 33;
  long warmup = 500;
  long measure = 2000;
  int batches = 16;
  std::uint64_t seed = 0;
  double beta = 16.0;
  double gamma0 = 10.0;
  int m_slices = 64;
  TimeBoundary boundary = TimeBoundary::periodic;
  std::string out;
  bool dry_run = false;
};

void cmd_profile(const ProfileOpts& o) {
  std::vector<SpinGlassInstance> instances =
      load_instances(o.instance_files, o.instances_dir);
  ProfileSampling sampling;
  sampling.warmup = o.warmup;
  sampling.measure = o.measure;
  sampling.batches = o.batches;
  sampling.seed = o.seed;
  FluctuationProfile profile;
  if (o.kind == "classical") {
    double start = o.grid_start < 0.0 ? 0.1 : o.grid_start;
    double end = o.grid_end < 0.0 ? 16.0 : o.grid_end;
    profile = measure_classical_profile(instances, make_grid(start, end, o.grid_points),
                                        sampling);
  } else {
    double start = o.grid_start < 0.0 ? 0.0 : o.grid_start;
    double end = o.grid_end < 0.0 ? 0.97 : o.grid_end;
    if (end >= 1.0)
      throw std::invalid_argument(
          "the s grid must stay below 1, the transverse field vanishes there");
    profile = measure_quantum_profile(instances, make_grid(start, end, o.grid_points),
                                      o.beta, o.gamma0, o.m_slices, sampling, o.boundary);
  }
  if (o.dry_run) {
    std::cerr << "dry run, profile not written\n";
    return;
  }
  save_profile(profile, o.out);
  std::cerr << "profile with " << profile.control.size() << " points over "
            << instances.size() << " instance" << (instances.size() == 1 ? "" : "s")
            << " -> " << o.out << "\n";
}

// ----------------------------------------------------------------- schedule

struct ScheduleOpts {
  std::string kind;
  std::string control = "beta";
  double start = 0.0;
  double end = 0.0;
  bool start_given = false;
  bool end_given = false;
  long steps = 0;
  double beta_start = 0.1;
  double beta_end = 16.0;
  double gamma0 = 1.5;
  std::string profile_path;
  std::string out;
  bool dry_run = false;
};

void cmd_schedule(const ScheduleOpts& o) {
  Schedule s;
  if (o.kind == "linear" || o.kind == "exponential") {
    if (!o.start_given || !o.end_given)
      throw std::invalid_argument(o.kind + " schedules need --start and --end");
    ScheduleKind kind = o.control == "beta" ? ScheduleKind::classical_beta
                                            : ScheduleKind::quantum_gamma;
    s = o.kind == "linear" ? linear_schedule(kind, o.start, o.end, o.steps)
                           : exponential_schedule(kind, o.start, o.end, o.steps);
  } else if (o.kind == "hybrid") {
    s = hybrid_schedule(o.beta_start, o.beta_end, o.gamma0, o.steps);
  } else {  // adaptive
    if (o.profile_path.empty())
      throw std::invalid_argument("adaptive schedules need --profile");
    FluctuationProfile profile = load_profile(o.profile_path);
    bool quantum = profile.kind == ProfileKind::quantum_s;
    double start = o.start_given ? o.start : (quantum ? 0.0 : profile.control.front());
    double end = o.end_given ? o.end : (quantum ? 1.0 : profile.control.back());
    double lambda = 0.0;
    s = build_adaptive_schedule(profile, o.steps, start, end, &lambda);
    std::cerr << "step normalization lambda=" << fmt(lambda) << "\n";
  }
  if (o.dry_run) {
    std::cerr << "dry run, schedule of length " << s.length() << " not written\n";
    return;
  }
  save_schedule(s, o.out);
  std::cerr << "schedule of length " << s.length() << " -> " << o.out << "\n";
}

// ------------------------------------------------------------------- anneal

struct AnnealOpts {
  std::string method;
  std::string instance_path;
  std::string schedule_path;
  std::uint64_t seed = 0;
  long measure_every = 0;
  std::string trace;
  double pimc_beta = 16.0;
  int m_slices = 64;
  TimeBoundary boundary = TimeBoundary::open;
  std::string readout = "best";
  double e0 = 0.0;
  bool e0_given = false;
  std::string registry_path;
  bool dry_run = false;
};

void write_trace_header(std::ostream& out) { out << "sweep,beta,gamma,energy,sigma_x\n"; }

void cmd_anneal(const AnnealOpts& o) {
  SpinGlassInstance inst = load_instance(o.instance_path);
  Schedule sch = load_schedule(o.schedule_path);
  long measure_every = o.measure_every;
  if (!o.trace.empty() && measure_every == 0) measure_every = 1;

  double energy = 0.0;
  std::string trace_body;
  if (o.method == "ca") {
    CaRunParams params;
    params.schedule = sch;
    params.sweeps = sch.length();
    params.seed = o.seed;
    params.measure_every = measure_every;
    CaResult res = ca_anneal(inst, params);
    energy = res.energy;
    for (std::size_t k = 0; k < res.stats.size(); ++k) {
      const EnergyStatPoint& p = res.stats[k];
      trace_body += std::to_string((k + 1) * measure_every) + "," + fmt(p.beta) + ",," +
                    fmt(p.mean_energy) + ",\n";
    }
  } else {
    PimcParams params;
    params.m_slices = o.m_slices;
    params.beta = o.pimc_beta;
    params.time_boundary = o.boundary;
    params.schedule = sch;
    params.sweeps = sch.length();
    params.seed = o.seed;
    params.measure_every = measure_every;
    params.random_slice_readout = o.readout == "random";
    SqaResult res = sqa_anneal(inst, params);
    energy = res.energy;
    for (const SqaDiagnostic& d : res.diagnostics)
      trace_body += std::to_string(d.sweep) + "," + fmt(d.beta) + "," + fmt(d.gamma) +
                    "," + fmt(d.best_slice_energy) + "," + fmt(d.sigma_x) + "\n";
  }

  std::optional<double> e0;
  if (o.e0_given) e0 = o.e0;
  if (!o.registry_path.empty()) {
    GroundStateRegistry reg = import_ground_state(o.registry_path);
    auto it = reg.find(inst.id);
    if (it == reg.end())
      throw missing_ground_truth_error("no ground energy for '" + inst.id + "' in " +
                                       o.registry_path);
    e0 = it->second;
  }

  std::cout << "method: " << o.method << "\n"
            << "instance: " << inst.id << "\n"
            << "spins: " << inst.spin_count() << "\n"
            << "sweeps: " << sch.length() << "\n"
            << "seed: " << o.seed << "\n"
            << "energy: " << fmt(energy) << "\n";
  if (e0) {
    std::cout << "e0: " << fmt(*e0) << "\n"
              << "e_res: " << fmt(energy - *e0) << "\n"
              << "e_res_per_spin: " << fmt((energy - *e0) / inst.spin_count()) << "\n";
  }
  if (!o.trace.empty() && !o.dry_run) {
    std::ofstream tf(o.trace);
    if (!tf) throw std::runtime_error("cannot open " + o.trace + " for writing");
    write_trace_header(tf);
    tf << trace_body;
    if (!tf) throw std::runtime_error("write failed for " + o.trace);
  }
}

// ----------------------------------------------------------------- campaign

struct CampaignOpts {
  std::vector<std::string> instance_files;
  std::string instances_dir;
  std::string registry_path;
  std::vector<std::string> methods{"ca", "sqa"};
  std::vector<std::string> families{"linear"};
  std::vector<long> t_a;
  int repetitions = 1;
  double beta_start = 0.1;
  double beta_end = 16.0;
  double sqa_beta = 16.0;
  int m_slices = 64;
  TimeBoundary boundary = TimeBoundary::open;
  std::vector<double> gamma0{1.5};
  std::vector<std::string> profile_classical;
  std::vector<std::string> profile_quantum;
  double success_tolerance = 1e-9;
  bool relative_tolerance = false;
  bool uncertified = false;
  double target_probability = 0.9;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int workers = 1;
  std::string abscissa = "sqrtn";
  std::string out_dir;
  bool dry_run = false;
};

ScalingAbscissa parse_abscissa(const std::string& name) {
  if (name == "sqrtn") return ScalingAbscissa::sqrt_n;
  if (name == "n") return ScalingAbscissa::n;
  return ScalingAbscissa::l;
}

std::vector<MethodPlan> build_plans(const CampaignOpts& o) {
  std::vector<std::string> bad;
  std::vector<MethodPlan> plans;
  for (const std::string& m : o.methods)
    for (const std::string& f : o.families) {
      MethodPlan plan;
      plan.method = m == "ca" ? Method::ca : Method::sqa;
      plan.family = f == "linear" ? ScheduleFamily::linear : ScheduleFamily::adaptive;
      plan.beta_start = o.beta_start;
      plan.beta_end = o.beta_end;
      plan.beta = o.sqa_beta;
      plan.m_slices = o.m_slices;
      plan.boundary = o.boundary;
      if (plan.method == Method::ca) {
        if (plan.family == ScheduleFamily::adaptive) {
          if (o.profile_classical.empty())
            bad.push_back("family 'adaptive' with method 'ca' needs --profile-classical");
          for (const std::string& path : o.profile_classical) {
            plan.profile = load_profile(path);
            plans.push_back(plan);
          }
        } else {
          plans.push_back(plan);
        }
      } else {
        if (plan.family == ScheduleFamily::adaptive) {
          if (o.profile_quantum.empty())
            bad.push_back("family 'adaptive' with method 'sqa' needs --profile-quantum");
          for (const std::string& path : o.profile_quantum) {
            plan.profile = load_profile(path);
            plans.push_back(plan);
          }
        } else {
          for (double g0 : o.gamma0) {
            plan.gamma0 = g0;
            plans.push_back(plan);
          }
        }
      }
    }
  if (!bad.empty()) {
    std::string msg = "invalid campaign config: " + bad[0];
    for (std::size_t k = 1; k < bad.size(); ++k) msg += "; " + bad[k];
    throw std::invalid_argument(msg);
  }
  return plans;
}

int cmd_campaign(const CampaignOpts& o) {
  std::vector<std::string> bad;
  if (!o.seed_given) bad.push_back("campaigns are stochastic, a seed is required");
  if (o.registry_path.empty()) bad.push_back("--registry is required");
  if (o.t_a.empty()) bad.push_back("--t-a grid is required");
  if (o.out_dir.empty() && !o.dry_run) bad.push_back("--out-dir is required");
  for (const std::string& m : o.methods)
    if (m != "ca" && m != "sqa") bad.push_back("unknown method '" + m + "'");
  for (const std::string& f : o.families)
    if (f != "linear" && f != "adaptive") bad.push_back("unknown family '" + f + "'");
  if (!bad.empty()) {
    std::string msg = "invalid campaign config: " + bad[0];
    for (std::size_t k = 1; k < bad.size(); ++k) msg += "; " + bad[k];
    throw std::invalid_argument(msg);
  }

  CampaignConfig config;
  config.instances = load_instances(o.instance_files, o.instances_dir);
  config.ground_energies = import_ground_state(o.registry_path);
  config.plans = build_plans(o);
  config.t_a_grid = o.t_a;
  config.repetitions = o.repetitions;
  config.success_tolerance = o.success_tolerance;
  config.relative_tolerance = o.relative_tolerance;
  config.certified_ground = !o.uncertified;
  config.target_probability = o.target_probability;
  config.master_seed = o.seed;
  config.workers = o.workers;

  std::size_t usable = 0;
  std::vector<std::string> skipped;
  for (const SpinGlassInstance& inst : config.instances) {
    if (config.ground_energies.count(inst.id))
      ++usable;
    else
      skipped.push_back(inst.id);
  }

  if (o.dry_run) {
    std::cout << "plans: " << config.plans.size() << "\n"
              << "instances: " << usable << "\n"
              << "skipped: " << skipped.size() << "\n";
    for (const std::string& id : skipped) std::cout << "  no ground energy: " << id << "\n";
    std::cout << "t_a points: " << config.t_a_grid.size() << "\n"
              << "repetitions: " << config.repetitions << "\n"
              << "planned records: "
              << config.plans.size() * config.t_a_grid.size() * usable *
                     static_cast<std::size_t>(config.repetitions)
              << "\n";
    return skipped.empty() ? 0 : 4;
  }

  std::cerr << "running " << config.plans.size() * config.t_a_grid.size() * usable *
                                 static_cast<std::size_t>(config.repetitions)
            << " records on " << config.workers << " worker"
            << (config.workers == 1 ? "" : "s") << "\n";
  CampaignResult result = run_campaign(config);

  fs::create_directories(o.out_dir);
  fs::path dir(o.out_dir);
  write_records_jsonl(result.records, (dir / "records.jsonl").string());
  write_residual_curves_csv(result.records, (dir / "residual_curves.csv").string());
  TtsSummary tts = tts_optimize(result.records, config.target_probability);
  write_tts_csv(tts.entries, (dir / "tts.csv").string());
  write_efforts_csv(tts.optima, (dir / "efforts.csv").string());

  std::cout << "records: " << result.records.size() << "\n"
            << "skipped: " << result.skipped.size() << "\n";
  for (const std::string& id : result.skipped)
    std::cout << "  no ground energy: " << id << "\n";
  for (const TtsOptimum& opt : tts.optima)
    std::cout << "arm " << method_name(opt.method) << "-" << family_name(opt.family)
              << " N=" << opt.n_spins << ": best_t_a=" << opt.best_t_a
              << " median_effort=" << fmt(opt.best_effort)
              << (opt.interior ? "" : " (boundary minimum, widen the t_a grid)") << "\n";

  // scaling fits need >= 3 sizes per (method, family) arm
  std::map<std::pair<int, int>, std::vector<ScalingPoint>> arms;
  for (const TtsOptimum& opt : tts.optima)
    arms[{static_cast<int>(opt.method), static_cast<int>(opt.family)}].push_back(
        {opt.n_spins, opt.instance_efforts});
  std::string axis_label = o.abscissa == "sqrtn" ? "sqrt(N)" : (o.abscissa == "n" ? "N" : "L");
  for (const auto& [arm, points] : arms) {
    std::string label = method_name(static_cast<Method>(arm.first)) + "-" +
                        family_name(static_cast<ScheduleFamily>(arm.second));
    try {
      ScalingFitResult fit =
          scaling_fit(points, parse_abscissa(o.abscissa), 1000, config.master_seed);
      std::cout << "scaling " << label << " (log10 effort vs " << axis_label
                << "): slope=" << fmt(fit.slope) << " ci=[" << fmt(fit.lower) << ","
                << fmt(fit.upper) << "] intercept=" << fmt(fit.intercept) << "\n";
    } catch (const std::exception& e) {
      std::cout << "scaling " << label << ": skipped (" << e.what() << ")\n";
    }
  }
  std::cout << "outputs: " << (dir / "records.jsonl").string() << " "
            << (dir / "residual_curves.csv").string() << " " << (dir / "tts.csv").string()
            << " " << (dir / "efforts.csv").string() << "\n";
  return result.skipped.empty() ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo annealing laboratory for 3d Ising spin glasses"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "toml config file; campaign keys live under a [campaign] section");
  int exit_code = 0;

  GenerateOpts gen;
  CLI::App* cgen = app.add_subcommand("generate", "generate spin glass instance files");
  cgen->add_option("--dims", gen.dims, "lattice dimensions Lx Ly Lz")
      ->expected(3)
      ->required();
  cgen->add_option("--boundary", gen.boundary, "spatial boundary (default periodic)")
      ->transform(CLI::CheckedTransformer(kBoundaryNames, CLI::ignore_case));
  cgen->add_option("--count", gen.count, "number of instances (seeds seed, seed+1, ...)");
  cgen->add_option("--seed", gen.seed, "base coupling seed")
      ->each([&gen](const std::string&) { gen.seed_given = true; });
  cgen->add_option("--out-dir", gen.out_dir, "output directory (default .)");
  cgen->add_flag("--ferro", gen.ferro, "all couplings +1 instead of random");
  cgen->add_option("--field-site", gen.field_site, "site index for a local field (ferro)");
  cgen->add_option("--field", gen.field, "local field strength (ferro)");
  cgen->add_flag("--dry-run", gen.dry_run, "print paths, write nothing");
  cgen->callback([&] { cmd_generate(gen); });

  GroundstateOpts gst;
  CLI::App* cgst = app.add_subcommand("groundstate", "build a ground-state registry");
  cgst->add_option("--instance", gst.instance_files, "instance file (repeatable)");
  cgst->add_option("--instances-dir", gst.instances_dir, "directory of *.txt instances");
  cgst->add_option("--method", gst.method, "exact | anneal (default exact)")
      ->check(CLI::IsMember({"exact", "anneal"}));
  cgst->add_option("--max-spins", gst.max_spins, "enumeration limit for exact (default 30)");
  cgst->add_option("--restarts", gst.restarts, "anneal presolver restarts (default 32)");
  cgst->add_option("--sweeps", gst.sweeps, "anneal presolver sweeps (default 20000)");
  cgst->add_option("--seed", gst.seed, "presolver seed")
      ->each([&gst](const std::string&) { gst.seed_given = true; });
  cgst->add_option("--out", gst.out, "registry file (default: print to stdout)");
  cgst->add_option("--merge", gst.merge, "existing registry to extend");
  cgst->add_flag("--dry-run", gst.dry_run, "solve and report, write nothing");
  cgst->callback([&] { cmd_groundstate(gst); });

  ProfileOpts prof;
  CLI::App* cprof = app.add_subcommand("profile", "measure a fluctuation profile");
  cprof->add_option("--kind", prof.kind, "classical | quantum")
      ->check(CLI::IsMember({"classical", "quantum"}))
      ->required();
  cprof->add_option("--instance", prof.instance_files, "instance file (repeatable)");
  cprof->add_option("--instances-dir", prof.instances_dir, "directory of *.txt instances");
  cprof->add_option("--grid-start", prof.grid_start,
                    "first control value (default 0.1 beta / 0 s)");
  cprof->add_option("--grid-end", prof.grid_end,
                    "last control value (default 16 beta / 0.97 s)");
  cprof->add_option("--grid-points", prof.grid_points, "grid size (default 33)");
  cprof->add_option("--warmup", prof.warmup, "warmup sweeps per point (default 500)");
  cprof->add_option("--measure", prof.measure, "measure sweeps per point (default 2000)");
  cprof->add_option("--batches", prof.batches, "error-bar batches (default 16)");
  cprof->add_option("--seed", prof.seed, "sampling seed")->required();
  cprof->add_option("--beta", prof.beta, "quantum: inverse temperature (default 16)");
  cprof->add_option("--gamma0", prof.gamma0, "quantum: initial field (default 10)");
  cprof->add_option("--m-slices", prof.m_slices, "quantum: imaginary-time slices (default 64)");
  cprof->add_option("--time-boundary", prof.boundary,
                    "quantum: open | periodic (default periodic)")
      ->transform(CLI::CheckedTransformer(kTimeBoundaryNames, CLI::ignore_case));
  cprof->add_option("--out", prof.out, "profile csv path")->required();
  cprof->add_flag("--dry-run", prof.dry_run, "measure and report, write nothing");
  cprof->callback([&] { cmd_profile(prof); });

  ScheduleOpts sch;
  CLI::App* csch = app.add_subcommand("schedule", "build an annealing schedule");
  csch->add_option("--kind", sch.kind, "linear | exponential | hybrid | adaptive")
      ->check(CLI::IsMember({"linear", "exponential", "hybrid", "adaptive"}))
      ->required();
  csch->add_option("--control", sch.control, "beta | gamma for linear/exponential")
      ->check(CLI::IsMember({"beta", "gamma"}));
  csch->add_option("--start", sch.start, "first control value")
      ->each([&sch](const std::string&) { sch.start_given = true; });
  csch->add_option("--end", sch.end, "last control value")
      ->each([&sch](const std::string&) { sch.end_given = true; });
  csch->add_option("--steps", sch.steps, "schedule length in sweeps")->required();
  csch->add_option("--beta-start", sch.beta_start, "hybrid: first beta (default 0.1)");
  csch->add_option("--beta-end", sch.beta_end, "hybrid: last beta (default 16)");
  csch->add_option("--gamma0", sch.gamma0, "hybrid: initial field (default 1.5)");
  csch->add_option("--profile", sch.profile_path, "adaptive: fluctuation profile csv");
  csch->add_option("--out", sch.out, "schedule csv path")->required();
  csch->add_flag("--dry-run", sch.dry_run, "build and report, write nothing");
  csch->callback([&] { cmd_schedule(sch); });

  AnnealOpts ann;
  CLI::App* cann = app.add_subcommand("anneal", "run one annealing chain");
  cann->add_option("--method", ann.method, "ca | sqa")
      ->check(CLI::IsMember({"ca", "sqa"}))
      ->required();
  cann->add_option("--instance", ann.instance_path, "instance file")->required();
  cann->add_option("--schedule", ann.schedule_path, "schedule csv")->required();
  cann->add_option("--seed", ann.seed, "chain seed")->required();
  cann->add_option("--measure-every", ann.measure_every,
                   "sweeps between trace samples (default 0 = none)");
  cann->add_option("--trace", ann.trace, "write per-sample diagnostics csv here");
  cann->add_option("--pimc-beta", ann.pimc_beta,
                   "sqa: inverse temperature for plain gamma schedules (default 16)");
  cann->add_option("--m-slices", ann.m_slices, "sqa: imaginary-time slices (default 64)");
  cann->add_option("--time-boundary", ann.boundary, "sqa: open | periodic (default open)")
      ->transform(CLI::CheckedTransformer(kTimeBoundaryNames, CLI::ignore_case));
  cann->add_option("--readout", ann.readout, "sqa: best | random slice (default best)")
      ->check(CLI::IsMember({"best", "random"}));
  cann->add_option("--e0", ann.e0, "known ground energy, adds residual lines")
      ->each([&ann](const std::string&) { ann.e0_given = true; });
  cann->add_option("--registry", ann.registry_path, "ground-state registry to look up e0");
  cann->add_flag("--dry-run", ann.dry_run, "run and report, write no trace file");
  cann->callback([&] { cmd_anneal(ann); });

  CampaignOpts camp;
  CLI::App* ccamp = app.add_subcommand("campaign", "run a benchmark campaign");
  ccamp->fallthrough();  // lets `campaign --config f.toml` reach the app-level option
  ccamp->add_option("--instance", camp.instance_files, "instance file (repeatable)");
  ccamp->add_option("--instances-dir", camp.instances_dir, "directory of *.txt instances");
  ccamp->add_option("--registry", camp.registry_path, "ground-state registry file");
  ccamp->add_option("--methods", camp.methods, "subset of {ca, sqa} (default both)");
  ccamp->add_option("--families", camp.families,
                    "subset of {linear, adaptive} (default linear)");
  ccamp->add_option("--t-a", camp.t_a, "annealing-time grid in sweeps");
  ccamp->add_option("--repetitions", camp.repetitions, "runs per (plan, t_a, instance)");
  ccamp->add_option("--beta-start", camp.beta_start, "ca: first beta (default 0.1)");
  ccamp->add_option("--beta-end", camp.beta_end, "ca: last beta (default 16)");
  ccamp->add_option("--sqa-beta", camp.sqa_beta, "sqa: inverse temperature (default 16)");
  ccamp->add_option("--m-slices", camp.m_slices, "sqa: imaginary-time slices (default 64)");
  ccamp->add_option("--time-boundary", camp.boundary, "sqa: open | periodic (default open)")
      ->transform(CLI::CheckedTransformer(kTimeBoundaryNames, CLI::ignore_case));
  ccamp->add_option("--gamma0", camp.gamma0,
                    "sqa linear: initial fields, one plan each (default 1.5)");
  ccamp->add_option("--profile-classical", camp.profile_classical,
                    "ca adaptive: profile csv, one plan each");
  ccamp->add_option("--profile-quantum", camp.profile_quantum,
                    "sqa adaptive: profile csv, one plan each");
  ccamp->add_option("--success-tolerance", camp.success_tolerance,
                    "E_res threshold for success (default 1e-9)");
  ccamp->add_flag("--relative-tolerance", camp.relative_tolerance,
                  "read the tolerance as a fraction of |E0|");
  ccamp->add_flag("--uncertified", camp.uncertified,
                  "registry holds presolved upper bounds, runs may beat them");
  ccamp->add_option("--target-probability", camp.target_probability,
                    "TTS target success probability (default 0.9)");
  ccamp->add_option("--seed", camp.seed, "campaign master seed")
      ->each([&camp](const std::string&) { camp.seed_given = true; });
  ccamp->add_option("--workers", camp.workers, "worker threads, 1 = sequential");
  ccamp->add_option("--abscissa", camp.abscissa, "scaling fit x: sqrtn | n | l")
      ->check(CLI::IsMember({"sqrtn", "n", "l"}));
  ccamp->add_option("--out-dir", camp.out_dir, "output directory");
  ccamp->add_flag("--dry-run", camp.dry_run, "print the planned matrix, run nothing");
  ccamp->callback([&] { exit_code = cmd_campaign(camp); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const missing_ground_truth_error& e) {
    std::cerr << "missing ground truth: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return exit_code;
}
