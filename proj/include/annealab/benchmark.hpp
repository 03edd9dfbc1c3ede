#pragma once

// Residual-energy campaigns over instance ensembles, success-probability and
// repetition statistics, time-to-solution optimization, scaling fits, and
// file emission of records and aggregate tables.

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "annealab/exact.hpp"
#include "annealab/lattice.hpp"
#include "annealab/schedule.hpp"
#include "annealab/sqa.hpp"

namespace annealab {

enum class Method { ca, sqa };
enum class ScheduleFamily { linear, adaptive };

std::string method_name(Method m);
std::string family_name(ScheduleFamily f);

struct BenchmarkRecord {
  long index = 0;
  std::string instance_id;
  int n_spins = 0;
  Method method = Method::ca;
  ScheduleFamily family = ScheduleFamily::linear;
  std::string schedule_desc;
  long t_a = 0;
  std::uint64_t seed = 0;
  double energy = 0.0;
  double e0 = 0.0;
  double e_res = 0.0;
  double e_res_per_spin = 0.0;
  bool success = false;
};

// one (method, schedule family) arm of a campaign with its engine settings
struct MethodPlan {
  Method method = Method::ca;
  ScheduleFamily family = ScheduleFamily::linear;
  double beta_start = 0.1;  // ca only
  double beta_end = 16.0;   // ca only
  double gamma0 = 1.5;      // sqa linear; adaptive uses the profile's value
  double beta = 16.0;       // sqa
  int m_slices = 64;        // sqa
  TimeBoundary boundary = TimeBoundary::open;  // sqa
  std::optional<FluctuationProfile> profile;   // required for adaptive
};

struct CampaignConfig {
  std::vector<SpinGlassInstance> instances;
  GroundStateRegistry ground_energies;
  std::vector<MethodPlan> plans;
  std::vector<long> t_a_grid;
  int repetitions = 1;
  double success_tolerance = 1e-9;
  // success means E_res <= tolerance, or E_res <= tolerance * |E0| when relative
  bool relative_tolerance = false;
  // presolved registries are upper bounds, so runs may land below them; only
  // certified (oracle-backed) registries turn E_res < -1e-9 into an abort
  bool certified_ground = true;
  double target_probability = 0.9;  // the TTS target, s-bar
  std::uint64_t master_seed = 0;
  int workers = 1;
};

// best energy over annealing restarts, each polished by greedy descent; for
// building ground-state registries beyond exact-enumeration sizes. Not
// guaranteed optimal, so registries built this way are lower bounds on E0
// quality, not certificates.
double presolve_ground_energy(const SpinGlassInstance& inst, int restarts = 32,
                              long sweeps = 20000, std::uint64_t seed = 0);

struct CampaignResult {
  std::vector<BenchmarkRecord> records;  // ordered by deterministic index
  std::vector<std::string> skipped;      // instance ids lacking ground truth
};

CampaignResult run_campaign(const CampaignConfig& config);

struct Repetitions {
  double r = 0.0;
  long r_int = 0;
};

// repetitions to hit the ground state at least once with probability sbar,
// given per-run success probability p; p=0 yields an infinite sentinel
Repetitions repetitions_needed(double p, double sbar);

struct SuccessEstimate {
  long successes = 0;
  long trials = 0;
  double p = 0.0;
  double lower = 0.0;  // Wilson 95%
  double upper = 1.0;
};

SuccessEstimate estimate_success_probability(long successes, long trials);
SuccessEstimate estimate_success_probability(std::span<const BenchmarkRecord> records);

struct TtsEntry {
  Method method = Method::ca;
  ScheduleFamily family = ScheduleFamily::linear;
  int n_spins = 0;
  long t_a = 0;
  SuccessEstimate pooled;        // over all instances and repetitions
  double median_effort = 0.0;    // median over instances of t_a * R(p_instance)
};

struct TtsOptimum {
  Method method = Method::ca;
  ScheduleFamily family = ScheduleFamily::linear;
  int n_spins = 0;
  long best_t_a = 0;
  double best_effort = 0.0;
  bool interior = false;  // false warns that the t_a grid is likely too narrow
  // per-instance efforts at best_t_a, for scaling fits and bootstrap
  std::vector<double> instance_efforts;
};

struct TtsSummary {
  std::vector<TtsEntry> entries;
  std::vector<TtsOptimum> optima;
};

std::vector<TtsEntry> compute_tts(const std::vector<BenchmarkRecord>& records, double sbar);
// argmin of median effort over the t_a grid per (method, family, N)
TtsSummary tts_optimize(const std::vector<BenchmarkRecord>& records, double sbar);

enum class ScalingAbscissa { sqrt_n, n, l };

struct ScalingPoint {
  int n_spins = 0;
  std::vector<double> instance_efforts;
};

struct ScalingFitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double lower = 0.0;  // 95% bootstrap percentile interval on the slope
  double upper = 0.0;
};

// least squares of log10(median effort) against sqrt(N), N, or L = N^(1/3);
// the interval comes from resampling instances within each size
ScalingFitResult scaling_fit(const std::vector<ScalingPoint>& points,
                             ScalingAbscissa abscissa = ScalingAbscissa::sqrt_n,
                             int n_bootstrap = 1000, std::uint64_t seed = 0);

// jsonl, one record per line, schema v1 (see README)
void write_records_jsonl(const std::vector<BenchmarkRecord>& records,
                         const std::string& path);
std::vector<BenchmarkRecord> read_records_jsonl(const std::string& path);
std::string record_to_json(const BenchmarkRecord& r);
BenchmarkRecord parse_record_json(const std::string& line);

// csv "method,N,t_a,median_Eres_per_spin,q25,q75"; the method column holds
// "<method>-<family>"
void write_residual_curves_csv(const std::vector<BenchmarkRecord>& records,
                               const std::string& path);
// csv "method,N,t_a,successes,trials,p,p_lower,p_upper,median_effort"
void write_tts_csv(const std::vector<TtsEntry>& entries, const std::string& path);
// csv "method,N,best_t_a,best_effort,interior"
void write_efforts_csv(const std::vector<TtsOptimum>& optima, const std::string& path);

inline constexpr double kInfiniteEffort = std::numeric_limits<double>::infinity();

}  // namespace annealab
