#pragma once

// Per-sweep control trajectories for the annealers: linear, exponential and
// hybrid constructors plus adaptive schedules driven by measured fluctuation
// profiles, where the control steps inversely to the local fluctuation size.

#include <cstddef>
#include <string>
#include <vector>

namespace annealab {

enum class ScheduleKind { classical_beta, quantum_gamma, hybrid };

inline bool schedule_has_beta(ScheduleKind k) { return k != ScheduleKind::quantum_gamma; }
inline bool schedule_has_gamma(ScheduleKind k) { return k != ScheduleKind::classical_beta; }

struct Schedule {
  ScheduleKind kind = ScheduleKind::classical_beta;
  std::vector<double> beta;   // classical_beta and hybrid
  std::vector<double> gamma;  // quantum_gamma and hybrid

  std::size_t length() const {
    return kind == ScheduleKind::quantum_gamma ? gamma.size() : beta.size();
  }
  // monotone in the right direction, finite, nonnegative; quantum ends at 0
  void validate() const;
};

Schedule linear_schedule(ScheduleKind kind, double start, double end, long t_steps);

// geometric interpolation; a quantum endpoint of 0 uses a shifted-geometric
// construction with floor 1e-3 and the final point forced to exactly 0
Schedule exponential_schedule(ScheduleKind kind, double start, double end, long t_steps);

// beta linear start->end while gamma falls linearly gamma0 -> 0
Schedule hybrid_schedule(double beta_start, double beta_end, double gamma0, long t_steps);

enum class ProfileKind { classical_beta, quantum_s };

// measured step-size denominator on a control grid: sigma(beta) = var(E) for
// the classical rule, beta*Gamma0*sqrt(1 - <sx>^2) (or the general-form
// variance) on an s grid for the quantum rule
struct FluctuationProfile {
  ProfileKind kind = ProfileKind::classical_beta;
  std::vector<double> control;
  std::vector<double> denominator;
  std::vector<double> stderr_;
  int ensemble_size = 0;
  double beta = 0.0;    // quantum only: measurement inverse temperature
  double gamma0 = 0.0;  // quantum only: initial transverse field

  void validate() const;
  // piecewise-linear, clamped to the grid range
  double interpolate(double control_value) const;
};

// iterates control_{k+1} = control_k + lambda / D(control_k), with lambda
// bisected so the last of t_steps points lands on `end` (then snapped there).
// start/end are beta values (classical) or s values (quantum); the quantum
// result is emitted as gamma = (1-s)*gamma0. lambda_out reports the step
// normalization if non-null.
Schedule build_adaptive_schedule(const FluctuationProfile& profile, long t_steps,
                                 double start, double end, double* lambda_out = nullptr);

// csv "sweep,beta,gamma" with the inapplicable column empty
void save_schedule(const Schedule& s, const std::string& path);
Schedule load_schedule(const std::string& path);

// csv "control,denominator,stderr,n" preceded by a metadata comment line
void save_profile(const FluctuationProfile& p, const std::string& path);
FluctuationProfile load_profile(const std::string& path);

}  // namespace annealab
