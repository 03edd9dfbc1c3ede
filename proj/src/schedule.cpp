#include "annealab/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace annealab {

namespace {

void check_direction(const std::vector<double>& v, bool nondecreasing, const char* name) {
  for (double x : v)
    if (!std::isfinite(x) || x < 0.0)
      throw std::invalid_argument(std::string(name) + " values must be finite and >= 0");
  for (std::size_t k = 1; k < v.size(); ++k) {
    bool ok = nondecreasing ? v[k] >= v[k - 1] : v[k] <= v[k - 1];
    if (!ok)
      throw std::invalid_argument(std::string(name) + " must be " +
                                  (nondecreasing ? "non-decreasing" : "non-increasing") +
                                  " (violated at step " + std::to_string(k) + ")");
  }
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void Schedule::validate() const {
  switch (kind) {
    case ScheduleKind::classical_beta:
      if (beta.empty() || !gamma.empty())
        throw std::invalid_argument("classical schedule needs beta points only");
      check_direction(beta, true, "beta");
      break;
    case ScheduleKind::quantum_gamma:
      if (gamma.empty() || !beta.empty())
        throw std::invalid_argument("quantum schedule needs gamma points only");
      check_direction(gamma, false, "gamma");
      if (gamma.back() != 0.0)
        throw std::invalid_argument("quantum schedule must end at gamma = 0");
      break;
    case ScheduleKind::hybrid:
      if (beta.size() != gamma.size() || beta.empty())
        throw std::invalid_argument("hybrid schedule needs matching beta and gamma points");
      check_direction(beta, true, "beta");
      check_direction(gamma, false, "gamma");
      break;
  }
}

Schedule linear_schedule(ScheduleKind kind, double start, double end, long t_steps) {
  if (kind == ScheduleKind::hybrid)
    throw std::invalid_argument("use hybrid_schedule for the hybrid kind");
  if (t_steps < 2) throw std::invalid_argument("schedule needs at least 2 steps");
  std::vector<double> pts(t_steps);
  for (long k = 0; k < t_steps; ++k)
    pts[k] = start + (end - start) * static_cast<double>(k) / static_cast<double>(t_steps - 1);
  pts.front() = start;
  pts.back() = end;
  Schedule s;
  s.kind = kind;
  (kind == ScheduleKind::classical_beta ? s.beta : s.gamma) = std::move(pts);
  s.validate();
  return s;
}

Schedule exponential_schedule(ScheduleKind kind, double start, double end, long t_steps) {
  if (kind == ScheduleKind::hybrid)
    throw std::invalid_argument("use hybrid_schedule for the hybrid kind");
  if (t_steps < 2) throw std::invalid_argument("schedule needs at least 2 steps");
  if (start <= 0.0)
    throw std::invalid_argument("exponential schedule needs a positive start value");
  if (end < 0.0) throw std::invalid_argument("end value must be >= 0");
  std::vector<double> pts(t_steps);
  double tm1 = static_cast<double>(t_steps - 1);
  if (end > 0.0) {
    double ratio = end / start;
    for (long k = 0; k < t_steps; ++k)
      pts[k] = start * std::pow(ratio, static_cast<double>(k) / tm1);
  } else {
    // geometric in (value + eps), shifted back so the trajectory can reach 0
    const double eps = 1e-3;
    double ratio = eps / (start + eps);
    for (long k = 0; k < t_steps; ++k)
      pts[k] = (start + eps) * std::pow(ratio, static_cast<double>(k) / tm1) - eps;
  }
  pts.front() = start;
  pts.back() = end;
  Schedule s;
  s.kind = kind;
  (kind == ScheduleKind::classical_beta ? s.beta : s.gamma) = std::move(pts);
  s.validate();
  return s;
}

Schedule hybrid_schedule(double beta_start, double beta_end, double gamma0, long t_steps) {
  if (t_steps < 2)
    throw std::invalid_argument("hybrid schedule cannot hit both endpoints with fewer than 2 steps");
  Schedule s;
  s.kind = ScheduleKind::hybrid;
  s.beta.resize(t_steps);
  s.gamma.resize(t_steps);
  double tm1 = static_cast<double>(t_steps - 1);
  for (long k = 0; k < t_steps; ++k) {
    double f = static_cast<double>(k) / tm1;
    s.beta[k] = beta_start + (beta_end - beta_start) * f;
    s.gamma[k] = gamma0 * (1.0 - f);
  }
  s.beta.front() = beta_start;
  s.beta.back() = beta_end;
  s.gamma.front() = gamma0;
  s.gamma.back() = 0.0;
  s.validate();
  return s;
}

void FluctuationProfile::validate() const {
  if (control.empty()) throw std::invalid_argument("profile grid is empty");
  if (control.size() != denominator.size() ||
      (!stderr_.empty() && stderr_.size() != control.size()))
    throw std::invalid_argument("profile column lengths disagree");
  for (std::size_t k = 0; k < control.size(); ++k) {
    if (!std::isfinite(control[k]) || !std::isfinite(denominator[k]))
      throw std::invalid_argument("profile contains non-finite values");
    if (denominator[k] < 0.0)
      throw std::invalid_argument("denominator values must be >= 0");
    if (k > 0 && control[k] <= control[k - 1])
      throw std::invalid_argument("profile grid must be strictly increasing");
  }
}

double FluctuationProfile::interpolate(double c) const {
  if (c <= control.front()) return denominator.front();
  if (c >= control.back()) return denominator.back();
  auto it = std::upper_bound(control.begin(), control.end(), c);
  std::size_t hi = static_cast<std::size_t>(it - control.begin());
  double f = (c - control[hi - 1]) / (control[hi] - control[hi - 1]);
  return denominator[hi - 1] * (1.0 - f) + denominator[hi] * f;
}

Schedule build_adaptive_schedule(const FluctuationProfile& profile, long t_steps,
                                 double start, double end, double* lambda_out) {
  profile.validate();
  if (t_steps < 2) throw std::invalid_argument("schedule needs at least 2 steps");
  if (!(end > start)) throw std::invalid_argument("need end > start");
  // quantum grids stop short of s = 1 (the transverse field there is zero and
  // carries no signal), so the last grid value extends to the endpoint
  double top = profile.kind == ProfileKind::quantum_s
                   ? std::max(profile.control.back(), 1.0)
                   : profile.control.back();
  if (start < profile.control.front() - 1e-12 || end > top + 1e-12)
    throw std::invalid_argument("profile grid does not cover [start, end]");
  double dmax = *std::max_element(profile.denominator.begin(), profile.denominator.end());
  if (dmax <= 0.0)
    throw std::invalid_argument("profile is identically zero, no step size exists");
  // isolated zeros get a floor so the iteration stays finite
  const double dfloor = 1e-12 * dmax;
  auto dval = [&](double c) { return std::max(profile.interpolate(c), dfloor); };

  // position after t_steps-1 uncapped steps
  auto final_control = [&](double lambda) {
    double c = start;
    for (long k = 0; k + 1 < t_steps; ++k) {
      c += lambda / dval(c);
      if (c > end + (end - start)) return c;  // far overshoot, stop early
    }
    return c;
  };

  double lo = 0.0;
  double hi = (end - start) * dmax / static_cast<double>(t_steps - 1);
  for (int i = 0; i < 200 && final_control(hi) < end; ++i) hi *= 2.0;
  if (final_control(hi) < end)
    throw std::invalid_argument("no step normalization reaches the end value");
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (final_control(mid) < end ? lo : hi) = mid;
  }
  double lambda = 0.5 * (lo + hi);
  if (lambda_out) *lambda_out = lambda;

  std::vector<double> ctrl(t_steps);
  ctrl[0] = start;
  double c = start;
  for (long k = 1; k < t_steps; ++k) {
    c = std::min(c + lambda / dval(c), end);
    ctrl[k] = c;
  }
  ctrl.back() = end;

  Schedule s;
  if (profile.kind == ProfileKind::classical_beta) {
    s.kind = ScheduleKind::classical_beta;
    s.beta = std::move(ctrl);
  } else {
    s.kind = ScheduleKind::quantum_gamma;
    s.gamma.resize(t_steps);
    for (long k = 0; k < t_steps; ++k)
      s.gamma[k] = profile.gamma0 * (1.0 - ctrl[k]);
    s.gamma.back() = 0.0;  // exact when end = 1
  }
  s.validate();
  return s;
}

void save_schedule(const Schedule& s, const std::string& path) {
  s.validate();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "sweep,beta,gamma\n";
  for (std::size_t k = 0; k < s.length(); ++k) {
    out << k << ',';
    if (schedule_has_beta(s.kind)) out << fmt_double(s.beta[k]);
    out << ',';
    if (schedule_has_gamma(s.kind)) out << fmt_double(s.gamma[k]);
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

Schedule load_schedule(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "sweep,beta,gamma")
    throw std::runtime_error(path + ":1: expected header 'sweep,beta,gamma'");
  Schedule s;
  bool any_beta = false, any_gamma = false;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string sweep, bstr, gstr;
    std::getline(ss, sweep, ',');
    std::getline(ss, bstr, ',');
    std::getline(ss, gstr);
    if (sweep.empty())
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": malformed row");
    if (!bstr.empty()) {
      s.beta.push_back(std::stod(bstr));
      any_beta = true;
    }
    if (!gstr.empty()) {
      s.gamma.push_back(std::stod(gstr));
      any_gamma = true;
    }
  }
  if (any_beta && any_gamma)
    s.kind = ScheduleKind::hybrid;
  else if (any_beta)
    s.kind = ScheduleKind::classical_beta;
  else if (any_gamma)
    s.kind = ScheduleKind::quantum_gamma;
  else
    throw std::runtime_error(path + ": no schedule points");
  s.validate();
  return s;
}

void save_profile(const FluctuationProfile& p, const std::string& path) {
  p.validate();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  if (p.kind == ProfileKind::classical_beta)
    out << "# profile classical_beta ensemble=" << p.ensemble_size << '\n';
  else
    out << "# profile quantum_s beta=" << fmt_double(p.beta)
        << " gamma0=" << fmt_double(p.gamma0) << " ensemble=" << p.ensemble_size << '\n';
  out << "control,denominator,stderr,n\n";
  for (std::size_t k = 0; k < p.control.size(); ++k)
    out << fmt_double(p.control[k]) << ',' << fmt_double(p.denominator[k]) << ','
        << fmt_double(p.stderr_.empty() ? 0.0 : p.stderr_[k]) << ',' << p.ensemble_size
        << '\n';
  if (!out) throw std::runtime_error("write failed for " + path);
}

FluctuationProfile load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  FluctuationProfile p;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# profile ", 0) != 0)
    throw std::runtime_error(path + ":1: expected '# profile ...' metadata line");
  {
    std::istringstream ss(line.substr(10));
    std::string kind, kv;
    ss >> kind;
    if (kind == "classical_beta")
      p.kind = ProfileKind::classical_beta;
    else if (kind == "quantum_s")
      p.kind = ProfileKind::quantum_s;
    else
      throw std::runtime_error(path + ":1: unknown profile kind '" + kind + "'");
    while (ss >> kv) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) continue;
      std::string key = kv.substr(0, eq);
      double val = std::stod(kv.substr(eq + 1));
      if (key == "beta")
        p.beta = val;
      else if (key == "gamma0")
        p.gamma0 = val;
      else if (key == "ensemble")
        p.ensemble_size = static_cast<int>(val);
    }
  }
  if (!std::getline(in, line) || line != "control,denominator,stderr,n")
    throw std::runtime_error(path + ":2: expected header 'control,denominator,stderr,n'");
  int lineno = 2;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string c, d, e, n;
    std::getline(ss, c, ',');
    std::getline(ss, d, ',');
    std::getline(ss, e, ',');
    std::getline(ss, n);
    if (c.empty() || d.empty())
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": malformed row");
    p.control.push_back(std::stod(c));
    p.denominator.push_back(std::stod(d));
    p.stderr_.push_back(e.empty() ? 0.0 : std::stod(e));
  }
  p.validate();
  return p;
}

}  // namespace annealab
