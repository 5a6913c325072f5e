#include "disklab/profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "disklab/errors.hpp"

namespace disklab {

namespace {

double hermite(double x0, double f0, double d0, double x1, double f1, double d1, double x) {
  const double h = x1 - x0;
  const double t = (x - x0) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + t) * h * d0 +
         (-2 * t3 + 3 * t2) * f1 + (t3 - t2) * h * d1;
}

double hermite_deriv(double x0, double f0, double d0, double x1, double f1, double d1,
                     double x) {
  const double h = x1 - x0;
  const double t = (x - x0) / h;
  const double t2 = t * t;
  return ((6 * t2 - 6 * t) * f0 + (3 * t2 - 4 * t + 1) * h * d0 + (-6 * t2 + 6 * t) * f1 +
          (3 * t2 - 2 * t) * h * d1) /
         h;
}

void append_double(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

}  // namespace

ProfileSample ProfileTrajectory::at(double s) const {
  if (samples.size() < 2) throw DomainError("trajectory has fewer than two samples");
  const double s0 = samples.front().s;
  const double s1 = samples.back().s;
  const double sc = std::clamp(s, s0, s1);
  auto it = std::lower_bound(samples.begin(), samples.end(), sc,
                             [](const ProfileSample& a, double v) { return a.s < v; });
  if (it == samples.begin()) ++it;
  if (it == samples.end()) --it;
  const ProfileSample& b = *it;
  const ProfileSample& a = *(it - 1);
  if (b.s <= a.s) throw DomainError("non-increasing arclength in trajectory");

  ProfileSample out;
  out.s = sc;
  out.r = hermite(a.s, a.r, std::cos(a.phi), b.s, b.r, std::cos(b.phi), sc);
  out.z = hermite(a.s, a.z, std::sin(a.phi), b.s, b.z, std::sin(b.phi), sc);
  out.phi = hermite(a.s, a.phi, a.phi_prime, b.s, b.phi, b.phi_prime, sc);
  out.H = hermite(a.s, a.H, a.H_prime, b.s, b.H, b.H_prime, sc);
  out.phi_prime = hermite_deriv(a.s, a.phi, a.phi_prime, b.s, b.phi, b.phi_prime, sc);
  out.H_prime = hermite_deriv(a.s, a.H, a.H_prime, b.s, b.H, b.H_prime, sc);
  return out;
}

ProfileTrajectory ProfileTrajectory::scaled(double c) const {
  if (!(c > 0.0)) throw DomainError("scale factor must be positive");
  ProfileTrajectory out = *this;
  out.length = length * c;
  for (auto& smp : out.samples) {
    smp.s *= c;
    smp.r *= c;
    smp.z *= c;
    smp.H /= c;
    smp.phi_prime /= c;
    smp.H_prime /= (c * c);
  }
  for (auto& ev : out.events) ev.s *= c;
  return out;
}

ProfileTrajectory spherical_cap_profile(double H0, double alpha, int n, double z0) {
  if (!(H0 < 0.0)) throw DomainError("spherical cap requires H0 < 0");
  if (!(alpha > 0.0) || alpha > 3.15) throw DomainError("polar angle out of range");
  if (n < 2) throw DomainError("need at least two samples");
  const double R = -1.0 / H0;
  ProfileTrajectory traj;
  traj.length = R * alpha;
  traj.samples.resize(n);
  for (int i = 0; i < n; ++i) {
    const double s = traj.length * i / (n - 1);
    ProfileSample& q = traj.samples[i];
    q.s = s;
    q.r = R * std::sin(s / R);
    q.z = (z0 - R) + R * std::cos(s / R);
    q.phi = -s / R;
    q.H = H0;
    q.phi_prime = -1.0 / R;
    q.H_prime = 0.0;
  }
  traj.samples.front().r = 0.0;
  traj.h_sign = -1;
  return traj;
}

ProfileTrajectory planar_disk_profile(double R, int n, double z0) {
  if (!(R > 0.0)) throw DomainError("disk radius must be positive");
  if (n < 2) throw DomainError("need at least two samples");
  ProfileTrajectory traj;
  traj.length = R;
  traj.samples.resize(n);
  for (int i = 0; i < n; ++i) {
    ProfileSample& q = traj.samples[i];
    q.s = R * i / (n - 1);
    q.r = q.s;
    q.z = z0;
    q.phi = 0.0;
    q.H = 0.0;
    q.phi_prime = 0.0;
    q.H_prime = 0.0;
  }
  traj.h_sign = 0;
  return traj;
}

std::string profile_to_csv(const ProfileTrajectory& traj) {
  std::string out = "varsigma,r,z,phi,H,K\n";
  for (const auto& q : traj.samples) {
    const double K = q.r > 0.0 ? q.phi_prime * std::sin(q.phi) / q.r
                               : q.phi_prime * q.phi_prime;
    append_double(out, q.s);
    out += ',';
    append_double(out, q.r);
    out += ',';
    append_double(out, q.z);
    out += ',';
    append_double(out, q.phi);
    out += ',';
    append_double(out, q.H);
    out += ',';
    append_double(out, K);
    out += '\n';
  }
  return out;
}

ProfileTrajectory profile_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw DomainError("empty profile CSV");
  ProfileTrajectory traj;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ProfileSample q;
    double K = 0.0;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf", &q.s, &q.r, &q.z, &q.phi, &q.H,
                    &K) != 6)
      throw DomainError("malformed profile CSV row: " + line);
    // Recover phi' from K where possible; H' by finite differences below.
    q.phi_prime = q.r > 0.0 && std::abs(std::sin(q.phi)) > 1e-14
                      ? K * q.r / std::sin(q.phi)
                      : 2.0 * q.H - (q.r > 0.0 ? std::sin(q.phi) / q.r : q.H);
    traj.samples.push_back(q);
  }
  if (traj.samples.size() < 2) throw DomainError("profile CSV has fewer than two rows");
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    auto& q = traj.samples[i];
    const auto& a = traj.samples[i == 0 ? 0 : i - 1];
    const auto& b = traj.samples[std::min(i + 1, traj.samples.size() - 1)];
    q.H_prime = (b.s > a.s) ? (b.H - a.H) / (b.s - a.s) : 0.0;
  }
  traj.length = traj.samples.back().s;
  return traj;
}

}  // namespace disklab
