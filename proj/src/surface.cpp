#include "disklab/surface.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "disklab/errors.hpp"
#include "disklab/quadrature.hpp"
#include "disklab/vec3.hpp"

namespace disklab {

namespace {
constexpr double kPi = std::numbers::pi;
}

SurfaceCurvatures profile_curvatures(const ProfileState& state, double phi_prime) {
  if (!(state.r > 0.0)) throw AxisError("profile curvatures need r > 0");
  SurfaceCurvatures c;
  c.k_meridian = phi_prime;
  c.k_parallel = std::sin(state.phi) / state.r;
  c.H = 0.5 * (c.k_meridian + c.k_parallel);
  c.K = c.k_meridian * c.k_parallel;
  return c;
}

SurfaceCurvatures axis_curvatures(double phi_prime0) {
  SurfaceCurvatures c;
  c.k_meridian = phi_prime0;
  c.k_parallel = phi_prime0;
  c.H = phi_prime0;
  c.K = phi_prime0 * phi_prime0;
  return c;
}

ParallelData parallel_data(const ProfileState& state) {
  if (!(state.r > 0.0)) throw AxisError("parallel data needs r > 0");
  ParallelData d;
  d.kappa_g = -std::cos(state.phi) / state.r;
  d.kappa_n = std::sin(state.phi) / state.r;
  d.tau_g = 0.0;
  d.kappa = 1.0 / state.r;
  d.theta = std::atan2(d.kappa_g, d.kappa_n);
  return d;
}

double RevolvedMesh::area() const {
  double a = 0.0;
  for (const auto& t : triangles) {
    const Vec3 e1 = vertices[t[1]] - vertices[t[0]];
    const Vec3 e2 = vertices[t[2]] - vertices[t[0]];
    a += 0.5 * norm(cross(e1, e2));
  }
  return a;
}

double RevolvedMesh::boundary_length() const {
  double len = 0.0;
  for (std::size_t i = 0; i < boundary_loop.size(); ++i) {
    const auto& a = vertices[boundary_loop[i]];
    const auto& b = vertices[boundary_loop[(i + 1) % boundary_loop.size()]];
    len += norm(b - a);
  }
  return len;
}

double RevolvedMesh::min_triangle_area() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& t : triangles) {
    const Vec3 e1 = vertices[t[1]] - vertices[t[0]];
    const Vec3 e2 = vertices[t[2]] - vertices[t[0]];
    m = std::min(m, 0.5 * norm(cross(e1, e2)));
  }
  return m;
}

std::array<double, 3> RevolvedMesh::bbox_extent() const {
  std::array<double, 3> lo{1e300, 1e300, 1e300}, hi{-1e300, -1e300, -1e300};
  for (const auto& v : vertices)
    for (int k = 0; k < 3; ++k) {
      lo[k] = std::min(lo[k], v[k]);
      hi[k] = std::max(hi[k], v[k]);
    }
  return {hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]};
}

RevolvedMesh revolve(const ProfileTrajectory& traj, int n_t) {
  if (n_t < 8) throw DomainError("revolve needs n_t >= 8");
  if (traj.samples.size() < 2) throw DomainError("profile too short to revolve");
  if (traj.samples.front().r != 0.0)
    throw DegenerateProfile("disk-type profile must start on the axis");

  // Rings: samples with r > 0, skipping near-duplicates that would produce
  // sliver triangles.
  std::vector<const ProfileSample*> rings;
  double last_s = traj.samples.front().s;
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    const auto& q = traj.samples[i];
    if (q.r <= 0.0) throw DegenerateProfile("profile returns to the axis in the interior");
    if (q.s - last_s < 1e-7 * std::max(traj.length, 1.0) && i + 1 < traj.samples.size())
      continue;
    rings.push_back(&q);
    last_s = q.s;
  }
  if (rings.empty()) throw DegenerateProfile("no positive-radius samples");

  RevolvedMesh mesh;
  const auto& apex = traj.samples.front();
  mesh.vertices.push_back({0.0, 0.0, apex.z});
  const auto ac = traj.axis_is_regular ? axis_curvatures(apex.phi_prime)
                                       : profile_curvatures(*rings.front(), rings.front()->phi_prime);
  mesh.H.push_back(ac.H);
  mesh.K.push_back(ac.K);

  for (const auto* q : rings) {
    const auto c = profile_curvatures(*q, q->phi_prime);
    for (int j = 0; j < n_t; ++j) {
      const double t = 2.0 * kPi * j / n_t;
      mesh.vertices.push_back({q->r * std::cos(t), q->r * std::sin(t), q->z});
      mesh.H.push_back(c.H);
      mesh.K.push_back(c.K);
    }
  }

  auto ring_vertex = [&](int ring, int j) { return 1 + ring * n_t + (j % n_t); };

  for (int j = 0; j < n_t; ++j)
    mesh.triangles.push_back({0, ring_vertex(0, j), ring_vertex(0, j + 1)});
  for (std::size_t ring = 0; ring + 1 < rings.size(); ++ring) {
    for (int j = 0; j < n_t; ++j) {
      const int a = ring_vertex(static_cast<int>(ring), j);
      const int b = ring_vertex(static_cast<int>(ring), j + 1);
      const int c = ring_vertex(static_cast<int>(ring) + 1, j);
      const int d = ring_vertex(static_cast<int>(ring) + 1, j + 1);
      mesh.triangles.push_back({a, c, d});
      mesh.triangles.push_back({a, d, b});
    }
  }
  for (int j = 0; j < n_t; ++j)
    mesh.boundary_loop.push_back(ring_vertex(static_cast<int>(rings.size()) - 1, j));
  return mesh;
}

double gauss_bonnet_defect(const ProfileTrajectory& traj, double quad_tol) {
  std::vector<double> breaks;
  breaks.reserve(traj.samples.size());
  for (const auto& q : traj.samples) breaks.push_back(q.s);
  // K r = phi' sin(phi): finite at the axis.
  auto integrand = [&](double s) {
    const auto q = traj.at(s);
    return q.phi_prime * std::sin(q.phi);
  };
  const double total_K = 2.0 * kPi * composite_gauss(integrand, breaks, quad_tol).value;
  // Boundary turning with the interior kept on the left: +cos(phi)/r, i.e.
  // the negative of the Darboux kappa_g under the outward-conormal convention.
  const auto& b = traj.boundary();
  const double boundary_turning = 2.0 * kPi * std::cos(b.phi);
  return 2.0 * kPi - total_K - boundary_turning;
}

std::string mesh_to_obj(const RevolvedMesh& mesh) {
  std::string out;
  out.reserve(mesh.vertices.size() * 40);
  char buf[128];
  for (const auto& v : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "v %.9g %.9g %.9g\n", v[0], v[1], v[2]);
    out += buf;
  }
  for (const auto& t : mesh.triangles) {
    std::snprintf(buf, sizeof buf, "f %d %d %d\n", t[0] + 1, t[1] + 1, t[2] + 1);
    out += buf;
  }
  out += "l";
  for (int idx : mesh.boundary_loop) {
    std::snprintf(buf, sizeof buf, " %d", idx + 1);
    out += buf;
  }
  if (!mesh.boundary_loop.empty()) {
    std::snprintf(buf, sizeof buf, " %d", mesh.boundary_loop.front() + 1);
    out += buf;
  }
  out += "\n";
  return out;
}

}  // namespace disklab
