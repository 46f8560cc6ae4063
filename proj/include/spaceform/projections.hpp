#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "spaceform/ambient.hpp"
#include "spaceform/errors.hpp"
#include "spaceform/geometry.hpp"

namespace spaceform {

struct ProjectionResult {
  ModelPoint foot;
  double dist = 0.0;
  // Largest induced inner product between the geodesic towards x and the
  // tangent space of the target at the foot; zero for a true nearest point.
  double ortho_residual = 0.0;
  // Set when the spherical projection passed close to its degenerate domain
  // and the foot is therefore poorly conditioned.
  bool low_confidence = false;
};

// Perpendicularity defect of `foot` as a candidate nearest point of ps to x:
// the geodesic from the foot to x should leave orthogonally to every tangent
// direction of ps at the foot.
inline double foot_residual(const PSpace& ps, const ModelPoint& foot,
                            const ModelPoint& x) {
  // Below the branch-point noise of the clamped distance formulas the
  // direction towards x carries no information, so the defect is vacuously
  // zero; log_direction rejects pairs in that band as coincident.
  if (distance(foot, x) <= tol::snap) return 0.0;
  const TangentVector t = log_direction(foot, x);
  double r = 0.0;
  for (const Vec& b : tangent_basis(ps, foot))
    r = std::max(r, std::abs(induced_inner(ps.model, t.dir, b)));
  return r;
}

// Nearest-point (metrical) projection onto a totally geodesic subspace. In
// the quadric models this is the radial renormalization of the ambient
// form-orthogonal projection; in the Euclidean model it is the affine
// orthogonal projection itself.
//
// Spherical caveat: a point form-orthogonal to the span is equidistant from
// all of ps, so no nearest point exists; that is reported as an error rather
// than an arbitrary choice.
inline ProjectionResult metrical_project(const PSpace& ps, const ModelPoint& x) {
  check_same_model(ps.model, x.model);
  const Model& m = ps.model;
  ProjectionResult out{ModelPoint{m, {}}, 0.0, 0.0, false};

  switch (m.kind) {
    case ModelKind::Euclidean: {
      const Vec r = sub(x.v, ps.base);
      const Vec f = orthogonal_project(ps.span, r);
      out.foot = make_point(m, add(ps.base, f));
      out.dist = euclidean_norm(sub(r, f));
      break;
    }
    case ModelKind::Spherical: {
      const Vec f = orthogonal_project(ps.span, x.v);
      const double len = euclidean_norm(f);
      if (len <= tol::dom)
        raise(Err::NonUniqueProjection,
              "point is form-orthogonal to the span; every point of the "
              "subspace is equally near");
      out.low_confidence = len < tol::low_confidence;
      out.foot = radial_project(m, f);
      out.dist = distance(x, out.foot);
      break;
    }
    case ModelKind::Hyperbolic: {
      const Vec f = orthogonal_project(ps.span, x.v);
      out.foot = radial_project(m, f);
      out.dist = distance(x, out.foot);
      break;
    }
  }
  out.ortho_residual = foot_residual(ps, out.foot, x);
  return out;
}

// All feet of geodesics through x that meet ps orthogonally. Hyperbolic and
// Euclidean subspaces see exactly the nearest point; a sphere adds the
// antipode of the nearest point (the farthest point of ps), reached by the
// same great circle from the other side.
inline std::vector<ModelPoint> orthogonal_feet(const PSpace& ps, const ModelPoint& x) {
  const ProjectionResult near = metrical_project(ps, x);
  if (near.dist <= tol::geo)
    raise(Err::CoincidentPoints, "point already lies on the subspace");
  if (ps.model.kind == ModelKind::Spherical)
    return {near.foot, antipode(near.foot)};
  return {near.foot};
}

struct OrthogonalityCheck {
  bool orthogonal = false;
  double residual = 0.0;
};

// Whether the geodesic from z to x meets the subspace orthogonally at z.
// The residual is the largest induced inner product against a tangent basis
// of the subspace at z.
inline OrthogonalityCheck is_orthogonal_to_pspace(const ModelPoint& x,
                                                  const ModelPoint& z,
                                                  const PSpace& ps,
                                                  double tolerance = tol::geo) {
  check_same_model(x.model, ps.model);
  if (!contains(ps, z, 10 * tol::geo))
    raise(Err::PointNotOnSubspace, "base point is not on the subspace");
  const TangentVector t = log_direction(z, x);
  double r = 0.0;
  for (const Vec& b : tangent_basis(ps, z))
    r = std::max(r, std::abs(induced_inner(ps.model, t.dir, b)));
  return {r <= tolerance, r};
}

// Closed-form matrix of the Lorentz-orthogonal projection of R^{1,2} onto the
// plane x0 = a*x1 (a > 1), in ambient coordinates:
//
//   1/(a^2-1) * [ a^2  -a   0
//                 a    -1   0
//                 0    0   a^2-1 ]
//
// Applying it to x on the hyperboloid satisfies
//   <f(x),f(x)> = (x0 - a*x1)^2 / (a^2 - 1) + <x,x>,
// so f(x) stays timelike and the radial renormalization is always defined.
inline std::array<std::array<double, 3>, 3> lorentz_plane_projection_matrix(double a) {
  if (!(a > 1.0))
    raise(Err::BadParameter, "plane parameter must satisfy a > 1");
  const double k = 1.0 / (a * a - 1.0);
  return {{{k * a * a, -k * a, 0.0}, {k * a, -k, 0.0}, {0.0, 0.0, 1.0}}};
}

}  // namespace spaceform
