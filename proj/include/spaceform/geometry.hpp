#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "spaceform/ambient.hpp"
#include "spaceform/errors.hpp"

namespace spaceform {

// The three simply connected constant-curvature geometries, each presented by
// the model that keeps its isometries linear:
//   Spherical   unit sphere <v,v> = 1 in Euclidean R^{n+1}
//   Euclidean   affine R^n
//   Hyperbolic  upper sheet of <v,v> = 1, v0 > 0, for the Lorentz form on R^{1+n}
enum class ModelKind { Spherical, Euclidean, Hyperbolic };

struct Model {
  ModelKind kind = ModelKind::Euclidean;
  int n = 0;  // intrinsic dimension

  int ambient_dim() const { return kind == ModelKind::Euclidean ? n : n + 1; }

  Form form() const {
    return {kind == ModelKind::Hyperbolic ? FormKind::Lorentz : FormKind::Euclidean,
            ambient_dim()};
  }

  friend bool operator==(const Model&, const Model&) = default;
};

inline void check_model(const Model& m) {
  if (m.n < 2) raise(Err::BadDimension, "model dimension must be at least 2");
}

// Point of a model, stored in ambient coordinates. Constructed through
// make_point, which renormalizes near-miss inputs and rejects the rest.
struct ModelPoint {
  Model model;
  Vec v;
};

inline void check_same_model(const Model& a, const Model& b) {
  if (!(a == b)) raise(Err::ModelMismatch, "operands belong to different models");
}

inline ModelPoint make_point(const Model& model, Vec v) {
  check_model(model);
  check_dim(model.form(), v);
  if (!all_finite(v)) raise(Err::OffManifold, "point has non-finite coordinates");

  switch (model.kind) {
    case ModelKind::Euclidean:
      break;
    case ModelKind::Spherical: {
      const double s = euclidean_norm(v);
      if (std::abs(s - 1.0) > tol::snap)
        raise(Err::OffManifold, "spherical point has norm " + std::to_string(s));
      for (double& c : v) c /= s;
      break;
    }
    case ModelKind::Hyperbolic: {
      const double q = inner(model.form(), v, v);
      if (q <= 0.0) raise(Err::OffManifold, "hyperbolic point is not timelike");
      if (v[0] <= 0.0) raise(Err::OffManifold, "hyperbolic point is on the wrong sheet");
      const double s = std::sqrt(q);
      if (std::abs(s - 1.0) > tol::snap)
        raise(Err::OffManifold, "hyperbolic point has pseudo-norm " + std::to_string(s));
      for (double& c : v) c /= s;
      break;
    }
  }
  return {model, std::move(v)};
}

inline ModelPoint antipode(const ModelPoint& x) {
  if (x.model.kind != ModelKind::Spherical)
    raise(Err::UnsupportedModel, "antipode is only defined on the sphere");
  return {x.model, scaled(x.v, -1.0)};
}

// Geodesic distance. The inner products are clamped into the domains of
// acos/acosh; rounding can otherwise push them just past the branch points.
inline double distance(const ModelPoint& x, const ModelPoint& y) {
  check_same_model(x.model, y.model);
  switch (x.model.kind) {
    case ModelKind::Euclidean:
      return euclidean_norm(sub(x.v, y.v));
    case ModelKind::Spherical:
      return std::acos(std::clamp(inner(x.model.form(), x.v, y.v), -1.0, 1.0));
    case ModelKind::Hyperbolic:
      return std::acosh(std::max(inner(x.model.form(), x.v, y.v), 1.0));
  }
  return 0.0;
}

// Totally geodesic p-dimensional subspace of a model. For the sphere and the
// hyperboloid it is the trace of a (p+1)-dimensional linear span on the model
// set; in the Euclidean model it is an affine flat given by a base point plus
// a p-dimensional direction span.
struct PSpace {
  Model model;
  int p = 0;
  Subspace span;  // ambient span (S, H) or direction span (E)
  Vec base;       // Euclidean only: affine base point
};

namespace detail {

inline void check_pspace_signature(const PSpace& ps) {
  if (ps.model.kind == ModelKind::Hyperbolic && ps.span.positive() != 1)
    raise(Err::NotIntersecting, "linear span does not meet the hyperboloid sheet");
  if (ps.model.kind == ModelKind::Spherical && ps.span.positive() != ps.span.dim())
    raise(Err::DegenerateSubspace, "spherical span must be positive definite");
}

inline PSpace pspace_from_span(const Model& model, Subspace span) {
  PSpace ps{model, span.dim() - 1, std::move(span), {}};
  if (!(0 < ps.p && ps.p < model.n))
    raise(Err::BadDimension, "subspace dimension must satisfy 0 < p < n");
  check_pspace_signature(ps);
  return ps;
}

}  // namespace detail

// Spherical / hyperbolic construction from ambient generators.
inline PSpace make_pspace(const Model& model, const std::vector<Vec>& generators) {
  check_model(model);
  if (model.kind == ModelKind::Euclidean)
    raise(Err::UnsupportedModel,
          "the Euclidean model needs a base point and direction vectors");
  return detail::pspace_from_span(model, orthonormalize(model.form(), generators));
}

// Euclidean construction: affine flat through `base` spanned by `directions`.
inline PSpace make_pspace(const Model& model, const ModelPoint& base,
                          const std::vector<Vec>& directions) {
  check_model(model);
  if (model.kind != ModelKind::Euclidean)
    raise(Err::UnsupportedModel, "base-point construction is Euclidean-only");
  check_same_model(model, base.model);
  PSpace ps{model, 0, orthonormalize(model.form(), directions), base.v};
  ps.p = ps.span.dim();
  if (!(0 < ps.p && ps.p < model.n))
    raise(Err::BadDimension, "subspace dimension must satisfy 0 < p < n");
  return ps;
}

inline bool contains(const PSpace& ps, const ModelPoint& x,
                     double tolerance = tol::geo) {
  check_same_model(ps.model, x.model);
  Vec r = (ps.model.kind == ModelKind::Euclidean) ? sub(x.v, ps.base) : x.v;
  return inf_norm(sub(r, orthogonal_project(ps.span, r))) <=
         tolerance * std::max(1.0, inf_norm(r));
}

// Radial projection v -> v / sqrt(<v,v>) onto the quadric model set.
inline ModelPoint radial_project(const Model& model, const Vec& v) {
  check_model(model);
  if (model.kind == ModelKind::Euclidean)
    raise(Err::UnsupportedModel, "radial projection has no Euclidean meaning");
  check_dim(model.form(), v);
  const double q = inner(model.form(), v, v);
  if (q <= tol::lin * tol::lin)
    raise(Err::OutsideDomain, "vector is too close to the null cone to normalize");
  if (model.kind == ModelKind::Hyperbolic && v[0] <= 0.0)
    raise(Err::OutsideDomain, "vector points at the lower hyperboloid sheet");
  return make_point(model, scaled(v, 1.0 / std::sqrt(q)));
}

// ---- tangent spaces ---------------------------------------------------------

// Inner product induced on tangent vectors. The ambient form restricted to a
// hyperboloid tangent space is negative definite, so its sign is flipped to
// make the induced metric Riemannian in all three models.
inline double induced_inner(const Model& m, const Vec& a, const Vec& b) {
  const double s = inner(m.form(), a, b);
  return m.kind == ModelKind::Hyperbolic ? -s : s;
}

// Unit-speed tangent vector at a model point.
struct TangentVector {
  ModelPoint at;
  Vec dir;
};

inline TangentVector make_tangent(const ModelPoint& at, Vec dir) {
  check_dim(at.model.form(), dir);
  if (!all_finite(dir)) raise(Err::BadParameter, "non-finite tangent direction");
  if (at.model.kind != ModelKind::Euclidean) {
    const double t = inner(at.model.form(), dir, at.v);
    const double scale = std::max(1.0, inf_norm(dir) * inf_norm(at.v));
    if (std::abs(t) > tol::lin * scale)
      raise(Err::BadParameter, "direction is not tangent at the base point");
  }
  const double q = induced_inner(at.model, dir, dir);
  if (q <= tol::lin * tol::lin)
    raise(Err::BadParameter, "tangent direction has vanishing induced length");
  return {at, scaled(dir, 1.0 / std::sqrt(q))};
}

// Initial direction of the geodesic from y to x (the unit tangent of the
// logarithm map). Undefined for coincident points, and for antipodal points
// on the sphere.
inline TangentVector log_direction(const ModelPoint& y, const ModelPoint& x) {
  check_same_model(y.model, x.model);
  const Model& m = y.model;
  switch (m.kind) {
    case ModelKind::Euclidean: {
      const Vec d = sub(x.v, y.v);
      const double len = euclidean_norm(d);
      if (len <= 1e-12) raise(Err::CoincidentPoints, "log direction needs distinct points");
      return {y, scaled(d, 1.0 / len)};
    }
    case ModelKind::Spherical: {
      const double c = inner(m.form(), x.v, y.v);
      if (c >= 1.0 - 1e-14)
        raise(Err::CoincidentPoints, "log direction needs distinct points");
      if (c <= -1.0 + tol::geo)
        raise(Err::AntipodalPoints, "log direction is ambiguous at the antipode");
      Vec u = sub(x.v, scaled(y.v, c));
      return {y, scaled(u, 1.0 / std::sqrt(1.0 - c * c))};
    }
    case ModelKind::Hyperbolic: {
      const double c = inner(m.form(), x.v, y.v);
      if (c <= 1.0 + 1e-14)
        raise(Err::CoincidentPoints, "log direction needs distinct points");
      Vec u = sub(x.v, scaled(y.v, c));
      return {y, scaled(u, 1.0 / std::sqrt(c * c - 1.0))};
    }
  }
  raise(Err::UnsupportedModel, "unreachable");
}

// Point at arclength s along the unit-speed geodesic leaving t.at towards t.dir.
inline ModelPoint exp_point(const TangentVector& t, double s) {
  const Model& m = t.at.model;
  switch (m.kind) {
    case ModelKind::Euclidean: {
      Vec v = t.at.v;
      axpy(v, s, t.dir);
      return make_point(m, std::move(v));
    }
    case ModelKind::Spherical: {
      Vec v = scaled(t.at.v, std::cos(s));
      axpy(v, std::sin(s), t.dir);
      return make_point(m, std::move(v));
    }
    case ModelKind::Hyperbolic: {
      Vec v = scaled(t.at.v, std::cosh(s));
      axpy(v, std::sinh(s), t.dir);
      return make_point(m, std::move(v));
    }
  }
  raise(Err::UnsupportedModel, "unreachable");
}

// Angle at y of the geodesic triangle x-y-z, in [0, pi].
inline double angle_at(const ModelPoint& y, const ModelPoint& x, const ModelPoint& z) {
  const TangentVector tx = log_direction(y, x);
  const TangentVector tz = log_direction(y, z);
  const double c = std::clamp(induced_inner(y.model, tx.dir, tz.dir), -1.0, 1.0);
  return std::acos(c);
}

// Geodesic point reflection of u through z: the point v with d(z,v) = d(z,u)
// on the opposite geodesic ray, so that z is the midpoint of u and v.
inline ModelPoint point_reflection(const ModelPoint& z, const ModelPoint& u) {
  check_same_model(z.model, u.model);
  const Model& m = z.model;
  if (m.kind == ModelKind::Euclidean)
    return make_point(m, sub(scaled(z.v, 2.0), u.v));
  const double c = inner(m.form(), u.v, z.v);
  if (m.kind == ModelKind::Spherical && c <= -1.0 + tol::geo)
    raise(Err::AntipodalPoints, "reflection of an antipode is not unique");
  return make_point(m, sub(scaled(z.v, 2.0 * c), u.v));
}

// Induced-orthonormal basis of the tangent space of the whole model at `at`.
inline std::vector<Vec> manifold_tangent_basis(const ModelPoint& at) {
  const Model& m = at.model;
  if (m.kind == ModelKind::Euclidean) {
    std::vector<Vec> basis;
    for (int i = 0; i < m.n; ++i) {
      Vec e(static_cast<std::size_t>(m.n), 0.0);
      e[static_cast<std::size_t>(i)] = 1.0;
      basis.push_back(std::move(e));
    }
    return basis;
  }
  return complement(span_subspace(m.form(), {at.v})).basis;
}

// Induced-orthonormal basis of the tangent space of the p-space at a point of
// it. For the quadric models this is the restriction of the ambient span to
// the form-orthogonal complement of the point.
inline std::vector<Vec> tangent_basis(const PSpace& ps, const ModelPoint& at) {
  check_same_model(ps.model, at.model);
  if (!contains(ps, at, 10 * tol::geo))
    raise(Err::PointNotOnSubspace, "tangent basis requested off the subspace");
  if (ps.model.kind == ModelKind::Euclidean) return ps.span.basis;

  const Form form = ps.model.form();
  std::vector<Vec> cands;
  for (const Vec& b : ps.span.basis)
    cands.push_back(sub(b, scaled(at.v, inner(form, b, at.v))));
  Subspace t = span_subspace(form, cands);
  if (t.dim() != ps.p)
    raise(Err::DegenerateSubspace, "tangent space has unexpected dimension");
  return t.basis;
}

// Induced-orthonormal basis of the normal space of the p-space, i.e. the
// directions at a point of the p-space that are tangent to the model but
// orthogonal to the p-space. Totally geodesic subspaces make this basis
// independent of the chosen point, so none is taken.
inline std::vector<Vec> normal_basis(const PSpace& ps) {
  return complement(ps.span).basis;
}

// ---- pairs of hypersurfaces in a three-dimensional model -------------------

// Intersection of two distinct totally geodesic surfaces in a 3-model. The
// result is a geodesic (a 1-space); parallel Euclidean planes have none.
inline PSpace intersect_2spaces(const PSpace& phi, const PSpace& delta) {
  check_same_model(phi.model, delta.model);
  const Model& m = phi.model;
  if (m.n != 3 || phi.p != 2 || delta.p != 2)
    raise(Err::BadDimension, "surface intersection expects 2-spaces of a 3-model");

  if (m.kind != ModelKind::Euclidean) {
    if (subspace_equal(phi.span, delta.span))
      raise(Err::IdenticalSubspaces, "the two surfaces coincide");
    Subspace line = intersect(phi.span, delta.span);
    if (line.dim() != 2)
      raise(Err::DegenerateSubspace, "intersection span has unexpected dimension");
    if (m.kind == ModelKind::Hyperbolic && line.positive() != 1)
      raise(Err::NotIntersecting, "the two surfaces miss each other on the sheet");
    return detail::pspace_from_span(m, std::move(line));
  }

  const Subspace dir = intersect(phi.span, delta.span);
  if (dir.dim() == 2) {
    if (contains(delta, make_point(m, phi.base)))
      raise(Err::IdenticalSubspaces, "the two planes coincide");
    raise(Err::EmptyIntersection, "the two planes are parallel");
  }

  // Common point: walk from phi's base inside phi, perpendicular to the
  // intersection line, until delta's plane equation is satisfied.
  const Vec n_delta = complement(delta.span).basis[0];
  const Vec& line_dir = dir.basis[0];
  Vec walk;
  double walk_len = 0.0;
  for (const Vec& b : phi.span.basis) {
    Vec r = sub(b, scaled(line_dir, inner(m.form(), b, line_dir)));
    const double len = euclidean_norm(r);
    if (len > walk_len) {
      walk_len = len;
      walk = std::move(r);
    }
  }
  for (double& c : walk) c /= walk_len;
  const double slope = inner(m.form(), walk, n_delta);
  const double t = inner(m.form(), sub(delta.base, phi.base), n_delta) / slope;
  Vec point = phi.base;
  axpy(point, t, walk);
  if (!all_finite(point))
    raise(Err::EmptyIntersection, "the two planes are numerically parallel");
  return PSpace{m, 1, dir, std::move(point)};
}

// Dihedral angle between two surfaces at a common point of their intersection
// line, folded into [0, pi/2]. Built purely from data local to z so that
// constancy along the line is a genuine check, not an artifact.
inline double dihedral_angle(const PSpace& phi, const PSpace& delta,
                             const ModelPoint& z) {
  check_same_model(phi.model, delta.model);
  check_same_model(phi.model, z.model);
  const Model& m = phi.model;
  if (m.n != 3 || phi.p != 2 || delta.p != 2)
    raise(Err::BadDimension, "dihedral angle expects 2-spaces of a 3-model");
  if (!contains(phi, z) || !contains(delta, z))
    raise(Err::PointNotOnBoth, "point is not on both surfaces");

  Vec n_phi, n_delta;
  if (m.kind == ModelKind::Euclidean) {
    n_phi = complement(phi.span).basis[0];
    n_delta = complement(delta.span).basis[0];
  } else {
    // Rebuild each surface's span from z-local data (the point plus a tangent
    // basis at z) and take the ambient unit normal.
    const std::vector<Vec> tp = tangent_basis(phi, z);
    const std::vector<Vec> td = tangent_basis(delta, z);
    std::vector<Vec> gen_phi{z.v};
    gen_phi.insert(gen_phi.end(), tp.begin(), tp.end());
    std::vector<Vec> gen_delta{z.v};
    gen_delta.insert(gen_delta.end(), td.begin(), td.end());
    n_phi = complement(span_subspace(m.form(), gen_phi)).basis[0];
    n_delta = complement(span_subspace(m.form(), gen_delta)).basis[0];
  }
  const double c = std::clamp(std::abs(induced_inner(m, n_phi, n_delta)), 0.0, 1.0);
  return std::acos(c);
}

}  // namespace spaceform
