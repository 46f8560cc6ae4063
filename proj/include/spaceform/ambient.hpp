#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "spaceform/errors.hpp"

namespace spaceform {

// Coordinate vector in the ambient real vector space. Dimensions stay small
// (a few dozen at most), so plain dense arithmetic is all we need.
using Vec = std::vector<double>;

namespace tol {
// Construction checks for double-precision linear algebra at these sizes.
inline constexpr double lin = 1e-9;
// Membership on the quadric / affine model set.
inline constexpr double model = 1e-9;
// Geometric assertions downstream of transcendental functions.
inline constexpr double geo = 1e-7;
// Inputs this close to the model set are renormalized instead of rejected.
inline constexpr double snap = 1e-6;
// Degenerate-domain threshold on the projected length in the spherical case.
inline constexpr double dom = 1e-9;
// Below this projected length a spherical projection is flagged low-confidence.
inline constexpr double low_confidence = 1e-6;
}  // namespace tol

enum class FormKind { Euclidean, Lorentz };

// Symmetric bilinear form on the ambient space. The Lorentz form is
// x0*y0 - x1*y1 - ... - xk*yk, with coordinate 0 carrying the plus sign.
struct Form {
  FormKind kind = FormKind::Euclidean;
  int dim = 0;

  friend bool operator==(const Form&, const Form&) = default;
};

inline void check_form(const Form& f) {
  if (f.dim < 2) raise(Err::BadDimension, "ambient dimension must be at least 2");
}

inline void check_dim(const Form& f, const Vec& x) {
  if (static_cast<int>(x.size()) != f.dim)
    raise(Err::DimensionMismatch, "vector length " + std::to_string(x.size()) +
                                      " does not match ambient dimension " +
                                      std::to_string(f.dim));
}

inline double inner(const Form& f, const Vec& x, const Vec& y) {
  check_dim(f, x);
  check_dim(f, y);
  if (f.kind == FormKind::Euclidean) {
    double s = 0.0;
    for (int i = 0; i < f.dim; ++i) s += x[i] * y[i];
    return s;
  }
  double s = x[0] * y[0];
  for (int i = 1; i < f.dim; ++i) s -= x[i] * y[i];
  return s;
}

// ---- small dense helpers --------------------------------------------------

inline double inf_norm(const Vec& x) {
  double m = 0.0;
  for (double c : x) m = std::max(m, std::abs(c));
  return m;
}

inline double euclidean_norm(const Vec& x) {
  double s = 0.0;
  for (double c : x) s += c * c;
  return std::sqrt(s);
}

inline bool all_finite(const Vec& x) {
  for (double c : x)
    if (!std::isfinite(c)) return false;
  return true;
}

inline Vec add(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vec sub(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vec scaled(const Vec& a, double s) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
  return r;
}

inline void axpy(Vec& y, double a, const Vec& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

// Linear subspace carried together with an orthonormalized basis. For each
// basis vector b, <b,b> = signs[i] = +-1 and distinct basis vectors are
// form-orthogonal; both hold to tol::lin. A zero-dimensional subspace is
// legal and has an empty basis.
struct Subspace {
  Form form;
  std::vector<Vec> basis;
  std::vector<int> signs;

  int dim() const { return static_cast<int>(basis.size()); }

  int positive() const {
    int k = 0;
    for (int s : signs) k += (s > 0) ? 1 : 0;
    return k;
  }

  int negative() const { return dim() - positive(); }
};

namespace detail {

// Checks the advertised basis invariants; a failure here means the
// orthonormalization lost too much precision to be trusted.
inline void validate_subspace(const Subspace& s) {
  for (int i = 0; i < s.dim(); ++i) {
    for (int j = i; j < s.dim(); ++j) {
      const double q = inner(s.form, s.basis[i], s.basis[j]);
      const double want = (i == j) ? static_cast<double>(s.signs[i]) : 0.0;
      if (std::abs(q - want) > 10 * tol::lin)
        raise(Err::DegenerateSubspace, "orthonormalized basis failed validation");
    }
  }
}

// Indefinite Gram-Schmidt with greedy pivoting: each round re-orthogonalizes
// every remaining vector against the accepted basis (two passes, which keeps
// the off-diagonal inner products near machine precision) and then accepts
// the residual with the largest |<r,r>|. Vectors whose residual vanishes are
// linearly dependent on the accepted set; a residual that is numerically
// nonzero but null-like (|<r,r>| ~ 0) marks a degenerate span.
inline Subspace gram_schmidt(const Form& form, const std::vector<Vec>& input,
                             bool skip_dependent) {
  check_form(form);
  double scale = 1.0;
  for (const Vec& v : input) {
    check_dim(form, v);
    if (!all_finite(v)) raise(Err::BadParameter, "non-finite input vector");
    scale = std::max(scale, inf_norm(v));
  }

  Subspace out{form, {}, {}};
  std::vector<Vec> rem = input;
  while (!rem.empty()) {
    std::vector<Vec> res(rem.size());
    for (std::size_t i = 0; i < rem.size(); ++i) {
      Vec r = rem[i];
      for (int pass = 0; pass < 2; ++pass)
        for (int j = 0; j < out.dim(); ++j)
          axpy(r, -out.signs[j] * inner(form, r, out.basis[j]), out.basis[j]);
      res[i] = std::move(r);
    }

    // Remove vectors that the accepted basis already spans.
    std::vector<Vec> keep_rem, keep_res;
    for (std::size_t i = 0; i < rem.size(); ++i) {
      if (inf_norm(res[i]) <= tol::lin * scale) {
        if (!skip_dependent)
          raise(Err::LinearDependence, "input vectors are linearly dependent");
        continue;
      }
      keep_rem.push_back(std::move(rem[i]));
      keep_res.push_back(std::move(res[i]));
    }
    rem = std::move(keep_rem);
    if (rem.empty()) break;

    std::size_t best = 0;
    double best_q = 0.0;
    for (std::size_t i = 0; i < keep_res.size(); ++i) {
      const double q = std::abs(inner(form, keep_res[i], keep_res[i]));
      if (q > best_q) {
        best_q = q;
        best = i;
      }
    }
    if (best_q <= tol::lin * scale * scale)
      raise(Err::DegenerateSubspace,
            "span contains a null direction of the ambient form");

    const double q = inner(form, keep_res[best], keep_res[best]);
    out.signs.push_back(q > 0 ? 1 : -1);
    out.basis.push_back(scaled(keep_res[best], 1.0 / std::sqrt(std::abs(q))));
    rem.erase(rem.begin() + static_cast<std::ptrdiff_t>(best));
  }

  validate_subspace(out);
  return out;
}

}  // namespace detail

// Orthonormalizes the given spanning set. Rejects linearly dependent inputs;
// use span_subspace when dependent generators should simply be dropped.
inline Subspace orthonormalize(const Form& form, const std::vector<Vec>& vectors) {
  return detail::gram_schmidt(form, vectors, /*skip_dependent=*/false);
}

// Subspace spanned by the inputs; linearly dependent generators are dropped.
inline Subspace span_subspace(const Form& form, const std::vector<Vec>& vectors) {
  return detail::gram_schmidt(form, vectors, /*skip_dependent=*/true);
}

// Form-orthogonal projection onto the subspace: f(x) = sum_i s_i <x,b_i> b_i.
// Idempotent, and x - f(x) is form-orthogonal to every basis vector.
inline Vec orthogonal_project(const Subspace& f, const Vec& x) {
  check_dim(f.form, x);
  Vec out(x.size(), 0.0);
  for (int i = 0; i < f.dim(); ++i)
    axpy(out, f.signs[i] * inner(f.form, x, f.basis[i]), f.basis[i]);
  return out;
}

// Form-orthogonal complement. For a non-degenerate subspace of a
// non-degenerate form this always has the complementary dimension.
inline Subspace complement(const Subspace& f) {
  const int n = f.form.dim;
  std::vector<Vec> cands;
  cands.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Vec e(static_cast<std::size_t>(n), 0.0);
    e[static_cast<std::size_t>(i)] = 1.0;
    cands.push_back(sub(e, orthogonal_project(f, e)));
  }
  Subspace c = detail::gram_schmidt(f.form, cands, /*skip_dependent=*/true);
  if (c.dim() != n - f.dim())
    raise(Err::DegenerateSubspace, "complement has unexpected dimension");
  return c;
}

inline bool subspace_contains(const Subspace& f, const Vec& x,
                              double tolerance = 10 * tol::lin) {
  check_dim(f.form, x);
  const Vec r = sub(x, orthogonal_project(f, x));
  return inf_norm(r) <= tolerance * std::max(1.0, inf_norm(x));
}

inline bool subspace_equal(const Subspace& f, const Subspace& g,
                           double tolerance = 10 * tol::lin) {
  if (!(f.form == g.form) || f.dim() != g.dim()) return false;
  for (const Vec& b : f.basis)
    if (!subspace_contains(g, b, tolerance)) return false;
  for (const Vec& b : g.basis)
    if (!subspace_contains(f, b, tolerance)) return false;
  return true;
}

// Intersection of two subspaces of the same form, computed as the complement
// of the sum of the two complements. An empty intersection is reported as a
// zero-dimensional subspace, not an error.
inline Subspace intersect(const Subspace& f, const Subspace& g) {
  if (!(f.form == g.form))
    raise(Err::DimensionMismatch, "subspaces live over different ambient forms");
  std::vector<Vec> normals;
  const Subspace cf = complement(f);
  const Subspace cg = complement(g);
  normals.insert(normals.end(), cf.basis.begin(), cf.basis.end());
  normals.insert(normals.end(), cg.basis.begin(), cg.basis.end());
  return complement(span_subspace(f.form, normals));
}

}  // namespace spaceform
