#pragma once

#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "spaceform/ambient.hpp"
#include "spaceform/errors.hpp"
#include "spaceform/geometry.hpp"
#include "spaceform/projections.hpp"

namespace spaceform {

// Counter-based splittable pseudo-random generator built on the SplitMix64
// finalizer. A generator is addressed by a 64-bit key; split(tag) derives an
// independent child stream as a pure function of (key, tag). Workers can
// therefore derive identical per-trial streams in any order, which keeps
// suite output byte-identical under any parallelism.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t key) : key_(key) {}

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  SplitRng split(std::uint64_t tag) const { return SplitRng(mix(key_ ^ mix(tag))); }

  std::uint64_t key() const { return key_; }

  std::uint64_t next() { return mix(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double normal() {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * uniform01());
  }

  Vec gaussian(std::size_t dim) {
    Vec v(dim);
    for (double& c : v) c = normal();
    return v;
  }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

namespace detail {

inline constexpr std::uint64_t kProbeStream = 0x70726f6265ULL;

// A distinguished point on the p-space, used as the anchor for parameterizing
// it. Quadric spans always contain one of their basis vectors (sign-corrected
// onto the hyperboloid sheet); the Euclidean anchor is the base point.
inline ModelPoint carrier_point(const PSpace& ps) {
  const Model& m = ps.model;
  if (m.kind == ModelKind::Euclidean) return make_point(m, ps.base);
  if (m.kind == ModelKind::Spherical) return make_point(m, ps.span.basis[0]);
  for (std::size_t i = 0; i < ps.span.basis.size(); ++i) {
    if (ps.span.signs[i] > 0) {
      Vec v = ps.span.basis[i];
      if (v[0] < 0.0) v = scaled(v, -1.0);
      return make_point(m, std::move(v));
    }
  }
  raise(Err::NotIntersecting, "span has no timelike direction");
}

// Random unit combination of an induced-orthonormal set.
inline Vec random_unit_combination(SplitRng& rng, const std::vector<Vec>& basis) {
  if (basis.empty()) raise(Err::BadParameter, "empty basis");
  for (int tries = 0; tries < 16; ++tries) {
    Vec c = rng.gaussian(basis.size());
    const double len = euclidean_norm(c);
    if (len <= 1e-6) continue;
    Vec out(basis[0].size(), 0.0);
    for (std::size_t i = 0; i < basis.size(); ++i) axpy(out, c[i] / len, basis[i]);
    return out;
  }
  raise(Err::SamplingExhausted, "could not draw a unit combination");
}

inline ModelPoint random_model_point(SplitRng& rng, const Model& m) {
  switch (m.kind) {
    case ModelKind::Euclidean:
      return make_point(m, rng.gaussian(static_cast<std::size_t>(m.n)));
    case ModelKind::Spherical:
      return radial_project(m, rng.gaussian(static_cast<std::size_t>(m.n + 1)));
    case ModelKind::Hyperbolic: {
      Vec v(static_cast<std::size_t>(m.n + 1));
      double s = 0.0;
      for (int i = 1; i <= m.n; ++i) {
        v[static_cast<std::size_t>(i)] = 0.6 * rng.normal();
        s += v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
      }
      v[0] = std::sqrt(1.0 + s);
      return make_point(m, std::move(v));
    }
  }
  raise(Err::UnsupportedModel, "unreachable");
}

// Normalized hyperbolic spans can acquire huge coordinates when a pivot falls
// near the null cone; such spans are legal but lose precision downstream, so
// the sampler redraws them.
inline bool well_conditioned(const Subspace& s, double bound = 8.0) {
  for (const Vec& b : s.basis)
    if (inf_norm(b) > bound) return false;
  return true;
}

}  // namespace detail

// A sampled verification instance: nested totally geodesic subspaces
// q_space (dimension q) inside p_space (dimension p), a point y of p_space
// off q_space, a point x off p_space whose geodesic to y leaves p_space
// orthogonally, and z, the nearest point of q_space to y.
struct TrialConfig {
  Model model;
  int p = 0;
  int q = 0;
  std::uint64_t seed = 0;
  PSpace p_space;
  PSpace q_space;
  ModelPoint x, y, z;
};

struct TrialReport {
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  Model model;
  int p = 0;
  int q = 0;
  double residual = 0.0;        // worst orthogonality defect of the claim
  double probe_residual = 0.0;  // worst randomized probe angle defect
  int n_probe = 0;
  double d_xy = 0.0;
  double d_yz = 0.0;
  double d_xz = 0.0;
  bool pass = false;
  double wall_seconds = 0.0;  // measured; never serialized, reports stay byte-stable
};

// Draws one configuration. Distances are kept away from zero and from the
// spherical hazards (poles of the span, the pi/2 focal distance), and the
// hypothesis orthogonalities are checked before the config is accepted, so a
// returned instance is a clean test of the conclusion, not of the sampler.
inline TrialConfig sample_config(const Model& model, int p, int q, std::uint64_t seed) {
  check_model(model);
  if (!(model.n >= 3 && 0 < q && q < p && p < model.n))
    raise(Err::BadDimension, "admissible dimensions require 0 < q < p < n, n >= 3");
  const Form form = model.form();
  const std::size_t ambient = static_cast<std::size_t>(model.ambient_dim());

  for (std::uint64_t attempt = 0; attempt < 100; ++attempt) {
    SplitRng rng = SplitRng(seed).split(attempt);
    try {
      const ModelPoint w = detail::random_model_point(rng, model);
      PSpace q_space, p_space;
      if (model.kind == ModelKind::Euclidean) {
        std::vector<Vec> dirs;
        for (int i = 0; i < q; ++i) dirs.push_back(rng.gaussian(ambient));
        q_space = make_pspace(model, w, dirs);
        std::vector<Vec> more = q_space.span.basis;
        for (int i = 0; i < p - q; ++i) more.push_back(rng.gaussian(ambient));
        p_space = make_pspace(model, w, more);
      } else {
        std::vector<Vec> gens{w.v};
        for (int i = 0; i < q; ++i) gens.push_back(rng.gaussian(ambient));
        q_space = make_pspace(model, gens);
        std::vector<Vec> more = q_space.span.basis;
        for (int i = 0; i < p - q; ++i) more.push_back(rng.gaussian(ambient));
        p_space = make_pspace(model, more);
      }
      if (!detail::well_conditioned(q_space.span) ||
          !detail::well_conditioned(p_space.span))
        continue;

      // Spread the anchor inside q_space so configurations do not cluster
      // around the span basis.
      const ModelPoint anchor = detail::carrier_point(q_space);
      const ModelPoint wq = exp_point(
          make_tangent(anchor,
                       detail::random_unit_combination(rng, tangent_basis(q_space, anchor))),
          rng.uniform(0.0, 1.0));

      // y leaves q_space inside p_space.
      const std::vector<Vec> tb_q = tangent_basis(q_space, wq);
      const std::vector<Vec> tb_p = tangent_basis(p_space, wq);
      std::vector<Vec> rel;
      for (const Vec& b : tb_p) {
        Vec r = b;
        for (const Vec& t : tb_q) {
          const double sign = inner(form, t, t) > 0 ? 1.0 : -1.0;
          axpy(r, -sign * inner(form, r, t), t);
        }
        rel.push_back(std::move(r));
      }
      const Subspace rel_span = span_subspace(form, rel);
      if (rel_span.dim() != p - q) continue;
      const ModelPoint y = exp_point(
          make_tangent(wq, detail::random_unit_combination(rng, rel_span.basis)),
          rng.uniform(0.1, 1.3));

      // x leaves p_space orthogonally at y.
      const ModelPoint x = exp_point(
          make_tangent(y, detail::random_unit_combination(rng, normal_basis(p_space))),
          rng.uniform(0.1, 1.3));

      // z is the nearest point of q_space to y.
      const ProjectionResult to_q = metrical_project(q_space, y);
      const ModelPoint z = to_q.foot;

      if (to_q.dist < 0.05) continue;
      if (model.kind == ModelKind::Spherical && to_q.dist > 1.45) continue;
      const ProjectionResult x_to_p = metrical_project(p_space, x);
      if (x_to_p.dist < 0.05) continue;
      if (model.kind == ModelKind::Spherical &&
          euclidean_norm(orthogonal_project(p_space.span, x.v)) <= 0.05)
        continue;
      if (distance(x, z) < 0.05) continue;

      // Hypothesis orthogonalities must hold tightly before the conclusion
      // is worth measuring.
      if (is_orthogonal_to_pspace(x, y, p_space).residual > tol::geo) continue;
      if (is_orthogonal_to_pspace(y, z, q_space).residual > tol::geo) continue;

      return TrialConfig{model, p, q, seed, p_space, q_space, x, y, z};
    } catch (const Error&) {
      // resample
    }
  }
  raise(Err::SamplingExhausted, "no valid configuration in 100 attempts");
}

// Measures the claim that the geodesic from z to x meets q_space orthogonally
// at z: once through the tangent-basis residual at z, and once by probing
// n_probe random geodesics of q_space through z and checking the angle they
// make with the geodesic towards x.
inline TrialReport verify_perpendicularity(const TrialConfig& cfg,
                                           double tolerance = tol::geo,
                                           int n_probe = 32) {
  if (n_probe < 0) raise(Err::BadParameter, "n_probe must be non-negative");
  const auto t0 = std::chrono::steady_clock::now();

  TrialReport rep;
  rep.seed = cfg.seed;
  rep.model = cfg.model;
  rep.p = cfg.p;
  rep.q = cfg.q;
  rep.n_probe = n_probe;

  const OrthogonalityCheck base = is_orthogonal_to_pspace(cfg.x, cfg.z, cfg.q_space, tolerance);

  double probe = 0.0;
  if (n_probe > 0) {
    SplitRng rng = SplitRng(cfg.seed).split(detail::kProbeStream);
    const std::vector<Vec> tb = tangent_basis(cfg.q_space, cfg.z);
    const TangentVector to_x = log_direction(cfg.z, cfg.x);
    for (int i = 0; i < n_probe; ++i) {
      const Vec dir = detail::random_unit_combination(rng, tb);
      const ModelPoint u = exp_point(make_tangent(cfg.z, dir), rng.uniform(0.1, 1.3));
      probe = std::max(probe, std::abs(induced_inner(cfg.model, to_x.dir,
                                                     log_direction(cfg.z, u).dir)));
    }
  }

  rep.residual = std::max(base.residual, probe);
  rep.probe_residual = probe;
  rep.pass = rep.residual <= tolerance;
  rep.d_xy = distance(cfg.x, cfg.y);
  rep.d_yz = distance(cfg.y, cfg.z);
  rep.d_xz = distance(cfg.x, cfg.z);
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

// Four-point check: given right angles at y in triangles xyz and xyu and at z
// in triangle yzu, measures the defect of the angle at z in triangle xzu from
// a right angle. The three hypothesis angles must hold within `tolerance`.
inline TrialReport verify_quadruple(const ModelPoint& x, const ModelPoint& y,
                                    const ModelPoint& z, const ModelPoint& u,
                                    double tolerance = tol::geo) {
  check_same_model(x.model, y.model);
  check_same_model(x.model, z.model);
  check_same_model(x.model, u.model);
  const std::array<const ModelPoint*, 4> pts{&x, &y, &z, &u};
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (distance(*pts[i], *pts[j]) <= 1e-9)
        raise(Err::CoincidentPoints, "the four points must be pairwise distinct");

  const double half_pi = std::numbers::pi / 2.0;
  const std::array<double, 3> hyp{angle_at(y, x, z), angle_at(y, x, u),
                                  angle_at(z, y, u)};
  for (double a : hyp)
    if (std::abs(a - half_pi) > tolerance)
      raise(Err::HypothesisNotMet,
            "hypothesis angle " + std::to_string(a) + " is not right within " +
                std::to_string(tolerance));

  TrialReport rep;
  rep.model = x.model;
  rep.residual = std::abs(angle_at(z, x, u) - half_pi);
  rep.pass = rep.residual <= tolerance;
  rep.d_xy = distance(x, y);
  rep.d_yz = distance(y, z);
  rep.d_xz = distance(x, z);
  return rep;
}

// One spherical counterexample trial: a great 2-sphere in the 3-sphere, the
// point x form-orthogonal to its span (so every geodesic from x meets it
// orthogonally, at distance pi/2), and a random triangle y, z, u on it.
struct CounterexampleReport {
  std::uint64_t trial = 0;
  double hyp_residual = 0.0;           // worst defect among the six right base angles
  std::array<double, 3> yzu_angles{};  // triangle angles at y, z, u
  double min_defect = 0.0;             // smallest |angle - pi/2| among the three
  bool non_right = false;              // min_defect > band
};

struct CounterexampleOutcome {
  std::vector<CounterexampleReport> reports;
  int non_right_count = 0;
  double non_right_fraction = 0.0;
  double max_hyp_residual = 0.0;
  double band = 0.0;
};

// Runs `trials` seeded spherical trials and reports how often the sampled
// triangle has no right angle (within `band`) at any vertex. The hypotheses
// hold to machine precision by construction in every trial; the interesting
// output is the non-right fraction.
inline CounterexampleOutcome counterexample_trials(int trials, std::uint64_t seed,
                                       double band = 0.01) {
  if (trials < 1) raise(Err::BadParameter, "need at least one trial");
  if (!(band > 0.0)) raise(Err::BadParameter, "band must be positive");
  const Model m{ModelKind::Spherical, 3};
  const double half_pi = std::numbers::pi / 2.0;

  CounterexampleOutcome out;
  out.band = band;
  out.reports.reserve(static_cast<std::size_t>(trials));

  for (int t = 0; t < trials; ++t) {
    bool done = false;
    for (std::uint64_t attempt = 0; attempt < 100 && !done; ++attempt) {
      SplitRng rng = SplitRng(seed).split(static_cast<std::uint64_t>(t)).split(attempt);
      try {
        std::vector<Vec> gens;
        for (int i = 0; i < 3; ++i) gens.push_back(rng.gaussian(4));
        const PSpace phi = make_pspace(m, gens);
        const ModelPoint x = make_point(m, complement(phi.span).basis[0]);

        // Uniform triangle on the great 2-sphere, redrawn only when a pair
        // is too close to coincident or antipodal for stable angles.
        std::array<ModelPoint, 3> tri{x, x, x};
        bool ok = false;
        for (int tries = 0; tries < 300 && !ok; ++tries) {
          for (auto& pt : tri) {
            Vec v(4, 0.0);
            const Vec c = rng.gaussian(3);
            for (std::size_t i = 0; i < 3; ++i) axpy(v, c[i], phi.span.basis[i]);
            pt = radial_project(m, v);
          }
          ok = true;
          for (int i = 0; i < 3 && ok; ++i)
            for (int j = i + 1; j < 3 && ok; ++j) {
              const double d = distance(tri[i], tri[j]);
              ok = (d > 0.1 && d < std::numbers::pi - 0.1);
            }
        }
        if (!ok) continue;
        const ModelPoint& y = tri[0];
        const ModelPoint& z = tri[1];
        const ModelPoint& u = tri[2];

        CounterexampleReport rep;
        rep.trial = static_cast<std::uint64_t>(t);
        double hyp = 0.0;
        const std::array<const ModelPoint*, 3> corners{&y, &z, &u};
        for (const ModelPoint* a : corners)
          for (const ModelPoint* b : corners) {
            if (a == b) continue;
            hyp = std::max(hyp, std::abs(angle_at(*a, x, *b) - half_pi));
          }
        rep.hyp_residual = hyp;
        rep.yzu_angles = {angle_at(y, z, u), angle_at(z, y, u), angle_at(u, y, z)};
        rep.min_defect = std::abs(rep.yzu_angles[0] - half_pi);
        for (double a : rep.yzu_angles)
          rep.min_defect = std::min(rep.min_defect, std::abs(a - half_pi));
        rep.non_right = rep.min_defect > band;

        out.max_hyp_residual = std::max(out.max_hyp_residual, rep.hyp_residual);
        out.non_right_count += rep.non_right ? 1 : 0;
        out.reports.push_back(rep);
        done = true;
      } catch (const Error&) {
        // resample
      }
    }
    if (!done) raise(Err::SamplingExhausted, "counterexample trial could not be sampled");
  }
  out.non_right_fraction =
      static_cast<double>(out.non_right_count) / static_cast<double>(trials);
  return out;
}

// Brute-force nearest point by dense parameter search plus window refinement.
// Deliberately ignorant of the projection formulas: it only evaluates the
// distance function along explicit geodesic parameterizations, so it can sit
// on the other side of an equality test from metrical_project.
inline ProjectionResult oracle_project(const PSpace& ps, const ModelPoint& x,
                                       int resolution = 256) {
  check_same_model(ps.model, x.model);
  if (ps.p > 2)
    raise(Err::UnsupportedDimension, "oracle search supports 1- and 2-spaces only");
  if (resolution < 100)
    raise(Err::BadParameter, "resolution must be at least 100");

  const Model& m = ps.model;
  const ModelPoint c = detail::carrier_point(ps);
  const std::vector<Vec> tb = tangent_basis(ps, c);
  const double two_pi = 2.0 * std::numbers::pi;

  ProjectionResult out{ModelPoint{m, {}}, 0.0, 0.0, false};

  if (ps.p == 1) {
    const TangentVector t = make_tangent(c, tb[0]);
    double lo = 0.0, hi = two_pi;
    if (m.kind != ModelKind::Spherical) {
      const double reach = 2.0 * distance(x, c) + 1.0;
      lo = -reach;
      hi = reach;
    }
    const auto eval = [&](double th) { return distance(x, exp_point(t, th)); };

    double best_th = lo, best_d = eval(lo);
    for (int i = 1; i <= resolution; ++i) {
      const double th = lo + (hi - lo) * static_cast<double>(i) / resolution;
      const double d = eval(th);
      if (d < best_d) {
        best_d = d;
        best_th = th;
      }
    }
    double window = (hi - lo) / resolution;
    while (window > 1e-13) {
      const double start = best_th - window;
      const double step = window / 4.0;
      for (int i = 0; i <= 8; ++i) {
        const double th = start + step * static_cast<double>(i);
        const double d = eval(th);
        if (d < best_d) {
          best_d = d;
          best_th = th;
        }
      }
      window *= 0.25;
    }
    out.foot = exp_point(t, best_th);
    out.dist = best_d;
  } else {
    const auto point_at = [&](double alpha, double r) {
      Vec dir = scaled(tb[0], std::cos(alpha));
      axpy(dir, std::sin(alpha), tb[1]);
      return exp_point(make_tangent(c, dir), r);
    };
    const auto eval = [&](double alpha, double r) {
      return distance(x, point_at(alpha, r));
    };

    const double r_hi = (m.kind == ModelKind::Spherical)
                            ? std::numbers::pi
                            : 2.0 * distance(x, c) + 1.0;
    double best_a = 0.0, best_r = 0.0, best_d = eval(0.0, 0.0);
    for (int i = 0; i < resolution; ++i) {
      const double alpha = two_pi * static_cast<double>(i) / resolution;
      for (int j = 0; j <= resolution; ++j) {
        const double r = r_hi * static_cast<double>(j) / resolution;
        const double d = eval(alpha, r);
        if (d < best_d) {
          best_d = d;
          best_a = alpha;
          best_r = r;
        }
      }
    }
    double wa = two_pi / resolution, wr = r_hi / resolution;
    while (wa > 1e-13 || wr > 1e-13) {
      const double a0 = best_a - wa, r0 = best_r - wr;
      for (int i = 0; i <= 8; ++i)
        for (int j = 0; j <= 8; ++j) {
          const double a = a0 + wa * static_cast<double>(i) / 4.0;
          const double r = r0 + wr * static_cast<double>(j) / 4.0;
          const double d = eval(a, r);
          if (d < best_d) {
            best_d = d;
            best_a = a;
            best_r = r;
          }
        }
      wa *= 0.25;
      wr *= 0.25;
    }
    out.foot = point_at(best_a, best_r);
    out.dist = best_d;
  }

  out.ortho_residual = foot_residual(ps, out.foot, x);
  return out;
}

struct SuiteParams {
  Model model{ModelKind::Spherical, 3};
  int p = 2;
  int q = 1;
  int trials = 1000;
  std::uint64_t seed = 0;
  double tolerance = tol::geo;
  int n_probe = 32;
  int parallelism = 0;  // 0 = hardware concurrency
};

// Runs `trials` seeded perpendicularity trials. Per-trial streams are derived
// from (seed, index), and trials are written into a preallocated slot by
// index, so the returned vector is identical for every parallelism level.
inline std::vector<TrialReport> run_suite(const SuiteParams& sp) {
  if (sp.trials < 1) raise(Err::BadParameter, "need at least one trial");
  if (!(sp.tolerance > 0.0)) raise(Err::BadParameter, "tolerance must be positive");
  if (sp.n_probe < 0) raise(Err::BadParameter, "n_probe must be non-negative");

  std::vector<TrialReport> reports(static_cast<std::size_t>(sp.trials));
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int workers =
      std::max(1, std::min(sp.parallelism > 0 ? sp.parallelism : static_cast<int>(hw),
                           sp.trials));

  std::exception_ptr first_error;
  std::mutex error_mutex;
  const auto work = [&](int lo, int hi) {
    try {
      for (int i = lo; i < hi; ++i) {
        const std::uint64_t trial_seed =
            SplitRng(sp.seed).split(static_cast<std::uint64_t>(i)).key();
        const TrialConfig cfg = sample_config(sp.model, sp.p, sp.q, trial_seed);
        TrialReport rep = verify_perpendicularity(cfg, sp.tolerance, sp.n_probe);
        rep.trial = static_cast<std::uint64_t>(i);
        reports[static_cast<std::size_t>(i)] = std::move(rep);
      }
    } catch (...) {
      const std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };

  if (workers == 1) {
    work(0, sp.trials);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (sp.trials + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int lo = w * chunk;
      const int hi = std::min(sp.trials, lo + chunk);
      if (lo < hi) pool.emplace_back(work, lo, hi);
    }
    for (std::thread& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return reports;
}

}  // namespace spaceform
