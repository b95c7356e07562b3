#pragma once

// JSON job specs: curves, surfaces, curves on surfaces, hypersurfaces for the
// Blaschke pipeline and FrameData. Every malformed input raises SpecError
// with a location ("file:line:col" for syntax, a key path for content).

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "afocal/blaschke.hpp"
#include "afocal/curves.hpp"
#include "afocal/darboux.hpp"
#include "afocal/focal.hpp"
#include "afocal/numkit/csv.hpp"

namespace afocal::io {

using json = nlohmann::json;

/// A parsed document and the directory relative paths resolve against.
struct Doc {
  json root;
  std::filesystem::path dir;
};

inline Doc parse_json_text(const std::string& text, const std::string& name, std::filesystem::path dir = ".") {
  try {
    return {json::parse(text), std::move(dir)};
  } catch (const json::parse_error& e) {
    // byte is 1-based and points one past the offending character
    size_t line = 1, col = 1;
    const size_t stop = std::min<size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    if (const auto p = msg.find(": "); p != std::string::npos) msg = msg.substr(msg.rfind(": ") + 2);
    throw Error(ErrorKind::SpecError,
                name + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }
}

inline Doc load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::SpecError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path, std::filesystem::path(path).parent_path());
}

namespace detail {

[[noreturn]] inline void bad(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::SpecError, where + ": " + what);
}

inline const json& need(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) bad(where, "missing key '" + key + "'");
  return *it;
}

inline double as_number(const json& j, const std::string& where) {
  if (!j.is_number()) bad(where, "expected a number");
  return j.get<double>();
}

inline double number(const json& j, const std::string& key, const std::string& where) {
  return as_number(need(j, key, where), where + "." + key);
}

inline double number_or(const json& j, const std::string& key, double fallback, const std::string& where) {
  return j.contains(key) ? number(j, key, where) : fallback;
}

inline int integer_or(const json& j, const std::string& key, int fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const json& v = j[key];
  if (!v.is_number_integer()) bad(where + "." + key, "expected an integer");
  return v.get<int>();
}

inline bool boolean_or(const json& j, const std::string& key, bool fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_boolean()) bad(where + "." + key, "expected true or false");
  return j[key].get<bool>();
}

inline std::string string(const json& j, const std::string& key, const std::string& where) {
  const json& v = need(j, key, where);
  if (!v.is_string()) bad(where + "." + key, "expected a string");
  return v.get<std::string>();
}

inline std::vector<double> numbers(const json& v, const std::string& where) {
  if (!v.is_array()) bad(where, "expected an array of numbers");
  std::vector<double> r;
  for (size_t i = 0; i < v.size(); ++i) r.push_back(as_number(v[i], where + "[" + std::to_string(i) + "]"));
  return r;
}

inline std::vector<double> numbers(const json& j, const std::string& key, const std::string& where) {
  return numbers(need(j, key, where), where + "." + key);
}

inline VecD vector(const json& j, const std::string& key, int dim, const std::string& where) {
  const auto v = numbers(j, key, where);
  if (dim > 0 && static_cast<int>(v.size()) != dim) {
    bad(where + "." + key, "expected " + std::to_string(dim) + " entries");
  }
  return VecD::Map(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline MatD matrix(const json& v, int n, const std::string& where) {
  if (n == 1 && v.is_number()) return MatD::Constant(1, 1, v.get<double>());
  if (!v.is_array() || static_cast<int>(v.size()) != n) bad(where, "expected " + std::to_string(n) + " rows");
  MatD m(n, n);
  for (int i = 0; i < n; ++i) {
    const auto row = numbers(v[static_cast<size_t>(i)], where + "[" + std::to_string(i) + "]");
    if (static_cast<int>(row.size()) != n) bad(where + "[" + std::to_string(i) + "]", "wrong row length");
    for (int j = 0; j < n; ++j) m(i, j) = row[static_cast<size_t>(j)];
  }
  return m;
}

}  // namespace detail

// ---- curves ----------------------------------------------------------------------

/// Either a closed-form source or a sampled table (jets by finite differences).
struct CurveInput {
  std::string kind;
  curves::NamedCurve named;
  std::optional<JetCurve> sampled;

  int dim() const { return sampled ? sampled->dim() : named.source->dim(); }
  bool periodic() const { return named.periodic; }
  JetCurve jets(int intervals) const {
    if (sampled) return *sampled;
    return JetCurve::from_source(named.source, uniform_grid(named.t0, named.t1, intervals), 4);
  }
};

inline CurveInput parse_curve(const json& j, const std::filesystem::path& dir, const ToleranceConfig& cfg,
                              const std::string& where = "curve");

namespace detail {

inline CurveInput sampled_curve(const json& j, const std::filesystem::path& dir, const std::string& where) {
  const std::filesystem::path p = dir / string(j, "path", where);
  const SampledTable t = read_curve_csv(p.string());
  bool periodic = boolean_or(j, "periodic", false, where);
  std::vector<double> u = t.u;
  std::vector<VecD> x = t.x;
  if (periodic && (x.front() - x.back()).norm() > 1e-12) {
    bad(where, "periodic tables must repeat the first sample as the last");
  }
  CurveInput c;
  c.kind = "csv";
  c.sampled = derive_jets(u, x, 4, periodic);
  c.named = {c.sampled->source, u.front(), u.back(), periodic};
  return c;
}

}  // namespace detail

inline CurveInput parse_curve(const json& j, const std::filesystem::path& dir, const ToleranceConfig& cfg,
                              const std::string& where) {
  using namespace detail;
  const std::string kind = string(j, "kind", where);
  CurveInput c;
  c.kind = kind;
  if (kind == "circle") {
    c.named = curves::circle(number_or(j, "r", 1.0, where));
  } else if (kind == "ellipse") {
    c.named = curves::ellipse(number(j, "a", where), number(j, "b", where));
  } else if (kind == "fourier_oval") {
    c.named = curves::fourier_oval(numbers(j, "radial_coeffs", where));
  } else if (kind == "support_oval") {
    c.named = curves::support_oval(numbers(j, "support_coeffs", where));
  } else if (kind == "parametric_poly") {
    c.named = curves::parametric_poly(numbers(j, "x", where), numbers(j, "y", where),
                                      number_or(j, "t0", -1.0, where), number_or(j, "t1", 1.0, where));
  } else if (kind == "helix") {
    c.named = curves::helix(number_or(j, "radius", 1.0, where), number_or(j, "pitch", 1.0, where),
                            number_or(j, "t0", 0.0, where), number_or(j, "t1", curves::kTwoPi, where));
  } else if (kind == "trig3") {
    std::vector<double> drift{0, 0, 0};
    if (j.contains("drift")) drift = numbers(j, "drift", where);
    if (drift.size() != 3) bad(where + ".drift", "expected 3 entries");
    c.named = curves::trig3(numbers(j, "x", where), numbers(j, "y", where), numbers(j, "z", where), drift,
                            number_or(j, "t0", 0.0, where), number_or(j, "t1", curves::kTwoPi, where));
  } else if (kind == "poly3") {
    c.named = curves::poly3(numbers(j, "x", where), numbers(j, "y", where), numbers(j, "z", where),
                            number_or(j, "t0", -1.0, where), number_or(j, "t1", 1.0, where));
  } else if (kind == "area_lift") {
    // (G', z) of a planar oval in affine arc-length: a closed cylindrical space curve
    const CurveInput base = parse_curve(need(j, "base", where), dir, cfg, where + ".base");
    if (base.dim() != 2) bad(where + ".base", "base curve must be planar");
    const int intervals = integer_or(j, "intervals", 256, where);
    const auto pc = curves::reparam_affine_planar(base.jets(intervals), cfg);
    VecD origin = VecD::Zero(2);
    if (j.contains("origin")) origin = vector(j, "origin", 2, where);
    c.named = {curves::area_lift(pc, origin, pc.grid().front()), pc.grid().front(), pc.grid().back(), pc.closed};
  } else if (kind == "csv") {
    c = sampled_curve(j, dir, where);
  } else {
    bad(where + ".kind", "unknown curve kind '" + kind + "'");
  }
  return c;
}

// ---- surfaces and curves on them -------------------------------------------------

struct SurfaceInput {
  std::string kind;
  std::optional<darboux::ImplicitPoly> implicit;
  std::optional<darboux::ConeSurface> cone;
};

inline SurfaceInput parse_surface(const json& j, const std::filesystem::path& dir, const ToleranceConfig& cfg,
                                  const std::string& where = "surface") {
  using namespace detail;
  SurfaceInput s;
  s.kind = string(j, "kind", where);
  if (s.kind == "sphere") {
    const double r = number_or(j, "r", 1.0, where);
    if (!(r > 0)) bad(where + ".r", "radius must be positive");
    s.implicit = darboux::sphere(r);
  } else if (s.kind == "ellipsoid") {
    const double a = number(j, "a", where), b = number(j, "b", where), c = number(j, "c", where);
    if (!(a > 0 && b > 0 && c > 0)) bad(where, "semi-axes must be positive");
    s.implicit = darboux::ellipsoid(a, b, c);
  } else if (s.kind == "implicit_poly") {
    const json& cs = need(j, "coeffs", where);
    if (!cs.is_array() || cs.empty()) bad(where + ".coeffs", "expected a non-empty array of [c, i, j, k]");
    std::vector<darboux::ImplicitPoly::Term> terms;
    for (size_t t = 0; t < cs.size(); ++t) {
      const std::string w = where + ".coeffs[" + std::to_string(t) + "]";
      const auto v = numbers(cs[t], w);
      if (v.size() != 4) bad(w, "expected [c, i, j, k]");
      for (int e = 1; e < 4; ++e) {
        if (v[e] < 0 || v[e] != std::floor(v[e])) bad(w, "exponents must be non-negative integers");
      }
      terms.push_back({v[0], static_cast<int>(v[1]), static_cast<int>(v[2]), static_cast<int>(v[3])});
    }
    s.implicit = darboux::ImplicitPoly(std::move(terms));
  } else if (s.kind == "cone") {
    const VecD apex = vector(j, "apex", 3, where);
    const CurveInput base = parse_curve(need(j, "base_curve", where), dir, cfg, where + ".base_curve");
    if (base.sampled) bad(where + ".base_curve", "cone bases must be closed-form curves");
    s.cone = darboux::cone_over(base.named, apex);
  } else {
    bad(where + ".kind", "unknown surface kind '" + s.kind + "'");
  }
  return s;
}

/// {"fixture": name} or {"surface": ..., "curve": ...}. On implicit surfaces
/// the curve is a space curve, or {"kind":"radial","direction":...} projected
/// to a sphere/ellipsoid; on cones it is {"kind":"cone_section","s":[...]}
/// with theta = t and the ruling parameter s(t) a trigonometric polynomial.
inline darboux::CurveOnSurface parse_curve_on_surface(const Doc& doc, int intervals, const ToleranceConfig& cfg) {
  using namespace detail;
  const json& j = doc.root;
  if (j.contains("fixture")) return darboux::fixture_by_name(string(j, "fixture", "spec"), cfg);
  const SurfaceInput s = parse_surface(need(j, "surface", "spec"), doc.dir, cfg);
  const json& cj = need(j, "curve", "spec");
  const std::string kind = string(cj, "kind", "curve");
  if (s.cone) {
    if (kind != "cone_section") bad("curve.kind", "curves on a cone are given as 'cone_section'");
    std::vector<double> sc{1.0};
    if (cj.contains("s")) sc = numbers(cj, "s", "curve");
    return darboux::on_cone(
        *s.cone, [](const Series& t) { return t; },
        [sc](const Series& t) { return curves::trig_poly(sc, t); }, 0.0, curves::kTwoPi, true);
  }
  curves::NamedCurve c;
  if (kind == "radial") {
    const CurveInput dirc = parse_curve(need(cj, "direction", "curve"), doc.dir, cfg, "curve.direction");
    if (dirc.dim() != 3 || dirc.sampled) bad("curve.direction", "expected a closed-form space curve");
    c = darboux::radial_projection(*s.implicit, dirc.named);
  } else {
    const CurveInput ci = parse_curve(cj, doc.dir, cfg);
    if (ci.dim() != 3) bad("curve", "curves on surfaces live in R^3");
    c = ci.named;
  }
  return darboux::on_implicit(*s.implicit, c, intervals, cfg, s.kind);
}

// ---- hypersurfaces for the Blaschke pipeline ---------------------------------------

/// Planar curves (any planar curve kind, n = 1) or surface patches (n = 2).
inline blaschke::Hypersurface parse_hypersurface(const json& j, const std::filesystem::path& dir,
                                                 const ToleranceConfig& cfg,
                                                 const std::string& where = "hypersurface") {
  using namespace detail;
  const std::string kind = string(j, "kind", where);
  if (kind == "sphere") return blaschke::sphere_patch(number_or(j, "r", 1.0, where));
  if (kind == "ellipsoid") {
    return blaschke::ellipsoid_patch(number(j, "a", where), number(j, "b", where), number(j, "c", where),
                                     number_or(j, "vmax", 1.2, where));
  }
  if (kind == "paraboloid") return blaschke::paraboloid();
  if (kind == "convex_graph") {
    return blaschke::convex_graph(number_or(j, "c3", 0.0, where), number_or(j, "w", 1.0, where));
  }
  if (kind == "parabola") return blaschke::parabola();
  const CurveInput c = parse_curve(j, dir, cfg, where);
  if (c.dim() != 2) bad(where, "hypersurfaces of the plane must be planar curves");
  blaschke::Hypersurface h = blaschke::planar_curve(c.named, kind);
  if (c.sampled) h.samples = c.sampled;
  return h;
}

// ---- FrameData ---------------------------------------------------------------------

/// Seed for randomized inputs: AFFINE_FOCAL_SEED when set, else a fixed value.
inline uint64_t seed_from_env(uint64_t fallback = 20240531) {
  if (const char* s = std::getenv("AFFINE_FOCAL_SEED")) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      throw Error(ErrorKind::SpecError, "AFFINE_FOCAL_SEED must be an unsigned integer");
    }
  }
  return fallback;
}

inline focal::FrameData random_frame_data(int n, int samples, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  focal::FrameData fd;
  fd.n = n;
  fd.source = "random";
  for (int k = 0; k < samples; ++k) {
    focal::FrameSample s;
    s.param = {static_cast<double>(k), 0.0};
    s.mu = VecD(n);
    s.sigma = MatD(n, n);
    for (int i = 0; i < n; ++i) {
      s.mu[i] = u(rng);
      for (int j = 0; j <= i; ++j) s.sigma(i, j) = s.sigma(j, i) = u(rng);
    }
    s.h1 = MatD::Identity(n, n);
    s.signature = VecD::Ones(n);
    fd.samples.push_back(std::move(s));
  }
  return fd;
}

/// What a FrameData spec produced, with the product fixture kept for the
/// (r, s) reading of its factors.
struct FrameInput {
  focal::FrameData fd;
  std::optional<focal::ProductFixture> product;
};

/// Explicit {n, grid, mu, sigma[, h1]} or {"generate": {...}} with kinds
/// product, umbilic, random, quadric_section.
inline FrameInput parse_frame_data(const Doc& doc, const ToleranceConfig& cfg) {
  using namespace detail;
  const json& j = doc.root;
  FrameInput in;
  if (j.contains("generate")) {
    const json& g = j["generate"];
    const std::string kind = string(g, "kind", "generate");
    if (kind == "product") {
      const CurveInput a = parse_curve(need(g, "alpha", "generate"), doc.dir, cfg, "generate.alpha");
      const CurveInput b = parse_curve(need(g, "beta", "generate"), doc.dir, cfg, "generate.beta");
      if (a.sampled || b.sampled) bad("generate", "product factors must be closed-form curves");
      in.product = focal::product_curves_fixture(a.named, b.named, integer_or(g, "intervals_alpha", 32, "generate"),
                                                 integer_or(g, "intervals_beta", 32, "generate"), cfg);
      in.fd = in.product->fd;
    } else if (kind == "umbilic") {
      const auto h = parse_hypersurface(need(g, "hypersurface", "generate"), doc.dir, cfg, "generate.hypersurface");
      const auto b = blaschke::blaschke_apparatus(h, integer_or(g, "intervals", 16, "generate"), cfg);
      const VecD O = vector(g, "O", h.n + 1, "generate");
      in.fd = focal::frame_data_from_umbilic(umbilic::construct_umbilic(b, O));
    } else if (kind == "random") {
      const int n = integer_or(g, "n", 2, "generate");
      if (n < 1 || n > 6) bad("generate.n", "n must be in 1..6");
      in.fd = random_frame_data(n, integer_or(g, "samples", 100, "generate"), seed_from_env());
    } else if (kind == "quadric_section") {
      focal::QuadricSpace q{vector(g, "eps", -1, "generate")};
      in.fd = focal::quadric_section_fixture(q, vector(g, "l", static_cast<int>(q.eps.size()), "generate"),
                                             number(g, "c", "generate"), integer_or(g, "samples", 64, "generate"),
                                             cfg)
                  .fd;
    } else {
      bad("generate.kind", "unknown FrameData generator '" + kind + "'");
    }
    return in;
  }
  const json& nj = need(j, "n", "spec");
  if (!nj.is_number_integer() || nj.get<int>() < 1) bad("spec.n", "expected a positive integer");
  const int n = nj.get<int>();
  const auto grid = numbers(j, "grid", "spec");
  const json& mu = need(j, "mu", "spec");
  const json& sigma = need(j, "sigma", "spec");
  if (!mu.is_array() || mu.size() != grid.size()) bad("spec.mu", "one entry per grid sample expected");
  if (!sigma.is_array() || sigma.size() != grid.size()) bad("spec.sigma", "one entry per grid sample expected");
  const json* h1 = j.contains("h1") ? &j["h1"] : nullptr;
  if (h1 && (!h1->is_array() || h1->size() != grid.size())) bad("spec.h1", "one entry per grid sample expected");
  in.fd.n = n;
  in.fd.source = "spec";
  for (size_t k = 0; k < grid.size(); ++k) {
    const std::string ks = "[" + std::to_string(k) + "]";
    focal::FrameSample s;
    s.param = {grid[k], 0.0};
    if (n == 1 && mu[k].is_number()) {
      s.mu = VecD::Constant(1, mu[k].get<double>());
    } else {
      const auto m = numbers(mu[k], "spec.mu" + ks);
      if (static_cast<int>(m.size()) != n) bad("spec.mu" + ks, "expected n entries");
      s.mu = VecD::Map(m.data(), n);
    }
    s.sigma = matrix(sigma[k], n, "spec.sigma" + ks);
    if ((s.sigma - s.sigma.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + s.sigma.cwiseAbs().maxCoeff())) {
      bad("spec.sigma" + ks, "sigma must be symmetric");
    }
    s.h1 = h1 ? matrix((*h1)[k], n, "spec.h1" + ks) : MatD::Identity(n, n);
    s.signature = VecD(n);
    for (int i = 0; i < n; ++i) s.signature[i] = s.h1(i, i) < 0 ? -1.0 : 1.0;
    in.fd.samples.push_back(std::move(s));
  }
  if (in.fd.samples.empty()) bad("spec.grid", "at least one sample is required");
  return in;
}

// ---- shared options ------------------------------------------------------------------

/// Tolerance overrides from a spec's "tolerances" object.
inline void apply_tolerances(const json& j, ToleranceConfig& cfg) {
  if (!j.contains("tolerances")) return;
  const json& t = j["tolerances"];
  cfg.tol_det = detail::number_or(t, "det", cfg.tol_det, "tolerances");
  cfg.tol_zero = detail::number_or(t, "zero", cfg.tol_zero, "tolerances");
  cfg.tol_residual = detail::number_or(t, "residual", cfg.tol_residual, "tolerances");
  cfg.refine_depth = detail::integer_or(t, "refine_depth", cfg.refine_depth, "tolerances");
}

/// Sample density keys must be at least 16.
inline int density(const json& j, const std::string& key, int fallback) {
  const int v = detail::integer_or(j, key, fallback, "spec");
  if (v < 16) detail::bad("spec." + key, "densities must be at least 16");
  return v;
}

}  // namespace afocal::io
