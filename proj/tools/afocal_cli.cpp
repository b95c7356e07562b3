// afocal: command-line driver for the affine focal set pipelines.
//
// Exit codes: 0 success, 2 spec or usage errors, 3 numerical failures.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "afocal/blaschke.hpp"
#include "afocal/curves.hpp"
#include "afocal/darboux.hpp"
#include "afocal/focal.hpp"
#include "afocal/io.hpp"
#include "afocal/umbilic.hpp"

namespace fs = std::filesystem;
using namespace afocal;
using io::json;

namespace {

struct Options {
  ToleranceConfig cfg;
  std::optional<double> tol_det, tol_zero, tol_residual;
  std::optional<int> refine_depth;
  std::optional<double> gauge, lambda0;
  int threads = 1;
  std::string out = ".";
  std::string spec;

  // spec values first, command-line flags win
  ToleranceConfig tolerances(const json& j) const {
    ToleranceConfig c = cfg;
    io::apply_tolerances(j, c);
    if (tol_det) c.tol_det = *tol_det;
    if (tol_zero) c.tol_zero = *tol_zero;
    if (tol_residual) c.tol_residual = *tol_residual;
    if (refine_depth) c.refine_depth = *refine_depth;
    c.validate();
    return c;
  }
  fs::path dir() const {
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec || !fs::is_directory(out)) throw Error(ErrorKind::SpecError, "output directory not writable: " + out);
    return out;
  }
};

json zeros_json(const std::vector<Zero>& zs) {
  json a = json::array();
  for (const Zero& z : zs) a.push_back({{"u", z.u}, {"tangential", z.tangential}});
  return a;
}

// ---- planar -------------------------------------------------------------------------

void cmd_planar(const Options& o) {
  const io::Doc doc = io::load_json(o.spec);
  const ToleranceConfig cfg = o.tolerances(doc.root);
  const io::CurveInput c = io::parse_curve(io::detail::need(doc.root, "curve", "spec"), doc.dir, cfg);
  if (c.dim() != 2) throw Error(ErrorKind::SpecError, "curve: planar command needs a planar curve");
  const int intervals = io::density(doc.root, "intervals", 256);
  const auto pc = curves::reparam_affine_planar(c.jets(intervals), cfg, true);
  const fs::path dir = o.dir();
  {
    io::CsvWriter w(dir / "invariants.csv", {"u", "rho", "rho_prime"});
    for (size_t k = 0; k < pc.size(); ++k) w.row({pc.grid()[k], pc.rho[k], pc.rho_prime[k]});
  }
  const auto ev = curves::affine_evolute(pc, cfg);
  {
    io::CsvWriter w(dir / "evolute.csv", {"u", "Ex", "Ey"});
    for (size_t k = 0; k < ev.u.size(); ++k) w.row({ev.u[k], ev.points[k][0], ev.points[k][1]});
  }
  const bool closed = c.periodic() && pc.closed;
  const auto vc = curves::count_vertices(pc, closed, cfg);
  json r = {{"count", vc.count},
            {"tangential", vc.tangential},
            {"degenerate", vc.degenerate},
            {"certified", vc.certified},
            {"closed", pc.closed},
            {"convex", pc.convex},
            {"reflected", pc.reflected},
            {"low_confidence", pc.low_confidence},
            {"affine_length", pc.length()},
            {"normalization_residual", pc.normalization_residual},
            {"structure_residual", pc.structure_residual},
            {"vertices", zeros_json(vc.zeros)},
            {"evolute_cusps", zeros_json(ev.cusps)}};
  json omitted = json::array();
  for (double u : ev.omitted_u) omitted.push_back(u);
  r["evolute_omitted_u"] = omitted;
  if (doc.root.contains("origin")) {
    const VecD O = io::detail::vector(doc.root, "origin", 2, "spec");
    const auto s = curves::support_function(pc, O);
    io::CsvWriter w(dir / "support.csv", {"u", "z", "z_second", "residual"});
    for (size_t k = 0; k < pc.size(); ++k) w.row({pc.grid()[k], s.z[k], s.z_second[k], s.residual[k]});
    r["support_residual"] = s.max_residual;
  }
  io::write_json(dir / "vertices.json", r);
}

// ---- spatial ------------------------------------------------------------------------

void cmd_spatial(const Options& o) {
  const io::Doc doc = io::load_json(o.spec);
  const ToleranceConfig cfg = o.tolerances(doc.root);
  const io::CurveInput c = io::parse_curve(io::detail::need(doc.root, "curve", "spec"), doc.dir, cfg);
  if (c.dim() != 3) throw Error(ErrorKind::SpecError, "curve: spatial command needs a space curve");
  const int intervals = io::density(doc.root, "intervals", 256);
  const auto sc = curves::spatial_invariants(c.jets(intervals), cfg);
  const fs::path dir = o.dir();
  {
    io::CsvWriter w(dir / "invariants.csv", {"u", "rho", "rho_prime", "tau"});
    for (size_t k = 0; k < sc.size(); ++k) w.row({sc.grid()[k], sc.rho[k], sc.rho_prime[k], sc.tau[k]});
  }
  const auto cyl = curves::cylindricity_test(sc, cfg);
  const auto pd = curves::projective_density(sc, cfg);
  json r = {{"cylindrical", cyl.cylindrical},
            {"cylindricity_residual", cyl.max_residual},
            {"closed", sc.closed},
            {"reflected", sc.reflected},
            {"low_confidence", sc.low_confidence},
            {"normalization_residual", sc.normalization_residual},
            {"structure_residual", sc.structure_residual},
            {"projective_density_zero", pd.identically_zero},
            {"projective_zeros", zeros_json(pd.zeros)}};
  io::write_json(dir / "report.json", r);
}

// ---- darboux ------------------------------------------------------------------------

void cmd_darboux(const Options& o) {
  const io::Doc doc = io::load_json(o.spec);
  const ToleranceConfig cfg = o.tolerances(doc.root);
  const int intervals = io::density(doc.root, "intervals", 256);
  const int s_samples = io::density(doc.root, "s_samples", 32);
  std::vector<double> s_range{-1.0, 1.0};
  if (doc.root.contains("s_range")) s_range = io::detail::numbers(doc.root, "s_range", "spec");
  if (s_range.size() != 2 || !(s_range[1] > s_range[0])) {
    throw Error(ErrorKind::SpecError, "spec.s_range: expected [min, max] with min < max");
  }
  const double gauge = o.gauge.value_or(io::detail::number_or(doc.root, "gauge", 1.0, "spec"));
  const double lambda0 = o.lambda0.value_or(io::detail::number_or(doc.root, "lambda0", 0.0, "spec"));
  const auto curve = io::parse_curve_on_surface(doc, intervals, cfg);
  const auto g = darboux::reparam_darboux(curve, intervals, cfg, gauge);
  const auto f = darboux::complete_frame(darboux::darboux_field(g, cfg), lambda0);
  const fs::path dir = o.dir();
  {
    io::CsvWriter w(dir / "frame.csv", {"u", "sigma", "rho", "tau", "lambda", "mu"});
    for (size_t k = 0; k < f.size(); ++k) {
      w.row({f.grid[k], f.sigma[k].value(), f.rho[k].value(), f.tau[k].value(), f.lambda[k].value(),
             f.mu[k].value()});
    }
  }
  const auto sh = darboux::focal_sheet(f, s_range[0], s_range[1], s_samples, cfg);
  io::write_obj(dir / "focal.obj", sh.mesh, sh.periodic, sh.degenerate);
  const auto res = darboux::frame_residuals(f);
  json samples = json::array();
  for (const auto& p : sh.sample_points) {
    samples.push_back({{"u", p.u}, {"a", p.a}, {"b", p.b}, {"label", darboux::to_string(p.label)}});
  }
  auto points = [](const std::vector<darboux::SingularPoint>& v) {
    json a = json::array();
    for (const auto& p : v) {
      a.push_back({{"u", p.u}, {"a", p.a}, {"b", p.b}, {"point", io::to_json(p.point)}, {"label", darboux::to_string(p.label)}});
    }
    return a;
  };
  auto constant = [](const std::optional<darboux::ConstantPoint>& c) {
    return c ? json{{"point", io::to_json(c->point)}, {"spread", c->spread}} : json(nullptr);
  };
  const auto fl = darboux::flattening_points(f, cfg);
  json r = {{"surface", curve.surface_kind},
            {"gauge", gauge},
            {"lambda0", lambda0},
            {"containment_residual", g.containment_residual},
            {"gauge_residual", g.gauge_residual},
            {"residuals",
             {{"normalization", res.normalization},
              {"normalization_eta", res.normalization_eta},
              {"xi_tangent", res.xi_tangent},
              {"xi_eq", res.xi_eq},
              {"eta_eq", res.eta_eq},
              {"t_eq", res.t_eq}}},
            {"degenerate_sheet", sh.degenerate},
            {"developability_residual", sh.developability_residual},
            {"visual_contour", constant(darboux::visual_contour_test(f, cfg))},
            {"constant_Q", constant(darboux::constant_Q_test(f, cfg))},
            {"flattening_identically_zero", fl.identically_zero},
            {"flattening_points", zeros_json(fl.zeros)},
            {"edge", points(sh.edge)},
            {"swallowtails", points(sh.swallowtails)},
            {"samples", samples}};
  io::write_json(dir / "labels.json", r);
}

// ---- umbilic ------------------------------------------------------------------------

struct UmbilicJob {
  blaschke::Hypersurface h;
  blaschke::BlaschkeApparatus b;
  VecD O;
};

UmbilicJob umbilic_job(const io::Doc& doc, const ToleranceConfig& cfg) {
  UmbilicJob j;
  j.h = io::parse_hypersurface(io::detail::need(doc.root, "hypersurface", "spec"), doc.dir, cfg);
  const int intervals = io::density(doc.root, "intervals", j.h.n == 1 ? 128 : 16);
  const int v_intervals = doc.root.contains("v_intervals") ? io::density(doc.root, "v_intervals", 16) : -1;
  j.b = blaschke::blaschke_apparatus(j.h, intervals, cfg, v_intervals);
  j.O = io::detail::vector(doc.root, "O", j.h.n + 1, "spec");
  return j;
}

std::vector<std::string> phi_header(int n, const std::string& name) {
  std::vector<std::string> h{"u"};
  if (n == 2) h.push_back("v");
  for (int i = 0; i < n + 2; ++i) h.push_back(name + "_" + std::to_string(i));
  return h;
}

std::vector<double> param_row(int n, const std::array<double, 2>& p, const VecD& v) {
  std::vector<double> r{p[0]};
  if (n == 2) r.push_back(p[1]);
  for (Eigen::Index i = 0; i < v.size(); ++i) r.push_back(v[i]);
  return r;
}

void cmd_umbilic(const Options& o) {
  const io::Doc doc = io::load_json(o.spec);
  const ToleranceConfig cfg = o.tolerances(doc.root);
  const UmbilicJob j = umbilic_job(doc, cfg);
  const auto m = umbilic::construct_umbilic(j.b, j.O);
  const fs::path dir = o.dir();
  {
    io::CsvWriter w(dir / "phi.csv", phi_header(m.n, "phi"));
    for (size_t k = 0; k < m.size(); ++k) w.row(param_row(m.n, m.params[k], m.phi[k]));
  }
  const auto fit = umbilic::hyperplanarity_test(m);
  const auto sphere = blaschke::is_proper_affine_sphere(j.b, cfg);
  json plane = fit.hyperplane ? json{{"normal", io::to_json(fit.hyperplane->normal)}, {"offset", fit.hyperplane->offset}}
                              : json(nullptr);
  json r = {{"n", m.n},
            {"O", io::to_json(j.O)},
            {"laplacian_residual", umbilic::verify_laplacian_identity(m)},
            {"hyperplanar", fit.hyperplane.has_value()},
            {"hyperplane", plane},
            {"plane_residual", fit.residual},
            {"plane_threshold", fit.threshold},
            {"plane_residual_any", fit.residual_any},
            {"plane_any_contains_Q", fit.any_contains_Q},
            {"proper_affine_sphere", sphere.has_value()},
            {"affine_sphere_center", sphere ? io::to_json(sphere->center) : json(nullptr)},
            {"frame_det_residual", m.frame_det_residual},
            {"normal_plane_residual", m.normal_plane_residual},
            {"metric_residual", m.metric_residual},
            {"low_confidence", m.low_confidence}};
  io::write_json(dir / "verification.json", r);
}

void cmd_umbilic_inverse(const Options& o) {
  const io::Doc doc = io::load_json(o.spec);
  const ToleranceConfig cfg = o.tolerances(doc.root);
  const fs::path dir = o.dir();
  json r;
  if (doc.root.contains("phi_csv")) {
    // sampled phi of a plane curve: u,phi_0,phi_1,phi_2
    const fs::path p = doc.dir / io::detail::string(doc.root, "phi_csv", "spec");
    const VecD O = io::detail::vector(doc.root, "O", 2, "spec");
    const auto t = read_curve_csv(p.string());
    if (t.x.front().size() != 3) throw Error(ErrorKind::SpecError, "phi_csv: expected columns u,x0,x1,x2");
    const JetCurve jc = derive_jets(t.u, t.x, 4, io::detail::boolean_or(doc.root, "periodic", false, "spec"));
    const auto rec = umbilic::inverse_construction(jc.source, t.u, O, cfg);
    io::CsvWriter w(dir / "recovered_f.csv", {"u", "f_0", "f_1"});
    for (size_t k = 0; k < rec.f.size(); ++k) w.row({t.u[k], rec.f[k][0], rec.f[k][1]});
    r = {{"n", 1}, {"lambda_residual", rec.lambda_residual}, {"frame_det_residual", rec.frame_det_residual},
         {"low_confidence", true}};
  } else {
    // round trip: phi from (f, O), then f back from phi
    const UmbilicJob j = umbilic_job(doc, cfg);
    const auto m = umbilic::construct_umbilic(j.b, j.O);
    const VecD O2 = doc.root.contains("O_inverse") ? io::detail::vector(doc.root, "O_inverse", m.n + 1, "spec") : j.O;
    const auto rec = umbilic::inverse_construction(m, O2, cfg);
    double err = 0.0;
    io::CsvWriter w(dir / "recovered_f.csv", phi_header(m.n, "f"));
    for (size_t k = 0; k < rec.f.size(); ++k) {
      // phi only determines f up to the shift O2 - O
      err = std::max(err, (rec.f[k] - (j.b.f[k] + O2 - j.O)).cwiseAbs().maxCoeff());
      std::vector<double> row{m.params[k][0]};
      if (m.n == 2) row.push_back(m.params[k][1]);
      for (Eigen::Index i = 0; i < rec.f[k].size(); ++i) row.push_back(rec.f[k][i]);
      w.row(row);
    }
    r = {{"n", m.n},
         {"max_abs_error", err},
         {"lambda_residual", rec.lambda_residual},
         {"frame_det_residual", rec.frame_det_residual},
         {"low_confidence", m.low_confidence}};
  }
  io::write_json(dir / "inverse_report.json", r);
}

// ---- focal --------------------------------------------------------------------------

json line_json(const focal::LineFactor& f) {
  return {{"sigma", f.sigma}, {"mu", f.mu}, {"multiplicity", f.multiplicity}};
}

void cmd_focal(const Options& o) {
  const io::Doc doc = io::load_json(o.spec);
  const ToleranceConfig cfg = o.tolerances(doc.root);
  const io::FrameInput in = io::parse_frame_data(doc, cfg);
  const auto& fd = in.fd;
  const int line_samples = io::density(doc.root, "line_samples", 16);
  const double radius = io::detail::number_or(doc.root, "radius", 3.0, "spec");
  const fs::path dir = o.dir();
  std::vector<std::string> header{"sample", "param"};
  std::vector<std::pair<int, int>> monos;
  for (int t = 0; t <= fd.n; ++t)
    for (int i = t; i >= 0; --i) {
      monos.emplace_back(i, t - i);
      header.push_back("q_" + std::to_string(i) + "_" + std::to_string(t - i));
    }
  io::CsvWriter qw(dir / "q_coefficients.csv", header);
  io::CsvWriter lw(dir / "locus.csv", {"sample", "a", "b"});
  int max_degree = 0;
  bool all_commute = true, all_semiumbilic = true;
  double max_factor_residual = 0.0, max_commutator = 0.0;
  json per_sample = json::array();
  for (size_t k = 0; k < fd.size(); ++k) {
    const auto loc = focal::bifurcation_polynomial(fd, k, cfg);
    const auto cm = focal::commuting_and_semiumbilic(fd, k, cfg);
    max_degree = std::max(max_degree, loc.q.degree());
    all_commute = all_commute && cm.commute;
    all_semiumbilic = all_semiumbilic && cm.semiumbilic;
    max_commutator = std::max(max_commutator, cm.commutator);
    max_factor_residual = std::max(max_factor_residual, loc.factor_residual);
    std::vector<double> row{static_cast<double>(k), fd.samples[k].param[0]};
    for (const auto& [i, j] : monos) row.push_back(loc.q.coeff(i, j).get_d());
    qw.row(row);
    for (const auto& ab : focal::sample_locus(loc.q, radius, line_samples)) {
      lw.row({static_cast<double>(k), ab[0], ab[1]});
    }
    json factors = json::array();
    for (const auto& f : loc.factors) factors.push_back(line_json(f));
    json s = {{"sample", k}, {"q", loc.q.str()}, {"signature_sign", loc.signature_sign}, {"factors", factors}};
    if (in.product) {
      // a = s, b = s - r: the focal set in the coordinates of the two factors
      const auto rs = loc.q.substitute(focal::Poly2::b(), focal::Poly2::b() - focal::Poly2::a());
      s["q_rs"] = rs.str("r", "s");
      json lines = json::array();
      for (const auto& f : loc.factors) {
        // 1 - b mu - a sigma = 1 + r mu - s (mu + sigma)
        lines.push_back({{"r", -f.mu}, {"s", f.mu + f.sigma}, {"multiplicity", f.multiplicity}});
      }
      s["rs_lines"] = lines;
    }
    per_sample.push_back(s);
  }
  json r = {{"n", fd.n},
            {"source", fd.source},
            {"samples", fd.size()},
            {"max_degree", max_degree},
            {"degree_bound_ok", max_degree <= fd.n},
            {"commute", all_commute},
            {"semiumbilic", all_semiumbilic},
            {"max_commutator", max_commutator},
            {"max_factor_residual", max_factor_residual},
            {"per_sample", per_sample}};
  if (!fd.samples.empty()) {
    json first = json::array();
    for (const auto& f : focal::bifurcation_polynomial(fd, 0, cfg).factors) first.push_back(line_json(f));
    r["factors"] = first;
  }
  io::write_json(dir / "summary.json", r);
}

// ---- fixtures -----------------------------------------------------------------------

void cmd_fixtures_list() {
  std::cout << "darboux (use {\"fixture\": name} in a darboux spec):\n";
  for (const auto& f : darboux::fixture_catalog()) std::cout << "  " << f.name << "  " << f.description << '\n';
  std::cout << "hypersurface kinds (umbilic, umbilic-inverse): circle, ellipse, fourier_oval, support_oval,\n"
               "  parametric_poly, csv, parabola, sphere, ellipsoid, paraboloid, convex_graph\n"
               "FrameData generators (focal): product, umbilic, random, quadric_section\n";
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"affine focal sets of curves and codimension-2 submanifolds"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--tol-det", o.tol_det, "relative determinant tolerance");
  app.add_option("--tol-zero", o.tol_zero, "absolute zero tolerance");
  app.add_option("--tol-residual", o.tol_residual, "frame residual bound");
  app.add_option("--tol-refine-depth", o.refine_depth, "bisection depth");
  app.add_option("--gauge", o.gauge, "initial gauge t'(u0) for the Darboux reparametrization");
  app.add_option("--lambda0", o.lambda0, "initial value of lambda");
  app.add_option("--threads", o.threads, "worker threads for per-sample loops")->check(CLI::Range(1, 256));
  app.add_option("--out", o.out, "output directory");

  std::function<void(const Options&)> run;
  auto sub = [&](const std::string& name, const std::string& help, void (*fn)(const Options&)) {
    auto* s = app.add_subcommand(name, help);
    s->add_option("spec", o.spec, "JSON job spec")->required();
    s->callback([&run, fn] { run = fn; });
  };
  sub("planar", "affine invariants, evolute and vertices of a plane curve", cmd_planar);
  sub("spatial", "affine invariants and cylindricity of a space curve", cmd_spatial);
  sub("darboux", "Darboux frame and focal sheet of a curve on a surface", cmd_darboux);
  sub("umbilic", "umbilic immersion from the Blaschke co-normal", cmd_umbilic);
  sub("umbilic-inverse", "recover f from an umbilic immersion", cmd_umbilic_inverse);
  sub("focal", "bifurcation polynomials and focal loci of FrameData", cmd_focal);
  auto* fx = app.add_subcommand("fixtures", "built-in fixtures");
  fx->require_subcommand(1);
  fx->add_subcommand("list", "list fixtures")->callback([&run] { run = [](const Options&) { cmd_fixtures_list(); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    thread_count() = o.threads;
    run(o);
  } catch (const Error& e) {
    // what() is "Kind: message"; the lower-case kind names the failing invariant
    std::string msg = e.what();
    msg = msg.substr(msg.find(": ") + 2);
    std::cerr << "afocal: " << lower(to_string(e.kind())) << ": " << msg << '\n';
    return e.is_spec_error() ? 2 : 3;
  } catch (const io::json::exception& e) {
    std::cerr << "afocal: specerror: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "afocal: error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
