#include "frontier/reporting.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace frontier
{

namespace
{

void expect_token(std::istream& is, const std::string& want)
{
  std::string got;
  if (!(is >> got) || got != want)
    throw Error("read_mesh: expected '" + want + "', got '" + got + "'");
}

template <class T>
T read_value(std::istream& is, const char* what)
{
  T v;
  if (!(is >> v))
    throw Error(std::string("read_mesh: malformed ") + what);
  return v;
}

const char* kind_name(ScalarKind k) { return k == ScalarKind::Real ? "real" : "complex"; }

void write_number(std::ostream& os, Complex z, ScalarKind kind)
{
  os << z.real();
  if (kind == ScalarKind::Complex)
    os << ' ' << z.imag();
}

std::string fmt(double v)
{
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

}  // namespace

MeshDump dump_of(const Mesh& mesh)
{
  MeshDump d;
  d.truncation = mesh.truncation();
  d.vertices = mesh.vertices();
  d.triangles.reserve(mesh.num_elements());
  for (const Element& e : mesh.elements())
    d.triangles.push_back({e.v, 0, e.generation});
  for (const Face& f : mesh.faces())
    if (f.boundary())
      d.boundary.push_back({f.v[0], f.v[1], f.tag});
  return d;
}

void write_mesh(std::ostream& os, const MeshDump& d)
{
  os << "mesh v1\n";
  os << "truncation " << d.truncation << '\n';
  os << d.vertices.size() << '\n' << std::setprecision(17);
  for (Point p : d.vertices)
    os << p.x << ' ' << p.y << '\n';
  os << d.triangles.size() << '\n';
  for (const MeshDump::Triangle& t : d.triangles)
    os << t.v[0] << ' ' << t.v[1] << ' ' << t.v[2] << ' ' << t.refinement_edge << ' '
       << t.generation << '\n';
  os << d.boundary.size() << '\n';
  for (const MeshDump::BoundaryFace& f : d.boundary)
    os << f.a << ' ' << f.b << ' '
       << (f.tag == FaceTag::ArtificialGammaH ? "GH" : "G") << '\n';
}

MeshDump read_mesh(std::istream& is)
{
  MeshDump d;
  expect_token(is, "mesh");
  expect_token(is, "v1");
  expect_token(is, "truncation");
  d.truncation = read_value<int>(is, "truncation");
  const auto nv = read_value<std::size_t>(is, "vertex count");
  d.vertices.resize(nv);
  for (Point& p : d.vertices)
  {
    p.x = read_value<double>(is, "vertex");
    p.y = read_value<double>(is, "vertex");
  }
  const auto ne = read_value<std::size_t>(is, "element count");
  d.triangles.resize(ne);
  for (MeshDump::Triangle& t : d.triangles)
  {
    for (Index& v : t.v)
    {
      v = read_value<Index>(is, "element");
      if (v < 0 || v >= static_cast<Index>(nv))
        throw Error("read_mesh: vertex index out of range");
    }
    t.refinement_edge = read_value<int>(is, "element");
    t.generation = read_value<int>(is, "element");
  }
  const auto nb = read_value<std::size_t>(is, "boundary count");
  d.boundary.resize(nb);
  for (MeshDump::BoundaryFace& f : d.boundary)
  {
    f.a = read_value<Index>(is, "boundary face");
    f.b = read_value<Index>(is, "boundary face");
    const auto tag = read_value<std::string>(is, "boundary face");
    if (tag == "G")
      f.tag = FaceTag::PhysicalGamma;
    else if (tag == "GH")
      f.tag = FaceTag::ArtificialGammaH;
    else
      throw Error("read_mesh: unknown boundary tag '" + tag + "'");
  }
  return d;
}

std::string mesh_svg(const MeshDump& d, const SvgStyle& style)
{
  if (d.vertices.empty())
    throw Error("mesh_svg: empty mesh");
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (Point p : d.vertices)
  {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  const double margin = 10.0;
  const double scale = (style.width - 2 * margin) / std::max(x1 - x0, y1 - y0);
  const double height = (y1 - y0) * scale + 2 * margin;
  auto X = [&](Point p) { return margin + (p.x - x0) * scale; };
  auto Y = [&](Point p) { return margin + (y1 - p.y) * scale; };

  std::ostringstream s;
  s << std::fixed << std::setprecision(2);
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.width
    << "\" height=\"" << height << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<g fill=\"none\" stroke=\"#777\" stroke-width=\"" << style.element_stroke << "\">\n";
  for (const MeshDump::Triangle& t : d.triangles)
  {
    s << "<polygon points=\"";
    for (int i = 0; i < 3; ++i)
    {
      const Point p = d.vertices[t.v[i]];
      s << X(p) << ',' << Y(p) << (i < 2 ? " " : "");
    }
    s << "\"/>\n";
  }
  s << "</g>\n";
  for (FaceTag tag : {FaceTag::PhysicalGamma, FaceTag::ArtificialGammaH})
  {
    s << "<g stroke=\"" << (tag == FaceTag::PhysicalGamma ? "#000" : "#d62728")
      << "\" stroke-width=\"" << style.boundary_stroke << "\" class=\""
      << (tag == FaceTag::PhysicalGamma ? "gamma" : "gamma-h") << "\">\n";
    for (const MeshDump::BoundaryFace& f : d.boundary)
      if (f.tag == tag)
      {
        const Point a = d.vertices[f.a], b = d.vertices[f.b];
        s << "<line x1=\"" << X(a) << "\" y1=\"" << Y(a) << "\" x2=\"" << X(b)
          << "\" y2=\"" << Y(b) << "\"/>\n";
      }
    s << "</g>\n";
  }
  s << "</svg>\n";
  return s.str();
}

void write_field(std::ostream& os, const ScalarField& field)
{
  const Eigen::VectorXcd& v = field.free_values();
  os << "field v1\n" << kind_name(field.kind()) << '\n' << v.size() << '\n'
     << std::setprecision(17);
  for (Index i = 0; i < v.size(); ++i)
  {
    write_number(os, v[i], field.kind());
    os << '\n';
  }
}

void write_flux(std::ostream& os, const EquilibratedFlux& flux)
{
  const Mesh& mesh = flux.mesh();
  os << "flux v1\n" << kind_name(flux.kind()) << '\n'
     << "degree " << flux.degree() << '\n'
     << mesh.num_elements() << ' ' << flux.element().num_dofs() << '\n'
     << std::setprecision(17);
  for (Index K = 0; K < mesh.num_elements(); ++K)
  {
    const Eigen::VectorXcd& c = flux.coefficients(K);
    for (Index i = 0; i < c.size(); ++i)
    {
      if (i > 0)
        os << ' ';
      write_number(os, c[i], flux.kind());
    }
    os << '\n';
  }
}

void write_trace_csv(std::ostream& os, const EquilibratedFlux& flux)
{
  os << "face_id,element_id,trace_norm\n" << std::setprecision(17);
  for (const BoundaryTrace::Entry& e : boundary_normal_trace(flux).faces)
    os << e.face << ',' << e.element << ',' << e.norm << '\n';
}

void write_history_csv(std::ostream& os, const RunHistory& h)
{
  os << "iter,N_dofs,L,eta,eta_tilde,osc_total,misfit_total,bnd_total,tail,"
        "error_global,error_omega0,effectivity,effectivity_tilde\n";
  os << std::setprecision(17);
  for (const IterationRecord& r : h.records)
  {
    auto opt = [&](double v) { return r.has_reference ? fmt(v) : std::string(); };
    os << r.iter << ',' << r.n_dofs << ',' << r.L << ',' << r.eta << ',' << r.eta_tilde
       << ',' << r.osc_total << ',' << r.misfit_total << ',' << r.bnd_total << ','
       << r.tail << ',' << opt(r.error_global) << ','
       << (h.kind == ProblemKind::Helmholtz ? opt(r.error_omega0) : std::string()) << ','
       << opt(r.effectivity) << ',' << opt(r.effectivity_tilde) << '\n';
  }
}

void write_mode_table_csv(std::ostream& os, const ModeBasis& m)
{
  os << "j,lambda,re_kj,im_kj,nu_j\n" << std::setprecision(17);
  for (std::size_t j = 0; j < m.k.size(); ++j)
    os << j << ',' << m.lambda[j] << ',' << m.k[j].real() << ',' << m.k[j].imag() << ','
       << m.nu[j] << '\n';
}

void write_modal_csv(std::ostream& os, const std::vector<DecayReport>& reports)
{
  os << "cylinder,mode_j,station_n,re,im,abs\n" << std::setprecision(17);
  for (std::size_t c = 0; c < reports.size(); ++c)
    for (std::size_t n = 0; n < reports[c].coefficients.size(); ++n)
    {
      const Eigen::VectorXcd& v = reports[c].coefficients[n];
      for (Index j = 0; j < v.size(); ++j)
        os << c << ',' << j << ',' << n << ',' << v[j].real() << ',' << v[j].imag() << ','
           << std::abs(v[j]) << '\n';
    }
}

std::string convergence_svg(const RunHistory& h)
{
  struct Series
  {
    const char* name;
    const char* colour;
    std::vector<std::pair<double, double>> pts;
  };
  std::vector<Series> series{{"error", "#000", {}}, {"eta", "#1f77b4", {}},
                             {"eta_tilde", "#2ca02c", {}}};
  for (const IterationRecord& r : h.records)
  {
    const double n = std::log10(static_cast<double>(r.n_dofs));
    if (r.has_reference && r.error_global > 0.0)
      series[0].pts.push_back({n, std::log10(r.error_global)});
    if (r.eta > 0.0)
      series[1].pts.push_back({n, std::log10(r.eta)});
    if (r.eta_tilde > 0.0)
      series[2].pts.push_back({n, std::log10(r.eta_tilde)});
  }
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const Series& s : series)
    for (auto [x, y] : s.pts)
    {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  if (!std::isfinite(x0))
    throw Error("convergence_svg: nothing to plot");
  x0 = std::floor(x0);
  x1 = std::max(std::ceil(x1), x0 + 1);
  y0 = std::floor(y0);
  y1 = std::max(std::ceil(y1), y0 + 1);

  const double W = 640, H = 480, left = 70, right = 130, top = 20, bottom = 50;
  auto X = [&](double x) { return left + (x - x0) / (x1 - x0) * (W - left - right); };
  auto Y = [&](double y) { return top + (y1 - y) / (y1 - y0) * (H - top - bottom); };

  std::ostringstream s;
  s << std::fixed << std::setprecision(2);
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<g stroke=\"#ddd\">\n";
  for (double x = x0; x <= x1 + 1e-9; x += 1)
    s << "<line x1=\"" << X(x) << "\" y1=\"" << Y(y0) << "\" x2=\"" << X(x) << "\" y2=\""
      << Y(y1) << "\"/>\n";
  for (double y = y0; y <= y1 + 1e-9; y += 1)
    s << "<line x1=\"" << X(x0) << "\" y1=\"" << Y(y) << "\" x2=\"" << X(x1) << "\" y2=\""
      << Y(y) << "\"/>\n";
  s << "</g>\n";
  for (double x = x0; x <= x1 + 1e-9; x += 1)
    s << "<text x=\"" << X(x) << "\" y=\"" << Y(y0) + 18
      << "\" text-anchor=\"middle\">1e" << static_cast<int>(x) << "</text>\n";
  for (double y = y0; y <= y1 + 1e-9; y += 1)
    s << "<text x=\"" << X(x0) - 6 << "\" y=\"" << Y(y) + 4
      << "\" text-anchor=\"end\">1e" << static_cast<int>(y) << "</text>\n";
  s << "<text x=\"" << (X(x0) + X(x1)) / 2 << "\" y=\"" << H - 10
    << "\" text-anchor=\"middle\">N_dofs</text>\n";
  double ly = top + 10;
  for (const Series& se : series)
  {
    if (se.pts.empty())
      continue;
    s << "<polyline fill=\"none\" stroke=\"" << se.colour << "\" stroke-width=\"1.5\" points=\"";
    for (auto [x, y] : se.pts)
      s << X(x) << ',' << Y(y) << ' ';
    s << "\"/>\n";
    s << "<line x1=\"" << W - right + 10 << "\" y1=\"" << ly << "\" x2=\"" << W - right + 30
      << "\" y2=\"" << ly << "\" stroke=\"" << se.colour << "\" stroke-width=\"1.5\"/>\n";
    s << "<text x=\"" << W - right + 36 << "\" y=\"" << ly + 4 << "\">" << se.name
      << "</text>\n";
    ly += 18;
  }
  s << "</svg>\n";
  return s.str();
}

RunSummary summarize(const RunHistory& h, int effectivity_from)
{
  RunSummary s;
  s.effectivity_from = effectivity_from;
  std::vector<double> n, e;
  for (const IterationRecord& r : h.records)
  {
    if (r.has_reference && r.error_global > 0.0)
    {
      n.push_back(static_cast<double>(r.n_dofs));
      e.push_back(r.error_global);
      if (r.iter >= effectivity_from)
      {
        s.effectivity_min = std::isnan(s.effectivity_min)
                                ? r.effectivity
                                : std::min(s.effectivity_min, r.effectivity);
        s.effectivity_max = std::isnan(s.effectivity_max)
                                ? r.effectivity
                                : std::max(s.effectivity_max, r.effectivity);
      }
    }
    s.boundary_pushes += r.boundary_marked ? 1 : 0;
    s.boundary_bisections += r.boundary_bisections;
    s.residual_samples += r.residual_samples;
    s.residual_violations += r.residual_violations;
    s.equilibration_worst = std::max(s.equilibration_worst, r.equilibration_worst);
  }
  const std::size_t window = std::min<std::size_t>(32, n.size());
  if (window >= 5)
  {
    s.slope_points = static_cast<int>(window);
    s.slope = convergence_rate_fit(std::vector<double>(n.end() - window, n.end()),
                                   std::vector<double>(e.end() - window, e.end()));
  }
  return s;
}

void write_summary(std::ostream& os, const RunHistory& h, const RunSummary& s)
{
  const IterationRecord& last = h.records.back();
  os << "history v1\n" << std::setprecision(10);
  os << "problem " << (h.kind == ProblemKind::Helmholtz ? "helmholtz" : "rd") << '\n';
  os << "p " << h.config.p << '\n';
  os << "theta " << h.config.theta << '\n';
  os << "iterations " << h.records.size() << '\n';
  os << "converged " << (h.converged ? 1 : 0) << '\n';
  os << "final_N_dofs " << last.n_dofs << '\n';
  os << "final_L " << last.L << '\n';
  os << "final_eta " << last.eta << '\n';
  os << "final_error " << last.error_global << '\n';
  if (h.kind == ProblemKind::Helmholtz)
    os << "final_error_omega0 " << last.error_omega0 << '\n';
  os << "slope " << s.slope << " over " << s.slope_points << '\n';
  os << "effectivity_range_from_" << s.effectivity_from << ' ' << s.effectivity_min << ' '
     << s.effectivity_max << '\n';
  os << "boundary_pushes " << s.boundary_pushes << '\n';
  os << "boundary_closure_bisections " << s.boundary_bisections << '\n';
  os << "equilibration_worst " << s.equilibration_worst << '\n';
  os << "residual_samples " << s.residual_samples << " violations " << s.residual_violations
     << '\n';
  os << "effectivity";
  for (const IterationRecord& r : h.records)
    os << ' ' << (r.has_reference ? fmt(r.effectivity) : std::string("-"));
  os << '\n';
  for (std::size_t c = 0; c < s.decay.size(); ++c)
    for (const ModeFit& m : s.decay[c].modes)
      os << "decay cylinder " << c << " mode " << m.mode << " nu " << m.nu << " fitted "
         << m.fitted << " rel_error " << m.relative_error << " usable " << m.usable << '\n';
}

RunConfig RunConfig::defaults(ProblemKind kind)
{
  RunConfig c;
  c.problem = kind;
  if (kind == ProblemKind::Helmholtz)
  {
    c.p = 2;
    c.L0 = 7;
    c.L_ref = 24;
    c.reference_period = 4;
    c.energy_identity = false;
  }
  return c;
}

void RunConfig::validate() const
{
  adaptive().validate();
  if (energy_identity && problem != ProblemKind::ReactionDiffusion)
    throw Error("config: energy_identity applies to reaction-diffusion only");
  if (problem == ProblemKind::Helmholtz)
  {
    if (!(k > M_PI))
      throw Error("config: k must exceed pi");
    if (gamma.real() < 1.0 || gamma.imag() < 1.0)
      throw Error("config: gamma needs real and imaginary parts >= 1");
  }
  if (out.empty())
    throw Error("config: empty output directory");
}

AdaptiveConfig RunConfig::adaptive() const
{
  AdaptiveConfig a;
  a.theta = theta;
  a.max_iter = max_iter;
  a.p = p;
  a.L0 = L0;
  a.L_ref = L_ref;
  a.reference_period = reference_period;
  a.energy_identity = energy_identity;
  a.residual_samples = residual_samples;
  a.seed = seed;
  return a;
}

Problem RunConfig::make_problem() const
{
  if (problem == ProblemKind::Helmholtz)
    return Problem::helmholtz(k, gamma, guided_mode_source(k));
  return Problem::reaction_diffusion(DomainSpec::full_plane(), [](Point) { return 1.0; },
                                     indicator_source({-1.0, 1.0, -1.0, 1.0}));
}

double parse_wavenumber(const std::string& s)
{
  std::size_t used = 0;
  double v = 0.0;
  try
  {
    v = std::stod(s, &used);
  }
  catch (const std::exception&)
  {
    throw Error("invalid wavenumber '" + s + "'");
  }
  const std::string rest = s.substr(used);
  if (rest == "*2pi")
    return v * 2.0 * M_PI;
  if (!rest.empty())
    throw Error("invalid wavenumber '" + s + "'");
  return v;
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& value)
{
  auto as_int = [&] { return std::stoi(value); };
  auto as_bool = [&]
  {
    if (value == "1" || value == "true")
      return true;
    if (value == "0" || value == "false")
      return false;
    throw Error("config: '" + key + "' expects a boolean");
  };
  try
  {
    if (key == "problem")
    {
      if (value == "rd")
        c.problem = ProblemKind::ReactionDiffusion;
      else if (value == "helmholtz")
        c.problem = ProblemKind::Helmholtz;
      else
        throw Error("config: unknown problem '" + value + "'");
    }
    else if (key == "p")
      c.p = as_int();
    else if (key == "theta")
      c.theta = std::stod(value);
    else if (key == "max_iter")
      c.max_iter = as_int();
    else if (key == "L0")
      c.L0 = as_int();
    else if (key == "L_ref")
      c.L_ref = as_int();
    else if (key == "k")
      c.k = parse_wavenumber(value);
    else if (key == "gamma_re")
      c.gamma.real(std::stod(value));
    else if (key == "gamma_im")
      c.gamma.imag(std::stod(value));
    else if (key == "out")
      c.out = value;
    else if (key == "seed")
      c.seed = std::stoull(value);
    else if (key == "svg")
      c.svg = as_bool();
    else if (key == "reference_period")
      c.reference_period = as_int();
    else if (key == "energy_identity")
      c.energy_identity = as_bool();
    else if (key == "residual_samples")
      c.residual_samples = as_int();
    else
      throw Error("config: unknown key '" + key + "'");
  }
  catch (const std::logic_error&)
  {
    throw Error("config: bad value '" + value + "' for '" + key + "'");
  }
}

void apply_config(RunConfig& c, std::istream& is)
{
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s)
  {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(is, line))
  {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error("config line " + std::to_string(lineno) + ": expected key=value");
    apply_setting(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

std::string format_config(const RunConfig& c)
{
  std::ostringstream s;
  s << std::setprecision(17);
  s << "problem=" << (c.problem == ProblemKind::Helmholtz ? "helmholtz" : "rd") << '\n'
    << "p=" << c.p << '\n'
    << "theta=" << c.theta << '\n'
    << "max_iter=" << c.max_iter << '\n'
    << "L0=" << c.L0 << '\n'
    << "L_ref=" << c.L_ref << '\n';
  if (c.problem == ProblemKind::Helmholtz)
    s << "k=" << c.k << '\n' << "gamma_re=" << c.gamma.real() << '\n'
      << "gamma_im=" << c.gamma.imag() << '\n';
  s << "out=" << c.out.string() << '\n'
    << "seed=" << c.seed << '\n'
    << "svg=" << (c.svg ? 1 : 0) << '\n'
    << "reference_period=" << c.reference_period << '\n'
    << "energy_identity=" << (c.energy_identity ? 1 : 0) << '\n'
    << "residual_samples=" << c.residual_samples << '\n';
  return s.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content)
{
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f)
      throw Error("cannot write " + tmp.string());
    f << content;
    if (!f)
      throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::vector<double> decay_stations(const DomainSpec& domain, int L_ref, double spacing)
{
  std::vector<double> s;
  for (double x = domain.layer_start(); x <= L_ref - 1.0 + 1e-12; x += spacing)
    s.push_back(x);
  return s;
}

ModeBasis layer_modes(const Problem& problem, int modes)
{
  return modal_wavenumbers(problem.wavenumber(),
                           cutoff_frequencies(problem.domain().cylinders()[0].width(), modes),
                           problem.gamma());
}

std::vector<DecayReport> decay_reports(const Problem& problem, const ScalarField& reference,
                                       int L_ref, int modes)
{
  const DomainSpec& dom = problem.domain();
  const std::vector<double> stations = decay_stations(dom, L_ref);
  const ModeBasis basis = layer_modes(problem, modes);
  std::vector<DecayReport> out;
  for (const Cylinder& c : dom.cylinders())
    out.push_back(check_pml_decay(reference, c, basis, stations));
  return out;
}

namespace
{

template <class F>
std::string render(F&& f)
{
  std::ostringstream s;
  f(s);
  return s.str();
}

}  // namespace

RunHistory run_experiment(const RunConfig& c)
{
  c.validate();
  const Problem problem = c.make_problem();
  std::filesystem::create_directories(c.out);
  write_file_atomic(c.out / "config.txt", format_config(c));

  IterationObserver observer;
  if (c.svg)
  {
    std::filesystem::create_directories(c.out / "meshes");
    observer = [&](const IterationRecord& r, const Mesh& mesh)
    {
      std::ostringstream name;
      name << "mesh_" << std::setw(3) << std::setfill('0') << r.iter << ".svg";
      write_file_atomic(c.out / "meshes" / name.str(), mesh_svg(dump_of(mesh)));
    };
  }
  RunHistory h = run_adaptive_loop(problem, c.adaptive(), observer);

  RunSummary summary = summarize(h);
  const Equilibration eq = equilibrate(problem, h.final_solution);
  write_file_atomic(c.out / "history.csv", render([&](auto& s) { write_history_csv(s, h); }));
  write_file_atomic(c.out / "convergence.svg", convergence_svg(h));
  const MeshDump mesh = dump_of(*h.final_mesh);
  write_file_atomic(c.out / "mesh_final.txt", render([&](auto& s) { write_mesh(s, mesh); }));
  write_file_atomic(c.out / "mesh_final.svg", mesh_svg(mesh));
  write_file_atomic(c.out / "solution.txt",
                    render([&](auto& s) { write_field(s, h.final_solution); }));
  write_file_atomic(c.out / "flux.txt", render([&](auto& s) { write_flux(s, eq.flux); }));
  write_file_atomic(c.out / "trace.csv",
                    render([&](auto& s) { write_trace_csv(s, eq.flux); }));
  if (problem.kind() == ProblemKind::Helmholtz)
  {
    const std::vector<DecayReport> decay = decay_reports(problem, h.final_reference, c.L_ref);
    summary.decay = decay;
    write_file_atomic(c.out / "modes.csv",
                      render([&](auto& s) { write_mode_table_csv(s, layer_modes(problem)); }));
    write_file_atomic(c.out / "modal.csv",
                      render([&](auto& s) { write_modal_csv(s, decay); }));
  }
  write_file_atomic(c.out / "summary.txt",
                    render([&](auto& s) { write_summary(s, h, summary); }));
  return h;
}

}  // namespace frontier
