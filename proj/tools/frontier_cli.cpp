#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>

#include "frontier/reporting.hpp"
#include "frontier/suites.hpp"

using namespace frontier;

namespace
{

struct Override
{
  const char* key;
  std::string value;
  CLI::Option* option = nullptr;
};

// Flags that map one-to-one onto config keys.
std::vector<Override> run_overrides(bool helmholtz)
{
  std::vector<Override> o{{"p", ""},
                          {"theta", ""},
                          {"max_iter", ""},
                          {"L0", ""},
                          {"L_ref", ""},
                          {"out", ""},
                          {"seed", ""},
                          {"reference_period", ""},
                          {"residual_samples", ""},
                          {"energy_identity", ""}};
  if (helmholtz)
  {
    o.push_back({"k", ""});
    o.push_back({"gamma_re", ""});
    o.push_back({"gamma_im", ""});
  }
  return o;
}

void bind(CLI::App* app, std::vector<Override>& o)
{
  const std::map<std::string, std::pair<std::string, std::string>> flags{
      {"p", {"--p", "polynomial degree"}},
      {"theta", {"--theta", "marking fraction in (0,1)"}},
      {"max_iter", {"--max-iter", "number of refinement steps"}},
      {"L0", {"--L0", "initial truncation"}},
      {"L_ref", {"--L-ref", "reference truncation"}},
      {"out", {"--out", "output directory"}},
      {"seed", {"--seed", "seed of the random test functions"}},
      {"reference_period", {"--reference-period", "reference solve every n steps, 0 = last only"}},
      {"residual_samples", {"--residual-samples", "random test functions per step"}},
      {"energy_identity", {"--energy-identity", "errors from one final reference (0/1)"}},
      {"k", {"--k", "wavenumber, number or <a>*2pi"}},
      {"gamma_re", {"--gamma-re", "real part of the layer damping"}},
      {"gamma_im", {"--gamma-im", "imaginary part of the layer damping"}}};
  for (Override& x : o)
  {
    const auto& [flag, help] = flags.at(x.key);
    x.option = app->add_option(flag, x.value, help);
  }
}

int run(ProblemKind kind, const std::string& config_file, const std::vector<Override>& o,
        bool svg)
{
  RunConfig c = RunConfig::defaults(kind);
  if (!config_file.empty())
  {
    std::ifstream f(config_file);
    if (!f)
      throw Error("cannot open " + config_file);
    apply_config(c, f);
    c.problem = kind;
  }
  for (const Override& x : o)
    if (x.option->count() > 0)
      apply_setting(c, x.key, x.value);
  if (svg)
    c.svg = true;
  c.validate();

  const RunHistory h = run_experiment(c);
  const RunSummary s = summarize(h);
  std::cout << "iterations " << h.records.size() << ", final N_dofs "
            << h.records.back().n_dofs << ", eta " << h.records.back().eta << ", error "
            << h.records.back().error_global << ", slope " << s.slope << "\n"
            << "artifacts in " << c.out.string() << "\n";
  return 0;
}

void print_row(const SuiteReport& r)
{
  std::cout << std::left << std::setw(34) << r.name << std::right << std::setw(8) << r.samples
            << std::setw(14) << std::setprecision(6) << r.worst_ratio << "  "
            << (r.pass() ? "pass" : "FAIL") << '\n';
  if (!r.extra_name.empty())
    std::cout << "  " << r.extra_name << " (reported): " << r.extra << '\n';
}

int verify(std::uint64_t seed, bool inject)
{
  std::cout << std::left << std::setw(34) << "check" << std::right << std::setw(8) << "samples"
            << std::setw(14) << "worst ratio" << "  result\n";
  std::vector<SuiteReport> reports{trace_suite(seed), poincare_cylinder_suite(seed),
                                   cylinder_trace_suite(seed),
                                   equilibration_suite({.inject_fault = inject})};
  bool ok = true;
  for (const SuiteReport& r : reports)
  {
    print_row(r);
    ok = ok && r.pass();
  }
  std::cout << "seed " << seed << '\n';
  return ok ? 0 : 1;
}

int render(const std::string& dump, std::string out)
{
  std::ifstream f(dump);
  if (!f)
    throw Error("cannot open " + dump);
  const MeshDump d = read_mesh(f);
  if (out.empty())
  {
    out = dump;
    const auto dot = out.rfind('.');
    out = (dot == std::string::npos ? out : out.substr(0, dot)) + ".svg";
  }
  write_file_atomic(out, mesh_svg(d));
  std::cout << out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"adaptive finite elements on truncated unbounded domains"};
  app.require_subcommand(1);

  std::string rd_config, hz_config;
  bool rd_svg = false, hz_svg = false;
  CLI::App* rd = app.add_subcommand("run-rd", "reaction-diffusion experiment");
  auto rd_flags = run_overrides(false);
  bind(rd, rd_flags);
  rd->add_option("--config", rd_config, "key=value file applied before the flags");
  rd->add_flag("--svg", rd_svg, "write an SVG of every mesh");

  CLI::App* hz = app.add_subcommand("run-helmholtz", "waveguide experiment");
  auto hz_flags = run_overrides(true);
  bind(hz, hz_flags);
  hz->add_option("--config", hz_config, "key=value file applied before the flags");
  hz->add_flag("--svg", hz_svg, "write an SVG of every mesh");

  std::uint64_t seed = 20240601;
  bool inject = false;
  CLI::App* ver = app.add_subcommand("verify", "randomized inequality and equilibration checks");
  ver->add_option("--seed", seed, "suite seed");
  ver->add_flag("--inject-fault", inject, "corrupt one flux coefficient");

  std::string dump, svg_out;
  CLI::App* rm = app.add_subcommand("render-mesh", "SVG from a mesh dump");
  rm->add_option("dump", dump, "mesh v1 file")->required();
  rm->add_option("--out", svg_out, "output SVG (default: dump with .svg)");

  CLI11_PARSE(app, argc, argv);
  try
  {
    if (*rd)
      return run(ProblemKind::ReactionDiffusion, rd_config, rd_flags, rd_svg);
    if (*hz)
      return run(ProblemKind::Helmholtz, hz_config, hz_flags, hz_svg);
    if (*ver)
      return verify(seed, inject);
    return render(dump, svg_out);
  }
  catch (const Error& e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
