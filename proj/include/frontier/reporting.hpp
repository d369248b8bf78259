#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "frontier/adaptive.hpp"

namespace frontier
{

// Plain-text mesh dump, enough to render without rebuilding topology.
struct MeshDump
{
  struct Triangle
  {
    std::array<Index, 3> v;
    int refinement_edge = 0;
    int generation = 0;
  };
  struct BoundaryFace
  {
    Index a, b;
    FaceTag tag;
  };
  int truncation = 0;
  std::vector<Point> vertices;
  std::vector<Triangle> triangles;
  std::vector<BoundaryFace> boundary;
};

MeshDump dump_of(const Mesh& mesh);
void write_mesh(std::ostream& os, const MeshDump& dump);
MeshDump read_mesh(std::istream& is);

struct SvgStyle
{
  double width = 800.0;
  double element_stroke = 0.4;
  double boundary_stroke = 1.6;
};
// One polygon per element; physical and artificial boundary faces stroked
// in different colours.
std::string mesh_svg(const MeshDump& dump, const SvgStyle& style = {});

void write_field(std::ostream& os, const ScalarField& field);
void write_flux(std::ostream& os, const EquilibratedFlux& flux);
void write_trace_csv(std::ostream& os, const EquilibratedFlux& flux);

void write_history_csv(std::ostream& os, const RunHistory& history);
void write_mode_table_csv(std::ostream& os, const ModeBasis& modes);
// One row per (cylinder, mode, station) of the decay reports.
void write_modal_csv(std::ostream& os, const std::vector<DecayReport>& reports);

// Log-log plot of error, eta and eta_tilde against N_dofs.
std::string convergence_svg(const RunHistory& history);

struct RunSummary
{
  double slope = NAN;  // over the last min(32, n) reference points
  int slope_points = 0;
  double effectivity_min = NAN;
  double effectivity_max = NAN;
  int effectivity_from = 0;
  int boundary_pushes = 0;
  Index boundary_bisections = 0;
  Index residual_samples = 0;
  Index residual_violations = 0;
  double equilibration_worst = 0.0;
  std::vector<DecayReport> decay;  // Helmholtz, per cylinder
};
RunSummary summarize(const RunHistory& history, int effectivity_from = 12);
void write_summary(std::ostream& os, const RunHistory& history, const RunSummary& s);

struct RunConfig
{
  ProblemKind problem = ProblemKind::ReactionDiffusion;
  int p = 1;
  double theta = 0.2;
  int max_iter = 64;
  int L0 = 1;
  int L_ref = 48;
  double k = 0.7 * 2.0 * M_PI;
  Complex gamma{1.0, 1.0};
  std::filesystem::path out = "out";
  std::uint64_t seed = 1;
  bool svg = false;
  int reference_period = 0;
  bool energy_identity = true;
  int residual_samples = 1;

  static RunConfig defaults(ProblemKind kind);
  void validate() const;
  AdaptiveConfig adaptive() const;
  Problem make_problem() const;
};

// key=value lines; '#' starts a comment. Unknown keys throw.
void apply_config(RunConfig& c, std::istream& is);
void apply_setting(RunConfig& c, const std::string& key, const std::string& value);
std::string format_config(const RunConfig& c);
// Accepts plain numbers and the form "<a>*2pi".
double parse_wavenumber(const std::string& s);

// Writes through a temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

// Runs the loop and writes every artifact into c.out.
RunHistory run_experiment(const RunConfig& c);

// Stations (along-coordinates) inside the absorbing layer of a reference
// mesh with truncation L_ref.
std::vector<double> decay_stations(const DomainSpec& domain, int L_ref, double spacing = 0.5);
ModeBasis layer_modes(const Problem& problem, int modes = 12);
std::vector<DecayReport> decay_reports(const Problem& problem, const ScalarField& reference,
                                       int L_ref, int modes = 12);

}  // namespace frontier
