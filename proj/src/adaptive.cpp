#include "frontier/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

namespace frontier
{

void AdaptiveConfig::validate() const
{
  if (!(theta > 0.0 && theta < 1.0))
    throw Error("AdaptiveConfig: theta must lie in (0, 1)");
  if (max_iter < 0)
    throw Error("AdaptiveConfig: max_iter must be non-negative");
  if (p < 1)
    throw Error("AdaptiveConfig: p must be at least 1");
  if (L0 < 1)
    throw Error("AdaptiveConfig: L0 must be at least 1");
  if (L_ref <= L0)
    throw Error("AdaptiveConfig: L_ref must exceed L0");
  if (reference_period < 0)
    throw Error("AdaptiveConfig: reference_period must be non-negative");
  if (enriched_rings < 1)
    throw Error("AdaptiveConfig: enriched_rings must be positive");
  if (residual_samples < 0)
    throw Error("AdaptiveConfig: residual_samples must be non-negative");
}

std::vector<Index> dorfler_mark(const std::vector<double>& eta, double theta)
{
  std::vector<Index> order(eta.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return eta[a] * eta[a] > eta[b] * eta[b]; });
  double total = 0.0;
  for (double e : eta)
    total += e * e;
  std::vector<Index> marked;
  if (total == 0.0)
    return marked;
  const double target = theta * total;
  double sum = 0.0;
  for (Index K : order)
  {
    if (eta[K] == 0.0)
      break;
    marked.push_back(K);
    sum += eta[K] * eta[K];
    if (sum >= target)
      break;
  }
  return marked;
}

RefineResult refine_or_extend(const Mesh& mesh, const std::vector<Index>& marked,
                              const DomainSpec& domain)
{
  RefineResult r;
  std::vector<Index> interior;
  for (Index K : marked)
  {
    if (mesh.touches_artificial(K))
      ++r.boundary_marked;
    else
      interior.push_back(K);
  }
  r.interior_marked = static_cast<Index>(interior.size());
  if (!interior.empty())
  {
    RefinementStats stats;
    r.mesh = refine_nvb(mesh, interior, &stats);
    for (Index K : stats.closure_elements)
      if (mesh.touches_artificial(K))
        ++r.boundary_bisections;
  }
  else
    r.mesh = mesh;
  if (r.boundary_marked > 0)
  {
    r.mesh = extend_truncation(r.mesh, domain, 1);
    r.boundary_pushed = true;
  }
  return r;
}

namespace
{

Point to_reference(const Mesh& mesh, Index K, Point x)
{
  const Point x0 = mesh.corner(K, 0);
  const Vec2 xh = mesh.jacobian(K).inverse() * Vec2(x.x - x0.x, x.y - x0.y);
  return {xh.x(), xh.y()};
}

bool contains(const Mesh& mesh, Index K, Point x)
{
  const Point xh = to_reference(mesh, K, x);
  const double tol = 1e-12;
  return xh.x >= -tol && xh.y >= -tol && xh.x + xh.y <= 1.0 + tol;
}

}  // namespace

std::vector<Index> locate_in_coarse(const Mesh& coarse, const Mesh& fine)
{
  // every element lies inside one unit grid square
  std::map<std::pair<long, long>, std::vector<Index>> cells;
  for (Index K = 0; K < coarse.num_elements(); ++K)
  {
    const Point c = coarse.centroid(K);
    cells[{std::lround(std::floor(c.x)), std::lround(std::floor(c.y))}].push_back(K);
  }
  std::vector<Index> out(fine.num_elements(), -1);
  for (Index K = 0; K < fine.num_elements(); ++K)
  {
    const Point c = fine.centroid(K);
    const auto it = cells.find({std::lround(std::floor(c.x)), std::lround(std::floor(c.y))});
    if (it == cells.end())
      continue;
    for (Index C : it->second)
      if (contains(coarse, C, c))
      {
        out[K] = C;
        break;
      }
  }
  return out;
}

ScalarField lift(const ScalarField& u_h, std::shared_ptr<const LagrangeSpace> target)
{
  const Mesh& fine = target->mesh();
  const std::vector<Index> owner = locate_in_coarse(u_h.mesh(), fine);
  Eigen::VectorXcd values = Eigen::VectorXcd::Zero(target->num_free());
  std::vector<char> done(target->num_free(), 0);
  for (Index K = 0; K < fine.num_elements(); ++K)
  {
    const Index C = owner[K];
    if (C < 0)
      continue;
    for (Index d : target->element_dofs(K))
    {
      const Index i = target->free_index(d);
      if (i < 0 || done[i])
        continue;
      values[i] = u_h.evaluate(C, to_reference(u_h.mesh(), C, target->dof_position(d)));
      done[i] = 1;
    }
  }
  return ScalarField(std::move(target), u_h.kind(), std::move(values));
}

ReferenceError reference_error(const Problem& problem, const ScalarField& u_h,
                               int L_ref, int degree)
{
  const Mesh& mesh = u_h.mesh();
  if (L_ref < mesh.truncation())
    throw Error("reference_error: reference truncation below the current one");
  auto ref_mesh = std::make_shared<Mesh>(
      L_ref > mesh.truncation()
          ? extend_truncation(mesh, problem.domain(), L_ref - mesh.truncation())
          : mesh);
  auto space = std::make_shared<LagrangeSpace>(ref_mesh, degree);
  ReferenceError r;
  r.reference = solve_problem(problem, space);
  const ScalarField lifted = lift(u_h, space);
  r.difference = ScalarField(space, u_h.kind(),
                             r.reference.free_values() - lifted.free_values());

  const std::vector<Index> owner = locate_in_coarse(mesh, *ref_mesh);
  r.element.assign(mesh.num_elements(), 0.0);
  const LagrangeElement& el = space->element();
  double global = 0.0, omega0 = 0.0;
  for (Index K = 0; K < ref_mesh->num_elements(); ++K)
  {
    const Eigen::VectorXcd c = r.difference.element_coefficients(K);
    const ElementCoefficients coef = problem.coefficients(*ref_mesh, K);
    const Eigen::MatrixXd A = element_energy_matrix(coef, el, ref_mesh->jacobian(K));
    const double e2 = std::max(c.real().dot(A * c.real()) + c.imag().dot(A * c.imag()), 0.0);
    global += e2;
    if (coef.region < 0)
      omega0 += e2;
    if (owner[K] >= 0)
      r.element[owner[K]] += e2;
  }
  for (double& e : r.element)
    e = std::sqrt(e);
  r.global = std::sqrt(global);
  r.omega0 = problem.kind() == ProblemKind::Helmholtz ? std::sqrt(omega0) : 0.0;
  return r;
}

namespace
{

ScalarField random_field(std::shared_ptr<const LagrangeSpace> s, ScalarKind kind,
                         std::mt19937_64& rng)
{
  std::normal_distribution<double> N;
  Eigen::VectorXcd v(s->num_free());
  for (Index i = 0; i < v.size(); ++i)
  {
    const double re = N(rng);
    v[i] = kind == ScalarKind::Real ? Complex(re) : Complex(re, N(rng));
  }
  return ScalarField(std::move(s), kind, std::move(v));
}

}  // namespace

namespace
{

void apply_reference(IterationRecord& rec, const ReferenceError& ref,
                     const EstimatorReport& report, const Mesh& mesh)
{
  rec.has_reference = true;
  rec.error_global = ref.global;
  rec.error_omega0 = ref.omega0;
  rec.efficiency_max = 0.0;
  for (Index K = 0; K < mesh.num_elements(); ++K)
    if (!mesh.touches_artificial(K) && ref.element[K] > 0.0)
      rec.efficiency_max = std::max(rec.efficiency_max, report.eta[K] / ref.element[K]);
}

void set_effectivity(IterationRecord& rec)
{
  if (rec.error_global > 0.0)
  {
    rec.effectivity = rec.eta / rec.error_global;
    rec.effectivity_tilde = rec.eta_tilde / rec.error_global;
  }
}

}  // namespace

RunHistory run_adaptive_loop(const Problem& problem, const AdaptiveConfig& config,
                             const IterationObserver& observer)
{
  config.validate();
  if (config.energy_identity && problem.kind() != ProblemKind::ReactionDiffusion)
    throw Error("run_adaptive_loop: the energy identity needs a symmetric coercive form");
  RunHistory h;
  std::vector<double> galerkin;
  h.kind = problem.kind();
  h.config = config;
  auto mesh = std::make_shared<Mesh>(build_initial_mesh(problem.domain(), config.L0));
  Index carried_bisections = 0;  // from the step that produced `mesh`
  for (int it = 0;; ++it)
  {
    IterationRecord rec;
    rec.iter = it;
    rec.boundary_bisections = carried_bisections;
    auto space = std::make_shared<LagrangeSpace>(mesh, config.p);
    rec.n_dofs = space->num_free();
    rec.n_elements = mesh->num_elements();
    rec.L = mesh->truncation();

    ScalarField u_h;
    Equilibration eq;
    EstimatorReport report;
    try
    {
      u_h = solve_problem(problem, space, {.execution = config.execution});
      eq = equilibrate(problem, u_h, config.execution);
      report = estimate(problem, u_h, eq, config.execution);
    }
    catch (const Error& e)
    {
      throw Error("iteration " + std::to_string(it) + ": " + e.what());
    }
    rec.eta = report.total;
    rec.eta_tilde = report.eta_tilde;
    rec.osc_total = report.osc_total;
    rec.misfit_total = report.misfit_total;
    rec.bnd_total = report.bnd_total;
    rec.tail = report.tail;
    rec.energy = energy_norm(u_h, problem);
    if (config.energy_identity)
      galerkin.push_back(galerkin_energy(u_h, problem));
    rec.equilibration_worst = check_equilibration(problem, u_h, eq).worst;
    rec.flux_jump = normal_jump(eq.flux);

    std::mt19937_64 rng(config.seed * 1000003ULL + static_cast<std::uint64_t>(it));
    std::vector<ScalarField> trials;
    if (config.residual_samples > 0)
    {
      auto enriched = std::make_shared<LagrangeSpace>(
          std::make_shared<Mesh>(
              extend_truncation(*mesh, problem.domain(), config.enriched_rings)),
          config.p + 2);
      for (int s = 0; s < config.residual_samples; ++s)
        trials.push_back(random_field(enriched, u_h.kind(), rng));
    }

    const bool last = it == config.max_iter || report.total == 0.0;
    const bool periodic
        = config.reference_period > 0 && it % config.reference_period == 0;
    if (periodic || last)
    {
      ReferenceError ref = reference_error(problem, u_h, config.L_ref, config.p + 2);
      apply_reference(rec, ref, report, *mesh);
      if (ref.global > 0.0)
        trials.push_back(ref.difference);
      if (last)
        h.final_reference = std::move(ref.reference);
    }
    const ResidualBoundResult res = residual_bound_check(problem, u_h, report, trials);
    rec.residual_samples = res.samples;
    rec.residual_violations = res.violations;
    rec.residual_worst = res.worst_ratio;

    if (last)
    {
      h.converged = report.total == 0.0;
      h.records.push_back(rec);
      if (observer)
        observer(rec, *mesh);
      h.final_mesh = mesh;
      h.final_solution = u_h;
      break;
    }

    const std::vector<Index> marked = dorfler_mark(report.eta, config.theta);
    const RefineResult step = refine_or_extend(*mesh, marked, problem.domain());
    rec.marked = static_cast<Index>(marked.size());
    rec.boundary_marked = step.boundary_pushed;
    h.records.push_back(rec);
    if (observer)
      observer(rec, *mesh);
    carried_bisections = step.boundary_bisections;
    mesh = std::make_shared<Mesh>(step.mesh);
  }

  if (config.energy_identity)
  {
    const double top = galerkin_energy(h.final_reference, problem);
    for (std::size_t i = 0; i < h.records.size(); ++i)
    {
      h.records[i].has_reference = true;
      h.records[i].error_global = std::sqrt(std::max(top - galerkin[i], 0.0));
    }
  }
  for (IterationRecord& rec : h.records)
    set_effectivity(rec);
  return h;
}

double convergence_rate_fit(const std::vector<double>& n_dofs,
                            const std::vector<double>& error)
{
  if (n_dofs.size() != error.size())
    throw Error("convergence_rate_fit: size mismatch");
  if (n_dofs.size() < 5)
    throw Error("convergence_rate_fit: at least five points are required");
  const double n = static_cast<double>(n_dofs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n_dofs.size(); ++i)
  {
    mx += std::log(n_dofs[i]) / n;
    my += std::log(error[i]) / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n_dofs.size(); ++i)
  {
    const double dx = std::log(n_dofs[i]) - mx;
    sxy += dx * (std::log(error[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0)
    throw Error("convergence_rate_fit: degenerate abscissae");
  return sxy / sxx;
}

double convergence_rate_fit(const RunHistory& history, int first, int last)
{
  std::vector<double> n, e;
  for (const IterationRecord& r : history.records)
    if (r.iter >= first && r.iter <= last && r.has_reference && r.error_global > 0.0)
    {
      n.push_back(static_cast<double>(r.n_dofs));
      e.push_back(r.error_global);
    }
  return convergence_rate_fit(n, e);
}

}  // namespace frontier
