#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "frontier/oracles.hpp"

namespace frontier
{

// Randomized runs of the inequality oracles.
struct SuiteReport
{
  std::string name;
  std::uint64_t seed = 0;
  int samples = 0;
  int failures = 0;
  double worst_ratio = 0.0;
  // reported, never asserted
  double extra = NAN;
  std::string extra_name;
  bool pass() const { return failures == 0; }
};

// Polynomials of degree 0..4 on elements of a randomly NVB-refined mesh,
// three reaction scales each.
SuiteReport trace_suite(std::uint64_t seed, int polynomials = 200, int elements = 20);
// Trigonometric-plus-linear profiles along random cylinders.
SuiteReport poincare_cylinder_suite(std::uint64_t seed, int samples = 300);
// Profiles vanishing at the far end of random truncated cylinders.
SuiteReport cylinder_trace_suite(std::uint64_t seed, int samples = 300);

struct EquilibrationSuiteOptions
{
  bool inject_fault = false;
  Index fault_element = 5;
  double fault_size = 1e-3;
};
// Equilibration residual moments of a small reaction-diffusion and
// Helmholtz solve; one sample per element.
SuiteReport equilibration_suite(const EquilibrationSuiteOptions& options = {});

}  // namespace frontier
