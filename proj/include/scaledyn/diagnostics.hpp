#pragma once

// Sup-norm residual report of the Kepler ground state over a radial grid.

#include <string>
#include <vector>

#include "scaledyn/kepler.hpp"

namespace scaledyn {

struct ResidualOptions {
  /// E0 used in the residuals is energy_factor * E0_oracle.
  double energy_factor = 1.0;
  /// Time at which time-dependent fields are evaluated.
  double t = 0.5;
};

struct ResidualEntry {
  std::string name;
  double max_abs_residual;
  double tolerance;
  bool passed() const { return max_abs_residual < tolerance; }
};

struct ResidualReport {
  GroundStateKind kind;
  /// Radii at which the checks were evaluated.
  std::vector<double> radii;
  std::vector<ResidualEntry> entries;
  bool passed() const;
};

/// Evaluates every ground-state residual at x = r (0.48, 0.6, 0.64) for each grid radius.
/// The nonlinear state (K != m Lambda) keeps only radii in the inner 80% of its domain.
ResidualReport residual_report(const KeplerSystem& sys, const std::vector<double>& r_grid,
                               const ResidualOptions& options = {});

}  // namespace scaledyn
