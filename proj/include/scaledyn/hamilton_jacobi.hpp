#pragma once

// Pointwise residuals of the asymptotic fractional Hamilton-Jacobi equation:
// general order, the real/eta-imaginary split, and the classical reduction.

#include "scaledyn/fields.hpp"
#include "scaledyn/scale_regime.hpp"

namespace scaledyn {

/// Complex action A = S + i eta R built from two real-valued fields.
class ActionField {
 public:
  ActionField(ScalarField S, ScalarField R, EtaParameter eta);

  const ScalarField& S() const { return S_; }
  const ScalarField& R() const { return R_; }
  const ScalarField& A() const { return A_; }
  EtaParameter eta() const { return eta_; }
  int dimension() const { return A_.dimension(); }

  Complex operator()(double t, std::span<const double> x) const { return A_(t, x); }

 private:
  ScalarField S_;
  ScalarField R_;
  EtaParameter eta_;
  ScalarField A_;
};

/// dA/dt + (grad A)^2/2m + sum lambda_{k..}/j! d^j A + U.
Complex hj_residual_general(const ActionField& action, const ScalarField& U, const LambdaTensor& lambda, double m,
                            double t, std::span<const double> x, const DiffEngine& engine = DiffEngine{});
/// Same with the product-form coefficients of `regime`.
Complex hj_residual_general(const ActionField& action, const ScalarField& U, const ScaleRegime& regime, double m,
                            double t, std::span<const double> x, const DiffEngine& engine = DiffEngine{});

/// dS/dt + (grad S)^2/2m + U.
double classical_hj_residual(const ScalarField& S, const ScalarField& U, double m, double t,
                             std::span<const double> x, const DiffEngine& engine = DiffEngine{});

struct SplitResiduals {
  /// dS/dt + ((grad S)^2 - eta^2 (grad R)^2)/2m + sum 1/j! d^j(l_re S - eta^2 l_im R) + U
  double real_part;
  /// dR/dt + grad S . grad R / m + sum 1/j! d^j(l_im S + l_re R)
  double imag_part;
};

/// Split of the uniform-diagonal equation lambda = l_re + i eta l_im, so that
/// real_part + i eta imag_part equals hj_residual_general with the same lambda.
/// Throws Unsupported for eta = +-i.
SplitResiduals hj_split_residuals(const ScalarField& S, const ScalarField& R, const ScalarField& U,
                                  const EtaDecomposition& lambda, int j_alpha, double m, double t,
                                  std::span<const double> x, const DiffEngine& engine = DiffEngine{});

struct HamiltonianPair {
  ScalarField H_S;
  ScalarField H_R;
};

/// (H_S, H_R) = -d/dt (S, R).
HamiltonianPair hamiltonian_pair(const ScalarField& S, const ScalarField& R, const DiffEngine& engine = DiffEngine{});

struct ActionVelocities {
  VectorField v;
  VectorField u;
};

/// v = grad S / m, u = grad R / m, so that V = v + i eta u = grad A / m.
ActionVelocities velocities_from_action(const ActionField& action, double m);

}  // namespace scaledyn
