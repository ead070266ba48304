#pragma once

// Kepler problem in the fractional scale regime: system constants, linear and
// nonlinear ground states, the extra potential, the virial balance and the
// constant rotation speed.

#include <optional>
#include <vector>

#include "scaledyn/fields.hpp"
#include "scaledyn/hamilton_jacobi.hpp"
#include "scaledyn/scale_regime.hpp"
#include "scaledyn/schrodinger.hpp"

namespace scaledyn {

struct KeplerParameters {
  double G = 1.0;
  double M = 1.0;
  double m = 1.0;
  double Lambda = 1.0;
  /// The psi constant; unset means m * Lambda.
  std::optional<double> K;
  EtaParameter eta = EtaParameter::Value::minus_one;
};

/// Immutable record of the constants and their derived values.
class KeplerSystem {
 public:
  explicit KeplerSystem(const KeplerParameters& params = {});

  double G() const { return G_; }
  double M() const { return M_; }
  double m() const { return m_; }
  double Lambda() const { return Lambda_; }
  double K() const { return K_; }
  EtaParameter eta() const { return eta_; }
  double gm() const { return G_ * M_; }

  /// k = G M m.
  double k() const { return k_; }
  /// r0 = 2 Lambda^2 / (G M).
  double r0() const { return r0_; }
  /// Decay rate of the linear ground state, 2 / r0 = G M / Lambda^2.
  double beta() const { return 2.0 / r0_; }
  /// Exponent m Lambda / K relating the nonlinear state to a linear solution.
  double q() const { return m_ * Lambda_ / K_; }
  /// k^2 / (2 m^2 Lambda^2), as printed.
  double e0_paper() const { return e0_paper_; }
  /// Root of the radial residual for the linear ground state.
  double e0_oracle() const { return e0_oracle_; }

  /// Uniform diagonal constant with lambda+ = lambda- = Lambda, -i Lambda for eta = -1.
  Complex lambda() const { return diagonal_lambda(Lambda_, Lambda_, eta_); }
  EtaDecomposition lambda_split() const { return EtaDecomposition::from_complex(lambda(), eta_); }
  /// True when K == m Lambda, where the nonlinear Schrodinger term vanishes.
  bool linear_schrodinger() const { return K_ == m_ * Lambda_; }
  RadialParameters radial_parameters() const;

 private:
  double G_, M_, m_, Lambda_, K_;
  EtaParameter eta_;
  double k_, r0_, e0_paper_, e0_oracle_;
};

/// U = -k / r.
double kepler_potential(const KeplerSystem& sys, double r);
/// U(|x|) in R^3 with analytic gradient and Hessian.
ScalarField kepler_potential_field(const KeplerSystem& sys);

struct GroundStateEnergy {
  double paper;
  double oracle;
};
GroundStateEnergy ground_state_energy(const KeplerSystem& sys);

enum class GroundStateKind { linear, nonlinear };

/// Which exponential-integral argument the nonlinear state uses: `solving`
/// (4r/r0, a solution of the radial equation) or `as_printed` (2r/r0).
enum class EiArgumentForm { solving, as_printed };

struct GroundState {
  GroundStateKind kind;
  double c1;
  double c2;
  /// sqrt(P)(r) with analytic first and second derivatives.
  Field1D sqrt_p;
  /// Validity interval (r_lower, r_upper); infinite upper bound for the linear state.
  double r_lower;
  double r_upper;

  bool contains(double r) const { return r > r_lower && r < r_upper; }
  /// sqrt(P) as a radial field on R^3.
  ScalarField field() const { return ScalarField::radial(3, sqrt_p); }
  /// P = sqrt(P)^2 as a radial field on R^3.
  ScalarField density() const;
};

/// Default integration constant C1 = m Lambda^2 (unit linear amplitude with C2 = 0).
double default_c1(const KeplerSystem& sys);

/// ((C1 + C2) / (m Lambda^2)) e^{-2r/r0}. Requires C1 + C2 > 0.
GroundState sqrtP_linear(const KeplerSystem& sys, std::optional<double> c1 = {}, double c2 = 0.0);

/// C1 [e^{-beta r} L(r) / r]^{m Lambda / K} with
/// L(r) = Lambda^2 e^{s r} - 2 G M r Ei(s r) - C2 Lambda^2 r, s = 2 beta (solving) or beta (as printed).
/// The validity domain is (0, r*) with r* the first zero of L. Requires C1 > 0.
GroundState sqrtP_nonlinear(const KeplerSystem& sys, std::optional<double> c1 = {}, double c2 = 0.0,
                            EiArgumentForm form = EiArgumentForm::solving);

/// L(r) of the nonlinear state.
double nonlinear_log_argument(const KeplerSystem& sys, double c2, EiArgumentForm form, double r);

/// The linear state when K == m Lambda, the nonlinear one otherwise.
GroundState default_ground_state(const KeplerSystem& sys);

/// -(G M m / r0)(1 - r0 / r).
double u_add_closed(const KeplerSystem& sys, double r);

/// -(m Lambda^2/2) Lap sqrtP / sqrtP when K == m Lambda, otherwise
/// -(K^2/2m) Lap sqrtP / sqrtP + (K/2)(K/m - Lambda) Lap ln sqrtP.
double u_add_from_density(const KeplerSystem& sys, const Field1D& sqrt_p, double r,
                          const DiffEngine& engine = DiffEngine{});

/// 2 kinetic + lambda m div V - gamma U.
Complex virial_equilibrium_residual(Complex kinetic, double U, Complex divV, Complex lambda, double m, double gamma);

/// sqrt(G M / r0).
double orbital_speed(const KeplerSystem& sys);

struct SpeedSquared {
  double potential;  ///< -U/m = G M / r
  double extra;      ///< -U_add/m = (G M / r0)(1 - r0 / r)
  double total;
};
SpeedSquared speed_squared_decomposition(const KeplerSystem& sys, double r);

struct RotationRow {
  double r;
  double v_scale;
  double v_kepler;
  SpeedSquared vsq;
};
/// One row per grid point; the grid must be positive and non-decreasing.
std::vector<RotationRow> rotation_curve(const KeplerSystem& sys, const std::vector<double>& r_grid);

struct VirialRow {
  double r;
  double two_k_real;          ///< m v^2 with v the orbital speed
  double gamma_u;             ///< gamma U, gamma = -1
  double lambda_m_divv_real;  ///< scale term, the extra potential from the density
  double residual;            ///< two_k_real + lambda_m_divv_real - gamma_u
};
/// Real-part virial balance of the ground state on a grid inside its domain.
std::vector<VirialRow> virial_balance(const KeplerSystem& sys, const GroundState& state,
                                      const std::vector<double>& r_grid, const DiffEngine& engine = DiffEngine{});

/// S = -E t with E = -E0 (E0_oracle unless given), R = -eta K ln sqrtP.
ActionField ground_state_action(const KeplerSystem& sys, const GroundState& state, std::optional<double> e0 = {});
/// psi = e^{-iEt/K} sqrtP(r).
WaveField ground_state_psi(const KeplerSystem& sys, const GroundState& state, std::optional<double> e0 = {});

}  // namespace scaledyn
