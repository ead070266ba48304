#pragma once

// The psi change of variable, the (non)linear Schrodinger residuals, the
// density form of the Hamilton-Jacobi system, the separated ground-state ODEs
// and the logarithmic identity behind the density form.

#include <functional>

#include "scaledyn/exp_integral.hpp"
#include "scaledyn/fields.hpp"
#include "scaledyn/scale_regime.hpp"

namespace scaledyn {

/// psi = exp((-eta R + i S)/K) = sqrt(P) e^{iS/K} with sqrt(P) = e^{-eta R/K}.
class WaveField {
 public:
  WaveField(ScalarField psi, double K, EtaParameter eta);

  const ScalarField& psi() const { return psi_; }
  double K() const { return K_; }
  EtaParameter eta() const { return eta_; }
  Complex operator()(double t, std::span<const double> x) const { return psi_(t, x); }

 private:
  ScalarField psi_;
  double K_;
  EtaParameter eta_;
};

/// Requires K != 0 and eta = +-1.
WaveField psi_from_action(const ScalarField& S, const ScalarField& R, double K, EtaParameter eta);

struct ActionValues {
  double S;
  double R;
};

/// Inverse of psi_from_action at a point, S on the principal branch K * arg(psi).
ActionValues action_from_psi(Complex psi, double K, EtaParameter eta);
ActionValues action_from_psi(const WaveField& wave, double t, std::span<const double> x);

/// i K dpsi/dt + (i K lambda / 2) Lap psi + ((grad psi)^2 / psi)(K/m - i lambda)(K/2) - U psi,
/// (grad psi)^2 being the bilinear sum of squared components.
Complex nls_residual(const ScalarField& psi, const ScalarField& U, double m, double K, Complex lambda, double t,
                     std::span<const double> x, const DiffEngine& engine = DiffEngine{});

/// (K/m - Lambda) K/2 written as (K - m Lambda) K / (2m), exactly zero when K == m * Lambda.
double nonlinear_coefficient(double m, double K, double Lambda);

/// The eta = -1 specialisation (lambda = -i Lambda):
/// i K dpsi/dt + (K Lambda/2) Lap psi + ((grad psi)^2/psi)(K/m - Lambda)(K/2) - U psi.
Complex nls_residual_eta_minus1(const ScalarField& psi, const ScalarField& U, double m, double K, double Lambda,
                                double t, std::span<const double> x, const DiffEngine& engine = DiffEngine{});

/// i m Lambda dpsi/dt + (m Lambda^2/2) Lap psi - U psi.
Complex linear_schrodinger_residual(const ScalarField& psi, const ScalarField& U, double m, double Lambda, double t,
                                    std::span<const double> x, const DiffEngine& engine = DiffEngine{});

struct DensityResiduals {
  /// dS/dt + (grad S)^2/2m + (l_re/2) Lap S - (K^2/2m) Lap sqrtP / sqrtP
  ///   + (K/2)(K/m + eta l_im) Lap ln sqrtP + U
  double energy;
  /// dP/dt + div(P grad S / m) - P (Lap S / m)(1 + eta m l_im / K) + (K l_re / 2) Lap ln sqrtP
  double continuity;
};

/// Density (S, P) form of the order-2 equation. P must be positive.
DensityResiduals hj3_split_residuals(const ScalarField& S, const ScalarField& P, const ScalarField& U, double m,
                                     double K, const EtaDecomposition& lambda, double t, std::span<const double> x,
                                     const DiffEngine& engine = DiffEngine{});

/// Lap Psi + ((grad Psi)^2/Psi)(K/(m Lambda) - 1) + (2/(K Lambda))(E - U) Psi for psi = e^{-iEt/K} Psi.
Complex stationary_residual(const ScalarField& Psi, double E, const ScalarField& U, double m, double K, double Lambda,
                            std::span<const double> x, const DiffEngine& engine = DiffEngine{});

/// Parameters entering the separated radial equation.
struct RadialParameters {
  double m;
  double K;
  double Lambda;
  std::function<double(double)> potential;
};

/// R'' + (2/r) R' + (K/(m Lambda) - 1) R'^2 / R + ((2/(K Lambda))(E - U) - C'/r^2) R.
double radial_residual(const Field1D& R, double E, double c_prime, const RadialParameters& params, double r,
                       const DiffEngine& engine = DiffEngine{});

/// Th'' + Th'/tan(theta) + n Th'^2/Th + (C' - C/sin^2 theta) Th, n = K/(m Lambda) - 1.
double theta_residual(const Field1D& Theta, double C, double c_prime, double nonlinearity, double theta,
                      const DiffEngine& engine = DiffEngine{});

/// Ph'' + n Ph'^2/Ph - C Ph, n = K/(m Lambda) - 1.
double phi_residual(const Field1D& Phi, double C, double nonlinearity, double phi,
                    const DiffEngine& engine = DiffEngine{});

/// (grad ln f)^2 + Lap ln f - Lap f / f, identically zero for positive f.
/// ln f is finite-differenced with the engine's stencil; Lap f / f uses f's own partials.
Complex log_identity_gap(const ScalarField& f, double t, std::span<const double> x,
                         const DiffEngine& engine = DiffEngine{});
/// Same with an independently represented ln f.
Complex log_identity_gap(const ScalarField& f, const ScalarField& log_f, double t, std::span<const double> x,
                         const DiffEngine& engine = DiffEngine{});

}  // namespace scaledyn
