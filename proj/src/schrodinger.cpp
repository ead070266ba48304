#include "scaledyn/schrodinger.hpp"

#include <cmath>
#include <numbers>

#include "scaledyn/error.hpp"
#include "scaledyn/scale_ops.hpp"

namespace scaledyn {

namespace {

constexpr Complex kI{0.0, 1.0};

void check_K(double K) {
  if (K == 0.0 || !std::isfinite(K)) throw DomainError("K must be a finite nonzero constant");
}

void check_mass(double m) {
  if (!(m > 0.0)) throw DomainError("mass must be positive");
}

Complex nonvanishing(Complex v, const char* what) {
  if (v == Complex{}) throw DomainError(std::string(what) + " vanishes at the evaluation point");
  return v;
}

}  // namespace

WaveField::WaveField(ScalarField psi, double K, EtaParameter eta) : psi_(std::move(psi)), K_(K), eta_(eta) {
  check_K(K_);
  eta_.real_value();
}

WaveField psi_from_action(const ScalarField& S, const ScalarField& R, double K, EtaParameter eta) {
  check_K(K);
  const double e = eta.real_value();
  auto exponent = Complex(-e / K, 0.0) * R + Complex(0.0, 1.0 / K) * S;
  return WaveField(ScalarField::exp_of(exponent), K, eta);
}

ActionValues action_from_psi(Complex psi, double K, EtaParameter eta) {
  check_K(K);
  const double e = eta.real_value();
  nonvanishing(psi, "psi");
  return {K * std::arg(psi), -e * K * std::log(std::abs(psi))};
}

ActionValues action_from_psi(const WaveField& wave, double t, std::span<const double> x) {
  return action_from_psi(wave(t, x), wave.K(), wave.eta());
}

double nonlinear_coefficient(double m, double K, double Lambda) {
  check_mass(m);
  return (K - m * Lambda) * K / (2.0 * m);
}

Complex nls_residual(const ScalarField& psi, const ScalarField& U, double m, double K, Complex lambda, double t,
                     std::span<const double> x, const DiffEngine& engine) {
  check_mass(m);
  check_K(K);
  const Complex p = nonvanishing(psi(t, x), "psi");
  const auto g = engine.gradient(psi, t, x);
  // (K/m - i lambda) K/2 = (K - i m lambda) K/(2m)
  const Complex coefficient = (K - kI * (m * lambda)) * K / (2.0 * m);
  return kI * K * engine.time_derivative(psi, t, x) + kI * K * lambda / 2.0 * engine.laplacian(psi, t, x) +
         bilinear_dot(g, g) / p * coefficient - U(t, x) * p;
}

Complex nls_residual_eta_minus1(const ScalarField& psi, const ScalarField& U, double m, double K, double Lambda,
                                double t, std::span<const double> x, const DiffEngine& engine) {
  check_K(K);
  const double coefficient = nonlinear_coefficient(m, K, Lambda);
  const Complex p = nonvanishing(psi(t, x), "psi");
  const auto g = engine.gradient(psi, t, x);
  return kI * K * engine.time_derivative(psi, t, x) + K * Lambda / 2.0 * engine.laplacian(psi, t, x) +
         bilinear_dot(g, g) / p * coefficient - U(t, x) * p;
}

Complex linear_schrodinger_residual(const ScalarField& psi, const ScalarField& U, double m, double Lambda, double t,
                                    std::span<const double> x, const DiffEngine& engine) {
  check_mass(m);
  const double mL = m * Lambda;
  return kI * mL * engine.time_derivative(psi, t, x) + mL * Lambda / 2.0 * engine.laplacian(psi, t, x) -
         U(t, x) * psi(t, x);
}

DensityResiduals hj3_split_residuals(const ScalarField& S, const ScalarField& P, const ScalarField& U, double m,
                                     double K, const EtaDecomposition& lambda, double t, std::span<const double> x,
                                     const DiffEngine& engine) {
  check_mass(m);
  check_K(K);
  const double eta = lambda.eta.real_value();
  const double p = P(t, x).real();
  if (!(p > 0.0)) throw DomainError("density P must be positive");

  const auto gp = engine.gradient(P, t, x);
  const auto gs = engine.gradient(S, t, x);
  const double lap_p = engine.laplacian(P, t, x).real();
  const double lap_s = engine.laplacian(S, t, x).real();
  const double dt_p = engine.time_derivative(P, t, x).real();
  const double dt_s = engine.time_derivative(S, t, x).real();
  // Ratios to P are formed before squaring so that tiny densities do not underflow.
  double glog2 = 0.0, gs2 = 0.0, glog_gs = 0.0;
  for (std::size_t k = 0; k < gp.size(); ++k) {
    const double glog = gp[k].real() / p;
    glog2 += glog * glog;
    gs2 += gs[k].real() * gs[k].real();
    glog_gs += glog * gs[k].real();
  }
  const double lap_ratio = lap_p / p;
  const double lap_sqrt_over_sqrt = lap_ratio / 2.0 - glog2 / 4.0;
  const double lap_log_sqrt = 0.5 * (lap_ratio - glog2);
  const double divergence = p * (glog_gs + lap_s) / m;
  const double l_re = lambda.re_part;
  const double l_im = lambda.im_part;
  // (K/m + eta l_im) and (1 + eta m l_im / K) with the K = m Lambda cancellation kept exact
  const double shifted = K + eta * m * l_im;

  const double energy = dt_s + gs2 / (2.0 * m) + 0.5 * l_re * lap_s - K * K / (2.0 * m) * lap_sqrt_over_sqrt +
                        K / 2.0 * (shifted / m) * lap_log_sqrt + U(t, x).real();
  const double continuity =
      dt_p + divergence - p * (lap_s / m) * (shifted / K) + K * l_re / 2.0 * lap_log_sqrt;
  return {energy, continuity};
}

Complex stationary_residual(const ScalarField& Psi, double E, const ScalarField& U, double m, double K, double Lambda,
                            std::span<const double> x, const DiffEngine& engine) {
  check_mass(m);
  check_K(K);
  if (Lambda == 0.0) throw DomainError("Lambda must be nonzero");
  constexpr double t = 0.0;
  const Complex p = nonvanishing(Psi(t, x), "Psi");
  const auto g = engine.gradient(Psi, t, x);
  const double mL = m * Lambda;
  return engine.laplacian(Psi, t, x) + bilinear_dot(g, g) / p * ((K - mL) / mL) +
         2.0 / (K * Lambda) * (E - U(t, x)) * p;
}

double radial_residual(const Field1D& R, double E, double c_prime, const RadialParameters& params, double r,
                       const DiffEngine& engine) {
  check_mass(params.m);
  check_K(params.K);
  if (params.Lambda == 0.0) throw DomainError("Lambda must be nonzero");
  if (!(r > 0.0)) throw DomainError("radial residual needs r > 0");
  if (!params.potential) throw InvalidArgument("radial residual needs a potential");
  const double mL = params.m * params.Lambda;
  const double nonlinearity = (params.K - mL) / mL;
  const double value = R(r);
  const double d1 = engine.derivative(R, r, 1);
  const double d2 = engine.derivative(R, r, 2);
  double out = d2 + 2.0 / r * d1 +
               (2.0 / (params.K * params.Lambda) * (E - params.potential(r)) - c_prime / (r * r)) * value;
  if (nonlinearity != 0.0) {
    if (value == 0.0) throw DomainError("radial factor vanishes where the nonlinear term divides by it");
    out += nonlinearity * d1 * d1 / value;
  }
  return out;
}

double theta_residual(const Field1D& Theta, double C, double c_prime, double nonlinearity, double theta,
                      const DiffEngine& engine) {
  if (!(theta > 0.0 && theta < std::numbers::pi)) throw DomainError("theta residual is singular at theta = 0 and pi");
  const double value = Theta(theta);
  const double d1 = engine.derivative(Theta, theta, 1);
  const double d2 = engine.derivative(Theta, theta, 2);
  const double s = std::sin(theta);
  double out = d2 + d1 / std::tan(theta) + (c_prime - C / (s * s)) * value;
  if (nonlinearity != 0.0) {
    if (value == 0.0) throw DomainError("Theta vanishes where the nonlinear term divides by it");
    out += nonlinearity * d1 * d1 / value;
  }
  return out;
}

double phi_residual(const Field1D& Phi, double C, double nonlinearity, double phi, const DiffEngine& engine) {
  const double value = Phi(phi);
  const double d1 = engine.derivative(Phi, phi, 1);
  const double d2 = engine.derivative(Phi, phi, 2);
  double out = d2 - C * value;
  if (nonlinearity != 0.0) {
    if (value == 0.0) throw DomainError("Phi vanishes where the nonlinear term divides by it");
    out += nonlinearity * d1 * d1 / value;
  }
  return out;
}

namespace {

void check_positive(const ScalarField& f, double t, std::span<const double> x) {
  const Complex v = f(t, x);
  if (!(v.real() > 0.0) || v.imag() != 0.0) throw DomainError("log identity needs a positive real field");
}

Complex gap_from(const ScalarField& f, const ScalarField& log_f, double t, std::span<const double> x,
                 const DiffEngine& log_engine, const DiffEngine& engine) {
  check_positive(f, t, x);
  const auto g = log_engine.gradient(log_f, t, x);
  return bilinear_dot(g, g) + log_engine.laplacian(log_f, t, x) - engine.laplacian(f, t, x) / f(t, x);
}

}  // namespace

Complex log_identity_gap(const ScalarField& f, double t, std::span<const double> x, const DiffEngine& engine) {
  // ln f is differenced numerically so that the two sides use independent routes.
  const ScalarField log_f(f.dimension(), [f](double tt, std::span<const double> xx) { return std::log(f(tt, xx)); },
                          f.domain());
  DiffOptions fd = engine.options();
  fd.use_analytic = false;
  return gap_from(f, log_f, t, x, DiffEngine(fd), engine);
}

Complex log_identity_gap(const ScalarField& f, const ScalarField& log_f, double t, std::span<const double> x,
                         const DiffEngine& engine) {
  return gap_from(f, log_f, t, x, engine, engine);
}

}  // namespace scaledyn
