#include "scaledyn/kepler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scaledyn/error.hpp"
#include "scaledyn/exp_integral.hpp"

namespace scaledyn {

namespace {

void check_radius(double r) {
  if (!(r > 0.0)) throw DomainError("radius must be positive");
}

// Residual of the linear radial equation for e^{-beta r} is affine in E; its root
// is taken at two radii and must agree.
double oracle_energy(const KeplerSystem& sys) {
  RadialParameters params = sys.radial_parameters();
  params.K = sys.m() * sys.Lambda();
  const double beta = sys.beta();
  Field1D profile([beta](double r) { return std::exp(-beta * r); });
  profile.with_derivatives([beta](double r) { return -beta * std::exp(-beta * r); },
                           [beta](double r) { return beta * beta * std::exp(-beta * r); });
  const DiffEngine engine;
  auto root_at = [&](double r) {
    const double a = radial_residual(profile, 0.0, 0.0, params, r, engine);
    const double b = radial_residual(profile, 1.0, 0.0, params, r, engine) - a;
    if (b == 0.0) throw Error("radial residual does not depend on the energy");
    return -a / b;
  };
  const double e1 = root_at(sys.r0());
  const double e2 = root_at(3.0 * sys.r0());
  if (std::abs(e1 - e2) > 1e-9 * std::abs(e1)) throw Error("ground-state energy root depends on r");
  return -e1;
}

}  // namespace

KeplerSystem::KeplerSystem(const KeplerParameters& p)
    : G_(p.G), M_(p.M), m_(p.m), Lambda_(p.Lambda), K_(p.K.value_or(p.m * p.Lambda)), eta_(p.eta) {
  if (!(G_ > 0.0) || !(M_ > 0.0) || !(m_ > 0.0)) throw InvalidArgument("G, M and m must be positive");
  if (Lambda_ == 0.0 || !std::isfinite(Lambda_)) throw InvalidArgument("Lambda must be finite and nonzero");
  if (K_ == 0.0 || !std::isfinite(K_)) throw InvalidArgument("K must be finite and nonzero");
  eta_.real_value();
  k_ = G_ * M_ * m_;
  r0_ = 2.0 * Lambda_ * Lambda_ / (G_ * M_);
  e0_paper_ = k_ * k_ / (2.0 * m_ * m_ * Lambda_ * Lambda_);
  e0_oracle_ = oracle_energy(*this);
}

RadialParameters KeplerSystem::radial_parameters() const {
  const double k = k_;
  return {m_, K_, Lambda_, [k](double r) { return -k / r; }};
}

double kepler_potential(const KeplerSystem& sys, double r) {
  check_radius(r);
  return -sys.k() / r;
}

ScalarField kepler_potential_field(const KeplerSystem& sys) {
  const double k = sys.k();
  Field1D profile([k](double r) {
    check_radius(r);
    return -k / r;
  }, 0.0);
  profile.with_derivatives([k](double r) { return k / (r * r); }, [k](double r) { return -2.0 * k / (r * r * r); });
  return ScalarField::radial(3, profile);
}

GroundStateEnergy ground_state_energy(const KeplerSystem& sys) { return {sys.e0_paper(), sys.e0_oracle()}; }

ScalarField GroundState::density() const {
  const Field1D f = sqrt_p;
  Field1D p([f](double r) { return f(r) * f(r); }, f.lower(), f.upper());
  p.with_derivatives([f](double r) { return 2.0 * f(r) * f.analytic_first(r); },
                     [f](double r) {
                       const double d1 = f.analytic_first(r);
                       return 2.0 * (d1 * d1 + f(r) * f.analytic_second(r));
                     });
  return ScalarField::radial(3, p);
}

double default_c1(const KeplerSystem& sys) { return sys.m() * sys.Lambda() * sys.Lambda(); }

GroundState sqrtP_linear(const KeplerSystem& sys, std::optional<double> c1, double c2) {
  const double C1 = c1.value_or(default_c1(sys));
  if (!(C1 + c2 > 0.0)) throw DomainError("linear ground state needs C1 + C2 > 0");
  const double amplitude = (C1 + c2) / (sys.m() * sys.Lambda() * sys.Lambda());
  const double beta = sys.beta();
  Field1D f([amplitude, beta](double r) { return amplitude * std::exp(-beta * r); }, 0.0);
  f.with_derivatives([amplitude, beta](double r) { return -beta * amplitude * std::exp(-beta * r); },
                     [amplitude, beta](double r) { return beta * beta * amplitude * std::exp(-beta * r); });
  return {GroundStateKind::linear, C1, c2, f, 0.0, std::numeric_limits<double>::infinity()};
}

namespace {

struct LogArgument {
  double lambda2;
  double two_gm;
  double c2;
  double s;

  double value(double r) const { return lambda2 * std::exp(s * r) - two_gm * r * exp_integral(s * r) - c2 * lambda2 * r; }
  double first(double r) const {
    const double e = std::exp(s * r);
    return s * lambda2 * e - two_gm * exp_integral(s * r) - two_gm * e - c2 * lambda2;
  }
  double second(double r) const {
    const double e = std::exp(s * r);
    return s * s * lambda2 * e - two_gm * e / r - two_gm * s * e;
  }
};

LogArgument log_argument(const KeplerSystem& sys, double c2, EiArgumentForm form) {
  const double s = form == EiArgumentForm::solving ? 2.0 * sys.beta() : sys.beta();
  return {sys.Lambda() * sys.Lambda(), 2.0 * sys.gm(), c2, s};
}

}  // namespace

double nonlinear_log_argument(const KeplerSystem& sys, double c2, EiArgumentForm form, double r) {
  check_radius(r);
  return log_argument(sys, c2, form).value(r);
}

GroundState sqrtP_nonlinear(const KeplerSystem& sys, std::optional<double> c1, double c2, EiArgumentForm form) {
  const double C1 = c1.value_or(default_c1(sys));
  if (!(C1 > 0.0)) throw DomainError("nonlinear ground state needs C1 > 0");
  const LogArgument L = log_argument(sys, c2, form);

  // Scan outward geometrically for the first sign change of L, then bisect.
  const double r_end = 700.0 / L.s;
  double lo = 1e-6 * sys.r0();
  if (!(L.value(lo) > 0.0)) throw DomainError("log argument is not positive near r = 0");
  double hi = lo;
  bool found = false;
  while (hi < r_end) {
    hi = std::min(hi * 1.01, r_end);
    if (!(L.value(hi) > 0.0)) {
      found = true;
      break;
    }
    lo = hi;
  }
  if (!found) throw DomainError("log argument has no zero before exp overflow");
  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    (L.value(mid) > 0.0 ? lo : hi) = mid;
  }
  const double r_star = lo;

  const double q = sys.q();
  const double beta = sys.beta();
  auto value = [C1, L, q, beta](double r) {
    check_radius(r);
    const double l = L.value(r);
    if (!(l > 0.0)) throw DomainError("nonlinear ground state evaluated outside its validity domain");
    return C1 * std::exp(q * (-beta * r + std::log(l) - std::log(r)));
  };
  auto g1 = [L, beta](double r) { return -beta + L.first(r) / L.value(r) - 1.0 / r; };
  auto g2 = [L](double r) {
    const double l = L.value(r);
    const double l1 = L.first(r);
    return (L.second(r) * l - l1 * l1) / (l * l) + 1.0 / (r * r);
  };
  Field1D f(value, 0.0, r_star);
  f.with_derivatives([value, g1, q](double r) { return value(r) * q * g1(r); },
                     [value, g1, g2, q](double r) {
                       const double a = g1(r);
                       return value(r) * (q * q * a * a + q * g2(r));
                     });
  return {GroundStateKind::nonlinear, C1, c2, f, 0.0, r_star};
}

GroundState default_ground_state(const KeplerSystem& sys) {
  return sys.linear_schrodinger() ? sqrtP_linear(sys) : sqrtP_nonlinear(sys);
}

double u_add_closed(const KeplerSystem& sys, double r) {
  check_radius(r);
  return -(sys.k() / sys.r0()) * (1.0 - sys.r0() / r);
}

double u_add_from_density(const KeplerSystem& sys, const Field1D& sqrt_p, double r, const DiffEngine& engine) {
  check_radius(r);
  const double m = sys.m();
  const double L = sys.Lambda();
  const double ratio = engine.radial_laplacian(sqrt_p, r) / sqrt_p(r);
  if (sys.linear_schrodinger()) return -(m * L * L / 2.0) * ratio;
  const double K = sys.K();
  const double lap_log = engine.radial_laplacian(Field1D::log_of(sqrt_p), r);
  return -(K * K / (2.0 * m)) * ratio + (K / 2.0) * ((K - m * L) / m) * lap_log;
}

Complex virial_equilibrium_residual(Complex kinetic, double U, Complex divV, Complex lambda, double m, double gamma) {
  return 2.0 * kinetic + lambda * m * divV - gamma * U;
}

double orbital_speed(const KeplerSystem& sys) { return std::sqrt(sys.gm() / sys.r0()); }

SpeedSquared speed_squared_decomposition(const KeplerSystem& sys, double r) {
  check_radius(r);
  const double potential = sys.gm() / r;
  const double extra = (sys.gm() / sys.r0()) * (1.0 - sys.r0() / r);
  return {potential, extra, potential + extra};
}

namespace {

void check_grid(const std::vector<double>& r_grid) {
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    if (!(r_grid[i] > 0.0) || !std::isfinite(r_grid[i])) throw InvalidArgument("grid radii must be positive and finite");
    if (i > 0 && r_grid[i] < r_grid[i - 1]) throw InvalidArgument("grid must be sorted");
  }
}

}  // namespace

std::vector<RotationRow> rotation_curve(const KeplerSystem& sys, const std::vector<double>& r_grid) {
  check_grid(r_grid);
  const double v = orbital_speed(sys);
  std::vector<RotationRow> rows;
  rows.reserve(r_grid.size());
  for (double r : r_grid) rows.push_back({r, v, std::sqrt(sys.gm() / r), speed_squared_decomposition(sys, r)});
  return rows;
}

std::vector<VirialRow> virial_balance(const KeplerSystem& sys, const GroundState& state,
                                      const std::vector<double>& r_grid, const DiffEngine& engine) {
  check_grid(r_grid);
  constexpr double gamma = -1.0;
  const double v = orbital_speed(sys);
  std::vector<VirialRow> rows;
  rows.reserve(r_grid.size());
  for (double r : r_grid) {
    if (!state.contains(r)) throw DomainError("virial row outside the ground-state domain");
    VirialRow row{r, sys.m() * v * v, gamma * kepler_potential(sys, r), u_add_from_density(sys, state.sqrt_p, r, engine),
                  0.0};
    row.residual = row.two_k_real + row.lambda_m_divv_real - row.gamma_u;
    rows.push_back(row);
  }
  return rows;
}

ActionField ground_state_action(const KeplerSystem& sys, const GroundState& state, std::optional<double> e0_in) {
  const double e0 = e0_in.value_or(sys.e0_oracle());
  auto S = ScalarField::of_time(3, [e0](double t) { return Complex(e0 * t); }, [e0](double) { return Complex(e0); });
  const double eta = sys.eta().real_value();
  auto R = Complex(-eta * sys.K()) * ScalarField::radial(3, Field1D::log_of(state.sqrt_p));
  return ActionField(S, R, sys.eta());
}

WaveField ground_state_psi(const KeplerSystem& sys, const GroundState& state, std::optional<double> e0) {
  const Complex w(0.0, e0.value_or(sys.e0_oracle()) / sys.K());
  auto phase = ScalarField::of_time(3, [w](double t) { return std::exp(w * t); },
                                    [w](double t) { return w * std::exp(w * t); });
  return WaveField(phase * state.field(), sys.K(), sys.eta());
}

}  // namespace scaledyn
