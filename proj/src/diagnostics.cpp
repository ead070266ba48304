#include "scaledyn/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

#include "scaledyn/error.hpp"
#include "scaledyn/hamilton_jacobi.hpp"
#include "scaledyn/scale_ops.hpp"
#include "scaledyn/schrodinger.hpp"

namespace scaledyn {

bool ResidualReport::passed() const {
  return std::all_of(entries.begin(), entries.end(), [](const ResidualEntry& e) { return e.passed(); });
}

namespace {

constexpr std::array<double, 3> kDirection{0.48, 0.6, 0.64};

class Collector {
 public:
  explicit Collector(const std::vector<double>& radii) : radii_(radii) {}

  // Max over the grid of |residual(r, x)|.
  void add(std::string name, double tolerance, const std::function<double(double, std::span<const double>)>& f) {
    double worst = 0.0;
    for (double r : radii_) {
      const std::array<double, 3> x{r * kDirection[0], r * kDirection[1], r * kDirection[2]};
      const double v = f(r, x);
      worst = std::isnan(v) ? v : std::max(worst, std::abs(v));
      if (std::isnan(worst)) break;
    }
    entries_.push_back({std::move(name), worst, tolerance});
  }

  std::vector<ResidualEntry> take() { return std::move(entries_); }

 private:
  const std::vector<double>& radii_;
  std::vector<ResidualEntry> entries_;
};

}  // namespace

ResidualReport residual_report(const KeplerSystem& sys, const std::vector<double>& r_grid,
                               const ResidualOptions& options) {
  const GroundState state = default_ground_state(sys);
  ResidualReport report{state.kind, {}, {}};
  for (double r : r_grid) {
    if (!(r > 0.0)) throw InvalidArgument("grid radii must be positive");
    if (state.kind == GroundStateKind::linear ||
        (r >= state.r_lower + 0.1 * (state.r_upper - state.r_lower) &&
         r <= state.r_lower + 0.9 * (state.r_upper - state.r_lower)))
      report.radii.push_back(r);
  }
  if (report.radii.empty()) throw InvalidArgument("no grid radius lies inside the ground-state domain");

  const double m = sys.m();
  const double K = sys.K();
  const double Lambda = sys.Lambda();
  const double t = options.t;
  const double e0 = options.energy_factor * sys.e0_oracle();
  const double E = -e0;
  const Complex lambda = sys.lambda();
  const EtaDecomposition split = sys.lambda_split();
  const LambdaTensor tensor = LambdaTensor::uniform_diagonal(lambda, 3, 2);
  const ScalarField U = kepler_potential_field(sys);
  const ActionField action = ground_state_action(sys, state, e0);
  const WaveField psi = ground_state_psi(sys, state, e0);
  const ScalarField P = state.density();
  const ScalarField sqrt_p = state.field();
  const double nonlinearity = (K - m * Lambda) / (m * Lambda);
  const DiffEngine engine;

  Collector c(report.radii);
  using X = std::span<const double>;
  c.add("hj_general", 1e-8, [&](double, X x) { return std::abs(hj_residual_general(action, U, tensor, m, t, x, engine)); });
  c.add("hj_split_real", 1e-8, [&](double, X x) {
    return hj_split_residuals(action.S(), action.R(), U, split, 2, m, t, x, engine).real_part;
  });
  c.add("hj_split_imag", 1e-8, [&](double, X x) {
    return hj_split_residuals(action.S(), action.R(), U, split, 2, m, t, x, engine).imag_part;
  });
  c.add("hj3_energy", 1e-8,
        [&](double, X x) { return hj3_split_residuals(action.S(), P, U, m, K, split, t, x, engine).energy; });
  c.add("hj3_continuity", 1e-8,
        [&](double, X x) { return hj3_split_residuals(action.S(), P, U, m, K, split, t, x, engine).continuity; });
  c.add("nls", 1e-8, [&](double, X x) { return std::abs(nls_residual(psi.psi(), U, m, K, lambda, t, x, engine)); });
  if (sys.eta() == EtaParameter::Value::minus_one)
    c.add("nls_eta_minus1", 1e-8,
          [&](double, X x) { return std::abs(nls_residual_eta_minus1(psi.psi(), U, m, K, Lambda, t, x, engine)); });
  if (sys.linear_schrodinger())
    c.add("schrodinger_linear", 1e-8,
          [&](double, X x) { return std::abs(linear_schrodinger_residual(psi.psi(), U, m, Lambda, t, x, engine)); });
  c.add("stationary", 1e-8, [&](double, X x) { return std::abs(stationary_residual(sqrt_p, E, U, m, K, Lambda, x, engine)); });
  const RadialParameters radial = sys.radial_parameters();
  c.add("radial", 1e-8, [&](double r, X) { return radial_residual(state.sqrt_p, E, 0.0, radial, r, engine); });
  const Field1D one = Field1D::constant(1.0);
  c.add("theta", 1e-12, [&](double, X) {
    double worst = 0.0;
    for (double theta : {0.3, 1.0, 2.0}) worst = std::max(worst, std::abs(theta_residual(one, 0.0, 0.0, nonlinearity, theta, engine)));
    return worst;
  });
  c.add("phi", 1e-12, [&](double, X) {
    double worst = 0.0;
    for (double phi : {0.0, 1.0, 2.0}) worst = std::max(worst, std::abs(phi_residual(one, 0.0, nonlinearity, phi, engine)));
    return worst;
  });
  // Third derivatives of A are differenced from the analytic Hessian, with a
  // step proportional to the distance from the singular points r = 0 and r = r*.
  const VectorField V = VectorField::gradient_of(action.A(), 1.0 / m);
  // Relative to the size of the balanced terms m lambda/2 Lap V and grad U, which grow like r^-3 near the origin.
  c.add("newton_relative", 1e-7, [&](double r, X x) {
    DiffOptions fd;
    fd.stencil_order = 4;
    fd.base_step = 1e-3 * std::min(r, state.r_upper - r);
    const DiffEngine local(fd);
    const auto res = newton_residual(V, U, tensor, m, t, x, local);
    const auto lap = local.vector_laplacian(V, t, x);
    const auto grad_u = engine.gradient(U, t, x);
    double worst = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < res.size(); ++k) {
      worst = std::max(worst, std::abs(res[k]));
      scale = std::max({scale, std::abs(m * lambda / 2.0 * lap[k]), std::abs(grad_u[k])});
    }
    return worst / scale;
  });
  c.add("u_add", 1e-8,
        [&](double r, X) { return u_add_from_density(sys, state.sqrt_p, r, engine) - u_add_closed(sys, r); });
  c.add("virial_balance", 1e-10, [&](double r, X) {
    return virial_balance(sys, state, {r}, engine).front().residual;
  });
  const ScalarField log_p = Complex(2.0) * ScalarField::radial(3, Field1D::log_of(state.sqrt_p));
  c.add("log_identity", 1e-8, [&](double, X x) { return std::abs(log_identity_gap(P, log_p, t, x, engine)); });
  report.entries = c.take();
  return report;
}

}  // namespace scaledyn
