#include "scaledyn/hamilton_jacobi.hpp"

#include <array>

#include "scaledyn/error.hpp"
#include "scaledyn/scale_ops.hpp"

namespace scaledyn {

namespace {

ScalarField compose_action(const ScalarField& S, const ScalarField& R, EtaParameter eta) {
  return S + (Complex(0.0, 1.0) * eta.as_complex()) * R;
}

void check_mass(double m) {
  if (!(m > 0.0)) throw DomainError("mass must be positive");
}

/// sum over the uniform diagonal: sum_k d^j f / dx_k^j
Complex diagonal_sum(const ScalarField& f, int j, double t, std::span<const double> x, const DiffEngine& engine) {
  if (j < 1 || j > 4) throw Unsupported("correction order j_alpha must be between 1 and 4");
  Complex s{};
  std::vector<int> axes(j);
  for (int k = 0; k < f.dimension(); ++k) {
    std::fill(axes.begin(), axes.end(), k);
    s += engine.mixed_partial(f, axes, t, x);
  }
  return s;
}

double factorial(int n) {
  double out = 1.0;
  for (int i = 2; i <= n; ++i) out *= i;
  return out;
}

}  // namespace

ActionField::ActionField(ScalarField S, ScalarField R, EtaParameter eta)
    : S_(std::move(S)), R_(std::move(R)), eta_(eta), A_(compose_action(S_, R_, eta)) {}

Complex hj_residual_general(const ActionField& action, const ScalarField& U, const LambdaTensor& lambda, double m,
                            double t, std::span<const double> x, const DiffEngine& engine) {
  check_mass(m);
  const auto& A = action.A();
  if (lambda.dimension() != A.dimension()) throw InvalidArgument("lambda tensor dimension does not match the action");
  const auto g = engine.gradient(A, t, x);
  Complex corr{};
  for (const auto& term : lambda.terms()) corr += term.weight * engine.mixed_partial(A, term.axes, t, x);
  return engine.time_derivative(A, t, x) + bilinear_dot(g, g) / (2.0 * m) + corr + U(t, x);
}

Complex hj_residual_general(const ActionField& action, const ScalarField& U, const ScaleRegime& regime, double m,
                            double t, std::span<const double> x, const DiffEngine& engine) {
  if (regime.j_alpha() > 4) throw Unsupported("correction order j_alpha > 4 is not supported");
  return hj_residual_general(action, U, LambdaTensor::from_regime(regime), m, t, x, engine);
}

double classical_hj_residual(const ScalarField& S, const ScalarField& U, double m, double t,
                             std::span<const double> x, const DiffEngine& engine) {
  check_mass(m);
  const auto g = engine.gradient(S, t, x);
  return (engine.time_derivative(S, t, x) + bilinear_dot(g, g) / (2.0 * m) + U(t, x)).real();
}

SplitResiduals hj_split_residuals(const ScalarField& S, const ScalarField& R, const ScalarField& U,
                                  const EtaDecomposition& lambda, int j_alpha, double m, double t,
                                  std::span<const double> x, const DiffEngine& engine) {
  check_mass(m);
  if (!lambda.eta.is_real()) throw Unsupported("real/imaginary split needs eta = +-1");
  const double eta2 = lambda.eta.squared();
  const double inv_fact = 1.0 / factorial(j_alpha);
  const auto gs = engine.gradient(S, t, x);
  const auto gr = engine.gradient(R, t, x);
  const Complex ds = diagonal_sum(S, j_alpha, t, x, engine);
  const Complex dr = diagonal_sum(R, j_alpha, t, x, engine);
  const double l_re = lambda.re_part;
  const double l_im = lambda.im_part;

  const Complex first = engine.time_derivative(S, t, x) + (bilinear_dot(gs, gs) - eta2 * bilinear_dot(gr, gr)) / (2.0 * m) +
                        inv_fact * (l_re * ds - eta2 * l_im * dr) + U(t, x);
  const Complex second = engine.time_derivative(R, t, x) + bilinear_dot(gs, gr) / m + inv_fact * (l_im * ds + l_re * dr);
  return {first.real(), second.real()};
}

HamiltonianPair hamiltonian_pair(const ScalarField& S, const ScalarField& R, const DiffEngine& engine) {
  auto minus_dt = [engine](const ScalarField& f) {
    return ScalarField(f.dimension(), [f, engine](double t, std::span<const double> x) {
      return -engine.time_derivative(f, t, x);
    }, f.domain());
  };
  return {minus_dt(S), minus_dt(R)};
}

ActionVelocities velocities_from_action(const ActionField& action, double m) {
  check_mass(m);
  return {VectorField::gradient_of(action.S(), 1.0 / m), VectorField::gradient_of(action.R(), 1.0 / m)};
}

}  // namespace scaledyn
