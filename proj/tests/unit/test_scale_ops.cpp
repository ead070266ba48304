#include <doctest.h>

#include <cmath>
#include <random>

#include "random_fields.hpp"
#include "scaledyn/error.hpp"
#include "scaledyn/scale_ops.hpp"

using namespace scaledyn;
using testing::Coefficients;

namespace {

const EtaParameter kEtas[] = {EtaParameter::Value::plus_one, EtaParameter::Value::minus_one,
                              EtaParameter::Value::plus_i, EtaParameter::Value::minus_i};

AsymptoticTrajectory abs_path(ScaleRegime regime = ScaleRegime::linear(1)) {
  const double inf = std::numeric_limits<double>::infinity();
  return AsymptoticTrajectory(
      {{-inf, 0.0, [](double t) { return RealVector{-t}; }, [](double) { return RealVector{-1.0}; }},
       {0.0, inf, [](double t) { return RealVector{t}; }, [](double) { return RealVector{1.0}; }}},
      std::move(regime));
}

AsymptoticTrajectory power_path(int n, ScaleRegime regime = ScaleRegime::linear(1)) {
  return AsymptoticTrajectory::smooth([n](double t) { return RealVector{std::pow(t, n)}; },
                                      [n](double t) { return RealVector{n * std::pow(t, n - 1)}; }, std::move(regime));
}

/// Path in R^d with a kink at t = 0: slopes differ on either side.
AsymptoticTrajectory kinked_path(std::mt19937_64& rng, ScaleRegime regime) {
  const int d = regime.dimension();
  const RealVector left = testing::random_point(rng, d), right = testing::random_point(rng, d);
  const RealVector x0 = testing::random_point(rng, d);
  const double inf = std::numeric_limits<double>::infinity();
  auto seg = [x0, d](RealVector slope) {
    return std::pair{[x0, slope, d](double t) {
                       RealVector x(d);
                       for (int k = 0; k < d; ++k) x[k] = x0[k] + slope[k] * t + 0.1 * t * t;
                       return x;
                     },
                     [slope, d](double t) {
                       RealVector v(d);
                       for (int k = 0; k < d; ++k) v[k] = slope[k] + 0.2 * t;
                       return v;
                     }};
  };
  auto [pl, vl] = seg(left);
  auto [pr, vr] = seg(right);
  return AsymptoticTrajectory({{-inf, 0.0, pl, vl}, {0.0, inf, pr, vr}}, std::move(regime));
}

ScaleRegime random_regime(std::mt19937_64& rng, int d, EtaParameter eta, double alpha = 0.5) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RealVector lp(d), lm(d);
  for (auto& v : lp) v = u(rng);
  for (auto& v : lm) v = u(rng);
  return ScaleRegime(alpha, lp, lm, eta);
}

double max_abs(const ComplexVector& v) {
  double m = 0.0;
  for (auto c : v) m = std::max(m, std::abs(c));
  return m;
}

DiffEngine order4() {
  DiffOptions o;
  o.stencil_order = 4;
  return DiffEngine(o);
}

/// Circular Kepler velocity sqrt(GM/rho^3)(-y, x, 0) in R^3.
VectorField circular_velocity(double gm) {
  auto omega = [gm](std::span<const double> x) { return std::sqrt(gm / std::pow(x[0] * x[0] + x[1] * x[1], 1.5)); };
  return VectorField({ScalarField(3, [omega](double, std::span<const double> x) { return Complex(-omega(x) * x[1]); }),
                      ScalarField(3, [omega](double, std::span<const double> x) { return Complex(omega(x) * x[0]); }),
                      ScalarField::constant(3, 0.0)});
}

ScalarField kepler_potential(double gm, double m) {
  return ScalarField(3, [gm, m](double, std::span<const double> x) {
    return Complex(-gm * m / std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
  });
}

}  // namespace

TEST_CASE("one-sided derivatives of the regular part") {
  const auto sq = power_path(2);
  CHECK(delta_derivative(sq, 1.0)[0] == 2.0);
  CHECK(nabla_derivative(sq, 1.0)[0] == 2.0);
  const auto kink = abs_path();
  CHECK(delta_derivative(kink, 0.0)[0] == 1.0);
  CHECK(nabla_derivative(kink, 0.0)[0] == -1.0);
  CHECK(delta_derivative(kink, 2.0)[0] == nabla_derivative(kink, 2.0)[0]);
  const auto constant = AsymptoticTrajectory::smooth([](double) { return RealVector{3.0, -1.0}; },
                                                     [](double) { return RealVector{0.0, 0.0}; }, ScaleRegime::linear(2));
  CHECK(delta_derivative(constant, 0.3) == RealVector{0.0, 0.0});
  CHECK(nabla_derivative(constant, 0.3) == RealVector{0.0, 0.0});
}

TEST_CASE("box_time examples") {
  for (auto eta : kEtas) {
    const auto v = box_time(power_path(2), 1.0, eta);
    CHECK(v[0] == Complex(2.0, 0.0));
    CHECK(box_time(power_path(3), 2.0, eta)[0] == Complex(12.0, 0.0));
  }
  CHECK(box_time(abs_path(), 0.0, EtaParameter::Value::minus_one)[0] == Complex(0.0, -1.0));
  CHECK(box_time(abs_path(), 0.0, EtaParameter::Value::plus_one)[0] == Complex(0.0, 1.0));
  // eta = +-i turns the imaginary unit real: i * (+-i) = -+1.
  CHECK(box_time(abs_path(), 0.0, EtaParameter::Value::plus_i)[0] == Complex(-1.0, 0.0));
  CHECK(box_time(abs_path(), 0.0, EtaParameter::Value::minus_i)[0] == Complex(1.0, 0.0));
}

TEST_CASE("velocity is box_time with the regime's eta") {
  const auto regime = ScaleRegime::uniform(0.5, 1, 0.4, 0.3, EtaParameter::Value::minus_one);
  CHECK(velocity(abs_path(regime), 0.0)[0] == Complex(0.0, -1.0));
  CHECK(velocity(power_path(2, regime), 1.0)[0] == Complex(2.0, 0.0));
  CHECK(velocity(power_path(3, regime), 2.0)[0] == Complex(12.0, 0.0));
}

TEST_CASE("box_time recombination identity") {
  std::mt19937_64 rng(11);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto eta = kEtas[trial % 4];
    const auto traj = kinked_path(rng, ScaleRegime::linear(3, eta));
    for (double t : {0.0, 0.37, -0.8}) {
      const auto b = box_time(traj, t, eta);
      const auto dp = delta_derivative(traj, t), dm = nabla_derivative(traj, t);
      const Complex ieta = Complex(0.0, 1.0) * eta.as_complex();
      for (int k = 0; k < 3; ++k)
        worst = std::max(worst, std::abs(b[k] - (0.5 * (dp[k] + dm[k]) + 0.5 * ieta * (dp[k] - dm[k]))));
    }
  }
  CHECK(worst < 1e-13);
}

TEST_CASE("trajectory domain and construction errors") {
  const auto finite = AsymptoticTrajectory::smooth([](double t) { return RealVector{t}; },
                                                   [](double) { return RealVector{1.0}; }, ScaleRegime::linear(1), 0.0, 1.0);
  CHECK_THROWS_AS(finite.position(1.5), DomainError);
  CHECK_THROWS_AS(delta_derivative(finite, 1.0), DomainError);
  CHECK_THROWS_AS(nabla_derivative(finite, 0.0), DomainError);
  CHECK(delta_derivative(finite, 0.0)[0] == 1.0);
  CHECK(nabla_derivative(finite, 1.0)[0] == 1.0);
  const auto p = [](double t) { return RealVector{t}; };
  const auto v = [](double) { return RealVector{1.0}; };
  CHECK_THROWS_AS(AsymptoticTrajectory({{0.0, 1.0, p, v}, {1.5, 2.0, p, v}}, ScaleRegime::linear(1)), InvalidArgument);
  CHECK_THROWS_AS(AsymptoticTrajectory({}, ScaleRegime::linear(1)), InvalidArgument);
  const auto wrong_dim = AsymptoticTrajectory::smooth(p, v, ScaleRegime::linear(2));
  CHECK_THROWS_AS(wrong_dim.position(0.0), InvalidArgument);
}

TEST_CASE("box of a function reduces to the total derivative in the linear regime") {
  std::mt19937_64 rng(5);
  double worst = 0.0;
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 1 + trial % 3;
    const auto sum = testing::random_exp_sum(rng, d, 3, Coefficients::complex);
    const auto f = sum.field();
    const auto traj = kinked_path(rng, ScaleRegime::linear(d, kEtas[trial % 2]));
    const double t = 0.25 + 0.5 * testing::random_time(rng);
    const auto x = traj.position(t);
    const auto v = traj.right_derivative(t);
    Complex total = sum.time_partial(t, x);
    for (int k = 0; k < d; ++k) {
      const int axis[1] = {k};
      total += v[k] * sum.partial(axis, t, x);
    }
    worst = std::max(worst, std::abs(box_of_function(f, traj, t) - total));
    // The same with explicit zero constants in a fractional regime.
    const auto zero_regime = ScaleRegime::uniform(0.5, d, 0.0, 0.0, kEtas[trial % 2]);
    const auto traj0 = kinked_path(rng, zero_regime);
    const auto x0 = traj0.position(t);
    const auto v0 = traj0.right_derivative(t);
    Complex total0 = sum.time_partial(t, x0);
    for (int k = 0; k < d; ++k) {
      const int axis[1] = {k};
      total0 += v0[k] * sum.partial(axis, t, x0);
    }
    worst = std::max(worst, std::abs(box_of_function(f, traj0, t) - total0));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("box of x^2 with a uniform diagonal constant") {
  const ScalarField f = testing::analytic_field(
      1, [](std::span<const double> x) { return x[0] * x[0]; },
      [](std::span<const double> x, std::span<Complex> g) { g[0] = 2.0 * x[0]; },
      [](std::span<const double>, std::span<Complex> h) { h[0] = 2.0; });
  const Complex lambda(0.3, -0.7);
  const auto traj = power_path(1);
  const auto tensor = LambdaTensor::uniform_diagonal(lambda, 1, 2);
  // X = t: classical part 2x at x = 1, correction lambda * 2 / 2!.
  CHECK(std::abs(box_of_function(f, traj, tensor, 1.0) - (2.0 + lambda)) < 1e-15);
  const auto fd = ScalarField(1, [](double, std::span<const double> x) { return Complex(x[0] * x[0]); });
  CHECK(std::abs(box_of_function(fd, traj, tensor, 1.0) - (2.0 + lambda)) < 1e-6);
}

TEST_CASE("box of f(t, x) = t is 1 in every regime") {
  const auto f = ScalarField::of_time(2, [](double t) { return Complex(t); }, [](double) { return Complex(1.0); });
  std::mt19937_64 rng(1);
  for (auto eta : kEtas)
    for (double alpha : {1.0, 0.5, 0.34, 0.25}) {
      const auto traj = kinked_path(rng, random_regime(rng, 2, eta, alpha));
      CHECK(box_of_function(f, traj, 0.4) == Complex(1.0));
      CHECK(delta_of_function(f, traj, 0.4) == Complex(1.0));
      CHECK(nabla_of_function(f, traj, 0.4) == Complex(1.0));
    }
}

TEST_CASE("one-sided function derivatives of x^2") {
  const ScalarField f = testing::analytic_field(
      1, [](std::span<const double> x) { return x[0] * x[0]; },
      [](std::span<const double> x, std::span<Complex> g) { g[0] = 2.0 * x[0]; },
      [](std::span<const double>, std::span<Complex> h) { h[0] = 2.0; });
  const double lp = 0.3, lm = 0.2;
  const auto traj = abs_path(ScaleRegime::uniform(0.5, 1, lp, lm, EtaParameter::Value::minus_one));
  // At t = 1 on the right branch: x = 1, slope 1.
  CHECK(std::abs(delta_of_function(f, traj, 1.0) - (2.0 + lp * lp)) < 1e-15);
  CHECK(std::abs(nabla_of_function(f, traj, 1.0) - (2.0 - lm * lm)) < 1e-15);
  // At the kink x = 0, so only the corrections remain.
  CHECK(std::abs(delta_of_function(f, traj, 0.0) - lp * lp) < 1e-15);
  CHECK(std::abs(nabla_of_function(f, traj, 0.0) + lm * lm) < 1e-15);
  const auto linear = abs_path();
  CHECK(delta_of_function(f, linear, 1.0) == Complex(2.0));
  CHECK(nabla_of_function(f, linear, 1.0) == Complex(2.0));
}

TEST_CASE("box of a function recombines its one-sided derivatives") {
  std::mt19937_64 rng(21);
  double worst = 0.0;
  for (int trial = 0; trial < 40; ++trial) {
    const auto eta = kEtas[trial % 4];
    const int d = 1 + trial % 3;
    const double alpha = trial % 2 ? 0.5 : 0.34;
    const auto traj = kinked_path(rng, random_regime(rng, d, eta, alpha));
    const auto f = testing::random_exp_sum(rng, d, 3, Coefficients::complex).values_only();
    for (double t : {0.0, 0.6}) {
      const Complex b = box_of_function(f, traj, t);
      const Complex dp = delta_of_function(f, traj, t), dm = nabla_of_function(f, traj, t);
      const Complex ieta = Complex(0.0, 1.0) * eta.as_complex();
      worst = std::max(worst, std::abs(b - (0.5 * (dp + dm) + 0.5 * ieta * (dp - dm))));
    }
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("box of a function is linear") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double worst = 0.0;
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 1 + trial % 3;
    const auto traj = kinked_path(rng, random_regime(rng, d, kEtas[trial % 4], trial % 2 ? 0.5 : 0.3));
    const auto f = testing::random_exp_sum(rng, d, 3, Coefficients::complex).field();
    const auto g = testing::random_exp_sum(rng, d, 3, Coefficients::complex).field();
    const Complex a(u(rng), u(rng)), b(u(rng), u(rng));
    const auto combo = a * f + b * g;
    for (const auto& engine : {DiffEngine{}, order4()}) {
      const Complex lhs = box_of_function(combo, traj, 0.3, engine);
      const Complex rhs = a * box_of_function(f, traj, 0.3, engine) + b * box_of_function(g, traj, 0.3, engine);
      worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("vector box of a function acts componentwise") {
  std::mt19937_64 rng(2);
  const auto traj = kinked_path(rng, random_regime(rng, 2, EtaParameter::Value::minus_one));
  const auto f0 = testing::random_exp_sum(rng, 2, 2, Coefficients::complex).field();
  const auto f1 = testing::random_exp_sum(rng, 2, 2, Coefficients::complex).field();
  const VectorField F({f0, f1});
  const auto v = box_of_function(F, traj, 0.2);
  CHECK(v[0] == box_of_function(f0, traj, 0.2));
  CHECK(v[1] == box_of_function(f1, traj, 0.2));
}

TEST_CASE("correction orders above four are unsupported") {
  const auto regime = ScaleRegime::uniform(0.2, 1, 0.1, 0.1, EtaParameter::Value::minus_one);
  const auto traj = power_path(1, regime);
  const auto f = ScalarField::constant(1, 1.0);
  CHECK_THROWS_AS(box_of_function(f, traj, 0.5), Unsupported);
  const auto wrong = ScalarField::constant(2, 1.0);
  CHECK_THROWS_AS(box_of_function(wrong, power_path(1), 0.5), InvalidArgument);
}

TEST_CASE("Newton residual") {
  const VectorField V({ScalarField::constant(3, Complex(0.5, -0.2)), ScalarField::constant(3, 1.0),
                       ScalarField::constant(3, Complex(0.0, 3.0))});
  const auto U = ScalarField::constant(3, 0.0);
  const std::array<double, 3> x{0.3, -1.0, 2.0};
  const auto lambda = LambdaTensor::uniform_diagonal(Complex(0.0, -1.0), 3, 2);
  CHECK(max_abs(newton_residual(V, U, lambda, 1.7, 0.0, x)) == 0.0);

  const double gm = 1.3, m = 0.8;
  const auto W = circular_velocity(gm);
  const auto potential = kepler_potential(gm, m);
  const auto zero = LambdaTensor::zero(3, 2);
  for (double rho : {0.5, 1.0, 3.0}) {
    const std::array<double, 3> p{rho * 0.6, rho * 0.8, 0.0};
    const auto res = newton_residual(W, potential, zero, m, 0.0, p, order4());
    const double scale = gm * m / (rho * rho);
    CHECK(max_abs(res) / scale < 1e-8);
  }
  const std::array<double, 2> bad{1.0, 1.0};
  CHECK_THROWS(newton_residual(V, ScalarField::constant(2, 0.0), lambda, 1.0, 0.0, bad));
}

TEST_CASE("box-squared moment of inertia") {
  const ComplexVector v0{Complex(0.5, -0.2), 1.0, Complex(0.0, 3.0)};
  const VectorField V({ScalarField::constant(3, v0[0]), ScalarField::constant(3, v0[1]), ScalarField::constant(3, v0[2])});
  const auto straight = AsymptoticTrajectory::smooth(
      [](double t) { return RealVector{t, 2.0 * t, -t}; }, [](double) { return RealVector{1.0, 2.0, -1.0}; },
      ScaleRegime::uniform(0.5, 3, 0.4, 0.6, EtaParameter::Value::minus_one));
  const double m = 1.5;
  const Complex expected = 2.0 * m * bilinear_dot(v0, v0);
  CHECK(std::abs(box_squared_inertia(straight, V, Complex(0.1, -1.0), m, 0.7) - expected) < 1e-12);
  const std::array<double, 3> x{0.2, 0.4, 0.1};
  CHECK(std::abs(box_squared_inertia_eulerian(V, Complex(0.1, -1.0), m, 0.0, x) - expected) < 1e-12);

  // Classical circular orbit: r^2 is constant, so d^2(m r^2)/dt^2 = 0.
  const double gm = 2.0, rho = 1.7;
  const double omega = std::sqrt(gm / (rho * rho * rho));
  const auto orbit = AsymptoticTrajectory::smooth(
      [=](double t) { return RealVector{rho * std::cos(omega * t), rho * std::sin(omega * t), 0.0}; },
      [=](double t) { return RealVector{-rho * omega * std::sin(omega * t), rho * omega * std::cos(omega * t), 0.0}; },
      ScaleRegime::linear(3));
  const double scale = 2.0 * m * gm / rho;
  for (double t : {0.0, 0.9, 4.2}) {
    CHECK(std::abs(box_squared_inertia(orbit, circular_velocity(gm), 0.0, m, t, order4())) / scale < 1e-9);
  }
  CHECK_THROWS_AS(box_squared_inertia(power_path(1), V, 0.0, m, 0.0), InvalidArgument);
}

TEST_CASE("bilinear dot product does not conjugate") {
  const ComplexVector a{Complex(0.0, 1.0)}, b{Complex(0.0, 1.0)};
  CHECK(bilinear_dot(a, b) == Complex(-1.0));
  const ComplexVector c{1.0, 2.0};
  CHECK_THROWS_AS(bilinear_dot(a, c), InvalidArgument);
}
