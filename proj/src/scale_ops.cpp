#include "scaledyn/scale_ops.hpp"

#include <cmath>

#include "scaledyn/error.hpp"

namespace scaledyn {

AsymptoticTrajectory::AsymptoticTrajectory(std::vector<Segment> segments, ScaleRegime deviant)
    : segments_(std::move(segments)), regime_(std::move(deviant)) {
  if (segments_.empty()) throw InvalidArgument("trajectory needs at least one segment");
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto& s = segments_[i];
    if (!s.position || !s.velocity) throw InvalidArgument("trajectory segments need position and velocity");
    if (!(s.t_begin < s.t_end)) throw InvalidArgument("trajectory segment needs t_begin < t_end");
    if (i > 0 && segments_[i - 1].t_end != s.t_begin) throw InvalidArgument("trajectory segments must be contiguous");
  }
}

AsymptoticTrajectory AsymptoticTrajectory::smooth(PathFn position, PathFn velocity, ScaleRegime deviant, double t_begin,
                                                  double t_end) {
  return AsymptoticTrajectory({Segment{t_begin, t_end, std::move(position), std::move(velocity)}}, std::move(deviant));
}

namespace {

RealVector checked(RealVector v, int d) {
  if (static_cast<int>(v.size()) != d) throw InvalidArgument("trajectory value dimension does not match its regime");
  return v;
}

}  // namespace

RealVector AsymptoticTrajectory::position(double t) const {
  for (const auto& s : segments_)
    if (t >= s.t_begin && t <= s.t_end) return checked(s.position(t), dimension());
  throw DomainError("t outside the trajectory domain");
}

RealVector AsymptoticTrajectory::right_derivative(double t) const {
  for (const auto& s : segments_)
    if (t >= s.t_begin && t < s.t_end) return checked(s.velocity(t), dimension());
  throw DomainError("right derivative needs t in [t_begin, t_end)");
}

RealVector AsymptoticTrajectory::left_derivative(double t) const {
  for (const auto& s : segments_)
    if (t > s.t_begin && t <= s.t_end) return checked(s.velocity(t), dimension());
  throw DomainError("left derivative needs t in (t_begin, t_end]");
}

RealVector delta_derivative(const AsymptoticTrajectory& traj, double t) { return traj.right_derivative(t); }
RealVector nabla_derivative(const AsymptoticTrajectory& traj, double t) { return traj.left_derivative(t); }

ComplexVector box_time(const AsymptoticTrajectory& traj, double t, EtaParameter eta) {
  const auto dp = traj.right_derivative(t);
  const auto dm = traj.left_derivative(t);
  const Complex ieta = Complex(0.0, 1.0) * eta.as_complex();
  ComplexVector out(dp.size());
  for (std::size_t k = 0; k < dp.size(); ++k) out[k] = 0.5 * (dp[k] + dm[k]) + 0.5 * ieta * (dp[k] - dm[k]);
  return out;
}

ComplexVector velocity(const AsymptoticTrajectory& traj, double t) { return box_time(traj, t, traj.regime().eta()); }

Complex bilinear_dot(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw InvalidArgument("dot product of vectors with different lengths");
  Complex s{};
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

namespace {

constexpr int kMaxCorrectionOrder = 4;

Complex correction(const ScalarField& f, const LambdaTensor& lambda, double t, std::span<const double> x,
                   const DiffEngine& engine) {
  if (lambda.dimension() != f.dimension()) throw InvalidArgument("lambda tensor dimension does not match the field");
  if (lambda.order() > kMaxCorrectionOrder) throw Unsupported("correction order j_alpha > 4 is not supported");
  Complex s{};
  for (const auto& term : lambda.terms()) s += term.weight * engine.mixed_partial(f, term.axes, t, x);
  return s;
}

/// df/dt + w . grad f
Complex convective(const ScalarField& f, std::span<const Complex> w, double t, std::span<const double> x,
                   const DiffEngine& engine) {
  if (static_cast<int>(w.size()) != f.dimension()) throw InvalidArgument("convecting velocity dimension mismatch");
  const auto g = engine.gradient(f, t, x);
  return engine.time_derivative(f, t, x) + bilinear_dot(w, g);
}

LambdaTensor regime_tensor(const ScaleRegime& regime) {
  if (regime.j_alpha() > kMaxCorrectionOrder) throw Unsupported("correction order j_alpha > 4 is not supported");
  return LambdaTensor::from_regime(regime);
}

ComplexVector real_to_complex(const RealVector& v) { return ComplexVector(v.begin(), v.end()); }

double one_sided_sign(int j) { return (j % 2 == 1) ? 1.0 : -1.0; }

}  // namespace

Complex box_eulerian(const ScalarField& f, std::span<const Complex> convecting, const LambdaTensor& lambda, double t,
                     std::span<const double> x, const DiffEngine& engine) {
  return convective(f, convecting, t, x, engine) + correction(f, lambda, t, x, engine);
}

Complex box_of_function(const ScalarField& f, const AsymptoticTrajectory& traj, const LambdaTensor& lambda, double t,
                        const DiffEngine& engine) {
  const auto x = traj.position(t);
  const auto w = velocity(traj, t);
  return box_eulerian(f, w, lambda, t, x, engine);
}

Complex box_of_function(const ScalarField& f, const AsymptoticTrajectory& traj, double t, const DiffEngine& engine) {
  return box_of_function(f, traj, regime_tensor(traj.regime()), t, engine);
}

ComplexVector box_of_function(const VectorField& f, const AsymptoticTrajectory& traj, double t,
                              const DiffEngine& engine) {
  const auto lambda = regime_tensor(traj.regime());
  ComplexVector out(f.dimension());
  for (int k = 0; k < f.dimension(); ++k) out[k] = box_of_function(f[k], traj, lambda, t, engine);
  return out;
}

Complex delta_of_function(const ScalarField& f, const AsymptoticTrajectory& traj, double t, const DiffEngine& engine) {
  const auto& regime = traj.regime();
  const auto x = traj.position(t);
  const auto w = real_to_complex(traj.right_derivative(t));
  const auto lambda = regime.is_linear() ? LambdaTensor::zero(regime.dimension(), regime.j_alpha())
                                         : LambdaTensor::outer_product(regime.lambda_plus(), regime.j_alpha(), 1.0);
  return box_eulerian(f, w, lambda, t, x, engine);
}

Complex nabla_of_function(const ScalarField& f, const AsymptoticTrajectory& traj, double t, const DiffEngine& engine) {
  const auto& regime = traj.regime();
  const auto x = traj.position(t);
  const auto w = real_to_complex(traj.left_derivative(t));
  const auto lambda = regime.is_linear() ? LambdaTensor::zero(regime.dimension(), regime.j_alpha())
                                         : LambdaTensor::outer_product(regime.lambda_minus(), regime.j_alpha(),
                                                                       one_sided_sign(regime.j_alpha()));
  return box_eulerian(f, w, lambda, t, x, engine);
}

ComplexVector newton_residual(const VectorField& V, const ScalarField& U, const LambdaTensor& lambda, double m,
                              double t, std::span<const double> x, const DiffEngine& engine) {
  const int d = V.dimension();
  if (U.dimension() != d) throw InvalidArgument("potential dimension does not match the velocity field");
  const auto w = V(t, x);
  const auto grad_u = engine.gradient(U, t, x);
  ComplexVector out(d);
  for (int k = 0; k < d; ++k) out[k] = m * box_eulerian(V[k], w, lambda, t, x, engine) + grad_u[k];
  return out;
}

namespace {

Complex inertia_combination(const VectorField& V, std::span<const Complex> convecting, Complex lambda, double m,
                            double t, std::span<const double> x, const DiffEngine& engine) {
  const int d = V.dimension();
  const auto v = V(t, x);
  const auto lap = engine.vector_laplacian(V, t, x);
  Complex x_dot{};
  for (int k = 0; k < d; ++k) {
    const Complex box_v = convective(V[k], convecting, t, x, engine);
    x_dot += x[k] * (box_v + 0.5 * lambda * lap[k]);
  }
  return 2.0 * m * bilinear_dot(v, v) + 2.0 * m * x_dot + 2.0 * m * lambda * engine.divergence(V, t, x);
}

}  // namespace

Complex box_squared_inertia(const AsymptoticTrajectory& traj, const VectorField& V, Complex lambda, double m, double t,
                            const DiffEngine& engine) {
  if (V.dimension() != traj.dimension()) throw InvalidArgument("velocity field dimension does not match trajectory");
  const auto x = traj.position(t);
  const auto w = velocity(traj, t);
  return inertia_combination(V, w, lambda, m, t, x, engine);
}

Complex box_squared_inertia_eulerian(const VectorField& V, Complex lambda, double m, double t,
                                     std::span<const double> x, const DiffEngine& engine) {
  const auto w = V(t, x);
  return inertia_combination(V, w, lambda, m, t, x, engine);
}

}  // namespace scaledyn
