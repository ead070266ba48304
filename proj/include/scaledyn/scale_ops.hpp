#pragma once

// Delta/nabla/box derivatives of asymptotic trajectories and of functions
// evaluated along them, the asymptotic Newton residual and the box-squared
// moment of inertia.

#include <functional>
#include <limits>
#include <vector>

#include "scaledyn/fields.hpp"
#include "scaledyn/scale_regime.hpp"

namespace scaledyn {

/// Regular part X*(t) of an asymptotic model, piecewise C^1 with explicit
/// breakpoints. The deviant part is represented only by its scale regime.
class AsymptoticTrajectory {
 public:
  using PathFn = std::function<RealVector(double)>;

  /// One smooth piece on [t_begin, t_end]; `velocity` is dX*/dt on that piece.
  struct Segment {
    double t_begin;
    double t_end;
    PathFn position;
    PathFn velocity;
  };

  /// Segments must be contiguous (t_end of one equals t_begin of the next).
  AsymptoticTrajectory(std::vector<Segment> segments, ScaleRegime deviant);

  static AsymptoticTrajectory smooth(PathFn position, PathFn velocity, ScaleRegime deviant,
                                     double t_begin = -std::numeric_limits<double>::infinity(),
                                     double t_end = std::numeric_limits<double>::infinity());

  int dimension() const { return regime_.dimension(); }
  const ScaleRegime& regime() const { return regime_; }
  double t_begin() const { return segments_.front().t_begin; }
  double t_end() const { return segments_.back().t_end; }

  RealVector position(double t) const;
  /// d+/dt X*: derivative of the segment starting at or containing t.
  RealVector right_derivative(double t) const;
  /// d-/dt X*: derivative of the segment ending at or containing t.
  RealVector left_derivative(double t) const;

 private:
  std::vector<Segment> segments_;
  ScaleRegime regime_;
};

RealVector delta_derivative(const AsymptoticTrajectory& traj, double t);
RealVector nabla_derivative(const AsymptoticTrajectory& traj, double t);

/// 1/2 (d+ + d-) + i eta/2 (d+ - d-) applied to X*.
ComplexVector box_time(const AsymptoticTrajectory& traj, double t, EtaParameter eta);

/// V = box_time(X*) with the trajectory's own eta.
ComplexVector velocity(const AsymptoticTrajectory& traj, double t);

/// Eulerian form: df/dt + w . grad f + sum_k lambda_{k..}/j! d^j f, at a fixed
/// point x with convecting velocity w.
Complex box_eulerian(const ScalarField& f, std::span<const Complex> convecting, const LambdaTensor& lambda, double t,
                     std::span<const double> x, const DiffEngine& engine = DiffEngine{});

/// box f(t, X) along a trajectory, with the lambda coefficients of the trajectory's regime.
Complex box_of_function(const ScalarField& f, const AsymptoticTrajectory& traj, double t,
                        const DiffEngine& engine = DiffEngine{});
/// Same with explicit coefficients (e.g. the uniform diagonal constant).
Complex box_of_function(const ScalarField& f, const AsymptoticTrajectory& traj, const LambdaTensor& lambda, double t,
                        const DiffEngine& engine = DiffEngine{});
ComplexVector box_of_function(const VectorField& f, const AsymptoticTrajectory& traj, double t,
                              const DiffEngine& engine = DiffEngine{});

/// One-sided analogues with lambda+ products and (-1)^{j-1} lambda- products.
Complex delta_of_function(const ScalarField& f, const AsymptoticTrajectory& traj, double t,
                          const DiffEngine& engine = DiffEngine{});
Complex nabla_of_function(const ScalarField& f, const AsymptoticTrajectory& traj, double t,
                          const DiffEngine& engine = DiffEngine{});

/// m box V + grad U with V convected by itself; zero where m box V = -grad U holds.
ComplexVector newton_residual(const VectorField& V, const ScalarField& U, const LambdaTensor& lambda, double m,
                              double t, std::span<const double> x, const DiffEngine& engine = DiffEngine{});

/// box^2 I for I = m X^2 at X = X*(t) with order-2 uniform constant lambda:
///   2m V.V + 2m X.[box/box t V + lambda/2 Lap V] + 2m lambda div V,
/// V taken from the field at X, box/box t V convected by the trajectory's box velocity.
Complex box_squared_inertia(const AsymptoticTrajectory& traj, const VectorField& V, Complex lambda, double m, double t,
                            const DiffEngine& engine = DiffEngine{});
/// The same combination at a fixed point, V convected by itself.
Complex box_squared_inertia_eulerian(const VectorField& V, Complex lambda, double m, double t,
                                     std::span<const double> x, const DiffEngine& engine = DiffEngine{});

/// Bilinear (not Hermitian) dot product sum a_k b_k.
Complex bilinear_dot(std::span<const Complex> a, std::span<const Complex> b);

}  // namespace scaledyn
