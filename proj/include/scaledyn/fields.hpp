#pragma once

// Scalar, vector and one-dimensional fields with analytic or finite-difference calculus.

#include <complex>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "scaledyn/scale_regime.hpp"

namespace scaledyn {

using RealVector = std::vector<double>;
using ComplexVector = std::vector<Complex>;

/// Where a field may be evaluated: all of R^d, an axis-aligned box, or a radial shell a <= |x| <= b.
class Domain {
 public:
  enum class Kind { unbounded, box, radial };

  static Domain unbounded() { return Domain(Kind::unbounded, {}, {}); }
  static Domain box(RealVector lower, RealVector upper);
  static Domain radial(double r_min, double r_max = std::numeric_limits<double>::infinity());

  Kind kind() const { return kind_; }
  /// True if every point within `margin[k]` of x along each axis lies in the domain.
  bool contains(std::span<const double> x, std::span<const double> margin) const;
  bool contains(std::span<const double> x) const;

 private:
  Domain(Kind kind, RealVector lower, RealVector upper) : kind_(kind), lower_(std::move(lower)), upper_(std::move(upper)) {}

  Kind kind_;
  RealVector lower_;
  RealVector upper_;
};

/// Real function of one variable with optional analytic first and second derivatives.
/// Used for radial profiles R(r) and the angular factors Theta, Phi.
class Field1D {
 public:
  using Fn = std::function<double(double)>;

  explicit Field1D(Fn value, double lower = -std::numeric_limits<double>::infinity(),
                   double upper = std::numeric_limits<double>::infinity());

  Field1D& with_derivatives(Fn first, Fn second);

  double operator()(double s) const;
  bool has_derivatives() const { return static_cast<bool>(first_); }
  double analytic_first(double s) const { return first_(s); }
  double analytic_second(double s) const { return second_(s); }
  double lower() const { return lower_; }
  double upper() const { return upper_; }
  bool contains(double s, double margin = 0.0) const { return s - margin >= lower_ && s + margin <= upper_; }

  static Field1D constant(double c);
  /// ln f; analytic derivatives propagate when f has them.
  static Field1D log_of(const Field1D& f);

 private:
  Fn value_;
  Fn first_;
  Fn second_;
  double lower_;
  double upper_;
};

/// Complex field f(t, x) over R^d. Analytic partials are optional; when present
/// DiffEngine uses them instead of finite differences.
class ScalarField {
 public:
  using ValueFn = std::function<Complex(double, std::span<const double>)>;
  /// Writes d entries (gradient) or d*d row-major entries (Hessian) into `out`.
  using PartialsFn = std::function<void(double, std::span<const double>, std::span<Complex>)>;

  ScalarField(int dimension, ValueFn value, Domain domain = Domain::unbounded());

  ScalarField& with_time_derivative(ValueFn dt);
  ScalarField& with_gradient(PartialsFn gradient);
  /// Requires a gradient to have been attached.
  ScalarField& with_hessian(PartialsFn hessian);

  int dimension() const { return impl_->dimension; }
  const Domain& domain() const { return impl_->domain; }
  Complex operator()(double t, std::span<const double> x) const;

  bool has_time_derivative() const { return static_cast<bool>(impl_->dt); }
  bool has_gradient() const { return static_cast<bool>(impl_->gradient); }
  bool has_hessian() const { return static_cast<bool>(impl_->hessian); }

  Complex analytic_time_derivative(double t, std::span<const double> x) const;
  ComplexVector analytic_gradient(double t, std::span<const double> x) const;
  ComplexVector analytic_hessian(double t, std::span<const double> x) const;

  static ScalarField constant(int dimension, Complex c);
  /// f(t, x) = g(t); spatial partials vanish identically.
  static ScalarField of_time(int dimension, std::function<Complex(double)> g, std::function<Complex(double)> dg);
  /// f(x) = profile(|x|) with analytic Cartesian partials built from the profile's derivatives.
  static ScalarField radial(int dimension, const Field1D& profile);
  /// e^f, with partials from the chain rule.
  static ScalarField exp_of(const ScalarField& f);

  friend ScalarField operator+(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator-(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator*(Complex c, const ScalarField& f);
  /// Pointwise product with the product rule for every attached partial.
  friend ScalarField operator*(const ScalarField& a, const ScalarField& b);

 private:
  struct Impl {
    int dimension;
    Domain domain;
    ValueFn value;
    ValueFn dt;
    PartialsFn gradient;
    PartialsFn hessian;
  };
  explicit ScalarField(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}
  Impl& mutable_impl();

  std::shared_ptr<const Impl> impl_;
};

/// d component scalar fields.
class VectorField {
 public:
  explicit VectorField(std::vector<ScalarField> components);

  int dimension() const { return static_cast<int>(components_.size()); }
  const ScalarField& operator[](int k) const { return components_[k]; }
  ComplexVector operator()(double t, std::span<const double> x) const;

  /// Component k = d f / d x_k, analytic when f carries a Hessian.
  static VectorField gradient_of(const ScalarField& f, double scale = 1.0);

 private:
  std::vector<ScalarField> components_;
};

struct DiffOptions {
  /// Accuracy order of the central stencils: 2 or 4.
  int stencil_order = 2;
  /// Fixed step; unset means eps^{1/(n+p)} * max(1, |x|) per axis for an n-th derivative.
  std::optional<double> base_step;
  /// Ignore analytic partials and always difference numerically.
  bool use_analytic = true;
};

/// Differential calculus on fields. Cartesian operators act on ScalarField/VectorField,
/// radial ones on Field1D profiles of spherically symmetric fields in R^3.
class DiffEngine {
 public:
  explicit DiffEngine(DiffOptions options = {});

  const DiffOptions& options() const { return options_; }

  Complex time_derivative(const ScalarField& f, double t, std::span<const double> x) const;
  ComplexVector gradient(const ScalarField& f, double t, std::span<const double> x) const;
  ComplexVector hessian(const ScalarField& f, double t, std::span<const double> x) const;
  Complex laplacian(const ScalarField& f, double t, std::span<const double> x) const;
  /// d^n f / dx_{axes[0]} ... dx_{axes[n-1]}, 0-based axes, 1 <= n <= 4. Orders above the
  /// attached analytic partials difference the highest one available.
  Complex mixed_partial(const ScalarField& f, std::span<const int> axes, double t, std::span<const double> x) const;

  Complex divergence(const VectorField& v, double t, std::span<const double> x) const;
  /// J[i*d + k] = d v_i / d x_k.
  ComplexVector jacobian(const VectorField& v, double t, std::span<const double> x) const;
  ComplexVector vector_laplacian(const VectorField& v, double t, std::span<const double> x) const;

  /// n-th derivative (n = 1, 2) of a 1D field.
  double derivative(const Field1D& f, double s, int n) const;
  /// f'' + (2/r) f', the Laplacian of f(|x|) in R^3. Requires r >= 2h.
  double radial_laplacian(const Field1D& f, double r) const;

  /// Step used for an n-th derivative at coordinate value `at`.
  double step(double at, int derivative_order) const;

 private:
  DiffOptions options_;
};

}  // namespace scaledyn
