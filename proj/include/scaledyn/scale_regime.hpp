#pragma once

// Scale-regime parameters and the complex algebra of the comparison constants.

#include <complex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace scaledyn {

using Complex = std::complex<double>;

/// The constant eta of the box derivative, one of {+1, -1, +i, -i}.
class EtaParameter {
 public:
  enum class Value { plus_one, minus_one, plus_i, minus_i };

  constexpr EtaParameter() = default;
  constexpr EtaParameter(Value v) : value_(v) {}  // NOLINT(google-explicit-constructor)

  /// Accepts "+1", "1", "-1", "+i", "i", "-i".
  static EtaParameter parse(std::string_view text);

  constexpr Value value() const { return value_; }
  constexpr bool is_real() const { return value_ == Value::plus_one || value_ == Value::minus_one; }

  Complex as_complex() const;
  /// eta^2: +1 for +-1, -1 for +-i.
  constexpr double squared() const { return is_real() ? 1.0 : -1.0; }
  /// The value of a real eta; throws Unsupported for +-i.
  double real_value() const;
  std::string to_string() const;

  friend constexpr bool operator==(EtaParameter, EtaParameter) = default;

 private:
  Value value_ = Value::minus_one;
};

/// A complex number written as re + i*eta*im.
struct EtaDecomposition {
  double re_part = 0.0;
  double im_part = 0.0;
  EtaParameter eta;

  Complex as_complex() const { return Complex(re_part, 0.0) + Complex(0.0, 1.0) * eta.as_complex() * im_part; }

  /// Inverse of as_complex for real eta. The decomposition is not unique for
  /// eta = +-i, so that case throws Unsupported.
  static EtaDecomposition from_complex(Complex value, EtaParameter eta);
};

/// Integer part of 1/alpha for alpha in (0, 1].
int j_alpha_of(double alpha);

/// Fractional scale regime of order alpha with per-axis comparison constants.
/// alpha == 1 is the linear (differentiable) regime; every lambda correction
/// downstream is then zero regardless of the stored constants.
class ScaleRegime {
 public:
  ScaleRegime(double alpha, std::vector<double> lambda_plus, std::vector<double> lambda_minus, EtaParameter eta);

  /// Same constants on every axis.
  static ScaleRegime uniform(double alpha, int dimension, double lambda_plus, double lambda_minus, EtaParameter eta);
  static ScaleRegime linear(int dimension, EtaParameter eta = EtaParameter{});

  double alpha() const { return alpha_; }
  int j_alpha() const { return j_alpha_; }
  int dimension() const { return static_cast<int>(lambda_plus_.size()); }
  std::span<const double> lambda_plus() const { return lambda_plus_; }
  std::span<const double> lambda_minus() const { return lambda_minus_; }
  EtaParameter eta() const { return eta_; }
  bool is_linear() const { return alpha_ == 1.0; }

  /// key=value lines: alpha, eta, lambda_plus, lambda_minus (comma separated).
  std::string serialize() const;
  static ScaleRegime parse(std::string_view text);

 private:
  double alpha_;
  int j_alpha_;
  std::vector<double> lambda_plus_;
  std::vector<double> lambda_minus_;
  EtaParameter eta_;
};

/// lambda_{k1..kj} = 1/2 (prod l+ + (-1)^{j-1} prod l-) + i eta/2 (prod l+ + (-1)^j prod l-).
/// Axes are 0-based; the index length must equal j_alpha.
Complex combine_lambda(const ScaleRegime& regime, std::span<const int> index);

/// Uniform independent-component constant (l+ - l-)/2 + i eta (l+ + l-)/2.
/// This linear form is the one used by the Kepler pipeline.
Complex diagonal_lambda(double lambda_plus, double lambda_minus, EtaParameter eta);

/// Coefficients lambda_{k1..kj} of an order-j correction sum over R^d.
///
/// terms() exposes the sum grouped by distinct sorted multi-index, each weight
/// already summed over permutations and divided by j!, so that
///   sum_{k1..kj} lambda_{k1..kj}/j! d^j f/dx_k1..dx_kj == sum_terms weight * partial(axes).
class LambdaTensor {
 public:
  struct Term {
    std::vector<int> axes;
    Complex weight;
  };

  /// Product form lambda_{k1..kj} of combine_lambda (zero for the linear regime).
  static LambdaTensor from_regime(const ScaleRegime& regime);
  /// lambda * delta_{k1..kj}: only the pure axis derivatives d^j/dx_k^j survive.
  static LambdaTensor uniform_diagonal(Complex lambda, int dimension, int order);
  /// scale * prod_i w_{k_i}.  delta_of_function uses (lambda+, +1), nabla_of_function (lambda-, (-1)^{j-1}).
  static LambdaTensor outer_product(std::span<const double> weights, int order, double scale);
  static LambdaTensor zero(int dimension, int order);

  int order() const { return order_; }
  int dimension() const { return dimension_; }
  Complex operator()(std::span<const int> index) const;
  std::span<const Term> terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

 private:
  LambdaTensor(int dimension, int order, std::vector<Complex> dense);

  int dimension_;
  int order_;
  std::vector<Complex> dense_;
  std::vector<Term> terms_;
};

}  // namespace scaledyn
