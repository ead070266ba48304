#include "scaledyn/scale_regime.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

#include "scaledyn/error.hpp"
#include "text_util.hpp"

namespace scaledyn {

EtaParameter EtaParameter::parse(std::string_view text) {
  const auto s = detail::trim(text);
  if (s == "+1" || s == "1") return Value::plus_one;
  if (s == "-1") return Value::minus_one;
  if (s == "+i" || s == "i") return Value::plus_i;
  if (s == "-i") return Value::minus_i;
  throw InvalidArgument("eta must be one of +1, -1, +i, -i (got '" + std::string(s) + "')");
}

Complex EtaParameter::as_complex() const {
  switch (value_) {
    case Value::plus_one: return {1.0, 0.0};
    case Value::minus_one: return {-1.0, 0.0};
    case Value::plus_i: return {0.0, 1.0};
    case Value::minus_i: return {0.0, -1.0};
  }
  return {};
}

double EtaParameter::real_value() const {
  if (!is_real()) throw Unsupported("eta = " + to_string() + " has no real value; real/imaginary splits need eta = +-1");
  return value_ == Value::plus_one ? 1.0 : -1.0;
}

std::string EtaParameter::to_string() const {
  switch (value_) {
    case Value::plus_one: return "+1";
    case Value::minus_one: return "-1";
    case Value::plus_i: return "+i";
    case Value::minus_i: return "-i";
  }
  return "?";
}

EtaDecomposition EtaDecomposition::from_complex(Complex value, EtaParameter eta) {
  // value = re + i*eta*im with eta = +-1  =>  im = eta * Im(value)
  const double e = eta.real_value();
  return {value.real(), e * value.imag(), eta};
}

int j_alpha_of(double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0) throw DomainError("alpha must lie in (0, 1]");
  return static_cast<int>(std::floor(1.0 / alpha));
}

ScaleRegime::ScaleRegime(double alpha, std::vector<double> lambda_plus, std::vector<double> lambda_minus,
                         EtaParameter eta)
    : alpha_(alpha),
      j_alpha_(j_alpha_of(alpha)),
      lambda_plus_(std::move(lambda_plus)),
      lambda_minus_(std::move(lambda_minus)),
      eta_(eta) {
  if (lambda_plus_.empty()) throw InvalidArgument("scale regime needs dimension >= 1");
  if (lambda_plus_.size() != lambda_minus_.size())
    throw InvalidArgument("lambda_plus and lambda_minus must have the same length");
}

ScaleRegime ScaleRegime::uniform(double alpha, int dimension, double lambda_plus, double lambda_minus,
                                 EtaParameter eta) {
  if (dimension < 1) throw InvalidArgument("scale regime needs dimension >= 1");
  return ScaleRegime(alpha, std::vector<double>(dimension, lambda_plus), std::vector<double>(dimension, lambda_minus),
                     eta);
}

ScaleRegime ScaleRegime::linear(int dimension, EtaParameter eta) { return uniform(1.0, dimension, 0.0, 0.0, eta); }

namespace {

std::string join(std::span<const double> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += detail::format_double(values[i]);
  }
  return out;
}

std::vector<double> split_doubles(std::string_view text, std::string_view key) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    out.push_back(detail::parse_double(piece, key));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::string ScaleRegime::serialize() const {
  std::string out;
  out += "alpha=" + detail::format_double(alpha_) + "\n";
  out += "eta=" + eta_.to_string() + "\n";
  out += "lambda_plus=" + join(lambda_plus_) + "\n";
  out += "lambda_minus=" + join(lambda_minus_) + "\n";
  return out;
}

ScaleRegime ScaleRegime::parse(std::string_view text) {
  std::map<std::string, std::string, std::less<>> kv;
  for (const auto& [key, value] : detail::parse_key_values(text)) kv[key] = value;
  for (const char* required : {"alpha", "eta", "lambda_plus", "lambda_minus"})
    if (!kv.contains(required)) throw InvalidArgument(std::string("regime text is missing key '") + required + "'");
  for (const auto& [key, value] : kv)
    if (key != "alpha" && key != "eta" && key != "lambda_plus" && key != "lambda_minus")
      throw InvalidArgument("unknown regime key '" + key + "'");
  return ScaleRegime(detail::parse_double(kv["alpha"], "alpha"), split_doubles(kv["lambda_plus"], "lambda_plus"),
                     split_doubles(kv["lambda_minus"], "lambda_minus"), EtaParameter::parse(kv["eta"]));
}

Complex combine_lambda(const ScaleRegime& regime, std::span<const int> index) {
  const int j = regime.j_alpha();
  if (static_cast<int>(index.size()) != j)
    throw InvalidArgument("multi-index length must equal j_alpha = " + std::to_string(j));
  // Sorted so the products are bitwise independent of index order.
  std::vector<int> sorted(index.begin(), index.end());
  std::sort(sorted.begin(), sorted.end());
  double prod_plus = 1.0;
  double prod_minus = 1.0;
  for (const int k : sorted) {
    if (k < 0 || k >= regime.dimension()) throw InvalidArgument("multi-index entry out of range");
    prod_plus *= regime.lambda_plus()[k];
    prod_minus *= regime.lambda_minus()[k];
  }
  if (regime.is_linear()) return {0.0, 0.0};
  const double sign_re = (j % 2 == 1) ? 1.0 : -1.0;  // (-1)^{j-1}
  const double re = 0.5 * (prod_plus + sign_re * prod_minus);
  const double im = 0.5 * (prod_plus - sign_re * prod_minus);  // (-1)^j = -(-1)^{j-1}
  return Complex(re, 0.0) + Complex(0.0, 1.0) * regime.eta().as_complex() * im;
}

Complex diagonal_lambda(double lambda_plus, double lambda_minus, EtaParameter eta) {
  const double re = 0.5 * (lambda_plus - lambda_minus);
  const double im = 0.5 * (lambda_plus + lambda_minus);
  return Complex(re, 0.0) + Complex(0.0, 1.0) * eta.as_complex() * im;
}

namespace {

std::size_t power(int base, int exponent) {
  std::size_t out = 1;
  for (int i = 0; i < exponent; ++i) out *= static_cast<std::size_t>(base);
  return out;
}

void unflatten(std::size_t flat, int dimension, int order, std::vector<int>& index) {
  index.resize(order);
  for (int i = order - 1; i >= 0; --i) {
    index[i] = static_cast<int>(flat % dimension);
    flat /= dimension;
  }
}

double factorial(int n) {
  double out = 1.0;
  for (int i = 2; i <= n; ++i) out *= i;
  return out;
}

}  // namespace

LambdaTensor::LambdaTensor(int dimension, int order, std::vector<Complex> dense)
    : dimension_(dimension), order_(order), dense_(std::move(dense)) {
  std::map<std::vector<int>, Complex> grouped;
  std::vector<int> index;
  for (std::size_t flat = 0; flat < dense_.size(); ++flat) {
    if (dense_[flat] == Complex{}) continue;
    unflatten(flat, dimension_, order_, index);
    std::sort(index.begin(), index.end());
    grouped[index] += dense_[flat];
  }
  const double inv_fact = 1.0 / factorial(order_);
  for (auto& [axes, sum] : grouped)
    if (sum != Complex{}) terms_.push_back({axes, sum * inv_fact});
}

LambdaTensor LambdaTensor::from_regime(const ScaleRegime& regime) {
  const int d = regime.dimension();
  const int j = regime.j_alpha();
  std::vector<Complex> dense(power(d, j));
  std::vector<int> index;
  for (std::size_t flat = 0; flat < dense.size(); ++flat) {
    unflatten(flat, d, j, index);
    dense[flat] = combine_lambda(regime, index);
  }
  return LambdaTensor(d, j, std::move(dense));
}

LambdaTensor LambdaTensor::uniform_diagonal(Complex lambda, int dimension, int order) {
  if (dimension < 1 || order < 1) throw InvalidArgument("lambda tensor needs dimension >= 1 and order >= 1");
  std::vector<Complex> dense(power(dimension, order));
  std::vector<int> index;
  for (std::size_t flat = 0; flat < dense.size(); ++flat) {
    unflatten(flat, dimension, order, index);
    if (std::all_of(index.begin(), index.end(), [&](int k) { return k == index.front(); })) dense[flat] = lambda;
  }
  return LambdaTensor(dimension, order, std::move(dense));
}

LambdaTensor LambdaTensor::outer_product(std::span<const double> weights, int order, double scale) {
  const int d = static_cast<int>(weights.size());
  if (d < 1 || order < 1) throw InvalidArgument("lambda tensor needs dimension >= 1 and order >= 1");
  std::vector<Complex> dense(power(d, order));
  std::vector<int> index;
  for (std::size_t flat = 0; flat < dense.size(); ++flat) {
    unflatten(flat, d, order, index);
    double p = scale;
    for (int k : index) p *= weights[k];
    dense[flat] = p;
  }
  return LambdaTensor(d, order, std::move(dense));
}

LambdaTensor LambdaTensor::zero(int dimension, int order) {
  if (dimension < 1 || order < 1) throw InvalidArgument("lambda tensor needs dimension >= 1 and order >= 1");
  return LambdaTensor(dimension, order, std::vector<Complex>(power(dimension, order)));
}

Complex LambdaTensor::operator()(std::span<const int> index) const {
  if (static_cast<int>(index.size()) != order_) throw InvalidArgument("multi-index length must equal tensor order");
  std::size_t flat = 0;
  for (int k : index) {
    if (k < 0 || k >= dimension_) throw InvalidArgument("multi-index entry out of range");
    flat = flat * dimension_ + static_cast<std::size_t>(k);
  }
  return dense_[flat];
}

}  // namespace scaledyn
