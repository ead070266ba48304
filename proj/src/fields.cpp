#include "scaledyn/fields.hpp"

#include <array>
#include <cmath>

#include "scaledyn/error.hpp"

namespace scaledyn {

// ---------------------------------------------------------------- Domain

Domain Domain::box(RealVector lower, RealVector upper) {
  if (lower.size() != upper.size() || lower.empty()) throw InvalidArgument("box domain bounds must have equal, nonzero length");
  for (std::size_t k = 0; k < lower.size(); ++k)
    if (!(lower[k] < upper[k])) throw InvalidArgument("box domain needs lower < upper on every axis");
  return Domain(Kind::box, std::move(lower), std::move(upper));
}

Domain Domain::radial(double r_min, double r_max) {
  if (!(r_min >= 0.0) || !(r_min < r_max)) throw InvalidArgument("radial domain needs 0 <= r_min < r_max");
  return Domain(Kind::radial, {r_min}, {r_max});
}

bool Domain::contains(std::span<const double> x, std::span<const double> margin) const {
  switch (kind_) {
    case Kind::unbounded:
      return true;
    case Kind::box:
      if (x.size() != lower_.size()) return false;
      for (std::size_t k = 0; k < x.size(); ++k) {
        const double m = margin.empty() ? 0.0 : margin[k];
        if (x[k] - m < lower_[k] || x[k] + m > upper_[k]) return false;
      }
      return true;
    case Kind::radial: {
      double r2 = 0.0;
      double m2 = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) {
        r2 += x[k] * x[k];
        if (!margin.empty()) m2 += margin[k] * margin[k];
      }
      const double r = std::sqrt(r2);
      const double m = std::sqrt(m2);
      return r - m >= lower_[0] && r + m <= upper_[0];
    }
  }
  return false;
}

bool Domain::contains(std::span<const double> x) const { return contains(x, {}); }

// ---------------------------------------------------------------- Field1D

Field1D::Field1D(Fn value, double lower, double upper) : value_(std::move(value)), lower_(lower), upper_(upper) {
  if (!value_) throw InvalidArgument("Field1D needs a value function");
  if (!(lower_ < upper_)) throw InvalidArgument("Field1D needs lower < upper");
}

Field1D& Field1D::with_derivatives(Fn first, Fn second) {
  if (!first || !second) throw InvalidArgument("Field1D derivatives must both be provided");
  first_ = std::move(first);
  second_ = std::move(second);
  return *this;
}

double Field1D::operator()(double s) const {
  if (!contains(s)) throw DomainError("Field1D evaluated outside its domain");
  return value_(s);
}

Field1D Field1D::constant(double c) {
  Field1D f([c](double) { return c; });
  f.with_derivatives([](double) { return 0.0; }, [](double) { return 0.0; });
  return f;
}

Field1D Field1D::log_of(const Field1D& f) {
  Field1D g([f](double s) {
    const double v = f(s);
    if (!(v > 0.0)) throw DomainError("log of a non-positive field value");
    return std::log(v);
  }, f.lower(), f.upper());
  if (f.has_derivatives()) {
    g.with_derivatives([f](double s) { return f.analytic_first(s) / f(s); },
                       [f](double s) {
                         const double v = f(s);
                         const double d1 = f.analytic_first(s) / v;
                         return f.analytic_second(s) / v - d1 * d1;
                       });
  }
  return g;
}

// ---------------------------------------------------------------- ScalarField

ScalarField::ScalarField(int dimension, ValueFn value, Domain domain)
    : impl_(std::make_shared<Impl>(Impl{dimension, std::move(domain), std::move(value), {}, {}, {}})) {
  if (dimension < 1) throw InvalidArgument("ScalarField needs dimension >= 1");
  if (!impl_->value) throw InvalidArgument("ScalarField needs a value function");
}

ScalarField::Impl& ScalarField::mutable_impl() {
  // Copy-on-write: builders never mutate an Impl shared with another field.
  if (impl_.use_count() > 1) impl_ = std::make_shared<Impl>(*impl_);
  return const_cast<Impl&>(*impl_);
}

ScalarField& ScalarField::with_time_derivative(ValueFn dt) {
  mutable_impl().dt = std::move(dt);
  return *this;
}

ScalarField& ScalarField::with_gradient(PartialsFn gradient) {
  mutable_impl().gradient = std::move(gradient);
  return *this;
}

ScalarField& ScalarField::with_hessian(PartialsFn hessian) {
  if (!has_gradient()) throw InvalidArgument("attach a gradient before a Hessian");
  mutable_impl().hessian = std::move(hessian);
  return *this;
}

Complex ScalarField::operator()(double t, std::span<const double> x) const {
  if (static_cast<int>(x.size()) != impl_->dimension) throw InvalidArgument("point dimension does not match field");
  if (!impl_->domain.contains(x)) throw DomainError("field evaluated outside its domain");
  return impl_->value(t, x);
}

Complex ScalarField::analytic_time_derivative(double t, std::span<const double> x) const { return impl_->dt(t, x); }

ComplexVector ScalarField::analytic_gradient(double t, std::span<const double> x) const {
  ComplexVector g(impl_->dimension);
  impl_->gradient(t, x, g);
  return g;
}

ComplexVector ScalarField::analytic_hessian(double t, std::span<const double> x) const {
  ComplexVector h(static_cast<std::size_t>(impl_->dimension) * impl_->dimension);
  impl_->hessian(t, x, h);
  return h;
}

ScalarField ScalarField::constant(int dimension, Complex c) {
  ScalarField f(dimension, [c](double, std::span<const double>) { return c; });
  auto zero = [](double, std::span<const double>, std::span<Complex> out) { std::fill(out.begin(), out.end(), Complex{}); };
  f.with_time_derivative([](double, std::span<const double>) { return Complex{}; }).with_gradient(zero).with_hessian(zero);
  return f;
}

ScalarField ScalarField::of_time(int dimension, std::function<Complex(double)> g, std::function<Complex(double)> dg) {
  ScalarField f(dimension, [g](double t, std::span<const double>) { return g(t); });
  auto zero = [](double, std::span<const double>, std::span<Complex> out) { std::fill(out.begin(), out.end(), Complex{}); };
  f.with_gradient(zero).with_hessian(zero);
  if (dg) f.with_time_derivative([dg](double t, std::span<const double>) { return dg(t); });
  return f;
}

namespace {

double norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

Domain combined_domain(const Domain& a, const Domain& b) {
  return a.kind() == Domain::Kind::unbounded ? b : a;
}

}  // namespace

ScalarField ScalarField::radial(int dimension, const Field1D& profile) {
  const double lower = std::max(0.0, profile.lower());
  ScalarField f(dimension, [profile](double, std::span<const double> x) { return Complex(profile(norm(x)), 0.0); },
                lower == 0.0 && std::isinf(profile.upper()) ? Domain::unbounded() : Domain::radial(lower, profile.upper()));
  f.with_time_derivative([](double, std::span<const double>) { return Complex{}; });
  if (!profile.has_derivatives()) return f;
  f.with_gradient([profile](double, std::span<const double> x, std::span<Complex> out) {
    const double r = norm(x);
    if (r == 0.0) throw DomainError("radial gradient undefined at the origin");
    const double d1 = profile.analytic_first(r);
    for (std::size_t k = 0; k < x.size(); ++k) out[k] = d1 * x[k] / r;
  });
  f.with_hessian([profile](double, std::span<const double> x, std::span<Complex> out) {
    const double r = norm(x);
    if (r == 0.0) throw DomainError("radial Hessian undefined at the origin");
    const double d1 = profile.analytic_first(r);
    const double d2 = profile.analytic_second(r);
    const std::size_t d = x.size();
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        const double xx = x[i] * x[j] / (r * r);
        out[i * d + j] = d2 * xx + (d1 / r) * ((i == j ? 1.0 : 0.0) - xx);
      }
  });
  return f;
}

ScalarField ScalarField::exp_of(const ScalarField& g) {
  ScalarField f(g.dimension(), [g](double t, std::span<const double> x) { return std::exp(g(t, x)); }, g.domain());
  if (g.has_time_derivative())
    f.with_time_derivative(
        [g](double t, std::span<const double> x) { return std::exp(g(t, x)) * g.analytic_time_derivative(t, x); });
  if (g.has_gradient()) {
    f.with_gradient([g](double t, std::span<const double> x, std::span<Complex> out) {
      const Complex e = std::exp(g(t, x));
      const auto gr = g.analytic_gradient(t, x);
      for (std::size_t k = 0; k < gr.size(); ++k) out[k] = e * gr[k];
    });
  }
  if (g.has_hessian()) {
    f.with_hessian([g](double t, std::span<const double> x, std::span<Complex> out) {
      const Complex e = std::exp(g(t, x));
      const auto gr = g.analytic_gradient(t, x);
      const auto h = g.analytic_hessian(t, x);
      const std::size_t d = gr.size();
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) out[i * d + j] = e * (h[i * d + j] + gr[i] * gr[j]);
    });
  }
  return f;
}

namespace {

/// Linear combination ca*a + cb*b.
ScalarField combine(const ScalarField& a, Complex ca, const ScalarField& b, Complex cb) {
  if (a.dimension() != b.dimension()) throw InvalidArgument("field dimensions differ");
  ScalarField f(a.dimension(), [=](double t, std::span<const double> x) { return ca * a(t, x) + cb * b(t, x); },
                combined_domain(a.domain(), b.domain()));
  if (a.has_time_derivative() && b.has_time_derivative())
    f.with_time_derivative([=](double t, std::span<const double> x) {
      return ca * a.analytic_time_derivative(t, x) + cb * b.analytic_time_derivative(t, x);
    });
  if (a.has_gradient() && b.has_gradient()) {
    f.with_gradient([=](double t, std::span<const double> x, std::span<Complex> out) {
      const auto ga = a.analytic_gradient(t, x);
      const auto gb = b.analytic_gradient(t, x);
      for (std::size_t k = 0; k < ga.size(); ++k) out[k] = ca * ga[k] + cb * gb[k];
    });
    if (a.has_hessian() && b.has_hessian())
      f.with_hessian([=](double t, std::span<const double> x, std::span<Complex> out) {
        const auto ha = a.analytic_hessian(t, x);
        const auto hb = b.analytic_hessian(t, x);
        for (std::size_t k = 0; k < ha.size(); ++k) out[k] = ca * ha[k] + cb * hb[k];
      });
  }
  return f;
}

}  // namespace

ScalarField operator+(const ScalarField& a, const ScalarField& b) { return combine(a, 1.0, b, 1.0); }
ScalarField operator-(const ScalarField& a, const ScalarField& b) { return combine(a, 1.0, b, -1.0); }
ScalarField operator*(Complex c, const ScalarField& f) { return combine(f, c, ScalarField::constant(f.dimension(), 0.0), 0.0); }

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  if (a.dimension() != b.dimension()) throw InvalidArgument("field dimensions differ");
  ScalarField f(a.dimension(), [=](double t, std::span<const double> x) { return a(t, x) * b(t, x); },
                combined_domain(a.domain(), b.domain()));
  if (a.has_time_derivative() && b.has_time_derivative())
    f.with_time_derivative([=](double t, std::span<const double> x) {
      return a.analytic_time_derivative(t, x) * b(t, x) + a(t, x) * b.analytic_time_derivative(t, x);
    });
  if (a.has_gradient() && b.has_gradient()) {
    f.with_gradient([=](double t, std::span<const double> x, std::span<Complex> out) {
      const Complex va = a(t, x);
      const Complex vb = b(t, x);
      const auto ga = a.analytic_gradient(t, x);
      const auto gb = b.analytic_gradient(t, x);
      for (std::size_t k = 0; k < ga.size(); ++k) out[k] = ga[k] * vb + va * gb[k];
    });
    if (a.has_hessian() && b.has_hessian())
      f.with_hessian([=](double t, std::span<const double> x, std::span<Complex> out) {
        const Complex va = a(t, x);
        const Complex vb = b(t, x);
        const auto ga = a.analytic_gradient(t, x);
        const auto gb = b.analytic_gradient(t, x);
        const auto ha = a.analytic_hessian(t, x);
        const auto hb = b.analytic_hessian(t, x);
        const std::size_t d = ga.size();
        for (std::size_t i = 0; i < d; ++i)
          for (std::size_t j = 0; j < d; ++j)
            out[i * d + j] = ha[i * d + j] * vb + ga[i] * gb[j] + gb[i] * ga[j] + va * hb[i * d + j];
      });
  }
  return f;
}

// ---------------------------------------------------------------- VectorField

VectorField::VectorField(std::vector<ScalarField> components) : components_(std::move(components)) {
  if (components_.empty()) throw InvalidArgument("VectorField needs at least one component");
  for (const auto& c : components_)
    if (c.dimension() != dimension()) throw InvalidArgument("VectorField component count must equal the field dimension");
}

ComplexVector VectorField::operator()(double t, std::span<const double> x) const {
  ComplexVector out(components_.size());
  for (std::size_t k = 0; k < components_.size(); ++k) out[k] = components_[k](t, x);
  return out;
}

VectorField VectorField::gradient_of(const ScalarField& f, double scale) {
  const int d = f.dimension();
  std::vector<ScalarField> comps;
  comps.reserve(d);
  for (int k = 0; k < d; ++k) {
    if (f.has_gradient()) {
      ScalarField c(d, [f, k, scale](double t, std::span<const double> x) { return scale * f.analytic_gradient(t, x)[k]; },
                    f.domain());
      if (f.has_hessian()) {
        c.with_gradient([f, k, d, scale](double t, std::span<const double> x, std::span<Complex> out) {
          const auto h = f.analytic_hessian(t, x);
          for (int j = 0; j < d; ++j) out[j] = scale * h[k * d + j];
        });
      }
      comps.push_back(std::move(c));
    } else {
      const std::array<int, 1> axis{k};
      comps.emplace_back(d, [f, axis, scale](double t, std::span<const double> x) {
        return scale * DiffEngine{}.mixed_partial(f, axis, t, x);
      }, f.domain());
    }
  }
  return VectorField(std::move(comps));
}

// ---------------------------------------------------------------- DiffEngine

namespace {

struct Stencil {
  int half_width;
  std::array<double, 7> coefficients;  // offsets -half_width..half_width
};

// Central stencils indexed by [accuracy order 2 or 4][derivative order 1..4].
const Stencil& stencil(int accuracy, int n) {
  static const Stencil order2[4] = {
      {1, {-0.5, 0.0, 0.5}},
      {1, {1.0, -2.0, 1.0}},
      {2, {-0.5, 1.0, 0.0, -1.0, 0.5}},
      {2, {1.0, -4.0, 6.0, -4.0, 1.0}},
  };
  static const Stencil order4[4] = {
      {2, {1.0 / 12, -2.0 / 3, 0.0, 2.0 / 3, -1.0 / 12}},
      {2, {-1.0 / 12, 4.0 / 3, -5.0 / 2, 4.0 / 3, -1.0 / 12}},
      {3, {1.0 / 8, -1.0, 13.0 / 8, 0.0, -13.0 / 8, 1.0, -1.0 / 8}},
      {3, {-1.0 / 6, 2.0, -13.0 / 2, 28.0 / 3, -13.0 / 2, 2.0, -1.0 / 6}},
  };
  return accuracy == 4 ? order4[n - 1] : order2[n - 1];
}

/// Rounds h so that x + h - x == h exactly.
double representable_step(double x, double h) {
  volatile double xh = x + h;
  return xh - x;
}

}  // namespace

DiffEngine::DiffEngine(DiffOptions options) : options_(options) {
  if (options_.stencil_order != 2 && options_.stencil_order != 4) throw InvalidArgument("stencil order must be 2 or 4");
  if (options_.base_step && !(*options_.base_step > 0.0)) throw InvalidArgument("base step must be positive");
}

double DiffEngine::step(double at, int derivative_order) const {
  if (options_.base_step) return *options_.base_step;
  const double eps = std::numeric_limits<double>::epsilon();
  const double h = std::pow(eps, 1.0 / (derivative_order + options_.stencil_order)) * std::max(1.0, std::abs(at));
  return representable_step(at, h);
}

Complex DiffEngine::time_derivative(const ScalarField& f, double t, std::span<const double> x) const {
  if (options_.use_analytic && f.has_time_derivative()) {
    if (!f.domain().contains(x)) throw DomainError("time derivative requested outside the field domain");
    return f.analytic_time_derivative(t, x);
  }
  const auto& st = stencil(options_.stencil_order, 1);
  const double h = step(t, 1);
  Complex sum{};
  for (int i = -st.half_width; i <= st.half_width; ++i) {
    const double c = st.coefficients[i + st.half_width];
    if (c != 0.0) sum += c * f(t + i * h, x);
  }
  return sum / h;
}

Complex DiffEngine::mixed_partial(const ScalarField& f, std::span<const int> axes, double t,
                                  std::span<const double> x) const {
  const int d = f.dimension();
  const int n = static_cast<int>(axes.size());
  if (n < 1 || n > 4) throw InvalidArgument("mixed partial order must be between 1 and 4");
  if (static_cast<int>(x.size()) != d) throw InvalidArgument("point dimension does not match field");
  for (int a : axes)
    if (a < 0 || a >= d) throw InvalidArgument("derivative axis out of range");

  // Higher orders difference the highest analytic partial available.
  int analytic_order = 0;
  if (options_.use_analytic) {
    if (f.has_hessian() && n >= 2) analytic_order = 2;
    else if (f.has_gradient()) analytic_order = 1;
  }
  const std::span<const int> inner = axes.last(analytic_order);
  const std::span<const int> outer = axes.first(n - analytic_order);
  auto base = [&](std::span<const double> p) -> Complex {
    switch (analytic_order) {
      case 1: return f.analytic_gradient(t, p)[inner[0]];
      case 2: return f.analytic_hessian(t, p)[static_cast<std::size_t>(inner[0]) * d + inner[1]];
      default: return f(t, p);
    }
  };
  if (outer.empty()) {
    if (!f.domain().contains(x)) throw DomainError("derivative requested outside the field domain");
    return base(x);
  }

  std::vector<int> counts(d, 0);
  for (int a : outer) ++counts[a];
  struct Group {
    int axis;
    const Stencil* st;
    double h;
  };
  std::vector<Group> groups;
  RealVector margin(d, 0.0);
  const int fd_order = static_cast<int>(outer.size());
  for (int a = 0; a < d; ++a) {
    if (counts[a] == 0) continue;
    const auto& st = stencil(options_.stencil_order, counts[a]);
    const double h = step(x[a], fd_order);
    groups.push_back({a, &st, h});
    margin[a] = st.half_width * h;
  }
  if (!f.domain().contains(x, margin)) throw DomainError("finite-difference stencil leaves the field domain");

  RealVector work(x.begin(), x.end());
  std::function<Complex(std::size_t)> apply = [&](std::size_t g) -> Complex {
    if (g == groups.size()) return base(work);
    const auto& [axis, st, h] = groups[g];
    Complex sum{};
    for (int i = -st->half_width; i <= st->half_width; ++i) {
      const double c = st->coefficients[i + st->half_width];
      if (c == 0.0) continue;
      work[axis] = x[axis] + i * h;
      sum += c * apply(g + 1);
    }
    work[axis] = x[axis];
    return sum / std::pow(h, counts[axis]);
  };
  return apply(0);
}

ComplexVector DiffEngine::gradient(const ScalarField& f, double t, std::span<const double> x) const {
  if (options_.use_analytic && f.has_gradient()) {
    if (static_cast<int>(x.size()) != f.dimension()) throw InvalidArgument("point dimension does not match field");
    if (!f.domain().contains(x)) throw DomainError("gradient requested outside the field domain");
    return f.analytic_gradient(t, x);
  }
  ComplexVector g(f.dimension());
  for (int k = 0; k < f.dimension(); ++k) {
    const std::array<int, 1> axis{k};
    g[k] = mixed_partial(f, axis, t, x);
  }
  return g;
}

ComplexVector DiffEngine::hessian(const ScalarField& f, double t, std::span<const double> x) const {
  const int d = f.dimension();
  if (options_.use_analytic && f.has_hessian()) {
    if (static_cast<int>(x.size()) != d) throw InvalidArgument("point dimension does not match field");
    if (!f.domain().contains(x)) throw DomainError("Hessian requested outside the field domain");
    return f.analytic_hessian(t, x);
  }
  ComplexVector h(static_cast<std::size_t>(d) * d);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      const std::array<int, 2> axes{i, j};
      h[i * d + j] = h[j * d + i] = mixed_partial(f, axes, t, x);
    }
  return h;
}

Complex DiffEngine::laplacian(const ScalarField& f, double t, std::span<const double> x) const {
  const int d = f.dimension();
  if (options_.use_analytic && f.has_hessian()) {
    const auto h = hessian(f, t, x);
    Complex s{};
    for (int k = 0; k < d; ++k) s += h[k * d + k];
    return s;
  }
  Complex s{};
  for (int k = 0; k < d; ++k) {
    const std::array<int, 2> axes{k, k};
    s += mixed_partial(f, axes, t, x);
  }
  return s;
}

Complex DiffEngine::divergence(const VectorField& v, double t, std::span<const double> x) const {
  Complex s{};
  for (int k = 0; k < v.dimension(); ++k) {
    const std::array<int, 1> axis{k};
    s += mixed_partial(v[k], axis, t, x);
  }
  return s;
}

ComplexVector DiffEngine::jacobian(const VectorField& v, double t, std::span<const double> x) const {
  const int d = v.dimension();
  ComplexVector j(static_cast<std::size_t>(d) * d);
  for (int i = 0; i < d; ++i) {
    const auto g = gradient(v[i], t, x);
    for (int k = 0; k < d; ++k) j[i * d + k] = g[k];
  }
  return j;
}

ComplexVector DiffEngine::vector_laplacian(const VectorField& v, double t, std::span<const double> x) const {
  ComplexVector out(v.dimension());
  for (int i = 0; i < v.dimension(); ++i) out[i] = laplacian(v[i], t, x);
  return out;
}

double DiffEngine::derivative(const Field1D& f, double s, int n) const {
  if (n != 1 && n != 2) throw InvalidArgument("1D derivative order must be 1 or 2");
  if (options_.use_analytic && f.has_derivatives()) {
    if (!f.contains(s)) throw DomainError("derivative requested outside the field domain");
    return n == 1 ? f.analytic_first(s) : f.analytic_second(s);
  }
  const auto& st = stencil(options_.stencil_order, n);
  const double h = step(s, n);
  if (!f.contains(s, st.half_width * h)) throw DomainError("finite-difference stencil leaves the field domain");
  double sum = 0.0;
  for (int i = -st.half_width; i <= st.half_width; ++i) {
    const double c = st.coefficients[i + st.half_width];
    if (c != 0.0) sum += c * f(s + i * h);
  }
  return sum / std::pow(h, n);
}

double DiffEngine::radial_laplacian(const Field1D& f, double r) const {
  if (r < 2.0 * step(r, 2)) throw DomainError("radial Laplacian needs r >= 2h");
  return derivative(f, r, 2) + 2.0 / r * derivative(f, r, 1);
}

}  // namespace scaledyn
