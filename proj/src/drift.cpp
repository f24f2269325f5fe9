#include "sklevy/drift.hpp"

#include <cmath>

#include "sklevy/errors.hpp"

namespace sklevy {

Drift Drift::zero() { return Drift{}; }

Drift Drift::linear(std::vector<double> A, std::vector<double> b) {
  const std::size_t d = b.size();
  if (d == 0 || A.size() != d * d) throw ParameterError("linear drift needs a d x d matrix and a d-vector");
  Drift f;
  f.kind_ = DriftKind::Linear;
  f.name_ = "linear";
  double fro = 0.0;
  for (double a : A) fro += a * a;
  f.lipschitz_ = std::sqrt(fro);
  f.A_ = std::move(A);
  f.b_ = std::move(b);
  return f;
}

Drift Drift::linear_scalar(double a, std::vector<double> b) {
  const std::size_t d = b.size();
  std::vector<double> A(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) A[i * d + i] = a;
  Drift f = linear(std::move(A), std::move(b));
  f.amplitude_ = a;
  f.lipschitz_ = std::fabs(a);
  return f;
}

Drift Drift::sine(double amplitude) {
  Drift f;
  f.kind_ = DriftKind::Sine;
  f.name_ = "sine";
  f.amplitude_ = amplitude;
  f.lipschitz_ = std::fabs(amplitude);
  return f;
}

Drift Drift::tanh(double amplitude) {
  Drift f = sine(amplitude);
  f.kind_ = DriftKind::Tanh;
  f.name_ = "tanh";
  return f;
}

Drift Drift::custom(std::string name, double lipschitz, Map map) {
  if (!map) throw ParameterError("custom drift needs a callable");
  if (!(lipschitz >= 0.0) || !std::isfinite(lipschitz)) {
    throw ParameterError("custom drift needs a finite Lipschitz constant");
  }
  Drift f;
  f.kind_ = DriftKind::Custom;
  f.name_ = std::move(name);
  f.lipschitz_ = lipschitz;
  f.map_ = std::move(map);
  return f;
}

Drift Drift::from_name(const std::string& name, double a, double b, std::size_t dim) {
  if (name == "zero") return zero();
  if (name == "linear") return linear_scalar(a, std::vector<double>(dim, b));
  if (name == "sine") return sine(a);
  if (name == "tanh") return tanh(a);
  throw ParameterError("drift must be one of zero, linear, sine, tanh (got '" + name + "')");
}

double Drift::lipschitz_constant() const { return lipschitz_; }

void Drift::apply(std::span<const double> x, std::span<double> out) const {
  const std::size_t d = x.size();
  switch (kind_) {
    case DriftKind::Zero:
      for (double& o : out) o = 0.0;
      return;
    case DriftKind::Sine:
      for (std::size_t i = 0; i < d; ++i) out[i] = amplitude_ * std::sin(x[i]);
      return;
    case DriftKind::Tanh:
      for (std::size_t i = 0; i < d; ++i) out[i] = amplitude_ * std::tanh(x[i]);
      return;
    case DriftKind::Linear: {
      if (b_.size() != d) throw DomainError("linear drift dimension does not match the state");
      for (std::size_t i = 0; i < d; ++i) {
        double s = b_[i];
        for (std::size_t j = 0; j < d; ++j) s += A_[i * d + j] * x[j];
        out[i] = s;
      }
      return;
    }
    case DriftKind::Custom:
      map_(x, out);
      return;
  }
}

}  // namespace sklevy
