#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace sklevy {

enum class DriftKind { Zero, Linear, Sine, Tanh, Custom };

/// Globally Lipschitz drift f: R^d -> R^d.
///
/// Catalog entries: zero; linear f(x) = A x + b; sine f(x) = a sin(x) and
/// tanh f(x) = a tanh(x), componentwise. Library callers may supply any
/// Lipschitz map through custom().
class Drift {
 public:
  using Map = std::function<void(std::span<const double> x, std::span<double> out)>;

  static Drift zero();
  /// A is row-major d x d.
  static Drift linear(std::vector<double> A, std::vector<double> b);
  /// A = a I.
  static Drift linear_scalar(double a, std::vector<double> b);
  static Drift sine(double amplitude);
  static Drift tanh(double amplitude);
  static Drift custom(std::string name, double lipschitz, Map map);

  /// Catalog lookup by name ("zero", "linear", "sine", "tanh"); `a` is the
  /// amplitude or the scalar multiple of the identity, `b` the offset.
  static Drift from_name(const std::string& name, double a, double b, std::size_t dim);

  DriftKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  double amplitude() const { return amplitude_; }
  const std::vector<double>& matrix() const { return A_; }
  const std::vector<double>& offset() const { return b_; }

  /// Upper bound on the Lipschitz constant (Frobenius norm for linear).
  double lipschitz_constant() const;

  /// out = f(x). Throws DomainError if a linear drift's shape does not match.
  void apply(std::span<const double> x, std::span<double> out) const;

 private:
  DriftKind kind_ = DriftKind::Zero;
  std::string name_ = "zero";
  double amplitude_ = 0.0;
  std::vector<double> A_;
  std::vector<double> b_;
  double lipschitz_ = 0.0;
  Map map_;
};

}  // namespace sklevy
