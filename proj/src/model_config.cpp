#include "sklevy/model_config.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "sklevy/errors.hpp"

namespace sklevy {

void check_stiffness(double h, double eps) {
  if (h > eps / 10.0 * (1.0 + kStiffnessSlack)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "stiffness guard violated: step h=" << h << " must satisfy h <= eps/10 = " << eps / 10.0;
    throw StiffnessError(msg.str());
  }
}

void ModelConfig::validate() const {
  stable.validate();
  if (!(eps > 0.0 && eps <= 1.0)) throw ParameterError("eps must lie in (0,1]");
  if (!(theta >= 0.0 && theta < 1.0)) throw ParameterError("theta must lie in [0,1)");
  if (!(T > 0.0) || !std::isfinite(T)) throw ParameterError("T must be positive");
  if (n_steps < 1) throw ParameterError("n_steps must be positive");
  if (u0.size() != stable.dim || v0.size() != stable.dim) {
    throw ParameterError("u0 and v0 must have dimension dim");
  }
  if (drift.kind() == DriftKind::Linear && drift.offset().size() != stable.dim) {
    throw ParameterError("linear drift dimension must equal dim");
  }
  if (!(noise_scale >= 0.0) || !std::isfinite(noise_scale)) {
    throw ParameterError("noise_scale must be nonnegative");
  }
  check_stiffness(step(), eps);
}

ModelConfig canonical_config() {
  ModelConfig c;
  c.n_steps = n_steps_for(c.eps, c.T);
  return c;
}

std::size_t n_steps_for(double eps, double T) {
  if (!(eps > 0.0) || !(T > 0.0)) throw ParameterError("eps and T must be positive");
  const double raw = std::ceil(10.0 * T / eps);
  if (raw > 0x1.0p40) throw ParameterError("eps too small for the stiffness guard");
  return std::bit_ceil(static_cast<std::uint64_t>(raw));
}

}  // namespace sklevy
