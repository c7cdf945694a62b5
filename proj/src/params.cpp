#include "qperc/params.hpp"

#include <cmath>
#include <string>

#include "qperc/analytic.hpp"
#include "qperc/errors.hpp"

namespace qperc {

void require_probability(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw DomainError(std::string(name) + " must lie in [0, 1], got " + std::to_string(value));
  }
}

ModelParams::ModelParams(double p, double pe) : ModelParams(p, pe, std::nullopt) {}

ModelParams::ModelParams(double p, double pe, std::optional<double> tau) : p_(p), pe_(pe), tau_(tau) {
  require_probability(p_, "p");
  require_probability(pe_, "p_e");
}

ModelParams ModelParams::from_schmidt(double p, double tau) {
  return ModelParams(p, filtering_probability(tau), tau);
}

}  // namespace qperc
