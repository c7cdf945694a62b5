#pragma once

#include <optional>

namespace qperc {

/// Occupation probability p and filtering success probability p_e.
///
/// Every closed-form quantity and every sampler takes its parameters from
/// here. Values are validated to [0, 1] at construction and never clamped.
class ModelParams {
 public:
  ModelParams(double p, double pe);

  /// Builds the pair with p_e = 2 tau (1 - tau) from the Schmidt weight tau
  /// of the shared state sqrt(tau)|00> + sqrt(1 - tau)|11>.
  static ModelParams from_schmidt(double p, double tau);

  double p() const noexcept { return p_; }
  double pe() const noexcept { return pe_; }
  std::optional<double> tau_schmidt() const noexcept { return tau_; }

  /// p + p_e: the per-edge connection probability of the additive reading.
  double connectivity() const noexcept { return p_ + pe_; }

  bool operator==(const ModelParams&) const = default;

 private:
  ModelParams(double p, double pe, std::optional<double> tau);

  double p_;
  double pe_;
  std::optional<double> tau_;
};

/// Throws DomainError unless 0 <= value <= 1. `name` goes into the message.
void require_probability(double value, const char* name);

}  // namespace qperc
