#pragma once

#include <cstddef>
#include <vector>

// Percolation strength along a monotone ramp of the occupation probability,
// with filtering either running alongside the ramp or gated until a release
// step.

namespace qperc {

class Schedule {
 public:
  /// Throws DomainError unless there are at least two steps, every value lies
  /// in [0, 1], and the sequence is nondecreasing.
  explicit Schedule(std::vector<double> p_of_t);

  /// `steps` evenly spaced values from `p_begin` to `p_end`, computed as
  /// p_begin + (p_end - p_begin) * i / (steps - 1) so the endpoints are exact.
  static Schedule linear_ramp(std::size_t steps, double p_begin = 0.0, double p_end = 1.0);

  std::size_t steps() const noexcept { return p_.size(); }
  double operator[](std::size_t step) const { return p_[step]; }
  const std::vector<double>& values() const noexcept { return p_; }

  /// First step whose p reaches `release_p` (to within 1e-12).
  std::size_t first_step_at(double release_p) const;

 private:
  std::vector<double> p_;
};

struct TrajectoryPoint {
  std::size_t step = 0;
  double p = 0.0;
  bool filtering_active = false;
  double strength = 0.0;
};

/// Filtering runs from the start.
std::vector<TrajectoryPoint> continuous_trajectory(const Schedule& schedule, double pe);

/// Filtering is withheld before `release_step`. The release step itself
/// records the post-release strength.
std::vector<TrajectoryPoint> delayed_trajectory(const Schedule& schedule, double pe,
                                                std::size_t release_step);

/// Strength reached the instant filtering is released at `p_at_release`.
double jump_magnitude(double p_at_release, double pe);

}  // namespace qperc
