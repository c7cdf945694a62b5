#include "qperc/dynamics.hpp"

#include <cmath>
#include <string>

#include "qperc/analytic.hpp"
#include "qperc/errors.hpp"

namespace qperc {

Schedule::Schedule(std::vector<double> p_of_t) : p_(std::move(p_of_t)) {
  if (p_.size() < 2) {
    throw DomainError("a schedule needs at least two steps");
  }
  for (std::size_t i = 0; i < p_.size(); ++i) {
    require_probability(p_[i], "scheduled p");
    if (i > 0 && p_[i] < p_[i - 1]) {
      throw DomainError("schedule must be nondecreasing (step " + std::to_string(i) + ")");
    }
  }
}

Schedule Schedule::linear_ramp(std::size_t steps, double p_begin, double p_end) {
  if (steps < 2) {
    throw DomainError("a schedule needs at least two steps");
  }
  std::vector<double> values(steps);
  const double last = static_cast<double>(steps - 1);
  for (std::size_t i = 0; i < steps; ++i) {
    values[i] = p_begin + (p_end - p_begin) * (static_cast<double>(i) / last);
  }
  values.back() = p_end;
  return Schedule(std::move(values));
}

std::size_t Schedule::first_step_at(double release_p) const {
  for (std::size_t i = 0; i < p_.size(); ++i) {
    if (p_[i] >= release_p - 1e-12) return i;
  }
  throw DomainError("schedule never reaches p = " + std::to_string(release_p));
}

std::vector<TrajectoryPoint> continuous_trajectory(const Schedule& schedule, double pe) {
  return delayed_trajectory(schedule, pe, 0);
}

std::vector<TrajectoryPoint> delayed_trajectory(const Schedule& schedule, double pe,
                                                std::size_t release_step) {
  require_probability(pe, "p_e");
  if (release_step >= schedule.steps()) {
    throw DomainError("release step " + std::to_string(release_step) + " is past the schedule end");
  }
  std::vector<TrajectoryPoint> out;
  out.reserve(schedule.steps());
  for (std::size_t step = 0; step < schedule.steps(); ++step) {
    TrajectoryPoint point;
    point.step = step;
    point.p = schedule[step];
    point.filtering_active = step >= release_step;
    const double active_pe = point.filtering_active ? pe : 0.0;
    point.strength = percolation_strength_closed(ModelParams(point.p, active_pe)).strength_p;
    out.push_back(point);
  }
  return out;
}

double jump_magnitude(double p_at_release, double pe) {
  return percolation_strength_closed(ModelParams(p_at_release, pe)).strength_p;
}

}  // namespace qperc
