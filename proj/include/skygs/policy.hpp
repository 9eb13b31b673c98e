#pragma once

// The per-slot decision interface shared by the scheduler and baselines.

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "skygs/model.hpp"
#include "skygs/orbit.hpp"
#include "skygs/queues.hpp"

namespace skygs {

// Everything a policy may observe at the start of a slot.
struct SlotContext {
  const Scenario& scenario;
  const ContactTable& contacts;
  std::span<const SatelliteState> states;
  // D_s^i(t); appended after this slot's downlinks.
  std::span<const double> arrivals;
  double q = 0.0;
  Slot slot = 0;
  std::uint64_t seed = 0;
};

struct AssignedLeg {
  SatIndex sat = 0;
  AntennaRef antenna;
  DcIndex dc = 0;
  double mb_preview = 0.0;

  bool operator==(const AssignedLeg&) const = default;
};

// x(t): at most one leg per satellite; satellites without a leg withhold.
struct Assignment {
  Slot slot = 0;
  std::vector<AssignedLeg> legs;
  std::vector<SatIndex> withheld;

  bool operator==(const Assignment&) const = default;
};

enum class Constraint { kOneLegPerSatellite, kVisibleStation, kAntennaCapacity, kWellFormed };

std::string_view constraint_name(Constraint c);

struct FeasibilityViolation {
  Constraint constraint = Constraint::kWellFormed;
  std::string entity;
  std::string message;
};

class InfeasibleAssignment : public std::runtime_error {
 public:
  explicit InfeasibleAssignment(const FeasibilityViolation& v);
  const FeasibilityViolation& violation() const { return violation_; }

 private:
  FeasibilityViolation violation_;
};

// Independent check of the slot constraints.
std::optional<FeasibilityViolation> check_feasibility(const Assignment& assignment, const Scenario& scenario,
                                                      const ContactTable& contacts);

class Policy {
 public:
  virtual ~Policy() = default;
  virtual PolicyKind kind() const = 0;
  virtual Assignment schedule(const SlotContext& ctx) = 0;
};

// Validates policy parameters against the scenario (e.g. SG provider).
std::unique_ptr<Policy> make_policy(PolicyKind kind, const Scenario& scenario);

// Fills `withheld` with every satellite that has no leg, sorts legs by
// satellite.
void finalize_assignment(Assignment& a, std::size_t num_satellites);

}  // namespace skygs
