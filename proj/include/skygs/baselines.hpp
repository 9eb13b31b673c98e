#pragma once

// Comparison policies: single-provider greedy (SG), broker greedy (BG),
// broker random (BR), broker withhold-greedy (BWG) and a per-slot
// cost-minimizing assignment with a high-priority queue (ILP).

#include <optional>
#include <string>

#include "skygs/policy.hpp"

namespace skygs {

struct GreedyOptions {
  // Restrict stations and data centers to one provider.
  std::optional<std::string> provider;
  // Downlink only when backlog >= fill_fraction * R * tau.
  std::optional<double> withhold_fill_fraction;
};

// Satellites with backlog, largest first, each take the free antenna and
// data center with the lowest cost per MB downlinked.
Assignment greedy_schedule(const SlotContext& ctx, const GreedyOptions& options);

Assignment sg_schedule(const SlotContext& ctx, const std::string& provider);
Assignment bg_schedule(const SlotContext& ctx);
Assignment bwg_schedule(const SlotContext& ctx, double fill_fraction = 1.0);
// Random order, uniform free antenna, uniform data center; stream keyed by
// (seed, slot).
Assignment br_schedule(const SlotContext& ctx);

// True when the oldest queued data has waited at least rho * xi.
bool is_high_priority(const SlotContext& ctx, SatIndex sat, double rho);
Assignment ilp_hpq_schedule(const SlotContext& ctx, double rho);

class GreedyPolicy final : public Policy {
 public:
  GreedyPolicy(PolicyKind kind, GreedyOptions options) : kind_(kind), options_(std::move(options)) {}
  PolicyKind kind() const override { return kind_; }
  Assignment schedule(const SlotContext& ctx) override { return greedy_schedule(ctx, options_); }

 private:
  PolicyKind kind_;
  GreedyOptions options_;
};

class RandomPolicy final : public Policy {
 public:
  PolicyKind kind() const override { return PolicyKind::kBR; }
  Assignment schedule(const SlotContext& ctx) override { return br_schedule(ctx); }
};

class IlpHpqPolicy final : public Policy {
 public:
  explicit IlpHpqPolicy(double rho) : rho_(rho) {}
  PolicyKind kind() const override { return PolicyKind::kIlpHpq; }
  Assignment schedule(const SlotContext& ctx) override { return ilp_hpq_schedule(ctx, rho_); }

 private:
  double rho_;
};

}  // namespace skygs
