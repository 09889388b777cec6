#pragma once

#include "saddleflow/dynamics.hpp"

namespace saddleflow {

enum class DisturbanceKind { zero, exp_decay, const_plus_sin };

/// Deterministic additive disturbance. The base signal is a vector of length
/// n + m, split into (u_x, u_z). With `structured` set the base has length 2n
/// and is split into (u_x, u~_z); the z-channel then receives A u~_z.
///
///   exp_decay:       amplitude * exp(-rate t)
///   const_plus_sin:  offset + amplitude * sin(freq t)
struct DisturbanceSpec {
  DisturbanceKind kind = DisturbanceKind::zero;
  Vec amplitude;
  Vec offset;
  double rate = 1.0;
  double freq = 1.0;
  bool structured = false;
};

class DisturbanceSignal {
 public:
  DisturbanceSignal() = default;

  DisturbanceSample operator()(double t) const;

  bool is_zero() const { return spec_.kind == DisturbanceKind::zero; }
  const DisturbanceSpec& spec() const { return spec_; }

  /// ||offset|| + ||amplitude|| of the base signal: bounds sup_t ||(u_x, u~_z)||.
  double base_sup_bound() const;

  /// Base signal (u_x, u_z) or (u_x, u~_z) before the structured map.
  Vec base(double t) const;

 private:
  friend DisturbanceSignal make_disturbance(const DisturbanceSpec&, const ConstrainedProgram&);

  DisturbanceSpec spec_;
  int n_ = 0;
  int m_ = 0;
  Mat A_;
};

/// Validates the spec against the program and returns the signal t -> (u_x, u_z).
/// Throws Error(config) for negative decay rates or mismatched vector lengths,
/// and Error(misuse) for a nonzero disturbance on a program with p > 0.
DisturbanceSignal make_disturbance(const DisturbanceSpec& spec, const ConstrainedProgram& prog);

const char* to_string(DisturbanceKind kind);
DisturbanceKind disturbance_kind_from_string(const std::string& s);

}  // namespace saddleflow
