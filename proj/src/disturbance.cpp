#include "saddleflow/disturbance.hpp"

#include <cmath>

#include "saddleflow/error.hpp"

namespace saddleflow {

Vec DisturbanceSignal::base(double t) const {
  const Eigen::Index len = spec_.structured ? 2 * n_ : n_ + m_;
  switch (spec_.kind) {
    case DisturbanceKind::zero:
      return Vec::Zero(len);
    case DisturbanceKind::exp_decay:
      return spec_.amplitude * std::exp(-spec_.rate * t);
    case DisturbanceKind::const_plus_sin:
      return spec_.offset + spec_.amplitude * std::sin(spec_.freq * t);
  }
  return Vec::Zero(len);
}

DisturbanceSample DisturbanceSignal::operator()(double t) const {
  const Vec v = base(t);
  DisturbanceSample u;
  u.ux = v.head(n_);
  if (spec_.structured) {
    u.uz = m_ > 0 ? Vec(A_ * v.tail(n_)) : Vec(0);
  } else {
    u.uz = v.tail(m_);
  }
  return u;
}

double DisturbanceSignal::base_sup_bound() const {
  switch (spec_.kind) {
    case DisturbanceKind::zero:
      return 0.0;
    case DisturbanceKind::exp_decay:
      return spec_.amplitude.norm();
    case DisturbanceKind::const_plus_sin:
      return spec_.offset.norm() + spec_.amplitude.norm();
  }
  return 0.0;
}

DisturbanceSignal make_disturbance(const DisturbanceSpec& spec, const ConstrainedProgram& prog) {
  DisturbanceSignal sig;
  sig.spec_ = spec;
  sig.n_ = prog.n;
  sig.m_ = prog.m();
  sig.A_ = prog.A;
  if (spec.kind == DisturbanceKind::zero) return sig;
  if (prog.p() > 0) {
    throw Error(ErrorKind::misuse,
                "disturbances are only defined for programs without inequalities (p = 0)");
  }
  const Eigen::Index len = spec.structured ? 2 * prog.n : prog.n + prog.m();
  if (spec.amplitude.size() != len) {
    throw Error(ErrorKind::config, "disturbance.amplitude must have length " + std::to_string(len));
  }
  if (spec.kind == DisturbanceKind::exp_decay && !(spec.rate > 0.0)) {
    throw Error(ErrorKind::config, "disturbance.rate must be positive for exp_decay");
  }
  if (spec.kind == DisturbanceKind::const_plus_sin) {
    if (spec.offset.size() == 0) {
      sig.spec_.offset = Vec::Zero(len);
    } else if (spec.offset.size() != len) {
      throw Error(ErrorKind::config, "disturbance.offset must have length " + std::to_string(len));
    }
  }
  return sig;
}

const char* to_string(DisturbanceKind kind) {
  switch (kind) {
    case DisturbanceKind::zero:
      return "zero";
    case DisturbanceKind::exp_decay:
      return "exp_decay";
    case DisturbanceKind::const_plus_sin:
      return "const_plus_sin";
  }
  return "?";
}

DisturbanceKind disturbance_kind_from_string(const std::string& s) {
  if (s == "zero") return DisturbanceKind::zero;
  if (s == "exp_decay") return DisturbanceKind::exp_decay;
  if (s == "const_plus_sin") return DisturbanceKind::const_plus_sin;
  throw Error(ErrorKind::config, "unknown disturbance kind '" + s + "'");
}

}  // namespace saddleflow
