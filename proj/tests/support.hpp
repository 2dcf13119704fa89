// Conversions between the reference parameters and library types.
#pragma once

#include "oracles.hpp"
#include "sdd/sdd.hpp"

namespace support {

inline sdd::KeyParams key_params(const oracle::Key& k) {
  sdd::KeyParams kp;
  kp.A = k.A;
  kp.B = k.B;
  kp.alpha = k.alpha;
  kp.beta = k.beta;
  kp.delta = k.delta;
  kp.h = k.h;
  return kp;
}

}  // namespace support
