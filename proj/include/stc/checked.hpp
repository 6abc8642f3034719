// Overflow-checked signed 64-bit helpers for the simulation accumulators.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace stc {

class OverflowError : public std::overflow_error {
public:
  using std::overflow_error::overflow_error;
};

inline int64_t checked_add(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_add_overflow(a, b, &r))
    throw OverflowError("integer overflow in addition");
  return r;
}

inline int64_t checked_mul(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_mul_overflow(a, b, &r))
    throw OverflowError("integer overflow in multiplication");
  return r;
}

} // namespace stc
