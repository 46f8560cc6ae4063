#pragma once

#include <cstdint>
#include <functional>

#include <gtest/gtest.h>

#include <spaceform/ambient.hpp>
#include <spaceform/errors.hpp>

namespace testutil {

// Small deterministic generator for property loops; independent of the
// library's own sampling utilities. Yields values in [-1, 1).
struct TestRng {
  std::uint64_t state;
  explicit TestRng(std::uint64_t seed) : state(seed) {}

  double next() {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    const std::uint64_t bits = (state ^ (state >> 33)) >> 11;
    return static_cast<double>(bits) * 0x1.0p-53 * 2.0 - 1.0;
  }

  spaceform::Vec vec(int dim) {
    spaceform::Vec v(static_cast<std::size_t>(dim));
    for (double& c : v) c = next();
    return v;
  }
};

inline spaceform::Err error_code(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const spaceform::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected a spaceform::Error";
  return spaceform::Err::BadParameter;
}

}  // namespace testutil
