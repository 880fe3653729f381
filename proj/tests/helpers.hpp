#pragma once

#include <random>

#include "nmtel/oracle.hpp"
#include "nmtel/types.hpp"

namespace testutil {

template <typename A, typename B>
double max_abs_diff(const A& a, const B& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline std::mt19937_64 seeded_rng(unsigned bump = 0) { return std::mt19937_64(987654321u + bump); }

}  // namespace testutil
