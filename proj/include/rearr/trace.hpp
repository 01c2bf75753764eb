#pragma once

#include <cstdint>
#include <vector>

#include "rearr/series.hpp"

namespace rearr {

// Record of a rearrangement prefix: chosen indices in step order plus the
// running state needed by reports. Parallel vectors, all sized step-count;
// partials[t] is the permuted partial sum after step t.
template <ScalarLike S>
struct Trace {
  SeriesSpec spec;
  S target = S(0);

  std::vector<std::uint64_t> indices;
  std::vector<S> terms;
  std::vector<S> partials;
  std::vector<std::uint32_t> block_counts;
  std::uint32_t max_block_number = 0;

  // Steps whose chosen sign class differs from the previous step's.
  std::vector<std::uint64_t> sign_switches;

  // Smallest index of each class not yet consumed when the run ended.
  std::uint64_t frontier_positive = 0;
  std::uint64_t frontier_negative = 0;

  // Set when a required sign pool could not be served within the horizon cap.
  bool truncated = false;

  std::uint64_t size() const { return indices.size(); }
  bool empty() const { return indices.empty(); }
};

}  // namespace rearr
