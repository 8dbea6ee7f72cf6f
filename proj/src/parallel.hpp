#ifndef IGDEPTH_SRC_PARALLEL_HPP
#define IGDEPTH_SRC_PARALLEL_HPP

#include <algorithm>
#include <thread>
#include <vector>

namespace igdepth::detail {

// Runs body(begin, end) over contiguous chunks of [0, count). Chunks write
// disjoint output, so results do not depend on the thread count.
template <class Body>
void parallel_for(int count, Body body) {
  const int threads = std::clamp(
      static_cast<int>(std::thread::hardware_concurrency()), 1, 16);
  if (threads == 1 || count < 2 * threads) {
    body(0, count);
    return;
  }
  std::vector<std::jthread> pool;
  const int chunk = (count + threads - 1) / threads;
  for (int begin = 0; begin < count; begin += chunk) {
    pool.emplace_back(body, begin, std::min(count, begin + chunk));
  }
}

}  // namespace igdepth::detail

#endif  // IGDEPTH_SRC_PARALLEL_HPP
