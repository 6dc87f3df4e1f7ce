// parallel.hpp -- slab partitioning over independent output ranges.
//
// Every use writes disjoint outputs with no shared mutable state, so results
// are identical for any worker count.

#ifndef AUTOCOMB_PARALLEL_HPP
#define AUTOCOMB_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace autocomb {

// Worker count used by parallel_for; 0 restores hardware_concurrency.
void set_num_threads(int n);
int num_threads();

// Calls fn(begin, end) on contiguous chunks of [0, n). Runs serially when
// n is small or one thread is configured.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& fn);

} // namespace autocomb

#endif
