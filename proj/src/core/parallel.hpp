#ifndef GRAPHCLUST_PARALLEL_HPP
#define GRAPHCLUST_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace graphclust {

/// Effective worker cap: min(hardware, GRAPHCLUST_THREADS env, set_max_threads()).
int max_threads();

/// Programmatic cap; 0 restores the default (hardware/env).
void set_max_threads(int n);

/// Runs fn(0..count-1) on up to max_threads() workers. Items must write only
/// to their own output slots; any reduction is the caller's responsibility and
/// must be done in index order to keep results independent of scheduling.
/// Nested calls run sequentially.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

} // namespace graphclust

#endif
