#pragma once

#include <cstddef>
#include <functional>

namespace bol {

/// Number of worker threads used by parallel loops. Defaults to the
/// available hardware parallelism.
std::size_t jobs();
void set_jobs(std::size_t n);

/// Runs body(i) for i in [0, n). Work is split into contiguous blocks, one
/// per worker; callers write results into per-index slots and reduce
/// sequentially afterwards so results do not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace bol
