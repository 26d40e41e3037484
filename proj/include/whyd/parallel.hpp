#pragma once

#include <cstddef>
#include <functional>

namespace whyd {

/// Knobs shared by every search-based operation.
struct SearchOptions {
    /// Worker threads; 0 means default_jobs().
    std::size_t jobs = 1;
    /// Cap on reported contingency sets per cause; 0 means unlimited.
    std::size_t max_contingency_sets = 0;
};

/// WHYD_JOBS if set to a positive integer, else the hardware concurrency.
std::size_t default_jobs();

std::size_t resolve_jobs(std::size_t jobs);

/// Calls body(i) for i in [0, n) on up to `jobs` threads. The first exception
/// thrown by any call is rethrown after all workers stop.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& body);

}  // namespace whyd
