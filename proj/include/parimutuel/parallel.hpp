#pragma once

#include <cstddef>
#include <functional>

namespace parimutuel {

/// Worker count; 0 means one per hardware thread.
struct Parallelism {
    unsigned workers = 1;

    static Parallelism automatic() { return {0}; }
    unsigned resolve() const;
};

/// Runs body(i) for i in [0, count) over a worker pool. Each index is
/// processed exactly once; the first exception is rethrown on the caller's thread.
void parallel_for(std::size_t count, Parallelism parallelism, const std::function<void(std::size_t)>& body);

}  // namespace parimutuel
