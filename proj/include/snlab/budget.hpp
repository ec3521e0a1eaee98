#pragma once

#include <cstdint>
#include <cstdlib>

namespace snlab {

// Hard cap on the number of enumerated indices / integration grid cells.
// CLI misuse then fails fast instead of exhausting memory. The environment
// variable SNLAB_BUDGET overrides the default of 2^24.
inline std::uint64_t index_budget() {
    if (const char* env = std::getenv("SNLAB_BUDGET")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return v;
    }
    return std::uint64_t{1} << 24;
}

}  // namespace snlab
