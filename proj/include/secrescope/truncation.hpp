#pragma once

#include <cstddef>

namespace secrescope {

struct TruncationPolicy {
    int series_terms = 25;
    std::size_t max_terms = 1000000;
    double prune_eps = 1e-14;
    bool integer_exponent_mode = true;

    void validate() const;
};

}  // namespace secrescope
