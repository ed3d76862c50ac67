#include "tptweak/types.hpp"

#include <cmath>

namespace tptweak {

bool outside_barrier_zone(const PostSelection& sel, const SquareBarrier& barrier) {
    if (barrier.height == 0.0) return true;
    return std::abs(sel.x) > barrier.half_width + sel.margin;
}

}  // namespace tptweak
