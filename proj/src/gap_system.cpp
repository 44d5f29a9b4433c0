#include "combmap/gap_system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "combmap/errors.hpp"

namespace combmap {

void GapSystem::validate() const {
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        const Gap& g = gaps[i];
        if (!std::isfinite(g.lo) || !std::isfinite(g.hi) || !std::isfinite(g.c))
            throw InvalidInterlacing("gap coordinates must be finite");
        if (!(g.lo < g.c && g.c < g.hi))
            throw InvalidInterlacing("critical point must lie strictly inside its gap");
        if (i + 1 < gaps.size() && !(g.hi < gaps[i + 1].lo))
            throw InvalidInterlacing("gaps must be strictly interlaced");
    }
}

double GapSystem::min_interior_band() const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < gaps.size(); ++i)
        best = std::min(best, gaps[i + 1].lo - gaps[i].hi);
    return best;
}

} // namespace combmap
