#pragma once

#include <vector>

namespace combmap {

// One open gap (z^-, z^+) on the real line with the interior critical point c
// where the imaginary part of the inverse map attains its maximum.
struct Gap {
    double lo = 0.0;
    double c = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    double half() const { return 0.5 * (hi - lo); }
};

// Strictly interlaced nonempty gaps, sorted left to right. Gaps of height-zero
// slits are simply absent.
struct GapSystem {
    std::vector<Gap> gaps;

    std::size_t size() const { return gaps.size(); }
    bool empty() const { return gaps.empty(); }

    // Throws InvalidInterlacing unless lo < c < hi per gap and hi_i < lo_{i+1}.
    void validate() const;

    // Minimal bounded band length between consecutive gaps; requires size() >= 2.
    double min_interior_band() const;
};

} // namespace combmap
