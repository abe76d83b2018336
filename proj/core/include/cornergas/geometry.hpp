#pragma once

#include <complex>
#include <optional>
#include <span>
#include <utility>

namespace cornergas::geometry {

using cplx = std::complex<double>;

/// First pair of crossing edges of a closed polyline, if any. Edge i joins
/// pts[i] and pts[(i+1) % n]. Adjacent edges sharing a vertex are not
/// considered intersecting unless they overlap.
std::optional<std::pair<std::size_t, std::size_t>> find_self_intersection(std::span<const cplx> pts);

/// True when the closed polyline has no crossing edges (at this resolution).
inline bool is_simple_closed(std::span<const cplx> pts)
{
    return !find_self_intersection(pts).has_value();
}

/// Winding number of the closed polyline around p.
int winding_number(std::span<const cplx> pts, cplx p);

/// Signed area (positive for counter-clockwise orientation).
double signed_area(std::span<const cplx> pts);

}  // namespace cornergas::geometry
