#include "cornergas/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <vector>

namespace cornergas::geometry {

namespace {

double orient(cplx a, cplx b, cplx c)
{
    return (b.real() - a.real()) * (c.imag() - a.imag()) -
           (b.imag() - a.imag()) * (c.real() - a.real());
}

bool on_segment(cplx a, cplx b, cplx p)
{
    return std::min(a.real(), b.real()) <= p.real() && p.real() <= std::max(a.real(), b.real()) &&
           std::min(a.imag(), b.imag()) <= p.imag() && p.imag() <= std::max(a.imag(), b.imag());
}

int sgn(double x) { return (x > 0.0) - (x < 0.0); }

// Exact predicate in floating point: orientation signs of the four triples.
bool segments_cross(cplx a, cplx b, cplx c, cplx d)
{
    const int o1 = sgn(orient(a, b, c));
    const int o2 = sgn(orient(a, b, d));
    const int o3 = sgn(orient(c, d, a));
    const int o4 = sgn(orient(c, d, b));
    if (o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0) return true;
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

}  // namespace

std::optional<std::pair<std::size_t, std::size_t>> find_self_intersection(std::span<const cplx> pts)
{
    const std::size_t n = pts.size();
    if (n < 3) return std::nullopt;

    double xmin = pts[0].real(), xmax = xmin, ymin = pts[0].imag(), ymax = ymin;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        xmin = std::min(xmin, pts[i].real());
        xmax = std::max(xmax, pts[i].real());
        ymin = std::min(ymin, pts[i].imag());
        ymax = std::max(ymax, pts[i].imag());
        total += std::abs(pts[(i + 1) % n] - pts[i]);
    }
    // Uniform grid with cell size about the mean edge length; each edge is
    // registered in every cell its bounding box touches.
    double h = std::max(total / static_cast<double>(n), 1e-300);
    const double span = std::max(xmax - xmin, ymax - ymin);
    h = std::max(h, span / 4096.0);
    auto cell = [&](double v, double lo) { return static_cast<long long>(std::floor((v - lo) / h)); };

    std::unordered_map<long long, std::vector<std::size_t>> grid;
    grid.reserve(2 * n);
    const long long stride = cell(xmax, xmin) + 2;
    for (std::size_t i = 0; i < n; ++i) {
        const cplx a = pts[i], b = pts[(i + 1) % n];
        const long long x0 = cell(std::min(a.real(), b.real()), xmin);
        const long long x1 = cell(std::max(a.real(), b.real()), xmin);
        const long long y0 = cell(std::min(a.imag(), b.imag()), ymin);
        const long long y1 = cell(std::max(a.imag(), b.imag()), ymin);
        for (long long y = y0; y <= y1; ++y)
            for (long long x = x0; x <= x1; ++x) grid[y * stride + x].push_back(i);
    }

    std::optional<std::pair<std::size_t, std::size_t>> best;
    for (auto& [key, edges] : grid) {
        (void)key;
        for (std::size_t u = 0; u < edges.size(); ++u) {
            for (std::size_t v = u + 1; v < edges.size(); ++v) {
                std::size_t i = std::min(edges[u], edges[v]);
                std::size_t j = std::max(edges[u], edges[v]);
                const cplx a = pts[i], b = pts[(i + 1) % n];
                const cplx c = pts[j], d = pts[(j + 1) % n];
                const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
                if (adjacent) {
                    // Shared endpoint is fine; a fold back along the same line is not.
                    const cplx shared = (j == i + 1) ? b : a;
                    const cplx p = (j == i + 1) ? a : b;
                    const cplx q = (j == i + 1) ? d : c;
                    if (orient(p, shared, q) == 0.0) {
                        const double dot = ((p - shared) * std::conj(q - shared)).real();
                        if (dot > 0.0 && !best) best = {i, j};
                    }
                    continue;
                }
                if (segments_cross(a, b, c, d)) {
                    if (!best || std::make_pair(i, j) < *best) best = {i, j};
                }
            }
        }
    }
    return best;
}

int winding_number(std::span<const cplx> pts, cplx p)
{
    const std::size_t n = pts.size();
    int wn = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const cplx a = pts[i], b = pts[(i + 1) % n];
        if (a.imag() <= p.imag()) {
            if (b.imag() > p.imag() && orient(a, b, p) > 0.0) ++wn;
        } else {
            if (b.imag() <= p.imag() && orient(a, b, p) < 0.0) --wn;
        }
    }
    return wn;
}

double signed_area(std::span<const cplx> pts)
{
    const std::size_t n = pts.size();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const cplx a = pts[i], b = pts[(i + 1) % n];
        s += a.real() * b.imag() - a.imag() * b.real();
    }
    return 0.5 * s;
}

}  // namespace cornergas::geometry
