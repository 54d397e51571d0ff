#include "slz/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>

namespace slz {

double Region::bbox_iou(const Region& other) const {
    const double iw = std::max(0, std::min(bbox_max_col, other.bbox_max_col) -
                                      std::max(bbox_min_col, other.bbox_min_col) + 1);
    const double ih = std::max(0, std::min(bbox_max_row, other.bbox_max_row) -
                                      std::max(bbox_min_row, other.bbox_min_row) + 1);
    const double inter = iw * ih;
    const double a = (bbox_max_col - bbox_min_col + 1.0) * (bbox_max_row - bbox_min_row + 1.0);
    const double b = (other.bbox_max_col - other.bbox_min_col + 1.0) *
                     (other.bbox_max_row - other.bbox_min_row + 1.0);
    const double uni = a + b - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

namespace {

// Membership bitmap over the region bbox with a one-pixel apron, so boundary
// walks never need bounds checks against the image.
struct RegionBitmap {
    int min_row, min_col, rows, cols;
    std::vector<std::uint8_t> bits;

    explicit RegionBitmap(const Region& region)
        : min_row(region.bbox_min_row),
          min_col(region.bbox_min_col),
          rows(region.bbox_max_row - region.bbox_min_row + 1),
          cols(region.bbox_max_col - region.bbox_min_col + 1),
          bits(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0) {
        for (const auto& p : region.pixels)
            bits[static_cast<std::size_t>(p.row - min_row) * cols + (p.col - min_col)] = 1;
    }

    bool in(int row, int col) const {
        const int r = row - min_row, c = col - min_col;
        if (r < 0 || r >= rows || c < 0 || c >= cols) return false;
        return bits[static_cast<std::size_t>(r) * cols + c] != 0;
    }
};

void boundary_from_bitmap(Region& region, const RegionBitmap& bm) {
    region.boundary.clear();
    for (const auto& p : region.pixels) {
        if (!bm.in(p.row - 1, p.col) || !bm.in(p.row + 1, p.col) || !bm.in(p.row, p.col - 1) ||
            !bm.in(p.row, p.col + 1))
            region.boundary.push_back(p);
    }
}

}  // namespace

void compute_boundary(Region& region) {
    const RegionBitmap bm(region);
    boundary_from_bitmap(region, bm);
}

std::vector<Region> connected_components(const SemanticMask& mask) {
    const int h = mask.height, w = mask.width;
    std::vector<Region> regions;
    LabelGrid seen = LabelGrid::Zero(h, w);

    std::deque<Pixel> queue;
    for (int r0 = 0; r0 < h; ++r0) {
        for (int c0 = 0; c0 < w; ++c0) {
            if (seen(r0, c0) || mask.labels(r0, c0) == 0) continue;
            const std::int32_t cls = mask.labels(r0, c0);
            Region region;
            region.id = static_cast<int>(regions.size());
            region.class_id = cls;
            region.bbox_min_row = region.bbox_max_row = r0;
            region.bbox_min_col = region.bbox_max_col = c0;

            queue.push_back({r0, c0});
            seen(r0, c0) = 1;
            double conf_sum = 0.0;
            while (!queue.empty()) {
                const Pixel p = queue.front();
                queue.pop_front();
                region.pixels.push_back(p);
                conf_sum += mask.confidence_at(p.row, p.col);
                region.bbox_min_row = std::min(region.bbox_min_row, p.row);
                region.bbox_max_row = std::max(region.bbox_max_row, p.row);
                region.bbox_min_col = std::min(region.bbox_min_col, p.col);
                region.bbox_max_col = std::max(region.bbox_max_col, p.col);
                static constexpr int dr[4] = {-1, 1, 0, 0};
                static constexpr int dc[4] = {0, 0, -1, 1};
                for (int k = 0; k < 4; ++k) {
                    const int nr = p.row + dr[k], nc = p.col + dc[k];
                    if (nr < 0 || nr >= h || nc < 0 || nc >= w) continue;
                    if (seen(nr, nc) || mask.labels(nr, nc) != cls) continue;
                    seen(nr, nc) = 1;
                    queue.push_back({nr, nc});
                }
            }
            std::sort(region.pixels.begin(), region.pixels.end(), [](const Pixel& a, const Pixel& b) {
                return a.row != b.row ? a.row < b.row : a.col < b.col;
            });
            region.area = static_cast<int>(region.pixels.size());
            region.class_prob = conf_sum / region.area;
            double sx = 0.0, sy = 0.0;
            for (const auto& p : region.pixels) {
                sx += p.col;
                sy += p.row;
            }
            region.centroid = Point(sx / region.area, sy / region.area);
            RegionBitmap bm(region);
            boundary_from_bitmap(region, bm);
            regions.push_back(std::move(region));
        }
    }
    return regions;
}

namespace {

// Directions on the corner lattice: E, S, W, N; y grows downward.
constexpr int kDx[4] = {1, 0, -1, 0};
constexpr int kDy[4] = {0, 1, 0, -1};

// An edge leaving vertex (x,y) in direction d exists when the component lies
// on the right of travel and the outside on the left.
bool edge_exists(const RegionBitmap& bm, int x, int y, int d) {
    switch (d) {
        case 0: return bm.in(y, x) && !bm.in(y - 1, x);          // E
        case 1: return bm.in(y, x - 1) && !bm.in(y, x);          // S
        case 2: return bm.in(y - 1, x - 1) && !bm.in(y, x - 1);  // W
        default: return bm.in(y - 1, x) && !bm.in(y - 1, x - 1); // N
    }
}

}  // namespace

Polygon extract_contour(const Region& region) {
    const RegionBitmap bm(region);
    // Raster-first pixel: its top-left corner starts the outer loop heading E.
    const Pixel first = *std::min_element(
        region.pixels.begin(), region.pixels.end(), [](const Pixel& a, const Pixel& b) {
            return a.row != b.row ? a.row < b.row : a.col < b.col;
        });
    const int sx = first.col, sy = first.row, sd = 0;

    Polygon poly;
    int x = sx, y = sy, d = sd;
    do {
        x += kDx[d];
        y += kDy[d];
        // Right turn preferred: keeps the walk hugging the component at
        // pinch vertices where two boundary loops touch.
        int nd = d;
        const int right = (d + 1) & 3, left = (d + 3) & 3;
        if (edge_exists(bm, x, y, right)) nd = right;
        else if (edge_exists(bm, x, y, d)) nd = d;
        else nd = left;
        if (nd != d) poly.push_back(Point(x, y));
        d = nd;
    } while (!(x == sx && y == sy && d == sd));
    return poly;
}

double polygon_perimeter(const Polygon& poly) {
    double total = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i)
        total += (poly[(i + 1) % poly.size()] - poly[i]).norm();
    return total;
}

double polygon_signed_area(const Polygon& poly) {
    double twice = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point& a = poly[i];
        const Point& b = poly[(i + 1) % poly.size()];
        twice += a.x() * b.y() - b.x() * a.y();
    }
    return 0.5 * twice;
}

bool point_in_polygon(const Point& p, const Polygon& poly) {
    if (poly.size() < 3) return false;
    bool inside = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const Point& a = poly[i];
        const Point& b = poly[j];
        const bool crosses = (a.y() > p.y()) != (b.y() > p.y());
        if (crosses && p.x() < (b.x() - a.x()) * (p.y() - a.y()) / (b.y() - a.y()) + a.x())
            inside = !inside;
    }
    return inside;
}

double point_segment_distance(const Point& p, const Point& a, const Point& b) {
    const Point ab = b - a;
    const double len2 = ab.squaredNorm();
    if (len2 == 0.0) return (p - a).norm();
    const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

namespace {

// Keeps pts[lo..hi] endpoints plus every interior vertex needed so dropped
// ones stay within eps of the kept chain. First-index argmax makes repeated
// runs stable (and the whole pass idempotent).
void rdp_open(const Polygon& pts, std::size_t lo, std::size_t hi, double eps,
              std::vector<std::size_t>& keep) {
    if (hi <= lo + 1) return;
    double max_dist = -1.0;
    std::size_t split = lo;
    for (std::size_t i = lo + 1; i < hi; ++i) {
        const double dist = point_segment_distance(pts[i], pts[lo], pts[hi]);
        if (dist > max_dist) {
            max_dist = dist;
            split = i;
        }
    }
    if (max_dist > eps) {
        rdp_open(pts, lo, split, eps, keep);
        keep.push_back(split);
        rdp_open(pts, split, hi, eps, keep);
    }
}

}  // namespace

Polygon simplify_polygon(const Polygon& poly, double eps) {
    if (eps <= 0.0 || poly.size() <= 3) return poly;

    // Closed ring: anchor at vertex 0 and the vertex farthest from it, then
    // simplify the two open arcs independently.
    std::size_t far_idx = 0;
    double far_dist = -1.0;
    for (std::size_t i = 1; i < poly.size(); ++i) {
        const double dist = (poly[i] - poly[0]).norm();
        if (dist > far_dist) {
            far_dist = dist;
            far_idx = i;
        }
    }
    if (far_idx == 0) return poly;

    // Work on an index ring [0 .. n] where index n aliases vertex 0.
    Polygon ring(poly.begin(), poly.end());
    ring.push_back(poly[0]);

    std::vector<std::size_t> keep;
    keep.push_back(0);
    rdp_open(ring, 0, far_idx, eps, keep);
    keep.push_back(far_idx);
    rdp_open(ring, far_idx, ring.size() - 1, eps, keep);

    Polygon out;
    out.reserve(keep.size());
    for (const auto idx : keep) out.push_back(poly[idx]);
    return out;
}

Moments moments(const Region& region) {
    Moments m;
    double sx = 0.0, sy = 0.0;
    for (const auto& p : region.pixels) {
        sx += p.col;
        sy += p.row;
    }
    const double n = static_cast<double>(region.area);
    m.centroid = Point(sx / n, sy / n);

    double mu20 = 0.0, mu02 = 0.0, mu11 = 0.0;
    for (const auto& p : region.pixels) {
        const double dx = p.col - m.centroid.x();
        const double dy = p.row - m.centroid.y();
        mu20 += dx * dx;
        mu02 += dy * dy;
        mu11 += dx * dy;
    }
    const double a = 2.0 * mu11, b = mu20 - mu02;
    m.orientation = (a == 0.0 && b == 0.0) ? 0.0 : 0.5 * std::atan2(a, b);

    const double perim = polygon_perimeter(region.contour);
    if (perim > 0.0) {
        const double c = 4.0 * std::numbers::pi * n / (perim * perim);
        m.compactness = std::min(c, 1.0);
    }
    return m;
}

std::map<std::string, double> attribute_vector(const Region& region, const SemanticMask& mask,
                                               const AttributeParams& params) {
    const auto& table = ClassTable::instance();
    const auto& info = table.by_id(region.class_id);
    std::map<std::string, double> attrs;

    const double a_ref = params.a_ref_pixels(mask.width, mask.height);
    attrs["is_large_area"] = a_ref > 0.0 ? std::min(1.0, region.area / a_ref) : 1.0;
    attrs["is_regular_shape"] = region.compactness;

    double flat = info.flatness_prior;
    if (mask.height_grid) {
        double sum = 0.0, sum2 = 0.0;
        for (const auto& p : region.pixels) {
            const double hv = (*mask.height_grid)(p.row, p.col);
            sum += hv;
            sum2 += hv * hv;
        }
        const double n = static_cast<double>(region.area);
        const double var = std::max(0.0, sum2 / n - (sum / n) * (sum / n));
        flat *= 1.0 - std::min(1.0, var / params.sigma2_ref);
    }
    attrs["is_flat_surface"] = flat;

    const bool water_like = info.name == "water" || info.name == "pool";
    attrs["is_stable_surface"] =
        1.0 - (water_like ? info.hazard_prior * region.class_prob : 0.0);

    attrs["is_smooth_surface"] = info.flatness_prior * std::pow(region.compactness, params.gamma);

    // Contour length adjacent to landable classes, over total contour length.
    const RegionBitmap bm(region);
    long edges = 0, landable_edges = 0;
    static constexpr int dr[4] = {-1, 1, 0, 0};
    static constexpr int dc[4] = {0, 0, -1, 1};
    for (const auto& p : region.boundary) {
        for (int k = 0; k < 4; ++k) {
            const int nr = p.row + dr[k], nc = p.col + dc[k];
            if (bm.in(nr, nc)) continue;
            ++edges;
            if (mask.in_bounds(nr, nc) && table.landable(mask.labels(nr, nc))) ++landable_edges;
        }
    }
    attrs["is_accessible"] = edges > 0 ? static_cast<double>(landable_edges) / edges : 0.0;

    attrs["is_moving"] = 0.0;  // single-frame default; the tracker overwrites it
    attrs["is_safe"] = 0.0;    // reserved: engine output, never an input fact
    return attrs;
}

void finalize_regions(std::vector<Region>& regions, const SemanticMask& mask,
                      const AttributeParams& params) {
    for (auto& region : regions) {
        compute_boundary(region);
        region.contour = simplify_polygon(extract_contour(region), params.simplify_eps);
        const Moments m = moments(region);
        region.centroid = m.centroid;
        region.orientation = m.orientation;
        region.compactness = m.compactness;
        region.attributes = attribute_vector(region, mask, params);
    }
}

}  // namespace slz
