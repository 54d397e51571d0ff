#pragma once

#include "slz/mask.hpp"
#include "slz/types.hpp"

#include <map>
#include <string>
#include <vector>

namespace slz {

inline const std::vector<std::string>& attribute_names() {
    static const std::vector<std::string> names = {
        "is_large_area",  "is_regular_shape", "is_flat_surface", "is_stable_surface",
        "is_moving",      "is_smooth_surface", "is_accessible",  "is_safe",
    };
    return names;
}

struct AttributeParams {
    double a_ref_frac   = 0.02;  // reference area as a fraction of the image area
    double gamma        = 0.5;   // smoothness exponent on compactness
    double sigma2_ref   = 1.0;   // elevation variance normalizer (units^2)
    double simplify_eps = 1.0;   // contour simplification tolerance (px)

    double a_ref_pixels(int width, int height) const {
        return a_ref_frac * static_cast<double>(width) * static_cast<double>(height);
    }
};

// One connected component of one class; a scene-graph node.
struct Region {
    int id       = 0;
    int class_id = 0;
    int area     = 0;                  // pixel count
    Point centroid{0, 0};              // mean of pixel coordinates (x = col, y = row)
    int bbox_min_col = 0, bbox_min_row = 0, bbox_max_col = 0, bbox_max_row = 0;  // inclusive
    Polygon contour;                   // simplified outer boundary, CCW by shoelace sign
    double orientation = 0.0;          // radians from the image x axis
    double compactness = 0.0;          // 4*pi*area / perimeter^2, on the simplified contour
    double class_prob  = 1.0;          // mean pixel confidence
    std::map<std::string, double> attributes;

    std::vector<Pixel> pixels;         // component pixels in raster order
    std::vector<Pixel> boundary;       // pixels with at least one 4-neighbor outside

    double bbox_iou(const Region& other) const;
};

// 4-connected components per class id, class 0 excluded. Region ids are
// assigned in raster order of each component's first pixel. Geometry fields
// (contour, moments, attributes) are filled by the callers below.
std::vector<Region> connected_components(const SemanticMask& mask);

// Rebuilds region.boundary from region.pixels.
void compute_boundary(Region& region);

// Closed outer-boundary polygon of the component, vertices on the pixel-corner
// lattice, collinear lattice points dropped. Positive shoelace orientation.
Polygon extract_contour(const Region& region);

// Ramer-Douglas-Peucker on a closed ring. Output vertices are a subsequence of
// the input; every dropped vertex lies within eps of the simplified ring.
// eps <= 0 returns the input unchanged.
Polygon simplify_polygon(const Polygon& poly, double eps);

double polygon_perimeter(const Polygon& poly);
double polygon_signed_area(const Polygon& poly);
bool point_in_polygon(const Point& p, const Polygon& poly);
double point_segment_distance(const Point& p, const Point& a, const Point& b);

struct Moments {
    Point centroid{0, 0};
    double orientation = 0.0;
    double compactness = 0.0;
};

// Centroid from raw moments, orientation from central second moments,
// compactness from the region's (already simplified) contour.
Moments moments(const Region& region);

// The eight attribute probabilities of Table-style scene-graph nodes.
// is_moving stays 0 here (single frame); is_safe is a reserved output slot.
std::map<std::string, double> attribute_vector(const Region& region, const SemanticMask& mask,
                                               const AttributeParams& params);

// Runs the full per-region geometry pass: contour, simplification, moments,
// attributes. Mutates the regions in place.
void finalize_regions(std::vector<Region>& regions, const SemanticMask& mask,
                      const AttributeParams& params);

}  // namespace slz
