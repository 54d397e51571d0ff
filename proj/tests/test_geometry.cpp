#include "slz/geometry.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace slz;
namespace ts = testsupport;

namespace {

std::vector<Region> regions_of(const SemanticMask& mask, const AttributeParams& params = {}) {
    auto regions = connected_components(mask);
    finalize_regions(regions, mask, params);
    return regions;
}

// Brute-force point-to-ring distance, the independent deviation oracle.
double ring_distance(const Point& p, const Polygon& ring) {
    double best = std::numeric_limits<double>::max();
    for (std::size_t i = 0; i < ring.size(); ++i)
        best = std::min(best, point_segment_distance(p, ring[i], ring[(i + 1) % ring.size()]));
    return best;
}

}  // namespace

TEST_CASE("all-unlabeled mask produces no regions") {
    const auto mask = ts::mask_from_rows({"0 0", "0 0"});
    CHECK(connected_components(mask).empty());
}

TEST_CASE("two diagonal blocks become two components") {
    const auto mask = ts::mask_from_rows({"1 1 0 0", "1 1 0 0", "0 0 3 3", "0 0 3 3"});
    const auto regions = connected_components(mask);
    REQUIRE(regions.size() == 2);
    CHECK(regions[0].class_id == 1);
    CHECK(regions[0].area == 4);
    CHECK(regions[0].centroid.x() == doctest::Approx(0.5));
    CHECK(regions[0].centroid.y() == doctest::Approx(0.5));
    CHECK(regions[1].class_id == 3);
    CHECK(regions[1].area == 4);
    CHECK(regions[1].centroid.x() == doctest::Approx(2.5));
    CHECK(regions[1].centroid.y() == doctest::Approx(2.5));
}

TEST_CASE("gaps and diagonals never merge under 4-connectivity") {
    const auto gap = ts::mask_from_rows({"1 0 1"});
    CHECK(connected_components(gap).size() == 2);
    const auto diag = ts::mask_from_rows({"1 0", "0 1"});
    CHECK(connected_components(diag).size() == 2);
}

TEST_CASE("component areas partition the class pixel counts") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        const int h = 2 + static_cast<int>(rng() % 14);
        const int w = 2 + static_cast<int>(rng() % 14);
        SemanticMask mask;
        mask.width = w;
        mask.height = h;
        mask.labels.resize(h, w);
        for (int r = 0; r < h; ++r)
            for (int c = 0; c < w; ++c) mask.labels(r, c) = static_cast<int>(rng() % 5);

        std::map<int, long> per_class_regions, per_class_pixels;
        for (const auto& region : connected_components(mask))
            per_class_regions[region.class_id] += region.area;
        for (int r = 0; r < h; ++r)
            for (int c = 0; c < w; ++c)
                if (mask.labels(r, c) != 0) per_class_pixels[mask.labels(r, c)]++;
        CHECK(per_class_regions == per_class_pixels);
    }
}

TEST_CASE("single pixel traces a unit square, counter-clockwise by shoelace") {
    SemanticMask mask = ts::mask_from_rows({"0 0 0 0", "0 0 0 0", "0 0 1 0", "0 0 0 0"});
    auto regions = connected_components(mask);
    REQUIRE(regions.size() == 1);
    const auto poly = extract_contour(regions[0]);
    REQUIRE(poly.size() == 4);
    CHECK(polygon_signed_area(poly) == doctest::Approx(1.0));
    // corners of pixel (2,2)
    for (const auto& v : poly) {
        CHECK((v.x() == 2.0 || v.x() == 3.0));
        CHECK((v.y() == 2.0 || v.y() == 3.0));
    }
}

TEST_CASE("2x2 block traces an axis-aligned square of side 2") {
    auto mask = ts::mask_from_rows({"1 1 0 0", "1 1 0 0", "0 0 3 3", "0 0 3 3"});
    auto regions = connected_components(mask);
    const auto poly = extract_contour(regions[0]);
    REQUIRE(poly.size() == 4);
    CHECK(polygon_signed_area(poly) == doctest::Approx(4.0));
    CHECK(polygon_perimeter(poly) == doctest::Approx(8.0));
}

TEST_CASE("L-shaped tromino traces six rectilinear vertices") {
    auto mask = ts::mask_from_rows({"1 0", "1 1"});
    auto regions = connected_components(mask);
    REQUIRE(regions.size() == 1);
    const auto poly = extract_contour(regions[0]);
    CHECK(poly.size() == 6);
    CHECK(polygon_signed_area(poly) == doctest::Approx(3.0));
}

TEST_CASE("simplify with zero tolerance is the identity") {
    const Polygon poly = {{0, 0}, {2, 0}, {2, 2}, {1, 2}, {0, 2}};
    CHECK(simplify_polygon(poly, 0.0) == poly);
}

TEST_CASE("simplify removes a collinear midpoint") {
    const Polygon poly = {{0, 0}, {1, 0}, {2, 0}, {2, 2}, {0, 2}};
    const auto out = simplify_polygon(poly, 0.5);
    REQUIRE(out.size() == 4);
    CHECK(out == Polygon{{0, 0}, {2, 0}, {2, 2}, {0, 2}});
}

TEST_CASE("staircase simplification stays within tolerance (brute-force oracle)") {
    Polygon stairs;
    for (int i = 0; i < 25; ++i) {
        stairs.push_back(Point(i, i));
        stairs.push_back(Point(i + 1, i));
    }
    stairs.push_back(Point(25, 25));
    stairs.push_back(Point(0, 25));
    REQUIRE(stairs.size() > 50);

    const double eps = 2.0;
    const auto out = simplify_polygon(stairs, eps);
    CHECK(out.size() < stairs.size());

    // Every input vertex lies within eps of the simplified ring.
    for (const auto& v : stairs) CHECK(ring_distance(v, out) <= eps + 1e-9);

    // Output vertices form a subsequence of the input.
    std::size_t cursor = 0;
    for (const auto& v : out) {
        while (cursor < stairs.size() && stairs[cursor] != v) ++cursor;
        CHECK(cursor < stairs.size());
    }
}

TEST_CASE("simplify is idempotent at fixed tolerance") {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        Polygon poly;
        const int n = 8 + static_cast<int>(rng() % 40);
        for (int i = 0; i < n; ++i) {
            const double angle = 2.0 * std::numbers::pi * i / n;
            const double radius = 5.0 + static_cast<double>(rng() % 100) / 25.0;
            poly.push_back(Point(radius * std::cos(angle), radius * std::sin(angle)));
        }
        const double eps = 0.2 + static_cast<double>(rng() % 20) / 10.0;
        const auto once = simplify_polygon(poly, eps);
        const auto twice = simplify_polygon(once, eps);
        CHECK(once == twice);
    }
}

TEST_CASE("moments of a solid square") {
    SemanticMask mask;
    mask.width = mask.height = 4;
    mask.labels = LabelGrid::Constant(4, 4, 1);
    auto regions = regions_of(mask);
    REQUIRE(regions.size() == 1);
    CHECK(regions[0].compactness == doctest::Approx(std::numbers::pi / 4.0));
    CHECK(regions[0].centroid.x() == doctest::Approx(1.5));
}

TEST_CASE("horizontal bar is axis-aligned") {
    const auto mask = ts::mask_from_rows({"0 0 0 0 0 0 0 0 0 0 0 0",
                                          "0 1 1 1 1 1 1 1 1 1 1 0",
                                          "0 0 0 0 0 0 0 0 0 0 0 0"});
    auto regions = regions_of(mask);
    REQUIRE(regions.size() == 1);
    CHECK(std::abs(regions[0].orientation) < 1e-12);
}

TEST_CASE("degenerate symmetric region defaults to zero orientation") {
    auto mask = ts::mask_from_rows({"1 1", "1 1"});
    auto regions = regions_of(mask);
    CHECK(regions[0].orientation == 0.0);
}

TEST_CASE("rasterized disk is near-circular after simplification") {
    const int radius = 20, size = 2 * radius + 5;
    SemanticMask mask;
    mask.width = mask.height = size;
    mask.labels = LabelGrid::Zero(size, size);
    const double cx = size / 2.0, cy = size / 2.0;
    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c)
            if (std::hypot(r - cy, c - cx) <= radius) mask.labels(r, c) = 3;
    auto regions = regions_of(mask);
    REQUIRE(regions.size() == 1);
    CHECK(regions[0].compactness >= 0.9);
    CHECK(regions[0].compactness <= 1.0);
    // Frozen from the rasterization at radius 20, simplify_eps 1.
    CHECK(regions[0].compactness == doctest::Approx(0.956163).epsilon(1e-4));
}

TEST_CASE("attribute formulas at their anchor points") {
    // 10x10 image, A_ref = 2 px^2 at the default 2% fraction.
    SemanticMask mask = ts::mask_from_rows({
        "1 1 1 1 1 1 1 1 1 1",
        "1 1 1 1 1 1 1 1 1 1",
        "1 1 1 1 3 3 1 1 1 1",
        "1 1 1 1 3 3 1 1 1 1",
        "1 1 1 1 1 1 1 1 1 1",
        "1 1 1 1 1 1 1 1 1 1",
        "1 1 1 1 1 1 1 1 1 1",
        "1 1 1 1 1 1 1 1 1 1",
        "1 1 1 1 1 1 1 1 1 1",
        "1 1 1 1 1 1 1 1 1 1",
    });
    auto regions = regions_of(mask);
    REQUIRE(regions.size() == 2);
    const auto& grass = regions[1];
    CHECK(grass.class_id == 3);
    CHECK(grass.attributes.at("is_large_area") == 1.0);  // area 4 >= A_ref 2
    CHECK(grass.attributes.at("is_accessible") == 1.0);  // fully paved perimeter
    CHECK(grass.attributes.at("is_moving") == 0.0);
    CHECK(grass.attributes.at("is_safe") == 0.0);
    CHECK(grass.attributes.at("is_regular_shape") == doctest::Approx(grass.compactness));

    // Monotone area attribute at a fixed reference.
    AttributeParams params;
    params.a_ref_frac = 0.5;
    auto regions2 = connected_components(mask);
    finalize_regions(regions2, mask, params);
    CHECK(regions2[1].attributes.at("is_large_area") <=
          regions2[0].attributes.at("is_large_area"));
}

TEST_CASE("flatness uses the prior and the elevation variance") {
    SemanticMask mask = ts::mask_from_rows({"1 1", "1 1"});
    auto flat_regions = regions_of(mask);
    CHECK(flat_regions[0].attributes.at("is_flat_surface") == 1.0);  // paved prior, no heights

    mask.height_grid = ScalarGrid::Constant(2, 2, 3.25);
    auto regions = regions_of(mask);
    CHECK(regions[0].attributes.at("is_flat_surface") == 1.0);  // zero variance

    (*mask.height_grid)(0, 0) = 103.25;  // variance far beyond sigma2_ref
    auto rough = regions_of(mask);
    CHECK(rough[0].attributes.at("is_flat_surface") == 0.0);
}

TEST_CASE("water is not a stable surface") {
    const auto mask = ts::mask_from_rows({"5 5", "5 5"});
    auto regions = regions_of(mask);
    CHECK(regions[0].attributes.at("is_stable_surface") == 0.0);
    CHECK(regions[0].attributes.at("is_flat_surface") == 0.0);  // water flatness prior
}

TEST_CASE("attribute probabilities stay in range on random masks") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        const int h = 2 + static_cast<int>(rng() % 12);
        const int w = 2 + static_cast<int>(rng() % 12);
        SemanticMask mask;
        mask.width = w;
        mask.height = h;
        mask.labels.resize(h, w);
        for (int r = 0; r < h; ++r)
            for (int c = 0; c < w; ++c) mask.labels(r, c) = static_cast<int>(rng() % 19);
        if (trial % 2) {
            mask.height_grid = ScalarGrid::Zero(h, w);
            for (int r = 0; r < h; ++r)
                for (int c = 0; c < w; ++c)
                    (*mask.height_grid)(r, c) = static_cast<double>(rng() % 100) / 10.0;
        }
        for (const auto& region : regions_of(mask)) {
            CHECK(region.attributes.size() == 8);
            for (const auto& [name, p] : region.attributes) {
                CHECK(p >= 0.0);
                CHECK(p <= 1.0);
            }
            CHECK(region.compactness > 0.0);
            CHECK(region.compactness <= 1.0);
            CHECK(region.centroid.x() >= region.bbox_min_col);
            CHECK(region.centroid.x() <= region.bbox_max_col);
        }
    }
}
