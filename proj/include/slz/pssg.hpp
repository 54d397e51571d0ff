#pragma once

#include "slz/geometry.hpp"

#include <nlohmann/json.hpp>

#include <span>
#include <string>
#include <vector>

namespace slz {

inline const std::vector<std::string>& relation_names() {
    static const std::vector<std::string> names = {
        "above", "bottom", "left", "right", "adjacent_to",
        "contain", "on", "near_to", "far_from", "surrounded_by",
    };
    return names;
}

struct RelationParams {
    double near_radius = 0.0;         // px; <= 0 means 10% of the image diagonal
    double tau_adj = 3.0;             // shared-boundary length that saturates adjacency
    double theta_cont = 0.5;          // containment fraction that counts as "on"
    double theta_sur = 0.6;           // contour fraction that saturates surrounded_by
    double directional_margin = 5.0;  // px of centroid offset for above/left/...
    double fact_floor = 0.01;         // edges and facts below this are dropped

    double resolved_near_radius(int width, int height) const {
        if (near_radius > 0.0) return near_radius;
        return 0.1 * std::hypot(static_cast<double>(width), static_cast<double>(height));
    }
};

struct Edge {
    int src = 0;
    int dst = 0;
    std::string relation;
    double prob = 0.0;
    double center_dist = -1.0;  // exposed for near/far edges; no fact is grounded from it
};

// Probabilistic semantic scene graph for one frame.
struct Pssg {
    std::vector<Region> nodes;
    std::vector<Edge> edges;
    int frame_index = 0;
    int width = 0;
    int height = 0;

    const Region* node_by_id(int id) const {
        for (const auto& n : nodes)
            if (n.id == id) return &n;
        return nullptr;
    }
};

// Gap between two regions: minimum pixel-center distance minus one, clamped
// at zero so 4-adjacent components touch at distance 0. Exact for axis-aligned
// closest approaches.
double region_gap(const Region& a, const Region& b);

// near_to: linear decay over the radius, 0 beyond it. Symmetric.
double relation_near(const Region& a, const Region& b, double radius);

// adjacent_to: shared 4-neighbor pixel-edge contacts, saturating at tau_adj.
double relation_adjacent(const Region& a, const Region& b, double tau_adj);

// contain: fraction of inner pixel centers inside outer's simplified contour.
double relation_contain(const Region& outer, const Region& inner);

// surrounded_by: fraction of a's boundary within radius of b, scaled by theta.
double relation_surrounded(const Region& a, const Region& b, double radius, double theta);

// Probabilistic sum fold: identity 0, absorber 1, order-independent.
double pool_relation(std::span<const double> ps);

Pssg build_pssg(std::vector<Region> regions, const RelationParams& params, int width, int height,
                int frame_index = 0);

nlohmann::json pssg_to_json(const Pssg& pssg);
Pssg pssg_from_json(const nlohmann::json& doc);

}  // namespace slz
