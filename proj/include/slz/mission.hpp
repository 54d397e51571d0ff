#pragma once

#include "slz/geometry.hpp"
#include "slz/mask.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace slz {

enum class Mission { Emergency, Rescue, SafeLanding };

std::string mission_name(Mission mission);
Mission mission_from_name(const std::string& name);  // throws Error on unknown names

inline const std::vector<std::string>& feature_names() {
    static const std::vector<std::string> names = {"b_area", "b_buffer", "b_center", "b_target"};
    return names;
}

struct MissionConfig {
    Mission mission = Mission::SafeLanding;
    std::map<std::string, double> weights;  // empty: default pack for the mission
    std::optional<Point> target;            // required for rescue
    double d_max = 0.0;                     // <= 0: half the image diagonal
    double rho_max = 0.0;                   // <= 0: quarter of the image diagonal
    double a_ref = 0.0;                     // <= 0: 2% of the image area

    std::map<std::string, double> resolved_weights() const;
    double resolved_d_max(int width, int height) const;
    double resolved_rho_max(int width, int height) const;
    double resolved_a_ref(int width, int height) const;
};

// Minimum Euclidean distance from the touchdown point to any obstacle pixel;
// +infinity for an empty obstacle set (ranks as the widest possible buffer).
double metric_mod(const Point& point, const std::vector<Pixel>& obstacles);

// Euclidean distance to the image center (W/2, H/2).
double metric_tcd(const Point& point, int width, int height);

// All pixels whose class carries a full hazard prior.
std::vector<Pixel> obstacle_pixels(const SemanticMask& mask);

struct FeatureContext {
    int width = 0;
    int height = 0;
    const std::vector<Pixel>* obstacles = nullptr;  // may be null for "none"
};

// Normalized mission features in [0,1]: b_center, b_buffer, b_area always,
// b_target when a target is set (rescue demands one).
std::map<std::string, double> mission_features(const Region& zone, const FeatureContext& ctx,
                                               const MissionConfig& cfg);

struct RankedZone {
    int zone_id = 0;
    int indicator = 0;  // multi-frame validation outcome
    std::map<std::string, double> features;
    double score = 0.0;
    int rank = 0;
    double mod = 0.0;
    double tcd = 0.0;
};

struct RankCandidate {
    int zone_id = 0;
    int indicator = 0;
    std::map<std::string, double> features;
    double mod = 0.0;
    double tcd = 0.0;
};

// Mission-conditioned score I * sum(w * b), descending; ties prefer the wider
// buffer, then the smaller zone id. Ranks are 1-based.
std::vector<RankedZone> rank_zones(const std::vector<RankCandidate>& zones,
                                   const MissionConfig& cfg);

struct GridParams {
    bool enabled = false;
    int cell_px = 64;
    double min_landable_frac = 0.5;
};

// Grid-candidate mode: square cells whose landable share reaches the floor
// become candidate zones. Each candidate keeps the largest landable 4-connected
// component inside its cell; ids are temporary and reassigned by the caller.
std::vector<Region> grid_candidate_regions(const SemanticMask& mask, const GridParams& grid);

}  // namespace slz
