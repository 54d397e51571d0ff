#include "slz/mission.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace slz {

std::string mission_name(Mission mission) {
    switch (mission) {
        case Mission::Emergency: return "emergency";
        case Mission::Rescue: return "rescue";
        default: return "safe_landing";
    }
}

Mission mission_from_name(const std::string& name) {
    if (name == "emergency") return Mission::Emergency;
    if (name == "rescue") return Mission::Rescue;
    if (name == "safe_landing") return Mission::SafeLanding;
    throw Error("unknown mission: " + name + " (expected emergency, rescue or safe_landing)");
}

std::map<std::string, double> MissionConfig::resolved_weights() const {
    if (!weights.empty()) return weights;
    switch (mission) {
        case Mission::Emergency: return {{"b_center", 0.7}, {"b_buffer", 0.2}, {"b_area", 0.1}};
        case Mission::Rescue: return {{"b_target", 0.7}, {"b_buffer", 0.2}, {"b_area", 0.1}};
        default: return {{"b_buffer", 0.6}, {"b_area", 0.3}, {"b_center", 0.1}};
    }
}

double MissionConfig::resolved_d_max(int width, int height) const {
    if (d_max > 0.0) return d_max;
    return 0.5 * std::hypot(static_cast<double>(width), static_cast<double>(height));
}

double MissionConfig::resolved_rho_max(int width, int height) const {
    if (rho_max > 0.0) return rho_max;
    return 0.25 * std::hypot(static_cast<double>(width), static_cast<double>(height));
}

double MissionConfig::resolved_a_ref(int width, int height) const {
    if (a_ref > 0.0) return a_ref;
    return 0.02 * static_cast<double>(width) * static_cast<double>(height);
}

double metric_mod(const Point& point, const std::vector<Pixel>& obstacles) {
    if (obstacles.empty()) return std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    for (const auto& o : obstacles) {
        const double dx = point.x() - o.col;
        const double dy = point.y() - o.row;
        best = std::min(best, dx * dx + dy * dy);
    }
    return std::sqrt(best);
}

double metric_tcd(const Point& point, int width, int height) {
    return (point - Point(width / 2.0, height / 2.0)).norm();
}

std::vector<Pixel> obstacle_pixels(const SemanticMask& mask) {
    const auto& table = ClassTable::instance();
    std::vector<Pixel> out;
    for (int r = 0; r < mask.height; ++r)
        for (int c = 0; c < mask.width; ++c)
            if (table.hazardous(mask.labels(r, c))) out.push_back({r, c});
    return out;
}

std::map<std::string, double> mission_features(const Region& zone, const FeatureContext& ctx,
                                               const MissionConfig& cfg) {
    if (cfg.mission == Mission::Rescue && !cfg.target)
        throw Error("rescue mission requires a target point");

    const double d_max = cfg.resolved_d_max(ctx.width, ctx.height);
    const double rho_max = cfg.resolved_rho_max(ctx.width, ctx.height);
    const double a_ref = cfg.resolved_a_ref(ctx.width, ctx.height);

    std::map<std::string, double> features;
    const double tcd = metric_tcd(zone.centroid, ctx.width, ctx.height);
    features["b_center"] = std::clamp(1.0 - std::min(tcd, d_max) / d_max, 0.0, 1.0);

    static const std::vector<Pixel> no_obstacles;
    const double mod = metric_mod(zone.centroid, ctx.obstacles ? *ctx.obstacles : no_obstacles);
    features["b_buffer"] =
        std::isinf(mod) ? 1.0 : std::clamp(std::min(mod, rho_max) / rho_max, 0.0, 1.0);

    features["b_area"] = std::clamp(std::min<double>(zone.area, a_ref) / a_ref, 0.0, 1.0);

    if (cfg.target) {
        const double dist = (zone.centroid - *cfg.target).norm();
        features["b_target"] = std::clamp(1.0 - std::min(dist, d_max) / d_max, 0.0, 1.0);
    }
    return features;
}

std::vector<RankedZone> rank_zones(const std::vector<RankCandidate>& zones,
                                   const MissionConfig& cfg) {
    if (zones.empty()) throw Error("rank_zones: empty zone list");
    const auto weights = cfg.resolved_weights();

    std::vector<RankedZone> out;
    out.reserve(zones.size());
    for (const auto& z : zones) {
        RankedZone r;
        r.zone_id = z.zone_id;
        r.indicator = z.indicator;
        r.features = z.features;
        r.mod = z.mod;
        r.tcd = z.tcd;
        double sum = 0.0;
        for (const auto& [name, w] : weights) {
            const auto it = z.features.find(name);
            if (it != z.features.end()) sum += w * it->second;
        }
        r.score = z.indicator ? sum : 0.0;
        out.push_back(std::move(r));
    }
    std::sort(out.begin(), out.end(), [](const RankedZone& a, const RankedZone& b) {
        if (a.score != b.score) return a.score > b.score;
        const double ba = a.features.count("b_buffer") ? a.features.at("b_buffer") : 0.0;
        const double bb = b.features.count("b_buffer") ? b.features.at("b_buffer") : 0.0;
        if (ba != bb) return ba > bb;
        return a.zone_id < b.zone_id;
    });
    for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = static_cast<int>(i) + 1;
    return out;
}

namespace {

// Largest 4-connected landable component within one cell window.
std::vector<Pixel> largest_landable_component(const SemanticMask& mask, int row0, int col0,
                                              int row1, int col1) {
    const auto& table = ClassTable::instance();
    const int rows = row1 - row0, cols = col1 - col0;
    std::vector<char> seen(static_cast<std::size_t>(rows) * cols, 0);
    auto idx = [&](int r, int c) { return static_cast<std::size_t>(r - row0) * cols + (c - col0); };

    std::vector<Pixel> best;
    for (int r = row0; r < row1; ++r) {
        for (int c = col0; c < col1; ++c) {
            if (seen[idx(r, c)] || !table.landable(mask.labels(r, c))) continue;
            const auto cls = mask.labels(r, c);
            std::vector<Pixel> component;
            std::deque<Pixel> queue{{r, c}};
            seen[idx(r, c)] = 1;
            while (!queue.empty()) {
                const Pixel p = queue.front();
                queue.pop_front();
                component.push_back(p);
                static constexpr int dr[4] = {-1, 1, 0, 0};
                static constexpr int dc[4] = {0, 0, -1, 1};
                for (int k = 0; k < 4; ++k) {
                    const int nr = p.row + dr[k], nc = p.col + dc[k];
                    if (nr < row0 || nr >= row1 || nc < col0 || nc >= col1) continue;
                    if (seen[idx(nr, nc)] || mask.labels(nr, nc) != cls) continue;
                    seen[idx(nr, nc)] = 1;
                    queue.push_back({nr, nc});
                }
            }
            if (component.size() > best.size()) best = std::move(component);
        }
    }
    std::sort(best.begin(), best.end(), [](const Pixel& a, const Pixel& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    return best;
}

}  // namespace

std::vector<Region> grid_candidate_regions(const SemanticMask& mask, const GridParams& grid) {
    const auto& table = ClassTable::instance();
    std::vector<Region> out;
    const int cell = std::max(1, grid.cell_px);
    for (int row0 = 0; row0 < mask.height; row0 += cell) {
        for (int col0 = 0; col0 < mask.width; col0 += cell) {
            const int row1 = std::min(mask.height, row0 + cell);
            const int col1 = std::min(mask.width, col0 + cell);
            long landable = 0;
            for (int r = row0; r < row1; ++r)
                for (int c = col0; c < col1; ++c)
                    if (table.landable(mask.labels(r, c))) ++landable;
            const long total = static_cast<long>(row1 - row0) * (col1 - col0);
            if (landable < grid.min_landable_frac * total) continue;

            auto pixels = largest_landable_component(mask, row0, col0, row1, col1);
            if (pixels.empty()) continue;

            Region region;
            region.class_id = mask.labels(pixels.front().row, pixels.front().col);
            region.pixels = std::move(pixels);
            region.area = static_cast<int>(region.pixels.size());
            region.bbox_min_row = region.bbox_max_row = region.pixels.front().row;
            region.bbox_min_col = region.bbox_max_col = region.pixels.front().col;
            double conf = 0.0, sx = 0.0, sy = 0.0;
            for (const auto& p : region.pixels) {
                conf += mask.confidence_at(p.row, p.col);
                sx += p.col;
                sy += p.row;
                region.bbox_min_row = std::min(region.bbox_min_row, p.row);
                region.bbox_max_row = std::max(region.bbox_max_row, p.row);
                region.bbox_min_col = std::min(region.bbox_min_col, p.col);
                region.bbox_max_col = std::max(region.bbox_max_col, p.col);
            }
            region.class_prob = conf / region.area;
            region.centroid = Point(sx / region.area, sy / region.area);
            out.push_back(std::move(region));
        }
    }
    return out;
}

}  // namespace slz
