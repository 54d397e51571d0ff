#include "slz/temporal.hpp"

#include <algorithm>
#include <cmath>

namespace slz {

std::vector<std::pair<int, int>> match_regions(const std::vector<Region>& prev,
                                               const std::vector<Region>& next, double iou_floor) {
    struct Candidate {
        double iou;
        int prev_id;
        int next_id;
        std::size_t prev_idx;
        std::size_t next_idx;
    };
    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i < prev.size(); ++i)
        for (std::size_t j = 0; j < next.size(); ++j) {
            if (prev[i].class_id != next[j].class_id) continue;
            const double iou = prev[i].bbox_iou(next[j]);
            if (iou >= iou_floor) candidates.push_back({iou, prev[i].id, next[j].id, i, j});
        }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.iou != b.iou) return a.iou > b.iou;
        if (a.prev_id != b.prev_id) return a.prev_id < b.prev_id;
        return a.next_id < b.next_id;
    });

    std::vector<char> prev_used(prev.size(), 0), next_used(next.size(), 0);
    std::vector<std::pair<int, int>> matches;
    for (const auto& c : candidates) {
        if (prev_used[c.prev_idx] || next_used[c.next_idx]) continue;
        prev_used[c.prev_idx] = next_used[c.next_idx] = 1;
        matches.emplace_back(c.prev_id, c.next_id);
    }
    std::sort(matches.begin(), matches.end());
    return matches;
}

namespace {

// Instances of the track inside [anchor-window+1, anchor].
std::vector<const TrackInstance*> window_instances(const Track& track, int window, int anchor) {
    std::vector<const TrackInstance*> out;
    for (const auto& inst : track.instances)
        if (inst.frame_index > anchor - window && inst.frame_index <= anchor)
            out.push_back(&inst);
    return out;
}

}  // namespace

double jitter(const Track& track, int window, int anchor_frame) {
    const auto inside = window_instances(track, window, anchor_frame);
    if (inside.size() <= 1) return 0.0;
    Point mean(0, 0);
    double mean_area = 0.0;
    for (const auto* inst : inside) {
        mean += inst->centroid;
        mean_area += inst->area;
    }
    mean /= static_cast<double>(inside.size());
    mean_area /= static_cast<double>(inside.size());
    double max_dev = 0.0;
    for (const auto* inst : inside)
        max_dev = std::max(max_dev, (inst->centroid - mean).norm());
    return mean_area > 0.0 ? max_dev / std::sqrt(mean_area) : 0.0;
}

int mfv_pass(const Track& track, const MfvParams& params, int anchor_frame) {
    const auto inside = window_instances(track, params.window, anchor_frame);
    if (static_cast<int>(inside.size()) < params.window) return 0;  // persistence
    double max_risk = 0.0;
    for (const auto* inst : inside) max_risk = std::max(max_risk, inst->r_unsafe);
    if (max_risk > params.tau_haz) return 0;  // latent hazard in some frame
    if (jitter(track, params.window, anchor_frame) > params.tau_jit) return 0;
    return 1;
}

void Tracker::observe(int frame_index, std::vector<Region>& regions) {
    std::vector<std::pair<int, int>> region_track;

    if (prev_frame_ == frame_index - 1 && !prev_regions_.empty()) {
        const auto matches = match_regions(prev_regions_, regions, iou_floor_);
        for (const auto& [prev_id, next_id] : matches) {
            int track_idx = -1;
            for (const auto& [zone, t] : prev_track_of_region_)
                if (zone == prev_id) track_idx = t;
            if (track_idx < 0) continue;
            Track& track = tracks_[static_cast<std::size_t>(track_idx)];
            Region* region = nullptr;
            for (auto& r : regions)
                if (r.id == next_id) region = &r;
            if (!region) continue;
            const Point previous_centroid = track.instances.back().centroid;
            TrackInstance inst;
            inst.frame_index = frame_index;
            inst.zone_id = next_id;
            inst.centroid = region->centroid;
            inst.area = region->area;
            track.instances.push_back(inst);
            region_track.emplace_back(next_id, track_idx);
            // Displacement per frame over sqrt(area), the scale-free motion cue.
            const double displacement = (region->centroid - previous_centroid).norm();
            const double scale = std::sqrt(std::max(1.0, static_cast<double>(region->area)));
            region->attributes["is_moving"] = std::clamp(displacement / scale, 0.0, 1.0);
        }
    }

    for (auto& region : regions) {
        bool tracked = false;
        for (const auto& [zone, t] : region_track)
            if (zone == region.id) tracked = true;
        if (tracked) continue;
        Track track;
        track.track_id = static_cast<int>(tracks_.size());
        track.class_id = region.class_id;
        TrackInstance inst;
        inst.frame_index = frame_index;
        inst.zone_id = region.id;
        inst.centroid = region.centroid;
        inst.area = region.area;
        track.instances.push_back(inst);
        region_track.emplace_back(region.id, track.track_id);
        tracks_.push_back(std::move(track));
    }

    prev_regions_ = regions;
    prev_frame_ = frame_index;
    prev_track_of_region_ = std::move(region_track);
}

void Tracker::record_risk(int frame_index, int zone_id, double r_unsafe) {
    for (auto& track : tracks_)
        for (auto& inst : track.instances)
            if (inst.frame_index == frame_index && inst.zone_id == zone_id) {
                inst.r_unsafe = r_unsafe;
                inst.has_risk = true;
                return;
            }
}

const Track* Tracker::track_of(int frame_index, int zone_id) const {
    for (const auto& track : tracks_)
        for (const auto& inst : track.instances)
            if (inst.frame_index == frame_index && inst.zone_id == zone_id) return &track;
    return nullptr;
}

}  // namespace slz
