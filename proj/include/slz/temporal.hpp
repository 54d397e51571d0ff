#pragma once

#include "slz/geometry.hpp"

#include <utility>
#include <vector>

namespace slz {

struct TrackInstance {
    int frame_index = 0;
    int zone_id = 0;  // region id within that frame
    Point centroid{0, 0};
    double area = 0.0;
    double r_unsafe = 1.0;    // missing verdicts count as fully hazardous
    bool has_risk = false;
};

struct Track {
    int track_id = 0;
    int class_id = 0;
    std::vector<TrackInstance> instances;  // consecutive frames; gaps end a track
};

struct MfvParams {
    int window = 5;          // T
    double tau_haz = 0.3;    // max per-frame hazard allowed across the window
    double tau_jit = 0.15;   // scale-free jitter bound
    double iou_floor = 0.3;  // association threshold
};

// Greedy one-to-one matching of same-class regions by descending bbox IoU.
// Ties break on (prev id, next id); pairs below iou_floor are dropped.
// Returned pairs are (prev id, next id), sorted by prev id.
std::vector<std::pair<int, int>> match_regions(const std::vector<Region>& prev,
                                               const std::vector<Region>& next, double iou_floor);

// Max centroid deviation from the window mean, normalized by sqrt(mean area).
// Windows with a single instance have zero jitter by definition.
double jitter(const Track& track, int window, int anchor_frame);

// 1 iff the track covers every frame of [anchor-T+1, anchor], max hazard stays
// within tau_haz and jitter within tau_jit.
int mfv_pass(const Track& track, const MfvParams& params, int anchor_frame);

// Frame-by-frame association owner. Feed frames in order, then read tracks
// back for validation.
class Tracker {
public:
    explicit Tracker(double iou_floor) : iou_floor_(iou_floor) {}

    // Associates regions with the previous frame and overwrites each tracked
    // region's is_moving attribute with displacement / sqrt(area).
    void observe(int frame_index, std::vector<Region>& regions);

    void record_risk(int frame_index, int zone_id, double r_unsafe);

    const std::vector<Track>& tracks() const { return tracks_; }
    const Track* track_of(int frame_index, int zone_id) const;

private:
    double iou_floor_;
    std::vector<Track> tracks_;
    std::vector<Region> prev_regions_;
    int prev_frame_ = -1;
    std::vector<std::pair<int, int>> prev_track_of_region_;  // (zone_id, track index) of prev frame
};

}  // namespace slz
