#pragma once

#include "slz/config.hpp"

#include <map>
#include <vector>

namespace slz {

struct FrameAnalysis {
    int frame_index = 0;
    Pssg pssg;
    std::vector<ZoneVerdict> verdicts;
    InferResult inference;
};

// Candidate extraction: plain connected components, or grid cells plus
// non-landable components when grid mode is on. Ids follow the raster order
// of each region's first pixel either way.
std::vector<Region> extract_candidate_regions(const SemanticMask& mask,
                                              const PipelineConfig& config);

// Regions -> scene graph -> grounded facts -> verdicts (probabilistic or
// deterministic per config). When a tracker is supplied, associations and the
// is_moving attribute are refreshed before grounding, and per-zone risks are
// recorded back into the tracks.
FrameAnalysis analyze_frame(const SemanticMask& mask, const RulePack& pack,
                            const PipelineConfig& config, int frame_index = 0,
                            Tracker* tracker = nullptr);

struct FrameRanking {
    std::vector<RankedZone> ranking;
    int selected_zone = -1;  // -1 when no candidate survives validation
};

// Mission-conditioned ranking of the frame's verdict zones. indicator_by_zone
// carries the multi-frame validation outcomes; zones absent from the map fall
// back to the single-frame reduction (risk <= tau_haz, zero jitter).
FrameRanking rank_frame(const FrameAnalysis& analysis, const SemanticMask& mask,
                        const PipelineConfig& config,
                        const std::map<int, int>& indicator_by_zone = {});

}  // namespace slz
