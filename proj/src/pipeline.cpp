#include "slz/pipeline.hpp"

#include <algorithm>

namespace slz {

std::vector<Region> extract_candidate_regions(const SemanticMask& mask,
                                              const PipelineConfig& config) {
    std::vector<Region> regions;
    if (config.grid.enabled) {
        regions = grid_candidate_regions(mask, config.grid);
        const auto& table = ClassTable::instance();
        for (auto& component : connected_components(mask)) {
            if (table.landable(component.class_id)) continue;  // cells replace these
            regions.push_back(std::move(component));
        }
        std::sort(regions.begin(), regions.end(), [](const Region& a, const Region& b) {
            const Pixel& pa = a.pixels.front();
            const Pixel& pb = b.pixels.front();
            return pa.row != pb.row ? pa.row < pb.row : pa.col < pb.col;
        });
        for (std::size_t i = 0; i < regions.size(); ++i) regions[i].id = static_cast<int>(i);
    } else {
        regions = connected_components(mask);
    }
    finalize_regions(regions, mask, config.attributes);
    return regions;
}

FrameAnalysis analyze_frame(const SemanticMask& mask, const RulePack& pack,
                            const PipelineConfig& config, int frame_index, Tracker* tracker) {
    FrameAnalysis out;
    out.frame_index = frame_index;

    auto regions = extract_candidate_regions(mask, config);
    if (tracker) tracker->observe(frame_index, regions);

    out.pssg = build_pssg(std::move(regions), config.relations, mask.width, mask.height,
                          frame_index);
    out.verdicts = config.engine.deterministic
                       ? verdict_deterministic(out.pssg, pack, config.engine, &out.inference)
                       : verdict(out.pssg, pack, config.engine, &out.inference);

    if (tracker)
        for (const auto& v : out.verdicts) tracker->record_risk(frame_index, v.zone_id, v.risk);
    return out;
}

FrameRanking rank_frame(const FrameAnalysis& analysis, const SemanticMask& mask,
                        const PipelineConfig& config,
                        const std::map<int, int>& indicator_by_zone) {
    FrameRanking out;
    if (analysis.verdicts.empty()) return out;

    const auto obstacles = obstacle_pixels(mask);
    FeatureContext ctx;
    ctx.width = mask.width;
    ctx.height = mask.height;
    ctx.obstacles = &obstacles;

    std::vector<RankCandidate> candidates;
    candidates.reserve(analysis.verdicts.size());
    for (const auto& v : analysis.verdicts) {
        const Region* zone = analysis.pssg.node_by_id(v.zone_id);
        if (!zone) continue;
        RankCandidate c;
        c.zone_id = v.zone_id;
        if (const auto it = indicator_by_zone.find(v.zone_id); it != indicator_by_zone.end())
            c.indicator = it->second;
        else
            c.indicator = v.risk <= config.mfv.tau_haz ? 1 : 0;  // window of one, zero jitter
        c.features = mission_features(*zone, ctx, config.mission);
        c.mod = metric_mod(zone->centroid, obstacles);
        c.tcd = metric_tcd(zone->centroid, mask.width, mask.height);
        candidates.push_back(std::move(c));
    }
    if (candidates.empty()) return out;

    out.ranking = rank_zones(candidates, config.mission);
    if (!out.ranking.empty() && out.ranking.front().indicator == 1)
        out.selected_zone = out.ranking.front().zone_id;
    return out;
}

}  // namespace slz
