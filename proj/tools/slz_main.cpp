#include "slz/pipeline.hpp"
#include "slz/report.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

namespace fs = std::filesystem;
using slz::Error;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;          // I/O, config, or rule-structure errors
constexpr int kExitFindings = 2;       // rule pack has semantic findings
constexpr int kExitNoSafeZone = 3;     // pipeline ran, nothing passed the gate
constexpr int kExitInsufficient = 4;   // not enough frames / empty dataset

struct CommonOptions {
    std::string config_path;
    int k = -1;
    double tau_mission = -1.0;
    bool deterministic = false;
    std::string mission;
    std::string target;
    int grid = 0;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--config", opts.config_path,
                    "pipeline config JSON (default: $SLZ_CONFIG if set, else built-ins)");
    cmd->add_option("--k", opts.k, "proofs kept per derived atom")->check(CLI::PositiveNumber);
    cmd->add_option("--tau-mission", opts.tau_mission, "safety gate threshold")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_flag("--deterministic", opts.deterministic, "boolean-fact mode");
    cmd->add_option("--mission", opts.mission, "emergency | rescue | safe_landing");
    cmd->add_option("--target", opts.target, "rescue target as x,y");
    cmd->add_option("--grid", opts.grid, "grid-candidate mode with the given cell size (px)")
        ->check(CLI::PositiveNumber);
}

slz::PipelineConfig resolve_config(const CommonOptions& opts) {
    slz::PipelineConfig config;
    std::string path = opts.config_path;
    if (path.empty())
        if (const char* env = std::getenv("SLZ_CONFIG")) path = env;
    if (!path.empty()) config = slz::load_config(path);

    if (opts.k > 0) config.engine.k = opts.k;
    if (opts.tau_mission >= 0.0) config.engine.tau_mission = opts.tau_mission;
    if (opts.deterministic) config.engine.deterministic = true;
    if (!opts.mission.empty()) config.mission.mission = slz::mission_from_name(opts.mission);
    if (!opts.target.empty()) {
        double x = 0.0, y = 0.0;
        if (std::sscanf(opts.target.c_str(), "%lf,%lf", &x, &y) != 2)
            throw Error("--target expects x,y");
        config.mission.target = slz::Point(x, y);
    }
    if (opts.grid > 0) {
        config.grid.enabled = true;
        config.grid.cell_px = opts.grid;
    }
    return config;
}

slz::RulePack load_pack(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw slz::IoError("cannot open rules " + path);
    std::string source((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return slz::parse_rules(source);
}

slz::SemanticMask load_mask_auto(const std::string& path) {
    return slz::load_mask(path, slz::mask_format_for_path(path));
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw slz::IoError("cannot write " + path);
    out << text;
}

void write_json(const std::string& path, const nlohmann::ordered_json& doc) {
    write_text(path, doc.dump(2) + "\n");
}

std::vector<fs::path> list_mask_files(const std::string& dir) {
    std::vector<fs::path> files;
    if (!fs::is_directory(dir)) throw slz::IoError(dir + " is not a directory");
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const auto ext = entry.path().extension().string();
        if (ext == ".grid" || ext == ".pgm") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

nlohmann::ordered_json meta_json(const slz::PipelineConfig& config, int width, int height) {
    nlohmann::ordered_json meta;
    meta["mode"] = config.engine.deterministic ? "deterministic" : "probabilistic";
    meta["k"] = config.engine.k;
    meta["tau_mission"] = config.engine.tau_mission;
    meta["mission"] = slz::mission_name(config.mission.mission);
    meta["image_size"] = {width, height};
    return meta;
}

int cmd_check_rules(const std::string& rules_path) {
    slz::RulePack pack;
    try {
        pack = load_pack(rules_path);
    } catch (const slz::ParseError& e) {
        std::cout << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const Error& e) {
        std::cout << "error: " << e.what() << "\n";
        return kExitError;
    }
    std::cout << "rules: " << pack.rules.size() << "\n";
    for (std::size_t s = 0; s < pack.strata.size(); ++s) {
        std::cout << "stratum " << s << ":";
        for (const auto& pred : pack.strata[s]) std::cout << ' ' << pred;
        std::cout << "\n";
    }
    const auto report = slz::predicate_signature_check(pack, slz::default_catalog());
    for (const auto& finding : report.findings) {
        const char* kind =
            finding.kind == slz::SignatureFinding::Kind::ArityMismatch ? "arity-mismatch"
                                                                       : "ungroundable";
        std::cout << "finding: " << kind << ": " << finding.message << "\n";
    }
    if (!report.ok()) return kExitFindings;
    std::cout << "ok\n";
    return kExitOk;
}

int cmd_infer(const std::string& mask_path, const std::string& rules_path,
              const CommonOptions& opts, const std::string& out_path,
              const std::string& pssg_path, int top) {
    const auto config = resolve_config(opts);
    const auto pack = load_pack(rules_path);
    const auto mask = load_mask_auto(mask_path);

    const auto analysis = slz::analyze_frame(mask, pack, config);
    const auto ranking = slz::rank_frame(analysis, mask, config);

    nlohmann::ordered_json doc;
    doc["meta"] = meta_json(config, mask.width, mask.height);
    doc["meta"]["frame"] = 0;
    auto& zones = doc["zones"] = nlohmann::ordered_json::array();
    for (const auto& v : analysis.verdicts)
        zones.push_back(slz::verdict_to_json(v, analysis.inference));
    auto ranked = ranking.ranking;
    if (top > 0 && static_cast<int>(ranked.size()) > top) ranked.resize(top);
    doc["ranking"] = slz::ranking_to_json(ranked);
    if (ranking.selected_zone >= 0)
        doc["selected"] = ranking.selected_zone;
    else
        doc["selected"] = nullptr;

    if (!pssg_path.empty()) write_json(pssg_path, slz::pssg_to_json(analysis.pssg));
    if (!out_path.empty()) write_json(out_path, doc);
    else std::cout << doc.dump(2) << "\n";

    for (const auto& v : analysis.verdicts)
        if (v.passed_gate) return kExitOk;
    return kExitNoSafeZone;
}

int cmd_run(const std::string& frames_dir, const std::string& rules_path,
            const CommonOptions& opts, const std::string& out_path, int top) {
    const auto config = resolve_config(opts);
    const auto pack = load_pack(rules_path);
    const auto files = list_mask_files(frames_dir);
    if (static_cast<int>(files.size()) < config.mfv.window) {
        std::cerr << "error: " << files.size() << " frame(s) found, window needs "
                  << config.mfv.window << "\n";
        return kExitInsufficient;
    }

    slz::Tracker tracker(config.mfv.iou_floor);
    nlohmann::ordered_json frames = nlohmann::ordered_json::array();
    slz::FrameAnalysis final_analysis;
    slz::SemanticMask final_mask;
    for (std::size_t i = 0; i < files.size(); ++i) {
        auto mask = load_mask_auto(files[i].string());
        auto analysis =
            slz::analyze_frame(mask, pack, config, static_cast<int>(i), &tracker);
        nlohmann::ordered_json jf;
        jf["frame"] = static_cast<int>(i);
        jf["file"] = files[i].filename().string();
        auto& jz = jf["zones"] = nlohmann::ordered_json::array();
        for (const auto& v : analysis.verdicts) {
            nlohmann::ordered_json z;
            z["zone"] = v.zone_id;
            z["risk"] = slz::round_to(v.risk, 6);
            z["score"] = slz::round_to(v.score, 6);
            z["passed"] = v.passed_gate;
            const slz::Track* track = tracker.track_of(static_cast<int>(i), v.zone_id);
            z["track"] = track ? track->track_id : -1;
            jz.push_back(std::move(z));
        }
        frames.push_back(std::move(jf));
        if (i + 1 == files.size()) {
            final_analysis = std::move(analysis);
            final_mask = std::move(mask);
        }
    }

    const int final_frame = static_cast<int>(files.size()) - 1;
    std::map<int, int> indicators;
    for (const auto& v : final_analysis.verdicts) {
        const slz::Track* track = tracker.track_of(final_frame, v.zone_id);
        indicators[v.zone_id] = track ? slz::mfv_pass(*track, config.mfv, final_frame) : 0;
    }
    const auto ranking = slz::rank_frame(final_analysis, final_mask, config, indicators);

    nlohmann::ordered_json doc;
    doc["meta"] = meta_json(config, final_mask.width, final_mask.height);
    doc["meta"]["frames"] = static_cast<int>(files.size());
    doc["meta"]["window"] = config.mfv.window;
    doc["frames"] = std::move(frames);
    auto ranked = ranking.ranking;
    if (top > 0 && static_cast<int>(ranked.size()) > top) ranked.resize(top);
    auto& final_doc = doc["final"];
    final_doc["ranking"] = slz::ranking_to_json(ranked);
    if (ranking.selected_zone >= 0) {
        final_doc["selected"] = ranking.selected_zone;
        for (const auto& v : final_analysis.verdicts)
            if (v.zone_id == ranking.selected_zone)
                final_doc["selected_verdict"] = slz::verdict_to_json(v, final_analysis.inference);
    } else {
        final_doc["selected"] = nullptr;
    }

    if (!out_path.empty()) write_json(out_path, doc);
    else std::cout << doc.dump(2) << "\n";
    return ranking.selected_zone >= 0 ? kExitOk : kExitNoSafeZone;
}

int cmd_explain(const std::string& mask_path, const std::string& rules_path,
                const CommonOptions& opts, int zone_id, const std::string& out_path) {
    const auto config = resolve_config(opts);
    const auto pack = load_pack(rules_path);
    const auto mask = load_mask_auto(mask_path);
    const auto analysis = slz::analyze_frame(mask, pack, config);

    const slz::ZoneVerdict* verdict = nullptr;
    for (const auto& v : analysis.verdicts)
        if (v.zone_id == zone_id) verdict = &v;
    if (!verdict) throw Error("unknown zone id " + std::to_string(zone_id));

    std::cout << slz::explain_text(*verdict, analysis.inference);
    if (!out_path.empty())
        write_json(out_path, slz::verdict_to_json(*verdict, analysis.inference));
    return kExitOk;
}

int cmd_eval(const std::string& dataset_dir, const std::string& rules_path,
             const CommonOptions& opts, const std::string& out_csv) {
    const auto config = resolve_config(opts);
    const auto pack = load_pack(rules_path);
    const auto files = list_mask_files(dataset_dir);
    if (files.empty()) {
        std::cerr << "error: no mask files in " << dataset_dir << "\n";
        return kExitInsufficient;
    }

    std::ostringstream csv;
    csv << "scene,zone_id,mission,mod,tcd,score,rank\n";
    double mod_sum = 0.0, tcd_sum = 0.0;
    long rows = 0;
    auto fmt_mod = [](double v) { return std::isinf(v) ? std::string("inf") : slz::fixed6(v); };

    for (const auto& file : files) {
        const auto mask = load_mask_auto(file.string());
        const auto scene = file.stem().string();
        const auto obstacles = slz::obstacle_pixels(mask);

        // A `<scene>.sel` companion pins the touchdown point to evaluate.
        const auto sel_path = fs::path(file).replace_extension(".sel");
        if (fs::exists(sel_path)) {
            std::ifstream sel(sel_path);
            double x = 0.0, y = 0.0;
            if (!(sel >> x >> y)) throw slz::IoError(sel_path.string() + ": expected `x y`");
            const double mod = slz::metric_mod(slz::Point(x, y), obstacles);
            const double tcd = slz::metric_tcd(slz::Point(x, y), mask.width, mask.height);
            csv << scene << ",," << slz::mission_name(config.mission.mission) << ','
                << fmt_mod(mod) << ',' << slz::fixed6(tcd) << ",,\n";
            mod_sum += mod;
            tcd_sum += tcd;
            ++rows;
            continue;
        }

        const auto analysis = slz::analyze_frame(mask, pack, config);
        const auto ranking = slz::rank_frame(analysis, mask, config);
        if (ranking.selected_zone < 0) {
            std::cerr << "note: no surviving zone in " << scene << ", skipped\n";
            continue;
        }
        const auto& best = ranking.ranking.front();
        csv << scene << ',' << best.zone_id << ','
            << slz::mission_name(config.mission.mission) << ',' << fmt_mod(best.mod) << ','
            << slz::fixed6(best.tcd) << ',' << slz::fixed6(best.score) << ',' << best.rank
            << '\n';
        mod_sum += best.mod;
        tcd_sum += best.tcd;
        ++rows;
    }
    if (rows == 0) {
        std::cerr << "error: no scene produced a selection\n";
        return kExitNoSafeZone;
    }
    csv << "mean,," << slz::mission_name(config.mission.mission) << ','
        << fmt_mod(mod_sum / rows) << ',' << slz::fixed6(tcd_sum / rows) << ",,\n";

    if (!out_csv.empty()) write_text(out_csv, csv.str());
    else std::cout << csv.str();
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"safe-landing-zone selection from semantic masks"};
    app.require_subcommand(1);

    std::string rules_path, mask_path, frames_dir, dataset_dir, out_path, pssg_path;
    int zone_id = -1, top = 0;
    CommonOptions opts;

    auto* check = app.add_subcommand("check-rules", "parse and validate a rule pack");
    check->add_option("rules", rules_path, "rule pack (.slz)")->required();

    auto* infer = app.add_subcommand("infer", "single-frame inference and ranking");
    infer->add_option("mask", mask_path, "semantic mask (.grid or .pgm)")->required();
    infer->add_option("rules", rules_path, "rule pack (.slz)")->required();
    infer->add_option("--out", out_path, "write the verdict/ranking JSON here");
    infer->add_option("--pssg", pssg_path, "also dump the scene-graph JSON here");
    infer->add_option("--top", top, "truncate the ranking to the best N");
    add_common(infer, opts);

    auto* run = app.add_subcommand("run", "multi-frame validation over a frame directory");
    run->add_option("frames", frames_dir, "directory of masks, ordered by filename")->required();
    run->add_option("rules", rules_path, "rule pack (.slz)")->required();
    run->add_option("--out", out_path, "write the run JSON here");
    run->add_option("--top", top, "truncate the final ranking to the best N");
    add_common(run, opts);

    auto* explain = app.add_subcommand("explain", "rule-level contributions for one zone");
    explain->add_option("mask", mask_path, "semantic mask")->required();
    explain->add_option("rules", rules_path, "rule pack (.slz)")->required();
    explain->add_option("--zone", zone_id, "zone id to explain")->required();
    explain->add_option("--out", out_path, "write the provenance JSON here");
    add_common(explain, opts);

    auto* eval = app.add_subcommand("eval", "buffer/centering metrics over a dataset");
    eval->add_option("dataset", dataset_dir, "directory of masks")->required();
    eval->add_option("rules", rules_path, "rule pack (.slz)")->required();
    eval->add_option("--out", out_path, "write the CSV here");
    add_common(eval, opts);

    auto* config_default = app.add_subcommand("config-default", "print the default config JSON");
    (void)config_default;

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) return cmd_check_rules(rules_path);
        if (infer->parsed()) return cmd_infer(mask_path, rules_path, opts, out_path, pssg_path, top);
        if (run->parsed()) return cmd_run(frames_dir, rules_path, opts, out_path, top);
        if (explain->parsed()) return cmd_explain(mask_path, rules_path, opts, zone_id, out_path);
        if (eval->parsed()) return cmd_eval(dataset_dir, rules_path, opts, out_path);
        if (config_default->parsed()) {
            std::cout << slz::config_to_json(slz::PipelineConfig{}).dump(2) << "\n";
            return kExitOk;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
