#pragma once

// Scene builders shared by the CLI and acceptance suites. Everything is
// written to disk so the suites drive the real binary end to end.

#include "support.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

namespace fixtures {

namespace fs = std::filesystem;

inline std::string repo_root() {
    if (const char* env = std::getenv("SLZ_REPO")) return env;
    return ".";
}

inline std::string cli_binary() {
    if (const char* env = std::getenv("SLZ_BIN")) return env;
    return repo_root() + "/build/tools/slz";
}

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

inline CliResult run_cli(const std::string& args, const fs::path& scratch,
                         const std::string& env_prefix = {}) {
    const auto out_path = scratch / "stdout.txt";
    const auto err_path = scratch / "stderr.txt";
    const std::string command = (env_prefix.empty() ? "" : env_prefix + " ") + cli_binary() +
                                " " + args + " > " + out_path.string() + " 2> " +
                                err_path.string();
    const int status = std::system(command.c_str());
    CliResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = testsupport::read_file(out_path);
    result.err = testsupport::read_file(err_path);
    return result;
}

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Case-study scene: paved zone 65, person 89 at an axis gap of 20 px,
// obstacle 95 at a diagonal gap of sqrt(1818)-1. Inert gravel specks pad the
// raster numbering so the ids land exactly on 65/89/95. Confidences are
// chosen so the two firing proximity rules aggregate to 0.888313 and
// 0.777675; the near radius makes the person's proximity the same cube root.
struct CaseStudyScene {
    fs::path mask;
    fs::path config;
    std::string rules;
    double person_weight = 0.888313;
    double obstacle_weight = 0.777675;
};

inline CaseStudyScene write_case_study(const fs::path& dir) {
    const int size = 512;
    std::vector<std::vector<int>> labels(size, std::vector<int>(size, 0));
    std::vector<std::vector<double>> conf(size, std::vector<double>(size, 1.0));

    const double t1 = std::cbrt(0.888313);
    const double radius = 20.0 / (1.0 - t1);

    // 65 gravel specks across row 0: ids 0..64
    for (int i = 0; i < 65; ++i) labels[0][2 * i] = 4;
    // paved zone, 32x32 at (8,8): id 65
    for (int r = 8; r < 40; ++r)
        for (int c = 8; c < 40; ++c) {
            labels[r][c] = 1;
            conf[r][c] = t1;
        }
    // 23 specks across row 9 right of the zone: ids 66..88
    for (int i = 0; i < 23; ++i) labels[9][45 + 2 * i] = 4;
    // person at (24,60), center distance 21 from the zone edge: id 89
    labels[24][60] = 13;
    conf[24][60] = t1;
    // 5 specks at row 26: ids 90..94
    for (int i = 0; i < 5; ++i) labels[26][45 + 2 * i] = 4;
    // obstacle at (66,72), offset (27,33) from the zone corner: id 95
    const double near_obstacle = 1.0 - (std::sqrt(1818.0) - 1.0) / radius;
    const double obstacle_conf = 0.777675 / (t1 * near_obstacle);
    labels[66][72] = 18;
    conf[66][72] = obstacle_conf;

    std::string grid = std::to_string(size) + " " + std::to_string(size) + "\n";
    for (int r = 0; r < size; ++r) {
        for (int c = 0; c < size; ++c) {
            if (c) grid += ' ';
            grid += std::to_string(labels[r][c]);
        }
        grid += '\n';
    }
    std::string conf_text = std::to_string(size) + " " + std::to_string(size) + "\n";
    for (int r = 0; r < size; ++r) {
        for (int c = 0; c < size; ++c) {
            if (c) conf_text += ' ';
            conf_text += fmt17(conf[r][c]);
        }
        conf_text += '\n';
    }

    CaseStudyScene scene;
    scene.mask = dir / "case_study.grid";
    scene.config = dir / "case_study.json";
    scene.rules = repo_root() + "/rules/case_study.slz";
    testsupport::write_file(scene.mask, grid);
    testsupport::write_file(dir / "case_study.conf", conf_text);
    testsupport::write_file(scene.config,
                            "{\n  \"relations\": {\"near_radius\": " + fmt17(radius) +
                                "}\n}\n");
    return scene;
}

// ---------------------------------------------------------------------------
// Backyard scene: a grass field with a pool block on the right edge and a
// fence strip along the bottom. Grid cells are the landing candidates; the
// pool-adjacent column must fail while interior cells pass.
struct BackyardScene {
    fs::path mask;
    fs::path config;
    std::string rules;
    std::vector<int> pool_adjacent_cells;  // zone ids of the failing column
};

inline BackyardScene write_backyard(const fs::path& dir) {
    const int size = 256;
    std::vector<std::vector<int>> labels(size, std::vector<int>(size, 3));
    for (int r = 0; r < size; ++r)
        for (int c = 192; c < size; ++c) labels[r][c] = 7;  // pool
    for (int r = 252; r < size; ++r)
        for (int c = 0; c < 192; ++c) labels[r][c] = 12;  // fence

    std::string grid = std::to_string(size) + " " + std::to_string(size) + "\n";
    for (int r = 0; r < size; ++r) {
        for (int c = 0; c < size; ++c) {
            if (c) grid += ' ';
            grid += std::to_string(labels[r][c]);
        }
        grid += '\n';
    }

    BackyardScene scene;
    scene.mask = dir / "backyard.grid";
    scene.config = dir / "backyard.json";
    scene.rules = repo_root() + "/rules/landing.slz";
    testsupport::write_file(scene.mask, grid);
    testsupport::write_file(scene.config,
                            R"({
  "mission": {"name": "safe_landing"},
  "grid": {"enabled": true, "cell_px": 64}
}
)");
    // raster numbering: three qualifying cells per row, with the pool region
    // itself taking id 3 and the fence id 13
    scene.pool_adjacent_cells = {2, 6, 9, 12};
    return scene;
}

// ---------------------------------------------------------------------------
// Parking-lot frame sequence: a paved field split into 16 cells; a person
// crosses the most central cell in the middle frame.
struct ParkingScene {
    fs::path frames_dir;
    fs::path config;
    std::string rules;
    int top_cell = 10;     // cell (2,2): nearest centroid to the image center
    int runner_up = 6;     // next-closest on the tie-break chain
    int person_frame = 2;  // 0-based
};

inline ParkingScene write_parking(const fs::path& dir, int frames = 5) {
    ParkingScene scene;
    scene.frames_dir = dir / "frames";
    fs::create_directories(scene.frames_dir);
    const int size = 256;
    for (int f = 0; f < frames; ++f) {
        std::vector<std::vector<int>> labels(size, std::vector<int>(size, 1));
        if (f == scene.person_frame)
            for (int r = 158; r < 161; ++r)
                for (int c = 158; c < 161; ++c) labels[r][c] = 13;
        std::string grid = std::to_string(size) + " " + std::to_string(size) + "\n";
        for (int r = 0; r < size; ++r) {
            for (int c = 0; c < size; ++c) {
                if (c) grid += ' ';
                grid += std::to_string(labels[r][c]);
            }
            grid += '\n';
        }
        char name[32];
        std::snprintf(name, sizeof(name), "frame%02d.grid", f);
        testsupport::write_file(scene.frames_dir / name, grid);
    }
    scene.config = dir / "parking.json";
    scene.rules = repo_root() + "/rules/landing.slz";
    testsupport::write_file(scene.config,
                            R"({
  "mission": {"name": "emergency"},
  "grid": {"enabled": true, "cell_px": 64}
}
)");
    return scene;
}

}  // namespace fixtures
