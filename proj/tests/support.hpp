#pragma once

#include "slz/mask.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

namespace testsupport {

inline std::filesystem::path fresh_dir(const std::string& tag) {
    static std::mt19937_64 rng(std::random_device{}());
    const auto base = std::filesystem::temp_directory_path() / "slz_tests";
    std::filesystem::create_directories(base);
    auto dir = base / (tag + "_" + std::to_string(rng()));
    std::filesystem::create_directories(dir);
    return dir;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Builds a mask from rows of whitespace-separated labels, e.g. {"1 1", "0 3"}.
inline slz::SemanticMask mask_from_rows(const std::vector<std::string>& rows) {
    slz::SemanticMask mask;
    std::vector<std::vector<int>> values;
    for (const auto& row : rows) {
        std::istringstream in(row);
        std::vector<int> parsed;
        int v = 0;
        while (in >> v) parsed.push_back(v);
        values.push_back(std::move(parsed));
    }
    mask.height = static_cast<int>(values.size());
    mask.width = static_cast<int>(values.front().size());
    mask.labels.resize(mask.height, mask.width);
    for (int r = 0; r < mask.height; ++r)
        for (int c = 0; c < mask.width; ++c) mask.labels(r, c) = values[r][c];
    return mask;
}

inline std::string grid_text(const slz::SemanticMask& mask) {
    std::ostringstream out;
    out << mask.height << ' ' << mask.width << '\n';
    for (int r = 0; r < mask.height; ++r) {
        for (int c = 0; c < mask.width; ++c) {
            if (c) out << ' ';
            out << mask.labels(r, c);
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace testsupport
