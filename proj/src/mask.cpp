#include "slz/mask.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace slz {

double SemanticMask::diagonal() const {
    return std::hypot(static_cast<double>(width), static_cast<double>(height));
}

namespace {

ClassInfo make_class(int id, std::string name, double landable, double hazard, double flat) {
    ClassInfo c;
    c.id = id;
    c.predicate = name;
    for (auto& ch : c.predicate)
        if (ch == '-') ch = '_';
    c.name = std::move(name);
    c.landable_prior = landable;
    c.hazard_prior = hazard;
    c.flatness_prior = flat;
    return c;
}

}  // namespace

ClassTable::ClassTable() {
    // id order is fixed; priors: landable = candidate touchdown surface,
    // hazard = obstacle source for rules and buffer metrics, flatness = class
    // prior used when no elevation layer is available.
    classes_ = {
        make_class(0, "unlabeled", 0.0, 0.0, 0.5),
        make_class(1, "paved-area", 1.0, 0.0, 1.0),
        make_class(2, "dirt", 1.0, 0.0, 1.0),
        make_class(3, "grass", 1.0, 0.0, 1.0),
        make_class(4, "gravel", 0.0, 0.0, 1.0),
        make_class(5, "water", 0.0, 1.0, 0.0),
        make_class(6, "rocks", 0.0, 1.0, 0.3),
        make_class(7, "pool", 0.0, 1.0, 0.0),
        make_class(8, "roof", 0.0, 1.0, 0.5),
        make_class(9, "wall", 0.0, 1.0, 0.5),
        make_class(10, "window", 0.0, 1.0, 0.5),
        make_class(11, "door", 0.0, 1.0, 0.5),
        make_class(12, "fence", 0.0, 1.0, 0.5),
        make_class(13, "person", 0.0, 1.0, 0.5),
        make_class(14, "dog", 0.0, 1.0, 0.5),
        make_class(15, "car", 0.0, 1.0, 0.5),
        make_class(16, "bicycle", 0.0, 1.0, 0.5),
        make_class(17, "tree", 0.0, 1.0, 0.5),
        make_class(18, "obstacle", 0.0, 1.0, 0.5),
    };
}

const ClassTable& ClassTable::instance() {
    static const ClassTable table;
    return table;
}

const ClassInfo& ClassTable::by_id(int id) const {
    if (id < 0 || id >= kClassCount)
        throw Error("class id out of range: " + std::to_string(id));
    return classes_[static_cast<std::size_t>(id)];
}

const ClassInfo* ClassTable::by_name(const std::string& name) const {
    for (const auto& c : classes_)
        if (c.name == name) return &c;
    return nullptr;
}

const ClassInfo* ClassTable::by_predicate(const std::string& pred) const {
    for (const auto& c : classes_)
        if (c.predicate == pred) return &c;
    return nullptr;
}

namespace {

std::string companion_path(const std::string& path, const char* ext) {
    std::filesystem::path p(path);
    p.replace_extension(ext);
    return p.string();
}

// `H W` header followed by H rows of W whitespace-separated numbers.
ScalarGrid read_ascii_grid(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    int h = 0, w = 0;
    if (!(in >> h >> w) || h <= 0 || w <= 0)
        throw IoError(path + ": bad header, expected `H W` with positive dimensions");
    ScalarGrid g(h, w);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c)
            if (!(in >> g(r, c)))
                throw IoError(path + ": truncated grid at (" + std::to_string(r) + "," +
                              std::to_string(c) + ")");
    return g;
}

LabelGrid read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::string magic;
    in >> magic;
    if (magic != "P2" && magic != "P5")
        throw IoError(path + ": not a P2/P5 PGM image");
    auto next_token = [&]() -> long {
        // PGM headers allow `#` comments between tokens.
        std::string tok;
        while (in >> tok) {
            if (tok[0] == '#') {
                std::string rest;
                std::getline(in, rest);
                continue;
            }
            return std::stol(tok);
        }
        throw IoError(path + ": truncated PGM header");
    };
    const long w = next_token();
    const long h = next_token();
    const long maxval = next_token();
    if (w <= 0 || h <= 0) throw IoError(path + ": bad PGM dimensions");
    if (maxval <= 0 || maxval > 255) throw IoError(path + ": only 8-bit PGM supported");
    LabelGrid g(h, w);
    if (magic == "P5") {
        in.get();  // single whitespace after maxval
        std::vector<unsigned char> buf(static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
        if (in.gcount() != static_cast<std::streamsize>(buf.size()))
            throw IoError(path + ": truncated PGM pixel data");
        for (long r = 0; r < h; ++r)
            for (long c = 0; c < w; ++c)
                g(r, c) = buf[static_cast<std::size_t>(r * w + c)];
    } else {
        for (long r = 0; r < h; ++r)
            for (long c = 0; c < w; ++c) g(r, c) = static_cast<std::int32_t>(next_token());
    }
    return g;
}

void validate_labels(const LabelGrid& labels, const std::string& path) {
    for (int r = 0; r < labels.rows(); ++r)
        for (int c = 0; c < labels.cols(); ++c) {
            const auto v = labels(r, c);
            if (v < 0 || v >= kClassCount)
                throw IoError(path + ": label out of range at (" + std::to_string(r) + "," +
                              std::to_string(c) + "): " + std::to_string(v));
        }
}

}  // namespace

SemanticMask load_mask(const std::string& path, MaskFormat format) {
    SemanticMask mask;
    if (format == MaskFormat::AsciiGrid) {
        const ScalarGrid raw = read_ascii_grid(path);
        mask.labels.resize(raw.rows(), raw.cols());
        for (int r = 0; r < raw.rows(); ++r)
            for (int c = 0; c < raw.cols(); ++c) {
                const double v = raw(r, c);
                if (v != std::floor(v))
                    throw IoError(path + ": non-integer label at (" + std::to_string(r) + "," +
                                  std::to_string(c) + ")");
                mask.labels(r, c) = static_cast<std::int32_t>(v);
            }
    } else {
        mask.labels = read_pgm(path);
    }
    validate_labels(mask.labels, path);
    mask.height = static_cast<int>(mask.labels.rows());
    mask.width = static_cast<int>(mask.labels.cols());

    const std::string conf_path = companion_path(path, ".conf");
    if (std::filesystem::exists(conf_path)) {
        ScalarGrid conf = read_ascii_grid(conf_path);
        if (conf.rows() != mask.labels.rows() || conf.cols() != mask.labels.cols())
            throw IoError(conf_path + ": dimension mismatch with " + path);
        for (int r = 0; r < conf.rows(); ++r)
            for (int c = 0; c < conf.cols(); ++c)
                if (conf(r, c) < 0.0 || conf(r, c) > 1.0)
                    throw IoError(conf_path + ": confidence outside [0,1] at (" +
                                  std::to_string(r) + "," + std::to_string(c) + ")");
        mask.confidence = std::move(conf);
    }
    const std::string hgt_path = companion_path(path, ".hgt");
    if (std::filesystem::exists(hgt_path)) {
        ScalarGrid hgt = read_ascii_grid(hgt_path);
        if (hgt.rows() != mask.labels.rows() || hgt.cols() != mask.labels.cols())
            throw IoError(hgt_path + ": dimension mismatch with " + path);
        mask.height_grid = std::move(hgt);
    }
    return mask;
}

void save_mask(const SemanticMask& mask, const std::string& path, MaskFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    if (format == MaskFormat::AsciiGrid) {
        out << mask.height << ' ' << mask.width << '\n';
        for (int r = 0; r < mask.height; ++r) {
            for (int c = 0; c < mask.width; ++c) {
                if (c) out << ' ';
                out << mask.labels(r, c);
            }
            out << '\n';
        }
    } else {
        out << "P5\n" << mask.width << ' ' << mask.height << "\n255\n";
        std::vector<unsigned char> buf;
        buf.reserve(static_cast<std::size_t>(mask.width) * static_cast<std::size_t>(mask.height));
        for (int r = 0; r < mask.height; ++r)
            for (int c = 0; c < mask.width; ++c)
                buf.push_back(static_cast<unsigned char>(mask.labels(r, c)));
        out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    }
    if (!out) throw IoError("write failed: " + path);
}

MaskFormat mask_format_for_path(const std::string& path) {
    const auto ext = std::filesystem::path(path).extension().string();
    return ext == ".pgm" ? MaskFormat::GridImage : MaskFormat::AsciiGrid;
}

}  // namespace slz
