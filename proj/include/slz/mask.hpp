#pragma once

#include "slz/types.hpp"

#include <array>
#include <optional>
#include <string>

namespace slz {

inline constexpr int kClassCount = 19;

enum class MaskFormat { GridImage, AsciiGrid };

// Per-pixel semantic labels with optional confidence and elevation layers.
// Immutable after load; shared read-only across pipeline stages.
struct SemanticMask {
    int width  = 0;
    int height = 0;
    LabelGrid labels;                       // values in 0..18
    std::optional<ScalarGrid> confidence;   // in [0,1], defaults to 1.0 everywhere
    std::optional<ScalarGrid> height_grid;  // elevation, arbitrary consistent units

    double confidence_at(int row, int col) const {
        return confidence ? (*confidence)(row, col) : 1.0;
    }
    bool in_bounds(int row, int col) const {
        return row >= 0 && row < height && col >= 0 && col < width;
    }
    double diagonal() const;
};

struct ClassInfo {
    int id = 0;
    std::string name;        // display name, e.g. "paved-area"
    std::string predicate;   // rule-language name, e.g. "paved_area"
    double landable_prior = 0.0;
    double hazard_prior   = 0.0;
    double flatness_prior = 0.0;
};

// Canonical 19-class semantic table. Fixed id assignment 0..18 keeps mask
// files portable across runs and machines.
class ClassTable {
public:
    static const ClassTable& instance();

    const ClassInfo& by_id(int id) const;
    const ClassInfo* by_name(const std::string& name) const;       // nullptr if unknown
    const ClassInfo* by_predicate(const std::string& pred) const;  // nullptr if unknown
    const std::array<ClassInfo, kClassCount>& all() const { return classes_; }

    bool landable(int id) const { return by_id(id).landable_prior >= 1.0; }
    bool hazardous(int id) const { return by_id(id).hazard_prior >= 1.0; }

private:
    ClassTable();
    std::array<ClassInfo, kClassCount> classes_;
};

// Loads a mask plus optional `<stem>.conf` / `<stem>.hgt` companion layers.
// Throws IoError on unreadable files, out-of-range labels (with the offending
// coordinate) or layer dimension mismatches.
SemanticMask load_mask(const std::string& path, MaskFormat format);

// Writes the labels grid in the given format (companions are not written).
void save_mask(const SemanticMask& mask, const std::string& path, MaskFormat format);

// Format guess from the file extension: .pgm -> GridImage, else AsciiGrid.
MaskFormat mask_format_for_path(const std::string& path);

}  // namespace slz
