#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace slz {

// Row-major grids indexed as (row, col); x = col, y = row throughout.
using LabelGrid  = Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ScalarGrid = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Point   = Eigen::Vector2d;              // (x, y)
using Polygon = std::vector<Point>;           // closed ring, last edge implied

struct Pixel {
    int row = 0;
    int col = 0;
    friend bool operator==(const Pixel&, const Pixel&) = default;
};

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : Error {
    using Error::Error;
};

// Rule-text errors carry a 1-based source position.
struct ParseError : Error {
    int line = 0;
    int col  = 0;
    ParseError(int line_, int col_, const std::string& msg)
        : Error("line " + std::to_string(line_) + ", col " + std::to_string(col_) + ": " + msg),
          line(line_), col(col_) {}
};

}  // namespace slz
