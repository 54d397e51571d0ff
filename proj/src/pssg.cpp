#include "slz/pssg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace slz {

namespace {

constexpr long long kNoContact = std::numeric_limits<long long>::max();

bool is_movable_class(int class_id) {
    const auto& name = ClassTable::instance().by_id(class_id).name;
    return name == "person" || name == "dog" || name == "car" || name == "bicycle";
}

// Squared center-distance lower bound from the bounding boxes.
long long bbox_gap2(const Region& a, const Region& b) {
    const long long dr = std::max({0, a.bbox_min_row - b.bbox_max_row, b.bbox_min_row - a.bbox_max_row});
    const long long dc = std::max({0, a.bbox_min_col - b.bbox_max_col, b.bbox_min_col - a.bbox_max_col});
    return dr * dr + dc * dc;
}

long long min_center_dist2(const Region& a, const Region& b) {
    long long best = kNoContact;
    for (const auto& p : a.boundary) {
        for (const auto& q : b.boundary) {
            const long long dr = p.row - q.row;
            const long long dc = p.col - q.col;
            best = std::min(best, dr * dr + dc * dc);
            if (best <= 1) return best;  // touching, cannot improve
        }
    }
    return best;
}

struct PixelSet {
    int min_row, min_col, rows, cols;
    std::vector<std::uint8_t> bits;

    explicit PixelSet(const Region& region)
        : min_row(region.bbox_min_row),
          min_col(region.bbox_min_col),
          rows(region.bbox_max_row - region.bbox_min_row + 1),
          cols(region.bbox_max_col - region.bbox_min_col + 1),
          bits(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0) {
        for (const auto& p : region.pixels)
            bits[static_cast<std::size_t>(p.row - min_row) * cols + (p.col - min_col)] = 1;
    }

    bool in(int row, int col) const {
        const int r = row - min_row, c = col - min_col;
        if (r < 0 || r >= rows || c < 0 || c >= cols) return false;
        return bits[static_cast<std::size_t>(r) * cols + c] != 0;
    }
};

}  // namespace

double region_gap(const Region& a, const Region& b) {
    const long long d2 = min_center_dist2(a, b);
    if (d2 == kNoContact) return std::numeric_limits<double>::infinity();
    return std::max(0.0, std::sqrt(static_cast<double>(d2)) - 1.0);
}

double relation_near(const Region& a, const Region& b, double radius) {
    if (radius <= 0.0) return 0.0;
    const double bound = std::sqrt(static_cast<double>(bbox_gap2(a, b))) - 1.0;
    if (bound >= radius) return 0.0;
    const double gap = region_gap(a, b);
    return std::clamp(1.0 - gap / radius, 0.0, 1.0);
}

double relation_adjacent(const Region& a, const Region& b, double tau_adj) {
    if (bbox_gap2(a, b) > 1) return 0.0;
    const PixelSet other(b);
    long shared = 0;
    static constexpr int dr[4] = {-1, 1, 0, 0};
    static constexpr int dc[4] = {0, 0, -1, 1};
    for (const auto& p : a.boundary)
        for (int k = 0; k < 4; ++k)
            if (other.in(p.row + dr[k], p.col + dc[k])) ++shared;
    if (shared == 0) return 0.0;
    return std::min(1.0, static_cast<double>(shared) / tau_adj);
}

double relation_contain(const Region& outer, const Region& inner) {
    if (inner.bbox_min_row > outer.bbox_max_row || inner.bbox_max_row < outer.bbox_min_row ||
        inner.bbox_min_col > outer.bbox_max_col || inner.bbox_max_col < outer.bbox_min_col)
        return 0.0;
    long inside = 0;
    for (const auto& p : inner.pixels)
        if (point_in_polygon(Point(p.col + 0.5, p.row + 0.5), outer.contour)) ++inside;
    return static_cast<double>(inside) / static_cast<double>(inner.area);
}

double relation_surrounded(const Region& a, const Region& b, double radius, double theta) {
    if (a.boundary.empty() || radius <= 0.0) return 0.0;
    const double bound = std::sqrt(static_cast<double>(bbox_gap2(a, b))) - 1.0;
    if (bound > radius) return 0.0;
    long within = 0;
    for (const auto& p : a.boundary) {
        long long best = kNoContact;
        for (const auto& q : b.boundary) {
            const long long dr = p.row - q.row;
            const long long dc = p.col - q.col;
            best = std::min(best, dr * dr + dc * dc);
            if (best <= 1) break;
        }
        const double gap = std::max(0.0, std::sqrt(static_cast<double>(best)) - 1.0);
        if (gap <= radius) ++within;
    }
    const double frac = static_cast<double>(within) / static_cast<double>(a.boundary.size());
    return std::clamp(frac / theta, 0.0, 1.0);
}

double pool_relation(std::span<const double> ps) {
    double acc = 0.0;
    for (const double p : ps) acc = 1.0 - (1.0 - acc) * (1.0 - p);
    return acc;
}

Pssg build_pssg(std::vector<Region> regions, const RelationParams& params, int width, int height,
                int frame_index) {
    Pssg g;
    g.nodes = std::move(regions);
    g.width = width;
    g.height = height;
    g.frame_index = frame_index;

    const double radius = params.resolved_near_radius(width, height);
    const double eps = params.fact_floor;
    auto emit = [&](int src, int dst, const char* rel, double p, double center_dist = -1.0) {
        if (p >= eps) g.edges.push_back({src, dst, rel, p, center_dist});
    };

    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        for (std::size_t j = i + 1; j < g.nodes.size(); ++j) {
            const Region& a = g.nodes[i];
            const Region& b = g.nodes[j];
            const double center_dist = (a.centroid - b.centroid).norm();

            const double near = relation_near(a, b, radius);
            emit(a.id, b.id, "near_to", near, center_dist);
            emit(b.id, a.id, "near_to", near, center_dist);
            emit(a.id, b.id, "far_from", 1.0 - near, center_dist);
            emit(b.id, a.id, "far_from", 1.0 - near, center_dist);

            const double adj = relation_adjacent(a, b, params.tau_adj);
            emit(a.id, b.id, "adjacent_to", adj);
            emit(b.id, a.id, "adjacent_to", adj);

            const double cont_ab = relation_contain(a, b);
            const double cont_ba = relation_contain(b, a);
            emit(a.id, b.id, "contain", cont_ab);
            emit(b.id, a.id, "contain", cont_ba);
            if (cont_ab >= params.theta_cont && is_movable_class(b.class_id))
                emit(b.id, a.id, "on", cont_ab);
            if (cont_ba >= params.theta_cont && is_movable_class(a.class_id))
                emit(a.id, b.id, "on", cont_ba);

            emit(a.id, b.id, "surrounded_by",
                 relation_surrounded(a, b, radius, params.theta_sur));
            emit(b.id, a.id, "surrounded_by",
                 relation_surrounded(b, a, radius, params.theta_sur));

            // Directional edges use centroid offsets only; binary by margin.
            const double dx = b.centroid.x() - a.centroid.x();
            const double dy = b.centroid.y() - a.centroid.y();
            if (dy > params.directional_margin) {
                emit(a.id, b.id, "above", 1.0);
                emit(b.id, a.id, "bottom", 1.0);
            } else if (-dy > params.directional_margin) {
                emit(b.id, a.id, "above", 1.0);
                emit(a.id, b.id, "bottom", 1.0);
            }
            if (dx > params.directional_margin) {
                emit(a.id, b.id, "left", 1.0);
                emit(b.id, a.id, "right", 1.0);
            } else if (-dx > params.directional_margin) {
                emit(b.id, a.id, "left", 1.0);
                emit(a.id, b.id, "right", 1.0);
            }
        }
    }

    std::sort(g.edges.begin(), g.edges.end(), [](const Edge& x, const Edge& y) {
        if (x.src != y.src) return x.src < y.src;
        if (x.dst != y.dst) return x.dst < y.dst;
        return x.relation < y.relation;
    });
    return g;
}

nlohmann::json pssg_to_json(const Pssg& pssg) {
    nlohmann::ordered_json doc;
    doc["frame"] = pssg.frame_index;
    doc["image_size"] = {pssg.width, pssg.height};
    auto& nodes = doc["nodes"] = nlohmann::ordered_json::array();
    for (const auto& n : pssg.nodes) {
        nlohmann::ordered_json jn;
        jn["id"] = n.id;
        jn["class"] = ClassTable::instance().by_id(n.class_id).name;
        jn["class_prob"] = n.class_prob;
        jn["area"] = n.area;
        jn["centroid"] = {n.centroid.x(), n.centroid.y()};
        jn["bbox"] = {n.bbox_min_col, n.bbox_min_row, n.bbox_max_col, n.bbox_max_row};
        jn["orientation"] = n.orientation;
        jn["compactness"] = n.compactness;
        auto& contour = jn["contour"] = nlohmann::ordered_json::array();
        for (const auto& v : n.contour) contour.push_back({v.x(), v.y()});
        nlohmann::ordered_json attrs;
        for (const auto& [name, p] : n.attributes) attrs[name] = p;
        jn["attributes"] = std::move(attrs);
        nodes.push_back(std::move(jn));
    }
    auto& edges = doc["edges"] = nlohmann::ordered_json::array();
    for (const auto& e : pssg.edges) {
        nlohmann::ordered_json je;
        je["src"] = e.src;
        je["dst"] = e.dst;
        je["relation"] = e.relation;
        je["p"] = e.prob;
        if (e.center_dist >= 0.0) je["center_dist"] = e.center_dist;
        edges.push_back(std::move(je));
    }
    return doc;
}

Pssg pssg_from_json(const nlohmann::json& doc) {
    Pssg g;
    g.frame_index = doc.at("frame").get<int>();
    g.width = doc.at("image_size").at(0).get<int>();
    g.height = doc.at("image_size").at(1).get<int>();
    for (const auto& jn : doc.at("nodes")) {
        Region n;
        n.id = jn.at("id").get<int>();
        const auto* info = ClassTable::instance().by_name(jn.at("class").get<std::string>());
        if (!info) throw Error("unknown class name in scene graph: " + jn.at("class").get<std::string>());
        n.class_id = info->id;
        n.class_prob = jn.at("class_prob").get<double>();
        n.area = jn.at("area").get<int>();
        n.centroid = Point(jn.at("centroid").at(0).get<double>(), jn.at("centroid").at(1).get<double>());
        n.bbox_min_col = jn.at("bbox").at(0).get<int>();
        n.bbox_min_row = jn.at("bbox").at(1).get<int>();
        n.bbox_max_col = jn.at("bbox").at(2).get<int>();
        n.bbox_max_row = jn.at("bbox").at(3).get<int>();
        n.orientation = jn.at("orientation").get<double>();
        n.compactness = jn.at("compactness").get<double>();
        for (const auto& v : jn.at("contour"))
            n.contour.push_back(Point(v.at(0).get<double>(), v.at(1).get<double>()));
        for (const auto& [name, p] : jn.at("attributes").items())
            n.attributes[name] = p.get<double>();
        g.nodes.push_back(std::move(n));
    }
    for (const auto& je : doc.at("edges")) {
        Edge e;
        e.src = je.at("src").get<int>();
        e.dst = je.at("dst").get<int>();
        e.relation = je.at("relation").get<std::string>();
        e.prob = je.at("p").get<double>();
        if (je.contains("center_dist")) e.center_dist = je.at("center_dist").get<double>();
        g.edges.push_back(std::move(e));
    }
    return g;
}

}  // namespace slz
