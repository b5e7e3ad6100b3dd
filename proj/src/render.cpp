#include "trailroute/trailgraph.hpp"

namespace trailroute {

namespace {

void stamp(MapImage& img, Pixel p, int radius, Rgb color) {
    for (int dr = -radius; dr <= radius; ++dr) {
        for (int dc = -radius; dc <= radius; ++dc) {
            if (dr * dr + dc * dc > radius * radius) continue;
            if (img.contains(p.row + dr, p.col + dc)) img.set(p.row + dr, p.col + dc, color);
        }
    }
}

}  // namespace

void render_graph(const SimplifiedGraph& g, const MapImage& background, const std::filesystem::path& path) {
    MapImage img = background;
    for (const GraphEdge& e : g.edges) {
        const Rgb color = e.synthetic ? Rgb{255, 0, 255} : Rgb{40, 90, 220};
        for (const Pixel& p : e.chain) {
            if (img.contains(p.row, p.col)) img.set(p.row, p.col, color);
        }
    }
    const auto roles = g.roles();
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        Rgb color{220, 40, 40};
        if (roles[i] == NodeRole::Leaf) color = {240, 220, 0};
        else if (roles[i] == NodeRole::Junction) color = {0, 180, 60};
        else if (roles[i] == NodeRole::Connector || roles[i] == NodeRole::CycleAnchor) color = {40, 90, 220};
        stamp(img, g.nodes[i].pixel, 3, color);
    }
    save_image(img, path);
}

}  // namespace trailroute
