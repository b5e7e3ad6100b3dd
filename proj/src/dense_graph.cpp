#include <algorithm>
#include <cmath>
#include <numeric>

#include "trailroute/error.hpp"
#include "trailroute/trailgraph.hpp"

namespace trailroute {

DenseGraph::DenseGraph(int height, int width, std::vector<Pixel> nodes)
    : height_(height), width_(width), nodes_(std::move(nodes)) {
    std::sort(nodes_.begin(), nodes_.end());
    index_.assign(static_cast<std::size_t>(height_) * width_, -1);
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        index_[static_cast<std::size_t>(nodes_[i].row) * width_ + nodes_[i].col] = static_cast<int>(i);
    }
    adjacency_.resize(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const Pixel p = nodes_[i];
        for (int dr = -1; dr <= 1; ++dr) {
            for (int dc = -1; dc <= 1; ++dc) {
                if (dr == 0 && dc == 0) continue;
                const int j = node_at({p.row + dr, p.col + dc});
                if (j >= 0) adjacency_[i].push_back(j);
            }
        }
        std::sort(adjacency_[i].begin(), adjacency_[i].end());
    }
}

int DenseGraph::node_at(Pixel p) const noexcept {
    if (p.row < 0 || p.col < 0 || p.row >= height_ || p.col >= width_) return -1;
    return index_[static_cast<std::size_t>(p.row) * width_ + p.col];
}

bool DenseGraph::has_edge(Pixel a, Pixel b) const noexcept {
    const int i = node_at(a);
    const int j = node_at(b);
    if (i < 0 || j < 0 || i == j) return false;
    return std::max(std::abs(a.row - b.row), std::abs(a.col - b.col)) == 1;
}

std::size_t DenseGraph::edge_count() const noexcept {
    std::size_t twice = 0;
    for (const auto& adj : adjacency_) twice += adj.size();
    return twice / 2;
}

std::vector<std::pair<int, int>> DenseGraph::edges() const {
    std::vector<std::pair<int, int>> out;
    for (std::size_t i = 0; i < adjacency_.size(); ++i) {
        for (int j : adjacency_[i]) {
            if (static_cast<int>(i) < j) out.emplace_back(static_cast<int>(i), j);
        }
    }
    return out;
}

int DenseGraph::component_count() const {
    std::vector<int> seen(nodes_.size(), 0);
    int count = 0;
    std::vector<int> stack;
    for (std::size_t s = 0; s < nodes_.size(); ++s) {
        if (seen[s]) continue;
        ++count;
        seen[s] = 1;
        stack.push_back(static_cast<int>(s));
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int v : adjacency_[static_cast<std::size_t>(u)]) {
                if (!seen[static_cast<std::size_t>(v)]) {
                    seen[static_cast<std::size_t>(v)] = 1;
                    stack.push_back(v);
                }
            }
        }
    }
    return count;
}

DenseGraph build_dense_graph(const BinaryRaster& skeleton) {
    auto pixels = skeleton.foreground();
    if (pixels.empty()) throw EmptySkeleton("skeleton has no foreground pixels");
    return DenseGraph(skeleton.height(), skeleton.width(), std::move(pixels));
}

std::vector<Pixel> bresenham(Pixel a, Pixel b) {
    std::vector<Pixel> out;
    int r = a.row, c = a.col;
    const int dr = std::abs(b.row - a.row), dc = std::abs(b.col - a.col);
    const int sr = a.row < b.row ? 1 : -1, sc = a.col < b.col ? 1 : -1;
    int err = dc - dr;
    while (true) {
        out.push_back({r, c});
        if (r == b.row && c == b.col) break;
        const int e2 = 2 * err;
        if (e2 > -dr) {
            err -= dr;
            c += sc;
        }
        if (e2 < dc) {
            err += dc;
            r += sr;
        }
    }
    return out;
}

}  // namespace trailroute
