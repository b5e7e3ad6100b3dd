#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "trailroute/geometry.hpp"
#include "trailroute/raster.hpp"

namespace trailroute {

/// Pixel-adjacency graph of a skeleton: one node per foreground pixel, one
/// edge per pair of foreground pixels at Chebyshev distance 1.
class DenseGraph {
public:
    DenseGraph() = default;
    DenseGraph(int height, int width, std::vector<Pixel> nodes);

    int height() const noexcept { return height_; }
    int width() const noexcept { return width_; }
    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t edge_count() const noexcept;

    const std::vector<Pixel>& nodes() const noexcept { return nodes_; }
    const std::vector<int>& neighbours(int node) const { return adjacency_[static_cast<std::size_t>(node)]; }

    /// Node id at `p`, or -1.
    int node_at(Pixel p) const noexcept;
    bool has_edge(Pixel a, Pixel b) const noexcept;

    /// Unordered edges as (lower id, higher id), sorted.
    std::vector<std::pair<int, int>> edges() const;

    int component_count() const;

private:
    int height_ = 0;
    int width_ = 0;
    std::vector<Pixel> nodes_;
    std::vector<std::vector<int>> adjacency_;
    std::vector<int> index_;
};

/// Throws EmptySkeleton when the skeleton has no foreground.
DenseGraph build_dense_graph(const BinaryRaster& skeleton);

enum class NodeRole {
    Leaf,         // degree 1
    Junction,     // degree >= 3
    Connector,    // former leaf that gained a synthetic edge
    CycleAnchor,  // degree-2 node pinned to keep a loop representable
    Terminal,     // degree-2 node inserted where start/goal snapped mid-edge
    Isolated,     // degree 0
    Linear,       // plain degree 2 (only before contraction)
};

std::string to_string(NodeRole role);

struct GraphNode {
    Pixel pixel;
    bool connector = false;
    bool anchor = false;
    bool terminal = false;

    bool pinned() const noexcept { return connector || anchor || terminal; }
};

/// Edge of the reduced graph; `chain` is the pixel polyline from node `a`
/// to node `b`, both endpoints included.
struct GraphEdge {
    int a = 0;
    int b = 0;
    std::vector<Pixel> chain;
    bool synthetic = false;

    /// Number of pixel steps along the chain.
    std::size_t steps() const noexcept { return chain.empty() ? 0 : chain.size() - 1; }
    /// Geometric chain length in pixels.
    double length() const noexcept;
};

/// Multigraph over pixel positions carrying the contracted pixel chains.
/// Used for every simplification stage; parallel edges are allowed.
class TrailGraph {
public:
    std::vector<GraphNode> nodes;
    std::vector<GraphEdge> edges;

    static TrailGraph from_dense(const DenseGraph& dense);

    std::vector<int> degrees() const;
    int degree(int node) const;
    NodeRole role(int node) const;
    std::vector<NodeRole> roles() const;
    int component_count() const;
    std::vector<int> component_labels() const;
    /// Total chain steps over all edges.
    std::size_t total_steps() const;
    std::size_t synthetic_edge_count() const;
    std::size_t count_role(NodeRole role) const;
    int node_at(Pixel p) const;
};

using SimplifiedGraph = TrailGraph;

inline constexpr double kDefaultCollapseTau = 8.0;

/// Stage 1/3: replace every maximal chain of unpinned degree-2 nodes by one
/// edge carrying the concatenated pixel chain. Loops without any endpoint
/// are anchored at their lexicographically smallest pixel plus the chain
/// midpoint, giving two parallel edges; self-loops are split the same way.
TrailGraph contract_linear_paths(const TrailGraph& g);

/// Stage 2: single-linkage clustering of nodes at distance tau, replacing
/// each cluster by the member nearest its centroid.
TrailGraph collapse_nodes(const TrailGraph& g, double tau);

/// Stage 4: join components through their globally closest node pair until
/// one component remains. Added edges are flagged synthetic.
TrailGraph connect_components(const TrailGraph& g);

/// All four stages in order.
SimplifiedGraph simplify(const DenseGraph& dense, double tau = kDefaultCollapseTau);

inline constexpr double kDefaultSnapRadius = 50.0;
inline constexpr double kDefaultWaypointSpacing = 64.0;

struct PlanOptions {
    double snap_radius = kDefaultSnapRadius;
    double waypoint_spacing = kDefaultWaypointSpacing;
    /// Cost multiplier for re-walking an already used edge when expanding a
    /// leg; makes loops return along their unused side.
    double reuse_penalty = 3.0;
    /// Half-width of the pixel corridor around an edge chain searched when
    /// recovering the dense path.
    double corridor = 10.0;
};

struct WaypointPlan {
    /// Graph after start/goal insertion; node ids below refer to it.
    SimplifiedGraph graph;
    std::vector<int> visit_order;
    std::vector<Pixel> visit_pixels;
    std::vector<Pixel> dense_path;
    std::vector<Pixel> waypoints;

    double dense_length() const;
};

/// Snap start/goal to the graph (within the snap radius), order every key
/// node greedily by graph distance and recover the dense pixel path.
WaypointPlan plan_visit(const SimplifiedGraph& g, const DenseGraph& dense, Pixel start, Pixel goal,
                        const PlanOptions& options = {});

/// Indices into `path` sampled at most `spacing` pixels apart along the
/// path, always including first, last and every index in `forced`.
std::vector<std::size_t> sample_path(const std::vector<Pixel>& path, double spacing,
                                     const std::vector<std::size_t>& forced = {});

/// 8-connected digital line from a to b, both endpoints included.
std::vector<Pixel> bresenham(Pixel a, Pixel b);

/// Debug overlay: edges blue (synthetic magenta), leaves yellow, junctions
/// green, degree-2 nodes blue.
void render_graph(const SimplifiedGraph& g, const MapImage& background, const std::filesystem::path& path);

}  // namespace trailroute
