#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <tuple>

#include "trailroute/trailgraph.hpp"

namespace trailroute {

namespace {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    int find(int x) {
        while (parent_[static_cast<std::size_t>(x)] != x) {
            parent_[static_cast<std::size_t>(x)] = parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(x)])];
            x = parent_[static_cast<std::size_t>(x)];
        }
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (b < a) std::swap(a, b);
        parent_[static_cast<std::size_t>(b)] = a;
        return true;
    }

private:
    std::vector<int> parent_;
};

// Incident edge ids per node; a self-loop appears twice.
std::vector<std::vector<int>> incidence(const TrailGraph& g) {
    std::vector<std::vector<int>> inc(g.nodes.size());
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        inc[static_cast<std::size_t>(g.edges[e].a)].push_back(static_cast<int>(e));
        inc[static_cast<std::size_t>(g.edges[e].b)].push_back(static_cast<int>(e));
    }
    return inc;
}

// Append `part` to `chain`, skipping the shared joint pixel.
void append_chain(std::vector<Pixel>& chain, const std::vector<Pixel>& part, bool reversed) {
    if (part.empty()) return;
    const std::size_t n = part.size();
    for (std::size_t k = 0; k < n; ++k) {
        const Pixel p = reversed ? part[n - 1 - k] : part[k];
        if (!chain.empty() && k == 0 && chain.back() == p) continue;
        chain.push_back(p);
    }
}

double chain_length(const std::vector<Pixel>& chain) {
    double len = 0.0;
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) len += distance(chain[i], chain[i + 1]);
    return len;
}

// Splits a closed chain (front == back == node `at`) into two parallel edges
// through a new anchor node at the chain midpoint. Returns false when the
// loop is too short to split.
bool split_loop(TrailGraph& out, int at, const std::vector<Pixel>& chain, bool synthetic) {
    const std::size_t steps = chain.size() - 1;
    if (steps < 2) return false;
    const std::size_t mid = steps / 2;
    const int anchor = static_cast<int>(out.nodes.size());
    out.nodes.push_back({chain[mid], false, true, false});
    out.edges.push_back({at, anchor, {chain.begin(), chain.begin() + static_cast<std::ptrdiff_t>(mid) + 1}, synthetic});
    out.edges.push_back({anchor, at, {chain.begin() + static_cast<std::ptrdiff_t>(mid), chain.end()}, synthetic});
    return true;
}

double directed_hausdorff_exceeds(const std::vector<Pixel>& from, const std::vector<Pixel>& to, double tau) {
    double worst = 0.0;
    for (const Pixel& p : from) {
        double best = std::numeric_limits<double>::infinity();
        for (const Pixel& q : to) {
            best = std::min(best, distance(p, q));
            if (best <= worst) break;
        }
        worst = std::max(worst, best);
        if (worst > tau) return worst;
    }
    return worst;
}

bool near_duplicate(const GraphEdge& x, const GraphEdge& y, double tau) {
    return directed_hausdorff_exceeds(x.chain, y.chain, tau) <= tau &&
           directed_hausdorff_exceeds(y.chain, x.chain, tau) <= tau;
}

}  // namespace

double GraphEdge::length() const noexcept { return chain_length(chain); }

std::string to_string(NodeRole role) {
    switch (role) {
        case NodeRole::Leaf: return "leaf";
        case NodeRole::Junction: return "junction";
        case NodeRole::Connector: return "connector";
        case NodeRole::CycleAnchor: return "cycle-anchor";
        case NodeRole::Terminal: return "terminal";
        case NodeRole::Isolated: return "isolated";
        case NodeRole::Linear: return "linear";
    }
    return "unknown";
}

TrailGraph TrailGraph::from_dense(const DenseGraph& dense) {
    TrailGraph g;
    g.nodes.reserve(dense.node_count());
    for (const Pixel& p : dense.nodes()) g.nodes.push_back({p});
    for (const auto& [i, j] : dense.edges()) {
        g.edges.push_back({i, j, {dense.nodes()[static_cast<std::size_t>(i)], dense.nodes()[static_cast<std::size_t>(j)]}, false});
    }
    return g;
}

std::vector<int> TrailGraph::degrees() const {
    std::vector<int> deg(nodes.size(), 0);
    for (const auto& e : edges) {
        ++deg[static_cast<std::size_t>(e.a)];
        ++deg[static_cast<std::size_t>(e.b)];
    }
    return deg;
}

int TrailGraph::degree(int node) const { return degrees()[static_cast<std::size_t>(node)]; }

NodeRole TrailGraph::role(int node) const { return roles()[static_cast<std::size_t>(node)]; }

std::vector<NodeRole> TrailGraph::roles() const {
    const auto deg = degrees();
    std::vector<NodeRole> out(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const GraphNode& n = nodes[i];
        if (deg[i] == 0) out[i] = NodeRole::Isolated;
        else if (deg[i] == 1) out[i] = NodeRole::Leaf;
        else if (deg[i] >= 3) out[i] = NodeRole::Junction;
        else if (n.connector) out[i] = NodeRole::Connector;
        else if (n.terminal) out[i] = NodeRole::Terminal;
        else if (n.anchor) out[i] = NodeRole::CycleAnchor;
        else out[i] = NodeRole::Linear;
    }
    return out;
}

std::vector<int> TrailGraph::component_labels() const {
    DisjointSets sets(nodes.size());
    for (const auto& e : edges) sets.unite(e.a, e.b);
    std::vector<int> label(nodes.size());
    std::map<int, int> dense_ids;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const int root = sets.find(static_cast<int>(i));
        auto [it, inserted] = dense_ids.emplace(root, static_cast<int>(dense_ids.size()));
        label[i] = it->second;
    }
    return label;
}

int TrailGraph::component_count() const {
    const auto labels = component_labels();
    return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
}

std::size_t TrailGraph::total_steps() const {
    std::size_t s = 0;
    for (const auto& e : edges) s += e.steps();
    return s;
}

std::size_t TrailGraph::synthetic_edge_count() const {
    return static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(), [](const GraphEdge& e) { return e.synthetic; }));
}

std::size_t TrailGraph::count_role(NodeRole role) const {
    const auto r = roles();
    return static_cast<std::size_t>(std::count(r.begin(), r.end(), role));
}

int TrailGraph::node_at(Pixel p) const {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].pixel == p) return static_cast<int>(i);
    }
    return -1;
}

TrailGraph contract_linear_paths(const TrailGraph& g) {
    const auto deg = g.degrees();
    const auto inc = incidence(g);
    auto is_endpoint = [&](int v) { return deg[static_cast<std::size_t>(v)] != 2 || g.nodes[static_cast<std::size_t>(v)].pinned(); };

    TrailGraph out;
    std::vector<int> remap(g.nodes.size(), -1);
    for (std::size_t v = 0; v < g.nodes.size(); ++v) {
        if (is_endpoint(static_cast<int>(v))) {
            remap[v] = static_cast<int>(out.nodes.size());
            out.nodes.push_back(g.nodes[v]);
        }
    }

    std::vector<char> used(g.edges.size(), 0);
    for (std::size_t v = 0; v < g.nodes.size(); ++v) {
        if (remap[v] < 0) continue;
        for (int first : inc[v]) {
            if (used[static_cast<std::size_t>(first)]) continue;
            used[static_cast<std::size_t>(first)] = 1;
            const GraphEdge& e0 = g.edges[static_cast<std::size_t>(first)];
            std::vector<Pixel> chain;
            bool synthetic = e0.synthetic;
            append_chain(chain, e0.chain, e0.a != static_cast<int>(v));
            int cur = e0.a == static_cast<int>(v) ? e0.b : e0.a;
            int came = first;
            while (!is_endpoint(cur)) {
                const auto& slots = inc[static_cast<std::size_t>(cur)];
                const int next = slots[0] == came ? slots[1] : slots[0];
                used[static_cast<std::size_t>(next)] = 1;
                const GraphEdge& en = g.edges[static_cast<std::size_t>(next)];
                synthetic = synthetic || en.synthetic;
                append_chain(chain, en.chain, en.a != cur);
                cur = en.a == cur ? en.b : en.a;
                came = next;
            }
            const int a = remap[v];
            const int b = remap[static_cast<std::size_t>(cur)];
            if (a == b && split_loop(out, a, chain, synthetic)) continue;
            out.edges.push_back({a, b, std::move(chain), synthetic});
        }
    }

    // Whatever is left forms loops made only of unpinned degree-2 nodes.
    for (std::size_t first = 0; first < g.edges.size(); ++first) {
        if (used[first]) continue;
        // Walk the loop once, collecting the closed pixel chain.
        std::vector<Pixel> chain;
        std::vector<int> loop_nodes;
        const int start = g.edges[first].a;
        int cur = start;
        int edge = static_cast<int>(first);
        bool synthetic = false;
        do {
            used[static_cast<std::size_t>(edge)] = 1;
            loop_nodes.push_back(cur);
            const GraphEdge& e = g.edges[static_cast<std::size_t>(edge)];
            synthetic = synthetic || e.synthetic;
            append_chain(chain, e.chain, e.a != cur);
            cur = e.a == cur ? e.b : e.a;
            if (cur == start) break;
            const auto& slots = inc[static_cast<std::size_t>(cur)];
            edge = slots[0] == edge ? slots[1] : slots[0];
        } while (true);

        // Rotate so the chain starts at the lexicographically smallest node pixel.
        Pixel anchor_px = g.nodes[static_cast<std::size_t>(loop_nodes[0])].pixel;
        for (int n : loop_nodes) anchor_px = std::min(anchor_px, g.nodes[static_cast<std::size_t>(n)].pixel);
        chain.pop_back();  // closed chain repeats its first pixel
        const auto pos = std::find(chain.begin(), chain.end(), anchor_px);
        std::rotate(chain.begin(), pos, chain.end());
        chain.push_back(chain.front());

        const int anchor = static_cast<int>(out.nodes.size());
        out.nodes.push_back({anchor_px, false, true, false});
        if (!split_loop(out, anchor, chain, synthetic)) out.nodes.back().anchor = false;
    }
    return out;
}

TrailGraph collapse_nodes(const TrailGraph& g, double tau) {
    if (tau <= 0.0 || g.nodes.empty()) return g;

    // Single-linkage clustering through a uniform grid of cell size tau.
    const double cell = tau;
    std::map<std::pair<long, long>, std::vector<int>> grid;
    auto key = [&](Pixel p) {
        return std::pair<long, long>{static_cast<long>(std::floor(p.row / cell)), static_cast<long>(std::floor(p.col / cell))};
    };
    for (std::size_t i = 0; i < g.nodes.size(); ++i) grid[key(g.nodes[i].pixel)].push_back(static_cast<int>(i));
    DisjointSets sets(g.nodes.size());
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const Pixel p = g.nodes[i].pixel;
        const auto [kr, kc] = key(p);
        for (long dr = -1; dr <= 1; ++dr) {
            for (long dc = -1; dc <= 1; ++dc) {
                const auto it = grid.find({kr + dr, kc + dc});
                if (it == grid.end()) continue;
                for (int j : it->second) {
                    if (j > static_cast<int>(i) && distance(p, g.nodes[static_cast<std::size_t>(j)].pixel) <= tau) {
                        sets.unite(static_cast<int>(i), j);
                    }
                }
            }
        }
    }

    std::map<int, std::vector<int>> clusters;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) clusters[sets.find(static_cast<int>(i))].push_back(static_cast<int>(i));

    TrailGraph out;
    std::vector<int> remap(g.nodes.size(), -1);
    std::vector<char> moved_cluster;
    for (const auto& [root, members] : clusters) {
        double cr = 0.0, cc = 0.0;
        for (int m : members) {
            cr += g.nodes[static_cast<std::size_t>(m)].pixel.row;
            cc += g.nodes[static_cast<std::size_t>(m)].pixel.col;
        }
        cr /= static_cast<double>(members.size());
        cc /= static_cast<double>(members.size());
        int rep = members.front();
        double best = std::numeric_limits<double>::infinity();
        for (int m : members) {
            const Pixel p = g.nodes[static_cast<std::size_t>(m)].pixel;
            const double d = std::hypot(p.row - cr, p.col - cc);
            if (d < best || (d == best && p < g.nodes[static_cast<std::size_t>(rep)].pixel)) {
                best = d;
                rep = m;
            }
        }
        GraphNode node = g.nodes[static_cast<std::size_t>(rep)];
        for (int m : members) {
            node.connector = node.connector || g.nodes[static_cast<std::size_t>(m)].connector;
            node.anchor = node.anchor || g.nodes[static_cast<std::size_t>(m)].anchor;
            node.terminal = node.terminal || g.nodes[static_cast<std::size_t>(m)].terminal;
        }
        const int id = static_cast<int>(out.nodes.size());
        out.nodes.push_back(node);
        moved_cluster.push_back(members.size() > 1 ? 1 : 0);
        for (int m : members) remap[static_cast<std::size_t>(m)] = id;
    }
    // Keep output node order stable by pixel.
    std::vector<int> order(out.nodes.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) { return out.nodes[static_cast<std::size_t>(x)].pixel < out.nodes[static_cast<std::size_t>(y)].pixel; });
    std::vector<int> rank(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) rank[static_cast<std::size_t>(order[k])] = static_cast<int>(k);
    {
        std::vector<GraphNode> sorted(out.nodes.size());
        std::vector<char> sorted_moved(out.nodes.size());
        for (std::size_t k = 0; k < order.size(); ++k) {
            sorted[k] = out.nodes[static_cast<std::size_t>(order[k])];
            sorted_moved[k] = moved_cluster[static_cast<std::size_t>(order[k])];
        }
        out.nodes = std::move(sorted);
        moved_cluster = std::move(sorted_moved);
        for (int& r : remap) r = rank[static_cast<std::size_t>(r)];
    }

    // Re-target edges; chains are extended with straight connectors so they
    // still start and end on their (new) endpoints.
    std::vector<GraphEdge> retargeted;
    std::vector<char> affected;
    for (const GraphEdge& e : g.edges) {
        const int a = remap[static_cast<std::size_t>(e.a)];
        const int b = remap[static_cast<std::size_t>(e.b)];
        std::vector<Pixel> chain;
        append_chain(chain, bresenham(out.nodes[static_cast<std::size_t>(a)].pixel, e.chain.front()), false);
        append_chain(chain, e.chain, false);
        append_chain(chain, bresenham(e.chain.back(), out.nodes[static_cast<std::size_t>(b)].pixel), false);
        const bool touched = moved_cluster[static_cast<std::size_t>(a)] || moved_cluster[static_cast<std::size_t>(b)];
        if (a == b && touched) {
            // Loops that stay within the cluster radius are junction noise.
            double reach = 0.0;
            for (const Pixel& p : chain) reach = std::max(reach, distance(p, out.nodes[static_cast<std::size_t>(a)].pixel));
            if (reach <= tau) continue;
            TrailGraph tmp;
            tmp.nodes = out.nodes;
            if (split_loop(tmp, a, chain, e.synthetic)) {
                out.nodes = std::move(tmp.nodes);
                moved_cluster.push_back(0);
                for (auto& te : tmp.edges) {
                    retargeted.push_back(std::move(te));
                    affected.push_back(0);
                }
            }
            continue;
        }
        retargeted.push_back({a, b, std::move(chain), e.synthetic});
        affected.push_back(touched ? 1 : 0);
    }

    // Parallel edges produced by the merge are collapsed when they trace the
    // same corridor (keep the shortest); distinct loop sides are retained.
    std::map<std::pair<int, int>, std::vector<std::size_t>> groups;
    for (std::size_t k = 0; k < retargeted.size(); ++k) {
        if (!affected[k]) continue;
        const auto& e = retargeted[k];
        groups[{std::min(e.a, e.b), std::max(e.a, e.b)}].push_back(k);
    }
    std::vector<char> drop(retargeted.size(), 0);
    for (auto& [pair, members] : groups) {
        if (members.size() < 2) continue;
        std::stable_sort(members.begin(), members.end(), [&](std::size_t x, std::size_t y) {
            return retargeted[x].steps() < retargeted[y].steps();
        });
        std::vector<std::size_t> kept;
        for (std::size_t k : members) {
            bool dup = false;
            for (std::size_t q : kept) {
                if (near_duplicate(retargeted[k], retargeted[q], tau)) {
                    dup = true;
                    break;
                }
            }
            if (dup) drop[k] = 1;
            else kept.push_back(k);
        }
    }
    for (std::size_t k = 0; k < retargeted.size(); ++k) {
        if (!drop[k]) out.edges.push_back(std::move(retargeted[k]));
    }
    return out;
}

TrailGraph connect_components(const TrailGraph& g) {
    TrailGraph out = g;
    const auto labels = g.component_labels();
    const int comps = g.component_count();
    if (comps <= 1) return out;

    // Closest node pair for every pair of initial components. Merging the
    // globally closest pair repeatedly is Kruskal over these candidates.
    struct Candidate {
        double dist;
        int a;
        int b;
    };
    std::vector<std::vector<int>> members(static_cast<std::size_t>(comps));
    for (std::size_t i = 0; i < g.nodes.size(); ++i) members[static_cast<std::size_t>(labels[i])].push_back(static_cast<int>(i));
    std::vector<Candidate> candidates;
    for (int x = 0; x < comps; ++x) {
        for (int y = x + 1; y < comps; ++y) {
            Candidate best{std::numeric_limits<double>::infinity(), -1, -1};
            for (int i : members[static_cast<std::size_t>(x)]) {
                for (int j : members[static_cast<std::size_t>(y)]) {
                    const double d = distance(g.nodes[static_cast<std::size_t>(i)].pixel, g.nodes[static_cast<std::size_t>(j)].pixel);
                    const int lo = std::min(i, j), hi = std::max(i, j);
                    if (d < best.dist || (d == best.dist && std::tie(lo, hi) < std::tie(best.a, best.b))) best = {d, lo, hi};
                }
            }
            candidates.push_back(best);
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& p, const Candidate& q) {
        return std::tie(p.dist, p.a, p.b) < std::tie(q.dist, q.a, q.b);
    });

    const auto before = g.degrees();
    DisjointSets sets(static_cast<std::size_t>(comps));
    for (const Candidate& c : candidates) {
        if (!sets.unite(labels[static_cast<std::size_t>(c.a)], labels[static_cast<std::size_t>(c.b)])) continue;
        out.edges.push_back({c.a, c.b, bresenham(g.nodes[static_cast<std::size_t>(c.a)].pixel, g.nodes[static_cast<std::size_t>(c.b)].pixel), true});
    }
    const auto after = out.degrees();
    for (std::size_t i = 0; i < out.nodes.size(); ++i) {
        if (after[i] > before[i] && after[i] == 2) out.nodes[i].connector = true;
    }
    return out;
}

SimplifiedGraph simplify(const DenseGraph& dense, double tau) {
    TrailGraph g = TrailGraph::from_dense(dense);
    g = contract_linear_paths(g);
    g = collapse_nodes(g, tau);
    g = contract_linear_paths(g);
    return connect_components(g);
}

}  // namespace trailroute
