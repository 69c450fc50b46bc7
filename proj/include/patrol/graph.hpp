#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace patrol {

using VertexId = std::int32_t;
using EdgeId = std::int32_t;  // ordinal index into the directed arc list

struct Vertex {
    VertexId id = 0;
    std::optional<double> x;  // meters, metadata only
    std::optional<double> y;
};

// An edge as authored. Undirected graphs store each edge once.
struct EdgeDef {
    VertexId from = 0;
    VertexId to = 0;
    double weight = 0.0;  // base traversal time, seconds
};

// A directed arc after expansion. The two arcs expanded from one undirected
// edge share a series slot, so edge dynamics hit both directions equally.
struct Arc {
    VertexId from = 0;
    VertexId to = 0;
    double base_weight = 0.0;
    std::int32_t series = 0;
};

// Validated patrol graph. Immutable after construction, so it can be shared
// read-only across concurrently executing runs.
//
// Construction rejects self-loops, duplicate (from,to) pairs, nonpositive or
// non-finite weights, non-dense vertex ids, and topologies that are not
// connected (undirected) or strongly connected (directed).
class PatrolGraph {
public:
    static PatrolGraph create(std::vector<Vertex> vertices, std::vector<EdgeDef> edges,
                              bool directed);

    bool directed() const { return directed_; }
    std::int32_t vertex_count() const { return static_cast<std::int32_t>(vertices_.size()); }
    std::int32_t arc_count() const { return static_cast<std::int32_t>(arcs_.size()); }
    // Number of distinct dynamics channels (= authored edges).
    std::int32_t series_count() const { return static_cast<std::int32_t>(edges_.size()); }

    const std::vector<Vertex>& vertices() const { return vertices_; }
    const std::vector<EdgeDef>& edge_defs() const { return edges_; }
    const std::vector<Arc>& arcs() const { return arcs_; }
    const Arc& arc(EdgeId e) const { return arcs_[static_cast<std::size_t>(e)]; }
    const std::vector<EdgeId>& out_arcs(VertexId v) const {
        return out_arcs_[static_cast<std::size_t>(v)];
    }

    // Arc from->to; throws std::runtime_error if absent.
    EdgeId arc_between(VertexId from, VertexId to) const;

    // Directed copy with per-arc base weights replaced (used when observed
    // travel times redefine the no-congestion reference).
    PatrolGraph with_arc_weights(const std::vector<double>& per_arc) const;

private:
    PatrolGraph() = default;

    bool directed_ = false;
    std::vector<Vertex> vertices_;
    std::vector<EdgeDef> edges_;
    std::vector<Arc> arcs_;
    std::vector<std::vector<EdgeId>> out_arcs_;
};

// Arithmetic mean of base_weight over directed arcs.
double mean_base_weight(const PatrolGraph& g);

// 4-connected lattice, undirected, all edges equal weight. rows, cols >= 2.
PatrolGraph generate_grid_graph(int rows, int cols, double edge_weight);

PatrolGraph load_graph(const std::string& path);
void save_graph(const PatrolGraph& g, const std::string& path);
PatrolGraph graph_from_json_string(const std::string& text);
std::string graph_to_json_string(const PatrolGraph& g);

}  // namespace patrol
