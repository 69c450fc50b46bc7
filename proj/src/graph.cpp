#include "patrol/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

namespace patrol {
namespace {

using ordered_json = nlohmann::ordered_json;

// Marks everything reachable from vertex 0 over the given adjacency.
std::vector<char> reachable_from_zero(const std::vector<std::vector<VertexId>>& adj) {
    std::vector<char> seen(adj.size(), 0);
    std::deque<VertexId> queue{0};
    seen[0] = 1;
    while (!queue.empty()) {
        const VertexId v = queue.front();
        queue.pop_front();
        for (VertexId u : adj[static_cast<std::size_t>(v)]) {
            if (!seen[static_cast<std::size_t>(u)]) {
                seen[static_cast<std::size_t>(u)] = 1;
                queue.push_back(u);
            }
        }
    }
    return seen;
}

void check_connectivity(const PatrolGraph& g) {
    const auto n = static_cast<std::size_t>(g.vertex_count());
    std::vector<std::vector<VertexId>> fwd(n), rev(n);
    for (const Arc& a : g.arcs()) {
        fwd[static_cast<std::size_t>(a.from)].push_back(a.to);
        rev[static_cast<std::size_t>(a.to)].push_back(a.from);
    }
    const auto seen_fwd = reachable_from_zero(fwd);
    for (std::size_t v = 0; v < n; ++v) {
        if (!seen_fwd[v]) {
            throw std::runtime_error("graph validation: disconnected (vertex " +
                                     std::to_string(v) + " unreachable)");
        }
    }
    if (g.directed()) {
        const auto seen_rev = reachable_from_zero(rev);
        for (std::size_t v = 0; v < n; ++v) {
            if (!seen_rev[v]) {
                throw std::runtime_error(
                    "graph validation: disconnected (vertex " + std::to_string(v) +
                    " cannot reach vertex 0; strong connectivity required)");
            }
        }
    }
}

ordered_json graph_to_json(const PatrolGraph& g) {
    ordered_json j;
    j["directed"] = g.directed();
    j["vertices"] = ordered_json::array();
    for (const Vertex& v : g.vertices()) {
        ordered_json jv;
        jv["id"] = v.id;
        if (v.x) jv["x"] = *v.x;
        if (v.y) jv["y"] = *v.y;
        j["vertices"].push_back(std::move(jv));
    }
    j["edges"] = ordered_json::array();
    for (const EdgeDef& e : g.edge_defs()) {
        j["edges"].push_back({{"from", e.from}, {"to", e.to}, {"weight", e.weight}});
    }
    return j;
}

PatrolGraph graph_from_json(const ordered_json& j) {
    if (!j.is_object() || !j.contains("directed") || !j.contains("vertices") ||
        !j.contains("edges")) {
        throw std::runtime_error("graph parse: expected object with directed/vertices/edges");
    }
    std::vector<Vertex> vertices;
    for (const auto& jv : j.at("vertices")) {
        Vertex v;
        v.id = jv.at("id").get<VertexId>();
        if (jv.contains("x")) v.x = jv.at("x").get<double>();
        if (jv.contains("y")) v.y = jv.at("y").get<double>();
        vertices.push_back(v);
    }
    std::vector<EdgeDef> edges;
    for (const auto& je : j.at("edges")) {
        edges.push_back({je.at("from").get<VertexId>(), je.at("to").get<VertexId>(),
                         je.at("weight").get<double>()});
    }
    return PatrolGraph::create(std::move(vertices), std::move(edges),
                               j.at("directed").get<bool>());
}

}  // namespace

PatrolGraph PatrolGraph::create(std::vector<Vertex> vertices, std::vector<EdgeDef> edges,
                                bool directed) {
    PatrolGraph g;
    g.directed_ = directed;
    g.vertices_ = std::move(vertices);
    g.edges_ = std::move(edges);

    std::sort(g.vertices_.begin(), g.vertices_.end(),
              [](const Vertex& a, const Vertex& b) { return a.id < b.id; });
    const auto n = static_cast<std::int32_t>(g.vertices_.size());
    if (n < 2) {
        throw std::runtime_error("graph validation: need at least 2 vertices");
    }
    for (std::int32_t i = 0; i < n; ++i) {
        if (g.vertices_[static_cast<std::size_t>(i)].id != i) {
            throw std::runtime_error("graph validation: vertex ids must be dense 0..|V|-1");
        }
    }

    std::unordered_set<std::int64_t> seen;
    const auto pair_key = [n](VertexId a, VertexId b) {
        return static_cast<std::int64_t>(a) * n + b;
    };
    for (const EdgeDef& e : g.edges_) {
        if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n) {
            throw std::runtime_error("graph validation: edge endpoint out of range");
        }
        if (e.from == e.to) {
            throw std::runtime_error("graph validation: self-loop at vertex " +
                                     std::to_string(e.from));
        }
        if (!std::isfinite(e.weight) || e.weight <= 0.0) {
            throw std::runtime_error("graph validation: nonpositive weight on edge " +
                                     std::to_string(e.from) + "->" + std::to_string(e.to));
        }
        if (!seen.insert(pair_key(e.from, e.to)).second ||
            (!directed && !seen.insert(pair_key(e.to, e.from)).second)) {
            throw std::runtime_error("graph validation: duplicate edge " +
                                     std::to_string(e.from) + "->" + std::to_string(e.to));
        }
    }

    g.arcs_.reserve(directed ? g.edges_.size() : 2 * g.edges_.size());
    for (std::size_t i = 0; i < g.edges_.size(); ++i) {
        const EdgeDef& e = g.edges_[i];
        const auto series = static_cast<std::int32_t>(i);
        g.arcs_.push_back({e.from, e.to, e.weight, series});
        if (!directed) {
            g.arcs_.push_back({e.to, e.from, e.weight, series});
        }
    }

    g.out_arcs_.assign(static_cast<std::size_t>(n), {});
    for (std::size_t i = 0; i < g.arcs_.size(); ++i) {
        g.out_arcs_[static_cast<std::size_t>(g.arcs_[i].from)].push_back(
            static_cast<EdgeId>(i));
    }

    check_connectivity(g);
    return g;
}

EdgeId PatrolGraph::arc_between(VertexId from, VertexId to) const {
    for (EdgeId e : out_arcs(from)) {
        if (arc(e).to == to) return e;
    }
    throw std::runtime_error("graph: no arc " + std::to_string(from) + "->" +
                             std::to_string(to));
}

PatrolGraph PatrolGraph::with_arc_weights(const std::vector<double>& per_arc) const {
    if (per_arc.size() != arcs_.size()) {
        throw std::runtime_error("graph: weight count does not match arc count");
    }
    std::vector<EdgeDef> edges;
    edges.reserve(arcs_.size());
    for (std::size_t i = 0; i < arcs_.size(); ++i) {
        edges.push_back({arcs_[i].from, arcs_[i].to, per_arc[i]});
    }
    return create(vertices_, std::move(edges), /*directed=*/true);
}

double mean_base_weight(const PatrolGraph& g) {
    double sum = 0.0;
    for (const Arc& a : g.arcs()) sum += a.base_weight;
    return sum / static_cast<double>(g.arc_count());
}

PatrolGraph generate_grid_graph(int rows, int cols, double edge_weight) {
    if (rows < 2 || cols < 2) {
        throw std::runtime_error("grid graph: rows and cols must both be >= 2");
    }
    std::vector<Vertex> vertices;
    vertices.reserve(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            Vertex v;
            v.id = static_cast<VertexId>(r * cols + c);
            v.x = static_cast<double>(c);
            v.y = static_cast<double>(r);
            vertices.push_back(v);
        }
    }
    std::vector<EdgeDef> edges;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const VertexId v = static_cast<VertexId>(r * cols + c);
            if (c + 1 < cols) edges.push_back({v, v + 1, edge_weight});
            if (r + 1 < rows) edges.push_back({v, v + cols, edge_weight});
        }
    }
    return PatrolGraph::create(std::move(vertices), std::move(edges), /*directed=*/false);
}

PatrolGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("graph: cannot open " + path);
    }
    ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::runtime_error("graph parse: " + path + ": " + e.what());
    }
    return graph_from_json(j);
}

void save_graph(const PatrolGraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("graph: cannot write " + path);
    }
    out << graph_to_json(g).dump(2) << '\n';
}

PatrolGraph graph_from_json_string(const std::string& text) {
    return graph_from_json(ordered_json::parse(text));
}

std::string graph_to_json_string(const PatrolGraph& g) {
    return graph_to_json(g).dump(2);
}

}  // namespace patrol
