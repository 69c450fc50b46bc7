#pragma once

#include <atomic>
#include <filesystem>
#include <string>
#include <vector>

#include <unistd.h>

#include "patrol/graph.hpp"
#include "patrol/rng.hpp"

namespace testutil {

// Scratch directory removed on scope exit.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("patrol_" + tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

// Random connected graph: spanning tree plus extra edges. Directed graphs
// get both orientations of every tree edge, so they stay strongly connected
// whatever extras are added.
inline patrol::PatrolGraph random_connected_graph(patrol::Rng& rng, int n, int extras,
                                                  bool directed) {
    std::vector<patrol::Vertex> vertices;
    for (int i = 0; i < n; ++i) {
        patrol::Vertex v;
        v.id = i;
        if (rng.uniform01() < 0.5) {
            v.x = rng.uniform01() * 100.0;
            v.y = rng.uniform01() * 100.0;
        }
        vertices.push_back(v);
    }
    const auto weight = [&] { return 1.0 + 99.0 * rng.uniform01(); };
    std::vector<patrol::EdgeDef> edges;
    std::vector<std::vector<char>> used(static_cast<std::size_t>(n),
                                        std::vector<char>(static_cast<std::size_t>(n), 0));
    const auto add = [&](patrol::VertexId a, patrol::VertexId b) {
        edges.push_back({a, b, weight()});
        used[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = 1;
        if (!directed) used[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = 1;
    };
    for (int v = 1; v < n; ++v) {
        const auto parent = static_cast<patrol::VertexId>(
            rng.next_below(static_cast<std::uint64_t>(v)));
        add(parent, v);
        if (directed) add(v, parent);
    }
    for (int k = 0; k < extras; ++k) {
        const auto a = static_cast<patrol::VertexId>(
            rng.next_below(static_cast<std::uint64_t>(n)));
        const auto b = static_cast<patrol::VertexId>(
            rng.next_below(static_cast<std::uint64_t>(n)));
        if (a == b || used[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]) {
            continue;
        }
        add(a, b);
    }
    return patrol::PatrolGraph::create(std::move(vertices), std::move(edges), directed);
}

}  // namespace testutil
