#pragma once

#include <cstdint>
#include <vector>

namespace cxp {

/// Dinic max-flow on integer capacities. On unit-capacity networks the
/// blocking-flow phases give the O(E*sqrt(E)) bound required for min-cut
/// path diversity.
class MaxFlow {
public:
    explicit MaxFlow(std::size_t n);

    /// Adds a directed arc and its zero-capacity reverse; returns a handle
    /// usable with flow_on().
    std::size_t add_arc(std::uint32_t from, std::uint32_t to, std::int64_t capacity);

    std::int64_t solve(std::uint32_t source, std::uint32_t sink);

    std::int64_t flow_on(std::size_t arc_handle) const;

private:
    struct Arc {
        std::uint32_t to;
        std::uint32_t rev; // index of the reverse arc in adj_[to]
        std::int64_t cap;
    };

    bool bfs(std::uint32_t s, std::uint32_t t);
    std::int64_t dfs(std::uint32_t u, std::uint32_t t, std::int64_t pushed);

    std::vector<std::vector<Arc>> adj_;
    std::vector<int> level_;
    std::vector<std::uint32_t> iter_;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> handles_; // (node, arc slot)
    std::vector<std::int64_t> initial_cap_;
};

} // namespace cxp
