#include "cxp/maxflow.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace cxp {

MaxFlow::MaxFlow(std::size_t n) : adj_(n), level_(n), iter_(n) {}

std::size_t MaxFlow::add_arc(std::uint32_t from, std::uint32_t to, std::int64_t capacity) {
    std::uint32_t fwd_slot = static_cast<std::uint32_t>(adj_[from].size());
    std::uint32_t bwd_slot = static_cast<std::uint32_t>(adj_[to].size() + (from == to ? 1 : 0));
    adj_[from].push_back(Arc{to, bwd_slot, capacity});
    adj_[to].push_back(Arc{from, fwd_slot, 0});
    handles_.emplace_back(from, fwd_slot);
    initial_cap_.push_back(capacity);
    return handles_.size() - 1;
}

bool MaxFlow::bfs(std::uint32_t s, std::uint32_t t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<std::uint32_t> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
        std::uint32_t u = q.front();
        q.pop();
        for (const Arc& a : adj_[u]) {
            if (a.cap > 0 && level_[a.to] < 0) {
                level_[a.to] = level_[u] + 1;
                q.push(a.to);
            }
        }
    }
    return level_[t] >= 0;
}

std::int64_t MaxFlow::dfs(std::uint32_t u, std::uint32_t t, std::int64_t pushed) {
    if (u == t)
        return pushed;
    for (std::uint32_t& i = iter_[u]; i < adj_[u].size(); ++i) {
        Arc& a = adj_[u][i];
        if (a.cap <= 0 || level_[a.to] != level_[u] + 1)
            continue;
        std::int64_t got = dfs(a.to, t, std::min(pushed, a.cap));
        if (got > 0) {
            a.cap -= got;
            adj_[a.to][a.rev].cap += got;
            return got;
        }
    }
    return 0;
}

std::int64_t MaxFlow::solve(std::uint32_t source, std::uint32_t sink) {
    if (source == sink)
        return 0;
    std::int64_t flow = 0;
    while (bfs(source, sink)) {
        std::fill(iter_.begin(), iter_.end(), 0);
        while (std::int64_t pushed = dfs(source, sink, std::numeric_limits<std::int64_t>::max()))
            flow += pushed;
    }
    return flow;
}

std::int64_t MaxFlow::flow_on(std::size_t arc_handle) const {
    auto [node, slot] = handles_[arc_handle];
    return initial_cap_[arc_handle] - adj_[node][slot].cap;
}

} // namespace cxp
