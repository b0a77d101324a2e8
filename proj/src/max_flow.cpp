#include <algorithm>
#include <cmath>
#include <queue>

#include "aind/engines.hpp"

namespace aind {

namespace {

constexpr double kFlowEps = 1e-12;

struct Arc {
    std::size_t to;
    std::size_t rev;  // index of the paired arc in adj[to]
    double residual;
};

class Dinic {
public:
    explicit Dinic(std::size_t n) : adj_(n), level_(n), next_(n) {}

    std::pair<std::size_t, std::size_t> add(std::size_t u, std::size_t v, double cap) {
        adj_[u].push_back({v, adj_[v].size(), cap});
        adj_[v].push_back({u, adj_[u].size() - 1, 0.0});
        return {u, adj_[u].size() - 1};
    }

    double run(std::size_t s, std::size_t t) {
        double total = 0.0;
        while (bfs(s, t)) {
            std::fill(next_.begin(), next_.end(), 0);
            while (true) {
                const double pushed = dfs(s, t, std::numeric_limits<double>::infinity());
                if (pushed <= kFlowEps) break;
                total += pushed;
            }
        }
        return total;
    }

    const Arc& arc(std::pair<std::size_t, std::size_t> id) const { return adj_[id.first][id.second]; }

private:
    bool bfs(std::size_t s, std::size_t t) {
        std::fill(level_.begin(), level_.end(), -1);
        std::queue<std::size_t> q;
        level_[s] = 0;
        q.push(s);
        while (!q.empty()) {
            const std::size_t u = q.front();
            q.pop();
            for (const Arc& a : adj_[u])
                if (a.residual > kFlowEps && level_[a.to] < 0) {
                    level_[a.to] = level_[u] + 1;
                    q.push(a.to);
                }
        }
        return level_[t] >= 0;
    }

    double dfs(std::size_t u, std::size_t t, double limit) {
        if (u == t) return limit;
        for (std::size_t& i = next_[u]; i < adj_[u].size(); ++i) {
            Arc& a = adj_[u][i];
            if (a.residual <= kFlowEps || level_[a.to] != level_[u] + 1) continue;
            const double got = dfs(a.to, t, std::min(limit, a.residual));
            if (got > kFlowEps) {
                a.residual -= got;
                adj_[a.to][a.rev].residual += got;
                return got;
            }
        }
        return 0.0;
    }

    std::vector<std::vector<Arc>> adj_;
    std::vector<int> level_;
    std::vector<std::size_t> next_;
};

}  // namespace

FlowResult max_flow(const FlowNetwork& net) {
    if (net.source == net.sink) throw InputError("flow network source equals sink");
    if (net.source >= net.node_count || net.sink >= net.node_count)
        throw InputError("flow network terminal out of range");
    Dinic dinic(net.node_count);
    std::vector<std::pair<std::size_t, std::size_t>> ids;
    ids.reserve(net.edges.size());
    for (const auto& e : net.edges) {
        if (e.from >= net.node_count || e.to >= net.node_count)
            throw InputError("flow edge endpoint out of range");
        if (e.from == e.to) throw InputError("flow network has a self-loop");
        if (!(e.capacity >= 0.0)) throw InputError("flow edge capacity must be nonnegative");
        ids.push_back(dinic.add(e.from, e.to, e.capacity));
    }
    FlowResult result;
    result.value = dinic.run(net.source, net.sink);
    result.edge_flow.reserve(net.edges.size());
    for (std::size_t k = 0; k < net.edges.size(); ++k)
        result.edge_flow.push_back(
            std::clamp(net.edges[k].capacity - dinic.arc(ids[k]).residual, 0.0, net.edges[k].capacity));
    return result;
}

}  // namespace aind
