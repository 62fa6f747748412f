#include "citorder/orders.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <set>

#include "citorder/error.hpp"

namespace citorder {

namespace {

using Edge = std::pair<std::string, std::string>;

struct IndexedGraph {
    std::vector<std::string> names;  // sorted
    std::map<std::string, int> index;
    std::vector<std::vector<int>> adj;  // targets sorted

    IndexedGraph(const std::vector<std::string>& nodes, const std::vector<Edge>& edges) {
        names = nodes;
        std::sort(names.begin(), names.end());
        for (std::size_t i = 0; i < names.size(); ++i)
            index[names[i]] = static_cast<int>(i);
        adj.resize(names.size());
        for (const auto& [from, to] : edges)
            adj[index.at(from)].push_back(index.at(to));
        for (auto& a : adj) {
            std::sort(a.begin(), a.end());
            a.erase(std::unique(a.begin(), a.end()), a.end());
        }
    }
};

// Tarjan over an indexed graph, optionally restricted to vertices >= floor.
std::vector<std::vector<int>> scc_of(const IndexedGraph& g, int floor) {
    const int n = static_cast<int>(g.names.size());
    std::vector<int> disc(n, -1), low(n, 0);
    std::vector<char> on_stack(n, 0);
    std::vector<int> stack;
    std::vector<std::vector<int>> components;
    int timer = 0;

    std::function<void(int)> visit = [&](int v) {
        disc[v] = low[v] = timer++;
        stack.push_back(v);
        on_stack[v] = 1;
        for (int w : g.adj[v]) {
            if (w < floor) continue;
            if (disc[w] < 0) {
                visit(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], disc[w]);
            }
        }
        if (low[v] == disc[v]) {
            std::vector<int> comp;
            for (;;) {
                const int w = stack.back();
                stack.pop_back();
                on_stack[w] = 0;
                comp.push_back(w);
                if (w == v) break;
            }
            components.push_back(std::move(comp));
        }
    };
    for (int v = floor; v < n; ++v)
        if (disc[v] < 0) visit(v);
    return components;
}

std::vector<Edge> edge_list(const Eord& eord) {
    std::vector<Edge> edges;
    for (const auto& e : eord.edges) edges.push_back({e.from, e.to});
    return edges;
}

// Johnson-style elementary cycle enumeration anchored at each cycle's
// smallest vertex.
struct CycleEnumerator {
    const IndexedGraph& g;
    std::uint64_t cap;
    std::vector<char> in_scope;
    std::vector<char> blocked;
    std::vector<std::set<int>> bsets;
    std::vector<int> path;
    int start = 0;
    std::vector<std::vector<int>>* out;

    void unblock(int v) {
        blocked[v] = 0;
        for (int w : std::set<int>(bsets[v].begin(), bsets[v].end())) {
            bsets[v].erase(w);
            if (blocked[w]) unblock(w);
        }
    }

    bool circuit(int v) {
        bool found = false;
        path.push_back(v);
        blocked[v] = 1;
        for (int w : g.adj[v]) {
            if (w == start) {
                if (out->size() >= cap)
                    throw AnalysisError(
                        "more than " + std::to_string(cap) +
                        " elementary cycles; raise the cycle cap to continue");
                out->push_back(path);
                found = true;
            } else if (in_scope[w] && !blocked[w]) {
                if (circuit(w)) found = true;
            }
        }
        if (found) {
            unblock(v);
        } else {
            for (int w : g.adj[v])
                if (in_scope[w]) bsets[w].insert(v);
        }
        path.pop_back();
        return found;
    }
};

std::vector<std::vector<int>> elementary_cycles(const IndexedGraph& g,
                                                std::uint64_t cap) {
    const int n = static_cast<int>(g.names.size());
    std::vector<std::vector<int>> cycles;
    for (int s = 0; s < n; ++s) {
        std::vector<int> comp;
        for (const auto& c : scc_of(g, s))
            if (std::find(c.begin(), c.end(), s) != c.end()) comp = c;
        if (comp.size() < 2) continue;
        CycleEnumerator ce{g, cap, std::vector<char>(n, 0), std::vector<char>(n, 0),
                           std::vector<std::set<int>>(n), {}, s, &cycles};
        for (int v : comp) ce.in_scope[v] = 1;
        ce.circuit(s);
    }
    return cycles;
}

CycleSet cycles_of(const std::vector<std::string>& nodes,
                   const std::vector<Edge>& edges, std::uint64_t cap) {
    IndexedGraph g(nodes, edges);
    CycleSet result;
    for (const auto& cycle : elementary_cycles(g, cap)) {
        std::vector<std::string> named;
        for (int v : cycle) named.push_back(g.names[v]);
        result.cycles.push_back(std::move(named));
    }
    std::sort(result.cycles.begin(), result.cycles.end());
    for (const auto& cycle : result.cycles)
        for (std::size_t i = 0; i < cycle.size(); ++i)
            ++result.edge_counts[{cycle[i], cycle[(i + 1) % cycle.size()]}];
    return result;
}

// Kahn's algorithm integrating dependencies first, smallest ready name next.
std::vector<std::string> topological_order(const std::vector<std::string>& nodes,
                                           const std::vector<Edge>& edges) {
    std::map<std::string, int> pending;  // unintegrated dependencies
    std::map<std::string, std::vector<std::string>> dependents;
    for (const auto& n : nodes) pending[n] = 0;
    for (const auto& [from, to] : edges) {
        ++pending[from];
        dependents[to].push_back(from);
    }
    std::set<std::string> ready;
    for (const auto& [n, deg] : pending)
        if (deg == 0) ready.insert(n);
    std::vector<std::string> order;
    while (!ready.empty()) {
        const std::string n = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(n);
        for (const auto& d : dependents[n])
            if (--pending[d] == 0) ready.insert(d);
    }
    if (order.size() != nodes.size())
        throw InternalError("topological sort on a cyclic graph");
    return order;
}

}  // namespace

std::vector<std::vector<std::string>> tarjan_scc(const Eord& eord) {
    IndexedGraph g(eord.nodes, edge_list(eord));
    std::vector<std::vector<std::string>> out;
    for (const auto& comp : scc_of(g, 0)) {
        std::vector<std::string> names;
        for (int v : comp) names.push_back(g.names[v]);
        std::sort(names.begin(), names.end());
        out.push_back(std::move(names));
    }
    std::sort(out.begin(), out.end());
    return out;
}

CycleSet enumerate_cycles(const Eord& eord, std::uint64_t cap) {
    return cycles_of(eord.nodes, edge_list(eord), cap);
}

TestOrder graph_based(const Eord& eord, const Weights& w,
                      const GraphOptions& options) {
    validate_weights(w);
    std::vector<const EordEdge*> active;
    for (const auto& e : eord.edges) active.push_back(&e);

    auto removable = [&](const EordEdge& e) {
        if (options.break_any) return true;
        return !e.direct_kinds.count(DirectKind::inheritance) &&
               !e.direct_kinds.count(DirectKind::aggregation);
    };

    TestOrder result;
    result.strategy = "graph_based";
    for (;;) {
        std::vector<Edge> edges;
        for (const EordEdge* e : active) edges.push_back({e->from, e->to});
        CycleSet cycles = cycles_of(eord.nodes, edges, options.cycle_cap);
        if (cycles.cycles.empty()) break;

        const EordEdge* best = nullptr;
        int best_count = 0;
        double best_scplx = 0.0;
        for (const EordEdge* e : active) {
            auto it = cycles.edge_counts.find({e->from, e->to});
            if (it == cycles.edge_counts.end() || !removable(*e)) continue;
            const int count = it->second;
            const double s = scplx(e->coupling, w);
            bool better;
            if (!best) {
                better = true;
            } else if (s == 0.0 || best_scplx == 0.0) {
                // A free edge outranks any costly one; among free edges the
                // name decides.
                if (s == 0.0 && best_scplx == 0.0)
                    better = std::tie(e->from, e->to) < std::tie(best->from, best->to);
                else
                    better = s == 0.0;
            } else {
                const double lhs = count * best_scplx;
                const double rhs = best_count * s;
                if (lhs != rhs)
                    better = lhs > rhs;
                else
                    better = std::tie(e->from, e->to) < std::tie(best->from, best->to);
            }
            if (better) {
                best = e;
                best_count = count;
                best_scplx = s;
            }
        }
        if (!best) {
            const auto& cycle = cycles.cycles.front();
            std::string text;
            for (const auto& n : cycle) text += n + " -> ";
            text += cycle.front();
            throw AnalysisError("cycle " + text +
                                " contains only inheritance/aggregation edges; "
                                "pass --break-any to allow removing them");
        }
        result.removed_edges.push_back({best->from, best->to});
        active.erase(std::find(active.begin(), active.end(), best));
    }

    std::vector<Edge> edges;
    for (const EordEdge* e : active) edges.push_back({e->from, e->to});
    result.order = topological_order(eord.nodes, edges);
    return result;
}

TestOrder multilevel_feedback(const Eord& eord, const Weights& w) {
    validate_weights(w);
    std::set<std::string> remaining(eord.nodes.begin(), eord.nodes.end());
    TestOrder result;
    result.strategy = "multilevel_feedback";

    while (!remaining.empty()) {
        std::map<std::string, double> cost, profit;
        for (const auto& n : remaining) {
            cost[n] = 0.0;
            profit[n] = 0.0;
        }
        for (const auto& e : eord.edges) {
            if (!remaining.count(e.from) || !remaining.count(e.to)) continue;
            const double s = scplx(e.coupling, w);
            cost[e.from] += s;
            profit[e.to] += s;
        }

        std::vector<std::string> zero;
        for (const auto& n : remaining)
            if (cost[n] == 0.0) zero.push_back(n);
        if (!zero.empty()) {
            for (const auto& n : zero) {
                result.order.push_back(n);
                remaining.erase(n);
            }
            continue;
        }

        std::string best;
        double best_priority = 0.0;
        for (const auto& n : remaining) {
            const double priority = profit[n] - cost[n];
            if (best.empty() || priority > best_priority) {
                best = n;
                best_priority = priority;
            }
        }
        result.order.push_back(best);
        remaining.erase(best);
    }
    return result;
}

TestOrder ria(const Eord& eord, const Weights& w, const RiaOptions& options) {
    validate_weights(w);
    if (options.iterations < 0) throw InputError("iterations must be nonnegative");
    TestOrder result;
    result.strategy = "random_iterative";
    result.seed = options.seed;
    result.iterations = options.iterations;

    std::vector<std::string> order(eord.nodes.begin(), eord.nodes.end());
    std::sort(order.begin(), order.end());
    std::mt19937_64 rng(options.seed);
    const std::size_t n = order.size();
    for (std::size_t i = n; i > 1; --i)
        std::swap(order[i - 1], order[rng() % i]);

    double current = ocplx(eord, order, w).ocplx;
    std::vector<std::string> best = order;
    double best_cost = current;
    result.accepted_costs.push_back(current);

    if (n >= 2) {
        double temperature = options.sa_temp;
        for (int it = 0; it < options.iterations; ++it) {
            const std::size_t at = rng() % (n - 1);
            std::swap(order[at], order[at + 1]);
            const double candidate = ocplx(eord, order, w).ocplx;
            bool accept = candidate <= current;
            if (!accept && temperature > 0.0) {
                const double u =
                    (rng() >> 11) * (1.0 / 9007199254740992.0);  // [0,1)
                accept = std::exp(-(candidate - current) / temperature) > u;
            }
            temperature *= options.sa_decay;
            if (accept) {
                current = candidate;
                result.accepted_costs.push_back(current);
                if (current < best_cost) {
                    best = order;
                    best_cost = current;
                }
            } else {
                std::swap(order[at], order[at + 1]);
            }
        }
    }
    result.order = std::move(best);
    return result;
}

}  // namespace citorder
