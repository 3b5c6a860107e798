#include "wealthnet/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace wealthnet {

std::size_t LeaderGroups::total() const noexcept {
    std::size_t t = 0;
    for (const auto& g : by_class) t += g.size();
    return t;
}

LeaderGroups select_leaders(std::span<const double> wealth, std::span<const double> alpha, std::size_t count,
                            const ClassBoundaries& bounds) {
    if (wealth.size() != alpha.size()) throw std::invalid_argument("wealth and attitude vectors differ in length");
    if (count > wealth.size()) throw std::invalid_argument("more leaders requested than agents");

    std::vector<std::size_t> ids(wealth.size());
    std::iota(ids.begin(), ids.end(), std::size_t{0});
    std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(count), ids.end(),
                      [&](std::size_t l, std::size_t r) {
                          return wealth[l] != wealth[r] ? wealth[l] > wealth[r] : l < r;
                      });

    LeaderGroups groups;
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t id = ids[i];
        groups.by_class[class_index(classify(alpha[id], bounds))].push_back(id);
    }
    return groups;
}

std::vector<std::size_t> apportion(std::span<const double> weights, std::size_t seats) {
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (!(total > 0.0)) throw std::invalid_argument("apportionment needs a positive total weight");

    std::vector<std::size_t> out(weights.size(), 0);
    std::vector<double> remainder(weights.size(), 0.0);
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] < 0.0) throw std::invalid_argument("negative apportionment weight");
        const double quota = static_cast<double>(seats) * weights[i] / total;
        out[i] = static_cast<std::size_t>(std::floor(quota));
        remainder[i] = quota - static_cast<double>(out[i]);
        assigned += out[i];
    }
    // Rounding in the quotas can overshoot by a seat at most; take it back from
    // the smallest remainder.
    while (assigned > seats) {
        std::size_t worst = weights.size();
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (out[i] > 0 && (worst == weights.size() || remainder[i] < remainder[worst])) worst = i;
        }
        --out[worst];
        remainder[worst] += 1.0;
        --assigned;
    }

    std::vector<std::size_t> order(weights.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t l, std::size_t r) { return remainder[l] > remainder[r]; });
    for (std::size_t i = 0; assigned < seats; i = (i + 1) % order.size()) {
        if (weights[order[i]] > 0.0) {
            ++out[order[i]];
            ++assigned;
        }
    }
    return out;
}

std::vector<Community> partition_followers(const LeaderGroups& leaders, std::span<const double> wealth,
                                           KeyedStream& rng) {
    const std::size_t n = wealth.size();
    if (leaders.total() == 0) throw std::invalid_argument("cannot form communities without leaders");

    std::vector<char> is_leader(n, 0);
    std::array<double, kCommunityCount> leader_wealth{};
    for (std::size_t c = 0; c < kCommunityCount; ++c) {
        for (std::size_t id : leaders.by_class[c]) {
            if (id >= n) throw std::out_of_range("leader id " + std::to_string(id) + " out of range");
            is_leader[id] = 1;
            leader_wealth[c] += wealth[id];
        }
    }

    std::vector<std::size_t> followers;
    followers.reserve(n - leaders.total());
    for (std::size_t j = 0; j < n; ++j) {
        if (!is_leader[j]) followers.push_back(j);
    }

    // A group whose leaders are all broke still exists but attracts nobody.
    std::vector<double> weights(leader_wealth.begin(), leader_wealth.end());
    if (std::accumulate(weights.begin(), weights.end(), 0.0) <= 0.0) {
        for (std::size_t c = 0; c < kCommunityCount; ++c) weights[c] = static_cast<double>(leaders.by_class[c].size());
    }
    const auto seats = apportion(weights, followers.size());
    shuffle(std::span<std::size_t>(followers), rng);

    std::vector<Community> out(kCommunityCount);
    std::size_t next = 0;
    for (std::size_t c = 0; c < kCommunityCount; ++c) {
        out[c].id = static_cast<int>(c) + 1;
        out[c].leader_class = static_cast<AgentClass>(c);
        out[c].leaders = leaders.by_class[c];
        out[c].followers.assign(followers.begin() + static_cast<std::ptrdiff_t>(next),
                                followers.begin() + static_cast<std::ptrdiff_t>(next + seats[c]));
        std::sort(out[c].followers.begin(), out[c].followers.end());
        next += seats[c];
    }
    return out;
}

InteractionGraph::InteractionGraph(std::size_t nodes) : roles_(nodes, NodeRole::Follower), community_(nodes, 0) {}

bool InteractionGraph::has_edge(std::size_t src, std::size_t dst) const noexcept {
    return edge_keys_.count(edge_key(src, dst)) != 0;
}

bool InteractionGraph::add_edge(std::size_t src, std::size_t dst) {
    if (src >= node_count() || dst >= node_count()) throw std::out_of_range("edge endpoint out of range");
    if (src == dst || !edge_keys_.insert(edge_key(src, dst)).second) return false;
    edges_.push_back({src, dst});
    return true;
}

bool InteractionGraph::retarget(std::size_t index, std::size_t new_dst) {
    Edge& e = edges_.at(index);
    if (new_dst >= node_count()) throw std::out_of_range("edge endpoint out of range");
    if (e.src == new_dst || has_edge(e.src, new_dst)) return false;
    edge_keys_.erase(edge_key(e.src, e.dst));
    edge_keys_.insert(edge_key(e.src, new_dst));
    e.dst = new_dst;
    return true;
}

std::vector<std::size_t> InteractionGraph::in_degrees() const {
    std::vector<std::size_t> d(node_count(), 0);
    for (const auto& e : edges_) ++d[e.dst];
    return d;
}

std::vector<std::size_t> InteractionGraph::out_degrees() const {
    std::vector<std::size_t> d(node_count(), 0);
    for (const auto& e : edges_) ++d[e.src];
    return d;
}

std::size_t InteractionGraph::cross_community_edges() const noexcept {
    std::size_t count = 0;
    for (const auto& e : edges_) {
        if (community_[e.src] != community_[e.dst]) ++count;
    }
    return count;
}

InAdjacency InteractionGraph::in_adjacency() const {
    InAdjacency adj;
    adj.offsets.assign(node_count() + 1, 0);
    for (const auto& e : edges_) ++adj.offsets[e.dst + 1];
    std::partial_sum(adj.offsets.begin(), adj.offsets.end(), adj.offsets.begin());
    adj.sources.resize(edges_.size());
    std::vector<std::size_t> fill(adj.offsets.begin(), adj.offsets.end() - 1);
    for (const auto& e : edges_) adj.sources[fill[e.dst]++] = e.src;
    for (std::size_t v = 0; v < node_count(); ++v) {
        std::sort(adj.sources.begin() + static_cast<std::ptrdiff_t>(adj.offsets[v]),
                  adj.sources.begin() + static_cast<std::ptrdiff_t>(adj.offsets[v + 1]));
    }
    return adj;
}

InteractionGraph build_community_graph(std::span<const Community> communities, std::span<const double> wealth,
                                       std::size_t node_count, std::size_t edges_per_node, KeyedStream& rng) {
    if (edges_per_node < 1) throw std::invalid_argument("edges_per_node must be at least 1");
    if (wealth.size() != node_count) throw std::invalid_argument("wealth vector does not match node count");

    InteractionGraph graph(node_count);
    auto richer = [&](std::size_t l, std::size_t r) { return wealth[l] != wealth[r] ? wealth[l] > wealth[r] : l < r; };

    for (const auto& community : communities) {
        if (community.empty()) continue;
        if (community.leaders.empty()) throw std::invalid_argument("community without leaders");

        std::vector<std::size_t> leaders = community.leaders;
        std::vector<std::size_t> followers = community.followers;
        std::sort(leaders.begin(), leaders.end(), richer);
        std::sort(followers.begin(), followers.end(), richer);

        // Each node appears in the urn once per link it holds; seeds start with
        // edges_per_node entries so the first followers can reach all of them.
        std::vector<std::size_t> urn;
        urn.reserve(2 * edges_per_node * community.member_count());
        for (std::size_t id : leaders) {
            graph.set_role(id, NodeRole::Leader);
            graph.set_community(id, community.id);
            urn.insert(urn.end(), edges_per_node, id);
        }

        std::size_t placed = leaders.size();
        std::vector<std::size_t> targets;
        for (std::size_t id : followers) {
            graph.set_role(id, NodeRole::Follower);
            graph.set_community(id, community.id);
            const std::size_t links = std::min(edges_per_node, placed);
            targets.clear();
            while (targets.size() < links) {
                const std::size_t t = urn[rng.below(urn.size())];
                if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
            }
            for (std::size_t t : targets) {
                graph.add_edge(t, id);
                if (graph.role(t) == NodeRole::Follower) graph.add_edge(id, t);
                urn.push_back(t);
            }
            urn.insert(urn.end(), links, id);
            ++placed;
        }
    }
    return graph;
}

InteractionGraph rewire_cross_community(InteractionGraph graph, double fraction, KeyedStream& rng) {
    if (!(fraction >= 0.0 && fraction <= 1.0)) throw std::invalid_argument("rewire fraction outside [0, 1]");
    const auto target = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(graph.edge_count())));
    std::size_t cross = graph.cross_community_edges();
    if (cross >= target) return graph;

    std::vector<int> labels;
    for (const auto& e : graph.edges()) {
        const int c = graph.community(e.src);
        if (c == graph.community(e.dst) && std::find(labels.begin(), labels.end(), c) == labels.end()) {
            labels.push_back(c);
        }
    }
    if (labels.size() < 2) throw std::invalid_argument("rewiring needs at least two communities with edges");

    const std::size_t edge_count = graph.edge_count();
    const std::size_t max_attempts = 1000 * edge_count + 10000;
    for (std::size_t attempt = 0; cross < target; ++attempt) {
        if (attempt == max_attempts) throw std::runtime_error("rewiring did not reach the requested fraction");

        const std::size_t i = rng.below(edge_count);
        const std::size_t k = rng.below(edge_count);
        const Edge a = graph.edges()[i];
        const Edge b = graph.edges()[k];
        const int ca = graph.community(a.src);
        const int cb = graph.community(b.src);
        if (ca != graph.community(a.dst) || cb != graph.community(b.dst) || ca == cb) continue;
        if (graph.role(a.dst) == NodeRole::Leader || graph.role(b.dst) == NodeRole::Leader) continue;
        if (a.src == b.dst || b.src == a.dst || graph.has_edge(a.src, b.dst) || graph.has_edge(b.src, a.dst)) continue;

        graph.retarget(i, b.dst);
        graph.retarget(k, a.dst);
        cross += 2;
    }
    return graph;
}

void write_edge_list(std::ostream& os, const InteractionGraph& graph) {
    for (const auto& e : graph.edges()) {
        os << e.src << ' ' << e.dst << ' ' << graph.community(e.src) << ' ' << graph.community(e.dst) << ' '
           << (graph.role(e.src) == NodeRole::Leader ? "leader" : "follower") << '\n';
    }
}

}  // namespace wealthnet
