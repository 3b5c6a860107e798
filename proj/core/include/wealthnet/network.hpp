#pragma once

#include "wealthnet/model.hpp"
#include "wealthnet/random.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <unordered_set>
#include <vector>

namespace wealthnet {

enum class NodeRole : std::uint8_t { Follower = 0, Leader = 1 };

inline constexpr std::size_t kCommunityCount = kClassCount;

/// The richest agents at the trigger step, grouped by their class at that step.
struct LeaderGroups {
    std::array<std::vector<std::size_t>, kCommunityCount> by_class;

    std::size_t total() const noexcept;
};

/// The `count` richest agents (ties to the lower id), grouped by class.
LeaderGroups select_leaders(std::span<const double> wealth, std::span<const double> alpha, std::size_t count,
                            const ClassBoundaries& bounds = {});

/// Community `id` (1-based) is led by the leaders of class id - 1.
struct Community {
    int id = 0;
    AgentClass leader_class = AgentClass::Prudent;
    std::vector<std::size_t> leaders;
    std::vector<std::size_t> followers;

    std::size_t member_count() const noexcept { return leaders.size() + followers.size(); }
    bool empty() const noexcept { return member_count() == 0; }
};

/// Largest-remainder apportionment of `seats` proportionally to `weights`.
/// Equal remainders favour the lower index. Throws std::invalid_argument if
/// all weights are zero.
std::vector<std::size_t> apportion(std::span<const double> weights, std::size_t seats);

/// Splits the non-leaders among the leader groups in proportion to each
/// group's total leader wealth; individual followers are assigned uniformly
/// at random. Always returns three communities, some possibly empty.
std::vector<Community> partition_followers(const LeaderGroups& leaders, std::span<const double> wealth,
                                           KeyedStream& rng);

struct Edge {
    std::size_t src = 0;
    std::size_t dst = 0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// In-neighbour lists in compressed form: sources of edges into v are
/// sources[offsets[v] .. offsets[v+1]).
struct InAdjacency {
    std::vector<std::size_t> offsets;
    std::vector<std::size_t> sources;

    std::span<const std::size_t> of(std::size_t v) const noexcept {
        return {sources.data() + offsets[v], offsets[v + 1] - offsets[v]};
    }
};

/// Directed influence graph: an edge (i, j) means j's attitude follows i's.
class InteractionGraph {
public:
    InteractionGraph() = default;
    explicit InteractionGraph(std::size_t nodes);

    std::size_t node_count() const noexcept { return roles_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    NodeRole role(std::size_t v) const { return roles_.at(v); }
    /// 1-based community label, 0 when unassigned.
    int community(std::size_t v) const { return community_.at(v); }

    void set_role(std::size_t v, NodeRole r) { roles_.at(v) = r; }
    void set_community(std::size_t v, int c) { community_.at(v) = c; }

    bool has_edge(std::size_t src, std::size_t dst) const noexcept;
    /// Returns false (and adds nothing) for self loops and duplicates.
    bool add_edge(std::size_t src, std::size_t dst);
    /// Replaces the target of edge `index`. Returns false, leaving the graph
    /// unchanged, if the new edge would be a self loop or a duplicate.
    bool retarget(std::size_t index, std::size_t new_dst);

    std::vector<std::size_t> in_degrees() const;
    std::vector<std::size_t> out_degrees() const;
    std::size_t cross_community_edges() const noexcept;
    InAdjacency in_adjacency() const;

private:
    static std::uint64_t edge_key(std::size_t src, std::size_t dst) noexcept {
        return (static_cast<std::uint64_t>(src) << 32) | static_cast<std::uint64_t>(dst);
    }

    std::vector<NodeRole> roles_;
    std::vector<int> community_;
    std::vector<Edge> edges_;
    std::unordered_set<std::uint64_t> edge_keys_;
};

/// Builds one directed preferential-attachment component per community.
/// Leaders seed the component without links between them; followers join in
/// descending wealth order, each attaching to `edges_per_node` distinct
/// earlier nodes with probability proportional to degree. A link to a leader
/// is the single edge leader -> follower, a link to a follower is the
/// reciprocal pair. `edges_per_node` is clamped to the nodes available.
InteractionGraph build_community_graph(std::span<const Community> communities, std::span<const double> wealth,
                                       std::size_t node_count, std::size_t edges_per_node, KeyedStream& rng);

/// Swaps the targets of edge pairs from different communities until at
/// least floor(fraction * |E|) edges cross community borders. In- and
/// out-degrees are preserved; swaps that would create self loops, duplicate
/// edges or an edge into a leader are rejected. Throws std::invalid_argument
/// when fraction is outside [0, 1] or fewer than two communities have edges.
InteractionGraph rewire_cross_community(InteractionGraph graph, double fraction, KeyedStream& rng);

/// One `src dst community_src community_dst role_src` line per edge.
void write_edge_list(std::ostream& os, const InteractionGraph& graph);

}  // namespace wealthnet
