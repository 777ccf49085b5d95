#pragma once

#include "cxp/ingest.hpp"
#include "cxp/types.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace cxp {

/// The four valley-free relaxation scenarios, from strict valley-free
/// routing to no policy at all.
enum class PolicyScenario {
    PointyPeak,   // uphill, at most one p2p link, downhill
    WidePeak,     // uphill, any number of p2p links at the peak, downhill
    WithSteps,    // p2p links allowed anywhere in uphill and downhill
    Unrestricted, // no constraints
};

const char* to_string(PolicyScenario s);

/// Edge labels seen when traversing an AS link in a given direction.
enum class LinkLabel : std::uint8_t { C2P, P2P, P2C };

/// Layered product of the AS graph with the scenario automaton. Every
/// underlying AS link is routed through a shared unit-capacity bottleneck,
/// so one unit of flow uses a link at most once regardless of layer or
/// traversal direction.
class PolicyGraph {
public:
    PolicyGraph(const AsRelGraph& as_rel, PolicyScenario scenario);

    PolicyScenario scenario() const { return scenario_; }
    int state_count() const { return n_states_; }
    bool has_as(Asn as_number) const;

    /// Min-cut value from src (start state) to dst (any state accepting).
    std::int64_t diversity(Asn src_as, Asn dst_as) const;

    /// Whether the automaton admits `next` after being in `state` on a
    /// link labeled `label`; returns the follow-up state or -1.
    static int transition(PolicyScenario scenario, int state, LinkLabel label);

private:
    PolicyScenario scenario_;
    int n_states_ = 1;
    std::vector<Asn> ases_;
    std::unordered_map<Asn, std::uint32_t> as_index_;
    std::vector<AsLink> links_;
};

/// Policy-compliant AS-level path diversity via min-cut on the product
/// graph.
std::int64_t policy_path_diversity(const PolicyGraph& pg, Asn src_as, Asn dst_as);

/// Adds the given fraction of candidate p2p links (IXP co-member pairs
/// without an existing relationship), chosen uniformly with the seed.
AsRelGraph augment_p2p(const AsRelGraph& as_rel, const MembershipTable& membership,
                       double fraction, std::uint64_t seed);

PolicyGraph build_policy_graph(const AsRelGraph& as_rel, PolicyScenario scenario);

/// Endpoint pairs weighted by announced address count; src != dst enforced
/// by redraw (bounded at 100 attempts).
std::vector<std::pair<Asn, Asn>> sample_weighted_pairs(const AsRelGraph& as_rel,
                                                       const PrefixCounts& prefix_counts,
                                                       std::size_t n, std::uint64_t seed);

} // namespace cxp
