#include "cxp/policy.hpp"

#include "cxp/maxflow.hpp"
#include "cxp/rng.hpp"

#include <algorithm>
#include <set>

namespace cxp {

namespace {

// State encodings. PointyPeak/WidePeak: UP=0, PEAK=1, DOWN=2.
// WithSteps: UP=0, DOWN=1. Unrestricted: single state 0.
constexpr int kUp = 0;
constexpr int kPeak = 1;
constexpr int kDownThree = 2;
constexpr int kDownTwo = 1;

} // namespace

const char* to_string(PolicyScenario s) {
    switch (s) {
    case PolicyScenario::PointyPeak:
        return "pointy_peak";
    case PolicyScenario::WidePeak:
        return "wide_peak";
    case PolicyScenario::WithSteps:
        return "with_steps";
    case PolicyScenario::Unrestricted:
        return "unrestricted";
    }
    return "?";
}

int PolicyGraph::transition(PolicyScenario scenario, int state, LinkLabel label) {
    switch (scenario) {
    case PolicyScenario::Unrestricted:
        return 0;
    case PolicyScenario::WithSteps:
        switch (label) {
        case LinkLabel::C2P:
            return state == kUp ? kUp : -1;
        case LinkLabel::P2P:
            return state; // allowed in both segments
        case LinkLabel::P2C:
            return kDownTwo;
        }
        return -1;
    case PolicyScenario::PointyPeak:
        switch (label) {
        case LinkLabel::C2P:
            return state == kUp ? kUp : -1;
        case LinkLabel::P2P:
            return state == kUp ? kPeak : -1;
        case LinkLabel::P2C:
            return state == kUp || state == kPeak || state == kDownThree ? kDownThree : -1;
        }
        return -1;
    case PolicyScenario::WidePeak:
        switch (label) {
        case LinkLabel::C2P:
            return state == kUp ? kUp : -1;
        case LinkLabel::P2P:
            return state == kUp || state == kPeak ? kPeak : -1;
        case LinkLabel::P2C:
            return state == kUp || state == kPeak || state == kDownThree ? kDownThree : -1;
        }
        return -1;
    }
    return -1;
}

PolicyGraph::PolicyGraph(const AsRelGraph& as_rel, PolicyScenario scenario)
    : scenario_(scenario), links_(as_rel.links().begin(), as_rel.links().end()) {
    switch (scenario) {
    case PolicyScenario::Unrestricted:
        n_states_ = 1;
        break;
    case PolicyScenario::WithSteps:
        n_states_ = 2;
        break;
    default:
        n_states_ = 3;
        break;
    }
    ases_ = as_rel.all_ases();
    as_index_.reserve(ases_.size());
    for (std::uint32_t i = 0; i < ases_.size(); ++i)
        as_index_.emplace(ases_[i], i);
}

bool PolicyGraph::has_as(Asn as_number) const { return as_index_.count(as_number) != 0; }

std::int64_t PolicyGraph::diversity(Asn src_as, Asn dst_as) const {
    if (src_as == dst_as)
        throw GraphError("policy diversity needs distinct endpoints");
    auto src_it = as_index_.find(src_as);
    auto dst_it = as_index_.find(dst_as);
    if (src_it == as_index_.end() || dst_it == as_index_.end())
        throw GraphError("AS not present in the relationship graph");

    const std::size_t n_as = ases_.size();
    const std::size_t n_links = links_.size();
    const std::size_t product_nodes = n_as * static_cast<std::size_t>(n_states_);
    // Layout: [product nodes][link_in, link_out per link][source][sink]
    const std::uint32_t link_base = static_cast<std::uint32_t>(product_nodes);
    const std::uint32_t source = static_cast<std::uint32_t>(product_nodes + 2 * n_links);
    const std::uint32_t sink = source + 1;
    const std::int64_t inf = static_cast<std::int64_t>(n_links) + 1;

    MaxFlow flow(product_nodes + 2 * n_links + 2);
    auto product = [&](std::uint32_t as_idx, int state) {
        return static_cast<std::uint32_t>(as_idx * static_cast<std::uint32_t>(n_states_) +
                                          static_cast<std::uint32_t>(state));
    };

    for (std::size_t li = 0; li < n_links; ++li) {
        const AsLink& l = links_[li];
        std::uint32_t l_in = link_base + static_cast<std::uint32_t>(2 * li);
        std::uint32_t l_out = l_in + 1;
        flow.add_arc(l_in, l_out, 1); // underlying-link bottleneck

        auto wire = [&](Asn from, Asn to, LinkLabel label) {
            std::uint32_t fi = as_index_.at(from);
            std::uint32_t ti = as_index_.at(to);
            for (int q = 0; q < n_states_; ++q) {
                int next = transition(scenario_, q, label);
                if (next < 0)
                    continue;
                flow.add_arc(product(fi, q), l_in, inf);
                flow.add_arc(l_out, product(ti, next), inf);
            }
        };
        if (l.kind == RelKind::ProviderToCustomer) {
            wire(l.a, l.b, LinkLabel::P2C); // provider -> customer, downhill
            wire(l.b, l.a, LinkLabel::C2P); // customer -> provider, uphill
        } else {
            wire(l.a, l.b, LinkLabel::P2P);
            wire(l.b, l.a, LinkLabel::P2P);
        }
    }

    flow.add_arc(source, product(src_it->second, kUp), inf);
    for (int q = 0; q < n_states_; ++q)
        flow.add_arc(product(dst_it->second, q), sink, inf); // any state accepts

    return flow.solve(source, sink);
}

std::int64_t policy_path_diversity(const PolicyGraph& pg, Asn src_as, Asn dst_as) {
    return pg.diversity(src_as, dst_as);
}

PolicyGraph build_policy_graph(const AsRelGraph& as_rel, PolicyScenario scenario) {
    return PolicyGraph(as_rel, scenario);
}

AsRelGraph augment_p2p(const AsRelGraph& as_rel, const MembershipTable& membership,
                       double fraction, std::uint64_t seed) {
    if (fraction < 0.0 || fraction > 1.0)
        throw GraphError("p2p fraction must lie in [0,1]");

    // Candidates: unordered co-member pairs without an existing relationship.
    std::set<std::pair<Asn, Asn>> candidates;
    for (const auto& [ixp, members] : membership.members_by_ixp()) {
        for (std::size_t i = 0; i < members.size(); ++i) {
            for (std::size_t j = i + 1; j < members.size(); ++j) {
                Asn a = members[i], b = members[j];
                if (!as_rel.has_relationship(a, b))
                    candidates.insert({a, b});
            }
        }
    }

    std::vector<std::pair<Asn, Asn>> pool(candidates.begin(), candidates.end());
    std::size_t take = static_cast<std::size_t>(
        std::llround(fraction * static_cast<double>(pool.size())));
    std::mt19937_64 rng = rng_for(seed, 0xC0CA);
    std::shuffle(pool.begin(), pool.end(), rng);

    AsRelGraph augmented = as_rel;
    for (std::size_t i = 0; i < take; ++i)
        augmented.add_link(pool[i].first, pool[i].second, RelKind::PeerToPeer);
    return augmented;
}

std::vector<std::pair<Asn, Asn>> sample_weighted_pairs(const AsRelGraph& as_rel,
                                                       const PrefixCounts& prefix_counts,
                                                       std::size_t n, std::uint64_t seed) {
    if (n < 1)
        throw GraphError("need at least one pair");
    std::vector<Asn> ases = as_rel.all_ases();
    std::vector<double> weights;
    weights.reserve(ases.size());
    double total = 0.0;
    for (Asn a : ases) {
        auto it = prefix_counts.find(a);
        double w = it == prefix_counts.end() ? 0.0 : static_cast<double>(it->second);
        weights.push_back(w);
        total += w;
    }
    if (total <= 0.0)
        throw GraphError("all endpoint weights are zero");

    std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
    std::vector<std::pair<Asn, Asn>> pairs;
    pairs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::mt19937_64 rng = rng_for(seed, i);
        Asn src = ases[pick(rng)];
        Asn dst = src;
        int attempts = 0;
        while (dst == src) {
            if (++attempts > 100)
                throw GraphError("could not draw distinct endpoint pair after 100 attempts");
            dst = ases[pick(rng)];
        }
        pairs.emplace_back(src, dst);
    }
    return pairs;
}

} // namespace cxp
