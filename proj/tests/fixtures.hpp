#ifndef XORCAST_TESTS_FIXTURES_HPP
#define XORCAST_TESTS_FIXTURES_HPP

// Shared selector-level test states and an independent brute-force oracle.
// The oracle deliberately reimplements decodability and utility scoring
// from first principles (plain set arithmetic over the state fields) so it
// shares no code path with the selectors it checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "xorcast/coding.hpp"
#include "xorcast/core.hpp"
#include "xorcast/rng.hpp"

namespace xorcast::tests {

struct FixtureState {
    TxQueue queue;
    std::vector<NodeState> nodes;
    std::vector<LossEstimate> estimates;
    double now_ms = 0.0;
};

inline Packet make_packet(int flow, std::int64_t seq, int target,
                          double deadline_ms, double delta,
                          double inactive_until_ms = 0.0) {
    Packet p;
    p.id = PacketId{flow, seq};
    p.target = target;
    p.deadline_ms = deadline_ms;
    p.delta = delta;
    p.inactive_until_ms = inactive_until_ms;
    return p;
}

// Nodes A=0, B=1, C=2; flows map one-to-one onto nodes. A1=(0,1) etc.
inline const PacketId kA1{0, 1};
inline const PacketId kA2{0, 2};
inline const PacketId kB1{1, 1};
inline const PacketId kC1{2, 1};

/// Example 1: queue [A1, B1, C1]; A overheard {B1, C1}; B and C each
/// overheard {A1}. All packets active, deadlines far out. delta_b lets
/// tests make B1 more valuable than C1.
inline FixtureState example1_state(double delta_b = 2.0) {
    FixtureState st;
    st.queue.push(make_packet(0, 1, 0, 100.0, 1.0));
    st.queue.push(make_packet(1, 1, 1, 100.0, delta_b));
    st.queue.push(make_packet(2, 1, 2, 100.0, 1.0));
    st.nodes.resize(3);
    for (int m = 0; m < 3; ++m) {
        st.nodes[static_cast<std::size_t>(m)].node = m;
    }
    st.nodes[0].virtual_buffer = {{kB1, 100.0}, {kC1, 100.0}};
    st.nodes[1].virtual_buffer = {{kA1, 100.0}};
    st.nodes[2].virtual_buffer = {{kA1, 100.0}};
    st.estimates.assign(3, LossEstimate{0.0, 4.0});
    return st;
}

/// Example 2: queue [A1, B1, C1, A2], all active. A overheard {B1, C1};
/// B overheard {C1, A2}; C overheard {A1, B1, A2}. Any A1-primary code
/// reaches at most 2 receivers; B1 XOR C1 XOR A2 reaches all 3.
inline FixtureState example2_state() {
    FixtureState st;
    st.queue.push(make_packet(0, 1, 0, 100.0, 1.0));
    st.queue.push(make_packet(1, 1, 1, 100.0, 1.0));
    st.queue.push(make_packet(2, 1, 2, 100.0, 1.0));
    st.queue.push(make_packet(0, 2, 0, 100.0, 1.0));
    st.nodes.resize(3);
    for (int m = 0; m < 3; ++m) {
        st.nodes[static_cast<std::size_t>(m)].node = m;
    }
    st.nodes[0].virtual_buffer = {{kB1, 100.0}, {kC1, 100.0}};
    st.nodes[1].virtual_buffer = {{kC1, 100.0}, {kA2, 100.0}};
    st.nodes[2].virtual_buffer = {{kA1, 100.0}, {kB1, 100.0}, {kA2, 100.0}};
    st.estimates.assign(3, LossEstimate{0.0, 4.0});
    return st;
}

/// Randomized small state: 2-4 clients (one flow per client), 1-10 queued
/// packets, at most 6 overheard entries per node, mixed active/inactive
/// packets and mixed deadline urgency around now = 1000 ms.
inline FixtureState random_state(Rng& rng) {
    FixtureState st;
    st.now_ms = 1000.0;
    const int clients = 2 + static_cast<int>(rng() % 3);
    const int queue_len = 1 + static_cast<int>(rng() % 10);
    st.nodes.resize(static_cast<std::size_t>(clients));
    for (int m = 0; m < clients; ++m) {
        st.nodes[static_cast<std::size_t>(m)].node = m;
    }
    std::vector<std::int64_t> next_seq(static_cast<std::size_t>(clients), 0);
    for (int i = 0; i < queue_len; ++i) {
        const int flow = static_cast<int>(rng() % clients);
        const double deadline =
            st.now_ms - 5.0 + 155.0 * uniform01(rng);  // a few already stale
        const double delta = 0.1 + 15.9 * uniform01(rng);
        const double inactive_until =
            bernoulli(rng, 0.3) ? st.now_ms + 50.0 * uniform01(rng) : 0.0;
        st.queue.push(make_packet(flow, next_seq[static_cast<std::size_t>(flow)]++,
                                  flow, deadline, delta, inactive_until));
    }
    for (int m = 0; m < clients; ++m) {
        NodeState& node = st.nodes[static_cast<std::size_t>(m)];
        int overheard = 0;
        for (const Packet& p : st.queue.packets()) {
            if (p.target == m) {
                if (bernoulli(rng, 0.15)) {
                    node.rx_buffer.insert(p.id);  // delivered, ACK pending
                }
            } else if (overheard < 6 && bernoulli(rng, 0.4)) {
                node.virtual_buffer.emplace(p.id, p.deadline_ms);
                ++overheard;
            }
        }
    }
    st.estimates.reserve(static_cast<std::size_t>(clients));
    for (int m = 0; m < clients; ++m) {
        st.estimates.push_back(LossEstimate{0.3 * uniform01(rng), 4.0});
    }
    return st;
}

// ---- independent oracle -------------------------------------------------

inline bool oracle_knows(const NodeState& node, const PacketId& id,
                         double now_ms) {
    if (node.rx_buffer.count(id) > 0) {
        return true;
    }
    const auto it = node.virtual_buffer.find(id);
    return it != node.virtual_buffer.end() && it->second >= now_ms;
}

/// Exactly-one-unknown rule over a member id set.
inline std::optional<PacketId> oracle_decode(
    const std::vector<PacketId>& members, const NodeState& node,
    double now_ms) {
    std::optional<PacketId> unknown;
    for (const PacketId& id : members) {
        if (!oracle_knows(node, id, now_ms)) {
            if (unknown) {
                return std::nullopt;
            }
            unknown = id;
        }
    }
    return unknown;
}

inline double oracle_late_loss(double remaining_ms, const LossEstimate& est) {
    const double p_late =
        remaining_ms <= 0.0 ? 1.0 : std::exp(-remaining_ms / est.delay_mean_ms);
    return p_late + (1.0 - p_late) * est.channel_loss;
}

struct OracleScore {
    double utility = 0.0;
    int receivers = 0;
};

/// Scores one member set: per node, the decoded packet contributes
/// (1 - e) * delta when it is a queue packet destined to that node.
inline OracleScore oracle_score(const std::vector<PacketId>& members,
                                const FixtureState& st) {
    OracleScore s;
    for (std::size_t m = 0; m < st.nodes.size(); ++m) {
        const auto decoded = oracle_decode(members, st.nodes[m], st.now_ms);
        if (!decoded) {
            continue;
        }
        const Packet* p = st.queue.find(*decoded);
        if (p == nullptr || p->target != static_cast<int>(m)) {
            continue;
        }
        const double e =
            oracle_late_loss(p->deadline_ms - st.now_ms, st.estimates[m]);
        const double v = (1.0 - e) * p->delta;
        s.utility += v;
        if (v > 0.0) {
            ++s.receivers;
        }
    }
    return s;
}

/// Receiver count of a member set, ignoring deltas and deadlines: nodes
/// that decode a queue packet destined to them.
inline int oracle_receivers_throughput(const std::vector<PacketId>& members,
                                       const FixtureState& st) {
    int count = 0;
    for (std::size_t m = 0; m < st.nodes.size(); ++m) {
        const auto decoded = oracle_decode(members, st.nodes[m], st.now_ms);
        if (!decoded) {
            continue;
        }
        const Packet* p = st.queue.find(*decoded);
        if (p != nullptr && p->target == static_cast<int>(m)) {
            ++count;
        }
    }
    return count;
}

/// All member sets {primary} union S over subsets S of the queue packets
/// the primary's target already holds.
inline std::vector<std::vector<PacketId>> oracle_candidates(
    const Packet& primary, const FixtureState& st) {
    const NodeState& target =
        st.nodes[static_cast<std::size_t>(primary.target)];
    std::vector<PacketId> sides;
    for (const Packet& p : st.queue.packets()) {
        if (p.id != primary.id && oracle_knows(target, p.id, st.now_ms)) {
            sides.push_back(p.id);
        }
    }
    std::vector<std::vector<PacketId>> out;
    for (std::uint32_t mask = 0; mask < (1u << sides.size()); ++mask) {
        std::vector<PacketId> members{primary.id};
        for (std::size_t j = 0; j < sides.size(); ++j) {
            if (mask & (1u << j)) {
                members.push_back(sides[j]);
            }
        }
        out.push_back(std::move(members));
    }
    return out;
}

/// Max utility over every candidate code of the first `depth` active
/// primaries in FIFO order (0 = all).
inline double oracle_best_utility(const FixtureState& st, std::size_t depth) {
    double best = -1.0;
    std::size_t seen = 0;
    for (const Packet& primary : st.queue.packets()) {
        if (!primary.active(st.now_ms)) {
            continue;
        }
        if (depth != 0 && seen == depth) {
            break;
        }
        ++seen;
        for (const auto& members : oracle_candidates(primary, st)) {
            best = std::max(best, oracle_score(members, st).utility);
        }
    }
    return best;
}

/// Max receiver count over every candidate code of the head-of-queue
/// active primary.
inline int oracle_max_receivers_head(const FixtureState& st) {
    const Packet* primary = st.queue.first_active(st.now_ms);
    if (primary == nullptr) {
        return -1;
    }
    int best = -1;
    for (const auto& members : oracle_candidates(*primary, st)) {
        best = std::max(best, oracle_receivers_throughput(members, st));
    }
    return best;
}

}  // namespace xorcast::tests

#endif
