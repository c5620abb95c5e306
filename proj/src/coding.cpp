#include "xorcast/coding.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace xorcast {

namespace {

// Keeps the exhaustive subset enumeration tractable if a virtual buffer
// ever grows unusually large; in the simulated scenarios the candidate set
// stays well below this.
constexpr std::size_t kMaxSideCandidates = 20;

std::vector<const Packet*> side_candidates(const Packet& primary,
                                           const TxQueue& queue,
                                           const NodeState& target_state,
                                           double now_ms,
                                           SidePool pool = SidePool::AllQueue) {
    std::vector<const Packet*> out;
    for (const Packet& p : queue.packets()) {
        if (p.id == primary.id) {
            continue;
        }
        if (pool == SidePool::EarliestPerFlow) {
            // only each flow's oldest queued packet qualifies; the queue is
            // FIFO, so the first packet seen per flow is the oldest
            bool earliest = true;
            for (const Packet& q : queue.packets()) {
                if (q.id.flow == p.id.flow) {
                    earliest = q.id == p.id;
                    break;
                }
            }
            if (!earliest) {
                continue;
            }
        }
        if (target_state.knows(p.id, now_ms)) {
            out.push_back(&p);
        }
    }
    if (out.size() > kMaxSideCandidates) {
        std::sort(out.begin(), out.end(),
                  [](const Packet* a, const Packet* b) { return a->id < b->id; });
        out.resize(kMaxSideCandidates);
    }
    return out;
}

NetworkCode make_code(const Packet& primary,
                      const std::vector<const Packet*>& sides,
                      std::uint32_t mask) {
    NetworkCode code;
    code.primary = primary.id;
    code.target = primary.target;
    code.members.push_back(primary.id);
    for (std::size_t j = 0; j < sides.size(); ++j) {
        if (mask & (1u << j)) {
            code.members.push_back(sides[j]->id);
        }
    }
    code.normalize();
    return code;
}

// Tie-break chain shared by NCV/NCVD: receivers desc, member count asc,
// lexicographically smallest member set.
bool tie_better(const CodeUtility& au, const NetworkCode& a,
                const CodeUtility& bu, const NetworkCode& b) {
    if (au.receivers != bu.receivers) {
        return au.receivers > bu.receivers;
    }
    if (a.members.size() != b.members.size()) {
        return a.members.size() < b.members.size();
    }
    return a.members < b.members;
}

bool utility_better(const CodeUtility& au, const NetworkCode& a,
                    const CodeUtility& bu, const NetworkCode& b) {
    if (au.total != bu.total) {
        return au.total > bu.total;
    }
    return tie_better(au, a, bu, b);
}

}  // namespace

double late_loss_probability(double remaining_ms, const LossEstimate& est) {
    const double p_late =
        remaining_ms <= 0.0 ? 1.0 : std::exp(-remaining_ms / est.delay_mean_ms);
    return p_late + (1.0 - p_late) * est.channel_loss;
}

std::vector<NetworkCode> candidate_codes(const Packet& primary,
                                         const TxQueue& queue,
                                         const NodeState& target_state,
                                         double now_ms) {
    const auto sides = side_candidates(primary, queue, target_state, now_ms);
    std::vector<NetworkCode> codes;
    codes.reserve(std::size_t{1} << sides.size());
    for (std::uint32_t mask = 0; mask < (1u << sides.size()); ++mask) {
        codes.push_back(make_code(primary, sides, mask));
    }
    return codes;
}

CodeUtility code_utility(const NetworkCode& code, const TxQueue& queue,
                         std::span<const NodeState> nodes,
                         std::span<const LossEstimate> estimates,
                         double now_ms) {
    CodeUtility u;
    u.per_node.assign(nodes.size(), 0.0);
    for (std::size_t m = 0; m < nodes.size(); ++m) {
        const auto decoded = decodable(code, nodes[m], now_ms);
        if (!decoded) {
            continue;
        }
        const Packet* p = queue.find(*decoded);
        if (p == nullptr || p->target != static_cast<int>(m)) {
            continue;  // useful only if the decoded packet is destined here
        }
        const double e =
            late_loss_probability(p->deadline_ms - now_ms, estimates[m]);
        u.per_node[m] = (1.0 - e) * p->delta;
        if (u.per_node[m] > 0.0) {
            ++u.receivers;
        }
        u.total += u.per_node[m];
    }
    return u;
}

std::optional<NetworkCode> select_nonc(const TxQueue& queue, double now_ms) {
    const Packet* primary = queue.first_active(now_ms);
    if (primary == nullptr) {
        return std::nullopt;
    }
    NetworkCode code;
    code.members = {primary->id};
    code.primary = primary->id;
    code.target = primary->target;
    return code;
}

std::optional<NetworkCode> select_nct(const TxQueue& queue,
                                      std::span<const NodeState> nodes,
                                      double now_ms, SidePool pool) {
    const Packet* primary = queue.first_active(now_ms);
    if (primary == nullptr) {
        return std::nullopt;
    }
    const NodeState& target_state = nodes[static_cast<std::size_t>(primary->target)];
    const auto sides = side_candidates(*primary, queue, target_state, now_ms, pool);

    std::optional<NetworkCode> best;
    int best_count = -1;
    for (std::uint32_t mask = 0; mask < (1u << sides.size()); ++mask) {
        NetworkCode code = make_code(*primary, sides, mask);
        int count = 0;
        for (std::size_t m = 0; m < nodes.size(); ++m) {
            const auto decoded = decodable(code, nodes[m], now_ms);
            if (!decoded) {
                continue;
            }
            const Packet* p = queue.find(*decoded);
            if (p != nullptr && p->target == static_cast<int>(m)) {
                ++count;
            }
        }
        const bool better =
            count > best_count ||
            (count == best_count &&
             (code.members.size() < best->members.size() ||
              (code.members.size() == best->members.size() &&
               code.members < best->members)));
        if (better) {
            best = std::move(code);
            best_count = count;
        }
    }
    return best;
}

std::optional<NetworkCode> select_ncv(const TxQueue& queue,
                                      std::span<const NodeState> nodes,
                                      std::span<const LossEstimate> estimates,
                                      double now_ms) {
    return select_ncvd(queue, nodes, estimates, now_ms, 1);
}

std::optional<NetworkCode> select_ncvd(const TxQueue& queue,
                                       std::span<const NodeState> nodes,
                                       std::span<const LossEstimate> estimates,
                                       double now_ms, std::size_t depth) {
    std::optional<NetworkCode> best;
    CodeUtility best_u;
    std::size_t primaries_seen = 0;
    for (const Packet& primary : queue.packets()) {
        if (!primary.active(now_ms)) {
            continue;
        }
        if (depth != 0 && primaries_seen == depth) {
            break;
        }
        ++primaries_seen;
        const NodeState& target_state =
            nodes[static_cast<std::size_t>(primary.target)];
        const auto sides = side_candidates(primary, queue, target_state, now_ms);
        for (std::uint32_t mask = 0; mask < (1u << sides.size()); ++mask) {
            NetworkCode code = make_code(primary, sides, mask);
            CodeUtility u = code_utility(code, queue, nodes, estimates, now_ms);
            // strict comparison keeps the earlier (FIFO) primary on full ties
            if (!best || utility_better(u, code, best_u, *best)) {
                best = std::move(code);
                best_u = std::move(u);
            }
        }
    }
    return best;
}

NetworkCode select_side_mwis(const Packet& primary, const TxQueue& queue,
                             std::span<const NodeState> nodes,
                             std::span<const LossEstimate> estimates,
                             double now_ms) {
    const NodeState& target_state =
        nodes[static_cast<std::size_t>(primary.target)];
    auto sides = side_candidates(primary, queue, target_state, now_ms);

    // A side candidate can only ever contribute if its own target can still
    // decode a code containing the primary.
    std::erase_if(sides, [&](const Packet* p) {
        if (p->target == primary.target) {
            return true;
        }
        return !nodes[static_cast<std::size_t>(p->target)].knows(primary.id,
                                                                 now_ms);
    });

    const std::size_t n = sides.size();
    std::vector<double> weight(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Packet& p = *sides[i];
        const double e = late_loss_probability(
            p.deadline_ms - now_ms,
            estimates[static_cast<std::size_t>(p.target)]);
        weight[i] = (1.0 - e) * p.delta;
    }

    // Conflict: u and v cannot coexist if either one's target does not hold
    // the other, which would leave two unknowns in the code there.
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool conflict =
                !nodes[static_cast<std::size_t>(sides[i]->target)].knows(
                    sides[j]->id, now_ms) ||
                !nodes[static_cast<std::size_t>(sides[j]->target)].knows(
                    sides[i]->id, now_ms);
            if (conflict) {
                adj[i].push_back(j);
                adj[j].push_back(i);
            }
        }
    }

    // Greedy GWMIN: repeatedly take the vertex maximizing w/(deg+1) among
    // the remaining graph, then drop it and its neighbors.
    std::vector<bool> alive(n, true);
    std::vector<std::size_t> degree(n);
    for (std::size_t i = 0; i < n; ++i) {
        degree[i] = adj[i].size();
    }
    NetworkCode code;
    code.primary = primary.id;
    code.target = primary.target;
    code.members.push_back(primary.id);
    std::size_t remaining = n;
    while (remaining > 0) {
        std::size_t pick = n;
        double pick_score = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!alive[i]) {
                continue;
            }
            const double score =
                weight[i] / static_cast<double>(degree[i] + 1);
            if (score > pick_score ||
                (score == pick_score && pick < n && sides[i]->id < sides[pick]->id)) {
                pick = i;
                pick_score = score;
            }
        }
        code.members.push_back(sides[pick]->id);
        alive[pick] = false;
        --remaining;
        for (std::size_t nb : adj[pick]) {
            if (alive[nb]) {
                alive[nb] = false;
                --remaining;
                for (std::size_t nb2 : adj[nb]) {
                    if (alive[nb2] && degree[nb2] > 0) {
                        --degree[nb2];
                    }
                }
            }
        }
    }
    code.normalize();
    return code;
}

}  // namespace xorcast
