#ifndef XORCAST_CODING_HPP
#define XORCAST_CODING_HPP

#include <optional>
#include <span>
#include <vector>

#include "xorcast/core.hpp"

namespace xorcast {

/// Per-link loss/delay estimate used by the selectors to score codes.
struct LossEstimate {
    double channel_loss = 0.0;   // probability a transmission is lost
    double delay_mean_ms = 4.0;  // mean of the exponential forward delay
};

/// Value of one candidate code: per-node quality improvements, their sum,
/// and the count of nodes that decode a packet destined to them.
struct CodeUtility {
    double total = 0.0;
    std::vector<double> per_node;
    int receivers = 0;
};

/// Probability that a packet transmitted now is useless at the receiver:
/// it arrives past its deadline (exponential forward-delay tail) or is
/// lost on the channel. remaining_ms <= 0 gives 1.
double late_loss_probability(double remaining_ms, const LossEstimate& est);

/// All codes {primary} ∪ S for every subset S of the queue packets the
/// target already holds. Every returned code yields the primary at the
/// target. Side candidates may be active or inactive.
std::vector<NetworkCode> candidate_codes(const Packet& primary,
                                         const TxQueue& queue,
                                         const NodeState& target_state,
                                         double now_ms);

CodeUtility code_utility(const NetworkCode& code, const TxQueue& queue,
                         std::span<const NodeState> nodes,
                         std::span<const LossEstimate> estimates,
                         double now_ms);

/// FIFO without coding: singleton code of the first active packet.
std::optional<NetworkCode> select_nonc(const TxQueue& queue, double now_ms);

/// Which queue packets a selector may draw side packets from.
enum class SidePool {
    AllQueue,         // every queued packet the target holds
    EarliestPerFlow,  // only each flow's oldest queued packet (COPE-style)
};

/// Throughput-maximizing baseline: head-of-queue primary, code chosen to
/// be useful to the most receivers. Ignores distortion weights and
/// deadlines. The classic baseline draws side packets only from each
/// flow's head-of-line packet; AllQueue lifts that restriction.
std::optional<NetworkCode> select_nct(const TxQueue& queue,
                                      std::span<const NodeState> nodes,
                                      double now_ms,
                                      SidePool pool = SidePool::AllQueue);

/// Video-aware selection: head-of-queue primary, code maximizing the total
/// expected quality improvement over all clients.
std::optional<NetworkCode> select_ncv(const TxQueue& queue,
                                      std::span<const NodeState> nodes,
                                      std::span<const LossEstimate> estimates,
                                      double now_ms);

/// Like select_ncv but scans the first `depth` active packets as candidate
/// primaries (0 = unbounded, the whole queue). depth 1 reduces to NCV.
std::optional<NetworkCode> select_ncvd(const TxQueue& queue,
                                       std::span<const NodeState> nodes,
                                       std::span<const LossEstimate> estimates,
                                       double now_ms, std::size_t depth);

/// Approximate side-packet selection via a greedy maximum-weight
/// independent set on the conflict graph of side candidates. Utility is
/// at most that of the exhaustive NCV search.
NetworkCode select_side_mwis(const Packet& primary, const TxQueue& queue,
                             std::span<const NodeState> nodes,
                             std::span<const LossEstimate> estimates,
                             double now_ms);

}  // namespace xorcast

#endif
