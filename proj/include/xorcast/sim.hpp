#ifndef XORCAST_SIM_HPP
#define XORCAST_SIM_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "xorcast/channel.hpp"
#include "xorcast/metrics.hpp"
#include "xorcast/traffic.hpp"

namespace xorcast {

enum class Algorithm { NoNC, NCT, NCV, NCVD, NCV_MWIS };

std::string algorithm_name(Algorithm a);
std::optional<Algorithm> algorithm_from_name(const std::string& name);

struct ChannelConfig {
    enum class Model { Iid, GilbertElliot };
    Model model = Model::Iid;
    double loss_rate = 0.094;  // Model I
    // Model II; snr_db != 0 selects a preset, otherwise the explicit BERs
    // below are used.
    int snr_db = 0;
    double ber_good = 0.0;
    double ber_bad = 0.0;
    double sojourn_good_ms = 21.0;
    double sojourn_bad_ms = 21.0;
    double delay_mean_ms = 4.0;
    double ack_loss = 0.0;
    // When set, the sender's loss estimate tracks the current channel state
    // instead of the stationary average (Model II only).
    bool sender_state_oracle = false;

    /// The parameter swept for this model: loss rate or SNR level.
    double loss_param() const {
        return model == Model::Iid ? loss_rate : static_cast<double>(snr_db);
    }
};

struct RunConfig {
    Algorithm algorithm = Algorithm::NCV;
    std::size_t ncvd_depth = 0;  // 0 = unbounded
    double link_rate_bps = 300000.0;
    int num_clients = 3;
    double duration_ms = 30000.0;
    // Application-level ACKs share the channel with data and see their own
    // access delay, so the retransmission timer is several slots, not just
    // two propagation delays. 0 = auto: 2 * delay mean + one slot.
    double rtt_ms = 48.0;
    // Return-path airtime reserved in each slot for the receivers' ACKs.
    int ack_overhead_bytes = 80;
    ChannelConfig channel;
    StreamProfile traffic;
    std::string trace_path;  // non-empty: load packets instead of generating
    std::uint64_t seed = 1;

    double slot_ms() const {
        return (traffic.packet_size_bytes + ack_overhead_bytes) * 8.0 *
               1000.0 / link_rate_bps;
    }
    double effective_rtt_ms() const {
        return rtt_ms > 0.0 ? rtt_ms : 2.0 * channel.delay_mean_ms + slot_ms();
    }
    /// Offered load of all flows relative to what the slotted link serves.
    double utilization() const {
        return traffic.packets_per_second() * num_clients * slot_ms() / 1000.0;
    }

    /// Throws std::invalid_argument on inconsistent settings. Returns a
    /// warning string (non-fatal) when utilization >= 1.
    std::string validate() const;
};

namespace detail {
class Engine;
}

/// One simulated run over owned state. Normal use is run(); the stepping
/// and injection methods exist so reception/ACK semantics can be exercised
/// directly in tests.
class Simulator {
  public:
    explicit Simulator(const RunConfig& config);
    ~Simulator();
    Simulator(Simulator&&) noexcept;
    Simulator& operator=(Simulator&&) noexcept;

    /// Processes every pending event and returns the final metrics.
    RunMetrics run_all();

    /// Processes the single next event; false once drained.
    bool step();

    double now_ms() const;
    const TxQueue& tx_queue() const;
    const std::vector<NodeState>& node_states() const;

    /// Finalizes packet fates and returns metrics for the events processed
    /// so far. Runs the conservation checks.
    RunMetrics metrics();

    /// Invoked at every slot boundary after queue maintenance and right
    /// before code selection; the queue and node states reflect exactly what
    /// the selector sees. Useful for probes and per-slot assertions.
    void set_slot_observer(std::function<void(double now_ms)> observer);

    /// Injects a code reception at a node (as if the channel delivered it).
    void deliver(int node, const NetworkCode& code, double time_ms);
    /// Injects an ACK arrival for a packet.
    void ack(const PacketId& id, double time_ms);

  private:
    std::unique_ptr<detail::Engine> engine_;
};

/// Executes one simulated run; deterministic for a fixed config and seed.
RunMetrics run(const RunConfig& config);

}  // namespace xorcast

#endif
