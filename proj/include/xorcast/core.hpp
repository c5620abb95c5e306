#ifndef XORCAST_CORE_HPP
#define XORCAST_CORE_HPP

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

namespace xorcast {

/// Identifies one video packet: (flow, seq) is unique within a run and
/// totally ordered, which fixes every iteration order in the simulator.
struct PacketId {
    int flow = 0;
    std::int64_t seq = 0;

    auto operator<=>(const PacketId&) const = default;
};

/// One NAL-unit-sized video packet. `delta` is the distortion weight
/// (quality improvement if the packet arrives on time). A packet is
/// inactive while an ACK for it is pending, i.e. until `inactive_until_ms`.
struct Packet {
    PacketId id;
    int target = 0;
    int size_bytes = 250;
    double arrival_ms = 0.0;
    double deadline_ms = 0.0;
    double delta = 0.0;
    double inactive_until_ms = 0.0;

    bool active(double now_ms) const { return now_ms >= inactive_until_ms; }
};

/// A set of packets XOR-ed into a single transmission. Payloads are not
/// carried; XOR over equal-size packets is fully determined by the member
/// id set, so decoding reduces to set membership.
struct NetworkCode {
    std::vector<PacketId> members;  // sorted, unique
    PacketId primary;
    int target = 0;

    bool contains(const PacketId& id) const;
    /// Sorts members and drops duplicates; call after hand-building.
    void normalize();
};

/// Sender-side output queue, FIFO in arrival order.
class TxQueue {
  public:
    void push(const Packet& p) { packets_.push_back(p); }

    /// Removes packets whose deadline has passed; returns the removed ids.
    std::vector<PacketId> purge_expired(double now_ms);

    /// Removes the packet with this id if present; returns true if removed.
    bool remove(const PacketId& id);

    const Packet* find(const PacketId& id) const;
    Packet* find(const PacketId& id);

    /// First packet in FIFO order that is active at `now_ms`.
    const Packet* first_active(double now_ms) const;

    bool empty() const { return packets_.empty(); }
    std::size_t size() const { return packets_.size(); }
    const std::vector<Packet>& packets() const { return packets_; }
    std::vector<Packet>& packets() { return packets_; }

  private:
    std::vector<Packet> packets_;
};

/// Receiver-side state: rx buffer holds delivered own packets, the virtual
/// buffer holds overheard packets destined to other nodes, each expiring at
/// its playout deadline.
struct NodeState {
    int node = 0;
    std::set<PacketId> rx_buffer;
    std::map<PacketId, double> virtual_buffer;  // id -> expiry (ms)

    /// True iff the node holds this packet (rx buffer, or an unexpired
    /// virtual-buffer entry) and can therefore use it to decode.
    bool knows(const PacketId& id, double now_ms) const;

    void purge_expired(double now_ms);
};

struct Clock {
    double now_ms = 0.0;
    double slot_ms = 0.0;
};

/// If exactly one member of the code is unknown at the node, that member
/// can be recovered by XOR-ing the rest; returns it. Returns nothing when
/// the code carries no new packet or is undecodable (>= 2 unknowns).
std::optional<PacketId> decodable(const NetworkCode& code,
                                  const NodeState& state, double now_ms);

}  // namespace xorcast

#endif
