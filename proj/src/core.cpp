#include "xorcast/core.hpp"

#include <algorithm>

namespace xorcast {

bool NetworkCode::contains(const PacketId& id) const {
    return std::binary_search(members.begin(), members.end(), id);
}

void NetworkCode::normalize() {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
}

std::vector<PacketId> TxQueue::purge_expired(double now_ms) {
    std::vector<PacketId> removed;
    auto it = std::remove_if(packets_.begin(), packets_.end(),
                             [&](const Packet& p) {
                                 if (p.deadline_ms < now_ms) {
                                     removed.push_back(p.id);
                                     return true;
                                 }
                                 return false;
                             });
    packets_.erase(it, packets_.end());
    return removed;
}

bool TxQueue::remove(const PacketId& id) {
    auto it = std::find_if(packets_.begin(), packets_.end(),
                           [&](const Packet& p) { return p.id == id; });
    if (it == packets_.end()) {
        return false;
    }
    packets_.erase(it);
    return true;
}

const Packet* TxQueue::find(const PacketId& id) const {
    for (const Packet& p : packets_) {
        if (p.id == id) {
            return &p;
        }
    }
    return nullptr;
}

Packet* TxQueue::find(const PacketId& id) {
    for (Packet& p : packets_) {
        if (p.id == id) {
            return &p;
        }
    }
    return nullptr;
}

const Packet* TxQueue::first_active(double now_ms) const {
    for (const Packet& p : packets_) {
        if (p.active(now_ms)) {
            return &p;
        }
    }
    return nullptr;
}

bool NodeState::knows(const PacketId& id, double now_ms) const {
    if (rx_buffer.count(id) > 0) {
        return true;
    }
    auto it = virtual_buffer.find(id);
    return it != virtual_buffer.end() && it->second >= now_ms;
}

void NodeState::purge_expired(double now_ms) {
    for (auto it = virtual_buffer.begin(); it != virtual_buffer.end();) {
        if (it->second < now_ms) {
            it = virtual_buffer.erase(it);
        } else {
            ++it;
        }
    }
}

std::optional<PacketId> decodable(const NetworkCode& code,
                                  const NodeState& state, double now_ms) {
    std::optional<PacketId> unknown;
    for (const PacketId& id : code.members) {
        if (!state.knows(id, now_ms)) {
            if (unknown) {
                return std::nullopt;  // two or more unknowns: undecodable
            }
            unknown = id;
        }
    }
    // zero unknowns means the code carries nothing new for this node
    if (unknown && state.rx_buffer.count(*unknown) > 0) {
        return std::nullopt;
    }
    return unknown;
}

}  // namespace xorcast
