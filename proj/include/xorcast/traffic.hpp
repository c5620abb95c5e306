#ifndef XORCAST_TRAFFIC_HPP
#define XORCAST_TRAFFIC_HPP

#include <string>
#include <vector>

#include "xorcast/core.hpp"

namespace xorcast {

/// Synthetic GOP-structured stream: constant bit rate, fixed packet size,
/// I-frame packets weighted delta_i and P-frame packets weighted
/// delta_p_base decayed by position within the GOP. The weights stand in
/// for codec-measured per-packet distortion and are calibration knobs.
struct StreamProfile {
    double rate_bps = 70000.0;
    int fps = 30;
    int gop = 10;  // frames per group of pictures, one I per GOP
    int packet_size_bytes = 250;
    double delay_budget_ms = 100.0;
    double delta_i = 16.0;
    double delta_p_base = 1.0;
    double delta_p_decay = 0.9;

    double packets_per_second() const {
        return rate_bps / 8.0 / packet_size_bytes;
    }
};

/// Evenly spaced CBR packets over [0, duration); deadline = arrival +
/// delay budget. Deterministic for a fixed profile. Throws on
/// non-positive duration.
std::vector<Packet> generate_stream(const StreamProfile& profile,
                                    double duration_ms, int flow, int target);

/// Trace CSV: header then rows flow,seq,arrival_ms,delta,deadline_ms.
void write_trace(const std::vector<std::vector<Packet>>& flows,
                 const std::string& path);

/// Loads a trace written by write_trace. The target of each packet is its
/// flow index; packet size comes from `packet_size_bytes`. Rejects parse
/// errors (with line number) and per-flow sequence gaps or duplicates.
std::vector<std::vector<Packet>> load_trace(const std::string& path,
                                            int packet_size_bytes = 250);

}  // namespace xorcast

#endif
