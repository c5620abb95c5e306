#ifndef XORCAST_METRICS_HPP
#define XORCAST_METRICS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace xorcast {

struct FlowMetrics {
    std::int64_t offered = 0;
    std::int64_t delivered_on_time = 0;
    std::int64_t delivered_late = 0;
    std::int64_t expired = 0;
    double utility_offered = 0.0;    // sum of delta over all packets
    double utility_delivered = 0.0;  // sum of delta over on-time packets
};

struct RunMetrics {
    std::vector<FlowMetrics> per_flow;
    // Original packets recovered at any node from received codes (own
    // packets on time or late, plus virtual-buffer stores).
    std::int64_t mac_packets_delivered = 0;
    // On-time deliveries at the intended target.
    std::int64_t app_packets_delivered = 0;
    std::int64_t transmissions = 0;  // slots with a broadcast
    double mean_tx_queue = 0.0;
    double mean_virtual_buffer = 0.0;
    double duration_ms = 0.0;
};

enum class ThroughputLevel { App, Mac };

/// Fraction of distortion-weighted value delivered on time, in [0, 1].
/// A monotone stand-in for decoded-video PSNR, not a dB value.
double psnr_proxy(const RunMetrics& metrics, int flow);

/// Same ratio aggregated over all flows.
double psnr_proxy_total(const RunMetrics& metrics);

double throughput_pps(const RunMetrics& metrics, ThroughputLevel level,
                      double duration_ms);

struct RunRecord {
    int run_id = 0;
    std::uint64_t seed = 0;
    std::string algorithm;
    double loss_param = 0.0;
    double delay_budget_ms = 0.0;
    RunMetrics metrics;
};

/// One CSV row per (run, flow) plus an aggregate row per run (flow = -1).
/// Byte-stable for fixed inputs.
void write_report(const std::vector<RunRecord>& records,
                  const std::string& path);

std::string report_to_string(const std::vector<RunRecord>& records);

}  // namespace xorcast

#endif
