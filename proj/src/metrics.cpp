#include "xorcast/metrics.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace xorcast {

namespace {

struct RowCounters {
    std::int64_t offered = 0, on_time = 0, late = 0, expired = 0;
    double utility_offered = 0.0, utility_delivered = 0.0;
};

}  // namespace

double psnr_proxy(const RunMetrics& metrics, int flow) {
    const FlowMetrics& fm = metrics.per_flow.at(static_cast<std::size_t>(flow));
    if (fm.utility_offered <= 0.0) {
        throw std::domain_error("psnr_proxy: zero offered utility");
    }
    return fm.utility_delivered / fm.utility_offered;
}

double psnr_proxy_total(const RunMetrics& metrics) {
    double offered = 0.0;
    double delivered = 0.0;
    for (const FlowMetrics& fm : metrics.per_flow) {
        offered += fm.utility_offered;
        delivered += fm.utility_delivered;
    }
    if (offered <= 0.0) {
        throw std::domain_error("psnr_proxy_total: zero offered utility");
    }
    return delivered / offered;
}

double throughput_pps(const RunMetrics& metrics, ThroughputLevel level,
                      double duration_ms) {
    if (duration_ms <= 0.0) {
        throw std::domain_error("throughput_pps: duration must be > 0");
    }
    const auto count = level == ThroughputLevel::App
                           ? metrics.app_packets_delivered
                           : metrics.mac_packets_delivered;
    return static_cast<double>(count) * 1000.0 / duration_ms;
}

std::string report_to_string(const std::vector<RunRecord>& records) {
    std::string out =
        "run_id,seed,algorithm,loss_param,delay_budget_ms,flow,offered,"
        "on_time,late,expired,utility_offered,utility_delivered,psnr_proxy,"
        "app_tput_pps,mac_tput_pps,mean_txq,mean_vbuf\n";
    char line[512];
    for (const RunRecord& r : records) {
        const RunMetrics& m = r.metrics;
        const double app = m.duration_ms > 0.0
                               ? throughput_pps(m, ThroughputLevel::App,
                                                m.duration_ms)
                               : 0.0;
        const double mac = m.duration_ms > 0.0
                               ? throughput_pps(m, ThroughputLevel::Mac,
                                                m.duration_ms)
                               : 0.0;
        auto emit = [&](int flow, const RowCounters& c) {
            const double proxy = c.utility_offered > 0.0
                                     ? c.utility_delivered / c.utility_offered
                                     : 0.0;
            std::snprintf(
                line, sizeof(line),
                "%d,%llu,%s,%.6f,%.3f,%d,%lld,%lld,%lld,%lld,%.6f,%.6f,%.6f,"
                "%.6f,%.6f,%.6f,%.6f\n",
                r.run_id, static_cast<unsigned long long>(r.seed),
                r.algorithm.c_str(), r.loss_param, r.delay_budget_ms, flow,
                static_cast<long long>(c.offered),
                static_cast<long long>(c.on_time),
                static_cast<long long>(c.late),
                static_cast<long long>(c.expired), c.utility_offered,
                c.utility_delivered, proxy, app, mac, m.mean_tx_queue,
                m.mean_virtual_buffer);
            out += line;
        };
        RowCounters agg;
        for (std::size_t flow = 0; flow < m.per_flow.size(); ++flow) {
            const FlowMetrics& fm = m.per_flow[flow];
            RowCounters c{fm.offered, fm.delivered_on_time, fm.delivered_late,
                          fm.expired, fm.utility_offered,
                          fm.utility_delivered};
            emit(static_cast<int>(flow), c);
            agg.offered += c.offered;
            agg.on_time += c.on_time;
            agg.late += c.late;
            agg.expired += c.expired;
            agg.utility_offered += c.utility_offered;
            agg.utility_delivered += c.utility_delivered;
        }
        emit(-1, agg);
    }
    return out;
}

void write_report(const std::vector<RunRecord>& records,
                  const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("write_report: cannot open " + path);
    }
    f << report_to_string(records);
    if (!f) {
        throw std::runtime_error("write_report: write failed for " + path);
    }
}

}  // namespace xorcast
