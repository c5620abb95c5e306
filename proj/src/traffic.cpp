#include "xorcast/traffic.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace xorcast {

std::vector<Packet> generate_stream(const StreamProfile& profile,
                                    double duration_ms, int flow, int target) {
    if (duration_ms <= 0.0) {
        throw std::invalid_argument("generate_stream: duration must be > 0");
    }
    const double pps = profile.packets_per_second();
    const double interval_ms = 1000.0 / pps;
    std::vector<Packet> out;
    for (std::int64_t i = 0;; ++i) {
        const double arrival = static_cast<double>(i) * interval_ms;
        if (arrival >= duration_ms) {
            break;
        }
        const auto frame =
            static_cast<std::int64_t>(std::floor(arrival * profile.fps / 1000.0));
        const auto gop_pos = static_cast<int>(frame % profile.gop);
        Packet p;
        p.id = PacketId{flow, i};
        p.target = target;
        p.size_bytes = profile.packet_size_bytes;
        p.arrival_ms = arrival;
        p.deadline_ms = arrival + profile.delay_budget_ms;
        p.delta = gop_pos == 0
                      ? profile.delta_i
                      : profile.delta_p_base *
                            std::pow(profile.delta_p_decay, gop_pos);
        out.push_back(p);
    }
    return out;
}

void write_trace(const std::vector<std::vector<Packet>>& flows,
                 const std::string& path) {
    std::ofstream f(path);
    if (!f) {
        throw std::runtime_error("write_trace: cannot open " + path);
    }
    f << "flow,seq,arrival_ms,delta,deadline_ms\n";
    char line[160];
    for (const auto& packets : flows) {
        for (const Packet& p : packets) {
            std::snprintf(line, sizeof(line), "%d,%lld,%.6f,%.6f,%.6f\n",
                          p.id.flow, static_cast<long long>(p.id.seq),
                          p.arrival_ms, p.delta, p.deadline_ms);
            f << line;
        }
    }
    if (!f) {
        throw std::runtime_error("write_trace: write failed for " + path);
    }
}

std::vector<std::vector<Packet>> load_trace(const std::string& path,
                                            int packet_size_bytes) {
    std::ifstream f(path);
    if (!f) {
        throw std::runtime_error("load_trace: cannot open " + path);
    }
    std::string line;
    std::getline(f, line);
    if (line != "flow,seq,arrival_ms,delta,deadline_ms") {
        throw std::runtime_error("load_trace: bad header in " + path);
    }
    std::map<int, std::vector<Packet>> by_flow;
    int lineno = 1;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        Packet p;
        long long seq = 0;
        if (std::sscanf(line.c_str(), "%d,%lld,%lf,%lf,%lf", &p.id.flow, &seq,
                        &p.arrival_ms, &p.delta, &p.deadline_ms) != 5) {
            throw std::runtime_error("load_trace: parse error at " + path +
                                     ":" + std::to_string(lineno));
        }
        p.id.seq = seq;
        p.target = p.id.flow;
        p.size_bytes = packet_size_bytes;
        if (p.deadline_ms <= p.arrival_ms) {
            throw std::runtime_error("load_trace: deadline <= arrival at " +
                                     path + ":" + std::to_string(lineno));
        }
        by_flow[p.id.flow].push_back(p);
    }
    std::vector<std::vector<Packet>> flows;
    for (auto& [flow, packets] : by_flow) {
        for (std::size_t i = 0; i < packets.size(); ++i) {
            if (packets[i].id.seq != static_cast<std::int64_t>(i)) {
                throw std::runtime_error(
                    "load_trace: flow " + std::to_string(flow) +
                    " has a sequence gap or duplicate at seq " +
                    std::to_string(packets[i].id.seq));
            }
        }
        flows.push_back(std::move(packets));
    }
    return flows;
}

}  // namespace xorcast
