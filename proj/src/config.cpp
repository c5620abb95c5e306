#include "xorcast/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace xorcast {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

using KvMap = std::map<std::string, std::string>;

double as_double(const KvMap& kv, const std::string& key, double fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : std::stod(it->second);
}

int as_int(const KvMap& kv, const std::string& key, int fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : std::stoi(it->second);
}

bool as_bool(const KvMap& kv, const std::string& key, bool fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) {
        return fallback;
    }
    return it->second == "true" || it->second == "1" || it->second == "yes";
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    std::map<std::string, KvMap> sections;
    std::string section = "run";
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config: expected key = value at line " +
                                        std::to_string(lineno));
        }
        sections[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }

    RunConfig cfg;
    const KvMap& run = sections["run"];
    if (auto it = run.find("algorithm"); it != run.end()) {
        const auto alg = algorithm_from_name(it->second);
        if (!alg) {
            throw std::invalid_argument("config: unknown algorithm '" +
                                        it->second + "'");
        }
        cfg.algorithm = *alg;
    }
    cfg.link_rate_bps = as_double(run, "link_rate_bps", cfg.link_rate_bps);
    cfg.num_clients = as_int(run, "num_clients", cfg.num_clients);
    cfg.duration_ms = as_double(run, "duration_ms", cfg.duration_ms);
    cfg.rtt_ms = as_double(run, "rtt_ms", cfg.rtt_ms);
    cfg.ack_overhead_bytes =
        as_int(run, "ack_overhead_bytes", cfg.ack_overhead_bytes);
    if (auto it = run.find("seed"); it != run.end()) {
        cfg.seed = std::stoull(it->second);
    }
    if (auto it = run.find("delay_budget_ms"); it != run.end()) {
        cfg.traffic.delay_budget_ms = std::stod(it->second);
    }

    const KvMap& traffic = sections["traffic"];
    cfg.traffic.rate_bps = as_double(traffic, "rate_bps", cfg.traffic.rate_bps);
    cfg.traffic.fps = as_int(traffic, "fps", cfg.traffic.fps);
    cfg.traffic.gop = as_int(traffic, "gop", cfg.traffic.gop);
    cfg.traffic.packet_size_bytes =
        as_int(traffic, "packet_size_bytes", cfg.traffic.packet_size_bytes);
    cfg.traffic.delay_budget_ms =
        as_double(traffic, "delay_budget_ms", cfg.traffic.delay_budget_ms);
    cfg.traffic.delta_i = as_double(traffic, "delta_i", cfg.traffic.delta_i);
    cfg.traffic.delta_p_base =
        as_double(traffic, "delta_p_base", cfg.traffic.delta_p_base);
    cfg.traffic.delta_p_decay =
        as_double(traffic, "delta_p_decay", cfg.traffic.delta_p_decay);
    if (auto it = traffic.find("trace"); it != traffic.end()) {
        cfg.trace_path = it->second;
    }

    const KvMap& channel = sections["channel"];
    if (auto it = channel.find("model"); it != channel.end()) {
        if (it->second == "iid") {
            cfg.channel.model = ChannelConfig::Model::Iid;
        } else if (it->second == "gilbert_elliott" ||
                   it->second == "gilbert_elliot") {
            cfg.channel.model = ChannelConfig::Model::GilbertElliot;
        } else {
            throw std::invalid_argument("config: unknown channel model '" +
                                        it->second + "'");
        }
    }
    cfg.channel.loss_rate =
        as_double(channel, "loss_rate", cfg.channel.loss_rate);
    cfg.channel.snr_db = as_int(channel, "snr_db", cfg.channel.snr_db);
    cfg.channel.ber_good = as_double(channel, "ber_good", cfg.channel.ber_good);
    cfg.channel.ber_bad = as_double(channel, "ber_bad", cfg.channel.ber_bad);
    cfg.channel.sojourn_good_ms =
        as_double(channel, "sojourn_good_ms", cfg.channel.sojourn_good_ms);
    cfg.channel.sojourn_bad_ms =
        as_double(channel, "sojourn_bad_ms", cfg.channel.sojourn_bad_ms);
    cfg.channel.delay_mean_ms =
        as_double(channel, "delay_mean_ms", cfg.channel.delay_mean_ms);
    cfg.channel.ack_loss = as_double(channel, "ack_loss", cfg.channel.ack_loss);
    cfg.channel.sender_state_oracle = as_bool(channel, "sender_state_oracle",
                                              cfg.channel.sender_state_oracle);

    const KvMap& algorithm = sections["algorithm"];
    cfg.ncvd_depth = static_cast<std::size_t>(
        as_int(algorithm, "ncvd_depth", static_cast<int>(cfg.ncvd_depth)));

    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) {
        throw std::runtime_error("cannot open config file: " + path);
    }
    std::stringstream buf;
    buf << f.rdbuf();
    return parse_config_text(buf.str());
}

}  // namespace xorcast
