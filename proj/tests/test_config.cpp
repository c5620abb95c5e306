#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include "xorcast/config.hpp"

using namespace xorcast;

TEST_CASE("empty config text yields the defaults") {
    const RunConfig cfg = parse_config_text("");
    CHECK(cfg.algorithm == Algorithm::NCV);
    CHECK(cfg.link_rate_bps == 300000.0);
    CHECK(cfg.num_clients == 3);
    CHECK(cfg.duration_ms == 30000.0);
    CHECK(cfg.rtt_ms == 48.0);
    CHECK(cfg.ack_overhead_bytes == 80);
    CHECK(cfg.channel.model == ChannelConfig::Model::Iid);
    CHECK(cfg.channel.loss_rate == 0.094);
    CHECK(cfg.channel.delay_mean_ms == 4.0);
    CHECK(cfg.traffic.rate_bps == 70000.0);
    CHECK(cfg.traffic.delay_budget_ms == 100.0);
    CHECK(cfg.traffic.delta_i == 16.0);
    CHECK(cfg.traffic.delta_p_base == 1.0);
    CHECK(cfg.traffic.delta_p_decay == 0.9);
    CHECK(cfg.ncvd_depth == 0);
    CHECK(cfg.trace_path.empty());
}

TEST_CASE("all sections and keys are parsed") {
    const std::string text = R"(
# full example
[run]
algorithm = ncvd
link_rate_bps = 600000
num_clients = 4
duration_ms = 12000
rtt_ms = 20
ack_overhead_bytes = 0
seed = 99
delay_budget_ms = 150   # overrides the traffic default

[traffic]
rate_bps = 80000
fps = 25
gop = 8
packet_size_bytes = 200
delta_i = 12
delta_p_base = 2
delta_p_decay = 0.8
trace = /tmp/some_trace.csv

[channel]
model = gilbert_elliott
snr_db = 5
sojourn_good_ms = 30
sojourn_bad_ms = 10
delay_mean_ms = 6
ack_loss = 0.1
sender_state_oracle = true

[algorithm]
ncvd_depth = 3
)";
    const RunConfig cfg = parse_config_text(text);
    CHECK(cfg.algorithm == Algorithm::NCVD);
    CHECK(cfg.link_rate_bps == 600000.0);
    CHECK(cfg.num_clients == 4);
    CHECK(cfg.duration_ms == 12000.0);
    CHECK(cfg.rtt_ms == 20.0);
    CHECK(cfg.ack_overhead_bytes == 0);
    CHECK(cfg.seed == 99);
    CHECK(cfg.traffic.delay_budget_ms == 150.0);
    CHECK(cfg.traffic.rate_bps == 80000.0);
    CHECK(cfg.traffic.fps == 25);
    CHECK(cfg.traffic.gop == 8);
    CHECK(cfg.traffic.packet_size_bytes == 200);
    CHECK(cfg.traffic.delta_i == 12.0);
    CHECK(cfg.traffic.delta_p_base == 2.0);
    CHECK(cfg.traffic.delta_p_decay == 0.8);
    CHECK(cfg.trace_path == "/tmp/some_trace.csv");
    CHECK(cfg.channel.model == ChannelConfig::Model::GilbertElliot);
    CHECK(cfg.channel.snr_db == 5);
    CHECK(cfg.channel.sojourn_good_ms == 30.0);
    CHECK(cfg.channel.sojourn_bad_ms == 10.0);
    CHECK(cfg.channel.delay_mean_ms == 6.0);
    CHECK(cfg.channel.ack_loss == 0.1);
    CHECK(cfg.channel.sender_state_oracle);
    CHECK(cfg.ncvd_depth == 3);
}

TEST_CASE("keys before any section header land in [run]") {
    const RunConfig cfg = parse_config_text("duration_ms = 500\n");
    CHECK(cfg.duration_ms == 500.0);
}

TEST_CASE("parse errors carry context") {
    SUBCASE("unknown algorithm") {
        CHECK_THROWS_AS(parse_config_text("[run]\nalgorithm = magic\n"),
                        std::invalid_argument);
    }
    SUBCASE("unknown channel model") {
        CHECK_THROWS_AS(parse_config_text("[channel]\nmodel = rayleigh\n"),
                        std::invalid_argument);
    }
    SUBCASE("malformed line reports its number") {
        try {
            parse_config_text("[run]\nduration_ms = 1\nnot a kv line\n");
            FAIL("expected a parse error");
        } catch (const std::invalid_argument& e) {
            CHECK(std::string(e.what()).find("line 3") != std::string::npos);
        }
    }
}

TEST_CASE("validate flags inconsistent parsed configs") {
    const RunConfig cfg =
        parse_config_text("[traffic]\ndelta_i = 0.5\ndelta_p_base = 1\n");
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("load_config reads a file and rejects missing paths") {
    const std::string path = "/tmp/xorcast_config_test.cfg";
    std::ofstream(path) << "[run]\nseed = 7\nalgorithm = nct\n";
    const RunConfig cfg = load_config(path);
    std::remove(path.c_str());
    CHECK(cfg.seed == 7);
    CHECK(cfg.algorithm == Algorithm::NCT);

    CHECK_THROWS_AS(load_config("/tmp/xorcast_no_such_config.cfg"),
                    std::runtime_error);
}
