#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <string>

#include "xorcast/sim.hpp"
#include "xorcast/traffic.hpp"

using namespace xorcast;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("/tmp/xorcast_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("default profile emits 35 packets per second") {
    const StreamProfile profile;
    CHECK(profile.packets_per_second() == doctest::Approx(35.0));
    const auto packets = generate_stream(profile, 30000.0, 0, 0);
    CHECK(packets.size() == 1050);
    // evenly spaced arrivals, deadline = arrival + budget
    for (std::size_t i = 0; i < packets.size(); ++i) {
        CHECK(packets[i].arrival_ms ==
              doctest::Approx(static_cast<double>(i) * 1000.0 / 35.0));
        CHECK(packets[i].deadline_ms ==
              doctest::Approx(packets[i].arrival_ms +
                              profile.delay_budget_ms));
        CHECK(packets[i].id == PacketId{0, static_cast<std::int64_t>(i)});
    }
}

TEST_CASE("generation rejects non-positive duration") {
    CHECK_THROWS_AS(generate_stream(StreamProfile{}, 0.0, 0, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(generate_stream(StreamProfile{}, -5.0, 0, 0),
                    std::invalid_argument);
}

TEST_CASE("gop of one makes every packet an I packet") {
    StreamProfile profile;
    profile.gop = 1;
    for (const Packet& p : generate_stream(profile, 2000.0, 0, 0)) {
        CHECK(p.delta == profile.delta_i);
    }
}

TEST_CASE("I packets dominate P packets within each GOP") {
    const StreamProfile profile;
    const auto packets = generate_stream(profile, 10000.0, 0, 0);
    bool saw_p = false;
    for (const Packet& p : packets) {
        CHECK(p.delta <= profile.delta_i);
        CHECK(p.delta > 0.0);
        if (p.delta != profile.delta_i) {
            saw_p = true;
            CHECK(p.delta <= profile.delta_p_base * profile.delta_p_decay);
        }
    }
    CHECK(saw_p);
}

TEST_CASE("generation is deterministic") {
    const StreamProfile profile;
    const auto a = generate_stream(profile, 5000.0, 2, 2);
    const auto b = generate_stream(profile, 5000.0, 2, 2);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].id == b[i].id);
        CHECK(a[i].arrival_ms == b[i].arrival_ms);
        CHECK(a[i].delta == b[i].delta);
    }
}

TEST_CASE("three default streams stay under the link rate") {
    const RunConfig cfg;
    CHECK(cfg.traffic.rate_bps * cfg.num_clients < cfg.link_rate_bps);
}

TEST_CASE("trace round-trip reproduces the generated packets") {
    TempFile tmp("roundtrip.csv");
    const StreamProfile profile;
    std::vector<std::vector<Packet>> flows;
    for (int f = 0; f < 3; ++f) {
        flows.push_back(generate_stream(profile, 3000.0, f, f));
    }
    write_trace(flows, tmp.path);
    const auto loaded = load_trace(tmp.path, profile.packet_size_bytes);
    REQUIRE(loaded.size() == flows.size());
    for (std::size_t f = 0; f < flows.size(); ++f) {
        REQUIRE(loaded[f].size() == flows[f].size());
        for (std::size_t i = 0; i < flows[f].size(); ++i) {
            CHECK(loaded[f][i].id == flows[f][i].id);
            CHECK(loaded[f][i].target == flows[f][i].target);
            // the trace format stores six decimal places
            CHECK(loaded[f][i].arrival_ms ==
                  doctest::Approx(flows[f][i].arrival_ms).epsilon(1e-5));
            CHECK(loaded[f][i].delta ==
                  doctest::Approx(flows[f][i].delta).epsilon(1e-5));
            CHECK(loaded[f][i].deadline_ms ==
                  doctest::Approx(flows[f][i].deadline_ms).epsilon(1e-5));
        }
    }
}

TEST_CASE("trace loader rejects malformed input") {
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_trace("/tmp/xorcast_no_such_trace.csv"),
                        std::runtime_error);
    }
    SUBCASE("bad header") {
        TempFile tmp("bad_header.csv");
        std::ofstream(tmp.path) << "not,the,expected,header,line\n";
        CHECK_THROWS_AS(load_trace(tmp.path), std::runtime_error);
    }
    SUBCASE("parse error reports the line number") {
        TempFile tmp("parse_error.csv");
        std::ofstream(tmp.path) << "flow,seq,arrival_ms,delta,deadline_ms\n"
                                << "0,0,0.0,1.0,100.0\n"
                                << "garbage line\n";
        try {
            load_trace(tmp.path);
            FAIL("expected a parse error");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()).find(":3") != std::string::npos);
        }
    }
    SUBCASE("duplicate sequence number") {
        TempFile tmp("dup_seq.csv");
        std::ofstream(tmp.path) << "flow,seq,arrival_ms,delta,deadline_ms\n"
                                << "0,0,0.0,1.0,100.0\n"
                                << "0,0,10.0,1.0,110.0\n";
        CHECK_THROWS_AS(load_trace(tmp.path), std::runtime_error);
    }
    SUBCASE("sequence gap") {
        TempFile tmp("gap_seq.csv");
        std::ofstream(tmp.path) << "flow,seq,arrival_ms,delta,deadline_ms\n"
                                << "0,0,0.0,1.0,100.0\n"
                                << "0,2,10.0,1.0,110.0\n";
        CHECK_THROWS_AS(load_trace(tmp.path), std::runtime_error);
    }
    SUBCASE("deadline before arrival") {
        TempFile tmp("bad_deadline.csv");
        std::ofstream(tmp.path) << "flow,seq,arrival_ms,delta,deadline_ms\n"
                                << "0,0,50.0,1.0,40.0\n";
        CHECK_THROWS_AS(load_trace(tmp.path), std::runtime_error);
    }
}
