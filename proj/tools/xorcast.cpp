// Experiment runner for the video-aware network coding simulator.
//
//   xorcast run --config cfg.ini --out results.csv
//   xorcast sweep --config cfg.ini --preset model1 --seeds 30 --out sweep.csv
//   xorcast gen-trace --duration 30000 --flows 3 --out trace.csv

#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "xorcast/config.hpp"
#include "xorcast/experiment.hpp"
#include "xorcast/metrics.hpp"
#include "xorcast/sim.hpp"
#include "xorcast/traffic.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> algorithm;
    std::optional<int> ncvd_depth;
    std::string out_path;
};

xorcast::RunConfig build_config(const CommonOpts& opts) {
    xorcast::RunConfig cfg;
    if (!opts.config_path.empty()) {
        cfg = xorcast::load_config(opts.config_path);
    }
    if (opts.seed) {
        cfg.seed = *opts.seed;
    }
    if (opts.algorithm) {
        const auto alg = xorcast::algorithm_from_name(*opts.algorithm);
        if (!alg) {
            throw std::invalid_argument("unknown algorithm '" +
                                        *opts.algorithm + "'");
        }
        cfg.algorithm = *alg;
    }
    if (opts.ncvd_depth) {
        cfg.ncvd_depth = static_cast<std::size_t>(*opts.ncvd_depth);
    }
    const std::string warning = cfg.validate();
    if (!warning.empty()) {
        std::fprintf(stderr, "%s\n", warning.c_str());
    }
    return cfg;
}

int cmd_run(const CommonOpts& opts) {
    const xorcast::RunConfig cfg = build_config(opts);
    xorcast::RunRecord rec;
    rec.run_id = 0;
    rec.seed = cfg.seed;
    rec.algorithm = xorcast::algorithm_name(cfg.algorithm);
    rec.loss_param = cfg.channel.loss_param();
    rec.delay_budget_ms = cfg.traffic.delay_budget_ms;
    rec.metrics = xorcast::run(cfg);

    const auto& m = rec.metrics;
    std::printf("algorithm        %s\n", rec.algorithm.c_str());
    std::printf("seed             %llu\n",
                static_cast<unsigned long long>(rec.seed));
    std::printf("duration         %.0f ms, %lld transmissions\n",
                m.duration_ms, static_cast<long long>(m.transmissions));
    std::printf("quality proxy    %.4f\n", xorcast::psnr_proxy_total(m));
    std::printf("app throughput   %.2f pkt/s\n",
                xorcast::throughput_pps(m, xorcast::ThroughputLevel::App,
                                        m.duration_ms));
    std::printf("mac throughput   %.2f pkt/s\n",
                xorcast::throughput_pps(m, xorcast::ThroughputLevel::Mac,
                                        m.duration_ms));
    std::printf("mean tx queue    %.2f packets\n", m.mean_tx_queue);
    std::printf("mean virt buffer %.2f packets\n", m.mean_virtual_buffer);

    if (!opts.out_path.empty()) {
        xorcast::write_report({rec}, opts.out_path);
        std::printf("results written to %s\n", opts.out_path.c_str());
    }
    return 0;
}

int cmd_sweep(const CommonOpts& opts, const std::string& axis_name,
              std::vector<double> values, int seeds,
              const std::string& preset) {
    xorcast::RunConfig cfg = build_config(opts);
    xorcast::SweepSpec spec;
    spec.seeds = seeds;

    if (!preset.empty()) {
        if (preset == "model1") {
            spec.axis = xorcast::SweepAxis::Loss;
            spec.values = {0.01, 0.05, 0.094, 0.15, 0.20};
            cfg.traffic.delay_budget_ms = 100.0;
        } else if (preset == "model2") {
            spec.axis = xorcast::SweepAxis::Snr;
            spec.values = {9, 7, 5, 3};
        } else if (preset == "delay-sweep") {
            spec.axis = xorcast::SweepAxis::Delay;
            spec.values = {50, 100, 150, 200};
            cfg.channel.model = xorcast::ChannelConfig::Model::Iid;
            cfg.channel.loss_rate = 0.094;
        } else {
            throw std::invalid_argument("unknown preset '" + preset + "'");
        }
    } else {
        if (axis_name == "loss") {
            spec.axis = xorcast::SweepAxis::Loss;
        } else if (axis_name == "delay") {
            spec.axis = xorcast::SweepAxis::Delay;
        } else if (axis_name == "snr") {
            spec.axis = xorcast::SweepAxis::Snr;
        } else if (axis_name == "algorithm") {
            spec.axis = xorcast::SweepAxis::AlgorithmOnly;
        } else {
            throw std::invalid_argument("unknown axis '" + axis_name + "'");
        }
        spec.values = std::move(values);
        if (spec.axis != xorcast::SweepAxis::AlgorithmOnly &&
            spec.values.empty()) {
            throw std::invalid_argument("sweep needs --values for this axis");
        }
    }
    if (opts.algorithm) {
        spec.algorithms = {cfg.algorithm};
    }

    const auto records = xorcast::run_sweep(cfg, spec);
    const auto cells = xorcast::summarize(records);
    std::printf("%s", xorcast::summary_to_string(cells).c_str());

    if (!opts.out_path.empty()) {
        xorcast::write_report(records, opts.out_path);
        const std::string summary_path = opts.out_path + ".summary.csv";
        std::FILE* f = std::fopen(summary_path.c_str(), "wb");
        if (f == nullptr) {
            throw std::runtime_error("cannot open " + summary_path);
        }
        const std::string text = xorcast::summary_to_string(cells);
        std::fwrite(text.data(), 1, text.size(), f);
        std::fclose(f);
        std::printf("results written to %s (summary: %s)\n",
                    opts.out_path.c_str(), summary_path.c_str());
    }
    return 0;
}

int cmd_gen_trace(const xorcast::StreamProfile& profile, double duration_ms,
                  int flows, const std::string& out_path) {
    std::vector<std::vector<xorcast::Packet>> all;
    for (int flow = 0; flow < flows; ++flow) {
        all.push_back(
            xorcast::generate_stream(profile, duration_ms, flow, flow));
    }
    xorcast::write_trace(all, out_path);
    std::size_t total = 0;
    for (const auto& f : all) {
        total += f.size();
    }
    std::printf("wrote %zu packets (%d flows) to %s\n", total, flows,
                out_path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"video-aware opportunistic network coding simulator"};
    app.require_subcommand(1);

    CommonOpts opts;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", opts.config_path, "config file path");
        cmd->add_option("--seed", opts.seed, "master seed override");
        cmd->add_option("--algorithm", opts.algorithm,
                        "noNC | NCT | NCV | NCVD | NCV-MWIS");
        cmd->add_option("--ncvd-depth", opts.ncvd_depth,
                        "NCVD primary scan depth (0 = whole queue)");
        cmd->add_option("--out", opts.out_path, "results CSV path");
    };

    CLI::App* run_cmd = app.add_subcommand("run", "execute one configuration");
    add_common(run_cmd);

    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "run a parameter/seed sweep");
    add_common(sweep_cmd);
    std::string axis = "loss";
    std::vector<double> values;
    int seeds = 1;
    std::string preset;
    sweep_cmd->add_option("--axis", axis, "loss | delay | snr | algorithm");
    sweep_cmd->add_option("--values", values, "axis values")->delimiter(',');
    sweep_cmd->add_option("--seeds", seeds, "seeds per cell")
        ->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--preset", preset, "model1 | model2 | delay-sweep");

    CLI::App* gen_cmd =
        app.add_subcommand("gen-trace", "write a synthetic packet trace");
    xorcast::StreamProfile profile;
    double duration_ms = 30000.0;
    int flows = 3;
    std::string trace_out = "trace.csv";
    gen_cmd->add_option("--duration", duration_ms, "trace duration (ms)");
    gen_cmd->add_option("--flows", flows, "number of flows");
    gen_cmd->add_option("--rate", profile.rate_bps, "per-flow rate (bps)");
    gen_cmd->add_option("--fps", profile.fps, "frames per second");
    gen_cmd->add_option("--gop", profile.gop, "frames per GOP");
    gen_cmd->add_option("--packet-size", profile.packet_size_bytes,
                        "packet size (bytes)");
    gen_cmd->add_option("--delay-budget", profile.delay_budget_ms,
                        "playout deadline offset (ms)");
    gen_cmd->add_option("--delta-i", profile.delta_i, "I-packet weight");
    gen_cmd->add_option("--delta-p", profile.delta_p_base,
                        "P-packet base weight");
    gen_cmd->add_option("--delta-p-decay", profile.delta_p_decay,
                        "P-weight decay per GOP position");
    gen_cmd->add_option("--out", trace_out, "trace CSV path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            return cmd_run(opts);
        }
        if (sweep_cmd->parsed()) {
            return cmd_sweep(opts, axis, values, seeds, preset);
        }
        if (gen_cmd->parsed()) {
            return cmd_gen_trace(profile, duration_ms, flows, trace_out);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
