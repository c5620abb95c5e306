#include "xorcast/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <thread>
#include <tuple>

#include "xorcast/rng.hpp"

namespace xorcast {

unsigned thread_budget(unsigned requested) {
    unsigned n = requested > 0 ? requested : std::thread::hardware_concurrency();
    if (n == 0) {
        n = 1;
    }
    if (const char* cap = std::getenv("XORCAST_THREADS")) {
        const long v = std::strtol(cap, nullptr, 10);
        if (v > 0 && static_cast<unsigned>(v) < n) {
            n = static_cast<unsigned>(v);
        }
    }
    return n;
}

std::vector<RunRecord> run_sweep(const RunConfig& base, const SweepSpec& spec,
                                 unsigned threads) {
    std::vector<Algorithm> algorithms = spec.algorithms;
    if (algorithms.empty()) {
        algorithms = {Algorithm::NoNC, Algorithm::NCT, Algorithm::NCV,
                      Algorithm::NCVD};
    }
    std::vector<double> values = spec.values;
    if (spec.axis == SweepAxis::AlgorithmOnly || values.empty()) {
        values = {base.channel.loss_param()};
    }

    struct Cell {
        RunConfig config;
        RunRecord record;
    };
    std::vector<Cell> cells;
    int run_id = 0;
    for (double value : values) {
        for (Algorithm alg : algorithms) {
            for (int s = 0; s < spec.seeds; ++s) {
                RunConfig cfg = base;
                cfg.algorithm = alg;
                switch (spec.axis) {
                    case SweepAxis::Loss:
                        cfg.channel.model = ChannelConfig::Model::Iid;
                        cfg.channel.loss_rate = value;
                        break;
                    case SweepAxis::Delay:
                        cfg.traffic.delay_budget_ms = value;
                        break;
                    case SweepAxis::Snr:
                        cfg.channel.model = ChannelConfig::Model::GilbertElliot;
                        cfg.channel.snr_db = static_cast<int>(value);
                        break;
                    case SweepAxis::AlgorithmOnly:
                        break;
                }
                cfg.seed = derive_seed(base.seed,
                                       static_cast<std::uint64_t>(run_id));
                RunRecord rec;
                rec.run_id = run_id;
                rec.seed = cfg.seed;
                rec.algorithm = algorithm_name(alg);
                rec.loss_param = cfg.channel.loss_param();
                rec.delay_budget_ms = cfg.traffic.delay_budget_ms;
                cells.push_back(Cell{std::move(cfg), std::move(rec)});
                ++run_id;
            }
        }
    }

    const unsigned workers =
        std::min<unsigned>(thread_budget(threads),
                           static_cast<unsigned>(cells.size()) + 1);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) {
                return;
            }
            cells[i].record.metrics = run(cells[i].config);
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    std::vector<RunRecord> records;
    records.reserve(cells.size());
    for (Cell& c : cells) {
        records.push_back(std::move(c.record));
    }
    return records;
}

std::vector<SweepCell> summarize(const std::vector<RunRecord>& records) {
    struct Acc {
        std::vector<double> proxy, app, mac;
    };
    std::map<std::tuple<double, double, std::string>, Acc> groups;
    for (const RunRecord& r : records) {
        Acc& acc = groups[{r.loss_param, r.delay_budget_ms, r.algorithm}];
        acc.proxy.push_back(psnr_proxy_total(r.metrics));
        acc.app.push_back(throughput_pps(r.metrics, ThroughputLevel::App,
                                         r.metrics.duration_ms));
        acc.mac.push_back(throughput_pps(r.metrics, ThroughputLevel::Mac,
                                         r.metrics.duration_ms));
    }
    auto mean_of = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
    };
    auto stderr_of = [&](const std::vector<double>& v) {
        if (v.size() < 2) {
            return 0.0;
        }
        const double m = mean_of(v);
        double ss = 0.0;
        for (double x : v) ss += (x - m) * (x - m);
        return std::sqrt(ss / static_cast<double>(v.size() - 1) /
                         static_cast<double>(v.size()));
    };
    std::vector<SweepCell> out;
    for (const auto& [key, acc] : groups) {
        SweepCell c;
        c.loss_param = std::get<0>(key);
        c.delay_budget_ms = std::get<1>(key);
        c.algorithm = std::get<2>(key);
        c.runs = static_cast<int>(acc.proxy.size());
        c.proxy_mean = mean_of(acc.proxy);
        c.proxy_stderr = stderr_of(acc.proxy);
        c.app_tput_mean = mean_of(acc.app);
        c.app_tput_stderr = stderr_of(acc.app);
        c.mac_tput_mean = mean_of(acc.mac);
        c.mac_tput_stderr = stderr_of(acc.mac);
        out.push_back(c);
    }
    return out;
}

std::string summary_to_string(const std::vector<SweepCell>& cells) {
    std::string out =
        "loss_param,delay_budget_ms,algorithm,runs,proxy_mean,proxy_stderr,"
        "app_tput_mean,app_tput_stderr,mac_tput_mean,mac_tput_stderr\n";
    char line[320];
    for (const SweepCell& c : cells) {
        std::snprintf(line, sizeof(line),
                      "%.6f,%.3f,%s,%d,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n",
                      c.loss_param, c.delay_budget_ms, c.algorithm.c_str(),
                      c.runs, c.proxy_mean, c.proxy_stderr, c.app_tput_mean,
                      c.app_tput_stderr, c.mac_tput_mean, c.mac_tput_stderr);
        out += line;
    }
    return out;
}

}  // namespace xorcast
