#ifndef XORCAST_EXPERIMENT_HPP
#define XORCAST_EXPERIMENT_HPP

#include <string>
#include <vector>

#include "xorcast/metrics.hpp"
#include "xorcast/sim.hpp"

namespace xorcast {

enum class SweepAxis { Loss, Delay, AlgorithmOnly, Snr };

struct SweepSpec {
    SweepAxis axis = SweepAxis::Loss;
    std::vector<double> values;  // empty for AlgorithmOnly
    int seeds = 1;
    // Algorithms crossed with every axis value; defaults to all four
    // schemes when left empty (AlgorithmOnly uses exactly this list).
    std::vector<Algorithm> algorithms;
};

/// Runs the Cartesian product of axis values x algorithms x seeds. Each
/// run gets an independent seed derived from the base config's seed and
/// the run index, so results do not depend on thread scheduling. Records
/// come back sorted by run_id. threads = 0 picks hardware concurrency
/// (capped by the XORCAST_THREADS environment variable).
std::vector<RunRecord> run_sweep(const RunConfig& base, const SweepSpec& spec,
                                 unsigned threads = 0);

/// Per (loss_param, algorithm, delay_budget) cell: mean and standard error
/// of the aggregate quality proxy and the two throughput levels.
struct SweepCell {
    double loss_param = 0.0;
    double delay_budget_ms = 0.0;
    std::string algorithm;
    int runs = 0;
    double proxy_mean = 0.0, proxy_stderr = 0.0;
    double app_tput_mean = 0.0, app_tput_stderr = 0.0;
    double mac_tput_mean = 0.0, mac_tput_stderr = 0.0;
};

std::vector<SweepCell> summarize(const std::vector<RunRecord>& records);

std::string summary_to_string(const std::vector<SweepCell>& cells);

unsigned thread_budget(unsigned requested);

}  // namespace xorcast

#endif
