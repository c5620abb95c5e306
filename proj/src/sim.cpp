#include "xorcast/sim.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <queue>
#include <stdexcept>

#include "xorcast/coding.hpp"

namespace xorcast {

std::string algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::NoNC: return "noNC";
        case Algorithm::NCT: return "NCT";
        case Algorithm::NCV: return "NCV";
        case Algorithm::NCVD: return "NCVD";
        case Algorithm::NCV_MWIS: return "NCV-MWIS";
    }
    return "?";
}

std::optional<Algorithm> algorithm_from_name(const std::string& name) {
    std::string lower(name.size(), '\0');
    std::transform(name.begin(), name.end(), lower.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (lower == "nonc") return Algorithm::NoNC;
    if (lower == "nct") return Algorithm::NCT;
    if (lower == "ncv") return Algorithm::NCV;
    if (lower == "ncvd") return Algorithm::NCVD;
    if (lower == "ncv-mwis" || lower == "ncv_mwis") return Algorithm::NCV_MWIS;
    return std::nullopt;
}

std::string RunConfig::validate() const {
    auto fail = [](const std::string& msg) {
        throw std::invalid_argument("config: " + msg);
    };
    if (link_rate_bps <= 0.0) fail("link_rate_bps must be > 0");
    if (num_clients < 1) fail("num_clients must be >= 1");
    if (duration_ms < 0.0) fail("duration_ms must be >= 0");
    if (rtt_ms < 0.0) fail("rtt_ms must be >= 0");
    if (ack_overhead_bytes < 0) fail("ack_overhead_bytes must be >= 0");
    if (traffic.rate_bps <= 0.0) fail("traffic rate_bps must be > 0");
    if (traffic.fps <= 0) fail("traffic fps must be > 0");
    if (traffic.gop <= 0) fail("traffic gop must be > 0");
    if (traffic.packet_size_bytes <= 0) fail("packet_size_bytes must be > 0");
    if (traffic.delay_budget_ms <= 0.0) fail("delay_budget_ms must be > 0");
    if (traffic.delta_i < traffic.delta_p_base || traffic.delta_p_base <= 0.0)
        fail("delta weights must satisfy delta_i >= delta_p_base > 0");
    if (traffic.delta_p_decay <= 0.0 || traffic.delta_p_decay > 1.0)
        fail("delta_p_decay must be in (0, 1]");
    if (channel.loss_rate < 0.0 || channel.loss_rate > 1.0)
        fail("loss_rate must be in [0, 1]");
    if (channel.ack_loss < 0.0 || channel.ack_loss > 1.0)
        fail("ack_loss must be in [0, 1]");
    if (channel.delay_mean_ms <= 0.0) fail("delay_mean_ms must be > 0");
    if (channel.sojourn_good_ms <= 0.0 || channel.sojourn_bad_ms <= 0.0)
        fail("sojourn times must be > 0");
    if (channel.model == ChannelConfig::Model::GilbertElliot &&
        channel.snr_db == 0 &&
        (channel.ber_good < 0.0 || channel.ber_good > 1.0 ||
         channel.ber_bad < 0.0 || channel.ber_bad > 1.0))
        fail("BER values must be in [0, 1]");
    if (utilization() >= 1.0) {
        return "warning: offered load " + std::to_string(utilization()) +
               " >= link capacity; expect congestion";
    }
    return "";
}

namespace detail {

namespace {

enum class Fate { Pending, OnTime, Late, ExpiredQueue };

struct PacketRecord {
    int target = 0;
    int flow = 0;
    double deadline_ms = 0.0;
    double delta = 0.0;
    Fate fate = Fate::Pending;
};

struct PendingAck {
    NetworkCode code;
    double sent_at_ms = 0.0;
    double expected_by_ms = 0.0;
};

// Event ranks fix the order of simultaneous events: receptions first, then
// ACK arrivals, then the slot boundary.
enum EventRank { kReception = 0, kAck = 1, kSlot = 2 };

struct Event {
    double time_ms = 0.0;
    int rank = kSlot;
    std::uint64_t order = 0;  // insertion counter, final tiebreak
    int node = -1;
    NetworkCode code;  // reception payload
    PacketId packet;   // ack payload
};

struct EventLater {
    bool operator()(const Event& a, const Event& b) const {
        if (a.time_ms != b.time_ms) return a.time_ms > b.time_ms;
        if (a.rank != b.rank) return a.rank > b.rank;
        return a.order > b.order;
    }
};

}  // namespace

class Engine {
  public:
    explicit Engine(const RunConfig& config);

    bool step();
    double now_ms() const { return now_; }
    const TxQueue& tx_queue() const { return queue_; }
    const std::vector<NodeState>& node_states() const { return nodes_; }
    RunMetrics metrics() const;

    void on_reception(int node, const NetworkCode& code, double now);
    void on_ack(const PacketId& id, double now);

    std::function<void(double)> slot_observer;

  private:
    void on_slot(double now);
    std::optional<NetworkCode> select(double now);
    void schedule(Event ev);
    void check(bool cond, const char* what) const;

    RunConfig cfg_;
    Rng rng_;
    double slot_ms_ = 0.0;
    double rtt_ms_ = 0.0;
    double now_ = 0.0;

    TxQueue queue_;
    std::vector<NodeState> nodes_;
    std::vector<Channel> channels_;
    std::vector<LossEstimate> estimates_;
    AckModel ack_model_;
    DelayModel delay_model_;

    std::vector<Packet> arrivals_;  // sorted by arrival time
    std::size_t next_arrival_ = 0;
    std::map<PacketId, PacketRecord> records_;
    std::vector<PendingAck> pending_acks_;

    std::priority_queue<Event, std::vector<Event>, EventLater> events_;
    std::uint64_t event_order_ = 0;

    std::int64_t mac_delivered_ = 0;
    std::int64_t app_delivered_ = 0;
    std::int64_t transmissions_ = 0;
    std::int64_t undecodable_ = 0;
    double txq_sum_ = 0.0;
    double vbuf_sum_ = 0.0;
    std::int64_t slot_samples_ = 0;
    std::vector<FlowMetrics> flow_counts_;
};

void Engine::check(bool cond, const char* what) const {
    if (!cond) {
        throw std::logic_error(std::string("sim invariant violated: ") + what);
    }
}

void Engine::schedule(Event ev) {
    ev.order = event_order_++;
    events_.push(std::move(ev));
}

Engine::Engine(const RunConfig& config) : cfg_(config), rng_(config.seed) {
    cfg_.validate();
    slot_ms_ = cfg_.slot_ms();
    rtt_ms_ = cfg_.effective_rtt_ms();
    delay_model_.mean_ms = cfg_.channel.delay_mean_ms;
    ack_model_.loss = cfg_.channel.ack_loss;
    ack_model_.delay = delay_model_;

    nodes_.resize(static_cast<std::size_t>(cfg_.num_clients));
    flow_counts_.resize(static_cast<std::size_t>(cfg_.num_clients));
    for (int m = 0; m < cfg_.num_clients; ++m) {
        nodes_[static_cast<std::size_t>(m)].node = m;
        Channel ch;
        if (cfg_.channel.model == ChannelConfig::Model::Iid) {
            ch = Channel(IidChannel{cfg_.channel.loss_rate});
        } else {
            GilbertElliotChannel ge;
            if (cfg_.channel.snr_db != 0) {
                ge = gilbert_elliot_preset(cfg_.channel.snr_db);
            } else {
                ge.ber_good = cfg_.channel.ber_good;
                ge.ber_bad = cfg_.channel.ber_bad;
            }
            ge.sojourn_good_ms = cfg_.channel.sojourn_good_ms;
            ge.sojourn_bad_ms = cfg_.channel.sojourn_bad_ms;
            ge.step_ms = slot_ms_;
            ch = Channel(ge);
        }
        channels_.push_back(ch);
        estimates_.push_back(LossEstimate{
            ch.loss_stationary(cfg_.traffic.packet_size_bytes),
            cfg_.channel.delay_mean_ms});
    }

    if (cfg_.duration_ms <= 0.0) {
        return;  // empty run: no traffic, no events
    }
    std::vector<std::vector<Packet>> flows;
    if (!cfg_.trace_path.empty()) {
        flows = load_trace(cfg_.trace_path, cfg_.traffic.packet_size_bytes);
        if (static_cast<int>(flows.size()) > cfg_.num_clients) {
            throw std::invalid_argument(
                "config: trace has more flows than clients");
        }
    } else {
        for (int flow = 0; flow < cfg_.num_clients; ++flow) {
            flows.push_back(
                generate_stream(cfg_.traffic, cfg_.duration_ms, flow, flow));
        }
    }
    for (const auto& packets : flows) {
        for (const Packet& p : packets) {
            arrivals_.push_back(p);
            records_[p.id] = PacketRecord{p.target, p.id.flow, p.deadline_ms,
                                          p.delta, Fate::Pending};
            auto& fm = flow_counts_.at(static_cast<std::size_t>(p.id.flow));
            ++fm.offered;
            fm.utility_offered += p.delta;
        }
    }
    std::sort(arrivals_.begin(), arrivals_.end(),
              [](const Packet& a, const Packet& b) {
                  return std::tie(a.arrival_ms, a.id) <
                         std::tie(b.arrival_ms, b.id);
              });
    Event first;
    first.time_ms = 0.0;
    first.rank = kSlot;
    schedule(std::move(first));
}

std::optional<NetworkCode> Engine::select(double now) {
    switch (cfg_.algorithm) {
        case Algorithm::NoNC:
            return select_nonc(queue_, now);
        case Algorithm::NCT:
            // the classic throughput baseline codes over per-flow
            // head-of-line packets only
            return select_nct(queue_, nodes_, now, SidePool::EarliestPerFlow);
        case Algorithm::NCV:
            return select_ncv(queue_, nodes_, estimates_, now);
        case Algorithm::NCVD:
            return select_ncvd(queue_, nodes_, estimates_, now,
                               cfg_.ncvd_depth);
        case Algorithm::NCV_MWIS: {
            const Packet* primary = queue_.first_active(now);
            if (primary == nullptr) {
                return std::nullopt;
            }
            return select_side_mwis(*primary, queue_, nodes_, estimates_, now);
        }
    }
    return std::nullopt;
}

void Engine::on_slot(double now) {
    // 1. admit arrivals
    while (next_arrival_ < arrivals_.size() &&
           arrivals_[next_arrival_].arrival_ms <= now) {
        queue_.push(arrivals_[next_arrival_]);
        ++next_arrival_;
    }
    // 2. purge expired packets and virtual-buffer entries
    for (const PacketId& id : queue_.purge_expired(now)) {
        PacketRecord& rec = records_.at(id);
        if (rec.fate == Fate::Pending) {
            rec.fate = Fate::ExpiredQueue;
        }
    }
    for (NodeState& n : nodes_) {
        n.purge_expired(now);
    }
    // 3. drop resolved retransmission timers; members past expected_by are
    // active again through their inactive_until timestamps
    std::erase_if(pending_acks_, [&](const PendingAck& pa) {
        return pa.expected_by_ms <= now;
    });

    txq_sum_ += static_cast<double>(queue_.size());
    for (const NodeState& n : nodes_) {
        vbuf_sum_ += static_cast<double>(n.virtual_buffer.size());
    }
    ++slot_samples_;

    // 4. select and broadcast
    if (cfg_.channel.sender_state_oracle) {
        for (std::size_t m = 0; m < channels_.size(); ++m) {
            estimates_[m].channel_loss =
                channels_[m].loss_now(cfg_.traffic.packet_size_bytes);
        }
    }
    if (slot_observer) {
        slot_observer(now);
    }
    if (auto code = select(now)) {
        const Packet* primary = queue_.find(code->primary);
        check(primary != nullptr && primary->active(now),
              "selected primary must be an active queue packet");
        const auto& target_state =
            nodes_[static_cast<std::size_t>(code->target)];
        if (!target_state.knows(code->primary, now)) {
            const auto d = decodable(*code, target_state, now);
            check(d && *d == code->primary,
                  "code must yield the primary at its target");
        }
        ++transmissions_;
        for (int m = 0; m < cfg_.num_clients; ++m) {
            const auto outcome = channels_[static_cast<std::size_t>(m)].transmit(
                cfg_.traffic.packet_size_bytes, delay_model_, rng_);
            if (outcome.delivered) {
                Event ev;
                ev.time_ms = now + outcome.delay_ms;
                ev.rank = kReception;
                ev.node = m;
                ev.code = *code;
                schedule(std::move(ev));
            }
        }
        // 5. all code members go inactive for one RTT
        for (const PacketId& id : code->members) {
            if (Packet* p = queue_.find(id)) {
                p->inactive_until_ms = now + rtt_ms_;
            }
        }
        pending_acks_.push_back(PendingAck{*code, now, now + rtt_ms_});
    }

    // 6. channel state evolves between slots
    for (Channel& ch : channels_) {
        ch.advance(slot_ms_, rng_);
    }
    const double next = now + slot_ms_;
    if (next < cfg_.duration_ms) {
        Event ev;
        ev.time_ms = next;
        ev.rank = kSlot;
        schedule(std::move(ev));
    }
}

void Engine::on_reception(int node, const NetworkCode& code, double now) {
    NodeState& state = nodes_.at(static_cast<std::size_t>(node));
    const auto d = decodable(code, state, now);
    if (!d) {
        ++undecodable_;  // nothing new or >= 2 unknowns; stored nowhere
        return;
    }
    PacketRecord& rec = records_.at(*d);
    if (rec.target == node) {
        if (now <= rec.deadline_ms) {
            check(rec.fate == Fate::Pending,
                  "on-time delivery of a packet with a settled fate");
            state.rx_buffer.insert(*d);
            rec.fate = Fate::OnTime;
            ++app_delivered_;
            ++mac_delivered_;
            auto& fm = flow_counts_.at(static_cast<std::size_t>(rec.flow));
            ++fm.delivered_on_time;
            fm.utility_delivered += rec.delta;
            if (const auto delay = ack_outcome(ack_model_, rng_)) {
                Event ev;
                ev.time_ms = now + *delay;
                ev.rank = kAck;
                ev.packet = *d;
                schedule(std::move(ev));
            }
        } else if (rec.fate == Fate::Pending ||
                   rec.fate == Fate::ExpiredQueue) {
            // decoded past its deadline: discarded at the client; a packet
            // already purged from the Tx queue settles as late, not expired
            rec.fate = Fate::Late;
            ++flow_counts_.at(static_cast<std::size_t>(rec.flow))
                  .delivered_late;
            ++mac_delivered_;
        }
    } else {
        // overheard packet destined elsewhere: store until its deadline
        if (rec.deadline_ms >= now &&
            state.virtual_buffer.find(*d) == state.virtual_buffer.end()) {
            state.virtual_buffer[*d] = rec.deadline_ms;
            ++mac_delivered_;
        }
    }
}

void Engine::on_ack(const PacketId& id, double /*now*/) {
    queue_.remove(id);  // duplicate ACKs and expired packets: no-op
    for (NodeState& n : nodes_) {
        n.virtual_buffer.erase(id);
    }
}

bool Engine::step() {
    if (events_.empty()) {
        return false;
    }
    Event ev = events_.top();
    events_.pop();
    now_ = ev.time_ms;
    switch (ev.rank) {
        case kSlot:
            on_slot(ev.time_ms);
            break;
        case kReception:
            on_reception(ev.node, ev.code, ev.time_ms);
            break;
        case kAck:
            on_ack(ev.packet, ev.time_ms);
            break;
    }
    return true;
}

RunMetrics Engine::metrics() const {
    RunMetrics out;
    out.per_flow = flow_counts_;
    std::vector<std::int64_t> on_time(flow_counts_.size(), 0);
    std::vector<std::int64_t> late(flow_counts_.size(), 0);
    for (const auto& [id, rec] : records_) {
        const auto flow = static_cast<std::size_t>(rec.flow);
        switch (rec.fate) {
            case Fate::OnTime:
                ++on_time[flow];
                break;
            case Fate::Late:
                ++late[flow];
                break;
            case Fate::Pending:        // still in flight or queued at the end
            case Fate::ExpiredQueue:
                ++out.per_flow[flow].expired;
                break;
        }
    }
    std::int64_t on_time_total = 0;
    for (std::size_t f = 0; f < out.per_flow.size(); ++f) {
        FlowMetrics& fm = out.per_flow[f];
        check(fm.delivered_on_time == on_time[f] && fm.delivered_late == late[f],
              "per-flow counters must match packet fates");
        check(fm.delivered_on_time + fm.delivered_late + fm.expired ==
                  fm.offered,
              "packet fates must partition the offered set");
        check(fm.utility_delivered <= fm.utility_offered + 1e-9,
              "delivered utility cannot exceed offered");
        on_time_total += fm.delivered_on_time;
    }
    check(on_time_total == app_delivered_,
          "application deliveries must match per-flow on-time counts");
    check(app_delivered_ <= mac_delivered_,
          "application deliveries cannot exceed MAC recoveries");

    out.mac_packets_delivered = mac_delivered_;
    out.app_packets_delivered = app_delivered_;
    out.transmissions = transmissions_;
    out.mean_tx_queue =
        slot_samples_ > 0 ? txq_sum_ / static_cast<double>(slot_samples_) : 0.0;
    out.mean_virtual_buffer =
        slot_samples_ > 0
            ? vbuf_sum_ / static_cast<double>(slot_samples_ * cfg_.num_clients)
            : 0.0;
    out.duration_ms = cfg_.duration_ms;
    return out;
}

}  // namespace detail

Simulator::Simulator(const RunConfig& config)
    : engine_(std::make_unique<detail::Engine>(config)) {}
Simulator::~Simulator() = default;
Simulator::Simulator(Simulator&&) noexcept = default;
Simulator& Simulator::operator=(Simulator&&) noexcept = default;

RunMetrics Simulator::run_all() {
    while (engine_->step()) {
    }
    return engine_->metrics();
}

bool Simulator::step() { return engine_->step(); }
double Simulator::now_ms() const { return engine_->now_ms(); }
const TxQueue& Simulator::tx_queue() const { return engine_->tx_queue(); }
const std::vector<NodeState>& Simulator::node_states() const {
    return engine_->node_states();
}
RunMetrics Simulator::metrics() { return engine_->metrics(); }
void Simulator::set_slot_observer(std::function<void(double)> observer) {
    engine_->slot_observer = std::move(observer);
}
void Simulator::deliver(int node, const NetworkCode& code, double time_ms) {
    engine_->on_reception(node, code, time_ms);
}
void Simulator::ack(const PacketId& id, double time_ms) {
    engine_->on_ack(id, time_ms);
}

RunMetrics run(const RunConfig& config) { return Simulator(config).run_all(); }

}  // namespace xorcast
