#ifndef XORCAST_CHANNEL_HPP
#define XORCAST_CHANNEL_HPP

#include <optional>
#include <variant>

#include "xorcast/rng.hpp"

namespace xorcast {

struct DelayModel {
    double mean_ms = 4.0;
};

/// Model I: every transmission lost independently with fixed probability.
struct IidChannel {
    double loss_rate = 0.0;
};

/// Model II: two-state Markov (Gilbert-Elliot) channel. Transitions are
/// sampled once per transmission step, so the state is constant during a
/// packet. Per-state packet loss follows from independent bit errors.
struct GilbertElliotChannel {
    enum class State { Good, Bad };

    double ber_good = 0.0;
    double ber_bad = 0.0;
    double sojourn_good_ms = 21.0;
    double sojourn_bad_ms = 21.0;
    double step_ms = 21.0;  // discretization step (one packet slot)
    State current = State::Good;

    double packet_loss(State s, int packet_size_bytes) const;
    double stationary_good() const;
    double stationary_loss(int packet_size_bytes) const;
};

/// Named presets for the four configured average-SNR levels. The BER pairs
/// are calibration artifacts chosen so the effective packet loss spans
/// roughly 1% to 35% across the presets; they are direct config inputs,
/// not measured values.
GilbertElliotChannel gilbert_elliot_preset(int snr_db);

struct TransmitOutcome {
    bool delivered = false;
    double delay_ms = 0.0;
};

class Channel {
  public:
    Channel() : model_(IidChannel{}) {}
    explicit Channel(IidChannel m) : model_(m) {}
    explicit Channel(GilbertElliotChannel m) : model_(m) {}

    /// Advances the loss process by `elapsed_ms`. No-op for Model I; for
    /// Model II runs floor(elapsed/step) Markov steps with per-step leave
    /// probability step/sojourn (clamped to 1).
    void advance(double elapsed_ms, Rng& rng);

    TransmitOutcome transmit(int packet_size_bytes, const DelayModel& delay,
                             Rng& rng);

    /// Loss probability governing the next transmission (current state).
    double loss_now(int packet_size_bytes) const;
    /// Long-run average loss probability; what a sender without channel
    /// state knowledge would estimate.
    double loss_stationary(int packet_size_bytes) const;

    const GilbertElliotChannel* gilbert_elliot() const {
        return std::get_if<GilbertElliotChannel>(&model_);
    }

  private:
    std::variant<IidChannel, GilbertElliotChannel> model_;
};

struct AckModel {
    double loss = 0.0;  // ACKs are lossless by default and never coded
    DelayModel delay;
};

/// Returns the ACK propagation delay, or nothing if the ACK was lost.
std::optional<double> ack_outcome(const AckModel& model, Rng& rng);

}  // namespace xorcast

#endif
