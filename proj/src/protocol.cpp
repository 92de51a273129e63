#include "relect/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "relect/numeric.hpp"
#include "relect/rng.hpp"

namespace relect {

namespace {
// Largest representable round schedule; alpha^j beyond this means the
// safety cap failed to stop the run.
constexpr double kMaxRoundLength = 4.0e18;
}  // namespace

void validate_params(const ProtocolParams& params, std::int64_t n) {
    if (n < 2) throw ConfigError("station count must be at least 2");
    if (!(params.alpha > 1.0)) throw ConfigError("alpha must exceed 1");
    if (params.k_start < 1) throw ConfigError("k_start must be positive");
    if (params.max_rounds < 1) throw ConfigError("max_rounds must be positive");
    if (params.protocol == Protocol::Alg1 && params.model != ChannelModel::StrongNoCD)
        throw ConfigError("alg1 requires the strong no-CD model");
    if (params.protocol == Protocol::Alg2 && params.model != ChannelModel::WeakNoCD)
        throw ConfigError("alg2 requires the weak no-CD model");
}

std::int64_t round_length(int j, double alpha) {
    if (j < 1) throw ConfigError("round index must be positive");
    if (!(alpha > 1.0)) throw ConfigError("alpha must exceed 1");
    const double raw = std::pow(alpha, static_cast<double>(j));
    if (!(raw < kMaxRoundLength)) throw OverflowError("round schedule exceeds the slot budget");
    return guarded_ceil(raw);
}

double slot_probability(int slot_position, int k_start) {
    if (slot_position < 1 || k_start < 1)
        throw ConfigError("slot position and k_start must be positive");
    return std::ldexp(1.0, -(k_start + slot_position - 1));
}

ElectionEngine::ElectionEngine(const ProtocolParams& params, int n, std::uint64_t seed,
                               std::span<const std::uint64_t> station_keys,
                               const SlotScript* script)
    : params_(params), n_(n), seed_(seed), script_(script) {
    validate_params(params, n);
    if (!station_keys.empty() && station_keys.size() != static_cast<std::size_t>(n))
        throw ConfigError("station key vector must have one key per station");

    identity_keys_ = station_keys.empty();
    if (!identity_keys_) {
        key_mul_.resize(n_);
        for (int s = 0; s < n_; ++s) key_mul_[s] = station_keys[s] * kGolden;
    }
    awake_.assign(n_, 0);
    candidate_.assign(n_, 0);
    witness_slot_.assign(n_, -1);
    sent_any_.assign(n_, 0);
}

void ElectionEngine::reset_round_state() {
    for (int s : candidates_) candidate_[s] = 0;
    candidates_.clear();
    for (int s : witnesses_) witness_slot_[s] = -1;
    witnesses_.clear();
    for (int s : round_senders_) sent_any_[s] = 0;
    round_senders_.clear();
    unique_slots_.clear();
    broadcast_log_.clear();
}

int ElectionEngine::active_slots(std::int64_t length) const {
    // Wake probabilities below 2^-64 cannot fire; later slots pass in silence.
    const std::int64_t cap = std::max<std::int64_t>(0, 65 - params_.k_start);
    return static_cast<int>(std::min(length, cap));
}

void ElectionEngine::set_leader(int station) {
    if (leader_ >= 0) throw std::logic_error("second leader elected; protocol safety violated");
    leader_ = station;
}

int ElectionEngine::sender_of_slot(std::uint32_t slot) const {
    for (const auto& [sl, st] : unique_slots_)
        if (sl == slot) return st;
    return -1;
}

void ElectionEngine::collect_wakers(std::uint64_t salt, std::uint64_t threshold) {
    scratch_hits_.clear();
    if (identity_keys_) {
        // Four independent hash chains per iteration keep the multiplier
        // pipeline busy.
        constexpr std::uint64_t step = 4 * kGolden;
        std::uint64_t k0 = 0, k1 = kGolden, k2 = 2 * kGolden, k3 = 3 * kGolden;
        int s = 0;
        for (; s + 3 < n_; s += 4) {
            const std::uint64_t x0 = station_draw(salt, k0);
            const std::uint64_t x1 = station_draw(salt, k1);
            const std::uint64_t x2 = station_draw(salt, k2);
            const std::uint64_t x3 = station_draw(salt, k3);
            if (x0 < threshold) scratch_hits_.emplace_back(s, x0);
            if (x1 < threshold) scratch_hits_.emplace_back(s + 1, x1);
            if (x2 < threshold) scratch_hits_.emplace_back(s + 2, x2);
            if (x3 < threshold) scratch_hits_.emplace_back(s + 3, x3);
            k0 += step;
            k1 += step;
            k2 += step;
            k3 += step;
        }
        for (std::uint64_t key = static_cast<std::uint64_t>(s) * kGolden; s < n_;
             ++s, key += kGolden) {
            const std::uint64_t x = station_draw(salt, key);
            if (x < threshold) scratch_hits_.emplace_back(s, x);
        }
    } else {
        for (int s = 0; s < n_; ++s) {
            const std::uint64_t x = station_draw(salt, key_mul_[s]);
            if (x < threshold) scratch_hits_.emplace_back(s, x);
        }
    }
}

ElectionEngine::RoundResult ElectionEngine::run_round(int round) {
    if (terminated_) throw std::logic_error("run_round called after termination");
    reset_round_state();
    const std::int64_t length = round_length(round, params_.alpha);
    prob_slots_ += static_cast<std::uint64_t>(length);
    ++rounds_run_;
    return params_.protocol == Protocol::Alg1 ? alg1_round(round, length)
                                              : alg2_round(round, length);
}

ElectionEngine::RoundResult ElectionEngine::alg1_round(int round, std::int64_t length) {
    const bool scripted = script_ && script_->alg1_slot;
    const std::int64_t slots = scripted ? length : active_slots(length);

    for (std::int64_t i = 1; i <= slots; ++i) {
        BroadcastSummary cast;
        if (scripted) {
            scratch_wakers_.clear();
            script_->alg1_slot(round, static_cast<int>(i), n_, scratch_wakers_);
            for (int s : scratch_wakers_) {
                ++awake_[s];
                cast.add(s, Message::candidate_claim());
            }
        } else {
            const int k = params_.k_start + static_cast<int>(i) - 1;
            const std::uint64_t thr = pow2_threshold(k);
            const std::uint64_t salt = slot_salt(seed_, static_cast<std::uint32_t>(round),
                                                 static_cast<std::uint32_t>(i));
            collect_wakers(salt, thr);
            for (const auto& [s, draw] : scratch_hits_) {
                ++awake_[s];
                cast.add(s, Message::candidate_claim());
            }
        }
        // A lone broadcaster receives its own claim (strong model) and
        // becomes a candidate.
        if (cast.unique() && !candidate_[cast.sender]) {
            candidate_[cast.sender] = 1;
            candidates_.push_back(cast.sender);
        }
    }

    // End-of-round slot: everyone wakes and listens, candidates broadcast.
    BroadcastSummary cast;
    for (int s : candidates_) cast.add(s, Message::candidate_claim());
    const Observation heard = observe(true, cast);
    if (heard.kind == ObservationKind::Received &&
        heard.message.kind == MessageKind::CandidateClaim) {
        set_leader(cast.sender);
        terminated_ = true;  // every station listened and received the claim
        return {true, leader_};
    }
    return {false, -1};
}

ElectionEngine::RoundResult ElectionEngine::alg2_round(int round, std::int64_t length) {
    const bool scripted = script_ && script_->alg2_slot;
    const std::int64_t slots = scripted ? length : active_slots(length);

    for (std::int64_t i = 1; i <= slots; ++i) {
        const auto slot = static_cast<std::uint32_t>(i);
        BroadcastSummary cast;
        scratch_listeners_.clear();

        auto touch = [&](int s, bool sends) {
            ++awake_[s];
            if (sends) {
                cast.add(s, Message::ok());
                if (!sent_any_[s]) {
                    sent_any_[s] = 1;
                    round_senders_.push_back(s);
                }
                broadcast_log_.emplace_back(slot, s);
            } else {
                scratch_listeners_.push_back(s);
            }
        };

        if (scripted) {
            scratch_awake_.clear();
            script_->alg2_slot(round, static_cast<int>(i), n_, scratch_awake_);
            for (const auto& [s, sends] : scratch_awake_) touch(s, sends);
        } else {
            const int k = params_.k_start + static_cast<int>(i) - 1;
            const std::uint64_t thr = pow2_threshold(k);
            const std::uint64_t salt = slot_salt(seed_, static_cast<std::uint32_t>(round), slot);
            collect_wakers(salt, thr);
            for (const auto& [s, draw] : scratch_hits_) touch(s, (draw & 1ull) != 0);
        }

        if (cast.unique()) {
            unique_slots_.emplace_back(slot, cast.sender);
            // Every listener receives the lone message and becomes a witness
            // for that slot, keeping the first slot it witnessed.
            for (int w : scratch_listeners_) {
                if (witness_slot_[w] < 0) {
                    witness_slot_[w] = static_cast<std::int32_t>(slot);
                    witnesses_.push_back(w);
                }
            }
        }
    }

    // Report slot: witnesses broadcast the slot they vouch for; stations that
    // broadcast during the round (and are not witnesses themselves) listen.
    BroadcastSummary report_cast;
    for (int w : witnesses_) {
        report_cast.add(w, Message::witness_report(static_cast<std::uint32_t>(witness_slot_[w])));
        ++awake_[w];
    }
    int elected = -1;
    const Observation report = observe(true, report_cast);
    for (int s : round_senders_) {
        if (witness_slot_[s] >= 0) continue;  // witness role takes precedence
        ++awake_[s];
        if (report.kind == ObservationKind::Received &&
            report.message.kind == MessageKind::WitnessReport &&
            sender_of_slot(report.message.slot_index) == s) {
            elected = s;  // the reported slot is one this station broadcast in
        }
    }
    if (elected >= 0) {
        set_leader(elected);
        announced_slot_ = report_cast.message.slot_index;
    }

    // Announce slot: everyone listens; the leader (which cannot listen in the
    // weak model, and needs not) broadcasts.
    BroadcastSummary announce_cast;
    if (leader_ >= 0) announce_cast.add(leader_, Message::leader_announce());
    const Observation announce = observe(true, announce_cast);
    if (announce.kind == ObservationKind::Received &&
        announce.message.kind == MessageKind::LeaderAnnounce) {
        terminated_ = true;
    }
    return terminated_ ? RoundResult{true, leader_} : RoundResult{false, -1};
}

RunMetrics ElectionEngine::run_to_completion() {
    for (int j = 1; j <= params_.max_rounds && !terminated_; ++j) {
        try {
            run_round(j);
        } catch (const OverflowError&) {
            break;  // schedule outgrew the slot budget; report unterminated
        }
    }
    return metrics();
}

RunMetrics ElectionEngine::metrics() const {
    RunMetrics m;
    m.rounds_used = rounds_run_;
    m.probabilistic_slots = prob_slots_;
    m.total_slots = prob_slots_ + static_cast<std::uint64_t>(rounds_run_) *
                                      deterministic_overhead(params_.protocol);
    m.awake_per_station = awake_;
    // Every station is awake once per round for sure: the end-of-round slot
    // in alg1, the announce slot in alg2.
    const auto base = static_cast<std::uint32_t>(rounds_run_);
    for (auto& a : m.awake_per_station) a += base;
    m.leader_index = leader_;
    m.terminated = terminated_;
    return m;
}

StationState ElectionEngine::station_state(int station) const {
    if (station < 0 || station >= n_) throw ConfigError("station index out of range");
    StationState st;
    st.candidate = candidate_[station] != 0;
    if (witness_slot_[station] >= 0)
        st.witness_for = static_cast<std::uint32_t>(witness_slot_[station]);
    for (const auto& [slot, s] : broadcast_log_)
        if (s == station) st.broadcast_slots.push_back(slot);
    st.leader = (station == leader_);
    st.knows_terminated = terminated_;
    st.awake_slots = awake_[station] + static_cast<std::uint32_t>(rounds_run_);
    return st;
}

RunMetrics run_election(const ProtocolParams& params, int n, std::uint64_t seed) {
    return run_election(params, n, seed, {});
}

RunMetrics run_election(const ProtocolParams& params, int n, std::uint64_t seed,
                        std::span<const std::uint64_t> station_keys) {
    ElectionEngine engine(params, n, seed, station_keys);
    return engine.run_to_completion();
}

}  // namespace relect
