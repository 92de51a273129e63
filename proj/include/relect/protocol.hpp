#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "relect/channel.hpp"
#include "relect/errors.hpp"

namespace relect {

enum class Protocol : std::uint8_t { Alg1, Alg2 };

// Alg1 runs in the strong model: stations wake to broadcast and listen at
// once, so a lone broadcaster hears itself and needs no witness. Alg2 runs
// in the weak model: awake stations split into senders and listeners, and a
// listener that hears a lone sender vouches for it at the end of the round.
struct ProtocolParams {
    Protocol protocol = Protocol::Alg1;
    ChannelModel model = ChannelModel::StrongNoCD;
    double alpha = 1.3361;  // tuning parameter, > 1; round j spans ceil(alpha^j) slots
    int k_start = 1;        // first wake exponent; > 1 trades time for fewer awake slots
    int max_rounds = 64;    // safety cap

    static ProtocolParams alg1(double alpha = 1.3361) {
        return {Protocol::Alg1, ChannelModel::StrongNoCD, alpha, 1, 64};
    }
    static ProtocolParams alg2(double alpha = 1.3295) {
        return {Protocol::Alg2, ChannelModel::WeakNoCD, alpha, 1, 64};
    }
};

// Throws ConfigError unless n >= 2, alpha > 1, k_start >= 1, max_rounds >= 1
// and the protocol/model pairing is legal.
void validate_params(const ProtocolParams& params, std::int64_t n);

// ceil(alpha^j) with the near-integer snap. Throws OverflowError once the
// schedule outgrows the representable slot budget.
std::int64_t round_length(int j, double alpha);

// Wake probability 2^-(k_start + i - 1) for slot position i (1-based).
double slot_probability(int slot_position, int k_start);

inline int deterministic_overhead(Protocol p) { return p == Protocol::Alg1 ? 1 : 2; }

struct RunMetrics {
    int rounds_used = 0;
    std::uint64_t probabilistic_slots = 0;  // sum of round lengths
    std::uint64_t total_slots = 0;          // plus per-round deterministic slots
    std::vector<std::uint32_t> awake_per_station;
    int leader_index = -1;  // bookkeeping only; no protocol logic sees indices
    bool terminated = false;
};

// Test-facing snapshot of one station. The engine keeps this information in
// flat arrays; the fields reset at the start of every round so that each
// round is a fresh trial.
struct StationState {
    bool candidate = false;
    std::optional<std::uint32_t> witness_for;
    std::vector<std::uint32_t> broadcast_slots;
    bool leader = false;
    bool knows_terminated = false;
    std::uint32_t awake_slots = 0;
};

// Test hook: explicit wake decisions instead of the seeded stream.
// alg1_slot fills the stations that wake (to broadcast and listen);
// alg2_slot fills (station, sends) pairs for the awake stations.
struct SlotScript {
    std::function<void(int round, int slot, int n, std::vector<int>& out)> alg1_slot;
    std::function<void(int round, int slot, int n, std::vector<std::pair<int, bool>>& out)>
        alg2_slot;
};

class ElectionEngine {
  public:
    struct RoundResult {
        bool elected = false;
        int leader = -1;
    };

    ElectionEngine(const ProtocolParams& params, int n, std::uint64_t seed,
                   std::span<const std::uint64_t> station_keys = {},
                   const SlotScript* script = nullptr);

    // One full round: probabilistic phase plus the deterministic slot(s).
    RoundResult run_round(int round);

    // Rounds 1, 2, ... until election or the safety cap.
    RunMetrics run_to_completion();

    RunMetrics metrics() const;
    StationState station_state(int station) const;

    bool terminated() const { return terminated_; }
    int leader() const { return leader_; }
    int rounds_run() const { return rounds_run_; }
    // Slot position named by the witness report that elected the leader.
    std::optional<std::uint32_t> announced_report_slot() const { return announced_slot_; }

  private:
    void reset_round_state();
    RoundResult alg1_round(int round, std::int64_t length);
    RoundResult alg2_round(int round, std::int64_t length);
    void set_leader(int station);
    int sender_of_slot(std::uint32_t slot) const;
    int active_slots(std::int64_t length) const;
    void collect_wakers(std::uint64_t salt, std::uint64_t threshold);

    ProtocolParams params_;
    int n_ = 0;
    std::uint64_t seed_ = 0;
    const SlotScript* script_ = nullptr;

    bool identity_keys_ = true;
    std::vector<std::uint64_t> key_mul_;   // station key * golden ratio constant
    std::vector<std::uint32_t> awake_;     // wakes + report-slot participation

    std::vector<std::uint8_t> candidate_;  // alg1, current round
    std::vector<int> candidates_;

    std::vector<std::int32_t> witness_slot_;  // alg2, -1 = not a witness
    std::vector<int> witnesses_;
    std::vector<std::uint8_t> sent_any_;
    std::vector<int> round_senders_;
    std::vector<std::pair<std::uint32_t, int>> unique_slots_;   // (slot, lone sender)
    std::vector<std::pair<std::uint32_t, int>> broadcast_log_;  // (slot, station)

    std::vector<int> scratch_listeners_;
    std::vector<int> scratch_wakers_;
    std::vector<std::pair<int, bool>> scratch_awake_;
    std::vector<std::pair<int, std::uint64_t>> scratch_hits_;  // (station, draw)

    int rounds_run_ = 0;
    std::uint64_t prob_slots_ = 0;
    int leader_ = -1;
    bool terminated_ = false;
    std::optional<std::uint32_t> announced_slot_;
};

RunMetrics run_election(const ProtocolParams& params, int n, std::uint64_t seed);
RunMetrics run_election(const ProtocolParams& params, int n, std::uint64_t seed,
                        std::span<const std::uint64_t> station_keys);

}  // namespace relect
