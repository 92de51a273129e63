#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "relect/errors.hpp"

namespace relect {

// Synchronous slotted radio channel without collision detection. Listeners
// recognize a transmission only when exactly one station broadcasts; silence
// and collision are indistinguishable. In the strong model a station may
// broadcast and listen in the same slot (and then hears its own message);
// in the weak model the two are mutually exclusive.

enum class ChannelModel : std::uint8_t { StrongNoCD, WeakNoCD };

enum class MessageKind : std::uint8_t { Ok, WitnessReport, CandidateClaim, LeaderAnnounce };

struct Message {
    MessageKind kind = MessageKind::Ok;
    // Slot position inside the current round's probabilistic phase,
    // 1..round length. Meaningful for WitnessReport only.
    std::uint32_t slot_index = 0;

    static Message ok() { return {MessageKind::Ok, 0}; }
    static Message witness_report(std::uint32_t slot) { return {MessageKind::WitnessReport, slot}; }
    static Message candidate_claim() { return {MessageKind::CandidateClaim, 0}; }
    static Message leader_announce() { return {MessageKind::LeaderAnnounce, 0}; }

    friend bool operator==(const Message&, const Message&) = default;
};

enum class ActionKind : std::uint8_t { Sleep, Listen, Broadcast, BroadcastAndListen };

struct SlotAction {
    ActionKind kind = ActionKind::Sleep;
    Message message{};

    static SlotAction sleep() { return {ActionKind::Sleep, {}}; }
    static SlotAction listen() { return {ActionKind::Listen, {}}; }
    static SlotAction broadcast(Message m) { return {ActionKind::Broadcast, m}; }
    static SlotAction broadcast_and_listen(Message m) { return {ActionKind::BroadcastAndListen, m}; }

    bool broadcasts() const {
        return kind == ActionKind::Broadcast || kind == ActionKind::BroadcastAndListen;
    }
    bool listens() const {
        return kind == ActionKind::Listen || kind == ActionKind::BroadcastAndListen;
    }
    bool awake() const { return kind != ActionKind::Sleep; }

    friend bool operator==(const SlotAction&, const SlotAction&) = default;
};

enum class ObservationKind : std::uint8_t { Received, NoUniqueSignal, NotListening };

struct Observation {
    ObservationKind kind = ObservationKind::NotListening;
    Message message{};

    static Observation received(Message m) { return {ObservationKind::Received, m}; }
    static Observation no_unique_signal() { return {ObservationKind::NoUniqueSignal, {}}; }
    static Observation not_listening() { return {ObservationKind::NotListening, {}}; }

    friend bool operator==(const Observation&, const Observation&) = default;
};

// Broadcast side of one slot, accumulated station by station. The channel
// carries no sender identity; `sender` exists only so a simulation can do
// its bookkeeping in O(1) instead of searching the action vector.
struct BroadcastSummary {
    int count = 0;
    Message message{};
    int sender = -1;

    void add(int station, const Message& m) {
        ++count;
        if (count == 1) {
            message = m;
            sender = station;
        } else {
            sender = -1;
        }
    }
    bool unique() const { return count == 1; }
};

// What a station observes given whether it listened this slot.
inline Observation observe(bool listening, const BroadcastSummary& cast) {
    if (!listening) return Observation::not_listening();
    if (cast.unique()) return Observation::received(cast.message);
    return Observation::no_unique_signal();
}

// Resolves one slot: every listener receives the message iff exactly one
// station broadcast (in the strong model the transmitter itself counts as a
// listener when it chose BroadcastAndListen). Pure function.
// Throws IllegalActionError for BroadcastAndListen under WeakNoCD.
std::vector<Observation> resolve_slot(std::span<const SlotAction> actions, ChannelModel model);

}  // namespace relect
