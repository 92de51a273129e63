#include "relect/channel.hpp"

namespace relect {

std::vector<Observation> resolve_slot(std::span<const SlotAction> actions, ChannelModel model) {
    if (actions.empty()) throw ConfigError("resolve_slot: empty action vector");

    BroadcastSummary cast;
    for (std::size_t i = 0; i < actions.size(); ++i) {
        const SlotAction& a = actions[i];
        if (a.kind == ActionKind::BroadcastAndListen && model == ChannelModel::WeakNoCD) {
            throw IllegalActionError("broadcast-and-listen is illegal in the weak model");
        }
        if (a.broadcasts()) cast.add(static_cast<int>(i), a.message);
    }

    std::vector<Observation> out(actions.size());
    for (std::size_t i = 0; i < actions.size(); ++i) {
        out[i] = observe(actions[i].listens(), cast);
    }
    return out;
}

}  // namespace relect
