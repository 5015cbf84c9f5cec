#include "tadet/unfold.hpp"

#include "tadet/errors.hpp"
#include "tadet/semantics.hpp"

#include <algorithm>
#include <map>

namespace tadet {

namespace {

struct Unfolder {
    const TimedAutomaton& source;
    std::vector<std::vector<TransitionId>> out;
    int k;
    UnfoldedTree tree;

    LocationId add_node(LocationId origin, int level, int silent_index, bool accepting)
    {
        auto id = tree.automaton.locations.size();
        tree.automaton.add_location(source.locations[origin].name + "." + std::to_string(id), accepting);
        tree.nodes.push_back({{origin}, level, silent_index, NodeRole::plain});
        return id;
    }

    void expand(LocationId node)
    {
        const NodeInfo info = tree.nodes[node];
        if (info.level >= k) return;
        for (auto e : out[info.origins.front()]) {
            const auto& t = source.transitions[e];
            LocationId child;
            if (t.action.is_silent()) {
                child = add_node(t.target, info.level, info.silent_index + 1, false);
            } else {
                child = add_node(t.target, info.level + 1, -1, source.locations[t.target].accepting);
            }
            tree.automaton.add_transition(node, child, t.action, t.guard, t.resets);
            expand(child);
        }
    }
};

void prune_non_accepting(UnfoldedTree& t)
{
    const auto& a = t.automaton;
    auto out = a.outgoing();
    std::vector<bool> keep(a.locations.size(), false);
    // children always have larger ids than their parent
    for (LocationId n = a.locations.size(); n-- > 0;) {
        keep[n] = a.locations[n].accepting;
        for (auto e : out[n]) keep[n] = keep[n] || keep[a.transitions[e].target];
    }
    keep[a.initial] = true;
    std::vector<LocationId> renumber(a.locations.size());
    UnfoldedTree pruned;
    pruned.automaton.clocks = a.clocks;
    pruned.automaton.shape = a.shape;
    pruned.automaton.depth = a.depth;
    for (LocationId n = 0; n < a.locations.size(); ++n) {
        if (!keep[n]) continue;
        renumber[n] = pruned.automaton.locations.size();
        pruned.automaton.locations.push_back(a.locations[n]);
        pruned.nodes.push_back(t.nodes[n]);
    }
    for (const auto& tr : a.transitions) {
        if (!keep[tr.target]) continue;
        auto copy = tr;
        copy.source = renumber[tr.source];
        copy.target = renumber[tr.target];
        pruned.automaton.transitions.push_back(std::move(copy));
    }
    pruned.automaton.initial = renumber[a.initial];
    t = std::move(pruned);
}

}  // namespace

UnfoldedTree unfold(const TimedAutomaton& a, int k, bool prune_nonaccepting_leaves)
{
    if (k < 1) throw UsageError("unfolding depth must be at least 1");
    validate(a);
    if (!check_strong_responsiveness(a)) throw PreconditionError("automaton has a silent loop");
    Unfolder u{a, a.outgoing(), k, {}};
    u.tree.automaton.clocks = a.clocks;
    u.tree.automaton.shape = Shape::tree;
    u.tree.automaton.depth = k;
    auto root = u.add_node(a.initial, 0, -1, a.locations[a.initial].accepting);
    u.tree.automaton.initial = root;
    u.tree.automaton.locations[root].invariant = a.locations[a.initial].invariant;
    u.expand(root);
    for (LocationId n = 0; n < u.tree.size(); ++n)
        u.tree.automaton.locations[n].invariant = a.locations[u.tree.nodes[n].origins.front()].invariant;
    if (prune_nonaccepting_leaves) prune_non_accepting(u.tree);
    return std::move(u.tree);
}

UnfoldedTree rename_clocks(const UnfoldedTree& t)
{
    const auto& a = t.automaton;
    if (a.shape != Shape::tree) throw StructuralError("clock renaming needs a tree-shaped automaton");
    validate(a);
    const ClockId x0 = ClockId::level(0);
    struct State {
        std::map<ClockId, ClockId> current;  // original clock -> clock of its last reset
        int level = 0;
        int silent = -1;
    };
    std::vector<State> state(a.locations.size());
    for (const auto& c : a.clocks) state[a.initial].current[c] = x0;
    auto out = a.outgoing();
    UnfoldedTree r = t;
    r.renamed = true;
    r.automaton.clocks = {x0};
    std::vector<LocationId> stack{a.initial};
    std::vector<std::pair<TransitionId, ClockId>> fresh;
    while (!stack.empty()) {
        LocationId n = stack.back();
        stack.pop_back();
        r.nodes[n].level = state[n].level;
        r.nodes[n].silent_index = state[n].silent;
        for (auto e : out[n]) {
            const auto& tr = a.transitions[e];
            State next = state[n];
            ClockId clock;
            if (tr.action.is_silent()) {
                next.silent = state[n].silent + 1;
                clock = ClockId::silent_level(state[n].level, next.silent);
            } else {
                next.level = state[n].level + 1;
                next.silent = -1;
                clock = ClockId::level(next.level);
            }
            const auto& map = state[n].current;
            auto& rt = r.automaton.transitions[e];
            rt.guard = substitute(tr.guard, [&](const ClockId& c) { return map.at(c); });
            rt.resets = {clock};
            for (const auto& c : tr.resets) next.current[c] = clock;
            fresh.emplace_back(e, clock);
            state[tr.target] = std::move(next);
            stack.push_back(tr.target);
        }
    }
    std::sort(fresh.begin(), fresh.end(), [](const auto& p, const auto& q) { return p.first < q.first; });
    for (const auto& [e, c] : fresh)
        if (std::find(r.automaton.clocks.begin(), r.automaton.clocks.end(), c) == r.automaton.clocks.end())
            r.automaton.clocks.push_back(c);
    for (LocationId n = 0; n < a.locations.size(); ++n)
        if (!a.locations[n].invariant.is_top())
            r.automaton.locations[n].invariant =
                substitute(a.locations[n].invariant, [&](const ClockId& c) { return state[n].current.at(c); });
    return r;
}

}  // namespace tadet
