#include "tadet/determinize.hpp"

#include "tadet/errors.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace tadet {

namespace {

void require_input(const UnfoldedTree& t)
{
    const auto& a = t.automaton;
    if (a.shape != Shape::tree) throw StructuralError("determinization needs a tree-shaped automaton");
    validate(a);
    if (!t.renamed) throw PreconditionError("determinization needs renamed clocks");
    if (!has_trivial_invariants(a)) throw UnsupportedError("location invariants other than true are not supported");
    for (const auto& tr : a.transitions) {
        if (tr.action.is_silent()) throw StructuralError("silent transitions must be removed before determinization");
        if (tr.resets.size() != 1) throw PreconditionError("every transition of a renamed tree resets exactly one clock");
    }
}

const ClockId& common_reset(const TimedAutomaton& a, const std::vector<TransitionId>& es)
{
    const ClockId& r = a.transitions[es.front()].resets.front();
    for (auto e : es)
        if (a.transitions[e].resets.front() != r)
            throw StructuralError("same-action siblings reset different clocks");
    return r;
}

// Same-action children of a set of nodes, grouped in order of first appearance.
std::vector<std::pair<Action, std::vector<TransitionId>>> group_by_action(
    const TimedAutomaton& a, const std::vector<std::vector<TransitionId>>& out, const std::vector<LocationId>& members)
{
    std::vector<std::pair<Action, std::vector<TransitionId>>> groups;
    for (auto m : members)
        for (auto e : out[m]) {
            const auto& act = a.transitions[e].action;
            auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == act; });
            if (it == groups.end()) groups.push_back({act, {e}});
            else it->second.push_back(e);
        }
    return groups;
}

// Output under construction. Nodes are keyed by their member set and status.
class Builder {
public:
    explicit Builder(const UnfoldedTree& in) : in_(in)
    {
        out_.automaton.clocks = in.automaton.clocks;
        out_.automaton.depth = in.automaton.depth;
        out_.renamed = true;
    }

    // Returns the node and whether it was created by this call.
    std::pair<LocationId, bool> intern(std::vector<LocationId> members, bool accepting)
    {
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        auto key = std::make_pair(members, accepting);
        if (auto it = index_.find(key); it != index_.end()) return {it->second, false};
        const auto& a = in_.automaton;
        std::string name;
        NodeInfo info;
        for (auto m : members) {
            if (!name.empty()) name += "|";
            name += a.locations[m].name;
            const auto& o = in_.nodes[m].origins;
            info.origins.insert(info.origins.end(), o.begin(), o.end());
        }
        std::sort(info.origins.begin(), info.origins.end());
        info.origins.erase(std::unique(info.origins.begin(), info.origins.end()), info.origins.end());
        info.level = in_.nodes[members.front()].level;
        if (members.size() > 1) {
            name = "{" + name + "}" + (accepting ? "+" : "-");
            info.role = accepting ? NodeRole::merged_accepting : NodeRole::merged_nonaccepting;
        }
        LocationId id = out_.automaton.add_location(name, accepting);
        out_.nodes.push_back(std::move(info));
        members_.push_back(members);
        index_.emplace(std::move(key), id);
        return {id, true};
    }

    const std::vector<LocationId>& members(LocationId n) const { return members_[n]; }
    TimedAutomaton& automaton() { return out_.automaton; }

    UnfoldedTree finish()
    {
        std::vector<int> indegree(out_.size(), 0);
        for (const auto& tr : out_.automaton.transitions) indegree[tr.target]++;
        bool shared = std::any_of(indegree.begin(), indegree.end(), [](int d) { return d > 1; });
        out_.automaton.shape = shared ? Shape::dag : Shape::tree;
        return std::move(out_);
    }

private:
    const UnfoldedTree& in_;
    UnfoldedTree out_;
    std::map<std::pair<std::vector<LocationId>, bool>, LocationId> index_;
    std::vector<std::vector<LocationId>> members_;
};

}  // namespace

Guard rebase(const Guard& g, const ClockId& reset)
{
    return map_atoms(g, [&](const AtomicConstraint& a) -> Guard {
        if (a.is_diagonal()) return a;
        if (a.left == reset) return holds(a.rel, 0, a.bound) ? Guard::top() : Guard::bottom();
        return atom(a.left, reset, a.rel, a.bound);
    });
}

UnfoldedTree determinize_guard_oriented(const UnfoldedTree& t, const DeterminizeOptions& opts,
                                        DeterminizeStats* stats)
{
    require_input(t);
    DeterminizeStats local;
    DeterminizeStats& st = stats ? *stats : local;
    const auto& a = t.automaton;
    auto out = a.outgoing();
    std::vector<std::optional<TransitionId>> incoming(a.locations.size());
    for (TransitionId e = 0; e < a.transitions.size(); ++e) incoming[a.transitions[e].target] = e;

    // Guard of an input transition with the rebased guards of merged ancestors
    // conjoined. Every input node lies in exactly one member set, so this is
    // well defined.
    std::vector<std::optional<Guard>> effective(a.transitions.size());
    auto effective_guard = [&](TransitionId e, bool source_merged) -> const Guard& {
        if (!effective[e]) {
            const auto& tr = a.transitions[e];
            Guard g = tr.guard;
            if (source_merged) {
                auto in = *incoming[tr.source];
                g = g && rebase(*effective[in], a.transitions[in].resets.front());
            }
            effective[e] = std::move(g);
        }
        return *effective[e];
    };
    auto keep = [&](const Guard& g) {
        if (!opts.prune_unsatisfiable || is_satisfiable(g, opts.limits)) return true;
        ++st.pruned_transitions;
        return false;
    };

    Builder b(t);
    std::deque<LocationId> work{b.intern({a.initial}, a.locations[a.initial].accepting).first};
    auto connect = [&](LocationId from, std::vector<LocationId> targets, bool accepting, const Action& act,
                       Guard g, const ClockId& reset) {
        auto [to, fresh] = b.intern(std::move(targets), accepting);
        if (fresh) work.push_back(to);
        else ++st.shared_nodes;
        b.automaton().add_transition(from, to, act, std::move(g), {reset});
    };
    while (!work.empty()) {
        LocationId n = work.front();
        work.pop_front();
        const auto members = b.members(n);
        const bool merged = members.size() > 1;
        for (auto& [act, es] : group_by_action(a, out, members)) {
            std::vector<TransitionId> live;
            for (auto e : es)
                if (keep(effective_guard(e, merged))) live.push_back(e);
            if (live.empty()) continue;
            const ClockId reset = common_reset(a, live);
            if (live.size() == 1) {
                const auto& tr = a.transitions[live.front()];
                connect(n, {tr.target}, a.locations[tr.target].accepting, act, *effective[live.front()], reset);
                continue;
            }
            ++st.merged_groups;
            std::vector<LocationId> targets;
            std::vector<Guard> acc, nacc;
            for (auto e : live) {
                const auto& tr = a.transitions[e];
                targets.push_back(tr.target);
                (a.locations[tr.target].accepting ? acc : nacc).push_back(*effective[e]);
            }
            Guard g_acc = Guard::any(acc);
            if (!acc.empty()) connect(n, targets, true, act, g_acc, reset);
            if (!nacc.empty()) {
                Guard g = Guard::any(nacc);
                if (acc.empty()) {
                    connect(n, targets, false, act, std::move(g), reset);
                } else if (!opts.prune_unsatisfiable || difference_satisfiable(g, g_acc, opts.limits)) {
                    connect(n, targets, false, act, g && !g_acc, reset);
                } else {
                    ++st.pruned_transitions;
                }
            }
        }
    }
    return b.finish();
}

UnfoldedTree determinize_standard(const UnfoldedTree& t, const DeterminizeOptions& opts, DeterminizeStats* stats)
{
    require_input(t);
    DeterminizeStats local;
    DeterminizeStats& st = stats ? *stats : local;
    const auto& a = t.automaton;
    auto out = a.outgoing();

    Builder b(t);
    auto accepting = [&](const std::vector<LocationId>& s) {
        return std::any_of(s.begin(), s.end(), [&](LocationId m) { return a.locations[m].accepting; });
    };
    std::deque<LocationId> work{b.intern({a.initial}, a.locations[a.initial].accepting).first};
    while (!work.empty()) {
        LocationId n = work.front();
        work.pop_front();
        for (auto& [act, es] : group_by_action(a, out, b.members(n))) {
            const ClockId reset = common_reset(a, es);
            if (es.size() > 1) ++st.merged_groups;
            // Include/exclude search over the siblings, abandoning unsatisfiable prefixes.
            std::vector<Guard> parts;
            std::vector<LocationId> chosen;
            auto search = [&](auto&& self, std::size_t i) -> void {
                if (i == es.size()) {
                    if (chosen.empty()) return;
                    auto [to, fresh] = b.intern(chosen, accepting(chosen));
                    if (fresh) work.push_back(to);
                    else ++st.shared_nodes;
                    b.automaton().add_transition(n, to, act, simplify(Guard::all(parts)), {reset});
                    return;
                }
                const auto& tr = a.transitions[es[i]];
                for (bool take : {true, false}) {
                    Guard part = take ? tr.guard : !tr.guard;
                    parts.push_back(part);
                    if (is_satisfiable(Guard::all(parts), opts.limits)) {
                        if (take) chosen.push_back(tr.target);
                        self(self, i + 1);
                        if (take) chosen.pop_back();
                    } else {
                        ++st.pruned_transitions;
                    }
                    parts.pop_back();
                }
            };
            search(search, 0);
        }
    }
    return b.finish();
}

bool check_deterministic(const UnfoldedTree& t, const SolverLimits& limits)
{
    const auto& a = t.automaton;
    auto out = a.outgoing();
    for (LocationId n = 0; n < a.locations.size(); ++n) {
        const auto& es = out[n];
        for (std::size_t i = 0; i < es.size(); ++i) {
            const auto& ti = a.transitions[es[i]];
            if (ti.action.is_silent()) return false;
            for (std::size_t j = i + 1; j < es.size(); ++j) {
                const auto& tj = a.transitions[es[j]];
                if (ti.action == tj.action && is_satisfiable(ti.guard && tj.guard, limits)) return false;
            }
        }
    }
    return true;
}

}  // namespace tadet
