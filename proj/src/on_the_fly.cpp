#include "tadet/determinize.hpp"

#include "tadet/errors.hpp"
#include "tadet/semantics.hpp"
#include "tadet/silent_removal.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <memory>
#include <sstream>

namespace tadet {

namespace {

// A future-guard rewrite left behind by a removed silent transition above.
struct Pending {
    FutureRewrite rewrite;
    std::vector<FutureStep> history;
    bool first = true;  // the node is the target of the removed transition
};

// A node of the silent-free tree, described by what determines its subtree.
struct FlatState {
    LocationId origin = 0;
    int level = 0;
    int silent = -1;
    bool accepting = false;
    std::map<ClockId, ClockId> clocks;  // original clock -> renamed clock of its last reset
    std::vector<Pending> pending;
    std::string key;
};

struct FlatEdge {
    Action action;
    Guard guard;
    ClockId reset;
    std::shared_ptr<const FlatState> target;
};

void write_side(std::ostream& os, const BoundSide& b) { os << b.clock.name() << (b.strict ? "<" : "<=") << b.value << ","; }

std::string make_key(const FlatState& s)
{
    std::ostringstream os;
    os << s.origin << "/" << s.level << "/" << s.silent << "/" << s.accepting << "[";
    for (const auto& [c, r] : s.clocks) os << c.name() << ":" << r.name() << ",";
    os << "]";
    for (const auto& p : s.pending) {
        os << "{" << p.rewrite.x_s0.name() << (p.first ? "!" : "") << " L";
        for (const auto& b : p.rewrite.silent.lowers) write_side(os, b);
        os << " U";
        for (const auto& b : p.rewrite.silent.uppers) write_side(os, b);
        if (p.rewrite.silent.exact) {
            os << " E";
            write_side(os, *p.rewrite.silent.exact);
        }
        for (const auto& h : p.history) {
            os << " H" << h.reset.name() << " L";
            for (const auto& b : h.lowers) write_side(os, b);
            os << " U";
            for (const auto& b : h.uppers) write_side(os, b);
        }
        os << "}";
    }
    return os.str();
}

// Unfolding, renaming and silent removal, one node at a time.
class FlatTree {
public:
    FlatTree(const TimedAutomaton& a, int k) : a_(a), k_(k), out_(a.outgoing()) {}

    std::shared_ptr<const FlatState> root() const
    {
        FlatState s;
        s.origin = a_.initial;
        s.accepting = a_.locations[a_.initial].accepting;
        for (const auto& c : a_.clocks) s.clocks[c] = ClockId::level(0);
        return finish(std::move(s));
    }

    // Outgoing edges of a node, bypasses included, in a fixed order.
    const std::vector<FlatEdge>& expand(const std::shared_ptr<const FlatState>& s)
    {
        auto it = cache_.find(s->key);
        if (it != cache_.end()) return it->second;
        std::vector<FlatEdge> edges;
        if (s->level < k_) {
            for (auto e : out_[s->origin]) {
                const auto& tr = a_.transitions[e];
                if (!tr.action.is_silent()) {
                    auto [g, child] = step(*s, tr, ClockId::level(s->level + 1));
                    FlatEdge edge{tr.action, std::move(g), ClockId::level(s->level + 1), std::move(child)};
                    edges.push_back(edge);
                    add_bypasses(edge, edges);
                } else if (s->level == 0) {
                    // no observable predecessor: the target's edges take the silent transition's place
                    lift(*s, tr, edges);
                }
            }
        }
        return cache_.emplace(s->key, std::move(edges)).first->second;
    }

private:
    std::shared_ptr<const FlatState> finish(FlatState s) const
    {
        s.key = make_key(s);
        return std::make_shared<const FlatState>(std::move(s));
    }

    // Renamed and rewritten guard of `tr` taken from s, and the state it leads to.
    std::pair<Guard, std::shared_ptr<const FlatState>> step(const FlatState& s, const Transition& tr,
                                                            const ClockId& reset) const
    {
        Guard g = substitute(tr.guard, [&](const ClockId& c) { return s.clocks.at(c); });
        FlatState next;
        next.origin = tr.target;
        next.level = s.level + (tr.action.is_silent() ? 0 : 1);
        next.silent = tr.action.is_silent() ? s.silent + 1 : -1;
        next.accepting = !tr.action.is_silent() && a_.locations[tr.target].accepting;
        next.clocks = s.clocks;
        for (const auto& c : tr.resets) next.clocks[c] = reset;
        std::vector<Pending> carried;
        for (const auto& p : s.pending) {
            std::optional<FutureStep> own;
            g = p.rewrite.apply(g, p.first, reset, p.history, own);
            Pending q{p.rewrite, p.history, false};
            if (own) q.history.push_back(std::move(*own));
            carried.push_back(std::move(q));
        }
        // A rewrite stays relevant while some clock still reads x_{s,0}, or while
        // a live rewrite above it may still emit x_{s,0} from its history.
        std::vector<bool> live(carried.size(), false);
        for (std::size_t i = 0; i < carried.size(); ++i)
            live[i] = std::any_of(next.clocks.begin(), next.clocks.end(),
                                  [&](const auto& kv) { return kv.second == carried[i].rewrite.x_s0; });
        for (std::size_t i = 0; i < carried.size(); ++i) {
            if (!live[i]) continue;
            for (const auto& h : carried[i].history)
                for (std::size_t j = i + 1; j < carried.size(); ++j)
                    if (carried[j].rewrite.x_s0 == h.reset) live[j] = true;
        }
        for (std::size_t i = 0; i < carried.size(); ++i)
            if (live[i]) next.pending.push_back(std::move(carried[i]));
        return {g, finish(std::move(next))};
    }

    // Removes the silent transition tr leaving `at`, whose observable predecessor resets x_s.
    std::optional<std::pair<SilentContext, std::shared_ptr<const FlatState>>> remove(const FlatState& at,
                                                                                     const Transition& tr,
                                                                                     const ClockId& x_s) const
    {
        const ClockId x_s0 = ClockId::silent_level(at.level, at.silent + 1);
        auto [g, child] = step(at, tr, x_s0);
        SilentContext ctx;
        ctx.x_s = x_s;
        ctx.x_s0 = x_s0;
        ctx.silent_guard = g;
        if (!is_satisfiable(set_lower_bound(ctx))) return std::nullopt;
        FlatState s = *child;
        s.pending.push_back(Pending{FutureRewrite{x_s0, bounds_of(set_lower_bound(ctx))}, {}, true});
        return std::make_pair(ctx, finish(std::move(s)));
    }

    void add_bypasses(const FlatEdge& via, std::vector<FlatEdge>& edges) const
    {
        const auto& c = *via.target;
        if (c.level >= k_) return;
        const auto& out = out_[c.origin];
        // later silent transitions are removed later and end up closer to `via`
        for (auto it = out.rbegin(); it != out.rend(); ++it) {
            const auto& tr = a_.transitions[*it];
            if (!tr.action.is_silent()) continue;
            auto removed = remove(c, tr, via.reset);
            if (!removed) continue;
            FlatEdge bypass{via.action, simplify(via.guard && enabling_guard(removed->first)), via.reset,
                            removed->second};
            edges.push_back(bypass);
            add_bypasses(bypass, edges);
        }
    }

    void lift(const FlatState& s, const Transition& tr, std::vector<FlatEdge>& edges)
    {
        auto removed = remove(s, tr, ClockId::level(0));
        if (!removed) return;
        const auto& inner = expand(removed->second);
        edges.insert(edges.end(), inner.begin(), inner.end());
    }

    const TimedAutomaton& a_;
    int k_;
    std::vector<std::vector<TransitionId>> out_;
    std::map<std::string, std::vector<FlatEdge>> cache_;
};

struct Member {
    std::shared_ptr<const FlatState> state;
    Guard context;  // rebased guard of the merged branch, conjoined onto every child
    std::string key;
};

Member make_member(std::shared_ptr<const FlatState> s, Guard context)
{
    std::string key = s->key + "|" + to_string(context);
    return {std::move(s), std::move(context), std::move(key)};
}

}  // namespace

UnfoldedTree pipeline_on_the_fly(const TimedAutomaton& a, int k, const DeterminizeOptions& opts,
                                 DeterminizeStats* stats)
{
    if (k < 1) throw UsageError("unfolding depth must be at least 1");
    validate(a);
    if (!has_trivial_invariants(a)) throw UnsupportedError("location invariants other than true are not supported");
    if (!check_strong_responsiveness(a)) throw PreconditionError("automaton has a cycle of silent transitions");
    DeterminizeStats local;
    DeterminizeStats& st = stats ? *stats : local;

    FlatTree flat(a, k);
    UnfoldedTree out;
    out.renamed = true;
    out.automaton.depth = k;
    std::vector<ClockId> clocks{ClockId::level(0)};
    std::map<std::pair<std::vector<std::string>, bool>, LocationId> index;
    std::vector<std::vector<Member>> members;
    std::deque<LocationId> work;

    auto intern = [&](std::vector<Member> ms, bool accepting) {
        std::sort(ms.begin(), ms.end(), [](const Member& x, const Member& y) { return x.key < y.key; });
        ms.erase(std::unique(ms.begin(), ms.end(), [](const Member& x, const Member& y) { return x.key == y.key; }),
                 ms.end());
        std::vector<std::string> keys;
        for (const auto& m : ms) keys.push_back(m.key);
        auto key = std::make_pair(keys, accepting);
        if (auto it = index.find(key); it != index.end()) {
            ++st.shared_nodes;
            return it->second;
        }
        std::string name;
        NodeInfo info;
        for (const auto& m : ms) {
            if (!name.empty()) name += "|";
            name += a.locations[m.state->origin].name;
            info.origins.push_back(m.state->origin);
        }
        std::sort(info.origins.begin(), info.origins.end());
        info.origins.erase(std::unique(info.origins.begin(), info.origins.end()), info.origins.end());
        info.level = ms.front().state->level;
        if (ms.size() > 1) info.role = accepting ? NodeRole::merged_accepting : NodeRole::merged_nonaccepting;
        LocationId id = out.automaton.add_location(name + "#" + std::to_string(out.size()), accepting);
        out.nodes.push_back(std::move(info));
        members.push_back(std::move(ms));
        index.emplace(std::move(key), id);
        work.push_back(id);
        return id;
    };
    auto keep = [&](const Guard& g) {
        if (!opts.prune_unsatisfiable || is_satisfiable(g, opts.limits)) return true;
        ++st.pruned_transitions;
        return false;
    };

    auto root = flat.root();
    intern({make_member(root, Guard::top())}, root->accepting);
    while (!work.empty()) {
        LocationId n = work.front();
        work.pop_front();
        struct Candidate {
            Guard guard;
            const FlatEdge* edge;
        };
        std::vector<std::pair<Action, std::vector<Candidate>>> groups;
        for (const auto& m : std::vector<Member>(members[n])) {
            for (const auto& e : flat.expand(m.state)) {
                Guard g = m.context.is_top() ? e.guard : e.guard && m.context;
                if (!keep(g)) continue;
                auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& gr) { return gr.first == e.action; });
                if (it == groups.end()) groups.push_back({e.action, {{std::move(g), &e}}});
                else it->second.push_back({std::move(g), &e});
            }
        }
        for (auto& [act, cands] : groups) {
            const ClockId reset = cands.front().edge->reset;
            if (std::find(clocks.begin(), clocks.end(), reset) == clocks.end()) clocks.push_back(reset);
            if (cands.size() == 1) {
                const auto& c = cands.front();
                auto to = intern({make_member(c.edge->target, Guard::top())}, c.edge->target->accepting);
                out.automaton.add_transition(n, to, act, c.guard, {reset});
                continue;
            }
            ++st.merged_groups;
            std::vector<Member> targets;
            std::vector<Guard> acc, nacc;
            for (const auto& c : cands) {
                if (c.edge->reset != reset) throw StructuralError("same-action siblings reset different clocks");
                targets.push_back(make_member(c.edge->target, rebase(c.guard, reset)));
                (c.edge->target->accepting ? acc : nacc).push_back(c.guard);
            }
            Guard g_acc = Guard::any(acc);
            if (!acc.empty()) out.automaton.add_transition(n, intern(targets, true), act, g_acc, {reset});
            if (nacc.empty()) continue;
            Guard g = Guard::any(nacc);
            if (acc.empty()) {
                out.automaton.add_transition(n, intern(targets, false), act, std::move(g), {reset});
            } else if (!opts.prune_unsatisfiable || difference_satisfiable(g, g_acc, opts.limits)) {
                out.automaton.add_transition(n, intern(targets, false), act, g && !g_acc, {reset});
            } else {
                ++st.pruned_transitions;
            }
        }
    }
    out.automaton.clocks = clocks;
    std::vector<int> indegree(out.size(), 0);
    for (const auto& tr : out.automaton.transitions) indegree[tr.target]++;
    out.automaton.shape =
        std::any_of(indegree.begin(), indegree.end(), [](int d) { return d > 1; }) ? Shape::dag : Shape::tree;
    return out;
}

}  // namespace tadet
