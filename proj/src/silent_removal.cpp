#include "tadet/silent_removal.hpp"

#include "tadet/errors.hpp"
#include "tadet/solver.hpp"

#include <algorithm>
#include <functional>
#include <list>
#include <set>

namespace tadet {

namespace {

AtomicConstraint lower_atom(const ClockId& c, std::int64_t value, bool strict)
{
    return atom(c, strict ? Relation::gt : Relation::ge, value);
}

AtomicConstraint upper_atom(const ClockId& c, std::int64_t value, bool strict)
{
    return atom(c, strict ? Relation::lt : Relation::le, value);
}

// Editable form of a renamed tree: ordered child lists, a global transition
// order with stable iterators, and lazy deletion.
struct MutableTree {
    struct Edge {
        LocationId source;
        LocationId target;
        Action action;
        Guard guard;
        ClockId reset;
        bool alive = true;
    };

    std::vector<Location> locations;
    std::vector<NodeInfo> info;
    std::vector<bool> alive;
    std::vector<std::vector<std::size_t>> children;
    std::vector<std::optional<std::size_t>> parent;
    std::vector<Edge> edges;
    std::list<std::size_t> order;
    std::vector<std::list<std::size_t>::iterator> where;
    LocationId root = 0;
    std::vector<ClockId> clocks;
    int depth = 0;

    explicit MutableTree(const UnfoldedTree& t)
        : locations(t.automaton.locations),
          info(t.nodes),
          alive(t.size(), true),
          children(t.size()),
          parent(t.size()),
          root(t.root()),
          clocks(t.automaton.clocks),
          depth(t.depth())
    {
        if (!t.renamed) throw StructuralError("silent-transition removal needs a renamed tree");
        if (t.automaton.shape != Shape::tree) throw StructuralError("silent-transition removal needs a tree");
        if (!has_trivial_invariants(t.automaton))
            throw UnsupportedError("silent-transition removal does not support location invariants");
        for (const auto& tr : t.automaton.transitions) {
            if (tr.resets.size() != 1) throw StructuralError("renamed transitions reset exactly one clock");
            add_edge({tr.source, tr.target, tr.action, tr.guard, tr.resets.front()}, order.end());
            children[tr.source].push_back(edges.size() - 1);
            parent[tr.target] = edges.size() - 1;
        }
    }

    std::size_t add_edge(Edge e, std::list<std::size_t>::iterator before)
    {
        edges.push_back(std::move(e));
        where.push_back(order.insert(before, edges.size() - 1));
        return edges.size() - 1;
    }

    void kill_edge(std::size_t e)
    {
        edges[e].alive = false;
        order.erase(where[e]);
        auto& siblings = children[edges[e].source];
        siblings.erase(std::find(siblings.begin(), siblings.end(), e));
    }

    void kill_subtree(LocationId n)
    {
        alive[n] = false;
        for (auto e : std::vector<std::size_t>(children[n])) {
            kill_subtree(edges[e].target);
            kill_edge(e);
        }
    }

    std::optional<std::size_t> first_silent_below(LocationId n) const
    {
        for (auto e : children[n])
            if (edges[e].action.is_silent()) return e;
        for (auto e : children[n])
            if (auto found = first_silent_below(edges[e].target)) return found;
        return std::nullopt;
    }

    UnfoldedTree freeze() const
    {
        UnfoldedTree t;
        t.renamed = true;
        t.automaton.clocks = clocks;
        t.automaton.shape = Shape::tree;
        t.automaton.depth = depth;
        std::vector<LocationId> renumber(locations.size());
        for (LocationId n = 0; n < locations.size(); ++n) {
            if (!alive[n]) continue;
            renumber[n] = t.automaton.locations.size();
            t.automaton.locations.push_back(locations[n]);
            t.nodes.push_back(info[n]);
        }
        t.automaton.initial = renumber[root];
        for (auto e : order) {
            const auto& edge = edges[e];
            t.automaton.add_transition(renumber[edge.source], renumber[edge.target], edge.action, edge.guard,
                                       {edge.reset});
        }
        // drop clocks no longer reset by any transition
        std::set<ClockId> used{ClockId::level(0)};
        for (const auto& tr : t.automaton.transitions) used.insert(tr.resets.begin(), tr.resets.end());
        std::erase_if(t.automaton.clocks, [&](const ClockId& c) { return !used.count(c); });
        return t;
    }
};

SilentContext context_of(const MutableTree& m, std::size_t e)
{
    const auto& edge = m.edges[e];
    if (!edge.action.is_silent()) throw StructuralError("transition is not silent");
    SilentContext ctx;
    ctx.silent = e;
    ctx.q_s = edge.source;
    ctx.q_s0 = edge.target;
    ctx.x_s0 = edge.reset;
    ctx.silent_guard = edge.guard;
    ctx.x_s = ClockId::level(0);
    if (auto pe = m.parent[edge.source]) {
        ctx.predecessor = *pe;
        ctx.q_prev = m.edges[*pe].source;
        ctx.x_s = m.edges[*pe].reset;
        if (m.edges[*pe].action.is_silent())
            throw StructuralError("silent transition is not the first one on its path");
    }
    return ctx;
}

void bypass(MutableTree& m, const SilentContext& ctx)
{
    if (!ctx.predecessor) return;
    const auto pe = *ctx.predecessor;
    const auto& pred = m.edges[pe];
    MutableTree::Edge b{*ctx.q_prev, ctx.q_s0, pred.action, simplify(pred.guard && enabling_guard(ctx)), ctx.x_s};
    auto id = m.add_edge(std::move(b), std::next(m.where[pe]));
    auto& siblings = m.children[*ctx.q_prev];
    siblings.insert(std::find(siblings.begin(), siblings.end(), pe) + 1, id);
    m.kill_edge(ctx.silent);
    m.parent[ctx.q_s0] = id;
    m.info[ctx.q_s0].silent_index = -1;
}

void update(MutableTree& m, const SilentContext& ctx)
{
    FutureRewrite rw{ctx.x_s0, bounds_of(set_lower_bound(ctx))};
    std::vector<FutureStep> history;
    std::function<void(LocationId, bool)> walk = [&](LocationId n, bool first) {
        for (auto f : m.children[n]) {
            auto& edge = m.edges[f];
            std::optional<FutureStep> step;
            edge.guard = rw.apply(edge.guard, first, edge.reset, history, step);
            if (step) history.push_back(std::move(*step));
            walk(edge.target, false);
            if (step) history.pop_back();
        }
    };
    walk(ctx.q_s0, true);
    if (ctx.predecessor) return;
    // root case: the children of q_{s,0} take the place of the silent transition
    auto& siblings = m.children[ctx.q_s];
    auto pos = std::find(siblings.begin(), siblings.end(), ctx.silent);
    if (pos == siblings.end()) return;
    auto lifted = m.children[ctx.q_s0];
    for (auto f : lifted) m.edges[f].source = ctx.q_s;
    pos = siblings.insert(pos, lifted.begin(), lifted.end()) + static_cast<long>(lifted.size());
    siblings.erase(pos);
    m.edges[ctx.silent].alive = false;
    m.order.erase(m.where[ctx.silent]);
    m.children[ctx.q_s0].clear();
    m.alive[ctx.q_s0] = false;
}

}  // namespace

SilentBounds bounds_of(const Guard& lowered)
{
    SilentBounds b;
    for (const auto& a : lowered.conjuncts()) {
        if (a.right) throw UnsupportedError("silent guard with a diagonal constraint: " + to_string(a));
        switch (a.rel) {
        case Relation::lt: b.uppers.push_back({a.left, a.bound, true}); break;
        case Relation::le: b.uppers.push_back({a.left, a.bound, false}); break;
        case Relation::gt: b.lowers.push_back({a.left, a.bound, true}); break;
        case Relation::ge: b.lowers.push_back({a.left, a.bound, false}); break;
        case Relation::eq:
            b.lowers.push_back({a.left, a.bound, false});
            b.uppers.push_back({a.left, a.bound, false});
            if (!b.exact) b.exact = BoundSide{a.left, a.bound, false};
            break;
        }
    }
    return b;
}

Guard FutureRewrite::apply(const Guard& g, bool leaves_target, const ClockId& reset,
                           std::span<const FutureStep> history, std::optional<FutureStep>& step) const
{
    std::vector<AtomicConstraint> atoms = g.conjuncts();
    if (leaves_target) atoms.push_back(atom(x_s0, Relation::ge, 0));
    std::vector<Guard> out;
    FutureStep own{reset, {}, {}};
    std::vector<AtomicConstraint> on_clock;
    for (const auto& a : atoms) {
        if (a.right && (a.left == x_s0 || *a.right == x_s0))
            throw UnsupportedError("future guard constrains " + x_s0.name() + " diagonally");
        if (a.left != x_s0) {
            out.emplace_back(a);
            continue;
        }
        on_clock.push_back(a);
        switch (a.rel) {
        case Relation::lt: own.uppers.push_back({reset, a.bound, true}); break;
        case Relation::le: own.uppers.push_back({reset, a.bound, false}); break;
        case Relation::gt: own.lowers.push_back({reset, a.bound, true}); break;
        case Relation::ge: own.lowers.push_back({reset, a.bound, false}); break;
        case Relation::eq:
            own.lowers.push_back({reset, a.bound, false});
            own.uppers.push_back({reset, a.bound, false});
            break;
        }
    }
    if (on_clock.empty()) return leaves_target ? simplify(Guard::all(std::move(out))) : g;

    if (silent.exact) {
        // the silent step fired exactly when x_i reached n_i: substitute x_{s,0} ~ l by x_i ~ n_i + l
        for (const auto& a : on_clock) out.emplace_back(atom(silent.exact->clock, a.rel, silent.exact->value + a.bound));
    } else {
        for (const auto& f : own.lowers)
            for (const auto& l : silent.lowers)
                out.emplace_back(lower_atom(l.clock, l.value + f.value, l.strict || f.strict));
        for (const auto& f : own.uppers)
            for (const auto& u : silent.uppers)
                out.emplace_back(upper_atom(u.clock, u.value + f.value, u.strict || f.strict));
        // synchronization with earlier transitions constraining x_{s,0}
        for (const auto& h : history) {
            for (const auto& lj : own.lowers)
                for (const auto& ui : h.uppers)
                    out.emplace_back(lower_atom(h.reset, lj.value - ui.value, lj.strict || ui.strict));
            for (const auto& uj : own.uppers)
                for (const auto& li : h.lowers)
                    out.emplace_back(upper_atom(h.reset, uj.value - li.value, uj.strict || li.strict));
        }
        // the guard's own bounds on x_{s,0} must be compatible
        for (const auto& l : own.lowers)
            for (const auto& u : own.uppers)
                if (l.value > u.value || (l.value == u.value && (l.strict || u.strict))) return Guard::bottom();
    }
    step = std::move(own);
    return simplify(Guard::all(std::move(out)));
}

std::optional<TransitionId> first_silent(const UnfoldedTree& t)
{
    MutableTree m(t);
    auto e = m.first_silent_below(m.root);
    if (!e) return std::nullopt;
    // edge ids coincide with transition ids before any edit
    return *e;
}

SilentContext make_context(const UnfoldedTree& t, TransitionId silent)
{
    MutableTree m(t);
    return context_of(m, silent);
}

Guard set_lower_bound(const SilentContext& ctx)
{
    return ctx.silent_guard && atom(ctx.x_s, Relation::ge, 0);
}

Guard enabling_guard(const SilentContext& ctx)
{
    auto b = bounds_of(set_lower_bound(ctx));
    std::vector<Guard> out;
    for (const auto& l : b.lowers)
        for (const auto& u : b.uppers) {
            if (l.clock == u.clock) continue;
            const bool strict = l.strict || u.strict;
            const auto n = u.value - l.value;
            if (l.clock == ctx.x_s)
                out.emplace_back(upper_atom(u.clock, n, strict));
            else if (u.clock == ctx.x_s)
                out.emplace_back(lower_atom(l.clock, -n, strict));
            else
                out.emplace_back(atom(u.clock, l.clock, strict ? Relation::lt : Relation::le, n));
        }
    return simplify(Guard::all(std::move(out)));
}

Guard taken_guard(const SilentContext& ctx) { return atom(ctx.x_s0, Relation::ge, 0); }

UnfoldedTree build_bypass(const SilentContext& ctx, const UnfoldedTree& t)
{
    MutableTree m(t);
    bypass(m, ctx);
    return m.freeze();
}

UnfoldedTree update_future_guards(const SilentContext& ctx, const UnfoldedTree& t)
{
    MutableTree m(t);
    update(m, ctx);
    return m.freeze();
}

UnfoldedTree remove_all_silent(const UnfoldedTree& t)
{
    MutableTree m(t);
    while (auto e = m.first_silent_below(m.root)) {
        auto ctx = context_of(m, *e);
        if (!is_satisfiable(set_lower_bound(ctx))) {
            m.kill_subtree(ctx.q_s0);
            m.kill_edge(ctx.silent);
            continue;
        }
        bypass(m, ctx);
        update(m, ctx);
    }
    return m.freeze();
}

}  // namespace tadet
