#include "tadet/equivalence.hpp"

#include "tadet/errors.hpp"

#include <boost/integer/common_factor_rt.hpp>

#include <algorithm>
#include <functional>
#include <tuple>

namespace tadet {

ClockId timestamp(int i) { return ClockId("t" + std::to_string(i)); }

ClockId silent_timestamp(int i, int j) { return ClockId("t" + std::to_string(i) + "_" + std::to_string(j)); }

TimedTrace Counterexample::trace() const
{
    TimedTrace out;
    for (std::size_t i = 0; i < word.size(); ++i) out.push_back({timestamps[i], word[i]});
    return out;
}

namespace {

void require_acyclic(const UnfoldedTree& t)
{
    if (t.automaton.shape == Shape::general)
        throw StructuralError("language comparison needs a tree- or DAG-shaped automaton");
    if (!has_trivial_invariants(t.automaton))
        throw UnsupportedError("location invariants other than true are not supported");
}

// Number of transitions on the longest path from the root.
int longest_path(const TimedAutomaton& a)
{
    auto out = a.outgoing();
    std::vector<int> memo(a.locations.size(), -1);
    std::function<int(LocationId)> len = [&](LocationId n) {
        if (memo[n] >= 0) return memo[n];
        int best = 0;
        for (auto e : out[n]) best = std::max(best, 1 + len(a.transitions[e].target));
        return memo[n] = best;
    };
    return len(a.initial);
}

// Position of the walk along one path. Step 0 is the origin; clocks never
// reset on the path were reset there.
struct PathState {
    LocationId node = 0;
    int step = 0;
    int observed = 0;
    int silent = -1;  // silent steps since the last observable one
    std::map<ClockId, int> reset_at;
    std::vector<int> observable_steps;
    std::vector<TransitionId> path;
    Word word;

    int reset_step(const ClockId& c) const
    {
        auto it = reset_at.find(c);
        return it == reset_at.end() ? 0 : it->second;
    }

    PathState after(const Transition& tr, TransitionId id) const
    {
        PathState next = *this;
        next.path.push_back(id);
        next.node = tr.target;
        next.step = step + 1;
        if (tr.action.is_silent()) {
            next.silent = silent + 1;
        } else {
            next.observed = observed + 1;
            next.silent = -1;
            next.observable_steps.push_back(next.step);
            next.word.push_back(tr.action.label());
        }
        for (const auto& c : tr.resets) next.reset_at[c] = next.step;
        return next;
    }
};

// Places a guard atom, evaluated at step `now`, on the timestamp system:
// clock c equals t_now - t_reset(c).
AtomPlacement placement(const PathState& s, int now)
{
    return [&s, now](const AtomicConstraint& a) -> std::pair<Eigen::Index, Eigen::Index> {
        if (!a.right) return {now, s.reset_step(a.left)};
        return {s.reset_step(*a.right), s.reset_step(a.left)};
    };
}

IntegerSystem project_observable(const IntegerSystem& d, const PathState& s)
{
    std::vector<Eigen::Index> keep{0};
    for (int i : s.observable_steps) keep.push_back(i);
    return d.project(keep);
}

void add_zone(std::vector<IntegerSystem>& zones, IntegerSystem z)
{
    for (const auto& other : zones)
        if (other.contains(z)) return;
    zones.push_back(std::move(z));
}

// Depth-first walk over every path, carrying the difference systems of the
// disjuncts taken so far. The visitor may tighten the system; it returns
// true to stop descending.
template <typename Visit>
void walk_zones(const UnfoldedTree& t, const IntegerSystem& origin, const SolverLimits& limits,
                const std::function<bool(const PathState&, const Transition&)>& follow, Visit&& visit)
{
    const auto& a = t.automaton;
    auto out = a.outgoing();
    BranchBudget budget(limits.max_branches);
    PathState start;
    start.node = a.initial;
    std::function<void(const PathState&, IntegerSystem)> go = [&](const PathState& s, IntegerSystem d) {
        if (visit(s, d) || d.empty()) return;
        for (auto e : out[s.node]) {
            const auto& tr = a.transitions[e];
            if (!follow(s, tr)) continue;
            IntegerSystem ordered = d;
            if (!ordered.constrain(s.step, s.step + 1, IntegerSystem::BoundType::le(0))) continue;
            PathState next = s.after(tr, e);
            for (const auto& leaf : conjoin(ordered, tr.guard, placement(s, s.step + 1), budget)) go(next, leaf);
        }
    };
    go(start, origin);
}

}  // namespace

std::map<Word, Guard> path_constraints(const UnfoldedTree& t)
{
    require_acyclic(t);
    const auto& a = t.automaton;
    auto out = a.outgoing();
    std::map<Word, std::vector<Guard>> paths;
    // names[s] is the timestamp variable of step s; step 0 is the origin.
    std::vector<ClockId> names{timestamp(0)};
    std::vector<Guard> parts;
    // Value of clock c at step `now` as the difference t_now - t_reset.
    auto difference = [&](int u, int v, Relation rel, std::int64_t n) -> Guard {
        if (u == v) return holds(rel, 0, n) ? Guard::top() : Guard::bottom();
        if (v == 0) return atom(names[u], rel, n);
        if (u == 0) return atom(names[v], mirror(rel), -n);
        return atom(names[u], names[v], rel, n);
    };
    std::function<void(const PathState&)> go = [&](const PathState& s) {
        if (a.locations[s.node].accepting) paths[s.word].push_back(Guard::all(parts));
        for (auto e : out[s.node]) {
            const auto& tr = a.transitions[e];
            const int now = s.step + 1;
            names.push_back(tr.action.is_silent() ? silent_timestamp(s.observed, s.silent + 1)
                                                  : timestamp(s.observed + 1));
            parts.push_back(difference(now, s.step, Relation::ge, 0));
            parts.push_back(map_atoms(tr.guard, [&](const AtomicConstraint& c) {
                if (!c.right) return difference(now, s.reset_step(c.left), c.rel, c.bound);
                return difference(s.reset_step(*c.right), s.reset_step(c.left), c.rel, c.bound);
            }));
            go(s.after(tr, e));
            parts.pop_back();
            parts.pop_back();
            names.pop_back();
        }
    };
    PathState start;
    start.node = a.initial;
    go(start);
    std::map<Word, Guard> result;
    for (auto& [w, gs] : paths) result.emplace(w, Guard::any(std::move(gs)));
    return result;
}

Language path_zones(const UnfoldedTree& t, const SolverLimits& limits)
{
    require_acyclic(t);
    const auto& a = t.automaton;
    Language lang;
    IntegerSystem origin(longest_path(a) + 1);
    walk_zones(
        t, origin, limits, [](const PathState&, const Transition&) { return true; },
        [&](const PathState& s, IntegerSystem& d) {
            if (a.locations[s.node].accepting) add_zone(lang[s.word], project_observable(d, s));
            return false;
        });
    return lang;
}

namespace {

// Some point of `inner` outside every zone of `outer`.
std::optional<std::vector<Rational>> uncovered_point(const IntegerSystem& inner, const std::vector<IntegerSystem>& outer,
                                                     BranchBudget& budget)
{
    for (const auto& w : outer)
        if (w.contains(inner)) return std::nullopt;
    std::vector<IntegerSystem> rest{inner};
    for (const auto& w : outer) {
        std::vector<IntegerSystem> next;
        for (const auto& z : rest)
            for (auto& piece : subtract(z, w)) {
                budget.spend();
                next.push_back(std::move(piece));
            }
        rest = std::move(next);
        if (rest.empty()) return std::nullopt;
    }
    auto point = pick_point(rest.front().cast<Rational>());
    return std::vector<Rational>(point.begin() + 1, point.end());
}

}  // namespace

Verdict language_equal(const UnfoldedTree& a, const UnfoldedTree& b, int k, const SolverLimits& limits)
{
    auto la = path_zones(a, limits);
    auto lb = path_zones(b, limits);
    std::set<Word> words;
    for (const auto& [w, _] : la)
        if (static_cast<int>(w.size()) <= k) words.insert(w);
    for (const auto& [w, _] : lb)
        if (static_cast<int>(w.size()) <= k) words.insert(w);
    BranchBudget budget(limits.max_branches);
    static const std::vector<IntegerSystem> none;
    auto zones = [](const Language& l, const Word& w) -> const std::vector<IntegerSystem>& {
        auto it = l.find(w);
        return it == l.end() ? none : it->second;
    };
    for (const auto& w : words) {
        const auto& za = zones(la, w);
        const auto& zb = zones(lb, w);
        for (auto [from, to, dir] : {std::tuple{&za, &zb, Direction::left_only}, std::tuple{&zb, &za, Direction::right_only}})
            for (const auto& z : *from)
                if (auto p = uncovered_point(z, *to, budget)) return {false, Counterexample{w, *p, dir}};
    }
    return {true, std::nullopt};
}

std::optional<Run> find_run(const UnfoldedTree& t, const TimedTrace& trace, const SolverLimits& limits)
{
    require_acyclic(t);
    const auto& a = t.automaton;
    // Work in units of 1/scale so that every event time is an integer.
    std::int64_t scale = 1;
    for (const auto& ev : trace) scale = boost::integer::lcm(scale, ev.time.denominator());
    UnfoldedTree scaled = t;
    for (auto& tr : scaled.automaton.transitions)
        tr.guard = map_atoms(tr.guard, [&](AtomicConstraint c) -> Guard {
            c.bound *= scale;
            return c;
        });
    const int events = static_cast<int>(trace.size());
    std::optional<Run> found;
    auto follow = [&](const PathState& s, const Transition& tr) {
        if (found) return false;
        if (tr.action.is_silent()) return s.observed < events;
        return s.observed < events && tr.action.label() == trace[s.observed].label;
    };
    auto visit = [&](const PathState& s, IntegerSystem& d) {
        if (found) return true;
        if (s.observed > 0 && s.silent < 0) {
            // pin the observable step just taken to its event time
            const auto v = (trace[s.observed - 1].time * scale).numerator();
            d.constrain(s.step, 0, IntegerSystem::BoundType::le(v));
            d.constrain(0, s.step, IntegerSystem::BoundType::le(-v));
        }
        if (d.empty() || s.observed < events || s.silent >= 0 || !a.locations[s.node].accepting) return d.empty();
        auto point = pick_point(d.cast<Rational>());
        Run run;
        for (std::size_t i = 0; i < s.path.size(); ++i)
            run.push_back({(point[i + 1] - point[i]) / scale, s.path[i]});
        found = std::move(run);
        return true;
    };
    if (events == 0) {
        if (a.locations[a.initial].accepting) return Run{};
        return std::nullopt;
    }
    walk_zones(scaled, IntegerSystem(longest_path(a) + 1), limits, follow, visit);
    return found;
}

std::int64_t max_constant(const TimedAutomaton& t)
{
    std::int64_t c = 0;
    for (const auto& tr : t.transitions)
        map_atoms(tr.guard, [&](const AtomicConstraint& a) -> Guard {
            c = std::max(c, a.bound < 0 ? -a.bound : a.bound);
            return a;
        });
    return c;
}

namespace {

// Most silent steps between two observable ones on any path.
int most_silent_steps(const TimedAutomaton& a)
{
    auto out = a.outgoing();
    std::vector<int> memo(a.locations.size(), -1);
    // below[n]: most silent steps on one path leaving n
    std::function<int(LocationId)> below = [&](LocationId n) {
        if (memo[n] >= 0) return memo[n];
        int b = 0;
        for (auto e : out[n])
            b = std::max(b, (a.transitions[e].action.is_silent() ? 1 : 0) + below(a.transitions[e].target));
        return memo[n] = b;
    };
    return below(a.initial);
}

}  // namespace

GridOptions grid_for(const TimedAutomaton& model)
{
    GridOptions g;
    g.denominator = static_cast<int>(model.clocks.size()) + 1;
    g.max_constant = max_constant(model);
    return g;
}

GridOptions common_grid(const UnfoldedTree& a, const UnfoldedTree& b)
{
    GridOptions g;
    g.denominator = std::max(a.depth(), b.depth()) + 1;
    g.max_constant = std::max(max_constant(a.automaton), max_constant(b.automaton));
    return g;
}

namespace {

// Guard with clocks replaced by indices and constants scaled to grid units.
struct GridGuard {
    Guard::Kind kind = Guard::Kind::top;
    int left = -1;
    int right = -1;
    Relation rel = Relation::le;
    std::int64_t bound = 0;
    std::vector<GridGuard> children;
};

GridGuard compile(const Guard& g, const std::map<ClockId, int>& index, std::int64_t unit)
{
    GridGuard out;
    out.kind = g.kind();
    if (g.kind() == Guard::Kind::atom) {
        const auto& a = g.atom();
        out.left = index.at(a.left);
        out.right = a.right ? index.at(*a.right) : -1;
        out.rel = a.rel;
        out.bound = a.bound * unit;
    }
    for (const auto& c : g.children()) out.children.push_back(compile(c, index, unit));
    return out;
}

// Clocks are stored as reset times; the value of clock c at time `at` is at - reset[c].
bool holds_at(const GridGuard& g, std::int64_t at, const std::vector<std::int64_t>& reset)
{
    switch (g.kind) {
    case Guard::Kind::top: return true;
    case Guard::Kind::bottom: return false;
    case Guard::Kind::atom: {
        auto u = static_cast<std::size_t>(g.left);
        std::int64_t lhs = g.right < 0 ? at - reset[u] : reset[static_cast<std::size_t>(g.right)] - reset[u];
        return holds(g.rel, Rational(lhs), Rational(g.bound));
    }
    case Guard::Kind::all:
        for (const auto& c : g.children)
            if (!holds_at(c, at, reset)) return false;
        return true;
    case Guard::Kind::any:
        for (const auto& c : g.children)
            if (holds_at(c, at, reset)) return true;
        return false;
    }
    return false;
}

void collect_clocks(const GridGuard& g, std::vector<char>& used)
{
    if (g.kind == Guard::Kind::atom) {
        used[static_cast<std::size_t>(g.left)] = 1;
        if (g.right >= 0) used[static_cast<std::size_t>(g.right)] = 1;
    }
    for (const auto& c : g.children) collect_clocks(c, used);
}

}  // namespace

std::set<TimedTrace> sample_traces(const UnfoldedTree& t, const GridOptions& opts)
{
    require_acyclic(t);
    const auto& a = t.automaton;
    const std::int64_t den = opts.denominator > 0 ? opts.denominator : t.depth() + 1;
    const std::int64_t horizon = (opts.max_constant >= 0 ? opts.max_constant : max_constant(a)) + 1;
    // With observable times fixed on the grid, m silent timestamps of one
    // path still have a solution on a grid m + 1 times finer. All times below
    // are integers in units of that finer grid.
    const std::int64_t ratio = most_silent_steps(a) + 1;
    const std::int64_t unit = den * ratio;
    const std::int64_t window = horizon * unit;

    std::map<ClockId, int> index;
    for (const auto& c : a.clocks) index.emplace(c, static_cast<int>(index.size()));
    std::vector<GridGuard> guards;
    for (const auto& tr : a.transitions) guards.push_back(compile(tr.guard, index, unit));
    auto out = a.outgoing();

    // live[n]: clocks read by some guard at or below n
    std::vector<std::vector<char>> live(a.locations.size());
    std::function<const std::vector<char>&(LocationId)> live_at = [&](LocationId n) -> const std::vector<char>& {
        if (!live[n].empty() || a.clocks.empty()) return live[n];
        std::vector<char> used(a.clocks.size(), 0);
        for (auto e : out[n]) {
            collect_clocks(guards[e], used);
            const auto& below = live_at(a.transitions[e].target);
            for (std::size_t i = 0; i < below.size(); ++i) used[i] |= below[i];
        }
        return live[n] = std::move(used);
    };

    auto live_key = [&](LocationId n, const std::vector<std::int64_t>& reset) {
        std::vector<std::int64_t> key = reset;
        const auto& used = live_at(n);
        for (std::size_t i = 0; i < key.size(); ++i)
            if (!used[i]) key[i] = -1;
        return key;
    };

    // Suffixes of accepted traces after an observable event at time `at`,
    // which depend only on the node, that time and the live reset times.
    using Key = std::tuple<LocationId, std::int64_t, std::vector<std::int64_t>>;
    std::map<Key, std::set<TimedTrace>> memo;
    constexpr std::size_t kCachedTraces = 1'000'000;
    std::size_t cached = 0;
    std::size_t states = 0;
    std::function<const std::set<TimedTrace>&(LocationId, std::int64_t, const std::vector<std::int64_t>&)> suffixes =
        [&](LocationId root, std::int64_t anchor, const std::vector<std::int64_t>& root_reset) -> const std::set<TimedTrace>& {
        Key key{root, anchor, live_key(root, root_reset)};
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        std::set<TimedTrace> result;
        // Between two observable events, reaching a node again with the same
        // live reset times but later adds nothing: every continuation of the
        // later visit is one of the earlier visit.
        std::map<std::pair<LocationId, std::vector<std::int64_t>>, std::int64_t> seen;
        std::function<void(LocationId, std::int64_t, const std::vector<std::int64_t>&)> go =
            [&](LocationId n, std::int64_t now, const std::vector<std::int64_t>& reset) {
                if (++states > opts.max_states) throw ResourceError("grid sampling exceeds the configured state limit");
                auto [it, fresh] = seen.try_emplace({n, live_key(n, reset)}, now);
                if (!fresh) {
                    if (it->second <= now) return;
                    it->second = now;
                }
                for (auto e : out[n]) {
                    const auto& tr = a.transitions[e];
                    const bool silent = tr.action.is_silent();
                    const std::int64_t step = silent ? 1 : ratio;
                    const std::int64_t first = (now + step - 1) / step * step;
                    for (std::int64_t at = first; at <= anchor + window; at += step) {
                        if (!holds_at(guards[e], at, reset)) continue;
                        std::vector<std::int64_t> next = reset;
                        for (const auto& c : tr.resets) next[static_cast<std::size_t>(index.at(c))] = at;
                        if (silent) {
                            go(tr.target, at, next);
                            continue;
                        }
                        TimedEvent event{Rational(at, unit), tr.action.label()};
                        if (a.locations[tr.target].accepting) result.insert(TimedTrace{event});
                        for (const auto& rest : suffixes(tr.target, at, next)) {
                            TimedTrace trace{event};
                            trace.insert(trace.end(), rest.begin(), rest.end());
                            result.insert(std::move(trace));
                        }
                    }
                }
            };
        go(root, anchor, root_reset);
        // Dropping cached suffixes only costs recomputation; no reference into
        // the cache is held across this point.
        if (cached > kCachedTraces) {
            memo.clear();
            cached = 0;
        }
        cached += result.size();
        return memo.emplace(std::move(key), std::move(result)).first->second;
    };

    std::set<TimedTrace> traces = suffixes(a.initial, 0, std::vector<std::int64_t>(a.clocks.size(), 0));
    if (a.locations[a.initial].accepting) traces.insert(TimedTrace{});
    return traces;
}

}  // namespace tadet
