#include "corpus.hpp"

#include "tadet/determinize.hpp"
#include "tadet/equivalence.hpp"
#include "tadet/errors.hpp"
#include "tadet/semantics.hpp"
#include "tadet/silent_removal.hpp"
#include "tadet/solver.hpp"
#include "tadet/unfold.hpp"

#include <catch_amalgamated.hpp>

using namespace tadet;

namespace {

const ClockId x0 = ClockId::level(0), x1 = ClockId::level(1), x2 = ClockId::level(2);

UnfoldedTree staged(const TimedAutomaton& a, int k) { return remove_all_silent(rename_clocks(unfold(a, k))); }

Guard conj(std::initializer_list<Guard> gs) { return Guard::all(std::vector<Guard>(gs)); }

std::vector<const Transition*> edges(const UnfoldedTree& t, const std::string& label)
{
    std::vector<const Transition*> out;
    for (const auto& tr : t.automaton.transitions)
        if (tr.action.to_string() == label) out.push_back(&tr);
    return out;
}

}  // namespace

TEST_CASE("rebase moves unary atoms onto the reset clock")
{
    CHECK(rebase(atom(x1, Relation::lt, 2), x2) == Guard(atom(x1, x2, Relation::lt, 2)));
    auto diag = Guard(atom(x1, x0, Relation::ge, 1));
    CHECK(rebase(diag, x2) == diag);
    auto g = atom(x1, Relation::eq, 2) || conj({atom(x1, Relation::gt, 0), atom(x1, Relation::lt, 3)});
    auto r = rebase(g, x2);
    // at the moment x2 is reset the rebased guard reads the same
    for (int a = 0; a <= 16; ++a) {
        Rational v(a, 4);
        auto at_reset = [&](const ClockId& c) { return c == x2 ? Rational(0) : v; };
        CHECK(evaluate(r, at_reset) == evaluate(g, at_reset));
        // later, the difference is invariant under delay
        auto later = [&](const ClockId& c) { return c == x2 ? Rational(3, 2) : v + Rational(3, 2); };
        CHECK(evaluate(r, later) == evaluate(g, at_reset));
    }
    CHECK(rebase(Guard::top(), x2).is_top());
}

TEST_CASE("coffee machine merges the three beep branches")
{
    auto s = staged(corpus::coffee_machine(), 3);
    REQUIRE_FALSE(check_deterministic(s));
    auto w = find_model(edges(s, "beep")[1]->guard && edges(s, "beep")[2]->guard);
    REQUIRE(w);
    CHECK(w->at(x1) > 0);
    CHECK(w->at(x1) < 2);

    DeterminizeStats stats;
    auto d = determinize_guard_oriented(s, {}, &stats);
    CHECK(stats.merged_groups == 1);
    CHECK(check_deterministic(d));
    CHECK(d.size() == 5);
    auto beep = edges(d, "beep");
    REQUIRE(beep.size() == 1);
    auto expected = conj({atom(x1, Relation::gt, 0), atom(x1, Relation::lt, 3), atom(x1, Relation::lt, 2)}) ||
                    atom(x1, Relation::eq, 2) || conj({atom(x1, Relation::gt, 0), atom(x1, Relation::lt, 3)});
    CHECK(equivalent(beep[0]->guard, expected));

    // the branch choice survives as a diagonal on the grandchildren
    auto refund = edges(d, "refund");
    REQUIRE(refund.size() == 1);
    CHECK(equivalent(refund[0]->guard, conj({atom(x1, Relation::lt, 4), atom(x1, x2, Relation::eq, 2)})));
    auto coffee = edges(d, "coffee");
    REQUIRE(coffee.size() == 1);
    CHECK(equivalent(coffee[0]->guard, conj({atom(x1, Relation::gt, 2), atom(x1, Relation::lt, 3),
                                             atom(x2, Relation::ge, 1), atom(x1, x2, Relation::gt, 0),
                                             atom(x1, x2, Relation::lt, 2)})));
    CHECK(language_equal(s, d, 3).equal);
}

TEST_CASE("determinization is the identity on deterministic trees")
{
    TimedAutomaton a;
    ClockId x("x");
    a.clocks = {x};
    auto p = a.add_location("p");
    auto q = a.add_location("q", true);
    auto r = a.add_location("r", true);
    a.add_transition(p, q, Action::observable("a"), atom(x, Relation::lt, 1), {x});
    a.add_transition(p, r, Action::observable("b"), atom(x, Relation::gt, 1));
    a.add_transition(q, p, Action::observable("a"), atom(x, Relation::ge, 2));
    auto t = rename_clocks(unfold(a, 3));
    for (auto* f : {&determinize_guard_oriented, &determinize_standard}) {
        auto d = (*f)(t, {}, nullptr);
        CHECK(d.size() == t.size());
        CHECK(d.automaton.transitions.size() == t.automaton.transitions.size());
        CHECK(check_deterministic(d));
    }
}

TEST_CASE("standard determinization of a single transition")
{
    TimedAutomaton a;
    ClockId x("x");
    a.clocks = {x};
    auto p = a.add_location("p");
    auto q = a.add_location("q", true);
    a.add_transition(p, q, Action::observable("a"), atom(x, Relation::le, 2));
    auto t = rename_clocks(unfold(a, 1));
    auto d = determinize_standard(t);
    REQUIRE(d.automaton.transitions.size() == 1);
    CHECK(equivalent(d.automaton.transitions[0].guard, atom(x0, Relation::le, 2)));
    CHECK(d.automaton.locations[d.automaton.transitions[0].target].accepting);
}

TEST_CASE("standard determinization of the coffee machine")
{
    auto s = staged(corpus::coffee_machine(), 3);
    auto d = determinize_standard(s);
    CHECK(check_deterministic(d));
    CHECK(language_equal(s, d, 3).equal);
    // one beep edge per satisfiable enabled/disabled combination
    auto beep = edges(d, "beep");
    CHECK(beep.size() >= 3);
    for (std::size_t i = 0; i < beep.size(); ++i)
        for (std::size_t j = i + 1; j < beep.size(); ++j) CHECK_FALSE(is_satisfiable(beep[i]->guard && beep[j]->guard));
}

TEST_CASE("determinization rejects unprepared input")
{
    auto u = unfold(corpus::coffee_machine(), 3);
    CHECK_THROWS_AS(determinize_guard_oriented(u), PreconditionError);
    CHECK_THROWS_AS(determinize_guard_oriented(rename_clocks(u)), StructuralError);
    CHECK_THROWS_AS(determinize_standard(rename_clocks(u)), StructuralError);
    UnfoldedTree general;
    general.automaton = corpus::alpha_chain();
    general.nodes.resize(general.automaton.locations.size());
    general.renamed = true;
    CHECK_THROWS_AS(determinize_guard_oriented(general), StructuralError);
}

TEST_CASE("location counts of the bundled models")
{
    struct Row {
        TimedAutomaton (*model)();
        int k;
        std::size_t unfolded, guard_oriented;
    };
    // rows whose counts are pinned; the looped model is checked by the acceptance binary
    Row rows[] = {
        {[] { return corpus::silent_return(); }, 2, 8, 7},
        {[] { return corpus::silent_return(); }, 5, 78, 63},
        {[] { return corpus::alpha_chain(); }, 2, 5, 4},
        {[] { return corpus::alpha_chain(); }, 5, 11, 8},
        {[] { return corpus::alpha_chain(); }, 10, 21, 16},
        {[] { return corpus::alpha_chain(); }, 25, 51, 38},
        {[] { return corpus::alpha_chain_silent(); }, 2, 5, 4},
        {[] { return corpus::alpha_chain_silent(); }, 5, 24, 8},
    };
    for (const auto& row : rows) {
        auto u = rename_clocks(unfold(row.model(), row.k));
        CHECK(u.size() == row.unfolded);
        auto d = determinize_guard_oriented(remove_all_silent(u));
        CHECK(d.size() == row.guard_oriented);
    }
}

TEST_CASE("pruning drops unsatisfiable merged branches without changing the language")
{
    for (auto model : {corpus::silent_return(), corpus::silent_return_loop(), corpus::alpha_chain_silent()}) {
        auto s = staged(model, 4);
        DeterminizeOptions off;
        off.prune_unsatisfiable = false;
        auto pruned = determinize_guard_oriented(s);
        auto kept = determinize_guard_oriented(s, off);
        CHECK(pruned.size() <= kept.size());
        CHECK(language_equal(pruned, kept, 4).equal);
    }
}

TEST_CASE("guard-oriented output is never larger than the subset construction")
{
    std::mt19937 rng(11);
    for (int i = 0; i < 30; ++i) {
        auto a = corpus::random_enta(rng);
        auto s = staged(a, 3);
        auto g = determinize_guard_oriented(s);
        auto d = determinize_standard(s);
        CHECK(g.size() <= d.size());
        CHECK(check_deterministic(g));
        CHECK(check_deterministic(d));
    }
}

TEST_CASE("on-the-fly pipeline agrees with the staged pipeline")
{
    std::vector<std::pair<TimedAutomaton, int>> cases = {
        {corpus::coffee_machine(), 3},     {corpus::sync_example(), 2}, {corpus::silent_return(), 4},
        {corpus::silent_return_loop(), 4}, {corpus::alpha_chain(), 5},  {corpus::alpha_chain_silent(), 5},
    };
    for (const auto& [a, k] : cases) {
        auto staged_out = determinize_guard_oriented(staged(a, k));
        auto otf = pipeline_on_the_fly(a, k);
        CHECK(check_deterministic(otf));
        CHECK(otf.size() <= staged_out.size());
        CHECK(language_equal(staged_out, otf, k).equal);
    }
    CHECK(pipeline_on_the_fly(corpus::alpha_chain(), 10).size() == 16);
    CHECK(pipeline_on_the_fly(corpus::alpha_chain_silent(), 10).size() == 16);
    CHECK_THROWS_AS(pipeline_on_the_fly(corpus::silent_return(), 0), UsageError);
}

TEST_CASE("on-the-fly output only reads its own clocks")
{
    // two silent steps at the root, the second without a reset: later guards
    // still read the second step's clock until its own rewrite replaces it
    TimedAutomaton a;
    ClockId x("x");
    a.clocks = {x};
    auto l0 = a.add_location("l0");
    auto l1 = a.add_location("l1");
    auto l2 = a.add_location("l2", true);
    a.add_transition(l0, l1, Action::observable("b"), {}, {x});
    a.add_transition(l2, l2, Action::observable("b"), atom(x, Relation::le, 2));
    a.add_transition(l1, l2, Action::silent(), atom(x, Relation::ge, 0));
    a.add_transition(l0, l1, Action::silent(), atom(x, Relation::le, 1), {x});
    a.add_transition(l1, l2, Action::observable("a"), atom(x, Relation::eq, 3));
    auto otf = pipeline_on_the_fly(a, 2);
    std::set<ClockId> declared(otf.automaton.clocks.begin(), otf.automaton.clocks.end());
    for (const auto& tr : otf.automaton.transitions)
        for (const auto& c : clocks_of(tr.guard)) CHECK(declared.count(c) == 1);
    CHECK(language_equal(determinize_guard_oriented(staged(a, 2)), otf, 2).equal);
    auto grid = grid_for(a);
    CHECK(sample_traces(otf, grid) == sample_traces(staged(a, 2), grid));
}

TEST_CASE("on-the-fly rejects silent loops")
{
    auto a = corpus::silent_return();
    ClockId x("x");
    a.add_transition(0, 0, Action::silent(), atom(x, Relation::gt, 2));
    CHECK_THROWS_AS(pipeline_on_the_fly(a, 2), PreconditionError);
}

TEST_CASE("every accepted input run has a replayable output run")
{
    for (auto model : {corpus::coffee_machine(), corpus::silent_return_loop(), corpus::sync_example()}) {
        auto u = rename_clocks(unfold(model, 3));
        auto d = determinize_guard_oriented(remove_all_silent(u));
        auto grid = common_grid(u, d);
        for (const auto& trace : sample_traces(u, grid)) {
            auto r = find_run(d, trace);
            REQUIRE(r);
            CHECK(check_run(d.automaton, *r));
            CHECK(is_accepting_run(d.automaton, *r));
            CHECK(trace_of(d.automaton, *r) == trace);
        }
    }
}
