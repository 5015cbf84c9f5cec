#include "corpus.hpp"

#include "tadet/errors.hpp"
#include "tadet/semantics.hpp"
#include "tadet/unfold.hpp"

#include <catch_amalgamated.hpp>

using namespace tadet;

namespace {

const Transition& edge_by_label(const UnfoldedTree& t, const std::string& label, std::size_t nth = 0)
{
    for (const auto& tr : t.automaton.transitions)
        if (tr.action.to_string() == label && nth-- == 0) return tr;
    throw std::runtime_error("no transition " + label);
}

}  // namespace

TEST_CASE("unfolded sizes of the study automata")
{
    auto count = [](const TimedAutomaton& a, int k) { return unfold(a, k).size(); };
    CHECK(count(corpus::silent_return(), 2) == 8);
    CHECK(count(corpus::silent_return(), 5) == 78);
    CHECK(count(corpus::silent_return(), 9) == 1278);
    CHECK(count(corpus::silent_return_loop(), 2) == 9);
    CHECK(count(corpus::silent_return_loop(), 5) == 177);
    CHECK(count(corpus::silent_return_loop(), 9) == 8361);
    CHECK(count(corpus::alpha_chain(), 2) == 5);
    CHECK(count(corpus::alpha_chain(), 5) == 11);
    CHECK(count(corpus::alpha_chain(), 10) == 21);
    CHECK(count(corpus::alpha_chain(), 25) == 51);
    CHECK(count(corpus::alpha_chain(), 50) == 101);
    CHECK(count(corpus::alpha_chain_silent(), 2) == 5);
    CHECK(count(corpus::alpha_chain_silent(), 5) == 24);
    CHECK(count(corpus::alpha_chain_silent(), 10) == 140);
}

TEST_CASE("closed form for the first study automaton")
{
    for (int k = 2; k <= 10; ++k)
        CHECK(unfold(corpus::silent_return(), k).size() == (std::size_t{1} << (k + 1)) + (std::size_t{1} << (k - 1)) - 2);
}

TEST_CASE("unfolding shape rules")
{
    auto t = unfold(corpus::coffee_machine(), 3);
    CHECK(t.size() == 7);
    CHECK(t.automaton.shape == Shape::tree);
    CHECK_NOTHROW(validate(t.automaton));
    auto out = t.automaton.outgoing();
    for (LocationId n = 0; n < t.size(); ++n) {
        CHECK(t.nodes[n].level <= 3);
        if (t.nodes[n].level == 3) CHECK(out[n].empty());
    }
    for (const auto& tr : t.automaton.transitions)
        if (tr.action.is_silent()) CHECK_FALSE(t.automaton.locations[tr.target].accepting);
}

TEST_CASE("silently entered copies of accepting locations are not accepting")
{
    // at k=2, p1 -beta-> p2 -eps-> p1' where p1 is accepting; at k=1 the silent edge is cut
    CHECK(unfold(corpus::silent_return(), 1).size() == 3);
    auto t = unfold(corpus::silent_return(), 2);
    int silent_targets = 0;
    for (const auto& tr : t.automaton.transitions)
        if (tr.action.is_silent()) {
            ++silent_targets;
            CHECK(t.nodes[tr.target].origins.front() == 0);
            CHECK_FALSE(t.automaton.locations[tr.target].accepting);
        }
    CHECK(silent_targets == 1);
}

TEST_CASE("single observable transition gives two nodes")
{
    TimedAutomaton a;
    auto p = a.add_location("p");
    auto q = a.add_location("q", true);
    a.add_transition(p, q, Action::observable("go"));
    auto t = unfold(a, 1);
    CHECK(t.size() == 2);
    auto r = rename_clocks(t);
    REQUIRE(r.automaton.transitions.size() == 1);
    CHECK(r.automaton.transitions[0].resets == std::vector<ClockId>{ClockId::level(1)});
    CHECK(r.automaton.transitions[0].guard.is_top());
}

TEST_CASE("unfolding preconditions")
{
    CHECK_THROWS_AS(unfold(corpus::coffee_machine(), 0), UsageError);
    TimedAutomaton loop;
    auto q0 = loop.add_location("q0", true);
    loop.add_transition(q0, q0, Action::silent());
    CHECK_THROWS_AS(unfold(loop, 2), PreconditionError);
}

TEST_CASE("pruning removes subtrees without accepting nodes")
{
    auto full = unfold(corpus::alpha_chain(), 5);
    auto pruned = unfold(corpus::alpha_chain(), 5, true);
    CHECK(pruned.size() < full.size());
    auto out = pruned.automaton.outgoing();
    for (LocationId n = 0; n < pruned.size(); ++n)
        if (out[n].empty()) CHECK(pruned.automaton.locations[n].accepting);
}

TEST_CASE("renaming the coffee machine")
{
    auto r = rename_clocks(unfold(corpus::coffee_machine(), 3));
    const ClockId x1 = ClockId::level(1), x2 = ClockId::level(2), x3 = ClockId::level(3);
    const ClockId x20 = ClockId::silent_level(2, 0);
    CHECK(edge_by_label(r, "coin").resets == std::vector<ClockId>{x1});
    CHECK(edge_by_label(r, "beep", 0).guard == Guard(atom(x1, Relation::eq, 2)));
    CHECK(edge_by_label(r, "beep", 1).guard == (Guard(atom(x1, Relation::gt, 0)) && atom(x1, Relation::lt, 3)));
    CHECK(edge_by_label(r, "beep", 1).resets == std::vector<ClockId>{x2});
    CHECK(edge_by_label(r, "eps").guard == (Guard(atom(x1, Relation::gt, 1)) && atom(x1, Relation::lt, 2)));
    CHECK(edge_by_label(r, "eps").resets == std::vector<ClockId>{x20});
    CHECK(edge_by_label(r, "coffee").guard == Guard(atom(x20, Relation::eq, 1)));
    CHECK(edge_by_label(r, "coffee").resets == std::vector<ClockId>{x3});
    CHECK(edge_by_label(r, "refund").guard == Guard(atom(x1, Relation::lt, 4)));
    CHECK(edge_by_label(r, "refund").resets == std::vector<ClockId>{x3});
}

TEST_CASE("two clocks reset together map to one level clock")
{
    TimedAutomaton a;
    ClockId x("x"), y("y");
    a.clocks = {x, y};
    auto p = a.add_location("p");
    auto q = a.add_location("q");
    auto r = a.add_location("r", true);
    a.add_transition(p, q, Action::observable("a"), {}, {x, y});
    a.add_transition(q, r, Action::observable("b"), Guard(atom(x, Relation::le, 1)) && atom(y, Relation::ge, 1));
    auto t = rename_clocks(unfold(a, 2));
    const auto& b = t.automaton.transitions[1];
    CHECK(clocks_of(b.guard) == std::set<ClockId>{ClockId::level(1)});
    // sampled runs agree before and after renaming
    auto u = unfold(a, 2);
    for (int d1 = 0; d1 <= 8; ++d1)
        for (int d2 = 0; d2 <= 8; ++d2) {
            Run run{{Rational(d1, 4), 0}, {Rational(d2, 4), 1}};
            CHECK(check_run(u.automaton, run) == check_run(t.automaton, run));
        }
}

TEST_CASE("renamed guards only use clocks reset strictly earlier on the path")
{
    std::mt19937 rng(3);
    for (int n = 0; n < 100; ++n) {
        auto a = corpus::random_enta(rng);
        auto t = rename_clocks(unfold(a, 1 + static_cast<int>(rng() % 4)));
        // clocks reset on the path from the root to each node
        std::vector<std::set<ClockId>> avail(t.size());
        avail[t.root()] = {ClockId::level(0)};
        for (const auto& tr : t.automaton.transitions) {
            for (const auto& c : clocks_of(tr.guard)) CHECK(avail[tr.source].count(c) == 1);
            REQUIRE(tr.resets.size() == 1);
            avail[tr.target] = avail[tr.source];
            avail[tr.target].insert(tr.resets.front());
        }
    }
}
