#include "corpus.hpp"

#include "tadet/errors.hpp"
#include "tadet/semantics.hpp"

#include <catch_amalgamated.hpp>

using namespace tadet;

namespace {

// Transition ids of the coffee machine in declaration order.
constexpr TransitionId coin = 0, beep_refund = 1, beep = 2, grind = 3, coffee = 5;

Run timed(const std::vector<std::pair<std::string, TransitionId>>& steps)
{
    Run r;
    Rational now = 0;
    for (const auto& [at, t] : steps) {
        Rational time = parse_rational(at);
        r.push_back({time - now, t});
        now = time;
    }
    return r;
}

}  // namespace

TEST_CASE("coffee run with a silent step is feasible")
{
    // x is reset by coin only: beep at x = 1.5, silent step at x = 1.7, coffee 1 later
    auto a = corpus::coffee_machine();
    auto r = timed({{"1", coin}, {"2.5", beep}, {"2.7", grind}, {"3.7", coffee}});
    CHECK(check_run(a, r));
    CHECK(is_accepting_run(a, r));
    auto trace = trace_of(a, r);
    REQUIRE(trace.size() == 3);
    CHECK(trace[2].time == Rational(37, 10));
    CHECK(trace[2].label == "coffee");
}

TEST_CASE("hand-computed valuations along coffee runs")
{
    auto a = corpus::coffee_machine();
    CHECK(check_run(a, timed({{"1", coin}, {"2.5", beep}})));
    // beep does not reset x, so the silent step at 4.2 sees x = 3.2
    CHECK_FALSE(check_run(a, timed({{"1", coin}, {"2.5", beep}, {"4.2", grind}, {"5.2", coffee}})));
    CHECK_FALSE(check_run(a, timed({{"1", coin}, {"2.5", beep}, {"3.1", grind}})));  // x = 2.1
    CHECK_FALSE(check_run(a, timed({{"1", coin}, {"2.5", beep}, {"2.7", grind}, {"3.8", coffee}})));
    CHECK(check_run(a, timed({{"0", coin}, {"2", beep_refund}, {"3.9", 4}})));
}

TEST_CASE("empty run is vacuously feasible")
{
    auto a = corpus::coffee_machine();
    CHECK(check_run(a, {}));
    CHECK(final_location(a, {}) == a.initial);
}

TEST_CASE("late beep is infeasible")
{
    auto a = corpus::coffee_machine();
    CHECK_FALSE(check_run(a, timed({{"1", coin}, {"4.5", beep}})));
    CHECK_FALSE(check_run(a, timed({{"1", coin}, {"4.5", beep_refund}})));
}

TEST_CASE("malformed run is a structural error, not infeasibility")
{
    auto a = corpus::coffee_machine();
    CHECK_THROWS_AS(check_run(a, timed({{"1", beep}})), StructuralError);
    CHECK_THROWS_AS(check_run(a, {{Rational(-1), coin}}), StructuralError);
}

TEST_CASE("strong responsiveness")
{
    CHECK(check_strong_responsiveness(corpus::coffee_machine()));
    TimedAutomaton loop;
    auto q0 = loop.add_location("q0", true);
    loop.add_transition(q0, q0, Action::silent());
    CHECK_FALSE(check_strong_responsiveness(loop));
    TimedAutomaton cycle;
    auto p0 = cycle.add_location("q0", true);
    auto p1 = cycle.add_location("q1");
    cycle.add_transition(p0, p1, Action::silent());
    cycle.add_transition(p1, p0, Action::silent());
    CHECK_FALSE(check_strong_responsiveness(cycle));
}

TEST_CASE("out-degree statistics")
{
    auto a = observable_out_degree_stats(corpus::silent_return());
    CHECK(a.locations == 2);
    CHECK(a.transitions == 3);
    CHECK(a.silent == 1);
    auto c = observable_out_degree_stats(corpus::alpha_chain());
    CHECK(c.locations == 4);
    CHECK(c.transitions == 4);
    CHECK(c.silent == 0);
    CHECK(c.max_out_degree == 2);
    TimedAutomaton one;
    one.add_location("only");
    auto s = observable_out_degree_stats(one);
    CHECK(s.locations == 1);
    CHECK(s.transitions == 0);
    CHECK(s.silent == 0);
}

TEST_CASE("corpus automata are well formed")
{
    for (const auto& a : {corpus::coffee_machine(), corpus::silent_return(), corpus::silent_return_loop(), corpus::alpha_chain(),
                          corpus::alpha_chain_silent(), corpus::sync_example()})
        CHECK_NOTHROW(validate(a));
}

TEST_CASE("guard weakening never rejects an accepted run")
{
    std::mt19937 rng(7);
    for (int n = 0; n < 50; ++n) {
        auto a = corpus::random_enta(rng);
        auto out = a.outgoing();
        // random path with random delays on the quarter grid
        Run r;
        LocationId at = a.initial;
        for (int step = 0; step < 4 && !out[at].empty(); ++step) {
            auto t = out[at][static_cast<std::size_t>(rng() % out[at].size())];
            r.push_back({Rational(static_cast<std::int64_t>(rng() % 12), 4), t});
            at = a.transitions[t].target;
        }
        if (!check_run(a, r)) continue;
        auto weak = a;
        for (auto& t : weak.transitions)
            if (rng() % 2) t.guard = Guard::top();
        CHECK(check_run(weak, r));
    }
}

TEST_CASE("replaying a run twice gives the same verdict and trace")
{
    auto a = corpus::coffee_machine();
    auto r = timed({{"1", coin}, {"2.5", beep}, {"4.2", grind}, {"5.2", coffee}});
    CHECK(check_run(a, r) == check_run(a, r));
    CHECK(trace_of(a, r) == trace_of(a, r));
}

TEST_CASE("rationals parse exactly")
{
    CHECK(parse_rational("5/2") == Rational(5, 2));
    CHECK(parse_rational("4.2") == Rational(21, 5));
    CHECK(parse_rational("-0.5") == Rational(-1, 2));
    CHECK(to_string(Rational(10, 4)) == "5/2");
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("abc"), ParseError);
}
