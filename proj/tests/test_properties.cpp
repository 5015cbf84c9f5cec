#include "corpus.hpp"
#include "property_suite.hpp"

#include "tadet/io.hpp"
#include "tadet/pipeline.hpp"

#include <catch_amalgamated.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace tadet;

namespace {

// The acceptance binary runs the full suite; this keeps ctest quick.
constexpr int kRandomCases = 15;

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<TimedAutomaton> random_models(int n, unsigned seed)
{
    std::mt19937 rng(seed);
    corpus::RandomShape shape;
    shape.max_locations = 4;
    shape.max_clocks = 2;
    shape.max_constant = 3;
    std::vector<TimedAutomaton> out;
    for (int i = 0; i < n; ++i) out.push_back(corpus::random_enta(rng, shape));
    return out;
}

}  // namespace

TEST_CASE("languages are preserved and oracles agree")
{
    for (const auto& c : property::suite(kRandomCases)) {
        auto r = property::check_case(c.name, c.automaton, c.depth);
        INFO(c.name << " k=" << c.depth << " " << r.failure);
        CHECK(r.silent_removal);
        CHECK(r.determinization);
        CHECK(r.cross_variant);
        CHECK(r.deterministic);
        CHECK(r.oracles_agree);
    }
}

TEST_CASE("pipeline output is reproducible and round-trips")
{
    for (const auto& a : random_models(20, 7)) {
        for (auto v : {Variant::standard, Variant::guard_oriented, Variant::on_the_fly}) {
            PipelineOptions opts;
            opts.depth = 3;
            opts.variant = v;
            auto first = serialize_model(run_pipeline(a, opts).output.automaton);
            auto second = serialize_model(run_pipeline(a, opts).output.automaton);
            CHECK(first == second);
            CHECK(serialize_model(parse_model(first)) == first);
        }
    }
}

TEST_CASE("report counts match the produced trees")
{
    for (const auto& a : random_models(20, 11)) {
        PipelineOptions opts;
        opts.depth = 3;
        auto r = run_pipeline(a, opts);
        REQUIRE(r.report.stages.size() == 3);
        const UnfoldedTree* trees[] = {&*r.unfolded, &*r.silent_free, &r.output};
        for (int i = 0; i < 3; ++i) {
            CHECK(r.report.stages[i].locations == trees[i]->automaton.locations.size());
            CHECK(r.report.stages[i].transitions == trees[i]->automaton.transitions.size());
        }
        auto j = nlohmann::json::parse(to_json(r.report));
        CHECK(j["stages"][2]["locations"] == r.output.size());
    }
}

TEST_CASE("stage invariants on random automata")
{
    for (const auto& a : random_models(30, 13)) {
        auto u = rename_clocks(unfold(a, 3));
        CHECK(u.automaton.shape == Shape::tree);
        for (const auto& tr : u.automaton.transitions) CHECK(tr.resets.size() == 1);
        auto s = remove_all_silent(u);
        for (const auto& tr : s.automaton.transitions) CHECK_FALSE(tr.action.is_silent());
        auto d = determinize_guard_oriented(s);
        CHECK(d.size() <= s.size());
        std::set<ClockId> declared(d.automaton.clocks.begin(), d.automaton.clocks.end());
        for (const auto& tr : d.automaton.transitions)
            for (const auto& c : clocks_of(tr.guard)) CHECK(declared.count(c) == 1);
    }
}

TEST_CASE("command line runs are deterministic")
{
    auto dir = std::filesystem::temp_directory_path() / "tadet_cli_props";
    std::filesystem::create_directories(dir);
    auto run = [&](const std::string& tag) {
        std::string cmd = std::string(TADET_CLI) + " --input " + TADET_MODELS_DIR + "/silent-return-loop.json" +
                          " --depth 4 --output " + (dir / (tag + ".json")).string() + " --report " +
                          (dir / (tag + ".report")).string();
        return std::system(cmd.c_str());
    };
    REQUIRE(run("one") == 0);
    REQUIRE(run("two") == 0);
    auto out = slurp(dir / "one.json");
    CHECK(out == slurp(dir / "two.json"));
    auto model = parse_model(out);
    auto report = nlohmann::json::parse(slurp(dir / "one.report"));
    CHECK(report["stages"].back()["locations"] == model.locations.size());
    CHECK(report["stages"].back()["transitions"] == model.transitions.size());
    std::filesystem::remove_all(dir);
}
