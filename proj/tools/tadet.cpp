// Command-line driver: runs the determinization pipeline on one model, or
// replays the bundled study models as a markdown table.

#include "tadet/errors.hpp"
#include "tadet/io.hpp"
#include "tadet/pipeline.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace tadet;

namespace {

constexpr int kEquivalenceFailure = 5;

int exit_code(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::usage: return 1;
    case ErrorKind::parse: return 2;
    case ErrorKind::precondition:
    case ErrorKind::structural:
    case ErrorKind::unsupported: return 3;
    case ErrorKind::resource: return 4;
    }
    return 1;
}

const char* kind_name(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::usage: return "usage";
    case ErrorKind::parse: return "parse";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::structural: return "structural";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::resource: return "resource";
    }
    return "error";
}

int report_error(const std::string& kind, const std::string& message, int code, nlohmann::json extra = {})
{
    nlohmann::ordered_json j;
    j["error"]["kind"] = kind;
    j["error"]["message"] = message;
    if (!extra.is_null()) j["error"]["counterexample"] = extra;
    std::cerr << j.dump() << "\n";
    return code;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write '" + path + "'");
    out << text;
}

TimedAutomaton load(const std::string& path)
{
    auto text = read_file(path);
    if (std::filesystem::path(path).extension() == ".xml") return import_uppaal_xml(text);
    return parse_model(text);
}

std::string render(const TimedAutomaton& a, const std::string& emit)
{
    if (emit == "dot") return export_dot(a);
    if (emit == "smt2") return export_smtlib(a);
    return serialize_model(a);
}

struct RunArgs {
    std::string input;
    int depth = 0;
    std::string variant = "new";
    bool prune_leaves = false;
    bool keep_unsat = false;
    std::string emit = "json";
    std::string output;
    std::string report;
    bool check_equiv = false;
    std::size_t max_branches = SolverLimits{}.max_branches;
};

int run(const RunArgs& args)
{
    PipelineOptions opts;
    opts.depth = args.depth;
    opts.variant = parse_variant(args.variant);
    opts.prune_leaves = args.prune_leaves;
    opts.check_equivalence = args.check_equiv;
    opts.determinize.prune_unsatisfiable = !args.keep_unsat;
    opts.determinize.limits.max_branches = args.max_branches;
    if (opts.depth < 1) throw UsageError("--depth must be at least 1");
    auto model = load(args.input);
    auto result = run_pipeline(model, opts);

    auto artifact = render(result.output.automaton, args.emit);
    if (args.output.empty()) std::cout << artifact;
    else write_file(args.output, artifact);
    if (!args.report.empty()) write_file(args.report, to_json(result.report));

    if (result.report.equivalence && !result.report.equivalence->equal) {
        const auto& cx = result.report.equivalence->counterexample;
        auto detail = cx ? nlohmann::json::parse(to_json(*cx)) : nlohmann::json();
        return report_error("equivalence", "output language differs from the input language", kEquivalenceFailure,
                            detail);
    }
    return 0;
}

std::string cell(const std::optional<std::size_t>& n) { return n ? std::to_string(*n) : "–"; }

std::string seconds(double millis)
{
    std::ostringstream os;
    os << std::fixed << std::setprecision(3) << millis / 1000.0;
    return os.str();
}

struct BenchArgs {
    std::string models = TADET_MODELS_DIR;
    int max_depth = 50;
    bool skip_std = false;
    std::size_t max_branches = SolverLimits{}.max_branches;
};

int bench(const BenchArgs& args)
{
    struct Row {
        const char* model;
        std::vector<int> depths;
    };
    const Row rows[] = {{"silent-return", {2, 5, 9}}, {"silent-return-loop", {2, 5, 9}}, {"alpha-chain", {2, 5, 10, 25, 50}}, {"alpha-chain-silent", {2, 5, 10}}};
    std::cout << "| model | k | unfolded | silent-free | new det | std det | on-the-fly | new (s) | std (s) | otf (s) |\n"
              << "|---|---|---|---|---|---|---|---|---|---|\n";
    for (const auto& row : rows) {
        auto model = load(args.models + "/" + row.model + ".json");
        for (int k : row.depths) {
            if (k > args.max_depth) continue;
            PipelineOptions opts;
            opts.depth = k;
            opts.determinize.limits.max_branches = args.max_branches;
            opts.variant = Variant::guard_oriented;
            auto fresh = run_pipeline(model, opts);
            const auto& stages = fresh.report.stages;
            double new_ms = stages[0].millis + stages[1].millis + stages[2].millis;
            std::optional<std::size_t> std_count;
            std::string std_time = "–";
            if (!args.skip_std) {
                opts.variant = Variant::standard;
                try {
                    auto s = run_pipeline(model, opts);
                    std_count = s.output.size();
                    std_time = seconds(s.report.stages[0].millis + s.report.stages[1].millis + s.report.stages[2].millis);
                } catch (const ResourceError&) {
                }
            }
            opts.variant = Variant::on_the_fly;
            auto otf = run_pipeline(model, opts);
            std::cout << "| " << row.model << " | " << k << " | " << fresh.unfolded->size() << " | "
                      << fresh.silent_free->size() << " | " << fresh.output.size() << " | " << cell(std_count) << " | "
                      << otf.output.size() << " | " << seconds(new_ms) << " | " << std_time << " | "
                      << seconds(otf.report.stages[0].millis) << " |\n"
                      << std::flush;
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Determinization of timed automata with silent transitions"};
    app.require_subcommand(0, 1);
    RunArgs args;
    app.add_option("--input", args.input, "Model file (.json, or .xml for UPPAAL)");
    app.add_option("--depth", args.depth, "Observable depth bound k (at least 1)");
    app.add_option("--variant", args.variant, "std, new or otf")->check(CLI::IsMember({"std", "new", "otf"}));
    app.add_flag("--prune-leaves", args.prune_leaves, "Drop non-accepting leaves while unfolding");
    app.add_flag("--keep-unsat", args.keep_unsat, "Keep merged branches whose guard is unsatisfiable");
    app.add_option("--emit", args.emit, "Artifact format: json, dot or smt2")->check(CLI::IsMember({"json", "dot", "smt2"}));
    app.add_option("--output", args.output, "Artifact file (standard output when absent)");
    app.add_option("--report", args.report, "Write the JSON pipeline report here");
    app.add_flag("--check-equiv", args.check_equiv, "Compare input and output languages up to depth k");
    app.add_option("--max-branches", args.max_branches, "Solver branch budget per query");

    BenchArgs bargs;
    auto* bench_cmd = app.add_subcommand("bench", "Replay the bundled study models as a markdown table");
    bench_cmd->add_option("--models", bargs.models, "Directory holding the bundled study models");
    bench_cmd->add_option("--max-depth", bargs.max_depth, "Skip rows deeper than this");
    bench_cmd->add_flag("--skip-std", bargs.skip_std, "Leave out the subset construction");
    bench_cmd->add_option("--max-branches", bargs.max_branches, "Solver branch budget per query");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report_error("usage", e.what(), 1);
    }

    try {
        if (*bench_cmd) return bench(bargs);
        if (args.input.empty()) throw UsageError("--input is required");
        return run(args);
    } catch (const Error& e) {
        return report_error(kind_name(e.kind()), e.what(), exit_code(e.kind()));
    } catch (const std::exception& e) {
        return report_error("internal", e.what(), 70);
    }
}
