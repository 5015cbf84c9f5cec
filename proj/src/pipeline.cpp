#include "tadet/pipeline.hpp"

#include "tadet/errors.hpp"
#include "tadet/silent_removal.hpp"
#include "tadet/unfold.hpp"

#include <chrono>

namespace tadet {

std::string to_string(Variant v)
{
    switch (v) {
    case Variant::standard: return "std";
    case Variant::guard_oriented: return "new";
    case Variant::on_the_fly: return "otf";
    }
    return "new";
}

Variant parse_variant(const std::string& text)
{
    if (text == "std") return Variant::standard;
    if (text == "new") return Variant::guard_oriented;
    if (text == "otf") return Variant::on_the_fly;
    throw UsageError("unknown variant '" + text + "', expected std, new or otf");
}

namespace {

template <typename F>
auto timed(PipelineReport& report, const std::string& name, F&& f)
{
    auto start = std::chrono::steady_clock::now();
    auto t = f();
    std::chrono::duration<double, std::milli> took = std::chrono::steady_clock::now() - start;
    report.stages.push_back({name, t.size(), t.automaton.transitions.size(), took.count()});
    return t;
}

}  // namespace

PipelineResult run_pipeline(const TimedAutomaton& a, const PipelineOptions& opts)
{
    if (opts.depth < 1) throw UsageError("depth must be at least 1");
    PipelineResult r;
    r.report.variant = to_string(opts.variant);
    r.report.depth = opts.depth;
    auto unfolded = [&] {
        return timed(r.report, "unfold", [&] { return rename_clocks(unfold(a, opts.depth, opts.prune_leaves)); });
    };
    if (opts.variant == Variant::on_the_fly) {
        r.output = timed(r.report, "on-the-fly", [&] { return pipeline_on_the_fly(a, opts.depth, opts.determinize); });
        if (opts.check_equivalence) r.unfolded = unfolded();
    } else {
        r.unfolded = unfolded();
        r.silent_free = timed(r.report, "remove-silent", [&] { return remove_all_silent(*r.unfolded); });
        r.output = timed(r.report, "determinize", [&] {
            return opts.variant == Variant::standard ? determinize_standard(*r.silent_free, opts.determinize)
                                                     : determinize_guard_oriented(*r.silent_free, opts.determinize);
        });
    }
    if (opts.check_equivalence)
        r.report.equivalence = language_equal(*r.unfolded, r.output, opts.depth, opts.determinize.limits);
    return r;
}

}  // namespace tadet
