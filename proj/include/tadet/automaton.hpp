#pragma once

#include "tadet/clock.hpp"
#include "tadet/guard.hpp"
#include "tadet/rational.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace tadet {

using LocationId = std::size_t;
using TransitionId = std::size_t;

// An observable label, or the silent action when empty.
class Action {
public:
    Action() = default;
    static Action silent() { return Action(); }
    static Action observable(std::string label) { return Action(std::move(label)); }

    bool is_silent() const noexcept { return !label_.has_value(); }
    const std::string& label() const { return *label_; }
    std::string to_string() const { return label_ ? *label_ : "eps"; }

    friend bool operator==(const Action&, const Action&) = default;

private:
    explicit Action(std::string l) : label_(std::move(l)) {}
    std::optional<std::string> label_;
};

struct Location {
    std::string name;
    bool accepting = false;
    Guard invariant;  // True unless the model says otherwise
};

struct Transition {
    LocationId source = 0;
    LocationId target = 0;
    Action action;
    Guard guard;
    std::vector<ClockId> resets;
};

enum class Shape { general, tree, dag };

struct TimedAutomaton {
    std::vector<Location> locations;
    LocationId initial = 0;
    std::vector<ClockId> clocks;
    std::vector<Transition> transitions;
    Shape shape = Shape::general;
    int depth = 0;  // observable depth bound of tree and dag shapes

    LocationId add_location(std::string name, bool accepting = false);
    TransitionId add_transition(LocationId source, LocationId target, Action action, Guard guard = {},
                                std::vector<ClockId> resets = {});
    std::optional<LocationId> find_location(const std::string& name) const;
    bool has_clock(const ClockId& c) const;
    // Outgoing transition ids per location, in transition-list order.
    std::vector<std::vector<TransitionId>> outgoing() const;
};

// Throws StructuralError naming the first violated well-formedness rule.
void validate(const TimedAutomaton& a);
bool has_trivial_invariants(const TimedAutomaton& a);

struct TimedEvent {
    Rational time;
    std::string label;
    friend bool operator==(const TimedEvent&, const TimedEvent&) = default;
    friend auto operator<=>(const TimedEvent& a, const TimedEvent& b)
    {
        if (a.time != b.time) return a.time < b.time ? std::strong_ordering::less : std::strong_ordering::greater;
        return a.label <=> b.label;
    }
};
using TimedTrace = std::vector<TimedEvent>;

struct RunStep {
    Rational delay;
    TransitionId transition = 0;
};
using Run = std::vector<RunStep>;

std::string to_string(const TimedTrace& t);

}  // namespace tadet
