#include "tadet/io.hpp"

#include "tadet/errors.hpp"
#include "tadet/solver.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <json.hpp>

#include <algorithm>
#include <map>
#include <regex>
#include <set>
#include <sstream>

namespace tadet {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kFormat = "ta/1";

[[noreturn]] void fail(const std::string& path, const std::string& what)
{
    throw ParseError(path + ": " + what);
}

const json& field(const json& obj, const char* name, const std::string& path)
{
    if (!obj.is_object()) fail(path, "expected an object");
    auto it = obj.find(name);
    if (it == obj.end()) {
        if (path == "$") throw ParseError(std::string("missing field: ") + name);
        fail(path, std::string("missing field: ") + name);
    }
    return *it;
}

std::string text_of(const json& j, const std::string& path)
{
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

class ModelReader {
public:
    explicit ModelReader(const json& doc) : doc_(doc) {}

    TimedAutomaton read()
    {
        if (!doc_.is_object()) fail("$", "expected an object");
        if (auto f = doc_.find("format"); f != doc_.end() && (!f->is_string() || *f != kFormat))
            fail("$.format", std::string("unsupported format, expected \"") + kFormat + "\"");
        for (const char* name : {"locations", "initial", "transitions", "clocks"}) field(doc_, name, "$");
        read_clocks();
        read_locations();
        const auto& init = field(doc_, "initial", "$");
        a_.initial = location(text_of(init, "$.initial"), "$.initial");
        read_transitions();
        read_shape();
        try {
            validate(a_);
        } catch (const StructuralError& e) {
            fail("$", e.what());
        }
        return std::move(a_);
    }

private:
    void read_clocks()
    {
        const auto& clocks = field(doc_, "clocks", "$");
        if (!clocks.is_array()) fail("$.clocks", "expected an array");
        for (std::size_t i = 0; i < clocks.size(); ++i) {
            auto path = "$.clocks[" + std::to_string(i) + "]";
            ClockId c(text_of(clocks[i], path));
            if (c.name().empty()) fail(path, "empty clock name");
            if (a_.has_clock(c)) fail(path, "duplicate clock '" + c.name() + "'");
            a_.clocks.push_back(c);
        }
    }

    void read_locations()
    {
        const auto& locs = field(doc_, "locations", "$");
        if (!locs.is_array()) fail("$.locations", "expected an array");
        for (std::size_t i = 0; i < locs.size(); ++i) {
            auto path = "$.locations[" + std::to_string(i) + "]";
            auto id = text_of(field(locs[i], "id", path), path + ".id");
            if (ids_.count(id)) fail(path + ".id", "duplicate location '" + id + "'");
            bool accepting = false;
            if (auto f = locs[i].find("accepting"); f != locs[i].end()) {
                if (!f->is_boolean()) fail(path + ".accepting", "expected a boolean");
                accepting = f->get<bool>();
            }
            ids_[id] = a_.add_location(id, accepting);
            if (auto f = locs[i].find("invariant"); f != locs[i].end())
                a_.locations.back().invariant = guard(*f, path + ".invariant", "location '" + id + "'");
        }
    }

    void read_transitions()
    {
        const auto& trs = field(doc_, "transitions", "$");
        if (!trs.is_array()) fail("$.transitions", "expected an array");
        for (std::size_t i = 0; i < trs.size(); ++i) {
            auto path = "$.transitions[" + std::to_string(i) + "]";
            auto where = "transition " + std::to_string(i);
            const auto& t = trs[i];
            auto src = location(text_of(field(t, "source", path), path + ".source"), path + ".source");
            auto tgt = location(text_of(field(t, "target", path), path + ".target"), path + ".target");
            auto label = text_of(field(t, "action", path), path + ".action");
            if (label.empty()) fail(path + ".action", "empty action label");
            Action action = label == "eps" ? Action::silent() : Action::observable(label);
            Guard g;
            if (auto f = t.find("guard"); f != t.end()) g = guard(*f, path + ".guard", where);
            std::vector<ClockId> resets;
            if (auto f = t.find("resets"); f != t.end()) {
                if (!f->is_array()) fail(path + ".resets", "expected an array");
                for (std::size_t r = 0; r < f->size(); ++r)
                    resets.push_back(clock((*f)[r], path + ".resets[" + std::to_string(r) + "]", where));
            }
            a_.add_transition(src, tgt, std::move(action), std::move(g), std::move(resets));
        }
    }

    void read_shape()
    {
        if (auto f = doc_.find("shape"); f != doc_.end()) {
            auto s = text_of(*f, "$.shape");
            if (s == "tree") a_.shape = Shape::tree;
            else if (s == "dag") a_.shape = Shape::dag;
            else if (s == "general") a_.shape = Shape::general;
            else fail("$.shape", "unknown shape '" + s + "'");
        }
        if (auto f = doc_.find("depth"); f != doc_.end()) {
            if (!f->is_number_integer() || f->get<int>() < 0) fail("$.depth", "expected a non-negative integer");
            a_.depth = f->get<int>();
        }
    }

    LocationId location(const std::string& id, const std::string& path) const
    {
        auto it = ids_.find(id);
        if (it == ids_.end()) fail(path, "unknown location '" + id + "'");
        return it->second;
    }

    ClockId clock(const json& j, const std::string& path, const std::string& where) const
    {
        ClockId c(text_of(j, path));
        if (!a_.has_clock(c)) fail(path, "unknown clock '" + c.name() + "' in " + where);
        return c;
    }

    Guard guard(const json& j, const std::string& path, const std::string& where) const
    {
        if (j.is_array()) {
            std::vector<Guard> parts;
            for (std::size_t i = 0; i < j.size(); ++i)
                parts.push_back(guard(j[i], path + "[" + std::to_string(i) + "]", where));
            return Guard::all(std::move(parts));
        }
        if (!j.is_object()) fail(path, "expected an atom, a list or an all/any node");
        for (const char* kind : {"all", "any"}) {
            if (auto f = j.find(kind); f != j.end()) {
                if (!f->is_array()) fail(path + "." + kind, "expected an array");
                std::vector<Guard> parts;
                for (std::size_t i = 0; i < f->size(); ++i)
                    parts.push_back(guard((*f)[i], path + "." + kind + "[" + std::to_string(i) + "]", where));
                return kind[1] == 'l' ? Guard::all(std::move(parts)) : Guard::any(std::move(parts));
            }
        }
        auto left = clock(field(j, "left", path), path + ".left", where);
        auto rel_text = text_of(field(j, "rel", path), path + ".rel");
        Relation rel;
        try {
            rel = parse_relation(rel_text);
        } catch (const Error&) {
            fail(path + ".rel", "malformed relation '" + rel_text + "'");
        }
        const auto& n = field(j, "const", path);
        if (!n.is_number_integer()) fail(path + ".const", "expected an integer");
        auto bound = n.get<std::int64_t>();
        if (auto f = j.find("right"); f != j.end())
            return atom(left, clock(*f, path + ".right", where), rel, bound);
        if (bound < 0) fail(path + ".const", "negative constant " + std::to_string(bound) + " in " + where);
        return atom(left, rel, bound);
    }

    const json& doc_;
    TimedAutomaton a_;
    std::map<std::string, LocationId> ids_;
};

json atom_json(const AtomicConstraint& a)
{
    json j;
    j["left"] = a.left.name();
    j["rel"] = to_string(a.rel);
    j["const"] = a.bound;
    if (a.right) j["right"] = a.right->name();
    return j;
}

json guard_json(const Guard& g)
{
    switch (g.kind()) {
    case Guard::Kind::top: return json::array();
    case Guard::Kind::bottom: return json{{"any", json::array()}};
    case Guard::Kind::atom: return json::array({atom_json(g.atom())});
    case Guard::Kind::all: {
        if (g.is_conjunctive()) {
            json list = json::array();
            for (const auto& c : g.children()) list.push_back(atom_json(c.atom()));
            return list;
        }
        json list = json::array();
        for (const auto& c : g.children()) list.push_back(guard_json(c));
        return json{{"all", list}};
    }
    case Guard::Kind::any: {
        json list = json::array();
        for (const auto& c : g.children()) list.push_back(guard_json(c));
        return json{{"any", list}};
    }
    }
    return json::array();
}

const char* shape_name(Shape s)
{
    switch (s) {
    case Shape::tree: return "tree";
    case Shape::dag: return "dag";
    case Shape::general: return "general";
    }
    return "general";
}

}  // namespace

TimedAutomaton parse_model(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("$: malformed JSON: ") + e.what());
    }
    return ModelReader(doc).read();
}

std::string serialize_model(const TimedAutomaton& a)
{
    json doc;
    doc["format"] = kFormat;
    json clocks = json::array();
    for (const auto& c : a.clocks) clocks.push_back(c.name());
    doc["clocks"] = clocks;
    json locs = json::array();
    for (const auto& l : a.locations) {
        json j;
        j["id"] = l.name;
        j["accepting"] = l.accepting;
        if (!l.invariant.is_top()) j["invariant"] = guard_json(l.invariant);
        locs.push_back(j);
    }
    doc["locations"] = locs;
    doc["initial"] = a.locations.at(a.initial).name;
    json trs = json::array();
    for (const auto& t : a.transitions) {
        json j;
        j["source"] = a.locations[t.source].name;
        j["target"] = a.locations[t.target].name;
        j["action"] = t.action.to_string();
        j["guard"] = guard_json(t.guard);
        json resets = json::array();
        for (const auto& r : t.resets) resets.push_back(r.name());
        j["resets"] = resets;
        trs.push_back(j);
    }
    doc["transitions"] = trs;
    if (a.shape != Shape::general) {
        doc["shape"] = shape_name(a.shape);
        doc["depth"] = a.depth;
    }
    return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------- UPPAAL XML

namespace {

namespace pt = boost::property_tree;

[[noreturn]] void unsupported(const std::string& what)
{
    throw UnsupportedError("unsupported UPPAAL feature: " + what);
}

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string strip_comments(const std::string& s)
{
    static const std::regex block(R"(/\*[\s\S]*?\*/)"), line(R"(//[^\n]*)");
    return std::regex_replace(std::regex_replace(s, block, " "), line, " ");
}

std::vector<std::string> split(const std::string& s, const std::string& sep)
{
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        auto next = s.find(sep, pos);
        out.push_back(trim(s.substr(pos, next == std::string::npos ? std::string::npos : next - pos)));
        if (next == std::string::npos) break;
        pos = next + sep.size();
    }
    return out;
}

struct Declarations {
    std::vector<std::string> clocks;
    std::vector<std::string> channels;
};

void read_declarations(const std::string& text, const std::string& where, Declarations& d)
{
    static const std::regex clock_decl(R"(^clock\s+(.+)$)"), chan_decl(R"(^chan\s+(.+)$)");
    for (const auto& stmt : split(strip_comments(text), ";")) {
        if (stmt.empty()) continue;
        std::smatch m;
        if (std::regex_match(stmt, m, clock_decl)) {
            for (const auto& name : split(m[1], ",")) d.clocks.push_back(name);
        } else if (std::regex_match(stmt, m, chan_decl)) {
            for (const auto& name : split(m[1], ",")) d.channels.push_back(name);
        } else {
            unsupported("declaration '" + stmt + "' in " + where);
        }
    }
}

Guard uppaal_guard(const std::string& text, const TimedAutomaton& a, const std::string& where)
{
    static const std::regex forward(R"(^([A-Za-z_]\w*)\s*(?:-\s*([A-Za-z_]\w*)\s*)?(<=|>=|==|<|>)\s*(-?\d+)$)");
    static const std::regex backward(R"(^(\d+)\s*(<=|>=|==|<|>)\s*([A-Za-z_]\w*)$)");
    auto relation = [](const std::string& op) { return parse_relation(op == "==" ? "=" : op); };
    auto clock = [&](const std::string& name) {
        ClockId c(name);
        if (!a.has_clock(c)) unsupported("guard on '" + name + "', which is not a clock, in " + where);
        return c;
    };
    std::vector<Guard> parts;
    auto body = trim(text);
    if (body.empty()) return Guard::top();
    if (body.find("||") != std::string::npos) unsupported("disjunctive guard '" + body + "' in " + where);
    for (const auto& part : split(body, "&&")) {
        std::smatch m;
        if (std::regex_match(part, m, forward)) {
            auto bound = std::stoll(m[4]);
            if (m[2].matched) {
                parts.emplace_back(atom(clock(m[1]), clock(m[2]), relation(m[3]), bound));
            } else {
                if (bound < 0) unsupported("negative constant in '" + part + "' in " + where);
                parts.emplace_back(atom(clock(m[1]), relation(m[3]), bound));
            }
        } else if (std::regex_match(part, m, backward)) {
            parts.emplace_back(atom(clock(m[3]), mirror(relation(m[2])), std::stoll(m[1])));
        } else {
            unsupported("guard '" + part + "' in " + where);
        }
    }
    return Guard::all(std::move(parts));
}

std::vector<ClockId> uppaal_resets(const std::string& text, const TimedAutomaton& a, const std::string& where)
{
    static const std::regex reset(R"(^([A-Za-z_]\w*)\s*:?=\s*0$)");
    std::vector<ClockId> out;
    auto body = trim(text);
    if (body.empty()) return out;
    for (const auto& part : split(body, ",")) {
        std::smatch m;
        if (!std::regex_match(part, m, reset)) unsupported("assignment '" + part + "' in " + where);
        ClockId c(m[1]);
        if (!a.has_clock(c)) unsupported("assignment to '" + c.name() + "', which is not a clock, in " + where);
        out.push_back(c);
    }
    return out;
}

}  // namespace

TimedAutomaton import_uppaal_xml(const std::string& text)
{
    pt::ptree doc;
    try {
        std::istringstream in(text);
        pt::read_xml(in, doc);
    } catch (const pt::xml_parser_error& e) {
        throw ParseError(std::string("malformed XML: ") + e.what());
    }
    auto nta = doc.get_child_optional("nta");
    if (!nta) throw ParseError("missing element: nta");

    Declarations decls;
    const pt::ptree* tmpl = nullptr;
    for (const auto& [tag, node] : *nta) {
        if (tag == "declaration") {
            read_declarations(node.data(), "global declarations", decls);
        } else if (tag == "template") {
            if (tmpl) unsupported("more than one template");
            tmpl = &node;
        } else if (tag != "system" && tag != "queries" && tag != "<xmlattr>" && tag != "<xmlcomment>") {
            unsupported("element <" + tag + ">");
        }
    }
    if (!tmpl) throw ParseError("missing element: template");

    TimedAutomaton a;
    std::map<std::string, LocationId> ids;
    std::optional<std::string> init;
    std::vector<const pt::ptree*> transitions;
    for (const auto& [tag, node] : *tmpl) {
        if (tag == "declaration") {
            read_declarations(node.data(), "template declarations", decls);
        } else if (tag == "location") {
            auto id = node.get<std::string>("<xmlattr>.id", "");
            if (id.empty()) throw ParseError("location without id");
            auto name = trim(node.get<std::string>("name", id));
            if (node.get_child_optional("committed")) unsupported("committed location '" + name + "'");
            if (node.get_child_optional("urgent")) unsupported("urgent location '" + name + "'");
            bool accepting = false;
            for (const auto& [ltag, label] : node) {
                if (ltag != "label") continue;
                auto kind = label.get<std::string>("<xmlattr>.kind", "");
                if (kind == "comments") accepting = label.data().find("accepting") != std::string::npos;
                else if (kind != "invariant") unsupported("label kind '" + kind + "' on location '" + name + "'");
            }
            ids[id] = a.add_location(name, accepting);
        } else if (tag == "init") {
            init = node.get<std::string>("<xmlattr>.ref", "");
        } else if (tag == "transition") {
            transitions.push_back(&node);
        } else if (tag == "branchpoint") {
            unsupported("branchpoint");
        } else if (tag == "parameter") {
            if (!trim(node.data()).empty()) unsupported("template parameters");
        } else if (tag != "name" && tag != "<xmlattr>" && tag != "<xmlcomment>") {
            unsupported("element <" + tag + "> in template");
        }
    }
    for (const auto& c : decls.clocks) a.clocks.emplace_back(c);
    if (!init) throw ParseError("missing element: init");
    if (!ids.count(*init)) throw ParseError("init refers to unknown location '" + *init + "'");
    a.initial = ids.at(*init);

    // invariants need the clock list, so they are read in a second pass
    for (const auto& [tag, node] : *tmpl) {
        if (tag != "location") continue;
        auto loc = ids.at(node.get<std::string>("<xmlattr>.id"));
        for (const auto& [ltag, label] : node)
            if (ltag == "label" && label.get<std::string>("<xmlattr>.kind", "") == "invariant")
                a.locations[loc].invariant = uppaal_guard(label.data(), a, "invariant of '" + a.locations[loc].name + "'");
    }

    for (std::size_t i = 0; i < transitions.size(); ++i) {
        const auto& node = *transitions[i];
        auto where = "transition " + std::to_string(i);
        auto endpoint = [&](const char* which) {
            auto ref = node.get<std::string>(std::string(which) + ".<xmlattr>.ref", "");
            auto it = ids.find(ref);
            if (it == ids.end()) throw ParseError(where + ": unknown " + which + " '" + ref + "'");
            return it->second;
        };
        auto src = endpoint("source"), tgt = endpoint("target");
        Guard g;
        std::vector<ClockId> resets;
        std::optional<Action> action;
        for (const auto& [tag, label] : node) {
            if (tag != "label") continue;
            auto kind = label.get<std::string>("<xmlattr>.kind", "");
            if (kind == "guard") {
                g = uppaal_guard(label.data(), a, where);
            } else if (kind == "assignment") {
                resets = uppaal_resets(label.data(), a, where);
            } else if (kind == "synchronisation") {
                auto sync = trim(label.data());
                if (sync.empty() || (sync.back() != '!' && sync.back() != '?'))
                    unsupported("synchronisation '" + sync + "' in " + where);
                auto chan = trim(sync.substr(0, sync.size() - 1));
                if (std::find(decls.channels.begin(), decls.channels.end(), chan) == decls.channels.end())
                    throw ParseError(where + ": undeclared channel '" + chan + "'");
                action = chan == "tau" ? Action::silent() : Action::observable(chan);
            } else if (kind != "comments") {
                unsupported("label kind '" + kind + "' in " + where);
            }
        }
        if (!action) unsupported("transition without synchronisation (" + where + "); use the tau channel for silent steps");
        a.add_transition(src, tgt, std::move(*action), std::move(g), std::move(resets));
    }
    try {
        validate(a);
    } catch (const StructuralError& e) {
        throw ParseError(e.what());
    }
    return a;
}

// ---------------------------------------------------------------- DOT, SMT-LIB

namespace {

std::string dot_escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace

std::string export_dot(const TimedAutomaton& a)
{
    std::ostringstream os;
    os << "digraph ta {\n  rankdir=LR;\n  node [shape=circle];\n";
    for (LocationId l = 0; l < a.locations.size(); ++l) {
        const auto& loc = a.locations[l];
        os << "  n" << l << " [label=\"" << dot_escape(loc.name);
        if (!loc.invariant.is_top()) os << "\\n" << dot_escape(to_string(loc.invariant, Notation::unicode));
        os << "\"";
        if (loc.accepting) os << ", shape=doublecircle";
        if (l == a.initial) os << ", penwidth=2";
        os << "];\n";
    }
    for (const auto& t : a.transitions) {
        std::string label = t.action.is_silent() ? "ε" : t.action.label();
        if (!t.guard.is_top()) label += "\\n" + dot_escape(to_string(t.guard, Notation::unicode));
        if (!t.resets.empty()) {
            label += "\\n{";
            for (std::size_t i = 0; i < t.resets.size(); ++i) label += (i ? ", " : "") + t.resets[i].name();
            label += "}";
        }
        os << "  n" << t.source << " -> n" << t.target << " [label=\"" << label << "\"";
        if (t.action.is_silent()) os << ", style=dashed";
        os << "];\n";
    }
    os << "}\n";
    return os.str();
}

std::string export_smtlib(const TimedAutomaton& a)
{
    std::set<ClockId> clocks(a.clocks.begin(), a.clocks.end());
    std::ostringstream os;
    for (std::size_t i = 0; i < a.transitions.size(); ++i) {
        const auto& t = a.transitions[i];
        if (i) os << "(reset)\n";
        os << "; transition " << i << ": " << a.locations[t.source].name << " -" << t.action.to_string() << "-> "
           << a.locations[t.target].name << "\n";
        os << to_smtlib(t.guard, clocks);
    }
    return os.str();
}

// ---------------------------------------------------------------- reports

namespace {

json counterexample_json(const Counterexample& c)
{
    json j;
    j["word"] = c.word;
    json trace = json::array();
    for (const auto& e : c.trace()) trace.push_back({{"time", to_string(e.time)}, {"action", e.label}});
    j["trace"] = trace;
    j["direction"] = c.direction == Direction::left_only ? "left_only" : "right_only";
    return j;
}

}  // namespace

std::string to_json(const Counterexample& c) { return counterexample_json(c).dump(2) + "\n"; }

std::string to_json(const PipelineReport& r)
{
    json j;
    j["variant"] = r.variant;
    j["depth"] = r.depth;
    json stages = json::array();
    for (const auto& s : r.stages)
        stages.push_back({{"name", s.name}, {"locations", s.locations}, {"transitions", s.transitions}, {"millis", s.millis}});
    j["stages"] = stages;
    if (r.equivalence) {
        json e;
        e["equal"] = r.equivalence->equal;
        if (r.equivalence->counterexample) e["counterexample"] = counterexample_json(*r.equivalence->counterexample);
        j["equivalence"] = e;
    }
    return j.dump(2) + "\n";
}

}  // namespace tadet
