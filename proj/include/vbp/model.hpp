#pragma once

// Core STRIPS representation: predicates tagged with attribute groups,
// lifted action schemas, ground atoms/actions, plans and plan validation.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vbp {

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Group { required, elementary, spatial, device };

inline constexpr Group all_groups[] = {Group::required, Group::elementary, Group::spatial,
                                       Group::device};

inline std::string_view group_name(Group g) {
    switch (g) {
    case Group::required: return "required";
    case Group::elementary: return "elementary";
    case Group::spatial: return "spatial";
    case Group::device: return "device";
    }
    return "?";
}

/// Single-letter symbol used in view shorthand ("R+E").
inline char group_symbol(Group g) {
    switch (g) {
    case Group::required: return 'R';
    case Group::elementary: return 'E';
    case Group::spatial: return 'S';
    case Group::device: return 'D';
    }
    return '?';
}

inline std::optional<Group> group_from_name(std::string_view s) {
    for (Group g : all_groups)
        if (s == group_name(g)) return g;
    return std::nullopt;
}

inline std::optional<Group> group_from_symbol(std::string_view s) {
    if (s.size() != 1) return std::nullopt;
    for (Group g : all_groups)
        if (s[0] == group_symbol(g)) return g;
    return std::nullopt;
}

struct PredicateSchema {
    std::string name;
    std::vector<std::string> param_types;
    Group group = Group::elementary;
    std::string family;

    std::size_t arity() const { return param_types.size(); }
    bool operator==(const PredicateSchema&) const = default;
};

/// A variable (`?x`) or an object constant.
struct Term {
    std::string name;
    bool variable = false;

    static Term var(std::string n) { return {std::move(n), true}; }
    static Term constant(std::string n) { return {std::move(n), false}; }

    std::string str() const { return variable ? "?" + name : name; }
    auto operator<=>(const Term&) const = default;
};

/// Positive lifted literal; negation only exists as a delete effect.
struct Literal {
    std::string predicate;
    std::vector<Term> args;

    std::string str() const {
        std::string s = "(" + predicate;
        for (const auto& t : args) s += " " + t.str();
        return s + ")";
    }
    bool mentions(const std::string& var) const {
        return std::any_of(args.begin(), args.end(),
                           [&](const Term& t) { return t.variable && t.name == var; });
    }
    auto operator<=>(const Literal&) const = default;
};

struct Parameter {
    std::string name; // without the leading '?'
    std::string type;
    auto operator<=>(const Parameter&) const = default;
};

struct ActionSchema {
    std::string name;
    std::vector<Parameter> params;
    std::vector<Literal> pre;
    std::vector<Literal> add;
    std::vector<Literal> del;
    // Provenance. For an unmodified schema origin == name and binding is empty.
    std::string origin;
    std::map<std::string, std::string> binding; // origin parameter -> object

    const Parameter* find_param(const std::string& var) const {
        for (const auto& p : params)
            if (p.name == var) return &p;
        return nullptr;
    }
    bool operator==(const ActionSchema&) const = default;
};

/// Ground atom.
struct Atom {
    std::string predicate;
    std::vector<std::string> args;

    std::string str() const {
        std::string s = "(" + predicate;
        for (const auto& a : args) s += " " + a;
        return s + ")";
    }
    auto operator<=>(const Atom&) const = default;
};

using AtomSet = std::set<Atom>;

struct Domain {
    std::string name;
    std::vector<std::string> types;
    std::vector<PredicateSchema> predicates;
    std::vector<ActionSchema> actions;

    const PredicateSchema* find_predicate(std::string_view n) const {
        for (const auto& p : predicates)
            if (p.name == n) return &p;
        return nullptr;
    }
    const ActionSchema* find_action(std::string_view n) const {
        for (const auto& a : actions)
            if (a.name == n) return &a;
        return nullptr;
    }
    bool has_type(std::string_view t) const {
        return std::find(types.begin(), types.end(), t) != types.end();
    }
    std::set<std::string> predicate_names() const {
        std::set<std::string> out;
        for (const auto& p : predicates) out.insert(p.name);
        return out;
    }
    std::set<std::string> predicates_in(Group g) const {
        std::set<std::string> out;
        for (const auto& p : predicates)
            if (p.group == g) out.insert(p.name);
        return out;
    }
    bool operator==(const Domain&) const = default;
};

/// An object may belong to several (flat) types.
struct Object {
    std::string name;
    std::vector<std::string> types;

    bool has_type(std::string_view t) const {
        return std::find(types.begin(), types.end(), t) != types.end();
    }
    bool operator==(const Object&) const = default;
};

struct Problem {
    std::string name;
    std::string domain_name;
    std::vector<Object> objects;
    AtomSet init;
    AtomSet goal;

    const Object* find_object(std::string_view n) const {
        for (const auto& o : objects)
            if (o.name == n) return &o;
        return nullptr;
    }
    std::vector<std::string> objects_of_type(std::string_view t) const {
        std::vector<std::string> out;
        for (const auto& o : objects)
            if (o.has_type(t)) out.push_back(o.name);
        return out;
    }
    bool operator==(const Problem&) const = default;
};

struct GroundAction {
    std::string schema;
    std::vector<std::string> args; // one per schema parameter
    AtomSet pre;
    AtomSet add;
    AtomSet del;
    int cost = 1;

    std::string str() const {
        std::string s = schema;
        for (const auto& a : args) s += " " + a;
        return s;
    }
};

struct Plan {
    std::vector<GroundAction> steps;

    int cost() const {
        int c = 0;
        for (const auto& s : steps) c += s.cost;
        return c;
    }
    std::size_t size() const { return steps.size(); }
    bool empty() const { return steps.empty(); }
};

// ---------------------------------------------------------------------------
// Checks

/// Throws ModelError if `atom` does not match a declared predicate, or if its
/// arguments are not objects of the declared types.
inline void check_atom(const Domain& d, const Problem& p, const Atom& atom) {
    const auto* pred = d.find_predicate(atom.predicate);
    if (!pred) throw ModelError("undeclared predicate in " + atom.str());
    if (pred->arity() != atom.args.size())
        throw ModelError("arity mismatch in " + atom.str() + ": expected " +
                         std::to_string(pred->arity()));
    for (std::size_t i = 0; i < atom.args.size(); ++i) {
        const auto* obj = p.find_object(atom.args[i]);
        if (!obj) throw ModelError("unknown object '" + atom.args[i] + "' in " + atom.str());
        if (!obj->has_type(pred->param_types[i]))
            throw ModelError("object '" + atom.args[i] + "' is not of type '" +
                             pred->param_types[i] + "' in " + atom.str());
    }
}

inline void check_schema(const Domain& d, const ActionSchema& a) {
    auto check_lits = [&](const std::vector<Literal>& lits) {
        for (const auto& l : lits) {
            const auto* pred = d.find_predicate(l.predicate);
            if (!pred)
                throw ModelError("action '" + a.name + "': undeclared predicate " + l.str());
            if (pred->arity() != l.args.size())
                throw ModelError("action '" + a.name + "': arity mismatch in " + l.str());
            for (const auto& t : l.args)
                if (t.variable && !a.find_param(t.name))
                    throw ModelError("action '" + a.name + "': variable ?" + t.name +
                                     " is not a parameter");
        }
    };
    check_lits(a.pre);
    check_lits(a.add);
    check_lits(a.del);
    for (const auto& p : a.params)
        if (!d.has_type(p.type))
            throw ModelError("action '" + a.name + "': undeclared type '" + p.type + "'");
    for (const auto& l : a.add)
        if (std::find(a.del.begin(), a.del.end(), l) != a.del.end())
            throw ModelError("action '" + a.name + "': " + l.str() + " is both added and deleted");
}

inline void check_problem(const Domain& d, const Problem& p) {
    for (const auto& o : p.objects)
        for (const auto& t : o.types)
            if (!d.has_type(t))
                throw ModelError("object '" + o.name + "' has undeclared type '" + t + "'");
    for (const auto& a : p.init) check_atom(d, p, a);
    for (const auto& a : p.goal) check_atom(d, p, a);
}

// ---------------------------------------------------------------------------
// Instantiation and STRIPS semantics

inline Atom substitute(const Literal& lit, const std::map<std::string, std::string>& binding) {
    Atom atom{lit.predicate, {}};
    atom.args.reserve(lit.args.size());
    for (const auto& t : lit.args) {
        if (!t.variable) {
            atom.args.push_back(t.name);
            continue;
        }
        auto it = binding.find(t.name);
        if (it == binding.end()) throw ModelError("unbound variable ?" + t.name + " in " + lit.str());
        atom.args.push_back(it->second);
    }
    return atom;
}

/// Grounds `schema` with one object per parameter (no type checking).
inline GroundAction instantiate_action(const ActionSchema& schema,
                                       const std::vector<std::string>& args) {
    if (args.size() != schema.params.size())
        throw ModelError("action '" + schema.name + "' expects " +
                         std::to_string(schema.params.size()) + " arguments, got " +
                         std::to_string(args.size()));
    std::map<std::string, std::string> binding;
    for (std::size_t i = 0; i < args.size(); ++i) binding[schema.params[i].name] = args[i];
    GroundAction g{schema.name, args, {}, {}, {}, 1};
    for (const auto& l : schema.pre) g.pre.insert(substitute(l, binding));
    for (const auto& l : schema.add) g.add.insert(substitute(l, binding));
    for (const auto& l : schema.del) g.del.insert(substitute(l, binding));
    return g;
}

/// Type-checked instantiation against a problem's objects.
inline GroundAction instantiate_action(const ActionSchema& schema,
                                       const std::vector<std::string>& args, const Problem& p) {
    auto g = instantiate_action(schema, args);
    for (std::size_t i = 0; i < args.size(); ++i) {
        const auto* obj = p.find_object(args[i]);
        if (!obj) throw ModelError("unknown object '" + args[i] + "' in " + g.str());
        if (!obj->has_type(schema.params[i].type))
            throw ModelError("object '" + args[i] + "' is not of type '" + schema.params[i].type +
                             "' in " + g.str());
    }
    return g;
}

inline bool applicable(const AtomSet& state, const GroundAction& a) {
    return std::includes(state.begin(), state.end(), a.pre.begin(), a.pre.end());
}

inline AtomSet apply(const AtomSet& state, const GroundAction& a) {
    if (!applicable(state, a)) throw ModelError("action not applicable: " + a.str());
    AtomSet next;
    std::set_difference(state.begin(), state.end(), a.del.begin(), a.del.end(),
                        std::inserter(next, next.end()));
    next.insert(a.add.begin(), a.add.end());
    return next;
}

struct ValidationReport {
    bool valid = false;
    std::optional<std::size_t> failed_step; // unset when every step applied
    std::vector<Atom> missing;              // missing preconditions, or missing goal atoms
    std::string message;

    explicit operator bool() const { return valid; }
};

/// Re-instantiates every step from the domain by name and arguments, then
/// executes the plan from the initial state.
inline ValidationReport validate(const Domain& d, const Problem& p, const Plan& plan) {
    ValidationReport report;
    AtomSet state = p.init;
    for (std::size_t i = 0; i < plan.steps.size(); ++i) {
        const auto& step = plan.steps[i];
        const auto* schema = d.find_action(step.schema);
        if (!schema) {
            report.failed_step = i;
            report.message = "unknown action '" + step.schema + "'";
            return report;
        }
        GroundAction g;
        try {
            g = instantiate_action(*schema, step.args, p);
        } catch (const ModelError& e) {
            report.failed_step = i;
            report.message = e.what();
            return report;
        }
        if (!applicable(state, g)) {
            report.failed_step = i;
            std::set_difference(g.pre.begin(), g.pre.end(), state.begin(), state.end(),
                                std::back_inserter(report.missing));
            report.message = "step " + std::to_string(i) + " (" + g.str() +
                             ") is not applicable";
            return report;
        }
        state = vbp::apply(state, g);
    }
    std::set_difference(p.goal.begin(), p.goal.end(), state.begin(), state.end(),
                        std::back_inserter(report.missing));
    if (!report.missing.empty()) {
        report.message = "goal not reached";
        return report;
    }
    report.valid = true;
    return report;
}

} // namespace vbp
