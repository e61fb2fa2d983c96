#pragma once

// View-based planning. The problem is solved once per view, each view keeping
// a growing subset of predicates. Between views the plan found so far
// partially grounds the original schemas it used, schemas that never reached
// a solver are reintroduced whole, and the rest are dropped.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vbp/ground.hpp"
#include "vbp/model.hpp"
#include "vbp/parser.hpp"
#include "vbp/search.hpp"

namespace vbp {

/// Per-view solver assignment, e.g. "OSO".
class PlannerMix {
public:
    PlannerMix() = default;
    explicit PlannerMix(std::vector<SolverKind> kinds) : kinds_(std::move(kinds)) {}

    static PlannerMix parse(std::string_view label) {
        if (label.empty()) throw std::invalid_argument("empty planner mix");
        std::vector<SolverKind> kinds;
        for (char c : label) {
            auto k = solver_from_symbol(c);
            if (!k) throw std::invalid_argument("invalid planner mix '" + std::string(label) + "'");
            kinds.push_back(*k);
        }
        return PlannerMix(std::move(kinds));
    }

    std::size_t size() const { return kinds_.size(); }
    SolverKind operator[](std::size_t i) const { return kinds_.at(i); }
    std::string label() const {
        std::string s;
        for (auto k : kinds_) s += solver_symbol(k);
        return s;
    }
    bool operator==(const PlannerMix&) const = default;

private:
    std::vector<SolverKind> kinds_;
};

// ---------------------------------------------------------------------------
// FILTER

/// Restricts a schema to the predicates in `keep`. Parameters that only
/// occurred in dropped literals are removed. Returns nullopt when no effect
/// survives.
inline std::optional<ActionSchema> filter_action(const ActionSchema& a,
                                                 const std::set<std::string>& keep) {
    ActionSchema out;
    out.name = a.name;
    out.origin = a.origin;
    out.binding = a.binding;
    auto kept = [&](const std::vector<Literal>& lits) {
        std::vector<Literal> r;
        for (const auto& l : lits)
            if (keep.count(l.predicate)) r.push_back(l);
        return r;
    };
    out.pre = kept(a.pre);
    out.add = kept(a.add);
    out.del = kept(a.del);
    if (out.add.empty() && out.del.empty()) return std::nullopt;

    auto mentioned = [](const std::vector<Literal>& lits, const std::string& var) {
        return std::any_of(lits.begin(), lits.end(), [&](const Literal& l) { return l.mentions(var); });
    };
    for (const auto& p : a.params) {
        bool used_before = mentioned(a.pre, p.name) || mentioned(a.add, p.name) || mentioned(a.del, p.name);
        bool used_now = mentioned(out.pre, p.name) || mentioned(out.add, p.name) ||
                        mentioned(out.del, p.name);
        if (used_now || !used_before) out.params.push_back(p);
    }
    return out;
}

/// A filtered planning task: the domain holds only the view's predicates and
/// the surviving schemas.
struct ViewTask {
    Domain domain;
    Problem problem;
};

namespace detail {

inline bool same_except_name(const ActionSchema& a, const ActionSchema& b) {
    return a.params == b.params && a.pre == b.pre && a.add == b.add && a.del == b.del &&
           a.origin == b.origin && a.binding == b.binding;
}

inline AtomSet restrict_atoms(const AtomSet& atoms, const std::set<std::string>& keep) {
    AtomSet out;
    for (const auto& a : atoms)
        if (keep.count(a.predicate)) out.insert(a);
    return out;
}

} // namespace detail

/// Filters init, goal and the schemas of `d`. Every required-group predicate
/// must be in `keep`.
inline ViewTask filter_problem(const Domain& d, const Problem& p, const std::set<std::string>& keep) {
    for (const auto& r : d.predicates_in(Group::required))
        if (!keep.count(r)) throw ModelError("view is missing required predicate '" + r + "'");
    ViewTask t;
    t.domain.name = d.name;
    t.domain.types = d.types;
    for (const auto& pred : d.predicates)
        if (keep.count(pred.name)) t.domain.predicates.push_back(pred);
    for (const auto& a : d.actions) {
        auto f = filter_action(a, keep);
        if (!f) continue;
        bool dup = std::any_of(t.domain.actions.begin(), t.domain.actions.end(),
                               [&](const ActionSchema& b) { return detail::same_except_name(*f, b); });
        if (!dup) t.domain.actions.push_back(std::move(*f));
    }
    t.problem.name = p.name;
    t.problem.domain_name = p.domain_name;
    t.problem.objects = p.objects;
    t.problem.init = detail::restrict_atoms(p.init, keep);
    t.problem.goal = detail::restrict_atoms(p.goal, keep);
    return t;
}

// ---------------------------------------------------------------------------
// MODIFY

/// Binding of the origin schema's parameters established by a plan step.
inline std::map<std::string, std::string> origin_binding(const ActionSchema& schema,
                                                         const GroundAction& step) {
    if (step.args.size() != schema.params.size())
        throw ModelError("step '" + step.str() + "' does not match schema '" + schema.name + "'");
    auto b = schema.binding;
    for (std::size_t i = 0; i < schema.params.size(); ++i) b[schema.params[i].name] = step.args[i];
    return b;
}

/// Copy of `a` with the variables in `binding` replaced by constants.
inline ActionSchema bind_schema(const ActionSchema& a, const std::map<std::string, std::string>& binding,
                                std::string name) {
    ActionSchema out;
    out.name = std::move(name);
    out.origin = a.origin;
    out.binding = a.binding;
    for (const auto& [k, v] : binding) out.binding[k] = v;
    for (const auto& p : a.params)
        if (!binding.count(p.name)) out.params.push_back(p);
    auto subst = [&](const std::vector<Literal>& lits) {
        std::vector<Literal> r;
        for (auto l : lits) {
            for (auto& t : l.args)
                if (t.variable)
                    if (auto it = binding.find(t.name); it != binding.end()) t = Term::constant(it->second);
            r.push_back(std::move(l));
        }
        return r;
    };
    out.pre = subst(a.pre);
    out.add = subst(a.add);
    out.del = subst(a.del);
    return out;
}

/// Builds the schema set for the next view from the original schemas, the
/// plan of the current view (expressed over `view_domain`'s schemas) and the
/// origins already handed to a solver.
inline std::vector<ActionSchema> modify(const std::vector<ActionSchema>& original,
                                        const Domain& view_domain, const Plan& plan,
                                        const std::set<std::string>& considered) {
    std::map<std::string, std::set<std::map<std::string, std::string>>> bindings;
    for (const auto& step : plan.steps) {
        const auto* schema = view_domain.find_action(step.schema);
        if (!schema) throw ModelError("plan references unknown schema '" + step.schema + "'");
        bool known = std::any_of(original.begin(), original.end(),
                                 [&](const ActionSchema& a) { return a.name == schema->origin; });
        if (!known) throw ModelError("plan step '" + step.str() + "' has unknown origin '" + schema->origin + "'");
        bindings[schema->origin].insert(origin_binding(*schema, step));
    }
    std::vector<ActionSchema> out;
    for (const auto& a : original) {
        if (auto it = bindings.find(a.name); it != bindings.end()) {
            std::size_t k = 0;
            for (const auto& b : it->second)
                out.push_back(bind_schema(a, b, a.name + "__" + std::to_string(k++)));
        }
        if (!considered.count(a.name)) out.push_back(a);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Orchestration

struct ViewRecord {
    std::size_t view = 0; // 1-based
    SolverKind kind = SolverKind::optimal;
    std::size_t schemas = 0;
    std::size_t ground_actions = 0;
    Outcome outcome = Outcome::unsolvable;
    Plan plan; // over the view's schemas
    Domain domain;
    SearchStats stats;
    double seconds = 0.0;
};

struct VbpRun {
    std::vector<ViewRecord> views;
    Outcome outcome = Outcome::unsolvable;
    std::optional<std::size_t> failed_view; // 1-based
    Plan plan;                              // over the original schemas
    std::set<std::string> considered;
    double seconds = 0.0;

    bool solved() const { return outcome == Outcome::plan; }
    int cost() const { return plan.cost(); }
};

/// Rewrites a plan over partially ground schemas into the original schemas.
/// Fails if a step leaves an origin parameter unbound.
inline Plan to_original_plan(const Plan& plan, const Domain& view_domain, const Domain& original) {
    Plan out;
    for (const auto& step : plan.steps) {
        const auto* schema = view_domain.find_action(step.schema);
        if (!schema) throw ModelError("plan references unknown schema '" + step.schema + "'");
        const auto* orig = original.find_action(schema->origin);
        if (!orig) throw ModelError("unknown origin '" + schema->origin + "'");
        auto b = origin_binding(*schema, step);
        std::vector<std::string> args;
        for (const auto& p : orig->params) {
            auto it = b.find(p.name);
            if (it == b.end())
                throw ModelError("step '" + step.str() + "' leaves ?" + p.name + " of '" + orig->name + "' unbound");
            args.push_back(it->second);
        }
        out.steps.push_back(instantiate_action(*orig, args));
    }
    return out;
}

/// Step rendering used in reports: origin name followed by every origin
/// parameter bound so far, in origin parameter order.
inline std::string describe_step(const GroundAction& step, const Domain& view_domain,
                                 const Domain& original) {
    const auto* schema = view_domain.find_action(step.schema);
    if (!schema) return step.str();
    const auto* orig = original.find_action(schema->origin);
    if (!orig) return step.str();
    auto b = origin_binding(*schema, step);
    std::string s = orig->name;
    for (const auto& p : orig->params)
        if (auto it = b.find(p.name); it != b.end()) s += " " + it->second;
    return s;
}

inline VbpRun run(const Domain& d, const Problem& p, const ViewSpec& views, const PlannerMix& mix,
                  const SolveOptions& per_view = {}) {
    if (mix.size() != views.size())
        throw std::invalid_argument("planner mix '" + mix.label() + "' has " + std::to_string(mix.size()) +
                                    " entries for " + std::to_string(views.size()) + " views");
    detail::Clock clock;
    VbpRun result;
    const auto required = d.predicates_in(Group::required);
    Domain current = d; // A'

    for (std::size_t n = 0; n < views.size(); ++n) {
        detail::Clock view_clock;
        auto keep = views[n];
        keep.insert(required.begin(), required.end());

        ViewRecord rec;
        rec.view = n + 1;
        rec.kind = mix[n];
        auto filtered = filter_problem(current, p, keep);
        rec.schemas = filtered.domain.actions.size();
        auto task = instantiate(filtered.domain, filtered.problem);
        rec.ground_actions = task.operators.size();
        auto solved = solve(task, mix[n], per_view);
        rec.outcome = solved.outcome;
        rec.plan = solved.plan;
        rec.stats = solved.stats;

        for (const auto& a : filtered.domain.actions) result.considered.insert(a.origin);
        rec.seconds = view_clock.elapsed();
        rec.domain = std::move(filtered.domain);
        result.views.push_back(std::move(rec));
        const auto& last = result.views.back();

        if (last.outcome != Outcome::plan) {
            result.outcome = last.outcome;
            result.failed_view = n + 1;
            result.seconds = clock.elapsed();
            return result;
        }
        if (n + 1 == views.size()) {
            result.plan = to_original_plan(last.plan, last.domain, d);
            break;
        }
        current.actions = modify(d.actions, last.domain, last.plan, result.considered);
    }
    result.outcome = Outcome::plan;
    result.seconds = clock.elapsed();
    return result;
}

} // namespace vbp
