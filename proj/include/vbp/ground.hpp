#pragma once

// Instantiation of lifted schemas over a problem's objects, restricted to
// groundings whose preconditions are reachable in the delete relaxation.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "vbp/model.hpp"

namespace vbp {

using AtomId = std::uint32_t;

struct GroundOperator {
    std::string schema;            // schema name in the instantiated domain
    std::vector<std::string> args; // one per schema parameter
    std::vector<AtomId> pre;
    std::vector<AtomId> add;
    std::vector<AtomId> del;
    int cost = 1;

    std::string str() const {
        std::string s = schema;
        for (const auto& a : args) s += " " + a;
        return s;
    }
};

struct GroundTask {
    std::vector<Atom> atoms; // sorted
    std::vector<GroundOperator> operators;
    std::vector<AtomId> init; // sorted
    std::vector<AtomId> goal; // sorted

    std::optional<AtomId> find(const Atom& a) const {
        auto it = std::lower_bound(atoms.begin(), atoms.end(), a);
        if (it == atoms.end() || *it != a) return std::nullopt;
        return static_cast<AtomId>(it - atoms.begin());
    }

    AtomSet to_atoms(const std::vector<AtomId>& ids) const {
        AtomSet out;
        for (auto id : ids) out.insert(atoms[id]);
        return out;
    }

    GroundAction action(std::size_t op) const {
        const auto& o = operators.at(op);
        return GroundAction{o.schema, o.args, to_atoms(o.pre), to_atoms(o.add), to_atoms(o.del),
                            o.cost};
    }

    Plan make_plan(const std::vector<std::size_t>& ops) const {
        Plan p;
        for (auto op : ops) p.steps.push_back(action(op));
        return p;
    }
};

namespace detail {

/// Enumerates the type-consistent bindings of one schema whose preconditions
/// all lie in `reached`.
class BindingEnumerator {
public:
    BindingEnumerator(const ActionSchema& schema, const Problem& problem,
                      const std::map<std::string, std::vector<const Atom*>>& by_predicate)
        : schema_(schema), problem_(problem), by_predicate_(by_predicate) {
        for (const auto& p : schema.params) candidates_[p.name] = problem.objects_of_type(p.type);
        order_ = schema.pre;
        // Most selective literals first.
        std::stable_sort(order_.begin(), order_.end(), [&](const Literal& a, const Literal& b) {
            return extension(a) < extension(b);
        });
    }

    template <typename Fn>
    void for_each(Fn&& fn) {
        std::map<std::string, std::string> binding;
        match(0, binding, fn);
    }

private:
    std::size_t extension(const Literal& l) const {
        auto it = by_predicate_.find(l.predicate);
        return it == by_predicate_.end() ? 0 : it->second.size();
    }

    bool type_ok(const std::string& var, const std::string& obj) const {
        const auto& c = candidates_.at(var);
        return std::find(c.begin(), c.end(), obj) != c.end();
    }

    template <typename Fn>
    void match(std::size_t i, std::map<std::string, std::string>& binding, Fn& fn) {
        if (i == order_.size()) {
            enumerate_free(0, binding, fn);
            return;
        }
        const auto& lit = order_[i];
        auto it = by_predicate_.find(lit.predicate);
        if (it == by_predicate_.end()) return;
        for (const Atom* atom : it->second) {
            std::vector<std::string> newly;
            bool ok = true;
            for (std::size_t k = 0; k < lit.args.size() && ok; ++k) {
                const auto& t = lit.args[k];
                const auto& obj = atom->args[k];
                if (!t.variable) {
                    ok = t.name == obj;
                } else if (auto b = binding.find(t.name); b != binding.end()) {
                    ok = b->second == obj;
                } else if (type_ok(t.name, obj)) {
                    binding[t.name] = obj;
                    newly.push_back(t.name);
                } else {
                    ok = false;
                }
            }
            if (ok) match(i + 1, binding, fn);
            for (const auto& v : newly) binding.erase(v);
        }
    }

    template <typename Fn>
    void enumerate_free(std::size_t p, std::map<std::string, std::string>& binding, Fn& fn) {
        if (p == schema_.params.size()) {
            fn(binding);
            return;
        }
        const auto& var = schema_.params[p].name;
        if (binding.count(var)) {
            enumerate_free(p + 1, binding, fn);
            return;
        }
        for (const auto& obj : candidates_.at(var)) {
            binding[var] = obj;
            enumerate_free(p + 1, binding, fn);
        }
        binding.erase(var);
    }

    const ActionSchema& schema_;
    const Problem& problem_;
    const std::map<std::string, std::vector<const Atom*>>& by_predicate_;
    std::map<std::string, std::vector<std::string>> candidates_;
    std::vector<Literal> order_;
};

} // namespace detail

/// Grounds every schema of `d` over the objects of `p`, keeping exactly the
/// groundings whose preconditions are relaxed-reachable from the initial
/// state. Operators are ordered by (schema name, arguments).
inline GroundTask instantiate(const Domain& d, const Problem& p) {
    AtomSet reached = p.init;
    using Key = std::pair<std::string, std::vector<std::string>>;
    std::map<Key, GroundAction> actions;

    for (bool changed = true; changed;) {
        changed = false;
        std::map<std::string, std::vector<const Atom*>> by_predicate;
        for (const auto& a : reached) by_predicate[a.predicate].push_back(&a);
        AtomSet fresh;
        for (const auto& schema : d.actions) {
            detail::BindingEnumerator en(schema, p, by_predicate);
            en.for_each([&](const std::map<std::string, std::string>& binding) {
                std::vector<std::string> args;
                args.reserve(schema.params.size());
                for (const auto& prm : schema.params) args.push_back(binding.at(prm.name));
                Key key{schema.name, args};
                if (actions.count(key)) return;
                GroundAction g{schema.name, args, {}, {}, {}, 1};
                for (const auto& l : schema.pre) g.pre.insert(substitute(l, binding));
                for (const auto& l : schema.add) {
                    auto atom = substitute(l, binding);
                    if (!reached.count(atom)) fresh.insert(atom);
                    g.add.insert(std::move(atom));
                }
                for (const auto& l : schema.del) g.del.insert(substitute(l, binding));
                actions.emplace(std::move(key), std::move(g));
            });
        }
        if (!fresh.empty()) {
            reached.insert(fresh.begin(), fresh.end());
            changed = true;
        }
    }

    GroundTask task;
    AtomSet universe = reached;
    universe.insert(p.goal.begin(), p.goal.end());
    task.atoms.assign(universe.begin(), universe.end());
    auto ids = [&](const AtomSet& s, bool drop_unknown) {
        std::vector<AtomId> out;
        for (const auto& a : s) {
            auto id = task.find(a);
            if (id)
                out.push_back(*id);
            else if (!drop_unknown)
                throw ModelError("atom outside the universe: " + a.str());
        }
        return out;
    };
    task.init = ids(p.init, false);
    task.goal = ids(p.goal, false);
    task.operators.reserve(actions.size());
    for (auto& [key, g] : actions) {
        GroundOperator op;
        op.schema = g.schema;
        op.args = g.args;
        op.pre = ids(g.pre, false);
        op.add = ids(g.add, false);
        // Deletes of never-true atoms are irrelevant.
        op.del = ids(g.del, true);
        op.cost = g.cost;
        task.operators.push_back(std::move(op));
    }
    return task;
}

/// Least fixpoint of add-effect application from init, ignoring deletes.
inline std::vector<bool> relaxed_reachable(const GroundTask& task) {
    std::vector<bool> reached(task.atoms.size(), false);
    for (auto id : task.init) reached[id] = true;
    std::vector<bool> fired(task.operators.size(), false);
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < task.operators.size(); ++i) {
            if (fired[i]) continue;
            const auto& op = task.operators[i];
            if (!std::all_of(op.pre.begin(), op.pre.end(), [&](AtomId a) { return reached[a]; }))
                continue;
            fired[i] = true;
            for (auto a : op.add)
                if (!reached[a]) {
                    reached[a] = true;
                    changed = true;
                }
        }
    }
    return reached;
}

inline AtomSet relaxed_reachable_atoms(const GroundTask& task) {
    auto bits = relaxed_reachable(task);
    AtomSet out;
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) out.insert(task.atoms[i]);
    return out;
}

} // namespace vbp
