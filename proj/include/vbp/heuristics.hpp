#pragma once

// Delete-relaxation heuristics over a bit-packed state representation.
//
// h_add sums achiever costs and drives greedy satisficing search. h_max takes
// the maximum and is admissible; landmark-cut builds on it and is the
// heuristic of the optimal A* search.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <vector>

#include "vbp/ground.hpp"

namespace vbp {

class HeuristicValue {
public:
    static constexpr int infinite_value = std::numeric_limits<int>::max();

    constexpr HeuristicValue() = default;
    constexpr explicit HeuristicValue(int v) : value_(v) {}
    static constexpr HeuristicValue infinite() { return HeuristicValue(infinite_value); }

    constexpr bool is_infinite() const { return value_ == infinite_value; }
    constexpr int value() const { return value_; }

    constexpr auto operator<=>(const HeuristicValue&) const = default;

private:
    int value_ = 0;
};

/// A ground task with static atoms stripped out and the remaining (fluent)
/// atoms packed into 64-bit words.
class CompiledTask {
public:
    struct Op {
        std::vector<std::uint32_t> pre;
        std::vector<std::uint32_t> add;
        std::vector<std::uint32_t> del;
        int cost = 1;
    };

    /// With `strip_static`, atoms no operator adds or deletes are dropped
    /// from the state and assumed to keep their initial truth value.
    /// With `prune_irrelevant`, operators that add no atom backward-reachable
    /// from the goal are disabled and atoms outside that set are not tracked.
    /// Such operators can only delete relevant atoms, so dropping them keeps
    /// solvability and optimal plan cost.
    explicit CompiledTask(const GroundTask& task, bool strip_static = true, bool prune_irrelevant = false)
        : atoms_(task.atoms.size()) {
        std::vector<bool> relevant(task.atoms.size(), !prune_irrelevant);
        std::vector<bool> op_relevant(task.operators.size(), !prune_irrelevant);
        if (prune_irrelevant) {
            for (auto a : task.goal) relevant[a] = true;
            for (bool changed = true; changed;) {
                changed = false;
                for (std::size_t i = 0; i < task.operators.size(); ++i) {
                    if (op_relevant[i]) continue;
                    const auto& op = task.operators[i];
                    if (!std::any_of(op.add.begin(), op.add.end(), [&](AtomId a) { return relevant[a]; }))
                        continue;
                    op_relevant[i] = true;
                    changed = true;
                    for (auto a : op.pre) relevant[a] = true;
                }
            }
        }
        std::vector<bool> fluent(task.atoms.size(), !strip_static);
        if (prune_irrelevant)
            for (std::size_t a = 0; a < fluent.size(); ++a) fluent[a] = fluent[a] && relevant[a];
        for (std::size_t i = 0; i < task.operators.size(); ++i) {
            if (!op_relevant[i]) continue;
            for (auto a : task.operators[i].add) fluent[a] = fluent[a] || relevant[a];
            for (auto a : task.operators[i].del) fluent[a] = fluent[a] || relevant[a];
        }
        std::vector<bool> in_init(task.atoms.size(), false);
        for (auto a : task.init) in_init[a] = true;
        var_of_.assign(task.atoms.size(), npos);
        for (std::size_t a = 0; a < task.atoms.size(); ++a)
            if (fluent[a] && relevant[a]) {
                var_of_[a] = static_cast<std::uint32_t>(atom_of_.size());
                atom_of_.push_back(static_cast<AtomId>(a));
            }
        words_ = std::max<std::size_t>(1, (atom_of_.size() + 63) / 64);

        init_.assign(words_, 0);
        for (auto a : task.init)
            if (var_of_[a] != npos) set(init_.data(), var_of_[a]);

        for (auto a : task.goal) {
            if (var_of_[a] != npos)
                goal_.push_back(var_of_[a]);
            else if (!in_init[a])
                goal_impossible_ = true;
        }

        ops_.reserve(task.operators.size());
        for (std::size_t i = 0; i < task.operators.size(); ++i) {
            const auto& op = task.operators[i];
            Op c;
            c.cost = op.cost;
            bool possible = op_relevant[i];
            for (auto a : op.pre) {
                if (var_of_[a] != npos)
                    c.pre.push_back(var_of_[a]);
                else if (!in_init[a])
                    possible = false;
            }
            for (auto a : op.add)
                if (var_of_[a] != npos) c.add.push_back(var_of_[a]);
            for (auto a : op.del)
                if (var_of_[a] != npos) c.del.push_back(var_of_[a]);
            // Keep indices aligned with the ground task; impossible ops get an
            // unsatisfiable marker instead of being erased.
            impossible_.push_back(!possible);
            ops_.push_back(std::move(c));
        }

        pre_of_.assign(atom_of_.size(), {});
        for (std::size_t i = 0; i < ops_.size(); ++i) {
            if (impossible_[i]) continue;
            for (auto v : ops_[i].pre) pre_of_[v].push_back(static_cast<std::uint32_t>(i));
        }
    }

    static constexpr std::uint32_t npos = std::numeric_limits<std::uint32_t>::max();

    std::size_t words() const { return words_; }
    std::size_t num_vars() const { return atom_of_.size(); }
    std::size_t num_ops() const { return ops_.size(); }
    const Op& op(std::size_t i) const { return ops_[i]; }
    bool impossible(std::size_t i) const { return impossible_[i]; }
    const std::vector<std::uint32_t>& ops_with_pre(std::uint32_t var) const { return pre_of_[var]; }
    const std::vector<std::uint64_t>& init() const { return init_; }
    const std::vector<std::uint32_t>& goal() const { return goal_; }
    bool goal_impossible() const { return goal_impossible_; }
    AtomId atom_of(std::uint32_t var) const { return atom_of_[var]; }
    std::uint32_t var_of(AtomId a) const { return var_of_[a]; }

    static bool test(const std::uint64_t* s, std::uint32_t v) { return (s[v >> 6] >> (v & 63)) & 1u; }
    static void set(std::uint64_t* s, std::uint32_t v) { s[v >> 6] |= std::uint64_t{1} << (v & 63); }
    static void reset(std::uint64_t* s, std::uint32_t v) { s[v >> 6] &= ~(std::uint64_t{1} << (v & 63)); }

    bool applicable(const std::uint64_t* s, std::size_t i) const {
        if (impossible_[i]) return false;
        for (auto v : ops_[i].pre)
            if (!test(s, v)) return false;
        return true;
    }

    void apply(const std::uint64_t* s, std::size_t i, std::uint64_t* out) const {
        std::copy(s, s + words_, out);
        for (auto v : ops_[i].del) reset(out, v);
        for (auto v : ops_[i].add) set(out, v);
    }

    bool is_goal(const std::uint64_t* s) const {
        if (goal_impossible_) return false;
        for (auto v : goal_)
            if (!test(s, v)) return false;
        return true;
    }

    /// Packs a state given as atom ids of the source ground task.
    std::vector<std::uint64_t> pack(const std::vector<AtomId>& atoms) const {
        std::vector<std::uint64_t> s(words_, 0);
        for (auto a : atoms)
            if (a < var_of_.size() && var_of_[a] != npos) set(s.data(), var_of_[a]);
        return s;
    }

private:
    std::size_t atoms_;
    std::size_t words_ = 1;
    std::vector<std::uint32_t> var_of_;
    std::vector<AtomId> atom_of_;
    std::vector<std::uint64_t> init_;
    std::vector<std::uint32_t> goal_;
    bool goal_impossible_ = false;
    std::vector<Op> ops_;
    std::vector<bool> impossible_;
    std::vector<std::vector<std::uint32_t>> pre_of_;
};

enum class RelaxationKind { add, max };

/// Generalised Dijkstra over relaxed facts. Holds scratch buffers, so one
/// evaluator per search.
class RelaxationEvaluator {
public:
    explicit RelaxationEvaluator(const CompiledTask& task)
        : task_(task), fact_cost_(task.num_vars()), unsatisfied_(task.num_ops()),
          op_cost_(task.num_ops()), supporter_(task.num_vars()) {
        for (std::size_t i = 0; i < task.num_ops(); ++i)
            if (!task.impossible(i) && task.op(i).pre.empty()) no_pre_.push_back(i);
        is_goal_.assign(task.num_vars(), false);
        for (auto g : task.goal()) is_goal_[g] = true;
    }

    HeuristicValue evaluate(const std::uint64_t* state, RelaxationKind kind) {
        if (task_.goal_impossible()) return HeuristicValue::infinite();
        constexpr std::int64_t inf = std::numeric_limits<std::int64_t>::max();
        std::fill(fact_cost_.begin(), fact_cost_.end(), inf);
        for (std::size_t i = 0; i < task_.num_ops(); ++i) {
            unsatisfied_[i] = static_cast<int>(task_.op(i).pre.size());
            op_cost_[i] = 0;
        }
        using Entry = std::pair<std::int64_t, std::uint32_t>;
        std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
        for (std::uint32_t v = 0; v < task_.num_vars(); ++v)
            if (CompiledTask::test(state, v)) {
                fact_cost_[v] = 0;
                queue.push({0, v});
            }
        auto fire = [&](std::size_t i) {
            const auto& op = task_.op(i);
            std::int64_t c = op_cost_[i] + op.cost;
            for (auto v : op.add)
                if (c < fact_cost_[v]) {
                    fact_cost_[v] = c;
                    supporter_[v] = static_cast<std::uint32_t>(i);
                    queue.push({c, v});
                }
        };
        std::fill(supporter_.begin(), supporter_.end(), none);
        for (auto i : no_pre_) fire(i);

        std::size_t goals_left = task_.goal().size();
        std::int64_t total = 0;
        std::int64_t maximum = 0;
        while (!queue.empty() && goals_left > 0) {
            auto [c, v] = queue.top();
            queue.pop();
            if (c > fact_cost_[v]) continue;
            if (is_goal_[v]) {
                --goals_left;
                total += c;
                maximum = std::max(maximum, c);
            }
            for (auto i : task_.ops_with_pre(v)) {
                if (kind == RelaxationKind::add)
                    op_cost_[i] += c;
                else
                    op_cost_[i] = std::max(op_cost_[i], c);
                if (--unsatisfied_[i] == 0) fire(i);
            }
        }
        if (goals_left > 0) return HeuristicValue::infinite();
        std::int64_t h = kind == RelaxationKind::add ? total : maximum;
        return HeuristicValue(static_cast<int>(std::min<std::int64_t>(h, HeuristicValue::infinite_value - 1)));
    }

    /// Operators of the relaxed plan of the last evaluated state that are
    /// applicable in it. Only meaningful after a finite evaluation.
    std::vector<std::uint32_t> preferred() {
        std::vector<std::uint32_t> out;
        std::vector<bool> seen_fact(task_.num_vars(), false);
        std::vector<bool> seen_op(task_.num_ops(), false);
        std::vector<std::uint32_t> stack(task_.goal().begin(), task_.goal().end());
        while (!stack.empty()) {
            auto v = stack.back();
            stack.pop_back();
            if (seen_fact[v]) continue;
            seen_fact[v] = true;
            auto i = supporter_[v];
            if (i == none || fact_cost_[v] == 0 || seen_op[i]) continue;
            seen_op[i] = true;
            bool applicable = true;
            for (auto p : task_.op(i).pre) {
                if (fact_cost_[p] != 0) applicable = false;
                stack.push_back(p);
            }
            if (applicable) out.push_back(i);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    static constexpr std::uint32_t none = std::numeric_limits<std::uint32_t>::max();

    const CompiledTask& task_;
    std::vector<std::int64_t> fact_cost_;
    std::vector<int> unsatisfied_;
    std::vector<std::int64_t> op_cost_;
    std::vector<std::size_t> no_pre_;
    std::vector<bool> is_goal_;
    std::vector<std::uint32_t> supporter_;
};

/// Landmark-cut heuristic: repeatedly computes h_max, cuts the justification
/// graph between the state and the goal and charges the cheapest operator in
/// the cut. Admissible and at least as informed as h_max.
class LandmarkCutEvaluator {
public:
    explicit LandmarkCutEvaluator(const CompiledTask& task)
        : task_(task), fact_cost_(task.num_vars()), unsatisfied_(task.num_ops()), op_cost_(task.num_ops()),
          remaining_(task.num_ops()), pcf_(task.num_ops()), reached_op_(task.num_ops()),
          in_cut_(task.num_ops()), goal_zone_(task.num_vars()), before_goal_(task.num_vars()),
          adders_(task.num_vars()) {
        for (std::size_t i = 0; i < task.num_ops(); ++i) {
            if (task.impossible(i)) continue;
            if (task.op(i).pre.empty()) no_pre_.push_back(i);
            for (auto v : task.op(i).add) adders_[v].push_back(static_cast<std::uint32_t>(i));
        }
    }

    HeuristicValue evaluate(const std::uint64_t* state) {
        if (task_.goal_impossible()) return HeuristicValue::infinite();
        if (task_.goal().empty()) return HeuristicValue(0);
        for (std::size_t i = 0; i < task_.num_ops(); ++i) remaining_[i] = task_.op(i).cost;
        std::int64_t h = 0;
        auto goal_cost = compute_hmax(state);
        if (goal_cost == inf) return HeuristicValue::infinite();
        while (goal_cost > 0) {

            // Goal zone: facts with a zero-cost justification path to the goal.
            std::fill(goal_zone_.begin(), goal_zone_.end(), 0);
            auto& stack = stack_;
            stack.assign(1, goal_pcf_);
            goal_zone_[goal_pcf_] = 1;
            while (!stack.empty()) {
                auto f = stack.back();
                stack.pop_back();
                for (auto i : adders_[f]) {
                    if (!reached_op_[i] || remaining_[i] != 0 || pcf_[i] == none) continue;
                    if (!goal_zone_[pcf_[i]]) {
                        goal_zone_[pcf_[i]] = 1;
                        stack.push_back(pcf_[i]);
                    }
                }
            }

            // Facts reachable from the state without entering the goal zone;
            // operators leaving that region into the goal zone form the cut.
            std::fill(before_goal_.begin(), before_goal_.end(), 0);
            std::fill(in_cut_.begin(), in_cut_.end(), 0);
            auto& cut = cut_;
            cut.clear();
            auto visit = [&](std::size_t i) {
                for (auto a : task_.op(i).add) {
                    if (goal_zone_[a]) {
                        if (!in_cut_[i]) {
                            in_cut_[i] = 1;
                            cut.push_back(static_cast<std::uint32_t>(i));
                        }
                    } else if (!before_goal_[a]) {
                        before_goal_[a] = 1;
                        stack.push_back(a);
                    }
                }
            };
            for (std::uint32_t v = 0; v < task_.num_vars(); ++v)
                if (CompiledTask::test(state, v) && !before_goal_[v]) {
                    before_goal_[v] = 1;
                    stack.push_back(v);
                }
            for (auto i : no_pre_)
                if (reached_op_[i]) visit(i);
            while (!stack.empty()) {
                auto f = stack.back();
                stack.pop_back();
                for (auto i : task_.ops_with_pre(f))
                    if (reached_op_[i] && pcf_[i] == f) visit(i);
            }
            if (cut.empty()) return HeuristicValue(static_cast<int>(h + goal_cost));
            std::int64_t m = inf;
            for (auto i : cut) m = std::min(m, remaining_[i]);
            for (auto i : cut) remaining_[i] -= m;
            h += m;
            update_hmax(cut);
            goal_cost = goal_hmax();
        }
        return HeuristicValue(static_cast<int>(std::min<std::int64_t>(h, HeuristicValue::infinite_value - 1)));
    }

private:
    static constexpr std::int64_t inf = std::numeric_limits<std::int64_t>::max();
    static constexpr std::uint32_t none = std::numeric_limits<std::uint32_t>::max();

    using Entry = std::pair<std::int64_t, std::uint32_t>;

    void push(std::int64_t c, std::uint32_t v) {
        heap_.push_back({c, v});
        std::push_heap(heap_.begin(), heap_.end(), std::greater<>{});
    }
    Entry pop() {
        std::pop_heap(heap_.begin(), heap_.end(), std::greater<>{});
        auto e = heap_.back();
        heap_.pop_back();
        return e;
    }

    std::int64_t compute_hmax(const std::uint64_t* state) {
        std::fill(fact_cost_.begin(), fact_cost_.end(), inf);
        std::fill(reached_op_.begin(), reached_op_.end(), 0);
        for (std::size_t i = 0; i < task_.num_ops(); ++i) {
            unsatisfied_[i] = static_cast<int>(task_.op(i).pre.size());
            op_cost_[i] = 0;
            pcf_[i] = none;
        }
        heap_.clear();
        for (std::uint32_t v = 0; v < task_.num_vars(); ++v)
            if (CompiledTask::test(state, v)) {
                fact_cost_[v] = 0;
                push(0, v);
            }
        auto fire = [&](std::size_t i) {
            reached_op_[i] = 1;
            std::int64_t c = op_cost_[i] + remaining_[i];
            for (auto v : task_.op(i).add)
                if (c < fact_cost_[v]) {
                    fact_cost_[v] = c;
                    push(c, v);
                }
        };
        for (auto i : no_pre_) fire(i);
        while (!heap_.empty()) {
            auto [c, v] = pop();
            if (c > fact_cost_[v]) continue;
            for (auto i : task_.ops_with_pre(v)) {
                // Facts settle in nondecreasing cost order, so the last
                // precondition to settle is a most expensive one.
                op_cost_[i] = c;
                pcf_[i] = v;
                if (--unsatisfied_[i] == 0) fire(i);
            }
        }
        return goal_hmax();
    }

    /// Costs only dropped on the cut operators, so h_max values can only
    /// decrease; propagate the decreases instead of starting over.
    void update_hmax(const std::vector<std::uint32_t>& cut) {
        heap_.clear();
        auto relax = [&](std::size_t i) {
            std::int64_t c = op_cost_[i] + remaining_[i];
            for (auto v : task_.op(i).add)
                if (c < fact_cost_[v]) {
                    fact_cost_[v] = c;
                    push(c, v);
                }
        };
        for (auto i : cut) relax(i);
        while (!heap_.empty()) {
            auto [c, v] = pop();
            if (c > fact_cost_[v]) continue;
            for (auto i : task_.ops_with_pre(v)) {
                if (!reached_op_[i] || pcf_[i] != v || op_cost_[i] <= c) continue;
                // The supporter got cheaper; the maximum may now sit elsewhere.
                std::uint32_t best = v;
                for (auto p : task_.op(i).pre)
                    if (fact_cost_[p] > fact_cost_[best]) best = p;
                pcf_[i] = best;
                op_cost_[i] = fact_cost_[best];
                relax(i);
            }
        }
    }

    std::int64_t goal_hmax() {
        std::int64_t goal_cost = 0;
        goal_pcf_ = none;
        for (auto g : task_.goal()) {
            if (fact_cost_[g] == inf) return inf;
            if (goal_pcf_ == none || fact_cost_[g] > goal_cost) {
                goal_cost = fact_cost_[g];
                goal_pcf_ = g;
            }
        }
        return goal_cost;
    }

    const CompiledTask& task_;
    std::vector<std::int64_t> fact_cost_;
    std::vector<int> unsatisfied_;
    std::vector<std::int64_t> op_cost_;
    std::vector<std::int64_t> remaining_;
    std::vector<std::uint32_t> pcf_;
    // Byte flags; std::vector<bool> is noticeably slower in these loops.
    std::vector<std::uint8_t> reached_op_;
    std::vector<std::uint8_t> in_cut_;
    std::vector<std::uint8_t> goal_zone_;
    std::vector<std::uint8_t> before_goal_;
    std::vector<std::vector<std::uint32_t>> adders_;
    std::vector<std::size_t> no_pre_;
    std::uint32_t goal_pcf_ = none;
    std::vector<Entry> heap_;
    std::vector<std::uint32_t> stack_;
    std::vector<std::uint32_t> cut_;
};

namespace detail {

inline HeuristicValue evaluate_atoms(const GroundTask& task, const AtomSet& state,
                                     RelaxationKind kind) {
    // Arbitrary states need not agree with init on static atoms.
    CompiledTask compiled(task, false);
    std::vector<AtomId> ids;
    for (const auto& a : state)
        if (auto id = task.find(a)) ids.push_back(*id);
    auto packed = compiled.pack(ids);
    RelaxationEvaluator eval(compiled);
    return eval.evaluate(packed.data(), kind);
}

} // namespace detail

inline HeuristicValue h_add(const GroundTask& task, const AtomSet& state) {
    return detail::evaluate_atoms(task, state, RelaxationKind::add);
}

inline HeuristicValue h_max(const GroundTask& task, const AtomSet& state) {
    return detail::evaluate_atoms(task, state, RelaxationKind::max);
}

inline HeuristicValue h_lmcut(const GroundTask& task, const AtomSet& state) {
    CompiledTask compiled(task, false);
    std::vector<AtomId> ids;
    for (const auto& a : state)
        if (auto id = task.find(a)) ids.push_back(*id);
    auto packed = compiled.pack(ids);
    LandmarkCutEvaluator eval(compiled);
    return eval.evaluate(packed.data());
}

} // namespace vbp
