#pragma once

// Forward state-space search: greedy best-first on h_add (satisficing, S) and
// A* on landmark-cut (optimal, O), both with full duplicate detection and a wall
// clock budget; plus a breadth-first oracle for small tasks.

#include <chrono>
#include <cstdint>
#include <algorithm>
#include <cstring>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "vbp/ground.hpp"
#include "vbp/heuristics.hpp"

namespace vbp {

enum class SolverKind { satisficing, optimal };

inline char solver_symbol(SolverKind k) { return k == SolverKind::satisficing ? 'S' : 'O'; }

inline std::optional<SolverKind> solver_from_symbol(char c) {
    if (c == 'S') return SolverKind::satisficing;
    if (c == 'O') return SolverKind::optimal;
    return std::nullopt;
}

enum class Outcome { plan, unsolvable, timeout };

inline std::string_view outcome_name(Outcome o) {
    switch (o) {
    case Outcome::plan: return "plan";
    case Outcome::unsolvable: return "unsolvable";
    case Outcome::timeout: return "timeout";
    }
    return "?";
}

struct SearchStats {
    std::size_t expansions = 0;
    std::size_t evaluations = 0;
    std::size_t generated = 0;
    std::size_t states = 0;
    double seconds = 0.0;
};

struct SolveResult {
    Outcome outcome = Outcome::unsolvable;
    std::vector<std::size_t> operators; // indices into the ground task
    Plan plan;
    SearchStats stats;

    bool solved() const { return outcome == Outcome::plan; }
    int cost() const { return plan.cost(); }
};

struct SolveOptions {
    double budget_seconds = 20.0;
    /// Stored-state ceiling; reaching it ends the search like an exhausted
    /// time budget. Zero means unlimited.
    std::size_t max_states = 0;
    /// Expansions between clock checks.
    std::size_t check_interval = 64;
    /// Stubborn-set pruning in optimal search.
    bool partial_order_reduction = true;
};

/// Raised by brute_force_optimal when a task has more reachable states than
/// the caller allowed.
class StateCapExceeded : public std::length_error {
public:
    using std::length_error::length_error;
};

namespace detail {

/// Interns packed states; ids are dense and stable.
class StateRegistry {
public:
    explicit StateRegistry(std::size_t words) : words_(words), table_(1024, empty) {}

    std::size_t size() const { return count_; }
    const std::uint64_t* get(std::uint32_t id) const { return data_.data() + std::size_t{id} * words_; }

    /// Returns the id of `s` and whether it was newly inserted.
    std::pair<std::uint32_t, bool> insert(const std::uint64_t* s) {
        if ((count_ + 1) * 2 > table_.size()) grow();
        std::size_t mask = table_.size() - 1;
        std::size_t i = hash(s) & mask;
        while (table_[i] != empty) {
            if (std::memcmp(get(table_[i]), s, words_ * sizeof(std::uint64_t)) == 0)
                return {table_[i], false};
            i = (i + 1) & mask;
        }
        auto id = static_cast<std::uint32_t>(count_++);
        data_.insert(data_.end(), s, s + words_);
        table_[i] = id;
        return {id, true};
    }

private:
    static constexpr std::uint32_t empty = std::numeric_limits<std::uint32_t>::max();

    std::size_t hash(const std::uint64_t* s) const {
        std::uint64_t h = 0x9e3779b97f4a7c15ull;
        for (std::size_t w = 0; w < words_; ++w) {
            h ^= s[w] + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
            h *= 0xff51afd7ed558ccdull;
            h ^= h >> 33;
        }
        return static_cast<std::size_t>(h);
    }

    void grow() {
        std::vector<std::uint32_t> next(table_.size() * 2, empty);
        std::size_t mask = next.size() - 1;
        for (std::uint32_t id = 0; id < count_; ++id) {
            std::size_t i = hash(get(id)) & mask;
            while (next[i] != empty) i = (i + 1) & mask;
            next[i] = id;
        }
        table_.swap(next);
    }

    std::size_t words_;
    std::vector<std::uint64_t> data_;
    std::vector<std::uint32_t> table_;
    std::size_t count_ = 0;
};

struct NodeInfo {
    std::uint32_t parent = std::numeric_limits<std::uint32_t>::max();
    std::uint32_t op = std::numeric_limits<std::uint32_t>::max();
    int g = 0;
    int h = 0;
    bool closed = false;
    bool dead_end = false;
};

inline std::vector<std::size_t> trace(const std::vector<NodeInfo>& nodes, std::uint32_t id) {
    std::vector<std::size_t> ops;
    while (nodes[id].parent != std::numeric_limits<std::uint32_t>::max()) {
        ops.push_back(nodes[id].op);
        id = nodes[id].parent;
    }
    return {ops.rbegin(), ops.rend()};
}

/// Strong stubborn sets for STRIPS: from an unsatisfied goal, close over
/// achievers of unmet preconditions (for inapplicable operators) and
/// interfering operators (for applicable ones). Expanding only the applicable
/// members keeps at least one optimal plan.
class StubbornSets {
public:
    explicit StubbornSets(const CompiledTask& task)
        : task_(task), achievers_(task.num_vars()), deleters_(task.num_vars()),
          interference_(task.num_ops()), interference_ready_(task.num_ops(), 0), stamp_(task.num_ops(), 0) {
        for (std::size_t i = 0; i < task.num_ops(); ++i) {
            if (task.impossible(i)) continue;
            for (auto v : task.op(i).add) achievers_[v].push_back(static_cast<std::uint32_t>(i));
            for (auto v : task.op(i).del) deleters_[v].push_back(static_cast<std::uint32_t>(i));
        }
    }

    /// Applicable operators of a stubborn set for `s`, in index order.
    /// `s` must not be a goal state.
    std::vector<std::uint32_t> applicable(const std::uint64_t* s) {
        ++epoch_;
        std::vector<std::uint32_t> out;
        queue_.clear();
        for (auto g : task_.goal())
            if (!CompiledTask::test(s, g)) {
                enqueue_all(achievers_[g]);
                break;
            }
        while (!queue_.empty()) {
            auto i = queue_.back();
            queue_.pop_back();
            const auto& op = task_.op(i);
            auto unmet = std::find_if(op.pre.begin(), op.pre.end(),
                                      [&](std::uint32_t v) { return !CompiledTask::test(s, v); });
            if (unmet == op.pre.end()) {
                out.push_back(i);
                enqueue_all(interfering(i));
            } else {
                enqueue_all(achievers_[*unmet]);
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    void enqueue_all(const std::vector<std::uint32_t>& ops) {
        for (auto i : ops)
            if (stamp_[i] != epoch_) {
                stamp_[i] = epoch_;
                queue_.push_back(i);
            }
    }

    /// Operators that can disable `i`, that `i` can disable, or whose
    /// effects conflict with those of `i`.
    const std::vector<std::uint32_t>& interfering(std::uint32_t i) {
        if (interference_ready_[i]) return interference_[i];
        std::vector<std::uint32_t> r;
        const auto& op = task_.op(i);
        for (auto v : op.pre) r.insert(r.end(), deleters_[v].begin(), deleters_[v].end());
        for (auto v : op.add) r.insert(r.end(), deleters_[v].begin(), deleters_[v].end());
        for (auto v : op.del) {
            const auto& users = task_.ops_with_pre(v);
            r.insert(r.end(), users.begin(), users.end());
            r.insert(r.end(), achievers_[v].begin(), achievers_[v].end());
        }
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
        r.erase(std::remove(r.begin(), r.end(), i), r.end());
        interference_[i] = std::move(r);
        interference_ready_[i] = 1;
        return interference_[i];
    }

    const CompiledTask& task_;
    std::vector<std::vector<std::uint32_t>> achievers_;
    std::vector<std::vector<std::uint32_t>> deleters_;
    std::vector<std::vector<std::uint32_t>> interference_;
    std::vector<std::uint8_t> interference_ready_;
    std::vector<std::uint32_t> stamp_;
    std::uint32_t epoch_ = 0;
    std::vector<std::uint32_t> queue_;
};

class Clock {
public:
    Clock() : start_(std::chrono::steady_clock::now()) {}
    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

} // namespace detail

/// Runs the solver of the given kind. Tie-breaking is fixed: A* orders open
/// nodes by (f, h, insertion). Greedy search orders by (h, insertion) and
/// keeps a second queue of nodes reached through preferred operators (the
/// applicable steps of the h_add relaxed plan), which gets a run of
/// expansions whenever the best h value improves.
inline SolveResult solve(const GroundTask& task, SolverKind kind, const SolveOptions& options = {}) {
    if (!(options.budget_seconds > 0)) throw std::invalid_argument("search budget must be positive");
    detail::Clock clock;
    SolveResult result;
    CompiledTask compiled(task, true, true);
    RelaxationEvaluator relaxation(compiled);
    LandmarkCutEvaluator lmcut(compiled);
    const bool optimal = kind == SolverKind::optimal;
    auto evaluate = [&](const std::uint64_t* s) {
        return optimal ? lmcut.evaluate(s) : relaxation.evaluate(s, RelaxationKind::add);
    };
    const std::size_t words = compiled.words();

    auto finish = [&](Outcome o, std::size_t states) {
        result.outcome = o;
        result.stats.states = states;
        result.stats.seconds = clock.elapsed();
        if (o == Outcome::plan) result.plan = task.make_plan(result.operators);
        return result;
    };

    detail::StateRegistry registry(words);
    std::vector<detail::NodeInfo> nodes;
    auto root = registry.insert(compiled.init().data()).first;
    auto h0 = evaluate(compiled.init().data());
    ++result.stats.evaluations;
    nodes.push_back({});
    if (h0.is_infinite()) return finish(Outcome::unsolvable, registry.size());
    nodes[root].h = h0.value();

    // (primary key, h, insertion index, id, g at push)
    using Entry = std::tuple<long long, int, std::uint64_t, std::uint32_t, int>;
    using Queue = std::priority_queue<Entry, std::vector<Entry>, std::greater<>>;
    Queue open;
    Queue preferred_open;
    std::uint64_t counter = 0;
    auto primary = [&](int g, int h) -> long long { return optimal ? static_cast<long long>(g) + h : h; };
    open.push({primary(0, h0.value()), h0.value(), counter++, root, 0});

    constexpr int boost_amount = 1000;
    int boost = 0;
    int best_h = h0.value();
    bool take_preferred = false;
    std::vector<bool> is_preferred(compiled.num_ops(), false);
    std::vector<std::uint64_t> succ(words);
    std::vector<std::uint32_t> candidates;
    std::optional<detail::StubbornSets> stubborn;
    if (optimal && options.partial_order_reduction) stubborn.emplace(compiled);

    while (!open.empty() || !preferred_open.empty()) {
        Queue* q = &open;
        if (!optimal) {
            bool use_pref = boost > 0 || take_preferred;
            if (preferred_open.empty()) use_pref = false;
            if (open.empty()) use_pref = true;
            q = use_pref ? &preferred_open : &open;
            if (use_pref && boost > 0) --boost;
            take_preferred = !take_preferred;
        }
        auto [key, h, seq, id, g] = q->top();
        q->pop();
        (void)key;
        (void)seq;
        (void)h;
        auto& node = nodes[id];
        if (node.closed || g > node.g) continue;
        node.closed = true;

        if (compiled.is_goal(registry.get(id))) {
            result.operators = detail::trace(nodes, id);
            return finish(Outcome::plan, registry.size());
        }
        ++result.stats.expansions;
        if (result.stats.expansions % options.check_interval == 0 && clock.elapsed() > options.budget_seconds)
            return finish(Outcome::timeout, registry.size());
        if (options.max_states && registry.size() >= options.max_states)
            return finish(Outcome::timeout, registry.size());

        std::vector<std::uint32_t> pref;
        if (!optimal) {
            // Re-evaluate to recover the relaxed plan of the expanded state.
            relaxation.evaluate(registry.get(id), RelaxationKind::add);
            pref = relaxation.preferred();
            for (auto i : pref) is_preferred[i] = true;
        }

        candidates.clear();
        if (stubborn) {
            candidates = stubborn->applicable(registry.get(id));
        } else {
            const std::uint64_t* state = registry.get(id);
            for (std::uint32_t i = 0; i < compiled.num_ops(); ++i)
                if (compiled.applicable(state, i)) candidates.push_back(i);
        }
        for (auto i : candidates) {
            const std::uint64_t* state = registry.get(id);
            compiled.apply(state, i, succ.data());
            ++result.stats.generated;
            const int succ_g = g + compiled.op(i).cost;
            auto [sid, fresh] = registry.insert(succ.data());
            if (fresh) {
                nodes.push_back({});
                auto hv = evaluate(succ.data());
                ++result.stats.evaluations;
                auto& sn = nodes[sid];
                sn.parent = id;
                sn.op = static_cast<std::uint32_t>(i);
                sn.g = succ_g;
                if (hv.is_infinite()) {
                    sn.closed = sn.dead_end = true;
                    continue;
                }
                sn.h = hv.value();
                Entry e{primary(succ_g, sn.h), sn.h, counter++, sid, succ_g};
                open.push(e);
                if (!optimal && is_preferred[i]) preferred_open.push(e);
                if (!optimal && sn.h < best_h) {
                    best_h = sn.h;
                    boost += boost_amount;
                }
            } else if (optimal) {
                // Reopen when a cheaper path appears.
                auto& sn = nodes[sid];
                if (!sn.dead_end && succ_g < sn.g) {
                    sn.g = succ_g;
                    sn.parent = id;
                    sn.op = static_cast<std::uint32_t>(i);
                    sn.closed = false;
                    open.push({primary(succ_g, sn.h), sn.h, counter++, sid, succ_g});
                }
            }
        }
        for (auto i : pref) is_preferred[i] = false;
    }
    return finish(Outcome::unsolvable, registry.size());
}

/// Uniform-cost breadth-first search over the full reachable state space.
/// Throws StateCapExceeded if more than `state_cap` states are reached.
inline SolveResult brute_force_optimal(const GroundTask& task, std::size_t state_cap) {
    detail::Clock clock;
    SolveResult result;
    CompiledTask compiled(task);
    detail::StateRegistry registry(compiled.words());
    std::vector<detail::NodeInfo> nodes;
    registry.insert(compiled.init().data());
    nodes.push_back({});
    std::vector<std::uint64_t> succ(compiled.words());
    for (std::uint32_t head = 0; head < registry.size(); ++head) {
        if (compiled.is_goal(registry.get(head))) {
            result.operators = detail::trace(nodes, head);
            result.outcome = Outcome::plan;
            result.plan = task.make_plan(result.operators);
            result.stats.states = registry.size();
            result.stats.seconds = clock.elapsed();
            return result;
        }
        ++result.stats.expansions;
        for (std::size_t i = 0; i < compiled.num_ops(); ++i) {
            if (!compiled.applicable(registry.get(head), i)) continue;
            compiled.apply(registry.get(head), i, succ.data());
            ++result.stats.generated;
            auto [sid, fresh] = registry.insert(succ.data());
            if (!fresh) continue;
            if (registry.size() > state_cap)
                throw StateCapExceeded("task exceeds the state cap of " + std::to_string(state_cap));
            nodes.push_back({head, static_cast<std::uint32_t>(i), nodes[head].g + 1, 0, false, false});
        }
    }
    result.outcome = Outcome::unsolvable;
    result.stats.states = registry.size();
    result.stats.seconds = clock.elapsed();
    return result;
}

} // namespace vbp
