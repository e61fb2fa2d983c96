// Acceptance runner: prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. The experiment suite runs once and its
// records feed criteria 2-5.

#include <cstdio>
#include <functional>
#include <iostream>

#include "support.hpp"

#ifndef VBP_CORPUS_DIR
#error "VBP_CORPUS_DIR must point at the shipped kitchen corpus"
#endif

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        pass = false;
        detail += (detail.empty() ? "" : "; ") + why;
    }
    void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

const std::vector<std::string> all_mixes = {"S", "O", "SSS", "OOO", "OSO", "SSO"};

const vbp::bench::ExperimentRecord* find(const std::vector<vbp::bench::ExperimentRecord>& records,
                                         const std::string& goal, const std::string& mix) {
    for (const auto& r : records)
        if (r.goal == goal && r.mix == mix) return &r;
    return nullptr;
}

Verdict table_two() {
    Verdict v;
    vbp::detail::Clock clock;
    auto views = fixtures::table_two_views();
    auto bad = fixtures::table_two_mismatches(views);
    double t = clock.elapsed();
    for (const auto& b : bad) v.fail(b);
    if (t >= 1.0) v.fail("took " + vbp::bench::seconds_text(t) + " s");
    v.note("checked in " + vbp::bench::seconds_text(t) + " s");
    return v;
}

Verdict unsolvability(const std::vector<vbp::bench::ExperimentRecord>& records) {
    Verdict v;
    const auto d = vbp::kitchen::build_domain();
    const auto p = vbp::kitchen::build_problem("0+1");
    const auto views = vbp::kitchen::build_views(d);
    for (const char* mix : {"SSS", "OOO", "OSO", "SSO"}) {
        auto run = vbp::run(d, p, views, vbp::PlannerMix::parse(mix));
        if (run.outcome != vbp::Outcome::unsolvable || run.failed_view != std::optional<std::size_t>(1))
            v.fail(std::string(mix) + " did not fail as unsolvable in view 1");
        else if (run.views.front().seconds >= 1.0)
            v.fail(std::string(mix) + " view 1 took " + vbp::bench::seconds_text(run.views.front().seconds) + " s");
        const auto* r = find(records, "0+1", mix);
        if (!r || !r->unsolvable()) v.fail(std::string(mix) + " suite cell is not inf");
    }
    for (const char* mix : {"S", "O"}) {
        const auto* r = find(records, "0+1", mix);
        if (!r) v.fail(std::string("missing suite cell ") + mix);
        else if (r->numeric()) v.fail(std::string(mix) + " returned a plan");
        else v.note(std::string(mix) + " " + vbp::bench::cost_text(r->cost));
    }
    return v;
}

Verdict optimal_costs(const std::vector<vbp::bench::ExperimentRecord>& records) {
    Verdict v;
    const std::vector<std::pair<std::string, int>> expected = {{"4", 8}, {"1", 10}, {"2", 11}, {"0", 11}, {"5", 15}};
    for (const auto& [goal, cost] : expected) {
        const auto* r = find(records, goal, "O");
        if (!r) {
            v.fail("missing O cell for goal " + goal);
            continue;
        }
        if (!r->numeric()) {
            v.fail("goal " + goal + " O = " + vbp::bench::cost_text(r->cost));
            continue;
        }
        double delta = r->cost - cost;
        if (delta != 0)
            v.fail("goal " + goal + " O = " + vbp::bench::cost_text(r->cost) + " (delta " +
                   std::to_string(static_cast<int>(delta)) + ")");
        else v.note(goal + ":" + std::to_string(cost));
    }
    return v;
}

Verdict soundness(const std::vector<vbp::bench::ExperimentRecord>& records, double suite_seconds) {
    Verdict v;
    int plans = 0;
    for (const auto& r : records) {
        if (!r.plan) continue;
        ++plans;
        if (!r.valid) v.fail("goal " + r.goal + " " + r.mix + " plan invalid");
    }
    std::set<std::string> solved_goals;
    for (const auto& r : records)
        if (r.plan) solved_goals.insert(r.goal);
    if (solved_goals.size() != 15) v.fail(std::to_string(solved_goals.size()) + " goals solved by some mix, expected 15");
    if (suite_seconds >= 300.0) v.fail("suite took " + vbp::bench::seconds_text(suite_seconds) + " s");
    v.note(std::to_string(plans) + " plans validated, suite " + vbp::bench::seconds_text(suite_seconds) + " s");
    return v;
}

Verdict orderings(const std::vector<vbp::bench::ExperimentRecord>& records) {
    Verdict v;
    auto rep = vbp::bench::compare_costs(records);
    if (rep.degenerate) v.fail("degenerate report");
    for (const auto& x : rep.violations) v.fail(x);
    v.note(std::to_string(rep.checks.size()) + " checks");
    return v;
}

Verdict oracle() {
    Verdict v;
    std::mt19937 rng(20240917);
    int accepted = 0, solvable = 0, attempts = 0, trajectories = 0, states_checked = 0;
    while ((solvable < 50 || trajectories < 10) && attempts < 5000) {
        ++attempts;
        auto inst = fixtures::random_instance(rng);
        auto d = vbp::parse_domain(inst.domain_text);
        auto p = vbp::parse_problem(inst.problem_text, d);
        auto naive = fixtures::naive_grounding(d, p);
        bool capped = false;
        auto truth = fixtures::bfs_distance(naive, p.init, p.goal, 100000, &capped);
        if (capped) continue;
        ++accepted;
        auto task = vbp::instantiate(d, p);
        auto brute = vbp::brute_force_optimal(task, 100000);
        auto opt = vbp::solve(task, vbp::SolverKind::optimal);
        std::string tag = "instance " + std::to_string(accepted);
        if (truth.has_value() != brute.solved() || truth.has_value() != opt.solved()) {
            v.fail(tag + ": solvability disagrees");
            continue;
        }
        if (!truth) continue;
        ++solvable;
        if (brute.cost() != *truth) v.fail(tag + ": brute force cost " + std::to_string(brute.cost()));
        if (opt.cost() != *truth)
            v.fail(tag + ": O cost " + std::to_string(opt.cost()) + " vs " + std::to_string(*truth));
        if (!vbp::validate(d, p, opt.plan)) v.fail(tag + ": O plan invalid");

        if (trajectories < 10 && !opt.plan.empty()) {
            ++trajectories;
            auto state = p.init;
            for (std::size_t i = 0; i <= opt.plan.size(); ++i) {
                auto h = vbp::h_max(task, state);
                auto rest = fixtures::bfs_distance(naive, state, p.goal, 100000);
                ++states_checked;
                if (!rest || h.is_infinite() || h.value() > *rest)
                    v.fail(tag + ": h_max exceeds remaining cost at step " + std::to_string(i));
                if (i < opt.plan.size()) state = vbp::apply(state, opt.plan.steps[i]);
            }
        }
    }
    if (accepted < 50) v.fail("only " + std::to_string(accepted) + " instances");
    if (solvable < 50) v.fail("only " + std::to_string(solvable) + " solvable instances");
    if (trajectories < 10) v.fail("only " + std::to_string(trajectories) + " trajectories");
    v.note(std::to_string(accepted) + " instances (" + std::to_string(solvable) + " solvable), " +
           std::to_string(states_checked) + " trajectory states");
    return v;
}

Verdict example_plan() {
    Verdict v;
    const auto d = vbp::kitchen::build_domain();
    const auto p = vbp::kitchen::build_problem("3");
    auto run = vbp::run(d, p, vbp::kitchen::build_views(d), vbp::PlannerMix::parse("OSO"));
    if (!run.solved()) {
        v.fail("OSO on goal 3: " + std::string(vbp::outcome_name(run.outcome)));
        return v;
    }
    const auto& view1 = run.views.front();
    std::vector<std::string> origins;
    const auto elementary = d.predicates_in(vbp::Group::elementary);
    for (const auto& step : view1.plan.steps) {
        const auto* schema = view1.domain.find_action(step.schema);
        origins.push_back(schema ? schema->origin : "?");
        if (!schema) continue;
        for (const auto* effects : {&schema->add, &schema->del})
            for (const auto& l : *effects)
                if (!elementary.count(l.predicate)) v.fail(step.str() + " changes " + l.predicate);
    }
    const std::vector<std::string> want = {"use_microwave", "transfer_mint", "use_fridge"};
    if (origins != want) {
        std::string got;
        for (const auto& o : origins) got += (got.empty() ? "" : ",") + o;
        v.fail("view 1 plan is [" + got + "]");
    }
    if (!vbp::validate(d, p, run.plan)) v.fail("final plan invalid");
    if (run.cost() != 20) v.fail("final cost " + std::to_string(run.cost()));
    v.note("view 1: " + std::to_string(view1.plan.size()) + " steps, final cost " + std::to_string(run.cost()));
    return v;
}

Verdict suboptimality_witness() {
    Verdict v;
    auto d = vbp::parse_domain(fixtures::shortcut_domain_text);
    auto p = vbp::parse_problem(fixtures::shortcut_problem_text, d);
    auto views = vbp::parse_views(fixtures::shortcut_views_text, d);
    auto full = vbp::solve(vbp::instantiate(d, p), vbp::SolverKind::optimal);
    auto ooo = vbp::run(d, p, views, vbp::PlannerMix::parse("OOO"));
    if (!full.solved() || !ooo.solved()) {
        v.fail("fixture not solved");
        return v;
    }
    if (!vbp::validate(d, p, ooo.plan)) v.fail("OOO plan invalid");
    if (!(ooo.cost() > full.cost()))
        v.fail("OOO cost " + std::to_string(ooo.cost()) + " not above O cost " + std::to_string(full.cost()));
    v.note("OOO " + std::to_string(ooo.cost()) + " > O " + std::to_string(full.cost()));
    return v;
}

} // namespace

int main() {
    std::vector<std::pair<std::string, std::function<Verdict()>>> criteria;
    std::vector<vbp::bench::ExperimentRecord> records;
    double suite_seconds = 0.0;
    bool suite_ok = true;
    std::string suite_error;
    {
        vbp::detail::Clock clock;
        try {
            records = vbp::bench::run_suite(VBP_CORPUS_DIR, all_mixes, 20.0);
        } catch (const std::exception& e) {
            suite_ok = false;
            suite_error = e.what();
        }
        suite_seconds = clock.elapsed();
        if (suite_ok) std::cout << vbp::bench::emit_table(records, vbp::bench::TableFormat::markdown) << "\n";
        if (suite_ok)
            std::cout << vbp::bench::format_report(vbp::bench::compare_costs(records),
                                                   vbp::bench::reference_deltas(records))
                      << "\n";
    }
    auto needs_suite = [&](std::function<Verdict()> f) {
        return [=]() {
            if (!suite_ok) {
                Verdict v;
                v.fail("suite failed: " + suite_error);
                return v;
            }
            return f();
        };
    };

    criteria.emplace_back("Table II fidelity", table_two);
    criteria.emplace_back("unsolvable goal 0+1", needs_suite([&] { return unsolvability(records); }));
    criteria.emplace_back("optimal costs 4,1,2,0,5", needs_suite([&] { return optimal_costs(records); }));
    criteria.emplace_back("end-to-end soundness", needs_suite([&] { return soundness(records, suite_seconds); }));
    criteria.emplace_back("cost orderings", needs_suite([&] { return orderings(records); }));
    criteria.emplace_back("oracle equivalence", oracle);
    criteria.emplace_back("goal 3 example plan", example_plan);
    criteria.emplace_back("VBP suboptimality witness", suboptimality_witness);

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v.fail(std::string("exception: ") + e.what());
        }
        if (!v.pass) ++failures;
        std::cout << (v.pass ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first;
        if (!v.detail.empty()) std::cout << " (" << v.detail << ")";
        std::cout << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
