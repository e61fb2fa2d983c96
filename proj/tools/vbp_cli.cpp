// Command line front end: plan, suite, validate, corpus.
//
// Exit codes: 0 success, 1 invalid plan, 2 usage or input error,
// 10 proven unsolvable, 11 budget exhausted.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "vbp/vbp.hpp"

namespace {

constexpr int exit_invalid = 1;
constexpr int exit_usage = 2;
constexpr int exit_unsolvable = 10;
constexpr int exit_timeout = 11;

int outcome_code(vbp::Outcome o) {
    switch (o) {
    case vbp::Outcome::plan: return 0;
    case vbp::Outcome::unsolvable: return exit_unsolvable;
    case vbp::Outcome::timeout: return exit_timeout;
    }
    return exit_usage;
}

struct PlanArgs {
    std::string domain, problem, views, mix, plan_out;
    double budget = 20.0;
    bool print_plan = false;
    bool verbose = false;
};

int cmd_plan(const PlanArgs& a) {
    auto d = vbp::load_domain(a.domain);
    auto p = vbp::load_problem(a.problem, d);
    vbp::SolveOptions options;
    options.budget_seconds = a.budget;

    vbp::Outcome outcome;
    vbp::Plan plan;
    double seconds = 0.0;
    std::string mix = a.mix.empty() ? (a.views.empty() ? "O" : "OSO") : a.mix;
    if (a.views.empty()) {
        if (mix.size() != 1 || !vbp::solver_from_symbol(mix[0]))
            throw std::invalid_argument("without --views the mix must be S or O");
        auto task = vbp::instantiate(d, p);
        auto res = vbp::solve(task, *vbp::solver_from_symbol(mix[0]), options);
        outcome = res.outcome;
        plan = std::move(res.plan);
        seconds = res.stats.seconds;
        if (a.verbose)
            std::cerr << "ground actions " << task.operators.size() << ", expansions " << res.stats.expansions
                      << ", states " << res.stats.states << "\n";
    } else {
        auto views = vbp::load_views(a.views, d);
        auto res = vbp::run(d, p, views, vbp::PlannerMix::parse(mix), options);
        outcome = res.outcome;
        plan = std::move(res.plan);
        seconds = res.seconds;
        if (a.verbose) {
            for (const auto& v : res.views) {
                std::cerr << "view " << v.view << " (" << vbp::solver_symbol(v.kind) << "): " << v.schemas
                          << " schemas, " << v.ground_actions << " ground actions, "
                          << vbp::outcome_name(v.outcome) << " in " << vbp::bench::seconds_text(v.seconds) << " s\n";
                for (const auto& step : v.plan.steps)
                    std::cerr << "    " << vbp::describe_step(step, v.domain, d) << "\n";
            }
        }
    }

    std::cout << "outcome " << vbp::outcome_name(outcome) << "\n";
    std::cout << "time " << vbp::bench::seconds_text(seconds) << "\n";
    if (outcome == vbp::Outcome::plan) {
        auto report = vbp::validate(d, p, plan);
        std::cout << "cost " << plan.cost() << "\n";
        if (!report) {
            std::cerr << "error: plan does not validate: " << report.message << "\n";
            return exit_invalid;
        }
        if (a.print_plan) std::cout << vbp::serialize_plan(plan);
        if (!a.plan_out.empty()) {
            std::ofstream out(a.plan_out);
            if (!out) throw std::runtime_error("cannot write '" + a.plan_out + "'");
            out << vbp::serialize_plan(plan);
        }
    }
    return outcome_code(outcome);
}

struct SuiteArgs {
    std::string corpus, mixes = "S,O,SSS,OOO,OSO,SSO", out, format = "csv";
    double budget = 20.0;
    unsigned threads = 0;
};

int cmd_suite(const SuiteArgs& a) {
    auto format = vbp::bench::table_format_from_name(a.format);
    auto mixes = vbp::bench::parse_mixes(a.mixes);
    auto corpus = vbp::bench::load_corpus(a.corpus);
    auto records = vbp::bench::run_suite(corpus, mixes, a.budget, a.threads);
    auto table = vbp::bench::emit_table(records, format);
    if (a.out.empty()) {
        std::cout << table;
    } else {
        std::ofstream out(a.out);
        if (!out) throw std::runtime_error("cannot write '" + a.out + "'");
        out << table;
    }
    int invalid = 0;
    for (const auto& r : records)
        if (r.plan && !r.valid) {
            std::cerr << "error: goal " << r.goal << " " << r.mix << " returned an invalid plan\n";
            ++invalid;
        }
    std::cerr << vbp::bench::format_report(vbp::bench::compare_costs(records), vbp::bench::reference_deltas(records));
    return invalid ? exit_invalid : 0;
}

int cmd_validate(const std::string& domain, const std::string& problem, const std::string& plan_file) {
    auto d = vbp::load_domain(domain);
    auto p = vbp::load_problem(problem, d);
    auto plan = vbp::load_plan(plan_file, d);
    auto report = vbp::validate(d, p, plan);
    if (report) {
        std::cout << "valid, cost " << plan.cost() << "\n";
        return 0;
    }
    std::cout << "invalid";
    if (report.failed_step) std::cout << " at step " << *report.failed_step + 1;
    std::cout << ": " << report.message << "\n";
    return exit_invalid;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"View-based classical planner"};
    app.require_subcommand(1);

    PlanArgs plan_args;
    auto* plan = app.add_subcommand("plan", "Solve one problem, directly or view by view");
    plan->add_option("--domain", plan_args.domain, "Domain file")->required()->check(CLI::ExistingFile);
    plan->add_option("--problem", plan_args.problem, "Problem file")->required()->check(CLI::ExistingFile);
    plan->add_option("--views", plan_args.views, "View file; enables view-based planning")->check(CLI::ExistingFile);
    plan->add_option("--mix", plan_args.mix, "Solver per view (e.g. OSO), or S/O without views");
    plan->add_option("--budget", plan_args.budget, "Seconds per solver call")->check(CLI::PositiveNumber);
    plan->add_flag("--print-plan", plan_args.print_plan, "Print the plan");
    plan->add_option("--plan-out", plan_args.plan_out, "Write the plan to this file");
    plan->add_flag("-v,--verbose", plan_args.verbose, "Per-view details on stderr");

    SuiteArgs suite_args;
    auto* suite = app.add_subcommand("suite", "Run every problem of a corpus under several mixes");
    suite->add_option("--corpus", suite_args.corpus, "Corpus directory")->required()->check(CLI::ExistingDirectory);
    suite->add_option("--mixes", suite_args.mixes, "Comma separated mixes")->capture_default_str();
    suite->add_option("--budget", suite_args.budget, "Seconds per solver call")->check(CLI::PositiveNumber);
    suite->add_option("--out", suite_args.out, "Write the table to this file instead of stdout");
    suite->add_option("--format", suite_args.format, "csv or md")->check(CLI::IsMember({"csv", "md"}));
    suite->add_option("--threads", suite_args.threads, "Worker threads (0 = all cores)");

    std::string v_domain, v_problem, v_plan;
    auto* validate = app.add_subcommand("validate", "Check a plan against a problem");
    validate->add_option("--domain", v_domain, "Domain file")->required()->check(CLI::ExistingFile);
    validate->add_option("--problem", v_problem, "Problem file")->required()->check(CLI::ExistingFile);
    validate->add_option("--plan", v_plan, "Plan file")->required()->check(CLI::ExistingFile);

    std::string corpus_out;
    auto* corpus = app.add_subcommand("corpus", "Write the kitchen domain, views and problems");
    corpus->add_option("--out", corpus_out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : exit_usage;
    }

    try {
        if (*plan) return cmd_plan(plan_args);
        if (*suite) return cmd_suite(suite_args);
        if (*validate) return cmd_validate(v_domain, v_problem, v_plan);
        if (*corpus) {
            for (const auto& f : vbp::kitchen::emit_corpus(corpus_out)) std::cout << f.string() << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}
