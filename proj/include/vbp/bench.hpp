#pragma once

// Experiment harness: runs every goal of a corpus under a set of planner
// mixes, renders the results as a table and checks the expected orderings
// between the columns.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "vbp/ground.hpp"
#include "vbp/kitchen.hpp"
#include "vbp/model.hpp"
#include "vbp/parser.hpp"
#include "vbp/planner.hpp"
#include "vbp/search.hpp"

namespace vbp::bench {

struct ExperimentRecord {
    std::string goal;
    std::string mix;
    double seconds = 0.0;
    /// Plan cost; NaN on timeout, +infinity when proven unsolvable.
    double cost = std::numeric_limits<double>::quiet_NaN();
    std::optional<Plan> plan;
    /// Whether `plan` validates against the full problem.
    bool valid = false;

    bool numeric() const { return std::isfinite(cost); }
    bool timed_out() const { return std::isnan(cost); }
    bool unsolvable() const { return std::isinf(cost); }
};

inline std::string cost_text(double cost) {
    if (std::isnan(cost)) return "nan";
    if (std::isinf(cost)) return "inf";
    return std::to_string(static_cast<long long>(cost));
}

inline std::string seconds_text(double s) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, s, std::chars_format::fixed, 3);
    if (ec != std::errc()) return "0.000";
    return std::string(buf, end);
}

/// Mixes are comma separated, e.g. "S,O,SSS,OOO,OSO,SSO".
inline std::vector<std::string> parse_mixes(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        if (cur.empty()) throw std::invalid_argument("empty entry in mix list '" + std::string(text) + "'");
        PlannerMix::parse(cur); // validates
        out.push_back(cur);
        cur.clear();
    };
    for (char c : text) {
        if (c == ',') flush();
        else if (c != ' ') cur += c;
    }
    flush();
    return out;
}

struct Corpus {
    Domain domain;
    ViewSpec views;
    std::vector<Problem> problems;
};

inline std::string goal_id(const Problem& p) {
    const std::string prefix = "goal_";
    return p.name.rfind(prefix, 0) == 0 ? p.name.substr(prefix.size()) : p.name;
}

/// Loads the single .dom and .views file of `dir` and every .prob file.
inline Corpus load_corpus(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw std::runtime_error("corpus directory '" + dir.string() + "' not found");
    std::vector<fs::path> doms, views, probs;
    for (const auto& e : fs::directory_iterator(dir)) {
        auto ext = e.path().extension();
        if (ext == ".dom") doms.push_back(e.path());
        else if (ext == ".views") views.push_back(e.path());
        else if (ext == ".prob") probs.push_back(e.path());
    }
    if (doms.size() != 1) throw std::runtime_error("corpus needs exactly one .dom file in '" + dir.string() + "'");
    if (views.size() != 1) throw std::runtime_error("corpus needs exactly one .views file in '" + dir.string() + "'");
    if (probs.empty()) throw std::runtime_error("corpus has no .prob files in '" + dir.string() + "'");
    std::sort(probs.begin(), probs.end());
    Corpus c;
    c.domain = load_domain(doms.front());
    c.views = load_views(views.front(), c.domain);
    for (const auto& p : probs) c.problems.push_back(load_problem(p, c.domain));
    return c;
}

/// Runs one cell. Single-letter mixes solve the full task directly.
inline ExperimentRecord run_cell(const Domain& d, const ViewSpec& views, const Problem& p, const std::string& mix,
                                 double budget) {
    ExperimentRecord r;
    r.goal = goal_id(p);
    r.mix = mix;
    SolveOptions options;
    options.budget_seconds = budget;
    detail::Clock clock;
    Outcome outcome;
    Plan plan;
    if (mix.size() == 1) {
        auto task = instantiate(d, p);
        auto res = solve(task, *solver_from_symbol(mix[0]), options);
        outcome = res.outcome;
        plan = std::move(res.plan);
    } else {
        auto res = run(d, p, views, PlannerMix::parse(mix), options);
        outcome = res.outcome;
        plan = std::move(res.plan);
    }
    r.seconds = clock.elapsed();
    switch (outcome) {
    case Outcome::plan:
        r.cost = plan.cost();
        r.valid = static_cast<bool>(validate(d, p, plan));
        r.plan = std::move(plan);
        break;
    case Outcome::unsolvable: r.cost = std::numeric_limits<double>::infinity(); break;
    case Outcome::timeout: r.cost = std::numeric_limits<double>::quiet_NaN(); break;
    }
    return r;
}

/// Sorts rows by the cost the S column found (nan last), then by the kitchen
/// table order, then by goal id.
inline void sort_records(std::vector<ExperimentRecord>& records, const std::vector<std::string>& mixes) {
    std::map<std::string, double> s_cost;
    for (const auto& r : records)
        if (r.mix == "S") s_cost[r.goal] = r.cost;
    auto key_of = [&](const std::string& goal) {
        double c = s_cost.count(goal) ? s_cost[goal] : std::numeric_limits<double>::infinity();
        if (std::isnan(c)) c = std::numeric_limits<double>::infinity();
        const auto& rows = kitchen::goal_rows();
        auto pos = static_cast<std::size_t>(std::find(rows.begin(), rows.end(), goal) - rows.begin());
        return std::tuple{c, pos, goal};
    };
    auto mix_pos = [&](const std::string& m) { return std::find(mixes.begin(), mixes.end(), m) - mixes.begin(); };
    std::stable_sort(records.begin(), records.end(), [&](const ExperimentRecord& a, const ExperimentRecord& b) {
        auto ka = key_of(a.goal), kb = key_of(b.goal);
        if (ka != kb) return ka < kb;
        return mix_pos(a.mix) < mix_pos(b.mix);
    });
}

/// One record per (goal, mix). Cells run concurrently on up to `threads`
/// workers (0 = hardware concurrency); each cell is independent.
inline std::vector<ExperimentRecord> run_suite(const Corpus& corpus, const std::vector<std::string>& mixes,
                                               double budget, unsigned threads = 0) {
    struct Cell {
        const Problem* problem;
        std::string mix;
    };
    std::vector<Cell> cells;
    for (const auto& p : corpus.problems)
        for (const auto& m : mixes) cells.push_back({&p, m});
    std::vector<ExperimentRecord> records(cells.size());
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, cells.size())));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            try {
                records[i] = run_cell(corpus.domain, corpus.views, *cells[i].problem, cells[i].mix, budget);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    sort_records(records, mixes);
    return records;
}

inline std::vector<ExperimentRecord> run_suite(const std::filesystem::path& corpus_dir,
                                               const std::vector<std::string>& mixes, double budget,
                                               unsigned threads = 0) {
    return run_suite(load_corpus(corpus_dir), mixes, budget, threads);
}

// ---------------------------------------------------------------------------
// Tables

enum class TableFormat { csv, markdown };

inline TableFormat table_format_from_name(std::string_view name) {
    if (name == "csv") return TableFormat::csv;
    if (name == "md" || name == "markdown") return TableFormat::markdown;
    throw std::invalid_argument("unknown table format '" + std::string(name) + "' (expected csv or md)");
}

/// Wide table: one row per goal, a time and a cost column per mix. Row and
/// column order follow the first appearance in `records`.
inline std::string emit_table(const std::vector<ExperimentRecord>& records, TableFormat format) {
    if (records.empty()) throw std::invalid_argument("no records to tabulate");
    std::vector<std::string> goals, mixes;
    std::map<std::pair<std::string, std::string>, const ExperimentRecord*> cell;
    for (const auto& r : records) {
        if (std::find(goals.begin(), goals.end(), r.goal) == goals.end()) goals.push_back(r.goal);
        if (std::find(mixes.begin(), mixes.end(), r.mix) == mixes.end()) mixes.push_back(r.mix);
        cell[{r.goal, r.mix}] = &r;
    }
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header{"goal"};
    for (const auto& m : mixes) {
        header.push_back(m + "_time");
        header.push_back(m + "_cost");
    }
    rows.push_back(header);
    for (const auto& g : goals) {
        std::vector<std::string> row{g};
        for (const auto& m : mixes) {
            auto it = cell.find({g, m});
            if (it == cell.end()) {
                row.push_back("");
                row.push_back("");
            } else {
                row.push_back(seconds_text(it->second->seconds));
                row.push_back(cost_text(it->second->cost));
            }
        }
        rows.push_back(row);
    }

    std::ostringstream out;
    if (format == TableFormat::csv) {
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
            out << "\n";
        }
        return out.str();
    }
    std::vector<std::size_t> width(header.size(), 0);
    for (const auto& row : rows)
        for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    auto line = [&](const std::vector<std::string>& row) {
        out << "|";
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::string pad(width[i] - row[i].size(), ' ');
            out << " " << (i == 0 ? row[i] + pad : pad + row[i]) << " |";
        }
        out << "\n";
    };
    line(rows.front());
    out << "|";
    for (std::size_t i = 0; i < width.size(); ++i) out << (i == 0 ? ":" : "-") << std::string(width[i], '-') << (i == 0 ? "-" : ":") << "|";
    out << "\n";
    for (std::size_t r = 1; r < rows.size(); ++r) line(rows[r]);
    return out.str();
}

// ---------------------------------------------------------------------------
// Orderings

struct CostReport {
    bool degenerate = false;
    std::vector<std::string> checks;     // description of every ordering check made
    std::vector<std::string> violations; // failed checks

    bool ok() const { return violations.empty(); }
};

/// Checks: O <= S where both finish; OSO == SSO on every goal; OSO and SSO
/// finish every goal; OOO <= SSS where both finish.
inline CostReport compare_costs(const std::vector<ExperimentRecord>& records) {
    CostReport rep;
    std::map<std::string, std::map<std::string, double>> by_goal;
    for (const auto& r : records) by_goal[r.goal][r.mix] = r.cost;
    if (by_goal.size() < 2) {
        rep.degenerate = true;
        return rep;
    }
    auto has = [](const std::map<std::string, double>& m, const char* k) { return m.count(k) > 0; };
    for (const auto& [goal, cost] : by_goal) {
        auto leq = [&, &goal = goal, &cost = cost](const char* lo, const char* hi) {
            if (!has(cost, lo) || !has(cost, hi)) return;
            double a = cost.at(lo), b = cost.at(hi);
            if (!std::isfinite(a) || !std::isfinite(b)) return;
            std::string what = "goal " + goal + ": " + lo + " (" + cost_text(a) + ") <= " + hi + " (" + cost_text(b) + ")";
            rep.checks.push_back(what);
            if (a > b) rep.violations.push_back(what);
        };
        leq("O", "S");
        leq("OOO", "SSS");
        if (has(cost, "OSO") && has(cost, "SSO")) {
            double a = cost.at("OSO"), b = cost.at("SSO");
            std::string what = "goal " + goal + ": OSO (" + cost_text(a) + ") == SSO (" + cost_text(b) + ")";
            rep.checks.push_back(what);
            bool same = (std::isnan(a) && std::isnan(b)) || a == b;
            if (!same) rep.violations.push_back(what);
        }
        for (const char* m : {"OSO", "SSO"}) {
            if (!has(cost, m)) continue;
            std::string what = std::string("goal ") + goal + ": " + m + " finishes within budget";
            rep.checks.push_back(what);
            if (std::isnan(cost.at(m))) rep.violations.push_back(what);
        }
    }
    if (rep.checks.empty()) rep.degenerate = true;
    return rep;
}

struct Delta {
    std::string goal;
    std::string mix;
    int expected = 0;
    double actual = 0.0;

    /// actual - expected; NaN when the cell has no numeric cost.
    double delta() const { return std::isfinite(actual) ? actual - expected : std::numeric_limits<double>::quiet_NaN(); }
};

/// Reference costs the kitchen reconstruction is calibrated against.
inline const std::vector<std::tuple<std::string, std::string, int>>& reference_costs() {
    static const std::vector<std::tuple<std::string, std::string, int>> ref = {
        {"4", "O", 8}, {"1", "O", 10}, {"2", "O", 11}, {"0", "O", 11}, {"5", "O", 15}, {"3", "OSO", 20},
    };
    return ref;
}

inline std::vector<Delta> reference_deltas(const std::vector<ExperimentRecord>& records) {
    std::vector<Delta> out;
    for (const auto& [goal, mix, expected] : reference_costs())
        for (const auto& r : records)
            if (r.goal == goal && r.mix == mix) out.push_back({goal, mix, expected, r.cost});
    return out;
}

inline std::string format_report(const CostReport& rep, const std::vector<Delta>& deltas) {
    std::ostringstream out;
    if (rep.degenerate) {
        out << "orderings: degenerate dataset, nothing checkable\n";
    } else {
        out << "orderings: " << rep.checks.size() << " checked, " << rep.violations.size() << " violated\n";
        for (const auto& v : rep.violations) out << "  violated: " << v << "\n";
    }
    for (const auto& d : deltas) {
        out << "reference goal " << d.goal << " " << d.mix << ": expected " << d.expected << ", got "
            << cost_text(d.actual);
        if (std::isfinite(d.actual)) out << " (delta " << (d.delta() >= 0 ? "+" : "") << d.delta() << ")";
        out << "\n";
    }
    return out.str();
}

} // namespace vbp::bench
