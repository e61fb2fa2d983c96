#pragma once

// Fixtures shared by the unit tests and the acceptance runner.

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "vbp/vbp.hpp"

namespace fixtures {

// ---------------------------------------------------------------------------
// Independent oracle: breadth-first search over AtomSet states with actions
// grounded naively from the schemas (every type-correct argument tuple).

inline std::vector<vbp::GroundAction> naive_grounding(const vbp::Domain& d, const vbp::Problem& p) {
    std::vector<vbp::GroundAction> out;
    for (const auto& a : d.actions) {
        std::vector<std::vector<std::string>> choices;
        for (const auto& param : a.params) choices.push_back(p.objects_of_type(param.type));
        std::vector<std::size_t> idx(a.params.size(), 0);
        bool empty = std::any_of(choices.begin(), choices.end(), [](const auto& c) { return c.empty(); });
        if (empty) continue;
        for (;;) {
            std::vector<std::string> args;
            for (std::size_t i = 0; i < idx.size(); ++i) args.push_back(choices[i][idx[i]]);
            out.push_back(vbp::instantiate_action(a, args, p));
            std::size_t k = 0;
            while (k < idx.size() && ++idx[k] == choices[k].size()) idx[k++] = 0;
            if (k == idx.size()) break;
        }
    }
    return out;
}

inline bool satisfies(const vbp::AtomSet& state, const vbp::AtomSet& goal) {
    return std::includes(state.begin(), state.end(), goal.begin(), goal.end());
}

/// Optimal unit-cost plan length from `start`, nullopt when unreachable.
/// Returns nullopt as well when more than `cap` states are visited and sets
/// `capped`. States are bit masks, so at most 64 distinct atoms may occur.
inline std::optional<int> bfs_distance(const std::vector<vbp::GroundAction>& actions, const vbp::AtomSet& start,
                                       const vbp::AtomSet& goal, std::size_t cap, bool* capped = nullptr) {
    if (capped) *capped = false;
    std::map<vbp::Atom, int> id;
    auto mask_of = [&](const vbp::AtomSet& atoms) {
        std::uint64_t m = 0;
        for (const auto& a : atoms) {
            auto [it, fresh] = id.emplace(a, static_cast<int>(id.size()));
            if (it->second >= 64) throw std::length_error("oracle supports at most 64 atoms");
            m |= std::uint64_t{1} << it->second;
        }
        return m;
    };
    struct Masks {
        std::uint64_t pre, add, del;
    };
    std::vector<Masks> ops;
    for (const auto& a : actions) ops.push_back({mask_of(a.pre), mask_of(a.add), mask_of(a.del)});
    const auto init = mask_of(start);
    const auto target = mask_of(goal);

    std::unordered_map<std::uint64_t, int> dist{{init, 0}};
    std::deque<std::uint64_t> queue{init};
    while (!queue.empty()) {
        auto s = queue.front();
        queue.pop_front();
        int g = dist[s];
        if ((s & target) == target) return g;
        for (const auto& o : ops) {
            if ((s & o.pre) != o.pre) continue;
            auto t = (s & ~o.del) | o.add;
            if (dist.emplace(t, g + 1).second) {
                if (dist.size() > cap) {
                    if (capped) *capped = true;
                    return std::nullopt;
                }
                queue.push_back(t);
            }
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Random micro-instances: unary and binary predicates over a few objects.

struct MicroInstance {
    std::string domain_text;
    std::string problem_text;
};

inline MicroInstance random_instance(std::mt19937& rng) {
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    const int unary = 4;
    const int objects = 3;
    std::ostringstream dom;
    dom << "(define (domain micro)\n  (:types obj)\n  (:predicates";
    for (int i = 0; i < unary; ++i) dom << " (p" << i << " ?x - obj)";
    dom << " (r ?x - obj ?y - obj))\n  (:groups (elementary";
    for (int i = 0; i < unary; ++i) dom << " p" << i;
    dom << " r))\n";

    auto literal = [&](int nparams) {
        std::ostringstream l;
        if (nparams == 2 && pick(0, 3) == 0) {
            int a = pick(0, 1);
            l << "(r ?v" << a << " ?v" << 1 - a << ")";
        } else {
            l << "(p" << pick(0, unary - 1) << " ?v" << pick(0, nparams - 1) << ")";
        }
        return l.str();
    };
    const int schemas = pick(3, 5);
    for (int s = 0; s < schemas; ++s) {
        int nparams = pick(1, 2);
        dom << "  (:action a" << s << "\n    :parameters (";
        for (int v = 0; v < nparams; ++v) dom << (v ? " " : "") << "?v" << v << " - obj";
        dom << ")\n    :precondition (and";
        for (int k = pick(1, 2); k > 0; --k) dom << " " << literal(nparams);
        std::set<std::string> adds;
        for (int k = pick(1, 2); k > 0; --k) adds.insert(literal(nparams));
        dom << ")\n    :effect (and";
        for (const auto& a : adds) dom << " " << a;
        for (int k = pick(0, 2); k > 0; --k) {
            auto del = literal(nparams);
            if (!adds.count(del)) dom << " (not " << del << ")";
        }
        dom << "))\n";
    }
    dom << ")\n";

    std::ostringstream prob;
    prob << "(define (problem micro_p)\n  (:domain micro)\n  (:objects";
    for (int o = 0; o < objects; ++o) prob << " o" << o;
    prob << " - obj)\n  (:init";
    std::set<std::pair<int, int>> initial;
    for (int i = 0; i < unary; ++i)
        for (int o = 0; o < objects; ++o)
            if (pick(0, 2) == 0) {
                initial.insert({i, o});
                prob << " (p" << i << " o" << o << ")";
            }
    for (int a = 0; a < objects; ++a)
        for (int b = 0; b < objects; ++b)
            if (a != b && pick(0, 3) == 0) prob << " (r o" << a << " o" << b << ")";
    prob << ")\n  (:goal (and";
    // Goal atoms are false initially.
    int goals = pick(2, 3);
    for (int tries = 0; goals > 0 && tries < 50; ++tries) {
        std::pair<int, int> g{pick(0, unary - 1), pick(0, objects - 1)};
        if (!initial.insert(g).second) continue;
        prob << " (p" << g.first << " o" << g.second << ")";
        --goals;
    }
    prob << ")))\n";
    return {dom.str(), prob.str()};
}

// ---------------------------------------------------------------------------
// Table II: the three published actions per view for goal 3.

inline vbp::Plan view1_plan_goal3(const vbp::Domain& view_domain) {
    return vbp::parse_plan("use_microwave microwave water\n"
                           "transfer_mint mint_tea_bag water\n"
                           "use_fridge fridge water\n",
                           view_domain);
}

/// View-2 plan consistent with the view-3 groundings in Table II: the water
/// is treated in its pitcher and poured into the glass at the end.
inline vbp::Plan view2_plan_goal3(const vbp::Domain& view_domain) {
    return vbp::parse_plan("get_out mint_tea_bag table robot_hand\n"
                           "put_in mint_tea_bag water_pitcher robot_hand\n"
                           "get_out water_pitcher table robot_hand\n"
                           "put_in water_pitcher microwave robot_hand\n"
                           "use_microwave__0 water_pitcher\n"
                           "transfer_mint__0 water_pitcher\n"
                           "get_out water_pitcher microwave robot_hand\n"
                           "put_in water_pitcher fridge robot_hand\n"
                           "use_fridge__0 water_pitcher\n"
                           "get_out water_pitcher fridge robot_hand\n"
                           "get_out glass table robot_hand\n"
                           "pour water water_pitcher glass robot_hand\n"
                           "put_in glass tray robot_hand\n",
                           view_domain);
}

struct TableTwoViews {
    vbp::Domain original;
    vbp::ViewTask view1, view2, view3;
};

/// Filters and modifies the kitchen domain along the fixture plans above.
inline TableTwoViews table_two_views() {
    TableTwoViews t;
    t.original = vbp::kitchen::build_domain();
    const auto problem = vbp::kitchen::build_problem("3");
    const auto views = vbp::kitchen::build_views(t.original);
    std::set<std::string> considered;
    auto step = [&](const vbp::Domain& current, std::size_t n) {
        auto task = vbp::filter_problem(current, problem, views[n]);
        for (const auto& a : task.domain.actions) considered.insert(a.origin);
        return task;
    };
    vbp::Domain current = t.original;
    t.view1 = step(current, 0);
    current.actions = vbp::modify(t.original.actions, t.view1.domain, view1_plan_goal3(t.view1.domain), considered);
    t.view2 = step(current, 1);
    current.actions = vbp::modify(t.original.actions, t.view2.domain, view2_plan_goal3(t.view2.domain), considered);
    t.view3 = step(current, 2);
    return t;
}

inline std::string params_text(const vbp::ActionSchema& a) {
    std::string s;
    for (const auto& p : a.params) s += (s.empty() ? "?" : " ?") + p.name;
    return s;
}

inline std::string literals_text(const std::vector<vbp::Literal>& lits) {
    std::string s;
    for (const auto& l : lits) s += (s.empty() ? "" : " ") + l.str();
    return s;
}

inline std::vector<const vbp::ActionSchema*> copies_of(const vbp::Domain& d, const std::string& origin) {
    std::vector<const vbp::ActionSchema*> out;
    for (const auto& a : d.actions)
        if (a.origin == origin) out.push_back(&a);
    return out;
}

/// Compares every Table II cell; returns one message per mismatch.
inline std::vector<std::string> table_two_mismatches(const TableTwoViews& t) {
    std::vector<std::string> bad;
    auto expect = [&](bool ok, const std::string& what) {
        if (!ok) bad.push_back(what);
    };
    auto expect_eq = [&](const std::string& got, const std::string& want, const std::string& what) {
        if (got != want) bad.push_back(what + ": got '" + got + "', want '" + want + "'");
    };
    using Binding = std::map<std::string, std::string>;

    // a) use_microwave
    {
        auto v1 = copies_of(t.view1.domain, "use_microwave");
        expect(v1.size() == 1, "use_microwave: one schema in view 1");
        if (v1.size() == 1) {
            expect_eq(params_text(*v1[0]), "?m ?o", "use_microwave view 1 parameters");
            expect_eq(literals_text(v1[0]->pre), "(present ?m) (wet ?o)", "use_microwave view 1 preconditions");
            expect_eq(literals_text(v1[0]->add), "(hot ?o)", "use_microwave view 1 add");
            expect_eq(literals_text(v1[0]->del), "(cold ?o) (warm ?o)", "use_microwave view 1 del");
        }
        auto v2 = copies_of(t.view2.domain, "use_microwave");
        expect(v2.size() == 1, "use_microwave: one partially ground copy in view 2");
        if (v2.size() == 1) {
            expect(v2[0]->binding == Binding{{"m", "microwave"}, {"o", "water"}}, "use_microwave view 2 binding");
            expect_eq(params_text(*v2[0]), "?c", "use_microwave view 2 free parameters");
            expect_eq(literals_text(v2[0]->pre),
                      "(present microwave) (wet water) (inside ?c microwave) (inside water ?c)",
                      "use_microwave view 2 preconditions");
            expect_eq(literals_text(v2[0]->add), "(hot water)", "use_microwave view 2 add");
        }
        auto v3 = copies_of(t.view3.domain, "use_microwave");
        expect(v3.size() == 1, "use_microwave: one fully ground copy in view 3");
        if (v3.size() == 1) {
            expect(v3[0]->binding == Binding{{"c", "water_pitcher"}, {"m", "microwave"}, {"o", "water"}},
                   "use_microwave view 3 binding");
            expect(v3[0]->params.empty(), "use_microwave view 3 fully ground");
            expect_eq(literals_text(v3[0]->pre),
                      "(present microwave) (wet water) (inside water_pitcher microwave) "
                      "(inside water water_pitcher) (closed microwave) (on microwave)",
                      "use_microwave view 3 preconditions");
            expect_eq(literals_text(v3[0]->del), "(cold water) (warm water)", "use_microwave view 3 del");
        }
    }
    // b) transfer_mint
    {
        auto v1 = copies_of(t.view1.domain, "transfer_mint");
        expect(v1.size() == 1, "transfer_mint: one schema in view 1");
        if (v1.size() == 1) {
            expect_eq(params_text(*v1[0]), "?o1 ?o2", "transfer_mint view 1 parameters");
            expect_eq(literals_text(v1[0]->pre), "(mint ?o1) (hot ?o2) (liquid ?o2)",
                      "transfer_mint view 1 preconditions");
            expect_eq(literals_text(v1[0]->add), "(mint ?o2)", "transfer_mint view 1 add");
            expect_eq(literals_text(v1[0]->del), "(no_aroma ?o2)", "transfer_mint view 1 del");
        }
        auto v2 = copies_of(t.view2.domain, "transfer_mint");
        expect(v2.size() == 1, "transfer_mint: one partially ground copy in view 2");
        if (v2.size() == 1) {
            expect(v2[0]->binding == Binding{{"o1", "mint_tea_bag"}, {"o2", "water"}}, "transfer_mint view 2 binding");
            expect_eq(params_text(*v2[0]), "?c", "transfer_mint view 2 free parameters");
            expect_eq(literals_text(v2[0]->pre),
                      "(mint mint_tea_bag) (hot water) (liquid water) (inside mint_tea_bag ?c) (inside water ?c)",
                      "transfer_mint view 2 preconditions");
        }
        auto v3 = copies_of(t.view3.domain, "transfer_mint");
        expect(v3.size() == 1, "transfer_mint: one fully ground copy in view 3");
        if (v3.size() == 1) {
            expect(v3[0]->binding == Binding{{"c", "water_pitcher"}, {"o1", "mint_tea_bag"}, {"o2", "water"}},
                   "transfer_mint view 3 binding");
            expect(v3[0]->params.empty(), "transfer_mint view 3 fully ground");
        }
    }
    // c) put_in
    {
        expect(copies_of(t.view1.domain, "put_in").empty(), "put_in removed in view 1");
        const auto& orig = *t.original.find_action("put_in");
        expect(!vbp::filter_action(orig, t.view1.domain.predicate_names()).has_value(),
               "put_in filter in view 1 yields no action");
        auto v2 = copies_of(t.view2.domain, "put_in");
        expect(v2.size() == 1, "put_in: reintroduced once in view 2");
        if (v2.size() == 1) {
            expect(v2[0]->binding.empty(), "put_in view 2 unbound");
            expect_eq(params_text(*v2[0]), "?o ?c ?h", "put_in view 2 parameters");
            expect_eq(literals_text(v2[0]->pre), "(solid ?o) (inside ?o ?h)", "put_in view 2 preconditions");
            expect_eq(literals_text(v2[0]->add), "(inside ?o ?c)", "put_in view 2 add");
            expect_eq(literals_text(v2[0]->del), "(inside ?o ?h)", "put_in view 2 del");
        }
        auto v3 = copies_of(t.view3.domain, "put_in");
        std::set<Binding> got;
        for (const auto* a : v3) {
            got.insert(a->binding);
            expect(a->params.empty(), "put_in view 3 copy fully ground");
            auto o = a->binding.count("o") ? a->binding.at("o") : "?";
            auto c = a->binding.count("c") ? a->binding.at("c") : "?";
            auto h = a->binding.count("h") ? a->binding.at("h") : "?";
            expect_eq(literals_text(a->pre), "(solid " + o + ") (inside " + o + " " + h + ") (open " + c + ")",
                      "put_in view 3 preconditions");
        }
        std::set<Binding> want = {
            {{"o", "mint_tea_bag"}, {"c", "water_pitcher"}, {"h", "robot_hand"}},
            {{"o", "glass"}, {"c", "tray"}, {"h", "robot_hand"}},
            {{"o", "water_pitcher"}, {"c", "microwave"}, {"h", "robot_hand"}},
            {{"o", "water_pitcher"}, {"c", "fridge"}, {"h", "robot_hand"}},
        };
        expect(v3.size() == 4, "put_in: four copies in view 3, got " + std::to_string(v3.size()));
        expect(got == want, "put_in view 3 bindings");
    }
    return bad;
}

// ---------------------------------------------------------------------------
// The view-3 plan for goal 3 as listed in the example figure, with the
// get_out that takes the pitcher off the table before it goes into the
// microwave.

inline constexpr const char* fig2_plan_text =
    "get_out mint_tea_bag table robot_hand\n"
    "open water_pitcher\n"
    "put_in mint_tea_bag water_pitcher robot_hand\n"
    "open microwave\n"
    "get_out water_pitcher table robot_hand\n"
    "put_in water_pitcher microwave robot_hand\n"
    "close microwave\n"
    "switch_on microwave\n"
    "use_microwave microwave water water_pitcher\n"
    "transfer_mint mint_tea_bag water water_pitcher\n"
    "switch_off microwave\n"
    "open microwave\n"
    "get_out water_pitcher microwave robot_hand\n"
    "open fridge\n"
    "put_in water_pitcher fridge robot_hand\n"
    "close fridge\n"
    "use_fridge fridge water water_pitcher\n"
    "open fridge\n"
    "get_out water_pitcher fridge robot_hand\n"
    "get_out glass table robot_hand\n"
    "pour water water_pitcher glass robot_hand\n"
    "put_in glass tray robot_hand\n";

// ---------------------------------------------------------------------------
// Shortcut fixture: an oven heats in one step once manipulation is ignored,
// a blower needs the item wiped dry first. With every predicate visible the
// blower route is cheaper, because the oven has to be opened, loaded and
// switched on.

inline constexpr const char* shortcut_domain_text = R"(
(define (domain shortcut)
  (:types thing a_hand a_container an_oven a_blower)
  (:predicates (present ?x - thing) (hot ?x - thing) (cold ?x - thing) (wet ?x - thing) (dry ?x - thing)
               (inside ?x - thing ?y - thing) (close ?x - thing ?y - thing)
               (open ?x - thing) (closed ?x - thing) (on ?x - thing) (off ?x - thing))
  (:groups (required present) (elementary hot cold wet dry) (spatial inside close)
           (device open closed on off))
  (:action use_oven
    :parameters (?d - an_oven ?o - thing)
    :precondition (and (present ?d) (inside ?o ?d) (on ?d))
    :effect (and (hot ?o) (not (cold ?o))))
  (:action use_blower
    :parameters (?d - a_blower ?o - thing)
    :precondition (and (present ?d) (dry ?o) (close ?d ?o) (on ?d))
    :effect (and (hot ?o) (not (cold ?o))))
  (:action wipe
    :parameters (?o - thing)
    :precondition (and (wet ?o))
    :effect (and (dry ?o) (not (wet ?o))))
  (:action get_out
    :parameters (?o - thing ?c - a_container ?h - a_hand)
    :precondition (and (inside ?o ?c))
    :effect (and (inside ?o ?h) (not (inside ?o ?c))))
  (:action put_in
    :parameters (?o - thing ?c - a_container ?h - a_hand)
    :precondition (and (inside ?o ?h) (open ?c))
    :effect (and (inside ?o ?c) (not (inside ?o ?h))))
  (:action approach
    :parameters (?d - a_blower ?o - thing)
    :precondition (and (present ?d))
    :effect (and (close ?d ?o)))
  (:action open
    :parameters (?x - thing)
    :precondition (and (present ?x) (closed ?x))
    :effect (and (open ?x) (not (closed ?x))))
  (:action switch_on
    :parameters (?x - thing)
    :precondition (and (present ?x) (off ?x))
    :effect (and (on ?x) (not (off ?x)))))
)";

inline constexpr const char* shortcut_problem_text = R"(
(define (problem heat_item)
  (:domain shortcut)
  (:objects oven - an_oven oven - a_container oven - thing
            blower - a_blower blower - thing
            table - a_container table - thing
            item - thing hand - a_hand hand - thing)
  (:init (present oven) (present blower) (present table) (present item) (present hand)
         (inside item table) (cold item) (wet item) (open table)
         (closed oven) (off oven) (off blower))
  (:goal (and (hot item))))
)";

inline constexpr const char* shortcut_views_text = "R+E\nR+E+S\nR+E+S+D\n";

} // namespace fixtures
