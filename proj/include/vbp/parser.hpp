#pragma once

// Readers and writers for the `.dom`, `.prob`, `.views` and plan file formats.
//
// Domain and problem files are PDDL-style s-expressions. The domain carries a
// `(:groups ...)` block that tags every predicate with one of the attribute
// groups, and an optional `(:families ...)` block with free-text attribute
// family labels. A views file lists one view per line, either as group
// shorthand ("R+E+S") or as an explicit whitespace separated predicate list.

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "vbp/model.hpp"
#include "vbp/sexpr.hpp"

namespace vbp {

/// Cumulative predicate sets, one per view. The last view is the full set.
struct ViewSpec {
    std::vector<std::set<std::string>> views;

    std::size_t size() const { return views.size(); }
    const std::set<std::string>& operator[](std::size_t i) const { return views.at(i); }
    bool operator==(const ViewSpec&) const = default;
};

namespace detail {

inline std::string read_name(const SExpr& e, std::string_view what) {
    if (!e.is_atom() || e.atom.empty()) e.fail("expected " + std::string(what));
    return e.atom;
}

inline bool is_variable(const std::string& s) { return !s.empty() && s[0] == '?'; }

/// Parses a typed list `a b - t1 c - t2`. Every entry must be typed.
inline std::vector<std::pair<std::string, std::string>> parse_typed_list(
    const std::vector<SExpr>& items, std::size_t begin, bool variables) {
    std::vector<std::pair<std::string, std::string>> out;
    std::vector<const SExpr*> pending;
    for (std::size_t i = begin; i < items.size(); ++i) {
        const auto& e = items[i];
        if (e.is_atom("-")) {
            if (pending.empty()) e.fail("'-' without preceding names");
            if (i + 1 >= items.size()) e.fail("missing type after '-'");
            const auto type = read_name(items[i + 1], "type name");
            for (const auto* p : pending) out.emplace_back(p->atom, type);
            pending.clear();
            ++i;
            continue;
        }
        auto name = read_name(e, variables ? "variable" : "name");
        if (variables && !is_variable(name)) e.fail("expected variable starting with '?', got '" + name + "'");
        if (!variables && is_variable(name)) e.fail("unexpected variable '" + name + "'");
        pending.push_back(&e);
    }
    if (!pending.empty()) pending.front()->fail("untyped entry '" + pending.front()->atom + "'");
    return out;
}

inline Literal parse_literal(const SExpr& e, const Domain& d, const ActionSchema& a) {
    if (!e.is_list || e.items.empty()) e.fail("expected literal");
    Literal lit;
    lit.predicate = read_name(e[0], "predicate name");
    if (lit.predicate == "not") e.fail("unexpected negation");
    const auto* pred = d.find_predicate(lit.predicate);
    if (!pred) e[0].fail("undeclared predicate '" + lit.predicate + "'");
    if (pred->arity() != e.size() - 1)
        e.fail("predicate '" + lit.predicate + "' expects " + std::to_string(pred->arity()) +
               " arguments");
    for (std::size_t i = 1; i < e.size(); ++i) {
        auto name = read_name(e[i], "term");
        if (is_variable(name)) {
            auto var = name.substr(1);
            if (!a.find_param(var)) e[i].fail("variable '" + name + "' is not a parameter");
            lit.args.push_back(Term::var(var));
        } else {
            lit.args.push_back(Term::constant(name));
        }
    }
    return lit;
}

/// `(and l1 l2 ...)`, a single literal, or `()`.
inline std::vector<const SExpr*> conjuncts(const SExpr& e) {
    std::vector<const SExpr*> out;
    if (!e.is_list) e.fail("expected a conjunction");
    if (e.items.empty()) return out;
    if (e[0].is_atom("and")) {
        for (std::size_t i = 1; i < e.size(); ++i) out.push_back(&e.items[i]);
    } else {
        out.push_back(&e);
    }
    return out;
}

inline ActionSchema parse_action(const SExpr& e, const Domain& d) {
    if (e.size() < 2) e.fail("action without name");
    ActionSchema a;
    a.name = read_name(e[1], "action name");
    a.origin = a.name;
    const SExpr* pre = nullptr;
    const SExpr* eff = nullptr;
    for (std::size_t i = 2; i < e.size(); i += 2) {
        const auto& key = e[i];
        if (i + 1 >= e.size()) key.fail("missing value for " + key.atom);
        const auto& val = e[i + 1];
        if (key.is_atom(":parameters")) {
            if (!val.is_list) val.fail("expected parameter list");
            for (auto& [var, type] : parse_typed_list(val.items, 0, true)) {
                if (!d.has_type(type)) val.fail("undeclared type '" + type + "'");
                auto name = var.substr(1);
                if (a.find_param(name)) val.fail("duplicate parameter '" + var + "'");
                a.params.push_back({name, type});
            }
        } else if (key.is_atom(":precondition")) {
            pre = &val;
        } else if (key.is_atom(":effect")) {
            eff = &val;
        } else {
            key.fail("unknown action field '" + key.atom + "'");
        }
    }
    if (pre) {
        for (const auto* c : conjuncts(*pre)) {
            if (c->is_list && !c->items.empty() && c->items[0].is_atom("not"))
                c->fail("negated literal in precondition of '" + a.name + "'");
            a.pre.push_back(parse_literal(*c, d, a));
        }
    }
    if (eff) {
        for (const auto* c : conjuncts(*eff)) {
            if (c->is_list && !c->items.empty() && c->items[0].is_atom("not")) {
                if (c->size() != 2) c->fail("malformed negation");
                a.del.push_back(parse_literal((*c)[1], d, a));
            } else {
                a.add.push_back(parse_literal(*c, d, a));
            }
        }
    }
    for (const auto& l : a.add)
        if (std::find(a.del.begin(), a.del.end(), l) != a.del.end())
            e.fail("action '" + a.name + "' both adds and deletes " + l.str());
    return a;
}

inline std::string header_name(const SExpr& e, std::string_view keyword) {
    if (!e.is_list || e.size() != 2 || !e[0].is_atom(keyword))
        e.fail("expected (" + std::string(keyword) + " NAME)");
    return read_name(e[1], "name");
}

inline Atom parse_ground_atom(const SExpr& e, const Domain& d, const Problem& p) {
    if (!e.is_list || e.items.empty()) e.fail("expected ground atom");
    if (e[0].is_atom("not")) e.fail("negated atoms are not allowed here");
    Atom atom;
    atom.predicate = read_name(e[0], "predicate name");
    const auto* pred = d.find_predicate(atom.predicate);
    if (!pred) e[0].fail("unknown predicate '" + atom.predicate + "'");
    if (pred->arity() != e.size() - 1)
        e.fail("predicate '" + atom.predicate + "' expects " + std::to_string(pred->arity()) +
               " arguments");
    for (std::size_t i = 1; i < e.size(); ++i) {
        auto name = read_name(e[i], "object");
        const auto* obj = p.find_object(name);
        if (!obj) e[i].fail("unknown object '" + name + "'");
        if (!obj->has_type(pred->param_types[i - 1]))
            e[i].fail("object '" + name + "' is not of type '" + pred->param_types[i - 1] + "'");
        atom.args.push_back(name);
    }
    return atom;
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace detail

// ---------------------------------------------------------------------------
// Domain

inline Domain parse_domain(std::string_view text) {
    const auto root = read_sexpr(text);
    if (!root.is_list || root.size() < 2 || !root[0].is_atom("define"))
        root.fail("expected (define (domain NAME) ...)");
    Domain d;
    d.name = detail::header_name(root[1], "domain");

    std::map<std::string, Group> groups;
    std::map<std::string, std::string> families;
    std::vector<const SExpr*> actions;
    const SExpr* groups_expr = nullptr;
    for (std::size_t i = 2; i < root.size(); ++i) {
        const auto& sec = root[i];
        if (!sec.is_list || sec.items.empty() || !sec[0].is_atom()) sec.fail("expected section");
        const auto& key = sec[0].atom;
        if (key == ":types") {
            for (std::size_t j = 1; j < sec.size(); ++j) {
                auto t = detail::read_name(sec[j], "type name");
                if (t == "-") sec[j].fail("type hierarchies are not supported");
                if (d.has_type(t)) sec[j].fail("duplicate type '" + t + "'");
                d.types.push_back(t);
            }
        } else if (key == ":predicates") {
            for (std::size_t j = 1; j < sec.size(); ++j) {
                const auto& pe = sec[j];
                if (!pe.is_list || pe.items.empty()) pe.fail("expected predicate declaration");
                PredicateSchema ps;
                ps.name = detail::read_name(pe[0], "predicate name");
                if (d.find_predicate(ps.name)) pe.fail("duplicate predicate '" + ps.name + "'");
                for (auto& [var, type] : detail::parse_typed_list(pe.items, 1, true)) {
                    if (!d.has_type(type)) pe.fail("undeclared type '" + type + "'");
                    ps.param_types.push_back(type);
                }
                d.predicates.push_back(std::move(ps));
            }
        } else if (key == ":groups") {
            groups_expr = &sec;
            for (std::size_t j = 1; j < sec.size(); ++j) {
                const auto& ge = sec[j];
                if (!ge.is_list || ge.items.empty()) ge.fail("expected (GROUP pred ...)");
                auto g = group_from_name(detail::read_name(ge[0], "group name"));
                if (!g) ge[0].fail("unknown group '" + ge[0].atom + "'");
                for (std::size_t k = 1; k < ge.size(); ++k) {
                    auto n = detail::read_name(ge[k], "predicate name");
                    if (!groups.emplace(n, *g).second) ge[k].fail("predicate '" + n + "' grouped twice");
                }
            }
        } else if (key == ":families") {
            for (std::size_t j = 1; j < sec.size(); ++j) {
                const auto& fe = sec[j];
                if (!fe.is_list || fe.items.empty()) fe.fail("expected (FAMILY pred ...)");
                auto fam = detail::read_name(fe[0], "family name");
                for (std::size_t k = 1; k < fe.size(); ++k) {
                    auto n = detail::read_name(fe[k], "predicate name");
                    if (!families.emplace(n, fam).second)
                        fe[k].fail("predicate '" + n + "' has two families");
                }
            }
        } else if (key == ":action") {
            actions.push_back(&sec);
        } else if (key == ":requirements") {
            // accepted and ignored
        } else {
            sec[0].fail("unknown section '" + key + "'");
        }
    }

    if (!groups_expr && !d.predicates.empty()) root.fail("missing (:groups ...) block");
    for (const auto& [name, g] : groups)
        if (!d.find_predicate(name)) groups_expr->fail("group lists undeclared predicate '" + name + "'");
    for (auto& p : d.predicates) {
        auto it = groups.find(p.name);
        if (it == groups.end()) groups_expr->fail("predicate '" + p.name + "' has no group");
        p.group = it->second;
        if (auto f = families.find(p.name); f != families.end()) p.family = f->second;
    }
    for (const auto& [name, fam] : families)
        if (!d.find_predicate(name)) root.fail("family lists undeclared predicate '" + name + "'");

    for (const auto* ae : actions) {
        auto a = detail::parse_action(*ae, d);
        if (d.find_action(a.name)) ae->fail("duplicate action '" + a.name + "'");
        d.actions.push_back(std::move(a));
    }
    return d;
}

inline std::string serialize_literal(const Literal& l) { return l.str(); }

inline std::string serialize_domain(const Domain& d) {
    std::ostringstream out;
    out << "(define (domain " << d.name << ")\n";
    out << "  (:types";
    for (const auto& t : d.types) out << ' ' << t;
    out << ")\n";
    out << "  (:predicates";
    for (const auto& p : d.predicates) {
        out << "\n    (" << p.name;
        for (std::size_t i = 0; i < p.param_types.size(); ++i)
            out << " ?x" << i << " - " << p.param_types[i];
        out << ")";
    }
    out << ")\n";
    out << "  (:groups";
    for (Group g : all_groups) {
        bool any = false;
        for (const auto& p : d.predicates) {
            if (p.group != g) continue;
            if (!any) out << "\n    (" << group_name(g);
            any = true;
            out << ' ' << p.name;
        }
        if (any) out << ")";
    }
    out << ")\n";
    std::vector<std::string> fam_order;
    for (const auto& p : d.predicates)
        if (!p.family.empty() &&
            std::find(fam_order.begin(), fam_order.end(), p.family) == fam_order.end())
            fam_order.push_back(p.family);
    if (!fam_order.empty()) {
        out << "  (:families";
        for (const auto& f : fam_order) {
            out << "\n    (" << f;
            for (const auto& p : d.predicates)
                if (p.family == f) out << ' ' << p.name;
            out << ")";
        }
        out << ")\n";
    }
    for (const auto& a : d.actions) {
        out << "  (:action " << a.name << "\n";
        out << "    :parameters (";
        for (std::size_t i = 0; i < a.params.size(); ++i)
            out << (i ? " " : "") << '?' << a.params[i].name << " - " << a.params[i].type;
        out << ")\n";
        out << "    :precondition (and";
        for (const auto& l : a.pre) out << ' ' << l.str();
        out << ")\n";
        out << "    :effect (and";
        for (const auto& l : a.add) out << ' ' << l.str();
        for (const auto& l : a.del) out << " (not " << l.str() << ")";
        out << "))\n";
    }
    out << ")\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// Problem

inline Problem parse_problem(std::string_view text, const Domain& d) {
    const auto root = read_sexpr(text);
    if (!root.is_list || root.size() < 2 || !root[0].is_atom("define"))
        root.fail("expected (define (problem NAME) ...)");
    Problem p;
    p.name = detail::header_name(root[1], "problem");
    const SExpr* init = nullptr;
    const SExpr* goal = nullptr;
    for (std::size_t i = 2; i < root.size(); ++i) {
        const auto& sec = root[i];
        if (!sec.is_list || sec.items.empty() || !sec[0].is_atom()) sec.fail("expected section");
        const auto& key = sec[0].atom;
        if (key == ":domain") {
            p.domain_name = detail::read_name(sec.size() == 2 ? sec[1] : sec, "domain name");
            if (p.domain_name != d.name)
                sec[1].fail("problem is for domain '" + p.domain_name + "', not '" + d.name + "'");
        } else if (key == ":objects") {
            for (auto& [name, type] : detail::parse_typed_list(sec.items, 1, false)) {
                if (!d.has_type(type)) sec.fail("undeclared type '" + type + "'");
                auto it = std::find_if(p.objects.begin(), p.objects.end(),
                                       [&](const Object& o) { return o.name == name; });
                if (it == p.objects.end()) {
                    p.objects.push_back({name, {type}});
                } else if (!it->has_type(type)) {
                    it->types.push_back(type);
                }
            }
        } else if (key == ":init") {
            init = &sec;
        } else if (key == ":goal") {
            goal = &sec;
        } else {
            sec[0].fail("unknown section '" + key + "'");
        }
    }
    if (p.domain_name.empty()) root.fail("missing (:domain NAME)");
    if (init)
        for (std::size_t i = 1; i < init->size(); ++i)
            p.init.insert(detail::parse_ground_atom((*init)[i], d, p));
    if (goal) {
        if (goal->size() != 2) goal->fail("expected (:goal (and ...))");
        for (const auto* c : detail::conjuncts((*goal)[1]))
            p.goal.insert(detail::parse_ground_atom(*c, d, p));
    }
    return p;
}

inline std::string serialize_problem(const Problem& p) {
    std::ostringstream out;
    out << "(define (problem " << p.name << ")\n";
    out << "  (:domain " << p.domain_name << ")\n";
    out << "  (:objects";
    // Runs of consecutive objects with identical type lists share lines; an
    // object with several types is listed once per type.
    for (std::size_t i = 0; i < p.objects.size();) {
        std::size_t j = i + 1;
        while (j < p.objects.size() && p.objects[j].types == p.objects[i].types) ++j;
        for (const auto& t : p.objects[i].types) {
            out << "\n   ";
            for (std::size_t k = i; k < j; ++k) out << ' ' << p.objects[k].name;
            out << " - " << t;
        }
        i = j;
    }
    out << ")\n";
    out << "  (:init";
    for (const auto& a : p.init) out << "\n    " << a.str();
    out << ")\n";
    out << "  (:goal (and";
    for (const auto& a : p.goal) out << "\n    " << a.str();
    out << ")))\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// Views

namespace detail {

inline std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

} // namespace detail

/// Checks ordering, completeness and names of a view sequence.
inline void check_views(const ViewSpec& v, const Domain& d) {
    if (v.views.empty()) throw ModelError("no views defined");
    const auto all = d.predicate_names();
    for (std::size_t n = 0; n < v.size(); ++n) {
        for (const auto& name : v[n])
            if (!all.count(name))
                throw ModelError("view " + std::to_string(n + 1) + ": unknown predicate '" + name + "'");
        if (n > 0) {
            const auto& prev = v[n - 1];
            bool superset = std::includes(v[n].begin(), v[n].end(), prev.begin(), prev.end());
            if (!superset || v[n].size() == prev.size())
                throw ModelError("view " + std::to_string(n + 1) +
                                 " is not a strict superset of view " + std::to_string(n));
        }
    }
    if (v.views.back() != all) throw ModelError("final view does not contain every predicate");
}

inline ViewSpec parse_views(std::string_view text, const Domain& d) {
    ViewSpec spec;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        auto raw = text.substr(start, end == std::string_view::npos ? text.size() - start : end - start);
        start = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;
        auto hash = raw.find_first_of("#;");
        auto line = detail::trim(raw.substr(0, hash));
        if (line.empty()) continue;

        std::set<std::string> view;
        const bool shorthand =
            line.find('+') != std::string::npos ||
            (line.find_first_of(" \t") == std::string::npos && !d.find_predicate(line) &&
             (group_from_symbol(line) || group_from_name(line)));
        if (shorthand) {
            for (const auto& part : detail::split(line, '+')) {
                auto g = group_from_symbol(part);
                if (!g) g = group_from_name(part);
                if (!g) throw ParseError("unknown group '" + part + "'", line_no, 1);
                auto members = d.predicates_in(*g);
                view.insert(members.begin(), members.end());
            }
        } else {
            std::istringstream ss(line);
            std::string name;
            while (ss >> name) {
                if (!d.find_predicate(name))
                    throw ParseError("unknown predicate '" + name + "'", line_no, 1);
                view.insert(name);
            }
        }
        spec.views.push_back(std::move(view));
    }
    try {
        check_views(spec, d);
    } catch (const ModelError& e) {
        throw ParseError(e.what(), line_no, 1);
    }
    return spec;
}

/// Writes group shorthand whenever a view is exactly a union of groups.
inline std::string serialize_views(const ViewSpec& v, const Domain& d) {
    std::ostringstream out;
    for (const auto& view : v.views) {
        std::set<std::string> covered;
        std::vector<Group> used;
        bool exact = true;
        for (Group g : all_groups) {
            auto members = d.predicates_in(g);
            if (members.empty()) continue;
            bool all_in = std::includes(view.begin(), view.end(), members.begin(), members.end());
            bool none_in = std::none_of(members.begin(), members.end(),
                                        [&](const std::string& m) { return view.count(m) > 0; });
            if (all_in) {
                used.push_back(g);
                covered.insert(members.begin(), members.end());
            } else if (!none_in) {
                exact = false;
            }
        }
        if (exact && covered == view && !used.empty()) {
            for (std::size_t i = 0; i < used.size(); ++i) out << (i ? "+" : "") << group_symbol(used[i]);
        } else {
            bool first = true;
            for (const auto& p : d.predicates)
                if (view.count(p.name)) {
                    out << (first ? "" : " ") << p.name;
                    first = false;
                }
        }
        out << '\n';
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Plans: one step per line, `name obj1 obj2 ...`

inline Plan parse_plan(std::string_view text, const Domain& d) {
    Plan plan;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find(';');
        line = detail::trim(line.substr(0, hash));
        if (line.empty()) continue;
        if (line.front() == '(' && line.back() == ')') line = line.substr(1, line.size() - 2);
        std::istringstream ss(line);
        GroundAction step;
        ss >> step.schema;
        std::string arg;
        while (ss >> arg) step.args.push_back(arg);
        const auto* schema = d.find_action(step.schema);
        if (!schema) throw ParseError("unknown action '" + step.schema + "'", line_no, 1);
        if (schema->params.size() != step.args.size())
            throw ParseError("action '" + step.schema + "' expects " +
                                 std::to_string(schema->params.size()) + " arguments",
                             line_no, 1);
        plan.steps.push_back(std::move(step));
    }
    return plan;
}

inline std::string serialize_plan(const Plan& plan) {
    std::ostringstream out;
    for (const auto& s : plan.steps) out << s.str() << '\n';
    return out.str();
}

inline Domain load_domain(const std::string& path) { return parse_domain(detail::slurp(path)); }
inline Problem load_problem(const std::string& path, const Domain& d) {
    return parse_problem(detail::slurp(path), d);
}
inline ViewSpec load_views(const std::string& path, const Domain& d) {
    return parse_views(detail::slurp(path), d);
}
inline Plan load_plan(const std::string& path, const Domain& d) {
    return parse_plan(detail::slurp(path), d);
}

} // namespace vbp
