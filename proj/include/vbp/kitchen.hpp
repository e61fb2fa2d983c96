#pragma once

// Kitchen domain built on elementary attributes: predicate groups, devices,
// objects, the scene's initial state and the goal catalogue (goals 0-5 and
// their pairwise combinations).

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vbp/model.hpp"
#include "vbp/parser.hpp"

namespace vbp::kitchen {

inline constexpr std::string_view domain_text = R"PDDL(
(define (domain kitchen)
  (:types thing a_hand a_container a_movable a_vessel a_liquid a_food an_openable
          a_switchable a_microwave a_fridge a_toaster a_blender a_hair_dryer a_contact_grill)
  (:predicates
    (absent ?x - thing) (present ?x - thing)
    (hot ?x - thing) (warm ?x - thing) (cold ?x - thing)
    (solid ?x - thing) (liquid ?x - thing) (gas ?x - thing)
    (white ?x - thing) (brown ?x - thing) (gray ?x - thing) (purple ?x - thing) (no_color ?x - thing)
    (chamomile ?x - thing) (mint ?x - thing) (no_aroma ?x - thing)
    (salt ?x - thing) (bitter ?x - thing) (sweet ?x - thing) (sour ?x - thing) (no_taste ?x - thing)
    (light ?x - thing) (dark ?x - thing)
    (dry ?x - thing) (wet ?x - thing)
    (soft ?x - thing) (hard ?x - thing)
    (clean ?x - thing) (dirty ?x - thing)
    (whole ?x - thing) (granular ?x - thing)
    (inside ?x - thing ?y - thing) (outside ?x - thing ?y - thing)
    (close ?x - thing ?y - thing) (distant ?x - thing ?y - thing)
    (permeable ?x - thing) (impermeable ?x - thing)
    (closed ?x - thing) (open ?x - thing)
    (off ?x - thing) (on ?x - thing))
  (:groups
    (required absent present)
    (elementary hot warm cold solid liquid gas white brown gray purple no_color
                chamomile mint no_aroma salt bitter sweet sour no_taste light dark
                dry wet soft hard clean dirty whole granular)
    (spatial inside outside close distant permeable impermeable)
    (device closed open off on))
  (:families
    (presence absent present)
    (temperature hot warm cold)
    (state_of_matter solid liquid gas)
    (color white brown gray purple no_color)
    (aroma chamomile mint no_aroma)
    (taste salt bitter sweet sour no_taste)
    (light light dark)
    (wetness dry wet)
    (hardness soft hard)
    (cleanness clean dirty)
    (granularity whole granular)
    (content inside outside)
    (distance close distant)
    (permeability permeable impermeable)
    (openness closed open)
    (activity off on))

  ; --- device effects -----------------------------------------------------
  (:action use_microwave
    :parameters (?m - a_microwave ?o - a_food ?c - a_container)
    :precondition (and (present ?m) (wet ?o) (inside ?c ?m) (inside ?o ?c) (closed ?m) (on ?m))
    :effect (and (hot ?o) (not (cold ?o)) (not (warm ?o))))
  (:action use_fridge
    :parameters (?f - a_fridge ?o - a_food ?c - a_container)
    :precondition (and (present ?f) (inside ?c ?f) (inside ?o ?c) (closed ?f) (on ?f))
    :effect (and (cold ?o) (not (hot ?o)) (not (warm ?o))))
  (:action use_toaster
    :parameters (?t - a_toaster ?o - a_food)
    :precondition (and (present ?t) (solid ?o) (inside ?o ?t) (on ?t))
    :effect (and (hot ?o) (hard ?o) (brown ?o)
                 (not (cold ?o)) (not (warm ?o)) (not (soft ?o)) (not (white ?o))))
  (:action use_contact_grill
    :parameters (?g - a_contact_grill ?o - a_food)
    :precondition (and (present ?g) (solid ?o) (inside ?o ?g) (closed ?g) (on ?g))
    :effect (and (hot ?o) (brown ?o) (dry ?o)
                 (not (cold ?o)) (not (warm ?o)) (not (white ?o)) (not (wet ?o))))
  (:action use_blender
    :parameters (?b - a_blender ?o - a_food)
    :precondition (and (present ?b) (solid ?o) (inside ?o ?b) (on ?b))
    :effect (and (granular ?o) (not (whole ?o))))
  (:action use_hair_dryer
    :parameters (?d - a_hair_dryer ?o - a_food)
    :precondition (and (present ?d) (solid ?o) (close ?d ?o) (on ?d))
    :effect (and (hot ?o) (dry ?o) (not (cold ?o)) (not (warm ?o)) (not (wet ?o))))

  ; --- attribute transfer ---------------------------------------------------
  (:action transfer_mint
    :parameters (?o1 - thing ?o2 - a_food ?c - a_container)
    :precondition (and (mint ?o1) (hot ?o2) (liquid ?o2) (inside ?o1 ?c) (inside ?o2 ?c))
    :effect (and (mint ?o2) (not (no_aroma ?o2))))
  (:action transfer_chamomile
    :parameters (?o1 - thing ?o2 - a_food ?c - a_container)
    :precondition (and (chamomile ?o1) (hot ?o2) (liquid ?o2) (inside ?o1 ?c) (inside ?o2 ?c))
    :effect (and (chamomile ?o2) (not (no_aroma ?o2))))
  (:action transfer_salt
    :parameters (?o1 - a_food ?o2 - a_food ?c - a_container)
    :precondition (and (salt ?o1) (granular ?o1) (inside ?o1 ?c) (inside ?o2 ?c))
    :effect (and (salt ?o2) (not (no_taste ?o2))))

  ; --- manipulation -------------------------------------------------------
  (:action get_out
    :parameters (?o - a_movable ?c - a_container ?h - a_hand)
    :precondition (and (solid ?o) (inside ?o ?c) (open ?c))
    :effect (and (inside ?o ?h) (not (inside ?o ?c))))
  (:action put_in
    :parameters (?o - a_movable ?c - a_container ?h - a_hand)
    :precondition (and (solid ?o) (inside ?o ?h) (open ?c))
    :effect (and (inside ?o ?c) (not (inside ?o ?h))))
  (:action pour
    :parameters (?l - a_liquid ?from - a_vessel ?to - a_vessel ?h - a_hand)
    :precondition (and (liquid ?l) (inside ?l ?from) (inside ?from ?h) (open ?from) (open ?to))
    :effect (and (inside ?l ?to) (not (inside ?l ?from))))
  (:action approach_with
    :parameters (?d - a_hair_dryer ?o - a_food ?h - a_hand)
    :precondition (and (inside ?d ?h) (distant ?d ?o))
    :effect (and (close ?d ?o) (not (distant ?d ?o))))
  (:action open
    :parameters (?x - an_openable)
    :precondition (and (present ?x))
    :effect (and (open ?x) (not (closed ?x))))
  (:action close
    :parameters (?x - an_openable)
    :precondition (and (present ?x))
    :effect (and (closed ?x) (not (open ?x))))
  (:action switch_on
    :parameters (?x - a_switchable)
    :precondition (and (present ?x))
    :effect (and (on ?x) (not (off ?x))))
  (:action switch_off
    :parameters (?x - a_switchable)
    :precondition (and (present ?x))
    :effect (and (off ?x) (not (on ?x))))
)
)PDDL";

/// Objects in scene order with their (flat) type memberships.
inline std::vector<Object> scene_objects() {
    auto obj = [](std::string name, std::vector<std::string> types) {
        types.insert(types.begin(), "thing");
        return Object{std::move(name), std::move(types)};
    };
    return {
        obj("toaster", {"a_container", "a_switchable", "a_toaster"}),
        obj("microwave", {"a_container", "an_openable", "a_switchable", "a_microwave"}),
        obj("blender", {"a_container", "a_switchable", "a_blender"}),
        obj("hair_dryer", {"a_movable", "a_switchable", "a_hair_dryer"}),
        obj("fridge", {"a_container", "an_openable", "a_switchable", "a_fridge"}),
        obj("contact_grill", {"a_container", "an_openable", "a_switchable", "a_contact_grill"}),
        obj("water", {"a_liquid", "a_food"}),
        obj("water_pitcher", {"a_container", "a_movable", "a_vessel", "an_openable"}),
        obj("milk", {"a_liquid", "a_food"}),
        obj("milk_pitcher", {"a_container", "a_movable", "a_vessel", "an_openable"}),
        obj("cola", {"a_liquid", "a_food"}),
        obj("cola_bottle", {"a_container", "a_movable", "a_vessel", "an_openable"}),
        obj("white_bread", {"a_movable", "a_food"}),
        obj("plate", {"a_container", "a_movable"}),
        obj("pringles", {"a_movable", "a_food"}),
        obj("pringles_box", {"a_container", "a_movable"}),
        obj("glass", {"a_container", "a_movable", "a_vessel"}),
        obj("mug", {"a_container", "a_movable", "a_vessel"}),
        obj("tray", {"a_container", "a_movable"}),
        obj("chamomile_tea_bag", {"a_movable"}),
        obj("mint_tea_bag", {"a_movable"}),
        obj("table", {"a_container"}),
        obj("robot_hand", {"a_hand"}),
    };
}

/// Initial state of the table scene: every object present, liquids in their
/// vessels, loose items on the table, fridge closed and running, the other
/// devices off.
inline AtomSet scene_init() {
    AtomSet s;
    auto add = [&](std::string p, std::vector<std::string> args) { s.insert(Atom{std::move(p), std::move(args)}); };
    for (const auto& o : scene_objects()) add("present", {o.name});

    for (const char* item : {"water_pitcher", "milk_pitcher", "cola_bottle", "white_bread", "plate",
                             "pringles_box", "glass", "mug", "tray", "chamomile_tea_bag",
                             "mint_tea_bag", "hair_dryer"})
        add("inside", {item, "table"});
    add("inside", {"water", "water_pitcher"});
    add("inside", {"milk", "milk_pitcher"});
    add("inside", {"cola", "cola_bottle"});
    add("inside", {"pringles", "pringles_box"});

    for (const char* c : {"table", "plate", "glass", "mug", "tray", "pringles_box", "toaster", "blender",
                          "water_pitcher", "milk_pitcher", "cola_bottle"})
        add("open", {c});
    for (const char* c : {"microwave", "fridge", "contact_grill"}) add("closed", {c});
    for (const char* d : {"toaster", "microwave", "blender", "hair_dryer", "contact_grill"}) add("off", {d});
    add("on", {"fridge"});

    for (const char* f : {"water", "milk", "cola", "white_bread", "pringles"}) {
        add("warm", {f});
        add("distant", {"hair_dryer", f});
    }
    for (const char* l : {"water", "milk", "cola"}) {
        add("liquid", {l});
        add("wet", {l});
        add("no_aroma", {l});
    }
    add("no_taste", {"water"});
    add("no_color", {"water"});
    add("sweet", {"milk"});
    add("white", {"milk"});
    add("sweet", {"cola"});
    add("brown", {"cola"});

    for (const char* solid : {"water_pitcher", "milk_pitcher", "cola_bottle", "white_bread", "plate",
                              "pringles", "pringles_box", "glass", "mug", "tray", "chamomile_tea_bag",
                              "mint_tea_bag", "hair_dryer"})
        add("solid", {solid});
    for (const char* d : {"white_bread", "pringles", "chamomile_tea_bag", "mint_tea_bag"}) {
        add("dry", {d});
        add("whole", {d});
    }
    add("soft", {"white_bread"});
    add("white", {"white_bread"});
    add("no_taste", {"white_bread"});
    add("no_aroma", {"white_bread"});
    add("hard", {"pringles"});
    add("salt", {"pringles"});
    add("mint", {"mint_tea_bag"});
    add("chamomile", {"chamomile_tea_bag"});
    for (const char* b : {"chamomile_tea_bag", "mint_tea_bag"}) add("permeable", {b});
    for (const char* v : {"water_pitcher", "milk_pitcher", "cola_bottle", "glass", "mug"}) {
        add("impermeable", {v});
        add("clean", {v});
    }
    return s;
}

/// Goal ids as they appear in the experiment table, in table row order.
inline const std::vector<std::string>& goal_rows() {
    static const std::vector<std::string> rows = {"4",   "1",   "2",   "0",   "5",   "3",   "1+5", "0+2",
                                                  "1+2", "2+5", "0+5", "1+3", "2+3", "0+3", "3+5", "0+1"};
    return rows;
}

inline const std::map<std::string, std::string>& goal_descriptions() {
    static const std::map<std::string, std::string> d = {
        {"0", "cola, hot, inside glass, inside tray"},
        {"1", "cola, cold, inside glass, inside tray"},
        {"2", "milk, hot, inside mug, inside tray"},
        {"3", "water, mint, cold, inside glass, inside tray"},
        {"4", "white_bread, hot, hard, brown, inside plate, inside tray"},
        {"5", "white_bread hot, hard, brown, salty, inside plate, inside tray"},
    };
    return d;
}

/// Goal atoms for a catalogue id ("0".."5") or a combination ("a+b").
inline AtomSet goal(std::string_view id) {
    auto a = [](std::string p, std::vector<std::string> args) { return Atom{std::move(p), std::move(args)}; };
    if (auto plus = id.find('+'); plus != std::string_view::npos) {
        auto lhs = goal(id.substr(0, plus));
        auto rhs = goal(id.substr(plus + 1));
        lhs.insert(rhs.begin(), rhs.end());
        return lhs;
    }
    if (id == "0") return {a("hot", {"cola"}), a("inside", {"cola", "glass"}), a("inside", {"glass", "tray"})};
    if (id == "1") return {a("cold", {"cola"}), a("inside", {"cola", "glass"}), a("inside", {"glass", "tray"})};
    if (id == "2") return {a("hot", {"milk"}), a("inside", {"milk", "mug"}), a("inside", {"mug", "tray"})};
    if (id == "3")
        return {a("mint", {"water"}), a("cold", {"water"}), a("inside", {"water", "glass"}),
                a("inside", {"glass", "tray"})};
    if (id == "4")
        return {a("hot", {"white_bread"}), a("hard", {"white_bread"}), a("brown", {"white_bread"}),
                a("inside", {"white_bread", "plate"}), a("inside", {"plate", "tray"})};
    if (id == "5") {
        auto g = goal("4");
        g.insert(a("salt", {"white_bread"}));
        return g;
    }
    throw std::invalid_argument("unknown goal id '" + std::string(id) + "'");
}

inline Domain build_domain() { return parse_domain(domain_text); }

inline std::string problem_name(std::string_view goal_id) { return "goal_" + std::string(goal_id); }

inline Problem build_problem(std::string_view goal_id) {
    Problem p;
    p.name = problem_name(goal_id);
    p.domain_name = "kitchen";
    p.objects = scene_objects();
    p.init = scene_init();
    p.goal = goal(goal_id);
    return p;
}

inline Problem build_problem(AtomSet goal_atoms, std::string name = "custom") {
    Problem p;
    p.name = std::move(name);
    p.domain_name = "kitchen";
    p.objects = scene_objects();
    p.init = scene_init();
    p.goal = std::move(goal_atoms);
    return p;
}

/// Views: elementary first, then spatial relations, then device states.
inline ViewSpec build_views(const Domain& d) { return parse_views("R+E\nR+E+S\nR+E+S+D\n", d); }

/// Writes kitchen.dom, kitchen.views and one goal_<id>.prob per table row.
inline std::vector<std::filesystem::path> emit_corpus(const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    auto write = [&](const std::filesystem::path& path, const std::string& text) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
        out << text;
        written.push_back(path);
    };
    const auto d = build_domain();
    write(dir / "kitchen.dom", serialize_domain(d));
    write(dir / "kitchen.views", serialize_views(build_views(d), d));
    for (const auto& id : goal_rows()) write(dir / (problem_name(id) + ".prob"), serialize_problem(build_problem(id)));
    return written;
}

} // namespace vbp::kitchen
