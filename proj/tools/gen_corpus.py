#!/usr/bin/env python3
"""Writes the bundled PDDL corpus: corpus/<name>/{domain,train,verify}.pddl."""

import argparse
import pathlib
import random

DOMAINS = {}


def domain(name):
    def wrap(fn):
        DOMAINS[name] = fn
        return fn

    return wrap


def problem(pname, dname, objects, init):
    """objects: list of (name, type); init: list of atom tuples."""
    by_type = {}
    for o, t in objects:
        by_type.setdefault(t, []).append(o)
    objs = "\n".join(f"    {' '.join(v)} - {t}" for t, v in by_type.items())
    atoms = "\n".join("    (" + " ".join(a) + ")" for a in init)
    return (
        f"(define (problem {pname})\n  (:domain {dname})\n  (:objects\n{objs})\n"
        f"  (:init\n{atoms})\n  (:goal (and)))\n"
    )


# ---------------------------------------------------------------- blocks

BLOCKS3 = """(define (domain blocks3)
  (:requirements :strips :typing)
  (:types block)
  (:predicates (on ?x - block ?y - block) (on_table ?x - block) (clear ?x - block))
  (:action stack
    :parameters (?b1 - block ?b2 - block)
    :precondition (and (on_table ?b1) (clear ?b1) (clear ?b2))
    :effect (and (on ?b1 ?b2) (not (on_table ?b1)) (not (clear ?b2))))
  (:action unstack
    :parameters (?b1 - block ?b2 - block)
    :precondition (and (on ?b1 ?b2) (clear ?b1))
    :effect (and (on_table ?b1) (clear ?b2) (not (on ?b1 ?b2))))
  (:action move
    :parameters (?b1 - block ?b2 - block ?b3 - block)
    :precondition (and (on ?b1 ?b2) (clear ?b1) (clear ?b3))
    :effect (and (on ?b1 ?b3) (clear ?b2) (not (on ?b1 ?b2)) (not (clear ?b3)))))
"""

BLOCKS4 = """(define (domain blocks4)
  (:requirements :strips :typing)
  (:types block)
  (:predicates (on ?x - block ?y - block) (on_table ?x - block) (clear ?x - block)
               (holding ?x - block) (handempty))
  (:action pickup
    :parameters (?x - block)
    :precondition (and (clear ?x) (on_table ?x) (handempty))
    :effect (and (holding ?x) (not (clear ?x)) (not (on_table ?x)) (not (handempty))))
  (:action putdown
    :parameters (?x - block)
    :precondition (holding ?x)
    :effect (and (clear ?x) (on_table ?x) (handempty) (not (holding ?x))))
  (:action stack
    :parameters (?x - block ?y - block)
    :precondition (and (holding ?x) (clear ?y))
    :effect (and (on ?x ?y) (clear ?x) (handempty) (not (holding ?x)) (not (clear ?y))))
  (:action unstack
    :parameters (?x - block ?y - block)
    :precondition (and (on ?x ?y) (clear ?x) (handempty))
    :effect (and (holding ?x) (clear ?y) (not (on ?x ?y)) (not (clear ?x)) (not (handempty)))))
"""


def towers(n, split):
    """Blocks b1..bn stacked into towers of the given sizes."""
    names = [f"b{i}" for i in range(1, n + 1)]
    init, k = [], 0
    for size in split:
        tower = names[k : k + size]
        k += size
        init.append(("on_table", tower[0]))
        for lo, hi in zip(tower, tower[1:]):
            init.append(("on", hi, lo))
        init.append(("clear", tower[-1]))
    return names, init


def blocks_problem(dname, pname, n, split, extra=()):
    names, init = towers(n, split)
    return problem(pname, dname, [(b, "block") for b in names], init + list(extra))


@domain("blocks3")
def gen_blocks3():
    return (
        BLOCKS3,
        blocks_problem("blocks3", "train", 5, [2, 2, 1]),
        blocks_problem("blocks3", "verify", 6, [3, 2, 1]),
    )


@domain("blocks4")
def gen_blocks4():
    h = [("handempty",)]
    return (
        BLOCKS4,
        blocks_problem("blocks4", "train", 5, [2, 2, 1], h),
        blocks_problem("blocks4", "verify", 6, [3, 2, 1], h),
    )


# ---------------------------------------------------------------- ferry

FERRY = """(define (domain ferry)
  (:requirements :strips :typing)
  (:types location car)
  (:predicates (not_eq ?x - location ?y - location) (at_ferry ?l - location)
               (at ?c - car ?l - location) (empty_ferry) (on ?c - car))
  (:action sail
    :parameters (?from - location ?to - location)
    :precondition (and (not_eq ?from ?to) (at_ferry ?from))
    :effect (and (at_ferry ?to) (not (at_ferry ?from))))
  (:action board
    :parameters (?car - car ?loc - location)
    :precondition (and (at ?car ?loc) (at_ferry ?loc) (empty_ferry))
    :effect (and (on ?car) (not (at ?car ?loc)) (not (empty_ferry))))
  (:action debark
    :parameters (?car - car ?loc - location)
    :precondition (and (on ?car) (at_ferry ?loc))
    :effect (and (at ?car ?loc) (empty_ferry) (not (on ?car)))))
"""


def ferry_problem(pname, nloc, ncar, rng):
    locs = [f"l{i}" for i in range(1, nloc + 1)]
    cars = [f"c{i}" for i in range(1, ncar + 1)]
    init = [("not_eq", a, b) for a in locs for b in locs if a != b]
    init += [("at_ferry", locs[0]), ("empty_ferry",)]
    init += [("at", c, rng.choice(locs)) for c in cars]
    return problem(pname, "ferry", [(l, "location") for l in locs] + [(c, "car") for c in cars], init)


@domain("ferry")
def gen_ferry():
    rng = random.Random(7)
    return FERRY, ferry_problem("train", 4, 4, rng), ferry_problem("verify", 5, 5, rng)


# ---------------------------------------------------------------- gripper

GRIPPER = """(define (domain gripper)
  (:requirements :strips :typing)
  (:types room ball gripper)
  (:predicates (connected ?r1 - room ?r2 - room) (at_robby ?r - room) (at ?b - ball ?r - room)
               (free ?g - gripper) (carry ?b - ball ?g - gripper))
  (:action move
    :parameters (?from - room ?to - room)
    :precondition (and (at_robby ?from) (connected ?from ?to))
    :effect (and (at_robby ?to) (not (at_robby ?from))))
  (:action pick
    :parameters (?b - ball ?r - room ?g - gripper)
    :precondition (and (at ?b ?r) (at_robby ?r) (free ?g))
    :effect (and (carry ?b ?g) (not (at ?b ?r)) (not (free ?g))))
  (:action drop
    :parameters (?b - ball ?r - room ?g - gripper)
    :precondition (and (carry ?b ?g) (at_robby ?r))
    :effect (and (at ?b ?r) (free ?g) (not (carry ?b ?g)))))
"""


def gripper_problem(pname, nballs):
    rooms, grippers = ["rooma", "roomb"], ["left", "right"]
    balls = [f"ball{i}" for i in range(1, nballs + 1)]
    init = [("connected", "rooma", "roomb"), ("connected", "roomb", "rooma"), ("at_robby", "rooma")]
    init += [("free", g) for g in grippers]
    init += [("at", b, "rooma") for b in balls]
    objs = [(r, "room") for r in rooms] + [(b, "ball") for b in balls] + [(g, "gripper") for g in grippers]
    return problem(pname, "gripper", objs, init)


@domain("gripper")
def gen_gripper():
    return GRIPPER, gripper_problem("train", 6), gripper_problem("verify", 8)


# ---------------------------------------------------------------- hanoi

HANOI = """(define (domain hanoi)
  (:requirements :strips :typing)
  (:types peg disc - place)
  (:predicates (smaller ?p - place ?d - disc) (on ?d - disc ?p - place) (clear ?p - place))
  (:action move
    :parameters (?disc - disc ?from - place ?to - place)
    :precondition (and (on ?disc ?from) (clear ?disc) (clear ?to) (smaller ?to ?disc))
    :effect (and (on ?disc ?to) (clear ?from) (not (on ?disc ?from)) (not (clear ?to)))))
"""


def hanoi_problem(pname, ndiscs):
    pegs = ["peg1", "peg2", "peg3"]
    discs = [f"d{i}" for i in range(1, ndiscs + 1)]  # d1 smallest
    init = [("smaller", p, d) for p in pegs for d in discs]
    init += [("smaller", discs[j], discs[i]) for i in range(ndiscs) for j in range(i + 1, ndiscs)]
    stack = list(reversed(discs))  # largest at the bottom of peg1
    init.append(("on", stack[0], "peg1"))
    for lo, hi in zip(stack, stack[1:]):
        init.append(("on", hi, lo))
    init += [("clear", discs[0]), ("clear", "peg2"), ("clear", "peg3")]
    return problem(pname, "hanoi", [(p, "peg") for p in pegs] + [(d, "disc") for d in discs], init)


@domain("hanoi")
def gen_hanoi():
    return HANOI, hanoi_problem("train", 5), hanoi_problem("verify", 7)


# ---------------------------------------------------------------- miconic

# Served passengers wait again at their destination floor, so traffic never
# stops and in_lift is definable as "waiting nowhere".
MICONIC = """(define (domain miconic)
  (:requirements :strips :typing)
  (:types floor passenger)
  (:predicates (next ?f1 - floor ?f2 - floor) (lift_at ?f - floor)
               (origin ?p - passenger ?f - floor) (dest ?p - passenger ?f - floor)
               (in_lift ?p - passenger))
  (:action board
    :parameters (?f - floor ?p - passenger)
    :precondition (and (lift_at ?f) (origin ?p ?f))
    :effect (and (in_lift ?p) (not (origin ?p ?f))))
  (:action depart
    :parameters (?f - floor ?p - passenger)
    :precondition (and (lift_at ?f) (dest ?p ?f) (in_lift ?p))
    :effect (and (origin ?p ?f) (not (in_lift ?p))))
  (:action up
    :parameters (?f1 - floor ?f2 - floor)
    :precondition (and (lift_at ?f1) (next ?f1 ?f2))
    :effect (and (lift_at ?f2) (not (lift_at ?f1))))
  (:action down
    :parameters (?f1 - floor ?f2 - floor)
    :precondition (and (lift_at ?f1) (next ?f2 ?f1))
    :effect (and (lift_at ?f2) (not (lift_at ?f1)))))
"""


def miconic_problem(pname, nfloors, dests):
    """dests[i]: destination floor index of passenger i."""
    floors = [f"f{i}" for i in range(nfloors)]
    people = [f"p{i}" for i in range(1, len(dests) + 1)]
    init = [("next", a, b) for a, b in zip(floors, floors[1:])]
    init.append(("lift_at", floors[0]))
    for i, (p, d) in enumerate(zip(people, dests)):
        o = (d + 1 + i) % nfloors
        if o == d:
            o = (o + 1) % nfloors
        init += [("origin", p, floors[o]), ("dest", p, floors[d])]
    return problem(pname, "miconic", [(f, "floor") for f in floors] + [(p, "passenger") for p in people], init)


@domain("miconic")
def gen_miconic():
    # Destinations sit at both ends and some floors have none, so that
    # "the passenger bound for this floor" never refers to anyone reliably.
    return MICONIC, miconic_problem("train", 4, [0, 0, 1, 3, 3]), miconic_problem("verify", 5, [0, 4, 2, 0, 4, 2, 4])


# ---------------------------------------------------------------- sokoban

SOKOBAN_HEAD = """(define (domain {name})
  (:requirements :strips :typing)
  (:types cell)
  (:predicates (adjacent ?c1 - cell ?c2 - cell) (adjacent_2 ?c1 - cell ?c2 - cell)
               (at ?c - cell) (box ?c - cell) (clear ?c - cell))
  (:action move
    :parameters (?c1 - cell ?c2 - cell)
    :precondition (and (at ?c1) (adjacent ?c1 ?c2) (clear ?c2))
    :effect (and (at ?c2) (clear ?c1) (not (at ?c1)) (not (clear ?c2))))
  (:action push
    :parameters (?c1 - cell ?c2 - cell ?c3 - cell)
    :precondition (and (at ?c1) (box ?c2) (clear ?c3) (adjacent ?c1 ?c2) (adjacent ?c2 ?c3) (adjacent_2 ?c1 ?c3))
    :effect (and (at ?c2) (box ?c3) (clear ?c1) (not (at ?c1)) (not (box ?c2)) (not (clear ?c3))))"""

PULL = """
  (:action pull
    :parameters (?c1 - cell ?c2 - cell ?c3 - cell)
    :precondition (and (at ?c1) (box ?c2) (clear ?c3) (adjacent ?c2 ?c1) (adjacent ?c1 ?c3) (adjacent_2 ?c2 ?c3))
    :effect (and (at ?c3) (box ?c1) (clear ?c2) (not (at ?c1)) (not (box ?c2)) (not (clear ?c3))))"""


def grid_problem(dname, pname, rows):
    """rows: '.' floor, '#' wall, '@' agent, '$' box."""
    cells, agent, boxes = [], None, set()
    for r, row in enumerate(rows):
        for c, ch in enumerate(row):
            if ch == "#":
                continue
            cells.append((r, c))
            if ch == "@":
                agent = (r, c)
            elif ch == "$":
                boxes.add((r, c))
    name = {rc: f"c{rc[0]}_{rc[1]}" for rc in cells}
    cellset = set(cells)
    init = []
    for (r, c) in cells:
        for dr, dc in ((0, 1), (1, 0), (0, -1), (-1, 0)):
            n1, n2 = (r + dr, c + dc), (r + 2 * dr, c + 2 * dc)
            if n1 in cellset:
                init.append(("adjacent", name[(r, c)], name[n1]))
                if n2 in cellset:
                    init.append(("adjacent_2", name[(r, c)], name[n2]))
    init.append(("at", name[agent]))
    init += [("box", name[b]) for b in sorted(boxes)]
    init += [("clear", name[rc]) for rc in cells if rc != agent and rc not in boxes]
    return problem(pname, dname, [(name[rc], "cell") for rc in cells], init)


@domain("sokoban")
def gen_sokoban():
    d = SOKOBAN_HEAD.format(name="sokoban") + ")\n"
    train = grid_problem("sokoban", "train", [
        "@....",
        ".....",
        ".$.$.",
        ".....",
        ".$.$.",
        ".....",
    ])
    verify = grid_problem("sokoban", "verify", [
        "#.....#",
        "..$....",
        "...#...",
        "....$.@",
        "#.....#",
    ])
    return d, train, verify


@domain("sokoban-pull")
def gen_sokoban_pull():
    d = SOKOBAN_HEAD.format(name="sokoban-pull") + PULL + ")\n"
    train = grid_problem("sokoban-pull", "train", [
        "@....",
        ".$...",
        "...$.",
        ".$...",
        ".....",
    ])
    verify = grid_problem("sokoban-pull", "verify", [
        ".....",
        ".$...",
        "...$.",
        ".....",
        ".....",
        "....@",
    ])
    return d, train, verify


# ---------------------------------------------------------------- c-puzzle

# above(c1, c2): c2 is directly above c1. left(c1, c2): c2 is directly left
# of c1. Each action moves the blank in its direction.
CPUZZLE = """(define (domain c-puzzle)
  (:requirements :strips :typing)
  (:types cell tile)
  (:predicates (at ?t - tile ?c - cell) (blank ?c - cell)
               (above ?c1 - cell ?c2 - cell) (left ?c1 - cell ?c2 - cell))
  (:action up
    :parameters (?c1 - cell ?c2 - cell ?t - tile)
    :precondition (and (blank ?c1) (above ?c1 ?c2) (at ?t ?c2))
    :effect (and (at ?t ?c1) (blank ?c2) (not (at ?t ?c2)) (not (blank ?c1))))
  (:action down
    :parameters (?c1 - cell ?c2 - cell ?t - tile)
    :precondition (and (blank ?c1) (above ?c2 ?c1) (at ?t ?c2))
    :effect (and (at ?t ?c1) (blank ?c2) (not (at ?t ?c2)) (not (blank ?c1))))
  (:action left
    :parameters (?c1 - cell ?c2 - cell ?t - tile)
    :precondition (and (blank ?c1) (left ?c1 ?c2) (at ?t ?c2))
    :effect (and (at ?t ?c1) (blank ?c2) (not (at ?t ?c2)) (not (blank ?c1))))
  (:action right
    :parameters (?c1 - cell ?c2 - cell ?t - tile)
    :precondition (and (blank ?c1) (left ?c2 ?c1) (at ?t ?c2))
    :effect (and (at ?t ?c1) (blank ?c2) (not (at ?t ?c2)) (not (blank ?c1)))))
"""


def cpuzzle_problem(pname, n, blank, rng):
    cells = [(r, c) for r in range(n) for c in range(n)]
    name = {rc: f"c{rc[0]}{rc[1]}" for rc in cells}
    tiles = [f"t{i}" for i in range(1, n * n)]
    init = []
    for (r, c) in cells:
        if r > 0:
            init.append(("above", name[(r, c)], name[(r - 1, c)]))
        if c > 0:
            init.append(("left", name[(r, c)], name[(r, c - 1)]))
    free = [rc for rc in cells if rc != blank]
    order = tiles[:]
    rng.shuffle(order)
    init += [("at", t, name[rc]) for t, rc in zip(order, free)]
    init.append(("blank", name[blank]))
    return problem(pname, "c-puzzle", [(name[rc], "cell") for rc in cells] + [(t, "tile") for t in tiles], init)


@domain("c-puzzle")
def gen_cpuzzle():
    rng = random.Random(5)
    return CPUZZLE, cpuzzle_problem("train", 5, (0, 0), rng), cpuzzle_problem("verify", 5, (2, 2), rng)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "corpus"))
    args = ap.parse_args()
    root = pathlib.Path(args.out)
    for name, fn in DOMAINS.items():
        d, train, verify = fn()
        (root / name).mkdir(parents=True, exist_ok=True)
        (root / name / "domain.pddl").write_text(d)
        (root / name / "train.pddl").write_text(train)
        (root / name / "verify.pddl").write_text(verify)
        print(f"wrote {root / name}")


if __name__ == "__main__":
    main()
