#!/usr/bin/env python3
"""Regenerate the JSON fixtures in fixtures/.

fig1_m1/fig1_m2 are the two counterexample models (fig1_m1 carries the
R_dia edge (x1, b1) that the text of the example omits; without it the
advertised modal equivalence of a1 and a2 fails, see the test suite).
The two Kripke models are shipped together with their lifted LE-models,
and chain3 is a small model whose concept lattice is a 3-chain with
non-trivial box/diamond relations.
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from polarity_mc import Concept, KripkeModel, LEModel, Polarity, lift_kripke, validate_model
from polarity_mc.modelio import kripke_to_dict, save_model

import json

OUT = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def fig1_m1() -> LEModel:
    pol = Polarity.make(["a1", "b1"], ["x1", "y1"], [("b1", "x1")])
    return LEModel.make(pol, [], [("x1", "b1")], {
        "p": Concept(frozenset({"a1", "b1"}), frozenset()),
        "q": Concept(frozenset({"b1"}), frozenset({"x1"})),
    })


def fig1_m2() -> LEModel:
    pol = Polarity.make(["a2"], ["x2"], [])
    return LEModel.make(pol, [], [], {
        "p": Concept(frozenset({"a2"}), frozenset()),
        "q": Concept(frozenset(), frozenset({"x2"})),
    })


def chain3() -> LEModel:
    pol = Polarity.make(["a", "b"], ["x", "y"], [("b", "x")])
    return LEModel.make(pol, [("a", "x"), ("b", "x")], [("x", "b")], {
        "p": Concept(frozenset({"b"}), frozenset({"x"})),
        "q": Concept(frozenset(), frozenset({"x", "y"})),
    })


def kripke_loop() -> KripkeModel:
    return KripkeModel.make(["w0", "w1"], [("w0", "w1"), ("w1", "w0")],
                            {"p": ["w0"], "q": ["w1"]})


def kripke_fork() -> KripkeModel:
    return KripkeModel.make(["u0", "u1", "u2"], [("u0", "u1"), ("u0", "u2")],
                            {"p": ["u1"], "q": ["u2"]})


def main():
    os.makedirs(OUT, exist_ok=True)
    models = {
        "fig1_m1.json": fig1_m1(),
        "fig1_m2.json": fig1_m2(),
        "chain3.json": chain3(),
        "lifted_loop.json": lift_kripke(kripke_loop()),
        "lifted_fork.json": lift_kripke(kripke_fork()),
    }
    for name, model in models.items():
        problems = validate_model(model)
        assert not problems, (name, problems)
        save_model(model, os.path.join(OUT, name))
        print("wrote", name)
    for name, k in (("kripke_loop.json", kripke_loop()),
                    ("kripke_fork.json", kripke_fork())):
        with open(os.path.join(OUT, name), "w") as fh:
            json.dump(kripke_to_dict(k), fh, indent=2, sort_keys=True)
            fh.write("\n")
        print("wrote", name)


if __name__ == "__main__":
    main()
