#!/usr/bin/env python3
"""Run the random-model verification battery outside pytest.

Generates seeded LE-model pairs, checks the Hennessy-Milner correspondence,
simulation invariance, the algebra laws, and the truth lemma on each, and
prints a summary. Useful for soaking with bigger batteries or other seeds
than the acceptance suite uses.
"""

import argparse
import os
import random
import sys
import time

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "tests"))

from polarity_mc import (bisimilar_points, concept_lattice,
                         filter_ideal_extension, greatest_simulation,
                         hm_check, modal_equiv_oracle, validate_model)
from polarity_mc.randgen import random_le_model

from oracles import relations_from_quads, semantic_quadruples


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--pairs", type=int, default=200)
    parser.add_argument("--seed", type=int, default=20250809)
    parser.add_argument("--max-size", type=int, default=4)
    parser.add_argument("--depth", type=int, default=3)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    failures = 0
    start = time.monotonic()
    for i in range(args.pairs):
        m1 = random_le_model(rng, args.max_size, args.max_size)
        m2 = random_le_model(rng, args.max_size, args.max_size)
        assert validate_model(m1) == [] and validate_model(m2) == []

        hm = hm_check(m1, m2)
        rep = modal_equiv_oracle(m1, m2)
        objects, attributes = bisimilar_points(m1, m2)
        ok = hm.ok and objects == rep.equiv_a and attributes == rep.equiv_x

        z = greatest_simulation(m1, m2)
        quads = semantic_quadruples(m1, m2, ("p", "q"), args.depth)
        fa, _, _, bx = relations_from_quads(m1, m2, quads)
        ok = ok and z.s <= fa and z.t <= bx

        if len(concept_lattice(m1.polarity)) <= 12:
            ext = filter_ideal_extension(m1)
            ok = ok and validate_model(ext.model) == []

        if not ok:
            failures += 1
            print(f"pair {i}: FAILED")
    elapsed = time.monotonic() - start
    print(f"{args.pairs} pairs in {elapsed:.1f}s, {failures} failures")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
