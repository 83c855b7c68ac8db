import os
import random
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from polarity_mc import Concept, LEModel, Polarity
from polarity_mc.modelio import load_kripke, load_model
from polarity_mc.randgen import random_kripke, random_le_model

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def fixture_path(name: str) -> str:
    return os.path.join(FIXTURES, name)


@pytest.fixture(scope="session")
def fig1_m1():
    return load_model(fixture_path("fig1_m1.json"))


@pytest.fixture(scope="session")
def fig1_m2():
    return load_model(fixture_path("fig1_m2.json"))


@pytest.fixture(scope="session")
def fig1_m1_literal():
    """Figure 1's left model exactly as printed in the text: all relations empty.

    The shipped fixture adds the R_dia edge (x1, b1); this variant keeps
    the example's stated data for the tests that are about the discrepancy.
    """
    pol = Polarity.make(["a1", "b1"], ["x1", "y1"], [("b1", "x1")])
    return LEModel.make(pol, [], [], {
        "p": Concept(frozenset({"a1", "b1"}), frozenset()),
        "q": Concept(frozenset({"b1"}), frozenset({"x1"})),
    })


@pytest.fixture(scope="session")
def chain3():
    return load_model(fixture_path("chain3.json"))


@pytest.fixture(scope="session")
def lifted_loop():
    return load_model(fixture_path("lifted_loop.json"))


@pytest.fixture(scope="session")
def lifted_fork():
    return load_model(fixture_path("lifted_fork.json"))


@pytest.fixture(scope="session")
def kripke_loop():
    return load_kripke(fixture_path("kripke_loop.json"))


@pytest.fixture(scope="session")
def kripke_fork():
    return load_kripke(fixture_path("kripke_fork.json"))


@pytest.fixture(scope="session")
def all_fixture_models(fig1_m1, fig1_m2, chain3, lifted_loop, lifted_fork):
    return {"fig1_m1": fig1_m1, "fig1_m2": fig1_m2, "chain3": chain3,
            "lifted_loop": lifted_loop, "lifted_fork": lifted_fork}


BATTERY_SEED = 20250809
BATTERY_SIZE = 200


@pytest.fixture(scope="session")
def battery_pairs():
    """The random-model battery: 200 seeded pairs, carriers <= 4+4, 2 variables."""
    rng = random.Random(BATTERY_SEED)
    return [(random_le_model(rng), random_le_model(rng))
            for _ in range(BATTERY_SIZE)]


@pytest.fixture(scope="session")
def battery_models(battery_pairs):
    return [m for pair in battery_pairs for m in pair]


@pytest.fixture(scope="session")
def kripke_battery():
    rng = random.Random(BATTERY_SEED + 1)
    return [(random_kripke(rng), random_kripke(rng)) for _ in range(100)]
