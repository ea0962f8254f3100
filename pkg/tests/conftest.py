import pytest
from hypothesis import settings
from hypothesis import strategies as st

from evidential.formula import And, Atom, Implies, Not, Or
from evidential.scenarios import build_scenario

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

PROPS = [Atom(f"p{i}", ()) for i in range(8)]


def formulas(atoms=PROPS, max_leaves=12):
    """Random propositional formulas over a small fixed atom set."""
    leaves = st.sampled_from(atoms)
    return st.recursive(
        leaves,
        lambda sub: st.one_of(
            sub.map(Not),
            st.lists(sub, min_size=2, max_size=3).map(lambda ps: And(tuple(ps))),
            st.lists(sub, min_size=2, max_size=3).map(lambda ps: Or(tuple(ps))),
            st.tuples(sub, sub).map(lambda lr: Implies(*lr)),
        ),
        max_leaves=max_leaves,
    )


@pytest.fixture(scope="session")
def scenario_cache():
    cache = {}

    def get(name, **params):
        key = (name, tuple(sorted(params.items())))
        if key not in cache:
            cache[key] = build_scenario(name, **params)
        return cache[key]

    return get
