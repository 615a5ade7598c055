import random

import pytest
from hypothesis import settings, strategies as st

from dstl import examples
from dstl.computation import ComputationDecl, build, load_model
from dstl.formula import And, FalseF, Loc, Not, Or, Prop
from dstl.proof import bundled_library

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

PROPS = ("p", "q", "r")


@pytest.fixture(scope="session")
def lib():
    return bundled_library()


def bundled(name):
    return load_model(examples.data_text(name))


@pytest.fixture(scope="session")
def table1():
    return bundled("table1.model")


@pytest.fixture(scope="session")
def table2():
    return bundled("table2.model")


# --- hypothesis strategies ------------------------------------------------

@st.composite
def computations(draw, max_components=2, max_states=3, props=PROPS):
    names = "mn"[:draw(st.integers(1, max_components))]
    lengths = [(c, draw(st.integers(1, max_states))) for c in names]
    labels = {}
    for c, n in lengths:
        for k in range(n):
            labels[(c, k)] = set(draw(st.sets(st.sampled_from(props), max_size=len(props))))
    messages = []
    if len(names) > 1:
        pairs = [((a, i), (b, j)) for a, na in lengths for b, nb in lengths if a != b
                 for i in range(na) for j in range(nb)]
        chosen = draw(st.lists(st.sampled_from(pairs), max_size=2, unique=True))
        for msg in chosen:
            try:
                build(ComputationDecl(lengths, labels, messages + [msg]))
            except Exception:
                continue          # would close a causal cycle
            messages.append(msg)
    return build(ComputationDecl(lengths, labels, messages))


def dsl_formulas(comps=("m", "n"), props=PROPS, depth=3):
    leaves = st.one_of(st.sampled_from([Prop(p) for p in props]), st.just(FalseF()))

    def extend(inner):
        return st.one_of(
            inner.map(Not),
            st.tuples(inner, inner).map(lambda t: And(*t)),
            st.tuples(inner, inner).map(lambda t: Or(*t)),
            st.tuples(st.sampled_from(comps), inner).map(lambda t: Loc(*t)),
        )

    return st.recursive(leaves, extend, max_leaves=2 ** depth)


def seeded_rng(seed):
    return random.Random(seed)
