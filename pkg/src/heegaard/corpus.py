"""Frozen acceptance corpus: the twist words and curve pairs every
quantitative check runs against.

Everything here is deterministic and versioned by value: the words are
string literals, the curve pairs are built from chain/pants classes plus a
seeded sample of the bounded universe (fixed seed, fixed enumeration order).
Tests freeze expected facts about these objects; changing anything here is a
corpus revision and must be deliberate.

Word tokens: ``tK`` / ``TK`` = positive / negative twist about chain curve
``c_K`` (1-based); letters act right-to-left.  The pseudo-Anosov candidates
follow the two-system recipe: positive twists about the odd chain curves,
negative twists about the even ones (the odd and even chain curves form two
multicurves that jointly fill the surface), which is gated at use time by
``pa_growth_check``.
"""

from __future__ import annotations

import random

from .surface import (
    CurveClass,
    SurfaceSpec,
    TwistWord,
    canonicalize,
    chain_classes,
    enumerate_curves,
    pants_curve_class,
    surface_spec,
)
from .curvegraph import SearchBudget

__all__ = [
    "GENUS2_WORDS",
    "GENUS3_WORDS",
    "CORPUS_BUDGET",
    "corpus_words",
    "genus2_distance_pairs",
    "genus2_filling_witness",
    "word_by_name",
]

GENUS2_WORDS: dict[str, str] = {
    "identity": "",
    "meridian-twist": "t2",
    "pa-candidate-1": "t1 t3 t5 T2 T4",
    "pa-candidate-2": "t1 t1 t3 t5 T2 T4",
}

GENUS3_WORDS: dict[str, str] = {
    "identity": "",
    "meridian-twist": "t2",
    "pa-candidate-1": "t1 t3 t5 t7 T2 T4 T6",
}

# Budget every distance-corpus query runs at: the full B = 2 universe with
# enough node headroom that distance <= 2 queries always complete.
CORPUS_BUDGET = SearchBudget(bound=2, node_cap=120)

_SAMPLE_SEED = 20260815
_SAMPLE_COUNT = 5


def corpus_words(genus: int) -> dict[str, TwistWord]:
    """The frozen words for one surface, parsed."""
    table = {2: GENUS2_WORDS, 3: GENUS3_WORDS}.get(genus)
    if table is None:
        raise ValueError(f"no corpus words for genus {genus}")
    return {name: TwistWord.parse(genus, text) for name, text in table.items()}


def word_by_name(genus: int, name: str) -> TwistWord:
    words = corpus_words(genus)
    if name not in words:
        raise ValueError(f"unknown corpus word {name!r} "
                         f"(have {sorted(words)})")
    return words[name]


def genus2_distance_pairs() -> list[tuple[str, CurveClass, CurveClass]]:
    """The frozen genus-2 curve-pair corpus for distance checks.

    Every member lies in the B = 2 universe, so the brute-force oracle
    accepts all of them.  Mix: an identical pair, the three pants pairs, a
    twist image at distance two, the four overlapping (consecutive) chain
    pairs, three disjoint chain pairs, and a seeded sample of universe
    members."""
    spec = surface_spec(2)
    chain = chain_classes(spec)
    pants = [pants_curve_class(spec, e) for e in spec.pants_curves]
    twisted = _twist_image(spec, chain)
    pairs: list[tuple[str, CurveClass, CurveClass]] = [
        ("identical", chain[0], chain[0]),
        ("pants-01", pants[0], pants[1]),
        ("pants-02", pants[0], pants[2]),
        ("pants-12", pants[1], pants[2]),
        ("twist-image", chain[1], twisted),
        ("chain-12", chain[0], chain[1]),
        ("chain-23", chain[1], chain[2]),
        ("chain-34", chain[2], chain[3]),
        ("chain-45", chain[3], chain[4]),
        ("chain-13", chain[0], chain[2]),
        ("chain-14", chain[0], chain[3]),
        ("chain-25", chain[1], chain[4]),
    ]
    members = enumerate_curves(spec, 2).curves
    rng = random.Random(_SAMPLE_SEED)
    for k in range(_SAMPLE_COUNT):
        a, b = rng.sample(members, 2)
        pairs.append((f"sampled-{k}", a, b))
    return pairs


def _twist_image(spec: SurfaceSpec, chain: list[CurveClass]) -> CurveClass:
    from .surface import apply_word
    return apply_word(TwistWord.parse(2, "t1"), chain[1])


def genus2_filling_witness() -> tuple[CurveClass, CurveClass]:
    """A certified filling pair: the first chain circle and its image under
    (t2 T3 t4 T5)^3, which meets it 9 times."""
    spec = surface_spec(2)
    seed = canonicalize(spec, (1, 1, 0), (0, 0, 0))
    moved = canonicalize(spec, (6, 1, 5), (9, 0, 1))
    return seed, moved
