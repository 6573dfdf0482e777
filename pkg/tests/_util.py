"""Shared test helpers."""

from __future__ import annotations

import random
from itertools import combinations

from acmcurve.groebner import GroebnerBasis, is_groebner_basis
from acmcurve.poly import mono_divides

EXHAUSTIVE_LIMIT = 40
SAMPLED_PAIRS = 400


def certify_basis(gb: GroebnerBasis) -> bool:
    """Buchberger certificate: all S-pairs when the basis has at most 40
    elements, a fixed random sample of pairs beyond that. Also checks the
    reduced-basis shape (monic, no term divisible by another lead)."""
    n = len(gb.elements)
    pairs = list(combinations(range(n), 2))
    if n > EXHAUSTIVE_LIMIT:
        pairs = random.Random(n).sample(pairs, min(SAMPLED_PAIRS, len(pairs)))
    if not is_groebner_basis(gb.elements, gb.order, pairs):
        return False
    leads = [tuple(g.leading_monomial(gb.order)) for g in gb.elements]
    for i, g in enumerate(gb.elements):
        if g.leading_coefficient(gb.order) != 1:
            return False
        for e in g.terms:
            if any(j != i and mono_divides(lt, e) for j, lt in enumerate(leads)):
                return False
    return True
