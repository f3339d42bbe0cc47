"""Seeded generators of random Delzant polygons and lattice symmetries for tests."""

import random
from fractions import Fraction

from delzant.polygon import (
    UnimodularMap, blow_up, gen_cp2, gen_hirzebruch, gen_p1xp1,
)

_GENERATORS = [
    ((0, -1), (1, 0)),
    ((1, 1), (0, 1)),
    ((1, -1), (0, 1)),
    ((1, 0), (1, 1)),
    ((1, 0), (0, -1)),
]


def rand_rational(rng, lo=1, hi=5, den=7):
    return Fraction(rng.randint(lo * den, hi * den), rng.randint(1, den))


def random_base(rng):
    kind = rng.randrange(3)
    if kind == 0:
        return gen_cp2(rand_rational(rng))
    if kind == 1:
        return gen_p1xp1(rand_rational(rng), rand_rational(rng))
    return gen_hirzebruch(rng.randint(0, 4), rand_rational(rng))


def random_delzant(rng, max_blowups=4):
    P = random_base(rng)
    for _ in range(rng.randint(0, max_blowups)):
        i = rng.randrange(len(P))
        limit = min(P.edges[i].lambda_length, P.edges[i - 1].lambda_length)
        eps = limit * Fraction(rng.randint(1, 9), 10)
        P = blow_up(P, i, eps)
    return P


def random_matrix(rng, length=6):
    m = ((1, 0), (0, 1))
    for _ in range(rng.randint(1, length)):
        g = rng.choice(_GENERATORS)
        m = ((m[0][0] * g[0][0] + m[0][1] * g[1][0], m[0][0] * g[0][1] + m[0][1] * g[1][1]),
             (m[1][0] * g[0][0] + m[1][1] * g[1][0], m[1][0] * g[0][1] + m[1][1] * g[1][1]))
    return m


def random_map(rng, translate=True):
    t = (rand_rational(rng, -5, 5), rand_rational(rng, -5, 5)) if translate else (0, 0)
    return UnimodularMap(random_matrix(rng), t)


def rng_for(seed):
    return random.Random(seed)
