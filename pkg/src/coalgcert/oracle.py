"""Reference implementations used to cross-check the refinement engine.

naive_bisimilarity computes behavioural equivalence as a plain fixed point
(repeatedly rekey every state against the current partition), sharing only
the functor-application primitive with the fast engine.  generate produces
seeded random coalgebras for any composition-free functor, and
layered_worstcase builds the weighted system whose minimal negation-free
certificates grow exponentially with the layer index while the shared dag
stays linear.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .coalgebra import Coalgebra
from .functor import (
    BOOL, INT, NAT, REAL, Constant, Coproduct, Distribution, Exponent,
    FunctorError, Identity, MonoidValued, Powerset, Product, Signature,
    is_zippable, parse_functor,
)
from .values import f_apply_coloring


def naive_bisimilarity(c):
    """Behavioural equivalence by fixed-point iteration.

    Returns the partition as a list of sorted state-id lists, ordered by
    first state occurrence.  Quadratic-ish and trusted: each round rekeys
    every state by applying the functor to the current block colouring."""
    n = c.n
    if n == 0:
        return []
    zero = [0] * n
    keys = [f_apply_coloring(c.functor, t, zero, 1) for t in c.structure]
    block_of = _group(range(n), keys)
    while True:
        k = max(block_of) + 1
        keys = [(block_of[x],
                 f_apply_coloring(c.functor, c.structure[x], block_of, k))
                for x in range(n)]
        new = _group(range(n), keys)
        if new == block_of:
            break
        block_of = new
    blocks = {}
    for x in range(n):
        blocks.setdefault(block_of[x], []).append(x)
    return [sorted(v) for v in blocks.values()]


def _group(xs, keys):
    ids = {}
    out = []
    for x in xs:
        out.append(ids.setdefault(keys[x], len(ids)))
    return out


def partition_key(blocks):
    """Canonical form of a partition for equality checks."""
    return sorted(tuple(sorted(b)) for b in blocks)


# ------------------------------------------------------------ generation

@dataclass
class GeneratorSpec:
    functor: object            # FunctorExpr or concrete syntax
    n: int
    seed: int = 0
    density: float = 0.15      # expected fraction of targets per collection
    max_branch: int = 6        # cap on successors per collection layer
    weight_range: tuple = (1, 4)

    def resolved_functor(self):
        f = self.functor
        return parse_functor(f) if isinstance(f, str) else f


def generate(spec):
    """Seeded random coalgebra; identical spec => identical output."""
    f = spec.resolved_functor()
    ok, why = is_zippable(f)
    if not ok:
        raise FunctorError(why)
    rng = random.Random(spec.seed)
    n = spec.n
    names = tuple("s%d" % i for i in range(n))
    lo, hi = spec.weight_range

    def targets():
        want = min(n, int(rng.random() * 2 * spec.density * n + 0.5),
                   spec.max_branch)
        return sorted(rng.sample(range(n), want))

    def weight(kind):
        if kind == NAT:
            return Fraction(rng.randint(max(1, lo), hi))
        if kind == INT:
            w = 0
            while w == 0:
                w = rng.randint(-hi, hi)
            return Fraction(w)
        num = rng.randint(max(1, lo), hi)
        den = rng.randint(1, 4)
        return Fraction(num, den)

    def term(g):
        if isinstance(g, Identity):
            return ("state", rng.randrange(n))
        if isinstance(g, Powerset):
            return ("set", tuple(targets()))
        if isinstance(g, MonoidValued):
            if g.kind == BOOL:
                return ("set", tuple(targets()))
            return ("vec", tuple((y, weight(g.kind)) for y in targets()))
        if isinstance(g, Distribution):
            ys = targets() or [rng.randrange(n)]
            raw = [rng.randint(1, 6) for _ in ys]
            total = sum(raw)
            return ("vec", tuple((y, Fraction(r, total))
                                 for y, r in zip(ys, raw)))
        if isinstance(g, Signature):
            name, ar = g.ops[rng.randrange(len(g.ops))]
            return ("op", name, tuple(rng.randrange(n) for _ in range(ar)))
        if isinstance(g, Product):
            return ("tuple", tuple(term(p) for p in g.parts))
        if isinstance(g, Coproduct):
            i = rng.randrange(len(g.parts))
            return ("in", i, term(g.parts[i]))
        if isinstance(g, Exponent):
            return ("fun", tuple(term(g.base) for _ in g.labels))
        if isinstance(g, Constant):
            return ("atom", g.atoms[rng.randrange(len(g.atoms))])
        raise FunctorError("cannot generate for %r" % (g,))

    if n == 0:
        return Coalgebra(f, (), ())
    return Coalgebra(f, names, tuple(term(f) for _ in range(n)))


# -------------------------------------------------------- layered system

def layered_worstcase(k):
    """Weighted system with k+1 layers of four pairwise-inequivalent states.

    Every state of layer j+1 sees total weight 3 on each of the four layer-j
    states' columns arranged so that distinguishing within the layer needs
    certificates whose tree unfolding doubles per layer, while the shared
    dag only grows linearly."""
    f = MonoidValued(REAL)
    names = []
    structure = []
    for j in range(k + 1):
        names += ["w%d" % j, "x%d" % j, "y%d" % j, "z%d" % j]
    idx = {name: i for i, name in enumerate(names)}

    def row(entries):
        return ("vec", tuple(sorted(
            (idx[s], Fraction(w)) for s, w in entries.items())))

    structure.append(row({"w0": 1}))
    structure.append(row({"x0": 2}))
    structure.append(row({"y0": 3}))
    structure.append(row({"z0": 4}))
    for j in range(k):
        w, x, y, z = "w%d" % j, "x%d" % j, "y%d" % j, "z%d" % j
        structure.append(row({w: 1, x: 2, y: 1, z: 2}))
        structure.append(row({w: 1, x: 2, y: 2, z: 1}))
        structure.append(row({w: 2, x: 1, y: 1, z: 2}))
        structure.append(row({w: 2, x: 1, y: 2, z: 1}))
    return Coalgebra(f, tuple(names), tuple(structure))
