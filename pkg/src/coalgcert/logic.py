"""Evaluation of dag formulas over a coalgebra.

The modal clause is colouring-based: a binary modality <t>(phi, psi) holds
at x when applying the functor to the three-colour map induced by the two
extensions (2 on both, 1 on psi only, 0 elsewhere) reproduces exactly the
value t; unary and nullary modalities use two- and one-colour maps."""

from __future__ import annotations

import random

from .certdag import FormulaDag
from .values import ValueError_, f_apply_coloring, parse_value, validate_value


class EvalError(ValueError):
    pass


def _colouring(n, ext_s, ext_b):
    col = [0] * n
    for y in ext_b:
        col[y] = 1
    for y in ext_s:
        if col[y] == 1:
            col[y] = 2
    return col


def eval_ref(dag, ref, c, memo=None):
    """Extension of a formula reference: the set of satisfying states."""
    if memo is None:
        memo = {}
    ext = eval_node(dag, ref[0], c, memo)
    if ref[1]:
        return frozenset(range(c.n)) - ext
    return ext


def eval_node(dag, nid, c, memo):
    if nid in memo:
        return memo[nid]
    node = dag.nodes[nid]
    if node[0] == "top":
        out = frozenset(range(c.n))
    elif node[0] == "and":
        out = eval_ref(dag, node[1], c, memo) & eval_ref(dag, node[2], c, memo)
    elif node[0] == "modal":
        _, val, arity, args = node
        k = (1, 2, 3)[arity]
        if not validate_value(c.functor, val, k):
            raise EvalError("modal label %r does not fit palette %d" % (val, k))
        if arity == 0:
            col = [0] * c.n
        elif arity == 1:
            ext = eval_ref(dag, args[0], c, memo)
            col = [1 if y in ext else 0 for y in range(c.n)]
        else:
            ext_s = eval_ref(dag, args[0], c, memo)
            ext_b = eval_ref(dag, args[1], c, memo)
            col = _colouring(c.n, ext_s, ext_b)
        out = frozenset(
            x for x in range(c.n)
            if f_apply_coloring(c.functor, c.structure[x], col, k) == val)
    else:
        raise EvalError("bad node %r" % (node,))
    memo[nid] = out
    return out


def check_certificates(certs, c=None):
    """Verify that every block certificate evaluates exactly to its block.

    Returns a list of mismatches (block id, expected, got); empty means the
    certificate set is sound and complete for the final partition."""
    if c is None:
        c = certs.coalgebra
    memo = {}
    bad = []
    for bid, states in zip(certs.block_ids, certs.blocks):
        got = eval_ref(certs.dag, certs.delta[bid], c, memo)
        if got != frozenset(states):
            bad.append((bid, frozenset(states), got))
    for cmp_id, ref in certs.beta.items():
        # compound formulas must cover whole unions of blocks
        got = eval_ref(certs.dag, ref, c, memo)
        covered = set()
        for bid, states in zip(certs.block_ids, certs.blocks):
            if set(states) <= got:
                covered |= set(states)
        if got != frozenset(covered):
            bad.append(("beta%d" % cmp_id, frozenset(covered), got))
    return bad


# ------------------------------------------------------------- parsing

class _FormulaParser:
    def __init__(self, text, functor):
        self.text = text
        self.functor = functor
        self.i = 0
        self.dag = FormulaDag()

    def ws(self):
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def eat(self, s):
        self.ws()
        if not self.text.startswith(s, self.i):
            raise EvalError("expected %r at %r" % (s, self.text[self.i:]))
        self.i += len(s)

    def try_eat(self, s):
        self.ws()
        if self.text.startswith(s, self.i):
            self.i += len(s)
            return True
        return False

    def formula(self):
        self.ws()
        if self.try_eat("true"):
            return (0, False)
        if self.try_eat("~"):
            nid, neg = self.formula()
            return (nid, not neg)
        if self.try_eat("("):
            left = self.formula()
            self.eat("&")
            right = self.formula()
            self.eat(")")
            return self.dag.add_and(left, right)
        if self.try_eat("<"):
            j = self.text.index(">", self.i)
            literal = self.text[self.i:j]
            self.i = j + 1
            args = []
            if self.try_eat("("):
                args.append(self.formula())
                while self.try_eat(","):
                    args.append(self.formula())
                self.eat(")")
            arity = len(args)
            if arity > 2:
                raise EvalError("modalities take at most two arguments")
            val = parse_value(literal, self.functor, (1, 2, 3)[arity])
            return self.dag.add_modal(val, arity, tuple(args))
        raise EvalError("cannot parse formula at %r" % self.text[self.i:])


def parse_formula(text, functor):
    """Parse the generic formula syntax; returns (dag, reference)."""
    try:
        p = _FormulaParser(text, functor)
        ref = p.formula()
        p.ws()
        if p.i != len(text):
            raise EvalError("trailing input %r" % text[p.i:])
        return p.dag, ref
    except (ValueError_, ValueError, IndexError) as e:
        raise EvalError("bad formula %r: %s" % (text, e)) from None


# ------------------------------------------------------- adequacy probe

def adequacy_probe(c, blocks, rng=None, samples=200, depth=3):
    """Sanity-check the logic against a known equivalence.

    Samples random formulas (with realizable modal labels) and verifies
    that states in the same block of `blocks` are never separated.  Returns
    the number of formulas tried; raises on any violation."""
    rng = rng or random.Random(0)
    n = c.n
    if n == 0:
        return 0
    dag = FormulaDag()
    block_of = {}
    for b, states in enumerate(blocks):
        for s in states:
            block_of[s] = b

    def rand_formula(d):
        r = rng.random()
        if d == 0 or r < 0.2:
            return (0, False)
        if r < 0.35:
            nid, neg = rand_formula(d - 1)
            return (nid, not neg)
        if r < 0.55:
            return dag.add_and(rand_formula(d - 1), rand_formula(d - 1))
        arity = rng.choice((0, 1, 2))
        x = rng.randrange(n)
        if arity == 0:
            val = f_apply_coloring(c.functor, c.structure[x], [0] * n, 1)
            return dag.add_modal(val, 0, ())
        sub = [rand_formula(d - 1) for _ in range(arity)]
        memo = {}
        exts = [eval_ref(dag, s, c, memo) for s in sub]
        if arity == 1:
            col = [1 if y in exts[0] else 0 for y in range(n)]
        else:
            col = _colouring(n, exts[0], exts[1])
        val = f_apply_coloring(c.functor, c.structure[x], col, arity + 1)
        return dag.add_modal(val, arity, tuple(sub))

    for _ in range(samples):
        ref = rand_formula(depth)
        ext = eval_ref(dag, ref, c, {})
        for states in blocks:
            inside = sum(1 for s in states if s in ext)
            if inside not in (0, len(states)):
                raise EvalError(
                    "formula separates equivalent states in block %r" % states)
    return samples
