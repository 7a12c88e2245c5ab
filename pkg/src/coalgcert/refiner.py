"""Quasilinear partition refinement for coalgebras.

The loop keeps two partitions: the fine partition P (a RefinablePartition)
and a coarser one Q, represented implicitly by grouping P-blocks into
compound descriptors.  While some compound holds at least two P-blocks, a
sub-block S with 2|S| <= |B| is extracted from its compound B, and every
P-block is refined by the key

    generic mode        F(chi_S^B) . c      over palette {0: outside B,
                                            1: in B minus S, 2: in S}
    cancellative mode   F(chi_S) . c        over palette {0: outside S, 1: in S}

Only predecessors of S are rekeyed; states without an edge into S keep
their block's shared default key, computed once per refined block from a
representative.  Keyed states whose key happens to equal the default key
(possible with cancelling weights) merge back into the default group.

Every refinement step is recorded in a trace from which the certificate
builder and the distinguishing-formula search replay the whole run.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .coalgebra import degrees, predecessor_lists, term_states
from .functor import is_cancellative, is_zippable
from .partition import RefinablePartition
from .values import f_apply_coloring

MODES = ("generic", "cancellative", "naive")


class RefineError(RuntimeError):
    pass


@dataclass
class InitEvent:
    # (block id, value of F! . c on the block, states)
    blocks: list


@dataclass
class Refinement:
    parent: int
    # (child block id, split key value, moved states or None for the
    # untouched remainder that keeps the parent id)
    children: list


@dataclass
class SplitEvent:
    splitter: int          # P-block id of S at the time of the split
    splitter_states: tuple
    compound: int          # descriptor of B (keeps describing B minus S)
    new_compound: int      # fresh descriptor for {S}
    refinements: list


@dataclass
class Trace:
    mode: str
    n: int
    init: InitEvent
    splits: list


@dataclass
class PartitionResult:
    partition: RefinablePartition
    blocks: list       # sorted state lists, indexed by block id order
    block_ids: list    # block id per entry of `blocks`
    block_of: list
    trace: Trace
    stats: dict


class _ChiSB:
    """Colouring chi_S^B: 2 on S, 1 on B minus S, 0 elsewhere."""

    def __init__(self, in_S, block_of, qof, cmpB):
        self.in_S = in_S
        self.block_of = block_of
        self.qof = qof
        self.cmpB = cmpB

    def __getitem__(self, y):
        if y in self.in_S:
            return 2
        return 1 if self.qof[self.block_of[y]] == self.cmpB else 0


class _ChiS:
    """Colouring chi_S: 1 on S, 0 elsewhere."""

    def __init__(self, in_S):
        self.in_S = in_S

    def __getitem__(self, y):
        return 1 if y in self.in_S else 0


def initial_partition(c):
    """Group states by the output value F! . c (palette of size 1).

    Returns (partition, [(block id, value)])."""
    part = RefinablePartition(c.n)
    if c.n == 0:
        return part, []
    zero = [0] * c.n
    key = lambda s: f_apply_coloring(c.functor, c.structure[s], zero, 1)
    return part, part.split_by_key(0, key)


def refine(c, mode="generic", audit=False):
    """Run partition refinement to behavioural equivalence.

    mode: 'generic' uses three-colour keys; 'cancellative' uses the cheaper
    two-colour keys (sound only for cancellative functors); 'naive' rekeys
    every state each round with three-colour keys (cross-checking aid).
    """
    if mode not in MODES:
        raise RefineError("unknown mode %r" % mode)
    ok, why = is_zippable(c.functor)
    if not ok:
        raise RefineError(why)
    if mode == "cancellative" and not is_cancellative(c.functor):
        raise RefineError("functor is not cancellative; use generic mode")
    f = c.functor
    structure = c.structure
    n = c.n
    part, init_groups = initial_partition(c)
    init = InitEvent([(b, v, tuple(sorted(part.block_states(b))))
                      for b, v in init_groups])
    trace = Trace(mode, n, init, [])
    stats = {"iterations": 0, "new_blocks": 0, "refined_parents": 0,
             "visited_edges": 0, "splitter_states": 0, "max_in_splitter": 0}
    in_splitter = [0] * n  # how often each state sat inside S
    preds = predecessor_lists(c)
    deg = degrees(c)

    qof = {}            # block id -> compound id
    members = {}        # compound id -> insertion-ordered dict of block ids
    cmp_size = {}
    queue = deque()
    queued = set()
    next_cmp = 0

    def new_compound(block_ids, size):
        nonlocal next_cmp
        cid = next_cmp
        next_cmp += 1
        members[cid] = dict.fromkeys(block_ids)
        cmp_size[cid] = size
        for b in block_ids:
            qof[b] = cid
        return cid

    def maybe_enqueue(cid):
        if len(members[cid]) >= 2 and cid not in queued:
            queue.append(cid)
            queued.add(cid)

    if n:
        root = new_compound(list(range(part.num_blocks())), n)
        maybe_enqueue(root)

    while queue:
        cmpB = queue.popleft()
        queued.discard(cmpB)
        if len(members[cmpB]) < 2:
            continue  # became simple while waiting: stale entry
        it = iter(members[cmpB])
        a = next(it)
        b2 = next(it)
        S = a if part.size(a) <= part.size(b2) else b2
        assert 2 * part.size(S) <= cmp_size[cmpB]
        S_states = tuple(part.block_states(S))
        in_S = set(S_states)
        stats["iterations"] += 1
        stats["splitter_states"] += len(S_states)
        for s in S_states:
            in_splitter[s] += 1
            if in_splitter[s] > stats["max_in_splitter"]:
                stats["max_in_splitter"] = in_splitter[s]

        if mode == "cancellative":
            col, k = _ChiS(in_S), 2
        else:
            col, k = _ChiSB(in_S, part.block_of, qof, cmpB), 3

        # phase 1: key the affected states while S still counts as part of B
        plans = []  # (parent, groups dict key->state list, default key or None)
        if mode == "naive":
            for T in range(part.num_blocks()):
                t_states = part.block_states(T)
                stats["visited_edges"] += sum(deg[x] for x in t_states)
                groups = {}
                for x in t_states:
                    groups.setdefault(
                        f_apply_coloring(f, structure[x], col, k), []).append(x)
                if len(groups) > 1:
                    plans.append((T, groups, None))
        else:
            touched = {}
            seen = set()
            for y in S_states:
                for x in preds[y]:
                    if x not in seen:
                        seen.add(x)
                        touched.setdefault(part.block_of[x], []).append(x)
            for T, t_states in touched.items():
                stats["visited_edges"] += sum(deg[x] for x in t_states)
                for x in t_states:
                    part.mark(x)
                groups = {}
                for x in t_states:
                    groups.setdefault(
                        f_apply_coloring(f, structure[x], col, k), []).append(x)
                default = None
                if part.marked[T] < part.size(T):
                    rep = part.elems[part.first[T] + part.marked[T]]
                    stats["visited_edges"] += deg[rep]
                    default = f_apply_coloring(f, structure[rep], col, k)
                    groups.pop(default, None)  # cancelled back to the default
                    if not groups:
                        part.marked[T] = 0
                        continue
                elif len(groups) == 1:
                    part.marked[T] = 0
                    continue
                part.marked[T] = 0
                plans.append((T, groups, default))

        # phase 2: extract S from its compound (refine Q)
        members[cmpB].pop(S)
        cmp_size[cmpB] -= len(S_states)
        cmpS = new_compound([S], len(S_states))
        maybe_enqueue(cmpB)

        # phase 3: refine P and record the event
        refinements = []
        for T, groups, default in plans:
            items = list(groups.items())
            if default is not None:
                children = [(T, default, None)]
                moved = items
            else:
                children = [(T, items[0][0], tuple(items[0][1]))]
                moved = items[1:]
            new_ids = part.extract_groups(T, [g for _, g in moved])
            stats["new_blocks"] += len(new_ids)
            stats["refined_parents"] += 1
            children.extend(
                (nb, key, tuple(g)) for nb, (key, g) in zip(new_ids, moved))
            cmpT = qof[T]
            for nb in new_ids:
                members[cmpT][nb] = None
                qof[nb] = cmpT
            maybe_enqueue(cmpT)
            refinements.append(Refinement(T, children))
        trace.splits.append(SplitEvent(S, S_states, cmpB, cmpS, refinements))
        if audit:
            part.audit()
            assert all(len(ms) >= 1 for ms in members.values())

    block_ids = list(range(part.num_blocks()))
    blocks = [sorted(part.block_states(b)) for b in block_ids]
    return PartitionResult(part, blocks, block_ids, list(part.block_of),
                           trace, stats)


def replay_trace(trace):
    """Rebuild the final block assignment from the trace alone."""
    block_of = [None] * trace.n
    for bid, _val, states in trace.init.blocks:
        for s in states:
            block_of[s] = bid
    for ev in trace.splits:
        for ref in ev.refinements:
            for cid, _val, states in ref.children:
                if states is not None and cid != ref.parent:
                    for s in states:
                        block_of[s] = cid
    return block_of


def compute_split_keys(c, S_states, in_B, mode="generic"):
    """Split keys of all predecessors of S (standalone helper).

    ``in_B`` is a membership predicate for the surrounding compound block B
    (ignored in cancellative mode).  Returns {state: key value}."""
    in_S = set(S_states)
    if mode == "cancellative":
        col, k = _ChiS(in_S), 2
    else:
        class _Col:
            def __getitem__(self, y):
                return 2 if y in in_S else (1 if in_B(y) else 0)
        col, k = _Col(), 3
    preds = predecessor_lists(c)
    out = {}
    for y in S_states:
        for x in preds[y]:
            if x not in out:
                out[x] = f_apply_coloring(c.functor, c.structure[x], col, k)
    return out
