"""The decomposition language: expression trees over the five generating maps,
their evaluator, and the canonical decomposition of an arbitrary morphism.

Decomposition works target-first.  While the target graph has an edge, the
object splits as a product inside a tensor context and the morphism is the
pairing of its two context projections.  Once the target is edgeless, the
morphism lifts through a slot tensor (one product power W^m per target
generator, one slot per circle through it, every slot used exactly once) and
is recombined by addition towers; splitting the slot tensor back through the
same product pullbacks leaves maps with pairwise disjoint circles.  Those
factor through source projections and source tensor splits (with a flip
network restoring generator order) down to single-circle maps, which are a
lift ladder followed by an eta/identity interleaving.  Natural-number
coefficients enter in exactly one place, as the maps x -> r x inserted
before a single-circle ladder.

The slot choice is the fixed rule "per target generator, circles ordered by
source generator then support", which pins one canonical expression per
morphism.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .rig import Rig
from .cograph import mask_key, vertices_of
from .cotree import Cotree, K, W, factors, format_cotree, join, leaves, n_join, n_tensor, tensor
from .weilalg import algebra_of, poly_trusted
from . import morphism as mor
from .morphism import Morphism, TypeMismatch


class IllTyped(Exception):
    """A node's inferred source/target objects do not fit together."""

    def __init__(self, location: "GenExpr", reason: str):
        self.location = location
        super().__init__(f"{reason} at {format_genexpr(location)}")


class GenExpr:
    """Base class for decomposition expressions."""

    __slots__ = ("_hash",)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"GenExpr({format_genexpr(self)})"


class _Leaf(GenExpr):
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name
        self._hash = hash(("leaf", name))

    def __eq__(self, other):
        return isinstance(other, _Leaf) and self.name == other.name

    __hash__ = GenExpr.__hash__


Eps = _Leaf("eps")
Eta = _Leaf("eta")
Plus = _Leaf("plus")
L = _Leaf("l")
C = _Leaf("c")


class Id(GenExpr):
    __slots__ = ("obj",)

    def __init__(self, obj: Cotree):
        self.obj = obj
        self._hash = hash(("id", obj))

    def __eq__(self, other):
        return isinstance(other, Id) and self.obj == other.obj

    __hash__ = GenExpr.__hash__


class Ghat(GenExpr):
    """Coefficient map x -> r x; only meaningful over NAT."""

    __slots__ = ("r",)

    def __init__(self, r: int):
        if r < 0:
            raise ValueError("ghat needs a natural number")
        self.r = r
        self._hash = hash(("ghat", r))

    def __eq__(self, other):
        return isinstance(other, Ghat) and self.r == other.r

    __hash__ = GenExpr.__hash__


class Proj(GenExpr):
    __slots__ = ("prod", "side")

    def __init__(self, prod: Cotree, side: int):
        self.prod = prod
        self.side = side
        self._hash = hash(("proj", prod, side))

    def __eq__(self, other):
        return isinstance(other, Proj) and self.prod == other.prod and self.side == other.side

    __hash__ = GenExpr.__hash__


class Tensor(GenExpr):
    __slots__ = ("e1", "e2")

    def __init__(self, e1: GenExpr, e2: GenExpr):
        self.e1 = e1
        self.e2 = e2
        self._hash = hash(("tensor", e1, e2))

    def __eq__(self, other):
        return isinstance(other, Tensor) and self.e1 == other.e1 and self.e2 == other.e2

    __hash__ = GenExpr.__hash__


class Compose(GenExpr):
    __slots__ = ("outer", "inner")

    def __init__(self, outer: GenExpr, inner: GenExpr):
        self.outer = outer
        self.inner = inner
        self._hash = hash(("comp", outer, inner))

    def __eq__(self, other):
        return isinstance(other, Compose) and self.outer == other.outer and self.inner == other.inner

    __hash__ = GenExpr.__hash__


class Pair(GenExpr):
    """Pullback-induced map.  ``at`` = 0 pairs into the plain product of the
    two targets; ``at`` = t >= 1 merges the targets at the tensor-factor
    block starting at position t (spanning ``k1`` factors of the first
    target and ``k2`` of the second)."""

    __slots__ = ("e1", "e2", "at", "k1", "k2")

    def __init__(self, e1: GenExpr, e2: GenExpr, at: int = 0, k1: int = 1, k2: int = 1):
        self.e1 = e1
        self.e2 = e2
        self.at = at
        self.k1 = k1
        self.k2 = k2
        self._hash = hash(("pair", e1, e2, at, k1, k2))

    def __eq__(self, other):
        return (
            isinstance(other, Pair)
            and self.at == other.at
            and self.k1 == other.k1
            and self.k2 == other.k2
            and self.e1 == other.e1
            and self.e2 == other.e2
        )

    __hash__ = GenExpr.__hash__


# ---------------------------------------------------------------------------
# printing

def format_genexpr(e: GenExpr) -> str:
    if isinstance(e, _Leaf):
        return e.name
    if isinstance(e, Id):
        return f"id({format_cotree(e.obj)})"
    if isinstance(e, Ghat):
        return f"ghat({e.r})"
    if isinstance(e, Proj):
        return f"proj({format_cotree(e.prod)}, {e.side})"
    if isinstance(e, Tensor):
        return f"tensor({format_genexpr(e.e1)}, {format_genexpr(e.e2)})"
    if isinstance(e, Compose):
        return f"comp({format_genexpr(e.outer)}, {format_genexpr(e.inner)})"
    if isinstance(e, Pair):
        if e.at == 0:
            return f"pair({format_genexpr(e.e1)}, {format_genexpr(e.e2)})"
        return (
            f"pairat({e.at}, {e.k1}, {e.k2}, "
            f"{format_genexpr(e.e1)}, {format_genexpr(e.e2)})"
        )
    raise TypeError(f"not a GenExpr: {e!r}")


# ---------------------------------------------------------------------------
# evaluation

_EVAL_CACHE: dict[tuple[GenExpr, Rig], Morphism] = {}


def evaluate(e: GenExpr, rig: Rig = Rig.BOOL2) -> Morphism:
    """Evaluate an expression to the morphism it denotes."""
    key = (e, rig)
    hit = _EVAL_CACHE.get(key)
    if hit is not None:
        return hit
    try:
        if isinstance(e, _Leaf):
            out = mor.generators(rig)[f"{e.name}_W"]
        elif isinstance(e, Id):
            out = mor.identity(algebra_of(e.obj, rig))
        elif isinstance(e, Ghat):
            if rig is not Rig.NAT:
                raise IllTyped(e, "ghat is only available over nat")
            out = mor.ghat(e.r, rig)
        elif isinstance(e, Proj):
            if e.prod.kind != "join":
                raise IllTyped(e, "proj needs a product object")
            out = mor.projection(algebra_of(e.prod, rig), e.side)
        elif isinstance(e, Tensor):
            out = mor.tensor_mor(evaluate(e.e1, rig), evaluate(e.e2, rig))
        elif isinstance(e, Compose):
            fo = evaluate(e.outer, rig)
            fi = evaluate(e.inner, rig)
            if fi.target != fo.source:
                raise IllTyped(e, "compose seam mismatch")
            out = mor.compose(fo, fi, check=False)
        elif isinstance(e, Pair):
            out = mor.pair_into(
                evaluate(e.e1, rig), evaluate(e.e2, rig), e.at, e.k1, e.k2, check=False
            )
        else:
            raise TypeError(f"not a GenExpr: {e!r}")
    except TypeMismatch as exc:
        raise IllTyped(e, str(exc)) from exc
    _EVAL_CACHE[key] = out
    return out


def infer_types(e: GenExpr, rig: Rig = Rig.BOOL2) -> tuple[Cotree, Cotree]:
    """Source and target cotrees of a well-typed expression."""
    f = evaluate(e, rig)
    return f.source.cotree, f.target.cotree


# ---------------------------------------------------------------------------
# small expression builders

@lru_cache(maxsize=None)
def eta_expr(t: Cotree) -> GenExpr:
    """The unique map out of the base rig, as an expression K -> t."""
    if t.kind == "K":
        return Id(K)
    if t.kind == "W":
        return Eta
    if t.kind == "tensor":
        out = eta_expr(t.parts[-1])
        for p in reversed(t.parts[:-1]):
            out = Tensor(eta_expr(p), out)
        return out
    return Pair(eta_expr(t.parts[0]), eta_expr(join(*t.parts[1:])), at=0)


@lru_cache(maxsize=None)
def eps_expr(t: Cotree) -> GenExpr:
    """The augmentation, as an expression t -> K."""
    if t.kind == "K":
        return Id(K)
    if t.kind == "W":
        return Eps
    if t.kind == "tensor":
        out = eps_expr(t.parts[-1])
        for p in reversed(t.parts[:-1]):
            out = Tensor(eps_expr(p), out)
        return out
    return Compose(eps_expr(t.parts[0]), Proj(t, 1))


@lru_cache(maxsize=None)
def plus_expr(m: int) -> GenExpr:
    """The m-ary addition W^m -> W (eta for m = 0, identity for m = 1)."""
    if m == 0:
        return Eta
    if m == 1:
        return Id(W)
    if m == 2:
        return Plus
    wm = n_join(m)
    inner = Pair(Proj(wm, 1), Compose(plus_expr(m - 1), Proj(wm, 2)), at=0)
    return Compose(Plus, inner)


@lru_cache(maxsize=None)
def _ladder(m: int) -> GenExpr:
    """Iterated lift W -> mW, x -> x1...xm."""
    if m == 1:
        return Id(W)
    if m == 2:
        return L
    return Compose(Tensor(Id(W), _ladder(m - 1)), L)


def one_circle_expr(target: Cotree, mask: int) -> GenExpr:
    """Single-circle map W -> target hitting exactly the vertices of ``mask``:
    a lift ladder followed by an eta/identity interleaving."""
    positions = vertices_of(mask)
    if not positions:
        raise ValueError("one-circle expression needs a non-empty circle")
    if target.kind == "W":
        interleave: GenExpr = Id(W)
    else:
        legs = [Id(W) if (i + 1) in positions else Eta for i in range(len(target.parts))]
        interleave = legs[-1]
        for leg in reversed(legs[:-1]):
            interleave = Tensor(leg, interleave)
    return Compose(interleave, _ladder(len(positions)))


def _transposition_expr(r: int, q: int) -> GenExpr:
    """Swap of adjacent generators q, q+1 on the flat tensor rW."""
    mid: GenExpr = C if q + 1 == r else Tensor(C, Id(n_tensor(r - q - 1)))
    return mid if q == 1 else Tensor(Id(n_tensor(q - 1)), mid)


def perm_network(perm: tuple[int, ...]) -> GenExpr | None:
    """Relabelling of the flat tensor rW sending generator p to perm[p-1],
    compiled to a flip network by insertion sort; None for the identity."""
    r = len(perm)
    arr = list(perm)
    swaps: list[int] = []
    for i in range(1, r):
        j = i
        while j > 0 and arr[j - 1] > arr[j]:
            arr[j - 1], arr[j] = arr[j], arr[j - 1]
            swaps.append(j)  # swapped positions j, j+1 (1-based)
            j -= 1
    if not swaps:
        return None
    out: GenExpr | None = None
    for q in swaps:
        t = _transposition_expr(r, q)
        out = t if out is None else Compose(t, out)
    return out


# ---------------------------------------------------------------------------
# circles and the slot choice rule

def circles_of(f: Morphism) -> list[tuple[int, int, int]]:
    """All circles of ``f`` as (source generator, support mask, coefficient),
    in the canonical order (generator index, then support)."""
    out = []
    for i, p in enumerate(f.images, start=1):
        for mask, coeff in p.terms:
            out.append((i, mask, coeff))
    out.sort(key=lambda c: (c[0], mask_key(c[1])))
    return out


class SlotAssignment:
    """The pre-determined circle-to-slot choice for a map into an edgeless
    object: per target generator, the circles through it are ordered by
    (source generator, support) and take slots in that order."""

    def __init__(self, f: Morphism):
        tgt = f.target
        if tgt.graph.edges:
            raise TypeMismatch("slot assignment needs an edgeless target")
        self.morphism = f
        self.circles = circles_of(f)
        n = tgt.n
        counts = [0] * n
        slot_of: dict[tuple[int, int], dict[int, int]] = {(i, m): {} for i, m, _ in self.circles}
        for j in range(1, n + 1):
            bit = 1 << (j - 1)
            for i, m, _ in self.circles:
                if m & bit:
                    counts[j - 1] += 1
                    slot_of[(i, m)][j] = counts[j - 1]
        self.counts = tuple(counts)
        self._slot_of = slot_of
        offsets = []
        total = 0
        for c in counts:
            offsets.append(total)
            total += c
        self.offsets = tuple(offsets)
        self.total_slots = total

    def slot(self, i: int, mask: int, j: int) -> int:
        """Slot (1-based) taken by circle (i, mask) inside W^{m_j}."""
        return self._slot_of[(i, mask)][j]

    def slot_generator(self, j: int, s: int) -> int:
        """Global generator index of slot s of target generator j."""
        return self.offsets[j - 1] + s

    def circle_at(self, j: int, s: int) -> tuple[int, int]:
        """The circle (source generator, mask) holding slot s at target generator j."""
        for (i, m), slots in self._slot_of.items():
            if slots.get(j) == s:
                return (i, m)
        raise KeyError((j, s))

    def slot_cotree(self) -> Cotree:
        return tensor(*[n_join(c) for c in self.counts])

    def lift(self) -> Morphism:
        """The lifted map into the slot tensor using every slot exactly once."""
        f = self.morphism
        s_obj = algebra_of(self.slot_cotree(), f.rig)
        images: list[dict[int, int]] = [dict() for _ in range(f.source.n)]
        for i, m, coeff in self.circles:
            new_mask = 0
            mm = m
            while mm:
                bit = mm & -mm
                j = bit.bit_length()
                new_mask |= 1 << (self.slot_generator(j, self.slot(i, m, j)) - 1)
                mm ^= bit
            images[i - 1][new_mask] = coeff
        return Morphism(f.source, s_obj, tuple(poly_trusted(s_obj, d) for d in images))


def choice_rule(f: Morphism) -> SlotAssignment:
    """The deterministic circle-to-slot assignment for a map into nW."""
    return SlotAssignment(f)


# ---------------------------------------------------------------------------
# the decomposition

@dataclass(frozen=True)
class DecompositionTrace:
    """Ordered build log; the last entry's expression is the final result."""

    steps: tuple[tuple[str, GenExpr], ...]

    def replay(self) -> GenExpr:
        return self.steps[-1][1]


def decompose(f: Morphism) -> GenExpr:
    """Canonical expression for ``f`` in the generating maps; round-trips
    through ``evaluate`` exactly."""
    return _decompose(f, None)


def decompose_with_trace(f: Morphism) -> tuple[GenExpr, DecompositionTrace]:
    steps: list[tuple[str, GenExpr]] = []
    e = _decompose(f, steps)
    return e, DecompositionTrace(tuple(steps))


def _record(trace, tag: str, expr: GenExpr) -> GenExpr:
    if trace is not None:
        trace.append((tag, expr))
    return expr


def _decompose(f: Morphism, trace) -> GenExpr:
    if f.target.cotree.kind == "K":
        return _record(trace, "Projection", eps_expr(f.source.cotree))
    if f.source.cotree.kind == "K":
        return _record(trace, "OneCircle", eta_expr(f.target.cotree))
    if f.target.graph.edges:
        return _split_at_join(f, trace, "PullbackTarget", _decompose)
    return _decompose_edgeless(f, trace)


def _decompose_edgeless(f: Morphism, trace) -> GenExpr:
    if f.is_zero_map():
        expr = Compose(eta_expr(f.target.cotree), eps_expr(f.source.cotree))
        return _record(trace, "SplitCircles", expr)
    assignment = SlotAssignment(f)
    lifted = assignment.lift()
    recomb = _recombiner_expr(assignment.counts)
    inner = _split_slots(lifted, trace)
    return _record(trace, "SplitGeneral", Compose(recomb, inner))


def _recombiner_expr(counts: tuple[int, ...]) -> GenExpr:
    legs = [plus_expr(c) for c in counts]
    out = legs[-1]
    for leg in reversed(legs[:-1]):
        out = Tensor(leg, out)
    return out


def _split_slots(f: Morphism, trace) -> GenExpr:
    if trace is None:
        return _split_slots_cached(f)
    return _split_slots_impl(f, trace)


@lru_cache(maxsize=None)
def _split_slots_cached(f: Morphism) -> GenExpr:
    return _split_slots_impl(f, None)


def _split_slots_impl(f: Morphism, trace) -> GenExpr:
    if all(p.kind != "join" for p in factors(f.target.cotree)):
        if trace is None:
            return _decompose_flat_cached(f)
        return _decompose_flat(f, trace)
    return _split_at_join(f, trace, "SplitCircles", _split_slots)


@lru_cache(maxsize=None)
def _split_data(target: "mor.WeilObject"):
    facts = factors(target.cotree)
    t = next(i for i, p in enumerate(facts, start=1) if p.kind == "join")
    prod = facts[t - 1]
    b1 = prod.parts[0]
    b2 = join(*prod.parts[1:])
    t1 = tensor(*facts[: t - 1], b1, *facts[t:])
    t2 = tensor(*facts[: t - 1], b2, *facts[t:])
    t1_obj = algebra_of(t1, target.rig)
    t2_obj = algebra_of(t2, target.rig)
    if len(facts) == 1:
        at, k1, k2 = 0, 1, 1
    else:
        at = t
        k1 = len(factors(b1))
        k2 = len(factors(b2))
    p1, p2 = mor.pair_projections(target, at, t1_obj, t2_obj, k1, k2)
    return (at, k1, k2, t1_obj, t2_obj,
            mor.restriction_gen_map(p1), mor.restriction_gen_map(p2))


def _split_at_join(f: Morphism, trace, tag: str, recurse) -> GenExpr:
    """Split the first product factor of the target through its pullback."""
    at, k1, k2, t1_obj, t2_obj, gm1, gm2 = _split_data(f.target)
    e1 = recurse(mor.compose_restriction(gm1, t1_obj, f), trace)
    e2 = recurse(mor.compose_restriction(gm2, t2_obj, f), trace)
    return _record(trace, tag, Pair(e1, e2, at, k1, k2))


@lru_cache(maxsize=None)
def _decompose_flat_cached(f: Morphism) -> GenExpr:
    return _decompose_flat(f, None)


def _decompose_flat(f: Morphism, trace) -> GenExpr:
    """Decompose a map with pairwise disjoint circles into a flat tensor of W's."""
    a = f.source.cotree
    if f.is_zero_map():
        if a.kind == "K":
            return _record(trace, "OneCircle", eta_expr(f.target.cotree))
        expr = Compose(eta_expr(f.target.cotree), eps_expr(a))
        return _record(trace, "SplitCircles", expr)
    if a.kind == "W":
        terms = f.images[0].terms
        if len(terms) != 1:
            raise TypeMismatch("intersecting circles survived slot splitting")
        mask, coeff = terms[0]
        body = one_circle_expr(f.target.cotree, mask)
        if coeff > 1:
            body = Compose(body, Ghat(coeff))
            return _record(trace, "Coefficient", body)
        return _record(trace, "OneCircle", body)
    if a.kind == "join":
        return _project_source(f, trace)
    return _tensor_split_source(f, trace)


def _project_source(f: Morphism, trace) -> GenExpr:
    """A disjoint-circle map out of a product lives in one factor."""
    a = f.source.cotree
    n1 = leaves(a.parts[0])
    nonzero = [i for i, p in enumerate(f.images, start=1) if p.terms]
    side = 1 if all(i <= n1 for i in nonzero) else 2
    if side == 2 and any(i <= n1 for i in nonzero):
        raise TypeMismatch("disjoint-circle map uses both product factors")
    kept = a.parts[0] if side == 1 else join(*a.parts[1:])
    kept_obj = algebra_of(kept, f.rig)
    images = f.images[:n1] if side == 1 else f.images[n1:]
    sub = Morphism(kept_obj, f.target, tuple(images))
    e = _decompose_flat(sub, trace) if trace is not None else _decompose_flat_cached(sub)
    return _record(trace, "Projection", Compose(e, Proj(a, side)))


def _tensor_split_source(f: Morphism, trace) -> GenExpr:
    """Split a disjoint-circle map along the source tensor, then restore the
    target generator order with a flip network."""
    a = f.source.cotree
    a1 = a.parts[0]
    arest = tensor(*a.parts[1:])
    n1 = leaves(a1)
    hit1 = _hit_positions(f.images[:n1])
    hitrest = _hit_positions(f.images[n1:])
    if hit1 & hitrest:
        raise TypeMismatch("intersecting circles across the source tensor")
    r = f.target.n
    all_pos = set(range(1, r + 1))
    unhit = all_pos - hit1 - hitrest
    order = sorted(hit1) + sorted(hitrest) + sorted(unhit)
    f1 = _restrict(f, a1, range(1, n1 + 1), sorted(hit1))
    frest = _restrict(f, arest, range(n1 + 1, f.source.n + 1), sorted(hitrest))
    e1 = _decompose_flat(f1, trace) if trace is not None else _decompose_flat_cached(f1)
    erest = _decompose_flat(frest, trace) if trace is not None else _decompose_flat_cached(frest)
    if unhit:
        base = Tensor(e1, Tensor(erest, eta_expr(n_tensor(len(unhit)))))
    else:
        base = Tensor(e1, erest)
    perm = [0] * r
    for pos, target_gen in enumerate(order, start=1):
        perm[pos - 1] = target_gen
    net = perm_network(tuple(perm))
    expr = base if net is None else Compose(net, base)
    return _record(trace, "NoIntersect", expr)


def _hit_positions(images) -> set[int]:
    out: set[int] = set()
    for p in images:
        for mask, _ in p.terms:
            out.update(vertices_of(mask))
    return out


def _restrict(f: Morphism, src: Cotree, gen_range, kept_positions: list[int]) -> Morphism:
    """Restrict to a source generator range and compress the target to the
    positions those generators actually hit."""
    new_index = {pos: k + 1 for k, pos in enumerate(kept_positions)}
    tgt = algebra_of(n_tensor(len(kept_positions)), f.rig)
    images = []
    for i in gen_range:
        p = f.images[i - 1]
        d = {}
        for mask, c in p.terms:
            new_mask = 0
            for v in vertices_of(mask):
                new_mask |= 1 << (new_index[v] - 1)
            d[new_mask] = c
        images.append(d)
    src_obj = algebra_of(src, f.rig)
    return Morphism(src_obj, tgt, tuple(poly_trusted(tgt, d) for d in images))


def decompose_one_circle(f: Morphism) -> GenExpr:
    """Expression for a one-term map W -> nW with coefficient 1."""
    if f.source.cotree.kind != "W" or f.target.graph.edges:
        raise TypeMismatch("decompose_one_circle needs W -> nW input")
    terms = f.images[0].terms
    if len(terms) != 1 or terms[0][1] != 1:
        raise TypeMismatch("decompose_one_circle needs exactly one circle with coefficient 1")
    return one_circle_expr(f.target.cotree, terms[0][0])


# ---------------------------------------------------------------------------
# ghat expansion

def expand_ghat(e: GenExpr) -> GenExpr:
    """Replace every Ghat(r) node by its pairing/addition construction."""
    if isinstance(e, Ghat):
        return _ghat_expr(e.r)
    if isinstance(e, Tensor):
        return Tensor(expand_ghat(e.e1), expand_ghat(e.e2))
    if isinstance(e, Compose):
        return Compose(expand_ghat(e.outer), expand_ghat(e.inner))
    if isinstance(e, Pair):
        return Pair(expand_ghat(e.e1), expand_ghat(e.e2), e.at)
    return e


@lru_cache(maxsize=None)
def _ghat_expr(r: int) -> GenExpr:
    if r == 0:
        return Compose(Eta, Eps)
    out: GenExpr = Id(W)
    for _ in range(r - 1):
        out = Compose(Plus, Pair(Id(W), out, at=0))
    return out
