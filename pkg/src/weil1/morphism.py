"""Morphisms between presented algebras: validity, composition, combinators,
the five generating maps, and the kappa/Kleisli correspondence.

A morphism is determined by one constant-free polynomial per source
generator.  Validity is the pair of conditions forced by the relations:
every image squares to zero, and images of generators joined by an edge
multiply to zero.  Pictorially the terms of an image are "circles" drawn on
the target graph, one colour per source generator; both conditions say that
any two circles of the same colour, or of colours joined by an edge, must
overlap or touch an edge of the target.

Over the {0,1} rig this data is exactly a graph map into kappa(target):
each generator goes to the clique of ind+(target) formed by its term
supports (the empty clique for a zero image).  The induced condition on a
graph map G_A -> kappa(G_B) is that adjacent vertices land on equal or
adjacent vertices; equal is allowed because a clique union with itself is
itself a clique.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from . import rig as rig_mod
from .rig import Rig, psi
from .cograph import Graph, mask_key
from .cotree import Cotree, K, W, factors, join, leaves, n_join, n_tensor, tensor
from .weilalg import (
    Polynomial,
    WeilObject,
    algebra_of,
    dict_add_into,
    dict_mul,
    format_poly,
    poly,
    poly_trusted,
    zero_poly,
)


class MorphismError(Exception):
    """Base class for morphism construction and composition failures."""


class TypeMismatch(MorphismError):
    """Source/target objects do not line up (cotree or rig)."""


class RigMismatch(MorphismError):
    """An operation needed {0,1} coefficients but saw larger ones."""


class RelationViolation(MorphismError):
    """A defining relation of the source is not killed by the images."""

    def __init__(self, i: int, j: int, witness: Polynomial):
        self.i = i
        self.j = j
        self.witness = witness
        rel = f"x{i}^2" if i == j else f"x{i} x{j}"
        super().__init__(f"image of relation {rel} = 0 is non-zero: {format_poly(witness)}")


@dataclass(frozen=True)
class Morphism:
    """An algebra map, stored as one constant-free image polynomial per generator."""

    source: WeilObject
    target: WeilObject
    images: tuple[Polynomial, ...]
    _hash: int = field(init=False, repr=False, compare=False, default=0)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.source, self.target, self.images)))

    def __hash__(self) -> int:
        return self._hash

    @property
    def rig(self) -> Rig:
        return self.source.rig

    def image(self, i: int) -> Polynomial:
        """Image polynomial of generator i (1-based)."""
        return self.images[i - 1]

    def image_dicts(self) -> tuple[dict[int, int], ...]:
        return tuple(dict(p.terms) for p in self.images)

    def is_zero_map(self) -> bool:
        return all(p.is_zero() for p in self.images)

    def __repr__(self) -> str:
        from .cotree import format_cotree

        clauses = "; ".join(
            f"x{i} |-> {format_poly(p)}" for i, p in enumerate(self.images, start=1)
        )
        head = f"{format_cotree(self.source.cotree)} -> {format_cotree(self.target.cotree)}"
        return f"Morphism({head}; {clauses})" if clauses else f"Morphism({head})"


def make(source: WeilObject, target: WeilObject, images, check: bool = True) -> Morphism:
    """Build a morphism from per-generator images (Polynomial or mask->coeff dict)."""
    if source.rig is not target.rig:
        raise TypeMismatch("source and target rigs differ")
    polys = []
    for img in images:
        p = img if isinstance(img, Polynomial) else poly(target, img)
        if p.ambient != target:
            raise TypeMismatch("image polynomial lives in the wrong ambient")
        if p.constant != 0:
            raise RelationViolation(0, 0, p)
        polys.append(p)
    if len(polys) != source.n:
        raise TypeMismatch(f"expected {source.n} images, got {len(polys)}")
    f = Morphism(source, target, tuple(polys))
    if check:
        _check_relations(f)
    return f


def validate(source: WeilObject, target: WeilObject, images) -> Morphism:
    """Check the relation conditions and return the validated morphism."""
    return make(source, target, images, check=True)


def _check_relations(f: Morphism) -> None:
    dicts = f.image_dicts()
    tgt = f.target
    for i, d in enumerate(dicts, start=1):
        if dict_mul(d, d, tgt):
            witness = poly(tgt, dict_mul(d, d, tgt))
            raise RelationViolation(i, i, witness)
    for u, v in f.source.graph.edges:
        prod = dict_mul(dicts[u - 1], dicts[v - 1], tgt)
        if prod:
            raise RelationViolation(u, v, poly(tgt, prod))


# ---------------------------------------------------------------------------
# basic constructions

@lru_cache(maxsize=None)
def identity(obj: WeilObject) -> Morphism:
    images = [poly(obj, [(1 << i, 1)]) for i in range(obj.n)]
    return Morphism(obj, obj, tuple(images))


def zero_map(source: WeilObject, target: WeilObject) -> Morphism:
    return Morphism(source, target, tuple(zero_poly(target) for _ in range(source.n)))


def eps(obj: WeilObject) -> Morphism:
    """The augmentation: every generator to 0 in the base rig."""
    return zero_map(obj, algebra_of(K, obj.rig))


def unit_map(target: WeilObject) -> Morphism:
    """The unique map out of the base rig (no generators to send anywhere)."""
    return Morphism(algebra_of(K, target.rig), target, ())


def compose(g: Morphism, f: Morphism, check: bool = True) -> Morphism:
    """g after f, by substituting g's images into f's image polynomials."""
    if f.target != g.source:
        raise TypeMismatch("compose needs f.target == g.source (same cotree and rig)")
    rig = f.rig
    tgt = g.target
    g_dicts = g.image_dicts()
    out_images = []
    for p in f.images:
        acc: dict[int, int] = {}
        for mask, coeff in p.terms:
            term: dict[int, int] = {0: 1}  # empty product; masks OR together
            m = mask
            while m and term:
                bit = m & -m
                term = _subst_step(term, g_dicts[bit.bit_length() - 1], tgt)
                m ^= bit
            if not term:
                continue
            if coeff != 1:
                term = {k: rig_mod.mul(coeff, c, rig) for k, c in term.items()}
            dict_add_into(acc, term, rig)
        out_images.append(poly_trusted(tgt, acc))
    result = Morphism(f.source, tgt, tuple(out_images))
    if check:
        _check_relations(result)
    return result


def _subst_step(acc: dict[int, int], nxt: dict[int, int], obj: WeilObject) -> dict[int, int]:
    # multiply a partial product by the image of one more generator
    if 0 in acc and len(acc) == 1:
        c = acc[0]
        if c == 1:
            return dict(nxt)
        return {k: rig_mod.mul(c, v, obj.rig) for k, v in nxt.items()}
    return dict_mul(acc, nxt, obj)


def tensor_mor(f: Morphism, g: Morphism) -> Morphism:
    """Componentwise tensor; g's target generators shift past f's."""
    if f.rig is not g.rig:
        raise TypeMismatch("tensor requires matching rigs")
    source = algebra_of(tensor(f.source.cotree, g.source.cotree), f.rig)
    target = algebra_of(tensor(f.target.cotree, g.target.cotree), f.rig)
    shift = f.target.n
    images = [poly_trusted(target, dict(p.terms)) for p in f.images]
    for p in g.images:
        images.append(poly_trusted(target, {mask << shift: c for mask, c in p.terms}))
    return Morphism(source, target, tuple(images))


@lru_cache(maxsize=None)
def projection(prod: WeilObject, side: int) -> Morphism:
    """Product projection: keep one side's generators, kill the other's."""
    t = prod.cotree
    if t.kind != "join":
        raise TypeMismatch(f"projection needs a product object, got {t!r}")
    if side not in (1, 2):
        raise ValueError("side must be 1 or 2")
    left = t.parts[0]
    right = join(*t.parts[1:])
    kept = left if side == 1 else right
    offset = 0 if side == 1 else leaves(left)
    target = algebra_of(kept, prod.rig)
    gen_map = {offset + j + 1: j + 1 for j in range(leaves(kept))}
    return restriction(prod, target, gen_map)


def restriction(source: WeilObject, target: WeilObject, gen_map: dict[int, int]) -> Morphism:
    """Map sending generator i to generator gen_map[i] (others to 0)."""
    images = []
    for i in range(1, source.n + 1):
        j = gen_map.get(i)
        images.append(poly(target, [] if j is None else [(1 << (j - 1), 1)]))
    return make(source, target, images, check=True)


def restriction_gen_map(proj: Morphism) -> tuple[int, ...]:
    """Per-generator target index (0 for killed) of a restriction morphism."""
    out = []
    for p in proj.images:
        out.append(p.terms[0][0].bit_length() if p.terms else 0)
    return tuple(out)


def compose_restriction(gen_map: tuple[int, ...], target: WeilObject, f: Morphism) -> Morphism:
    """Compose a restriction (given by its generator map) after ``f``.

    A monomial survives only when none of its generators are killed, and
    distinct survivors stay distinct, so this is a plain mask remap."""
    images = []
    for p in f.images:
        d: dict[int, int] = {}
        for mask, c in p.terms:
            new = 0
            m = mask
            while m:
                bit = m & -m
                j = gen_map[bit.bit_length() - 1]
                if j == 0:
                    new = -1
                    break
                new |= 1 << (j - 1)
                m ^= bit
            if new >= 0:
                d[new] = c
        images.append(poly_trusted(target, d))
    return Morphism(f.source, target, tuple(images))


def pair(f1: Morphism, f2: Morphism) -> Morphism:
    """The induced map into the plain product of the two targets."""
    return pair_into(f1, f2, at=0)


def pair_into(
    f1: Morphism, f2: Morphism, at: int = 0, k1: int = 1, k2: int = 1, check: bool = True
) -> Morphism:
    """Induced map into a product formed inside a common tensor context.

    ``at == 0`` is the plain product: target ``T1 x T2``, image sums.  For
    ``at = t >= 1`` the targets must agree except on a block of tensor
    factors starting at position t (``k1`` factors of the first target,
    ``k2`` of the second), and the result lands in the object with that
    block replaced by the product of the two variants -- the pullback of
    the augmentations, tensored with the untouched context.  The
    shared-context parts of the two images must agree; everything else is
    glued.
    """
    if f1.source != f2.source:
        raise TypeMismatch("pair needs a common source")
    if f1.rig is not f2.rig:
        raise TypeMismatch("pair requires matching rigs")
    rig = f1.rig
    target_tree, map1, map2, block1, block2 = _pair_layout(
        f1.target.cotree, f2.target.cotree, at, k1, k2
    )
    target = algebra_of(target_tree, rig)
    images = []
    for p1, p2 in zip(f1.images, f2.images):
        acc: dict[int, int] = {}
        ctx1: dict[int, int] = {}
        for mask, c in p1.terms:
            tmask = _remap(mask, map1)
            if tmask & block1:
                acc[tmask] = c
            else:
                ctx1[tmask] = c
                acc[tmask] = c
        ctx2: dict[int, int] = {}
        for mask, c in p2.terms:
            tmask = _remap(mask, map2)
            if tmask & block2:
                acc[tmask] = c
            else:
                ctx2[tmask] = c
        if ctx1 != ctx2:
            raise TypeMismatch("pair components disagree over the shared context")
        images.append(poly_trusted(target, acc))
    u = Morphism(f1.source, target, tuple(images))
    if check:
        _check_relations(u)
        p1m, p2m = pair_projections(target, at, f1.target, f2.target, k1, k2)
        if compose(p1m, u, check=False) != f1 or compose(p2m, u, check=False) != f2:
            raise TypeMismatch("pairing failed to reproduce its components")
    return u


@lru_cache(maxsize=None)
def _pair_layout(t1: Cotree, t2: Cotree, at: int, k1: int = 1, k2: int = 1):
    """Target cotree and generator embeddings for pair_into."""
    n1, n2 = leaves(t1), leaves(t2)
    if at == 0:
        target = join(t1, t2)
        map1 = tuple(range(1, n1 + 1))
        map2 = tuple(range(n1 + 1, n1 + n2 + 1))
        block1 = (1 << n1) - 1
        block2 = ((1 << n2) - 1) << n1
        return target, map1, map2, block1, block2
    f1l = list(factors(t1))
    f2l = list(factors(t2))
    if not (1 <= at and at - 1 + k1 <= len(f1l) and at - 1 + k2 <= len(f2l)):
        raise TypeMismatch("pair factor block does not fit the targets")
    prefix = f1l[: at - 1]
    suffix = f1l[at - 1 + k1 :]
    if f2l[: at - 1] != prefix or f2l[at - 1 + k2 :] != suffix:
        raise TypeMismatch("pair targets do not share a tensor context")
    b1 = tensor(*f1l[at - 1 : at - 1 + k1])
    b2 = tensor(*f2l[at - 1 : at - 1 + k2])
    target = tensor(*prefix, join(b1, b2), *suffix)
    np = sum(leaves(p) for p in prefix)
    nb1, nb2 = leaves(b1), leaves(b2)
    ns = sum(leaves(p) for p in suffix)
    map1 = tuple(range(1, np + nb1 + 1)) + tuple(
        range(np + nb1 + nb2 + 1, np + nb1 + nb2 + ns + 1)
    )
    map2 = tuple(range(1, np + 1)) + tuple(range(np + nb1 + 1, np + nb1 + nb2 + 1)) + tuple(
        range(np + nb1 + nb2 + 1, np + nb1 + nb2 + ns + 1)
    )
    block1 = ((1 << nb1) - 1) << np
    block2 = ((1 << nb2) - 1) << (np + nb1)
    return target, map1, map2, block1, block2


def pair_projections(
    target: WeilObject,
    at: int,
    t1_obj: WeilObject,
    t2_obj: WeilObject,
    k1: int = 1,
    k2: int = 1,
) -> tuple[Morphism, Morphism]:
    """The two context projections out of a pair_into target."""
    merged, map1, map2, _, _ = _pair_layout(t1_obj.cotree, t2_obj.cotree, at, k1, k2)
    if merged != target.cotree:
        raise TypeMismatch("projections requested for a mismatched pair target")
    inv1 = {tgt_gen: i + 1 for i, tgt_gen in enumerate(map1)}
    inv2 = {tgt_gen: i + 1 for i, tgt_gen in enumerate(map2)}
    return restriction(target, t1_obj, inv1), restriction(target, t2_obj, inv2)


def _remap(mask: int, gen_map: tuple[int, ...]) -> int:
    out = 0
    m = mask
    while m:
        bit = m & -m
        out |= 1 << (gen_map[bit.bit_length() - 1] - 1)
        m ^= bit
    return out


# ---------------------------------------------------------------------------
# the five generating maps

@lru_cache(maxsize=None)
def generators(rig: Rig = Rig.BOOL2) -> dict[str, Morphism]:
    """The generating maps: augmentation, unit, addition, vertical lift, flip."""
    w = algebra_of(W, rig)
    w2 = algebra_of(n_join(2), rig)
    ww = algebra_of(n_tensor(2), rig)
    return {
        "eps_W": eps(w),
        "eta_W": unit_map(w),
        "plus_W": make(w2, w, [{1: 1}, {1: 1}], check=True),
        "l_W": make(w, ww, [{0b11: 1}], check=True),
        "c_W": make(ww, ww, [{0b10: 1}, {0b01: 1}], check=True),
    }


def ghat(r: int, rig: Rig = Rig.NAT) -> Morphism:
    """The coefficient map W -> W with x -> r x, built by pairing and addition."""
    if r < 0:
        raise ValueError("ghat needs a natural number")
    gens = generators(rig)
    w = algebra_of(W, rig)
    if r == 0:
        return compose(gens["eta_W"], gens["eps_W"])
    out = identity(w)
    for _ in range(r - 1):
        out = compose(gens["plus_W"], pair(identity(w), out))
    return out


# ---------------------------------------------------------------------------
# Kleisli correspondence

@dataclass(frozen=True)
class KleisliMap:
    """Graph map G_A -> kappa(G_B): each source vertex gets a clique of
    independent sets of G_B (a sorted tuple of masks; empty tuple for zero)."""

    source: Graph
    target: Graph
    assignment: tuple[tuple[int, ...], ...]


def to_kleisli(f: Morphism) -> KleisliMap:
    """Forget coefficients: generator i goes to the clique of its term supports."""
    if f.rig is not Rig.BOOL2:
        for p in f.images:
            if any(c > 1 for _, c in p.terms):
                raise RigMismatch("to_kleisli needs {0,1} coefficients")
    assignment = tuple(
        tuple(sorted((mask for mask, _ in p.terms), key=mask_key)) for p in f.images
    )
    return KleisliMap(f.source.graph, f.target.graph, assignment)


def from_kleisli(m: KleisliMap, a: WeilObject, b: WeilObject) -> Morphism:
    """Rebuild the {0,1}-coefficient morphism from a graph map into kappa."""
    if a.graph != m.source or b.graph != m.target:
        raise TypeMismatch("kleisli map does not match the given objects")
    images = [{mask: 1 for mask in cl} for cl in m.assignment]
    return make(a, b, images, check=True)


def kleisli_identity(g: Graph) -> KleisliMap:
    return KleisliMap(g, g, tuple((1 << i,) for i in range(g.n)))


def kleisli_compose(m2: KleisliMap, m1: KleisliMap) -> KleisliMap:
    """Direct graph-level composite through kappa.

    A source vertex's clique is pushed forward one independent set at a
    time: each vertex inside a set picks one of its own assigned sets, and a
    choice survives when the picks are pairwise disjoint and their union is
    independent in the final graph.
    """
    if m1.target != m2.source:
        raise TypeMismatch("kleisli composition needs matching middle graph")
    tgt = m2.target
    out = []
    for cl in m1.assignment:
        result: set[int] = set()
        for u_mask in cl:
            partial = {0}
            m = u_mask
            while m:
                bit = m & -m
                choices = m2.assignment[bit.bit_length() - 1]
                nxt = set()
                for prev in partial:
                    for q in choices:
                        if prev & q:
                            continue
                        union = prev | q
                        if _mask_independent(tgt, union):
                            nxt.add(union)
                partial = nxt
                if not partial:
                    break
                m ^= bit
            result.update(mk for mk in partial if mk)
        out.append(tuple(sorted(result, key=mask_key)))
    return KleisliMap(m1.source, tgt, tuple(out))


def _mask_independent(g: Graph, mask: int) -> bool:
    adj = g.adjacency
    m = mask
    while m:
        bit = m & -m
        if adj[bit.bit_length() - 1] & mask:
            return False
        m ^= bit
    return True


# ---------------------------------------------------------------------------
# rig change

def lift_to_nat(f: Morphism) -> Morphism:
    """The NAT morphism with the same action on generators (fullness witness)."""
    src = algebra_of(f.source.cotree, Rig.NAT)
    tgt = algebra_of(f.target.cotree, Rig.NAT)
    images = [{mask: c for mask, c in p.terms} for p in f.images]
    return make(src, tgt, images, check=True)


def project_to_bool2(f: Morphism) -> Morphism:
    """Push a NAT morphism along the rig morphism to {0,1} coefficients."""
    src = algebra_of(f.source.cotree, Rig.BOOL2)
    tgt = algebra_of(f.target.cotree, Rig.BOOL2)
    images = [{mask: psi(c) for mask, c in p.terms} for p in f.images]
    return make(src, tgt, images, check=True)
