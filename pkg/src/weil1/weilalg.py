"""Presented algebras k[G] and the square-free nilpotent polynomial arithmetic.

Every object carries a cotree and its realised graph; the relations are
exactly ``x_u x_v = 0`` for edges (u, v) and ``x_v^2 = 0`` for every vertex.
Monomials are therefore identified with non-empty independent sets, stored
as bitmasks, and reduction is a single rule: a product dies when its factors
overlap or touch an edge.  Polynomials keep a normal form (no zero
coefficients, terms sorted by size then lexicographic members) so equality
is structural.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache

from . import rig as rig_mod
from .rig import Rig
from .cograph import Graph, mask_key, vertices_of
from .cotree import Cotree, realize, format_cotree
from .cotree import join as join_tree, tensor as tensor_tree


@dataclass(frozen=True)
class WeilObject:
    """An object of the category: a cotree together with its coefficient rig."""

    cotree: Cotree
    rig: Rig
    _hash: int = field(init=False, repr=False, compare=False, default=0)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.cotree, self.rig)))

    def __hash__(self) -> int:
        return self._hash

    @cached_property
    def graph(self) -> Graph:
        return realize(self.cotree)

    @property
    def n(self) -> int:
        return self.graph.n

    @cached_property
    def adjacency(self) -> tuple[int, ...]:
        return self.graph.adjacency

    def __repr__(self) -> str:
        return f"WeilObject({format_cotree(self.cotree)}, {self.rig})"


@lru_cache(maxsize=None)
def algebra_of(t: Cotree, rig: Rig = Rig.BOOL2) -> WeilObject:
    """The algebra presented by cotree ``t``: K is the rig itself, W is k[x]/x^2."""
    return WeilObject(t, rig)


def product(a: WeilObject, b: WeilObject) -> WeilObject:
    """a x b: join of cotrees; relations gain every cross product."""
    if a.rig is not b.rig:
        raise ValueError("product requires matching rigs")
    return algebra_of(join_tree(a.cotree, b.cotree), a.rig)


def coproduct(a: WeilObject, b: WeilObject) -> WeilObject:
    """a tensor b: disjoint union of cotrees; relations are just the union."""
    if a.rig is not b.rig:
        raise ValueError("coproduct requires matching rigs")
    return algebra_of(tensor_tree(a.cotree, b.cotree), a.rig)


def presentation(obj: WeilObject) -> str:
    """Textual presentation, e.g. ``k[x1,x2]/x1^2,x2^2,x1x2``."""
    n = obj.n
    if n == 0:
        return "k[]"
    gens = ",".join(f"x{i}" for i in range(1, n + 1))
    rels = [f"x{i}^2" for i in range(1, n + 1)]
    rels += [f"x{u}x{v}" for u, v in sorted(obj.graph.edges)]
    return f"k[{gens}]/" + ",".join(rels)


# ---------------------------------------------------------------------------
# monomials

def mono_mul(u: int, v: int, obj: WeilObject) -> int:
    """Product of two monomial masks in ``obj``; 0 when a square or relation hits."""
    if u & v:
        return 0
    adj = obj.adjacency
    m = u
    while m:
        b = m & -m
        if adj[b.bit_length() - 1] & v:
            return 0
        m ^= b
    return u | v


def _mono_valid(mask: int, obj: WeilObject) -> bool:
    if mask == 0 or mask > obj.graph.full_mask:
        return False
    adj = obj.adjacency
    m = mask
    while m:
        b = m & -m
        if adj[b.bit_length() - 1] & mask:
            return False
        m ^= b
    return True


# ---------------------------------------------------------------------------
# polynomials

@dataclass(frozen=True)
class Polynomial:
    """Normal-form rig combination of square-free monomials plus a constant."""

    ambient: WeilObject
    constant: int
    terms: tuple[tuple[int, int], ...]  # ((mask, coeff), ...) sorted by mask_key
    _hash: int = field(init=False, repr=False, compare=False, default=0)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.ambient, self.constant, self.terms)))

    def __hash__(self) -> int:
        return self._hash

    def is_zero(self) -> bool:
        return self.constant == 0 and not self.terms

    def as_dict(self) -> dict[int, int]:
        return dict(self.terms)

    def __repr__(self) -> str:
        return f"Polynomial({format_poly(self)})"


_MASK_KEYS: dict[int, tuple] = {}


def _mask_key_cached(mask: int):
    k = _MASK_KEYS.get(mask)
    if k is None:
        k = _MASK_KEYS[mask] = mask_key(mask)
    return k


def poly(ambient: WeilObject, terms=(), constant: int = 0) -> Polynomial:
    """Build a polynomial in normal form from a mask->coeff mapping."""
    rig_mod.check_coeff(constant, ambient.rig)
    items = terms.items() if isinstance(terms, dict) else terms
    merged: dict[int, int] = {}
    for mask, coeff in items:
        rig_mod.check_coeff(coeff, ambient.rig)
        if coeff == 0:
            continue
        if not _mono_valid(mask, ambient):
            raise ValueError(f"monomial {vertices_of(mask)} is not independent in ambient")
        merged[mask] = rig_mod.add(merged.get(mask, 0), coeff, ambient.rig)
    ordered = tuple(sorted(merged.items(), key=lambda mc: _mask_key_cached(mc[0])))
    return Polynomial(ambient, constant, ordered)


def poly_trusted(ambient: WeilObject, term_dict: dict[int, int]) -> Polynomial:
    """Normal-form constructor for internally produced term dicts: the masks
    are already reduced and the coefficients already lie in the rig."""
    ordered = tuple(sorted(term_dict.items(), key=lambda mc: _mask_key_cached(mc[0])))
    return Polynomial(ambient, 0, ordered)


def zero_poly(ambient: WeilObject) -> Polynomial:
    return poly(ambient)


def gen_poly(ambient: WeilObject, i: int) -> Polynomial:
    """The generator x_i as a polynomial."""
    if not 1 <= i <= ambient.n:
        raise ValueError(f"generator index {i} out of range 1..{ambient.n}")
    return poly(ambient, [(1 << (i - 1), 1)])


def poly_add(p: Polynomial, q: Polynomial) -> Polynomial:
    if p.ambient != q.ambient:
        raise ValueError("polynomial addition needs a common ambient")
    rig = p.ambient.rig
    out = dict(p.terms)
    for mask, c in q.terms:
        prev = out.get(mask)
        out[mask] = c if prev is None else rig_mod.add(prev, c, rig)
    return poly(p.ambient, out, rig_mod.add(p.constant, q.constant, rig))


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    if p.ambient != q.ambient:
        raise ValueError("polynomial multiplication needs a common ambient")
    amb = p.ambient
    rig = amb.rig
    out: dict[int, int] = {}
    if p.constant and q.constant:
        const = rig_mod.mul(p.constant, q.constant, rig)
    else:
        const = 0
    if p.constant:
        for mask, c in q.terms:
            _accumulate(out, mask, rig_mod.mul(p.constant, c, rig), rig)
    if q.constant:
        for mask, c in p.terms:
            _accumulate(out, mask, rig_mod.mul(q.constant, c, rig), rig)
    for mu, cu in p.terms:
        for mv, cv in q.terms:
            prod = mono_mul(mu, mv, amb)
            if prod:
                _accumulate(out, prod, rig_mod.mul(cu, cv, rig), rig)
    return poly(amb, out, const)


def _accumulate(dest: dict[int, int], mask: int, coeff: int, rig: Rig) -> None:
    if coeff == 0:
        return
    prev = dest.get(mask)
    dest[mask] = coeff if prev is None else rig_mod.add(prev, coeff, rig)


def format_poly(p: Polynomial, letter: str = "y") -> str:
    """Render in the DSL term syntax, e.g. ``y1 y2 + y2 y3``; zero prints ``0``."""
    parts = []
    if p.constant:
        parts.append(str(p.constant))
    for mask, coeff in p.terms:
        body = " ".join(f"{letter}{v}" for v in vertices_of(mask))
        parts.append(body if coeff == 1 else f"{coeff} {body}")
    return " + ".join(parts) if parts else "0"


# fast paths used by morphism composition: raw dict arithmetic, no wrappers

def dict_mul(a: dict[int, int], b: dict[int, int], obj: WeilObject) -> dict[int, int]:
    """Product of constant-free term dicts in ``obj``."""
    rig = obj.rig
    adj = obj.adjacency
    out: dict[int, int] = {}
    if rig is Rig.BOOL2:
        for mu in a:
            for mv in b:
                if mu & mv:
                    continue
                m = mu
                dead = False
                while m:
                    bit = m & -m
                    if adj[bit.bit_length() - 1] & mv:
                        dead = True
                        break
                    m ^= bit
                if not dead:
                    out[mu | mv] = 1
    else:
        for mu, cu in a.items():
            for mv, cv in b.items():
                if mu & mv:
                    continue
                m = mu
                dead = False
                while m:
                    bit = m & -m
                    if adj[bit.bit_length() - 1] & mv:
                        dead = True
                        break
                    m ^= bit
                if not dead:
                    key = mu | mv
                    out[key] = out.get(key, 0) + cu * cv
    return out


def dict_add_into(dest: dict[int, int], src: dict[int, int], rig: Rig) -> None:
    if rig is Rig.BOOL2:
        for mask in src:
            dest[mask] = 1
    else:
        for mask, c in src.items():
            dest[mask] = dest.get(mask, 0) + c
