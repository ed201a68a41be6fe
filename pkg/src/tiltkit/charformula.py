"""Tilting characters, the simple/costandard reciprocity on ``Y``, and weight expansion.

All characters are finite integer combinations of classes indexed by dominant
coweights.  ``nabla`` classes expand through the Weyl character formula.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from tiltkit.affine_weyl import AffineWeylElt, _group, act, bruhat_leq, enumerate_fW, is_min_in_Wf
from tiltkit.hecke import PCanTable, pcan_polynomial, reg_kl_polynomial
from tiltkit.linkage import Block, LinkageContext, in_W_aff_lambda, make_block
from tiltkit.rootdata import Character, RootDatum, pair, weyl_character, weyl_dim

BASES = ("nabla", "simple", "tilting")
_SHORT = {"nabla": "N", "simple": "L", "tilting": "T"}


@dataclass(frozen=True)
class CharacterExpr:
    """``Σ c_μ [B(μ)]`` for a basis tag ``B``; terms sorted by weight."""

    basis: str
    terms: tuple[tuple[tuple[int, ...], int], ...]

    def __post_init__(self):
        if self.basis not in BASES:
            raise ValueError(f"unknown basis {self.basis!r}")
        merged: dict[tuple, int] = {}
        for mu, c in self.terms:
            mu = tuple(mu)
            merged[mu] = merged.get(mu, 0) + int(c)
        object.__setattr__(self, "terms",
                           tuple(sorted((mu, c) for mu, c in merged.items() if c)))

    @classmethod
    def from_mapping(cls, basis: str, coeffs: Mapping) -> CharacterExpr:
        return cls(basis, tuple(coeffs.items()))

    def coefficient(self, mu: Sequence[int]) -> int:
        return dict(self.terms).get(tuple(mu), 0)

    def as_dict(self) -> dict[tuple[int, ...], int]:
        return dict(self.terms)

    def to_dict(self) -> list[dict]:
        """Records ``{"basis": "N", "weight": [...], "coeff": n}``, highest weight first."""
        tag = _SHORT[self.basis]
        return [{"basis": tag, "weight": list(mu), "coeff": c}
                for mu, c in sorted(self.terms, reverse=True)]

    @classmethod
    def from_dict(cls, records: list[dict]) -> CharacterExpr:
        long = {v: k for k, v in _SHORT.items()}
        tags = {r["basis"] for r in records}
        if len(tags) > 1:
            raise ValueError(f"mixed bases {sorted(tags)}")
        basis = long[tags.pop()] if tags else "nabla"
        return cls(basis, tuple((tuple(r["weight"]), int(r["coeff"])) for r in records))


def _require_dominant(d: RootDatum, mu):
    if not d.is_dominant(mu):
        raise AssertionError(f"{mu} is not dominant")


def tilting_character(ctx: LinkageContext, block: Block, w: AffineWeylElt,
                      table: PCanTable) -> CharacterExpr:
    """``[T(w •_ℓ λ)] = Σ_y ℓn_{y,w}(1) [N(y •_ℓ λ)]`` over ``y ∈ W_aff^(λ)``."""
    if not in_W_aff_lambda(w, block):
        raise ValueError(f"{w} must be minimal in W_f w and maximal in w W_λ")
    d = ctx.datum
    coeffs: dict[tuple, int] = {}
    for y, poly in table.column(w).items():
        if not in_W_aff_lambda(y, block):
            continue
        if not bruhat_leq(y, w):
            raise AssertionError(f"{y} is not below {w}")
        mu = act(y, block.rep, ctx.ell, "dot")
        _require_dominant(d, mu)
        coeffs[mu] = coeffs.get(mu, 0) + poly.at_one()
    top = act(w, block.rep, ctx.ell, "dot")
    if coeffs.get(top) != 1:
        raise AssertionError(f"coefficient of N({top}) is {coeffs.get(top)}")
    return CharacterExpr.from_mapping("nabla", coeffs)


def expand_to_weights(d: RootDatum, expr: CharacterExpr) -> Character:
    """Weight multiplicities of a combination of ``[N(μ)]``."""
    if expr.basis != "nabla":
        raise ValueError("only nabla-basis expressions have a Weyl expansion")
    out = Character({})
    for mu, c in expr.terms:
        out = out + weyl_character(d, mu).scale(c)
    return out


def expr_dim(d: RootDatum, expr: CharacterExpr) -> int:
    """``Σ c_μ dim N(μ)`` by the Weyl dimension formula."""
    if expr.basis != "nabla":
        raise ValueError("only nabla-basis expressions have a dimension")
    return sum(c * weyl_dim(d, mu) for mu, c in expr.terms)


# -- the region Y ---------------------------------------------------------------


@dataclass(frozen=True)
class YRegion:
    ell: int
    coxeter_number: int
    # (w, <w □_ℓ ρ∨, θ>) sorted by (length, reduced word)
    members: tuple[tuple[AffineWeylElt, Fraction | int], ...]

    @property
    def elements(self) -> list[AffineWeylElt]:
        return [w for w, _ in self.members]

    def __contains__(self, w) -> bool:
        return any(w == x for x, _ in self.members)

    def to_dict(self) -> dict:
        return {"ell": self.ell, "h": self.coxeter_number,
                "members": [{"w": list(w.reduced_word()), "witness": str(v)}
                            for w, v in self.members]}


def y_witness(ctx: LinkageContext, w: AffineWeylElt):
    d = ctx.datum
    theta = d.highest_roots[0]
    return pair(act(w, d.rho_vee, ctx.ell, "box"), theta)


def y_region(ctx: LinkageContext) -> YRegion:
    """``Y = {w ∈ ᶠW : <w □_ℓ ρ∨, θ> < ℓ(h-1)}`` with ``θ`` the highest root."""
    d = ctx.datum
    if len(d.components) != 1 or not d.is_semisimple:
        raise ValueError("Y is defined for quasi-simple data only")
    h = d.coxeter_number
    if ctx.ell < 2 * h - 2:
        warnings.warn(f"ℓ={ctx.ell} is below 2h-2={2 * h - 2}", stacklevel=2)
    bound = ctx.ell * (h - 1)
    g = _group(d)
    members = []
    layer = [g.identity] if y_witness(ctx, g.identity) < bound else []
    seen = set(layer)
    while layer:
        members.extend(layer)
        nxt = []
        for x in layer:
            for s in g.generators:
                y = x * s
                if (y not in seen and g.length(y) == g.length(x) + 1
                        and is_min_in_Wf(y) and y_witness(ctx, y) < bound):
                    seen.add(y)
                    nxt.append(y)
        layer = sorted(nxt, key=g.reduced_word)
    members.sort(key=lambda w: (g.length(w), g.reduced_word(w)))
    top = max((g.length(w) for w in members), default=-1)
    below = [y for y in enumerate_fW(d, top) if y not in seen]
    for w in members:
        for y in below:
            if bruhat_leq(y, w):
                raise AssertionError(f"Y is not an ideal: {y} <= {w}")
    return YRegion(ctx.ell, h, tuple((w, y_witness(ctx, w)) for w in members))


# -- reciprocity on Y -----------------------------------------------------------


def _weight0(ctx: LinkageContext, w: AffineWeylElt) -> tuple:
    return act(w, (0,) * ctx.datum.rank, ctx.ell, "dot")


def _members(ctx, members):
    return list(members) if members is not None else y_region(ctx).elements


def nabla_in_simples(ctx: LinkageContext, w: AffineWeylElt, table: PCanTable,
                     hat: Mapping[AffineWeylElt, AffineWeylElt],
                     members: Sequence[AffineWeylElt] | None = None) -> CharacterExpr:
    """``[∇(w •_ℓ 0)] = Σ_{y∈Y} ℓn_{w,ŷ}(1) [L(y •_ℓ 0)]``."""
    ys = _members(ctx, members)
    if w not in ys:
        raise ValueError(f"{w} is not in Y")
    _check_hat(hat, ys)
    coeffs = {}
    for y in ys:
        c = pcan_polynomial(table, w, hat[y]).at_one()
        if c:
            coeffs[_weight0(ctx, y)] = c
    return CharacterExpr.from_mapping("simple", coeffs)


def simples_in_nablas_kl(ctx: LinkageContext, w: AffineWeylElt,
                         members: Sequence[AffineWeylElt] | None = None) -> CharacterExpr:
    """``[L(w •_ℓ 0)] = Σ_{y∈Y} (-1)^{ℓ(w)+ℓ(y)} h_{y,w}(1) [∇(y •_ℓ 0)]``."""
    ys = _members(ctx, members)
    if w not in ys:
        raise ValueError(f"{w} is not in Y")
    coeffs = {}
    for y in ys:
        c = reg_kl_polynomial(y, w).at_one()
        if c:
            coeffs[_weight0(ctx, y)] = (-1) ** (w.length() + y.length()) * c
    return CharacterExpr.from_mapping("nabla", coeffs)


def _check_hat(hat, ys):
    missing = [y for y in ys if y not in hat]
    if missing:
        raise ValueError(f"hat map undefined on {missing[0]}")
    images = [hat[y] for y in ys]
    if len(set(images)) != len(images):
        raise ValueError("hat map is not injective on Y")
    for y in images:
        if not is_min_in_Wf(y):
            raise ValueError(f"hat image {y} is not minimal in its W_f-coset")


def nabla_in_simples_matrix(ctx, members, table, hat) -> list[list[int]]:
    """``M[i][j] = ℓn_{w_i, ŵ_j}(1)`` over the ordered ``members``."""
    ys = list(members)
    _check_hat(hat, ys)
    return [[pcan_polynomial(table, w, hat[y]).at_one() for y in ys] for w in ys]


def simples_in_nablas_matrix(ctx, members) -> list[list[int]]:
    """``K[i][j] = (-1)^{ℓ(w_i)+ℓ(w_j)} h_{w_j, w_i}(1)`` over ``members``."""
    ys = list(members)
    return [[(-1) ** (w.length() + y.length()) * reg_kl_polynomial(y, w).at_one()
             for y in ys] for w in ys]


def regular_block(ctx: LinkageContext) -> Block:
    return make_block(ctx, (0,) * ctx.datum.rank)


# -- exact linear algebra -------------------------------------------------------


def matmul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))]
            for i in range(len(A))]


def invert_unitriangular(M: Sequence[Sequence[int]],
                         order: Sequence[int] | None = None) -> list[list[int]]:
    """Exact inverse of a matrix that is unitriangular after reordering.

    ``order`` lists row/column indices; the permuted matrix must be lower or
    upper unitriangular.
    """
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("matrix must be square")
    order = list(range(n)) if order is None else list(order)
    if sorted(order) != list(range(n)):
        raise ValueError("order must be a permutation of the indices")
    P = [[int(M[order[i]][order[j]]) for j in range(n)] for i in range(n)]
    if any(P[i][i] != 1 for i in range(n)):
        raise ValueError("diagonal must be all ones")
    lower = all(P[i][j] == 0 for i in range(n) for j in range(i + 1, n))
    upper = all(P[i][j] == 0 for i in range(n) for j in range(i))
    if not (lower or upper):
        raise ValueError("matrix is not unitriangular in the given order")
    T = P if lower else [list(r) for r in zip(*P)]
    inv = [[0] * n for _ in range(n)]
    for j in range(n):
        inv[j][j] = 1
        for i in range(j + 1, n):
            inv[i][j] = -sum(T[i][k] * inv[k][j] for k in range(j, i))
    if not lower:
        inv = [list(r) for r in zip(*inv)]
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            out[order[i]][order[j]] = inv[i][j]
    return out
