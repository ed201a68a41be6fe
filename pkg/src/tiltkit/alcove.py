"""Affine roots, the fundamental alcove and fundamental domains.

Points of ``V = X∨ ⊗ Q`` are tuples of ints and ``Fraction``s; nothing here
uses floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from tiltkit.affine_weyl import (AffineWeylElt, _group, act, identity,
                                 parabolic_elements)
from tiltkit.rootdata import (DatumError, FiniteWeylElt, RootDatum, _normalize,
                              _solve, pair)


@dataclass(frozen=True)
class AffineRoot:
    """The affine root ``α + mħ``."""

    root: tuple[int, ...]
    m: int

    def reflection(self, d: RootDatum) -> AffineWeylElt:
        """``s_{α+mħ} = t_{mα∨} s_α``, returned in normal form ``s_α t_{-mα∨}``."""
        coroot = d.coroot_of(self.root)
        s = FiniteWeylElt.reflection(self.root, coroot)
        return AffineWeylElt(d, s, tuple(-self.m * c for c in coroot))


def eval_affine_root(a: AffineRoot, v: Sequence, n: int):
    """``f^n_{α+mħ}(v) = <α, v> + nm``."""
    return pair(a.root, v) + n * a.m


def reflect(d: RootDatum, a: AffineRoot, v: Sequence, n: int) -> tuple:
    """``s_{α+mħ} ·_n v = v - f^n_{α+mħ}(v) α∨``."""
    f = eval_affine_root(a, v, n)
    coroot = d.coroot_of(a.root)
    return _normalize(x - f * c for x, c in zip(v, coroot))


def in_closed_fundamental_alcove(d: RootDatum, v: Sequence, n: int) -> bool:
    """Membership in the closure of ``a_n = {-n < <v,α> < 0 for α > 0}``."""
    return all(-n <= pair(v, a) <= 0 for a in d.positive_roots)


def _require_semisimple(d: RootDatum):
    if not d.is_semisimple:
        raise DatumError("fundamental domains need a semisimple datum")


def _bounded_pairings(d: RootDatum, bound: int):
    """Nonnegative integer vectors p on the simple roots with
    ``Σ_i c_i p_i <= bound`` on every component (``θ = Σ c_i α_i``)."""
    n = d.n_simple
    coeffs = [d.positive_root_coeffs[k] for k in d.highest_root_indices]
    comp_of = {}
    for c, comp in enumerate(d.components):
        for i in comp:
            comp_of[i] = c
    out = []
    budget = [bound] * len(coeffs)

    def rec(i, cur):
        if i == n:
            out.append(tuple(cur))
            return
        c = comp_of[i]
        w = coeffs[c][i]
        for p in range(budget[c] // w + 1):
            budget[c] -= w * p
            cur.append(p)
            rec(i + 1, cur)
            cur.pop()
            budget[c] += w * p

    rec(0, [])
    return out


def _point_from_pairings(d: RootDatum, p: Sequence) -> tuple | None:
    """The integral coweight with ``<λ, α_i> = p_i``, or None."""
    P = [list(a) for a in d.simple_roots]
    x = _solve(P, p)
    if any(a.denominator != 1 for a in x):
        return None
    return tuple(int(a) for a in x)


def box_fundamental_reps(d: RootDatum, ell: int) -> list[tuple[int, ...]]:
    """``(-ā_ℓ) ∩ X∨ = {μ : 0 <= <μ,α> <= ℓ for α > 0}``, sorted."""
    _require_semisimple(d)
    out = []
    for p in _bounded_pairings(d, ell):
        mu = _point_from_pairings(d, p)
        if mu is not None:
            out.append(mu)
    return sorted(out)


def dot_fundamental_reps(d: RootDatum, ell: int) -> list[tuple[int, ...]]:
    """``C̄_ℓ ∩ X∨ = {λ : 0 <= <λ+ρ∨,α> <= ℓ for α > 0}``, sorted."""
    _require_semisimple(d)
    rho = d.rho_vee_int()
    out = []
    for p in _bounded_pairings(d, ell):
        x = _point_from_pairings(d, p)
        if x is not None:
            out.append(tuple(a - r for a, r in zip(x, rho)))
    return sorted(out)


def project_to_fundamental(d: RootDatum, mu: Sequence[int], ell: int,
                           mode: str = "box") -> tuple[tuple, AffineWeylElt]:
    """Return ``(rep, w)`` with ``rep`` fundamental and ``act(w, rep) == mu``.

    Greedy wall crossing: repeatedly apply the lowest-index generator whose
    wall separates the point from the fundamental domain.  Each step strictly
    reduces the distance to an interior point, so the loop terminates.
    """
    _require_semisimple(d)
    if mode not in ("box", "dot"):
        raise ValueError(f"unsupported mode {mode!r}")
    g = _group(d)
    rho = d.rho_vee_int() if mode == "dot" else (0,) * d.rank
    x = tuple(m + r for m, r in zip(mu, rho))
    thetas = d.highest_roots
    witness = identity(d)
    while True:
        for i, a in enumerate(d.simple_roots):
            if pair(x, a) < 0:
                gen = i
                break
        else:
            for c, th in enumerate(thetas):
                if pair(x, th) > ell:
                    gen = g.n_finite + c
                    break
            else:
                break
        s = g.generators[gen]
        x = act(s, x, ell, "box")
        witness = witness * s
    rep = tuple(a - r for a, r in zip(x, rho))
    return rep, witness


@dataclass(frozen=True)
class FacetDescriptor:
    """The facet of ``ā_n`` containing ``-λ`` and its pointwise stabilizer."""

    index: tuple[int, ...]
    base_point: tuple
    level: int
    vanishing: tuple[tuple[int, int], ...]
    stabilizer: tuple[int, ...]
    order: int
    kind: str

    def to_dict(self) -> dict:
        return {"index": list(self.index),
                "base_point": [str(a) for a in self.base_point],
                "level": self.level,
                "vanishing": [list(p) for p in self.vanishing],
                "stabilizer": list(self.stabilizer),
                "order": self.order,
                "kind": self.kind}

    @classmethod
    def from_dict(cls, data: dict) -> FacetDescriptor:
        return cls(index=tuple(data["index"]),
                   base_point=_normalize(Fraction(a) for a in data["base_point"]),
                   level=int(data["level"]),
                   vanishing=tuple(tuple(p) for p in data["vanishing"]),
                   stabilizer=tuple(data["stabilizer"]),
                   order=int(data["order"]),
                   kind=data["kind"])


def stabilizer_kind(d: RootDatum, gens: Sequence[int]) -> str:
    """``thin`` for exactly ``W_f``, ``full`` for trivial, else ``partial``."""
    gens = set(gens)
    if not gens:
        return "full"
    if gens == set(range(d.n_simple)):
        return "thin"
    return "partial"


def facet_stabilizer(d: RootDatum, lam: Sequence[int], ell: int) -> FacetDescriptor:
    lam = tuple(lam)
    _require_semisimple(d)
    if not all(0 <= pair(lam, a) <= ell for a in d.positive_roots):
        raise ValueError(f"{lam} is not in the closed box-fundamental domain")
    g = _group(d)
    v = tuple(-a for a in lam)
    walls = []
    gens = []
    for i, a in enumerate(d.simple_roots):
        if eval_affine_root(AffineRoot(a, 0), v, ell) == 0:
            walls.append((d.root_index[a][0], 0))
            gens.append(i)
    for c, k in enumerate(d.highest_root_indices):
        if eval_affine_root(AffineRoot(d.positive_roots[k], 1), v, ell) == 0:
            walls.append((k, 1))
            gens.append(g.n_finite + c)
    order = len(parabolic_elements(d, gens))
    return FacetDescriptor(index=lam, base_point=v, level=ell,
                           vanishing=tuple(walls), stabilizer=tuple(gens),
                           order=order, kind=stabilizer_kind(d, gens))
