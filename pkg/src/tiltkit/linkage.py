"""Blocks of ``X∨`` under the dot action and the matching fixed-point components.

A block is a ``W_aff``-orbit for ``•_ℓ``, keyed by its representative in
``C̄_ℓ``.  Components of the ``μ_ℓ``-fixed points are keyed by
``(-ā_ℓ) ∩ X∨``; for adjoint data the two index sets differ by ``ρ∨``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from tiltkit import alcove
from tiltkit.affine_weyl import (AffineWeylElt, _group, act, enumerate_fW,
                                 is_max_in_coset, is_min_in_Wf, parabolic_elements)
from tiltkit.rootdata import RootDatum


@dataclass(frozen=True)
class LinkageContext:
    datum: RootDatum
    ell: int

    def __post_init__(self):
        if int(self.ell) != self.ell or self.ell < 2:
            raise ValueError("ℓ must be an integer >= 2")


@dataclass(frozen=True)
class Block:
    rep: tuple[int, ...]
    I: tuple[int, ...]
    stabilizer_order: int
    # (reduced word of w, w •_ℓ rep) for w in W_aff^(rep), when enumerated
    dominant: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...] = field(
        default=(), compare=False)

    @property
    def is_regular(self) -> bool:
        return not self.I

    def to_dict(self) -> dict:
        out = {"rep": list(self.rep), "I": list(self.I),
               "stabilizer_order": self.stabilizer_order}
        if self.dominant:
            out["dominant"] = [{"w": list(w), "weight": list(wt)}
                               for w, wt in self.dominant]
        return out

    @classmethod
    def from_dict(cls, data: dict) -> Block:
        dom = tuple((tuple(e["w"]), tuple(e["weight"]))
                    for e in data.get("dominant", ()))
        return cls(tuple(data["rep"]), tuple(data["I"]),
                   int(data["stabilizer_order"]), dom)


@dataclass(frozen=True)
class ComponentDescriptor:
    index: tuple[int, ...]
    stabilizer_order: int
    kind: str
    stabilizer: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {"index": list(self.index), "stabilizer_order": self.stabilizer_order,
                "kind": self.kind, "stabilizer": list(self.stabilizer)}

    @classmethod
    def from_dict(cls, data: dict) -> ComponentDescriptor:
        return cls(tuple(data["index"]), int(data["stabilizer_order"]),
                   data["kind"], tuple(data.get("stabilizer", ())))


def dot_stabilizer_generators(ctx: LinkageContext, lam: Sequence[int]) -> tuple[int, ...]:
    """``I_λ = {s ∈ S_aff : s •_ℓ λ = λ}``."""
    lam = tuple(lam)
    g = _group(ctx.datum)
    return tuple(i for i, s in enumerate(g.generators)
                 if act(s, lam, ctx.ell, "dot") == lam)


def make_block(ctx: LinkageContext, rep: Sequence[int]) -> Block:
    rep = tuple(rep)
    I = dot_stabilizer_generators(ctx, rep)
    return Block(rep, I, len(parabolic_elements(ctx.datum, I)))


def block_of(ctx: LinkageContext, mu: Sequence[int]) -> Block:
    rep, _ = alcove.project_to_fundamental(ctx.datum, tuple(mu), ctx.ell, "dot")
    return make_block(ctx, rep)


def blocks(ctx: LinkageContext) -> list[Block]:
    return [make_block(ctx, lam)
            for lam in alcove.dot_fundamental_reps(ctx.datum, ctx.ell)]


def block_dominant_weights(ctx: LinkageContext, block: Block,
                           max_length: int) -> list[tuple[AffineWeylElt, tuple]]:
    """Pairs ``(w, w •_ℓ λ)`` for ``w ∈ W_aff^(λ)`` with ``ℓ(w) <= max_length``.

    ``W_aff^(λ)`` is the set of elements minimal in ``W_f w`` and maximal in
    ``w W_λ``; its image is exactly the dominant part of the block.
    """
    out = []
    for w in enumerate_fW(ctx.datum, max_length):
        if is_max_in_coset(w, block.I):
            out.append((w, act(w, block.rep, ctx.ell, "dot")))
    return out


def with_dominant(ctx: LinkageContext, block: Block, max_length: int) -> Block:
    dom = tuple((w.reduced_word(), wt)
                for w, wt in block_dominant_weights(ctx, block, max_length))
    return Block(block.rep, block.I, block.stabilizer_order, dom)


def in_W_aff_lambda(w: AffineWeylElt, block: Block) -> bool:
    return is_min_in_Wf(w) and is_max_in_coset(w, block.I)


def fixed_point_components(ctx: LinkageContext) -> list[ComponentDescriptor]:
    out = []
    for lam in alcove.box_fundamental_reps(ctx.datum, ctx.ell):
        f = alcove.facet_stabilizer(ctx.datum, lam, ctx.ell)
        out.append(ComponentDescriptor(lam, f.order, f.kind, f.stabilizer))
    return out


def component_of_weight(ctx: LinkageContext, mu: Sequence[int]) -> tuple[tuple, AffineWeylElt]:
    """``(λ, w)`` with ``λ ∈ (-ā_ℓ) ∩ X∨`` and ``w □_ℓ λ = μ``."""
    return alcove.project_to_fundamental(ctx.datum, tuple(mu), ctx.ell, "box")


def blocks_vs_components_dictionary(ctx: LinkageContext) -> list[dict]:
    """Match each block representative ``λ`` with the component ``λ + ρ∨``."""
    d = ctx.datum
    rho = d.rho_vee_int()
    comps = {c.index: c for c in fixed_point_components(ctx)}
    table = []
    for b in blocks(ctx):
        key = tuple(a + r for a, r in zip(b.rep, rho))
        c = comps.pop(key, None)
        if c is None:
            raise AssertionError(f"no component matches block {b.rep}")
        table.append({"block": list(b.rep), "component": list(key),
                      "I": list(b.I), "block_stabilizer_order": b.stabilizer_order,
                      "component_stabilizer_order": c.stabilizer_order,
                      "kind": c.kind})
    if comps:
        raise AssertionError(f"unmatched components {sorted(comps)}")
    return table

