"""The affine Weyl group ``W_f ⋉ ZR∨`` as a Coxeter group.

Elements are kept in the normal form ``w·t_λ`` (finite part on the left).
Generators are numbered ``0..r-1`` for the finite simple reflections (simple
root order) followed by one affine reflection ``t_{β∨} s_β`` per irreducible
component.  Words are read left to right as products: ``[1, 0]`` is
``s_1 s_0``, which acts on a weight by ``s_0`` first.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from tiltkit.rootdata import FiniteWeylElt, RootDatum, _normalize, pair

MODES = ("dot", "box", "cdot")


@dataclass(frozen=True)
class AffineWeylElt:
    datum: RootDatum = field(compare=False, repr=False)
    finite: FiniteWeylElt
    translation: tuple[int, ...]

    # -- group law -----------------------------------------------------------

    def __mul__(self, other: AffineWeylElt) -> AffineWeylElt:
        return multiply(self, other)

    def inverse(self) -> AffineWeylElt:
        # (w t_λ)^{-1} = t_{-λ} w^{-1} = w^{-1} t_{-w(λ)}
        w = self.finite
        lam = w.act(self.translation)
        return AffineWeylElt(self.datum, w.inverse(), tuple(-a for a in lam))

    def star(self) -> AffineWeylElt:
        """``(t_λ v)* = t_{-λ} v``; in normal form ``(w t_λ)* = w t_{-λ}``."""
        return AffineWeylElt(self.datum, self.finite,
                             tuple(-a for a in self.translation))

    def is_identity(self) -> bool:
        return self.finite.is_identity() and not any(self.translation)

    # -- Coxeter structure ---------------------------------------------------

    def length(self) -> int:
        return _group(self.datum).length(self)

    def reduced_word(self) -> tuple[int, ...]:
        return _group(self.datum).reduced_word(self)

    def times_generator(self, i: int) -> AffineWeylElt:
        return self * _group(self.datum).generators[i]

    def generator_times(self, i: int) -> AffineWeylElt:
        return _group(self.datum).generators[i] * self

    def right_descents(self) -> list[int]:
        L = self.length()
        return [i for i in range(n_generators(self.datum))
                if self.times_generator(i).length() < L]

    def act(self, mu: Sequence, n: int = 1, mode: str = "cdot") -> tuple:
        return act(self, mu, n, mode)

    def __repr__(self) -> str:
        word = " ".join(map(str, self.reduced_word()))
        return f"AffineWeylElt[{word or 'e'}]"


# --------------------------------------------------------------------------
# Per-datum cached machinery

class _Group:
    """Generators, lengths and Bruhat memo for one root datum."""

    def __init__(self, d: RootDatum):
        self.datum = d
        r = d.rank
        zero = (0,) * r
        e = FiniteWeylElt.identity(r)
        self.identity = AffineWeylElt(d, e, zero)
        gens = [AffineWeylElt(d, s, zero) for s in d.simple_reflections]
        for k in d.highest_root_indices:
            beta, beta_v = d.positive_roots[k], d.positive_coroots[k]
            s_beta = FiniteWeylElt.reflection(beta, beta_v)
            # t_{β∨} s_β = s_β t_{-β∨}
            gens.append(AffineWeylElt(d, s_beta, tuple(-a for a in beta_v)))
        self.generators = tuple(gens)
        self.n_finite = d.n_simple
        # generator ids of each component: finite simples, then its affine node
        self.component_nodes = tuple(
            frozenset(comp) | {self.n_finite + c}
            for c, comp in enumerate(d.components))
        self._length: dict[AffineWeylElt, int] = {}
        self._word: dict[AffineWeylElt, tuple[int, ...]] = {}
        self._bruhat: dict[tuple[AffineWeylElt, AffineWeylElt], bool] = {}
        self._inv: dict[FiniteWeylElt, tuple[tuple[int, bool], ...]] = {}

    def _finite_signs(self, w: FiniteWeylElt):
        """Pairs (w⁻¹α, w⁻¹α > 0) for every positive root α."""
        got = self._inv.get(w)
        if got is None:
            d = self.datum
            winv = w.inverse()
            got = []
            for a in d.positive_roots:
                beta = winv.act_dual(a)
                got.append((beta, d.root_index[beta][1] > 0))
            got = tuple(got)
            self._inv[w] = got
        return got

    def length(self, x: AffineWeylElt) -> int:
        got = self._length.get(x)
        if got is not None:
            return got
        # number of hyperplanes <v,α> = k separating the base alcove from its
        # image: for α > 0 and β = w⁻¹α the alcove x(A) sits at floor <λ,β>
        # (β > 0) or <λ,β> - 1 (β < 0)
        lam = x.translation
        total = 0
        for beta, positive in self._finite_signs(x.finite):
            p = pair(lam, beta)
            total += abs(p) if positive else abs(p - 1)
        self._length[x] = total
        return total

    def reduced_word(self, x: AffineWeylElt) -> tuple[int, ...]:
        got = self._word.get(x)
        if got is not None:
            return got
        word = []
        y = x
        L = self.length(y)
        while L:
            for i, s in enumerate(self.generators):
                ys = y * s
                if self.length(ys) < L:
                    word.append(i)
                    y, L = ys, L - 1
                    break
            else:  # pragma: no cover - length formula guarantees a descent
                raise AssertionError("no descent found")
        word = tuple(reversed(word))
        self._word[x] = word
        return word

    def bruhat_leq(self, x: AffineWeylElt, y: AffineWeylElt) -> bool:
        key = (x, y)
        got = self._bruhat.get(key)
        if got is not None:
            return got
        lx, ly = self.length(x), self.length(y)
        if lx > ly:
            res = False
        elif lx == ly:
            res = x == y
        elif lx == 0:
            res = True
        else:
            # lifting property with the lowest-index right descent of y
            for s in self.generators:
                ys = y * s
                if self.length(ys) < ly:
                    break
            xs = x * s
            if self.length(xs) < lx:
                res = self.bruhat_leq(xs, ys)
            else:
                res = self.bruhat_leq(x, ys)
        self._bruhat[key] = res
        return res


@lru_cache(maxsize=None)
def _group(d: RootDatum) -> _Group:
    return _Group(d)


# --------------------------------------------------------------------------
# Operations

@dataclass(frozen=True)
class SimpleReflectionSet:
    generators: tuple[AffineWeylElt, ...]
    n_finite: int

    def __len__(self):
        return len(self.generators)

    def __getitem__(self, i):
        return self.generators[i]

    @property
    def finite_ids(self) -> tuple[int, ...]:
        return tuple(range(self.n_finite))

    @property
    def affine_ids(self) -> tuple[int, ...]:
        return tuple(range(self.n_finite, len(self.generators)))


def simple_reflections(d: RootDatum) -> SimpleReflectionSet:
    g = _group(d)
    return SimpleReflectionSet(g.generators, g.n_finite)


def n_generators(d: RootDatum) -> int:
    return len(_group(d).generators)


def identity(d: RootDatum) -> AffineWeylElt:
    return _group(d).identity


def translation(d: RootDatum, lam: Sequence[int]) -> AffineWeylElt:
    lam = tuple(lam)
    if not d.in_coroot_lattice(lam):
        raise ValueError(f"{lam} is not in the coroot lattice")
    return AffineWeylElt(d, FiniteWeylElt.identity(d.rank), lam)


def multiply(x: AffineWeylElt, y: AffineWeylElt) -> AffineWeylElt:
    """``(w t_λ)(w' t_μ) = ww' t_{w'⁻¹(λ) + μ}``."""
    if x.datum is not y.datum and x.datum != y.datum:
        raise ValueError("elements belong to different root data")
    lam = y.finite.inverse().act(x.translation)
    return AffineWeylElt(x.datum, x.finite * y.finite,
                         tuple(a + b for a, b in zip(lam, y.translation)))


def from_word(d: RootDatum, word: Iterable[int]) -> AffineWeylElt:
    g = _group(d)
    x = g.identity
    for i in word:
        if not 0 <= i < len(g.generators):
            raise ValueError(f"generator index {i} out of range")
        x = x * g.generators[i]
    return x


def parse_word(d: RootDatum, text: str) -> AffineWeylElt:
    """Parse ``"1 0"`` (or ``"e"``/empty for the identity)."""
    text = text.strip()
    if text in ("", "e"):
        return identity(d)
    try:
        word = [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise ValueError(f"cannot parse word {text!r}") from None
    return from_word(d, word)


def format_word(x: AffineWeylElt) -> str:
    w = x.reduced_word()
    return " ".join(map(str, w)) if w else "e"


def length(x: AffineWeylElt) -> int:
    return x.length()


def bruhat_leq(x: AffineWeylElt, y: AffineWeylElt) -> bool:
    if x.datum is not y.datum and x.datum != y.datum:
        raise ValueError("elements belong to different root data")
    return _group(x.datum).bruhat_leq(x, y)


def act(x: AffineWeylElt, mu: Sequence, n: int = 1, mode: str = "cdot") -> tuple:
    """Level-``n`` action on ``X∨`` (or rational points of ``V``).

    * ``box``:  ``(w t_λ) □_n μ = w(μ + nλ)``
    * ``cdot``: ``(w t_λ) ·_n μ = w(μ - nλ)``
    * ``dot``:  ``(w t_λ) •_n μ = w(μ + ρ∨ + nλ) - ρ∨``
    """
    lam = x.translation
    if mode == "box":
        return x.finite.act([m + n * a for m, a in zip(mu, lam)])
    if mode == "cdot":
        return x.finite.act([m - n * a for m, a in zip(mu, lam)])
    if mode == "dot":
        rho = x.datum.rho_vee
        v = x.finite.act([m + r + n * a for m, r, a in zip(mu, rho, lam)])
        return _normalize(Fraction(a) - r for a, r in zip(v, rho))
    raise ValueError(f"unknown action mode {mode!r}")


def star(x: AffineWeylElt) -> AffineWeylElt:
    return x.star()


def is_min_in_Wf(x: AffineWeylElt) -> bool:
    g = _group(x.datum)
    L = g.length(x)
    return all(g.length(g.generators[i] * x) > L for i in range(g.n_finite))


def enumerate_elements(d: RootDatum, max_len: int) -> list[AffineWeylElt]:
    """All elements of length <= max_len, ordered by (length, reduced word)."""
    return _bfs(d, max_len, lambda x: True)


def enumerate_fW(d: RootDatum, max_len: int) -> list[AffineWeylElt]:
    """Elements minimal in their coset ``W_f w`` up to ``max_len``.

    Prefixes of reduced words of such elements are again minimal, so a BFS
    that only extends members is complete.
    """
    return _bfs(d, max_len, is_min_in_Wf)


def _bfs(d, max_len, keep):
    g = _group(d)
    layer = [g.identity]
    out = [g.identity]
    seen = {g.identity}
    for L in range(1, max_len + 1):
        nxt = []
        for x in layer:
            for s in g.generators:
                y = x * s
                if y in seen or g.length(y) != L:
                    continue
                seen.add(y)
                if keep(y):
                    nxt.append(y)
        nxt.sort(key=lambda y: g.reduced_word(y))
        out.extend(nxt)
        layer = nxt
    return out


def parabolic_is_finite(d: RootDatum, I: Iterable[int]) -> bool:
    I = frozenset(I)
    return not any(nodes <= I for nodes in _group(d).component_nodes)


def parabolic_elements(d: RootDatum, I: Iterable[int]) -> list[AffineWeylElt]:
    """All elements of the finite standard parabolic ``W_I``."""
    I = sorted(set(I))
    if not parabolic_is_finite(d, I):
        raise ValueError(f"parabolic subgroup generated by {I} is infinite")
    g = _group(d)
    seen = {g.identity}
    queue = deque([g.identity])
    while queue:
        x = queue.popleft()
        for i in I:
            y = x * g.generators[i]
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return sorted(seen, key=lambda y: (g.length(y), g.reduced_word(y)))


def max_in_coset(x: AffineWeylElt, I: Iterable[int]) -> AffineWeylElt:
    """Longest element of ``x W_I`` for a finite standard parabolic ``W_I``."""
    I = sorted(set(I))
    if not parabolic_is_finite(x.datum, I):
        raise ValueError(f"parabolic subgroup generated by {I} is infinite")
    g = _group(x.datum)
    L = g.length(x)
    grew = True
    while grew:
        grew = False
        for i in I:
            y = x * g.generators[i]
            if g.length(y) > L:
                x, L, grew = y, L + 1, True
                break
    return x


def is_max_in_coset(x: AffineWeylElt, I: Iterable[int]) -> bool:
    g = _group(x.datum)
    L = g.length(x)
    return all(g.length(x * g.generators[i]) < L for i in I)
