"""Root data, the finite Weyl group, and characteristic-zero characters.

Coordinates: ``X`` and ``X∨`` are both ``Z^rank`` and the pairing is the dot
product.  Built-in Cartan types use the convention ``A[i][j] = <α_i∨, α_j>``.
Adjoint data put the simple roots on the standard basis of ``X`` (so ``X∨`` is
the coweight lattice); simply connected data put the simple coroots on the
standard basis of ``X∨``.

All characters are characters of the dual group: weights live in ``X∨`` and
the relevant roots are the coroots.
"""

from __future__ import annotations

import hashlib
import json
import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

Vec = tuple[int, ...]


class DatumError(ValueError):
    pass


def pair(x: Sequence, y: Sequence):
    return sum(a * b for a, b in zip(x, y))


def _normalize(v: Iterable) -> tuple:
    """Turn integral Fractions into ints so points hash consistently."""
    out = []
    for a in v:
        if isinstance(a, Fraction) and a.denominator == 1:
            a = a.numerator
        out.append(a)
    return tuple(out)


# --------------------------------------------------------------------------
# Cartan matrices

def cartan_matrix(letter: str, n: int) -> list[list[int]]:
    """Cartan matrix of an irreducible finite type, Bourbaki numbering."""
    letter = letter.upper()
    valid = {"A": n >= 1, "B": n >= 2, "C": n >= 2, "D": n >= 4,
             "E": n in (6, 7, 8), "F": n == 4, "G": n == 2}
    if not valid.get(letter, False):
        raise DatumError(f"unknown Cartan type {letter}{n}")
    A = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def link(i, j, aij=-1, aji=-1):
        A[i][j] = aij
        A[j][i] = aji

    if letter in "ABC":
        for i in range(n - 1):
            link(i, i + 1)
        if letter == "B":
            # α_n short
            link(n - 2, n - 1, aij=-1, aji=-2)
        elif letter == "C":
            link(n - 2, n - 1, aij=-2, aji=-1)
    elif letter == "D":
        for i in range(n - 2):
            link(i, i + 1)
        link(n - 3, n - 1)
    elif letter == "E":
        link(0, 2)
        link(1, 3)
        for i in range(2, n - 1):
            link(i, i + 1)
    elif letter == "F":
        link(0, 1)
        link(1, 2, aij=-1, aji=-2)
        link(2, 3)
    elif letter == "G":
        # α_1 short
        link(0, 1, aij=-3, aji=-1)
    return A


_TYPE_RE = re.compile(r"^([A-Ga-g])_?(\d+)$")


def parse_type(type_string: str) -> list[tuple[str, int]]:
    """``"A2"``, ``"B2xA1"`` or ``"A1*A1"`` -> [(letter, rank), ...]."""
    parts = [p for p in re.split(r"\s*[x×*+]\s*", type_string.strip()) if p]
    if not parts:
        raise DatumError(f"empty type string {type_string!r}")
    out = []
    for p in parts:
        m = _TYPE_RE.match(p)
        if not m:
            raise DatumError(f"cannot parse type {p!r}")
        out.append((m.group(1).upper(), int(m.group(2))))
    return out


def block_diagonal(blocks: list[list[list[int]]]) -> list[list[int]]:
    n = sum(len(b) for b in blocks)
    A = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, a in enumerate(row):
                A[off + i][off + j] = a
        off += len(b)
    return A


def _check_finite_cartan(A: list[list[int]]) -> None:
    """Raise unless ``A`` is a symmetrizable Cartan matrix of finite type."""
    n = len(A)
    for i in range(n):
        if len(A[i]) != n:
            raise DatumError("Cartan matrix is not square")
        if A[i][i] != 2:
            raise DatumError("Cartan matrix diagonal must be 2")
        for j in range(n):
            if i != j:
                if A[i][j] > 0:
                    raise DatumError("off-diagonal Cartan entries must be <= 0")
                if (A[i][j] == 0) != (A[j][i] == 0):
                    raise DatumError("Cartan matrix zero pattern is not symmetric")
    # symmetrizer d with d_i A_ij = d_j A_ji, propagated along the Dynkin graph
    d: list[Fraction | None] = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        queue = deque([start])
        while queue:
            i = queue.popleft()
            for j in range(n):
                if i == j or A[i][j] == 0:
                    continue
                dj = d[i] * A[i][j] / A[j][i]
                if d[j] is None:
                    d[j] = dj
                    queue.append(j)
                elif d[j] != dj:
                    raise DatumError("Cartan matrix is not symmetrizable")
    B = [[d[i] * A[i][j] for j in range(n)] for i in range(n)]
    # finite type iff the symmetrized matrix is positive definite
    M = [row[:] for row in B]
    for k in range(n):
        if M[k][k] <= 0:
            raise DatumError("Cartan matrix is not of finite type")
        for i in range(k + 1, n):
            f = M[i][k] / M[k][k]
            for j in range(k, n):
                M[i][j] -= f * M[k][j]


def _solve(P: list[list], b: Sequence) -> list[Fraction]:
    """Solve ``P x = b`` exactly for square invertible ``P``."""
    n = len(P)
    M = [[Fraction(a) for a in row] + [Fraction(bi)] for row, bi in zip(P, b)]
    for k in range(n):
        piv = next((i for i in range(k, n) if M[i][k] != 0), None)
        if piv is None:
            raise DatumError("singular system")
        M[k], M[piv] = M[piv], M[k]
        for i in range(n):
            if i != k and M[i][k] != 0:
                f = M[i][k] / M[k][k]
                for j in range(k, n + 1):
                    M[i][j] -= f * M[k][j]
    return [M[i][n] / M[i][i] for i in range(n)]


# --------------------------------------------------------------------------
# Finite Weyl group elements

@dataclass(frozen=True)
class FiniteWeylElt:
    """An element of ``W_f`` stored by its matrices on ``X∨`` and on ``X``."""

    mat: tuple[Vec, ...]
    dual: tuple[Vec, ...] = field(compare=False, repr=False)

    @staticmethod
    def identity(rank: int) -> FiniteWeylElt:
        I = tuple(tuple(int(i == j) for j in range(rank)) for i in range(rank))
        return FiniteWeylElt(I, I)

    @staticmethod
    def reflection(root: Vec, coroot: Vec) -> FiniteWeylElt:
        r = len(root)
        mat = tuple(tuple(int(i == j) - coroot[i] * root[j] for j in range(r))
                    for i in range(r))
        dual = tuple(tuple(int(i == j) - root[i] * coroot[j] for j in range(r))
                     for i in range(r))
        return FiniteWeylElt(mat, dual)

    def __mul__(self, other: FiniteWeylElt) -> FiniteWeylElt:
        return FiniteWeylElt(_matmul(self.mat, other.mat),
                             _matmul(self.dual, other.dual))

    def inverse(self) -> FiniteWeylElt:
        # dual = mat^{-T}
        return FiniteWeylElt(_transpose(self.dual), _transpose(self.mat))

    def is_identity(self) -> bool:
        return all(a == int(i == j) for i, row in enumerate(self.mat)
                   for j, a in enumerate(row))

    def act(self, v: Sequence) -> tuple:
        """Action on ``X∨`` (or on rational points of ``V``)."""
        return _normalize(sum(a * x for a, x in zip(row, v)) for row in self.mat)

    def act_dual(self, v: Sequence) -> tuple:
        """Action on ``X``."""
        return tuple(sum(a * x for a, x in zip(row, v)) for row in self.dual)


def _matmul(A, B):
    Bt = list(zip(*B))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in Bt)
                 for row in A)


def _transpose(A):
    return tuple(tuple(r) for r in zip(*A))


# --------------------------------------------------------------------------
# Root datum

@dataclass(frozen=True)
class RootDatum:
    rank: int
    simple_roots: tuple[Vec, ...]
    simple_coroots: tuple[Vec, ...]
    name: str = field(default="", compare=False)

    cartan: tuple[Vec, ...] = field(init=False, repr=False, compare=False)
    # root coefficient vectors (in simple roots), canonical order
    positive_root_coeffs: tuple[Vec, ...] = field(init=False, repr=False, compare=False)
    positive_roots: tuple[Vec, ...] = field(init=False, repr=False, compare=False)
    positive_coroots: tuple[Vec, ...] = field(init=False, repr=False, compare=False)
    components: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        s = object.__setattr__
        n = len(self.simple_roots)
        if len(self.simple_coroots) != n:
            raise DatumError("need as many simple coroots as simple roots")
        for v in (*self.simple_roots, *self.simple_coroots):
            if len(v) != self.rank:
                raise DatumError("root vector length differs from rank")
        A = [[pair(self.simple_coroots[i], self.simple_roots[j]) for j in range(n)]
             for i in range(n)]
        _check_finite_cartan(A)
        s(self, "cartan", tuple(tuple(r) for r in A))
        s(self, "components", _dynkin_components(A))
        coeffs, cocoeffs = _reflection_closure(A)
        roots = tuple(_combine(c, self.simple_roots) for c in coeffs)
        coroots = tuple(_combine(c, self.simple_coroots) for c in cocoeffs)
        s(self, "positive_root_coeffs", coeffs)
        s(self, "positive_roots", roots)
        s(self, "positive_coroots", coroots)

    # -- derived data -----------------------------------------------------

    @property
    def n_simple(self) -> int:
        return len(self.simple_roots)

    @property
    def is_semisimple(self) -> bool:
        return self.n_simple == self.rank

    @cached_property
    def roots(self) -> tuple[Vec, ...]:
        return self.positive_roots + tuple(_neg(a) for a in self.positive_roots)

    @cached_property
    def root_index(self) -> dict[Vec, tuple[int, int]]:
        """Root vector -> (index among positive roots, sign)."""
        out = {}
        for i, a in enumerate(self.positive_roots):
            out[a] = (i, 1)
            out[_neg(a)] = (i, -1)
        return out

    def coroot_of(self, root: Vec) -> Vec:
        i, sign = self.root_index[tuple(root)]
        c = self.positive_coroots[i]
        return c if sign > 0 else _neg(c)

    @cached_property
    def rho_vee(self) -> tuple:
        """Half the sum of positive coroots, with exact halves."""
        tot = [0] * self.rank
        for c in self.positive_coroots:
            for k, a in enumerate(c):
                tot[k] += a
        return _normalize(Fraction(a, 2) for a in tot)

    @property
    def rho_vee_is_integral(self) -> bool:
        return all(isinstance(a, int) for a in self.rho_vee)

    def rho_vee_int(self) -> Vec:
        if not self.rho_vee_is_integral:
            raise DatumError("rho-vee is not integral for this datum")
        return self.rho_vee

    @cached_property
    def highest_root_indices(self) -> tuple[int, ...]:
        """Index (into ``positive_roots``) of the highest root of each component."""
        out = []
        for comp in self.components:
            best = max((i for i, c in enumerate(self.positive_root_coeffs)
                        if any(c[j] for j in comp)),
                       key=lambda i: sum(self.positive_root_coeffs[i]))
            out.append(best)
        return tuple(out)

    @property
    def highest_roots(self) -> tuple[Vec, ...]:
        return tuple(self.positive_roots[i] for i in self.highest_root_indices)

    @cached_property
    def highest_coroots(self) -> tuple[Vec, ...]:
        """Highest coroot of each component (largest height in simple coroots)."""
        out = []
        for comp in self.components:
            idx = [i for i, c in enumerate(self.positive_root_coeffs)
                   if any(c[j] for j in comp)]
            heights = {i: sum(self._coroot_coeffs[i]) for i in idx}
            out.append(self.positive_coroots[max(idx, key=heights.__getitem__)])
        return tuple(out)

    @cached_property
    def _coroot_coeffs(self) -> tuple[Vec, ...]:
        _, cocoeffs = _reflection_closure([list(r) for r in self.cartan])
        return cocoeffs

    @cached_property
    def coxeter_numbers(self) -> tuple[int, ...]:
        return tuple(sum(self.positive_root_coeffs[i]) + 1
                     for i in self.highest_root_indices)

    @property
    def coxeter_number(self) -> int:
        return max(self.coxeter_numbers)

    @cached_property
    def simple_reflections(self) -> tuple[FiniteWeylElt, ...]:
        return tuple(FiniteWeylElt.reflection(a, c)
                     for a, c in zip(self.simple_roots, self.simple_coroots))

    @cached_property
    def hash(self) -> str:
        payload = json.dumps({"rank": self.rank,
                              "simple_roots": [list(a) for a in self.simple_roots],
                              "simple_coroots": [list(a) for a in self.simple_coroots]},
                             sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()[:16]

    # -- helpers ------------------------------------------------------------

    def is_dominant(self, lam: Sequence) -> bool:
        return all(pair(lam, a) >= 0 for a in self.simple_roots)

    def reflect_coweight(self, i: int, lam: Sequence) -> tuple:
        a, c = self.simple_roots[i], self.simple_coroots[i]
        p = pair(lam, a)
        return _normalize(x - p * y for x, y in zip(lam, c))

    def in_coroot_lattice(self, lam: Sequence) -> bool:
        return self.coroot_coordinates(lam) is not None

    def coroot_coordinates(self, lam: Sequence) -> Vec | None:
        """Integer coordinates of ``lam`` in the simple coroots, or None."""
        x = self.coroot_rational_coordinates(lam)
        if x is None or any(a.denominator != 1 for a in x):
            return None
        return tuple(int(a) for a in x)

    def coroot_rational_coordinates(self, lam: Sequence) -> tuple[Fraction, ...] | None:
        # <lam, α_j> = Σ_i x_i A_ij  determines x when lam is in the coroot span
        n = self.n_simple
        At = [[self.cartan[i][j] for i in range(n)] for j in range(n)]
        x = _solve(At, [pair(lam, a) for a in self.simple_roots])
        back = [sum(xi * c[k] for xi, c in zip(x, self.simple_coroots))
                for k in range(self.rank)]
        if any(b != a for a, b in zip(lam, back)):
            return None
        return tuple(x)

    def to_dict(self) -> dict:
        return {"rank": self.rank,
                "simple_roots": [list(a) for a in self.simple_roots],
                "simple_coroots": [list(a) for a in self.simple_coroots]}


def _neg(v):
    return tuple(-a for a in v)


def _combine(coeffs, basis):
    r = len(basis[0])
    return tuple(sum(c * b[k] for c, b in zip(coeffs, basis)) for k in range(r))


def _dynkin_components(A) -> tuple[tuple[int, ...], ...]:
    n = len(A)
    seen = [False] * n
    comps = []
    for s in range(n):
        if seen[s]:
            continue
        comp, stack = [], [s]
        seen[s] = True
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(n):
                if not seen[j] and A[i][j] != 0:
                    seen[j] = True
                    stack.append(j)
        comps.append(tuple(sorted(comp)))
    return tuple(comps)


def _reflection_closure(A) -> tuple[tuple[Vec, ...], tuple[Vec, ...]]:
    """Positive roots and matching coroots in simple (co)root coordinates.

    Closes the simple roots under simple reflections, carrying each root's
    coroot along so the root/coroot bijection is exact.
    """
    n = len(A)
    simple = [(tuple(int(i == j) for j in range(n)),) * 2 for i in range(n)]
    seen = {s[0]: s[1] for s in simple}
    queue = deque(simple)
    while queue:
        c, d = queue.popleft()
        for i in range(n):
            p = sum(c[j] * A[i][j] for j in range(n))        # <α_i∨, β>
            q = sum(d[j] * A[j][i] for j in range(n))        # <β∨, α_i>
            c2 = tuple(a - p * int(k == i) for k, a in enumerate(c))
            d2 = tuple(a - q * int(k == i) for k, a in enumerate(d))
            if c2 not in seen:
                if max(abs(a) for a in c2) > 64:
                    raise DatumError("reflection closure does not terminate")
                seen[c2] = d2
                queue.append((c2, d2))
    pos = [c for c in seen if all(a >= 0 for a in c)]
    if 2 * len(pos) != len(seen):
        raise DatumError("roots are not split into positive and negative")
    pos.sort(key=lambda c: (sum(c), tuple(-a for a in c)))
    return tuple(pos), tuple(seen[c] for c in pos)


# --------------------------------------------------------------------------
# Construction

def build_root_datum(spec: str | dict, isogeny: str | None = None) -> RootDatum:
    """Build a root datum from a type string or an explicit description.

    >>> d = build_root_datum("A1", "adjoint")
    >>> d.simple_roots, d.simple_coroots, d.rho_vee
    (((1,),), ((2,),), (1,))
    """
    if isinstance(spec, dict):
        if "type" in spec:
            return build_root_datum(spec["type"], spec.get("isogeny", isogeny))
        if isogeny is not None:
            raise DatumError("isogeny flag is incompatible with explicit matrices")
        try:
            rank = int(spec["rank"])
            roots = tuple(tuple(int(a) for a in r) for r in spec["simple_roots"])
            coroots = tuple(tuple(int(a) for a in r) for r in spec["simple_coroots"])
        except (KeyError, TypeError, ValueError) as exc:
            raise DatumError(f"malformed datum description: {exc}") from None
        return RootDatum(rank, roots, coroots, name="explicit")

    isogeny = isogeny or "adjoint"
    if isogeny not in ("adjoint", "simply_connected"):
        raise DatumError(f"unknown isogeny {isogeny!r}")
    A = block_diagonal([cartan_matrix(t, n) for t, n in parse_type(spec)])
    n = len(A)
    eye = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    if isogeny == "adjoint":
        roots = tuple(eye)
        coroots = tuple(tuple(A[i][j] for j in range(n)) for i in range(n))
    else:
        coroots = tuple(eye)
        roots = tuple(tuple(A[i][j] for i in range(n)) for j in range(n))
    return RootDatum(n, roots, coroots, name=f"{spec}/{isogeny}")


def load_datum_file(path) -> RootDatum:
    with open(path, encoding="utf-8") as fh:
        try:
            spec = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DatumError(f"datum file is not JSON: {exc}") from None
    return build_root_datum(spec)


# --------------------------------------------------------------------------
# Operations

def positive_roots(d: RootDatum) -> list[Vec]:
    return list(d.positive_roots)


def weyl_elements(d: RootDatum, max_rank: int = 4) -> list[FiniteWeylElt]:
    """All elements of ``W_f`` in BFS order from the identity."""
    if d.n_simple > max_rank:
        raise DatumError(f"Weyl group enumeration limited to rank <= {max_rank}")
    e = FiniteWeylElt.identity(d.rank)
    seen = {e}
    out = [e]
    queue = deque([e])
    while queue:
        w = queue.popleft()
        for s in d.simple_reflections:
            ws = w * s
            if ws not in seen:
                seen.add(ws)
                out.append(ws)
                queue.append(ws)
    return out


def finite_length(d: RootDatum, w: FiniteWeylElt) -> int:
    """Number of positive roots sent to negative roots."""
    return sum(1 for a in d.positive_roots
               if d.root_index[w.act_dual(a)][1] < 0)


def _require_dominant(d, lam):
    if len(lam) != d.rank:
        raise DatumError("weight has wrong length")
    if not d.is_dominant(lam):
        raise DatumError(f"weight {tuple(lam)} is not dominant")


def weyl_dim(d: RootDatum, lam: Sequence[int]) -> int:
    """Weyl dimension formula for the dual group, ``∏ <λ+ρ∨,α>/<ρ∨,α>``."""
    _require_dominant(d, lam)
    num, den = Fraction(1), Fraction(1)
    rho = d.rho_vee
    for a in d.positive_roots:
        num *= pair(lam, a) + pair(rho, a)
        den *= pair(rho, a)
    val = num / den
    assert val.denominator == 1
    return int(val)


@dataclass(frozen=True)
class Character:
    """Finite table weight -> multiplicity (zero entries never stored)."""

    weight_mults: dict = field(hash=False)

    @property
    def dim(self) -> int:
        return sum(self.weight_mults.values())

    def __getitem__(self, weight) -> int:
        return self.weight_mults.get(tuple(weight), 0)

    def __add__(self, other: Character) -> Character:
        out = dict(self.weight_mults)
        for k, m in other.weight_mults.items():
            out[k] = out.get(k, 0) + m
        return Character({k: m for k, m in out.items() if m})

    def scale(self, c: int) -> Character:
        return Character({k: c * m for k, m in self.weight_mults.items() if c * m})

    def is_weyl_invariant(self, d: RootDatum) -> bool:
        for i in range(d.n_simple):
            for wt, m in self.weight_mults.items():
                if self[d.reflect_coweight(i, wt)] != m:
                    return False
        return True

    def to_json(self) -> list[dict]:
        return [{"weight": list(w), "mult": m}
                for w, m in sorted(self.weight_mults.items())]

    @classmethod
    def from_json(cls, data: list[dict]) -> Character:
        return cls({tuple(e["weight"]): int(e["mult"]) for e in data})


def _killing_form(d: RootDatum):
    roots = d.roots

    def form(x, y):
        return sum(pair(x, a) * pair(y, a) for a in roots)

    return form


def weyl_character(d: RootDatum, lam: Sequence[int]) -> Character:
    """Weight multiplicities of the dual-group Weyl module via Freudenthal."""
    _require_dominant(d, lam)
    lam = tuple(lam)
    form = _killing_form(d)
    rho = d.rho_vee
    lr = tuple(a + b for a, b in zip(lam, rho))
    top = form(lr, lr)
    n = d.n_simple
    # weights are tracked by depth κ, with λ - μ = Σ κ_i α_i∨
    pos = [(c, k, form(c, c)) for c, k in zip(d.positive_coroots, d._coroot_coeffs)]

    def weight(kappa):
        return tuple(a - sum(k * c[j] for k, c in zip(kappa, d.simple_coroots))
                     for j, a in enumerate(lam))

    zero = (0,) * n
    mults = {zero: 1}
    level = [zero]
    while level:
        cands = sorted({tuple(k + int(i == j) for j, k in enumerate(kappa))
                        for kappa in level for i in range(n)})
        nxt = []
        for kappa in cands:
            mu = weight(kappa)
            mr = tuple(a + b for a, b in zip(mu, rho))
            denom = top - form(mr, mr)
            if denom <= 0:
                continue
            total = 0
            for c, ck, cc in pos:
                base = form(mu, c)
                step = 1
                up = tuple(a - b for a, b in zip(kappa, ck))
                while min(up) >= 0:
                    total += (base + step * cc) * mults.get(up, 0)
                    step += 1
                    up = tuple(a - b for a, b in zip(up, ck))
            m = Fraction(2 * total, denom)
            assert m.denominator == 1, "Freudenthal produced a non-integer"
            if m:
                mults[kappa] = int(m)
                nxt.append(kappa)
        level = nxt
    return Character({weight(k): m for k, m in mults.items()})
