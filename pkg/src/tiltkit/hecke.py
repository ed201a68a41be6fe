"""Antispherical and regular Kazhdan-Lusztig bases, and ℓ-KL table ingestion.

Normalization: ``H_s² = (v⁻¹ - v) H_s + 1`` and ``H̲_s = H_s + v``.  The
antispherical module is a right module with standard basis ``N_w`` for
``w ∈ ᶠW`` (minimal in ``W_f w``); the right action of ``H̲_s`` is

* ``N_w H̲_s = N_{ws} + v N_w``   if ``ws > w`` and ``ws ∈ ᶠW``,
* ``N_w H̲_s = N_{ws} + v⁻¹ N_w`` if ``ws < w``,
* ``N_w H̲_s = 0``                if ``ws ∉ ᶠW``.
"""

from __future__ import annotations

import functools
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from tiltkit.affine_weyl import (AffineWeylElt, _group, bruhat_leq, format_word,
                                 from_word, is_min_in_Wf)
from tiltkit.laurent import ONE, V, VINV, ZERO, LaurentPoly
from tiltkit.rootdata import RootDatum

# -- module elements ---------------------------------------------------------


class AsphElt:
    """A finite combination ``Σ c_w N_w`` (or ``Σ c_w H_w`` in the regular module)."""

    __slots__ = ("coords",)

    def __init__(self, coords: Mapping[AffineWeylElt, LaurentPoly] | None = None):
        self.coords = {w: c for w, c in (coords or {}).items() if c}

    @classmethod
    def basis(cls, w: AffineWeylElt) -> AsphElt:
        return cls({w: ONE})

    def __add__(self, other: AsphElt) -> AsphElt:
        out = dict(self.coords)
        for w, c in other.coords.items():
            out[w] = out.get(w, ZERO) + c
        return AsphElt(out)

    def __sub__(self, other: AsphElt) -> AsphElt:
        return self + other.scale(LaurentPoly.const(-1))

    def scale(self, c) -> AsphElt:
        c = LaurentPoly.const(c) if isinstance(c, int) else c
        return AsphElt({w: a * c for w, a in self.coords.items()})

    def __getitem__(self, w: AffineWeylElt) -> LaurentPoly:
        return self.coords.get(w, ZERO)

    def __eq__(self, other):
        if not isinstance(other, AsphElt):
            return NotImplemented
        return self.coords == other.coords

    def __len__(self):
        return len(self.coords)

    def support(self) -> list[AffineWeylElt]:
        g = None
        for w in self.coords:
            g = _group(w.datum)
            break
        if g is None:
            return []
        return sorted(self.coords, key=lambda w: (g.length(w), g.reduced_word(w)))

    def bar_coefficients(self) -> AsphElt:
        """Apply ``v ↦ v⁻¹`` to coordinates only (not to the basis)."""
        return AsphElt({w: c.bar() for w, c in self.coords.items()})

    def __repr__(self):
        terms = [f"({self.coords[w]})·N[{format_word(w)}]" for w in self.support()]
        return " + ".join(terms) or "0"


# -- the right actions -------------------------------------------------------


def _check_generator(x: AsphElt, s: int):
    for w in x.coords:
        if not 0 <= s < len(_group(w.datum).generators):
            raise ValueError(f"no generator with index {s}")
        return


def mult_underline_Hs(x: AsphElt, s: int) -> AsphElt:
    """Right action of ``H̲_s`` on the antispherical module."""
    _check_generator(x, s)
    out: dict[AffineWeylElt, LaurentPoly] = {}
    for w, c in x.coords.items():
        g = _group(w.datum)
        ws = w * g.generators[s]
        if g.length(ws) < g.length(w):
            _acc(out, ws, c)
            _acc(out, w, c * VINV)
        elif is_min_in_Wf(ws):
            _acc(out, ws, c)
            _acc(out, w, c * V)
    return AsphElt(out)


def mult_Hs(x: AsphElt, s: int) -> AsphElt:
    """Right action of ``H_s = H̲_s - v`` on the antispherical module."""
    return mult_underline_Hs(x, s) - x.scale(V)


def mult_Hs_inverse(x: AsphElt, s: int) -> AsphElt:
    """Right action of ``H_s⁻¹ = H_s + v - v⁻¹``."""
    return mult_Hs(x, s) + x.scale(V - VINV)


def regular_mult_underline_Hs(x: AsphElt, s: int) -> AsphElt:
    """Right action of ``H̲_s`` on the regular module (all of ``W_aff``)."""
    _check_generator(x, s)
    out: dict[AffineWeylElt, LaurentPoly] = {}
    for w, c in x.coords.items():
        g = _group(w.datum)
        ws = w * g.generators[s]
        _acc(out, ws, c)
        _acc(out, w, c * (VINV if g.length(ws) < g.length(w) else V))
    return AsphElt(out)


def _acc(out, w, c):
    out[w] = out.get(w, ZERO) + c


# -- KL bases ---------------------------------------------------------------


class _KLCache:
    """Shared column memo; inserts are atomic and columns immutable once stored."""

    def __init__(self, d: RootDatum):
        self.d = d
        self.lock = threading.Lock()
        self.asph: dict[AffineWeylElt, AsphElt] = {}
        self.regular: dict[AffineWeylElt, AsphElt] = {}
        self.bar: dict[AffineWeylElt, AsphElt] = {}

    def store(self, table, w, value):
        with self.lock:
            return table.setdefault(w, value)


@functools.lru_cache(maxsize=None)
def _cache(d: RootDatum) -> _KLCache:
    return _KLCache(d)


def _lowest_right_descent(w: AffineWeylElt) -> int:
    return w.right_descents()[0]


def _kl_column(w: AffineWeylElt, table: dict, act, cache: _KLCache) -> AsphElt:
    hit = table.get(w)
    if hit is not None:
        return hit
    g = _group(w.datum)
    if w.is_identity():
        return cache.store(table, w, AsphElt.basis(w))
    s = _lowest_right_descent(w)
    ws = w * g.generators[s]
    x = act(_kl_column(ws, table, act, cache), s)
    # Remove v⁰ terms below the top, starting from the longest.
    while True:
        bad = [y for y, c in x.coords.items() if y != w and c.coeff(0)]
        if not bad:
            break
        y = max(bad, key=lambda y: (g.length(y), g.reduced_word(y)))
        x = x - _kl_column(y, table, act, cache).scale(x[y].coeff(0))
    _check_kl_column(w, x)
    return cache.store(table, w, x)


def _check_kl_column(w: AffineWeylElt, x: AsphElt):
    g = _group(w.datum)
    if x[w] != ONE:
        raise AssertionError(f"top coefficient of the KL element at {w} is {x[w]}")
    for y, c in x.coords.items():
        if y == w:
            continue
        gap = g.length(w) - g.length(y)
        if (c.valuation < 1 or c.degree > gap or not c.is_nonnegative()
                or any((k - gap) % 2 for k, _ in c.items())):
            raise AssertionError(f"KL polynomial at ({y}, {w}) is {c}")


def kl_basis_asph(w: AffineWeylElt) -> AsphElt:
    """The antispherical KL element ``N̲_w`` in the standard basis."""
    if not is_min_in_Wf(w):
        raise ValueError(f"{w} is not minimal in its W_f-coset")
    cache = _cache(w.datum)
    return _kl_column(w, cache.asph, mult_underline_Hs, cache)


def kl_basis_regular(w: AffineWeylElt) -> AsphElt:
    """The KL element ``H̲_w`` in the standard basis of the Hecke algebra."""
    cache = _cache(w.datum)
    return _kl_column(w, cache.regular, regular_mult_underline_Hs, cache)


def fill_kl_columns(elements: Iterable[AffineWeylElt], workers: int = 1) -> None:
    """Populate the antispherical memo for ``elements``.

    Columns are requested in order of length; with several workers, columns of
    equal length are incomparable and are computed concurrently.
    """
    elements = list(elements)
    if not elements:
        return
    g = _group(elements[0].datum)
    by_len: dict[int, list] = {}
    for w in elements:
        by_len.setdefault(g.length(w), []).append(w)
    if workers <= 1:
        for L in sorted(by_len):
            for w in by_len[L]:
                kl_basis_asph(w)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for L in sorted(by_len):
            list(pool.map(kl_basis_asph, by_len[L]))


def asph_kl_polynomial(y: AffineWeylElt, w: AffineWeylElt) -> LaurentPoly:
    """``n_{y,w}``: the coefficient of ``N_y`` in ``N̲_w``."""
    if not is_min_in_Wf(y):
        raise ValueError(f"{y} is not minimal in its W_f-coset")
    return kl_basis_asph(w)[y]


def reg_kl_polynomial(y: AffineWeylElt, w: AffineWeylElt) -> LaurentPoly:
    """``h_{y,w}``: the coefficient of ``H_y`` in ``H̲_w``."""
    return kl_basis_regular(w)[y]


# -- bar involution on the standard basis -----------------------------------


def bar_standard(w: AffineWeylElt) -> AsphElt:
    """``bar(N_w)`` in the standard basis.

    Uses ``N_w = N_{ws} H_s`` for a right descent ``s`` and
    ``bar(H_s) = H_s⁻¹``; independent of the KL recursion.
    """
    if not is_min_in_Wf(w):
        raise ValueError(f"{w} is not minimal in its W_f-coset")
    cache = _cache(w.datum)
    hit = cache.bar.get(w)
    if hit is not None:
        return hit
    if w.is_identity():
        return cache.store(cache.bar, w, AsphElt.basis(w))
    s = _lowest_right_descent(w)
    ws = w * _group(w.datum).generators[s]
    return cache.store(cache.bar, w, mult_Hs_inverse(bar_standard(ws), s))


def bar(x: AsphElt) -> AsphElt:
    """The bar involution on the antispherical module."""
    out = AsphElt()
    for w, c in x.coords.items():
        out = out + bar_standard(w).scale(c.bar())
    return out


# -- ℓ-KL tables -------------------------------------------------------------


class DataFileError(ValueError):
    """A malformed or inconsistent input data file."""


@dataclass(frozen=True)
class PCanTable:
    """``ℓn_{y,w}`` either read from a file or replaced by ordinary KL data."""

    datum: RootDatum
    ell: int
    mode: str = "kl_fallback"
    # w -> {y: ℓn_{y,w}}; only used in file mode
    columns: Mapping[AffineWeylElt, Mapping[AffineWeylElt, LaurentPoly]] = field(
        default_factory=dict, compare=False)

    @property
    def datum_hash(self) -> str:
        return self.datum.hash

    def column(self, w: AffineWeylElt) -> dict[AffineWeylElt, LaurentPoly]:
        """All nonzero ``ℓn_{y,w}`` for fixed ``w``."""
        if not is_min_in_Wf(w):
            raise ValueError(f"{w} is not minimal in its W_f-coset")
        if self.mode == "kl_fallback":
            return dict(kl_basis_asph(w).coords)
        col = self.columns.get(w)
        if col is None:
            raise DataFileError(f"ℓ-KL table has no column for w = {format_word(w)}")
        return dict(col)


def kl_fallback_table(d: RootDatum, ell: int) -> PCanTable:
    return PCanTable(d, ell, "kl_fallback")


def pcan_polynomial(table: PCanTable, y: AffineWeylElt, w: AffineWeylElt) -> LaurentPoly:
    if not is_min_in_Wf(y):
        raise ValueError(f"{y} is not minimal in its W_f-coset")
    return table.column(w).get(y, ZERO)


def _parse_word(d: RootDatum, text: str, where: str) -> AffineWeylElt:
    text = text.strip()
    if text in ("", "e"):
        return from_word(d, ())
    try:
        word = [int(t) for t in text.split()]
    except ValueError:
        raise DataFileError(f"{where}: bad word {text!r}") from None
    n = len(_group(d).generators)
    if any(not 0 <= i < n for i in word):
        raise DataFileError(f"{where}: generator index out of range in {text!r}")
    w = from_word(d, word)
    if w.length() != len(word):
        raise DataFileError(f"{where}: word {text!r} is not reduced")
    return w


def _word_text(w: AffineWeylElt) -> str:
    word = w.reduced_word()
    return " ".join(map(str, word)) if word else "e"


def _sort_key(w: AffineWeylElt):
    return (w.length(), w.reduced_word())


def parse_header(line: str) -> tuple[int, str]:
    if not line.startswith("#"):
        raise DataFileError("missing header line '#ell=<ℓ> datum=<hash>'")
    fields = dict(part.split("=", 1) for part in line[1:].split() if "=" in part)
    try:
        return int(fields["ell"]), fields["datum"]
    except (KeyError, ValueError):
        raise DataFileError(f"malformed header {line!r}") from None


def parse_pcan(text: str, d: RootDatum, ell: int) -> PCanTable:
    """Parse and validate the text of an ℓ-KL file."""
    lines = text.splitlines()
    if not lines:
        raise DataFileError("empty ℓ-KL file")
    file_ell, file_hash = parse_header(lines[0])
    if file_ell != ell:
        raise DataFileError(f"file is for ℓ={file_ell}, requested ℓ={ell}")
    if file_hash != d.hash:
        raise DataFileError(f"file datum hash {file_hash} does not match {d.hash}")
    columns: dict[AffineWeylElt, dict[AffineWeylElt, LaurentPoly]] = {}
    for num, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        where = f"line {num}"
        parts = line.split("|")
        if len(parts) != 3:
            raise DataFileError(f"{where}: expected 'w | y | coefficients'")
        w = _parse_word(d, parts[0], where)
        y = _parse_word(d, parts[1], where)
        for x in (w, y):
            if not is_min_in_Wf(x):
                raise DataFileError(f"{where}: {_word_text(x)} is not minimal in its W_f-coset")
        try:
            coeffs = [int(t) for t in parts[2].split()]
        except ValueError:
            raise DataFileError(f"{where}: coefficients must be integers") from None
        if any(c < 0 for c in coeffs):
            raise DataFileError(f"{where}: negative coefficient")
        col = columns.setdefault(w, {})
        if y in col:
            raise DataFileError(f"{where}: duplicate entry")
        col[y] = LaurentPoly.from_coeffs(coeffs)
    for w, col in columns.items():
        if col.get(w) != ONE:
            raise DataFileError(f"entry at ({_word_text(w)}, {_word_text(w)}) must be 1")
        for y, c in col.items():
            if c and not bruhat_leq(y, w):
                raise DataFileError(
                    f"nonzero entry at ({_word_text(y)}, {_word_text(w)}) with y not below w")
    frozen = {w: {y: c for y, c in col.items() if c} for w, col in columns.items()}
    return PCanTable(d, ell, "file", frozen)


def load_pcan(path, d: RootDatum, ell: int) -> PCanTable:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DataFileError(f"cannot read {path}: {exc}") from None
    return parse_pcan(text, d, ell)


def format_pcan(table: PCanTable, columns: Iterable[AffineWeylElt] | None = None) -> str:
    """Canonical text: columns by (length, word), rows likewise."""
    if columns is None:
        if table.mode != "file":
            raise ValueError("a fallback table needs an explicit list of columns")
        columns = table.columns
    lines = [f"#ell={table.ell} datum={table.datum_hash}"]
    for w in sorted(columns, key=_sort_key):
        col = table.column(w)
        for y in sorted(col, key=_sort_key):
            c = col[y]
            if c:
                coeffs = " ".join(map(str, c.to_coeffs()))
                lines.append(f"{_word_text(w)} | {_word_text(y)} | {coeffs}")
    return "\n".join(lines) + "\n"


def dump_pcan(table: PCanTable, path, columns=None) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_pcan(table, columns))


# -- hat-map files -------------------------------------------------------------


def parse_hat(text: str, d: RootDatum) -> dict[AffineWeylElt, AffineWeylElt]:
    """Lines ``y_word | yhat_word``; the map must be injective."""
    out: dict[AffineWeylElt, AffineWeylElt] = {}
    for num, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        where = f"line {num}"
        parts = line.split("|")
        if len(parts) != 2:
            raise DataFileError(f"{where}: expected 'y | yhat'")
        y = _parse_word(d, parts[0], where)
        yhat = _parse_word(d, parts[1], where)
        if y in out:
            raise DataFileError(f"{where}: duplicate entry for {_word_text(y)}")
        out[y] = yhat
    if len(set(out.values())) != len(out):
        raise DataFileError("hat map is not injective")
    return out


def load_hat(path, d: RootDatum) -> dict[AffineWeylElt, AffineWeylElt]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DataFileError(f"cannot read {path}: {exc}") from None
    return parse_hat(text, d)


def format_hat(hat: Mapping[AffineWeylElt, AffineWeylElt]) -> str:
    return "".join(f"{_word_text(y)} | {_word_text(hat[y])}\n"
                   for y in sorted(hat, key=_sort_key))


def dump_hat(hat, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_hat(hat))
