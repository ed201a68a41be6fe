"""Independent brute-force references used by the tests.

Nothing here calls the closed-form length, the lifting-property Bruhat test,
wall-crossing projection, the KL recursion or Freudenthal's formula.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from itertools import product

from tiltkit.affine_weyl import _group, from_word


# -- finite Weyl group as integer matrices on X∨ -----------------------------------


def finite_weyl_matrices(d):
    """Closure of the simple reflections ``x ↦ x - <x,α_i> α_i∨``."""
    r = d.rank
    gens = []
    for a, c in zip(d.simple_roots, d.simple_coroots):
        gens.append(tuple(tuple(int(i == j) - c[i] * a[j] for j in range(r))
                          for i in range(r)))
    eye = tuple(tuple(int(i == j) for j in range(r)) for i in range(r))
    seen = {eye}
    queue = deque([eye])
    while queue:
        m = queue.popleft()
        for g in gens:
            p = tuple(tuple(sum(g[i][k] * m[k][j] for k in range(r)) for j in range(r))
                      for i in range(r))
            if p not in seen:
                seen.add(p)
                queue.append(p)
    return sorted(seen)


def _apply(m, v):
    return tuple(sum(a * b for a, b in zip(row, v)) for row in m)


def _coroot_coords(d, v):
    """Rational coordinates of ``v`` in the simple coroots (full rank assumed)."""
    r = d.rank
    A = [[Fraction(d.simple_coroots[j][i]) for j in range(r)] + [Fraction(v[i])]
         for i in range(r)]
    for col in range(r):
        piv = next(i for i in range(col, r) if A[i][col])
        A[col], A[piv] = A[piv], A[col]
        for i in range(r):
            if i != col and A[i][col]:
                f = A[i][col] / A[col][col]
                A[i] = [x - f * y for x, y in zip(A[i], A[col])]
    return tuple(A[i][r] / A[i][i] for i in range(r))


def orbit_key(d, mats, mu, ell):
    """Canonical label of the dot-orbit of ``mu``: the least reduction of
    ``w(mu + ρ∨)`` modulo ``ℓ Q∨`` over ``w ∈ W_f``."""
    rho = d.rho_vee_int()
    x = tuple(m + r for m, r in zip(mu, rho))
    keys = []
    for m in mats:
        c = _coroot_coords(d, _apply(m, x))
        keys.append(tuple(a % ell for a in c))
    return min(keys)


def orbit_partition(d, ell, points):
    mats = finite_weyl_matrices(d)
    groups = {}
    for mu in points:
        groups.setdefault(orbit_key(d, mats, mu, ell), set()).add(mu)
    return {frozenset(s) for s in groups.values()}


def box_points(rank, radius):
    return [tuple(p) for p in product(range(-radius, radius + 1), repeat=rank)]


# -- lengths and Bruhat order ------------------------------------------------------


def bfs_lengths(d, max_len):
    """Word length of every element up to ``max_len`` by breadth-first search."""
    g = _group(d)
    dist = {g.identity: 0}
    layer = [g.identity]
    for L in range(1, max_len + 1):
        nxt = []
        for x in layer:
            for s in g.generators:
                y = x * s
                if y not in dist:
                    dist[y] = L
                    nxt.append(y)
        layer = nxt
    return dist


def subword_set(d, word):
    """All products of subwords of ``word``."""
    out = set()
    for mask in range(1 << len(word)):
        out.add(from_word(d, [s for k, s in enumerate(word) if mask >> k & 1]))
    return out


# -- antispherical module from scratch ---------------------------------------------


def _lpoly_add(p, q, sign=1):
    out = dict(p)
    for k, a in q.items():
        out[k] = out.get(k, 0) + sign * a
    return {k: a for k, a in out.items() if a}


def _lpoly_mul(p, q):
    out = {}
    for i, a in p.items():
        for j, b in q.items():
            out[i + j] = out.get(i + j, 0) + a * b
    return {k: a for k, a in out.items() if a}


def _lbar(p):
    return {-k: a for k, a in p.items()}


def _in_fW(g, x):
    return all(g.length(g.generators[i] * x) > g.length(x) for i in range(g.n_finite))


def _act_Hs_inverse(g, vec, s):
    """Right action of ``H_s⁻¹ = H_s + v - v⁻¹`` on ``Σ c_x N_x``.

    ``N_x H_s`` is ``N_{xs}`` going up inside ``ᶠW``, ``N_{xs} + (v⁻¹-v) N_x``
    going down and ``-v N_x`` if ``xs`` leaves ``ᶠW``.
    """
    out = {}

    def add(x, p):
        out[x] = _lpoly_add(out.get(x, {}), p)

    for x, c in vec.items():
        xs = x * g.generators[s]
        if g.length(xs) < g.length(x):
            add(xs, c)
            add(x, _lpoly_mul(c, {-1: 1, 1: -1}))
        elif _in_fW(g, xs):
            add(xs, c)
        else:
            add(x, _lpoly_mul(c, {1: -1}))
        add(x, _lpoly_mul(c, {1: 1, -1: -1}))
    return {x: p for x, p in out.items() if p}


def bar_matrix(d, elements):
    """``bar(N_w)`` for each ``w`` via ``N_w = N_{s_1} ⋯ H_{s_k}`` on a reduced word."""
    g = _group(d)
    out = {}
    for w in elements:
        vec = {g.identity: {0: 1}}
        for s in w.reduced_word():
            vec = _act_Hs_inverse(g, vec, s)
        out[w] = vec
    return out


def kl_by_duality(d, w, elements, R):
    """Solve for the self-dual ``N̲_w = Σ n_y N_y`` with ``n_y ∈ vZ[v]`` below the top.

    Processes ``y`` downwards: ``n_y - bar(n_y) = Σ_{z>y} bar(n_z) r_{y,z}``.
    """
    g = _group(d)
    below = sorted([y for y in elements if g.length(y) < g.length(w)],
                   key=lambda y: -g.length(y))
    n = {w: {0: 1}}
    for y in below:
        rhs = {}
        for z, nz in n.items():
            r = R[z].get(y)
            if r:
                rhs = _lpoly_add(rhs, _lpoly_mul(_lbar(nz), r))
        if any(k == 0 for k in rhs):
            raise AssertionError("constant term in the duality defect")
        pos = {k: a for k, a in rhs.items() if k > 0}
        if _lpoly_add(pos, _lbar(pos), -1) != rhs:
            raise AssertionError("duality defect is not antisymmetric")
        if pos:
            n[y] = pos
    return n


# -- Weyl dimension by the product formula ------------------------------------------


def weyl_dimension(d, lam):
    rho = d.rho_vee
    num = Fraction(1)
    for a in d.positive_roots:
        num *= Fraction(sum((x + r) * b for x, r, b in zip(lam, rho, a)),
                        sum(r * b for r, b in zip(rho, a)))
    assert num.denominator == 1
    return int(num)
