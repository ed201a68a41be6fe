"""Acceptance criteria 1-9, each checked exactly and within its time bound."""

import contextlib
import io
import json
import random
import subprocess
import sys
import time

import pytest

import conftest
from oracles import (bar_matrix, bfs_lengths, box_points, kl_by_duality, orbit_partition,
                     subword_set, weyl_dimension)
from tiltkit.affine_weyl import bruhat_leq, enumerate_elements, enumerate_fW, from_word
from tiltkit.alcove import box_fundamental_reps, dot_fundamental_reps, facet_stabilizer
from tiltkit.charformula import (expand_to_weights, expr_dim, invert_unitriangular, matmul,
                                 nabla_in_simples_matrix, regular_block,
                                 simples_in_nablas_matrix, tilting_character)
from tiltkit.cli import main
from tiltkit.hecke import (AsphElt, bar, dump_hat, dump_pcan, format_hat, format_pcan,
                           kl_basis_asph, kl_fallback_table, load_hat, load_pcan)
from tiltkit.laurent import V
from tiltkit.linkage import (LinkageContext, block_dominant_weights, block_of, blocks,
                             fixed_point_components, make_block)
from tiltkit.rootdata import build_root_datum, weyl_character, weyl_dim


@contextlib.contextmanager
def criterion(num, limit, title):
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        conftest.ACCEPTANCE[num] = (ok and elapsed < limit, elapsed, limit, title)
        print(f"criterion {num}: {'PASS' if ok and elapsed < limit else 'FAIL'} "
              f"({elapsed:.3f}s, limit {limit}s) {title}")
    assert elapsed < limit, f"criterion {num} took {elapsed:.2f}s (limit {limit}s)"


def adjoint(t):
    return build_root_datum(t, "adjoint")


def test_criterion_1_linkage_partition():
    with criterion(1, 10, "dot-orbit partition of a 3ℓ box equals brute force"):
        for t in ("A1", "A2"):
            d = adjoint(t)
            for ell in (2, 3, 5):
                ctx = LinkageContext(d, ell)
                pts = box_points(d.rank, 3 * ell)
                groups = {}
                for mu in pts:
                    groups.setdefault(block_of(ctx, mu).rep, set()).add(mu)
                assert {frozenset(s) for s in groups.values()} == orbit_partition(d, ell, pts)


def test_criterion_2_blocks_equal_components():
    with criterion(2, 5, "blocks and components match through +ρ∨ with equal stabilizers"):
        for t in ("A1", "A2", "B2"):
            d = adjoint(t)
            rho = d.rho_vee_int()
            for ell in (2, 3, 5):
                ctx = LinkageContext(d, ell)
                dot = dot_fundamental_reps(d, ell)
                box = box_fundamental_reps(d, ell)
                assert len(dot) == len(box)
                shifted = [tuple(a + r for a, r in zip(lam, rho)) for lam in dot]
                assert sorted(shifted) == box
                for lam, mu in zip(dot, shifted):
                    assert make_block(ctx, lam).stabilizer_order == \
                        facet_stabilizer(d, mu, ell).order


def test_criterion_3_component_census():
    with criterion(3, 1, "A1, ℓ=3 has components [thin, full, full, partial]"):
        comps = fixed_point_components(LinkageContext(adjoint("A1"), 3))
        assert len(comps) == 4
        assert [c.kind for c in comps] == ["thin", "full", "full", "partial"]


def test_criterion_4_length_and_bruhat():
    with criterion(4, 60, "closed-form length and Bruhat order agree with oracles"):
        for t, L in (("A1", 10), ("A2", 8)):
            d = adjoint(t)
            dist = bfs_lengths(d, L)
            assert all(x.length() == n for x, n in dist.items())
            assert len(dist) == len(enumerate_elements(d, L))
        for t in ("A1", "A2"):
            d = adjoint(t)
            elts = enumerate_elements(d, 7)
            for w in elts:
                below = subword_set(d, w.reduced_word())
                for y in elts:
                    assert bruhat_leq(y, w) == (y in below)


def test_criterion_5_kl_kernel():
    with criterion(5, 30, "KL basis is self-dual, positive, degree bounded; A1 two-term"):
        for t, L in (("A1", 8), ("A2", 6)):
            d = adjoint(t)
            fw = enumerate_fW(d, L)
            R = bar_matrix(d, fw)
            for w in fw:
                x = kl_basis_asph(w)
                assert bar(x) == x
                assert {y: dict(p.items()) for y, p in x.coords.items()} == \
                    kl_by_duality(d, w, fw, R)
                for y, c in x.coords.items():
                    if y != w:
                        assert c.is_nonnegative() and c.valuation >= 1
                        assert c.degree <= w.length() - y.length()
        fw = enumerate_fW(adjoint("A1"), 8)
        for prev, w in zip(fw, fw[1:]):
            assert kl_basis_asph(w) == AsphElt.basis(w) + AsphElt.basis(prev).scale(V)


def test_criterion_6_tilting_characters():
    with criterion(6, 5, "T(4)=N(4)+N(0), T(6)=N(6)+N(4); masses consistent"):
        d = adjoint("A1")
        ctx = LinkageContext(d, 3)
        table = kl_fallback_table(d, 3)
        b = regular_block(ctx)
        t4 = tilting_character(ctx, b, from_word(d, [1]), table)
        assert t4.as_dict() == {(4,): 1, (0,): 1} and expr_dim(d, t4) == 6
        t6 = tilting_character(ctx, b, from_word(d, [1, 0]), table)
        assert t6.as_dict() == {(6,): 1, (4,): 1} and expr_dim(d, t6) == 12
        count = 0
        for blk in blocks(ctx):
            for w, _ in block_dominant_weights(ctx, blk, 8):
                expr = tilting_character(ctx, blk, w, table)
                assert expand_to_weights(d, expr).dim == expr_dim(d, expr)
                count += 1
        assert count >= 9


def test_criterion_7_inversion():
    with criterion(7, 5, "reciprocity matrices on truncated Y are mutual inverses"):
        d = adjoint("A1")
        ctx = LinkageContext(d, 3)
        members = enumerate_fW(d, 6)
        longer = enumerate_fW(d, 7)
        hat = dict(zip(longer, longer[1:]))
        M = nabla_in_simples_matrix(ctx, members, kl_fallback_table(d, 3), hat)
        K = simples_in_nablas_matrix(ctx, members)
        n = len(members)
        eye = [[int(i == j) for j in range(n)] for i in range(n)]
        assert matmul(M, K) == eye and matmul(K, M) == eye
        assert invert_unitriangular(M) == K
        for i, w in enumerate(members):
            for j, y in enumerate(members):
                if K[i][j]:
                    assert (K[i][j] > 0) == ((w.length() + y.length()) % 2 == 0)


def test_criterion_8_character_arithmetic():
    with criterion(8, 30, "Freudenthal mass equals Weyl dimension; W_f-symmetric"):
        rnd = random.Random(2024)
        types = [adjoint(t) for t in ("A1", "A2", "B2", "G2")]
        done = 0
        while done < 50:
            d = types[done % 4]
            lam = tuple(rnd.randint(0, 12) for _ in range(d.rank))
            if weyl_dimension(d, lam) > 500:
                continue
            ch = weyl_character(d, lam)
            assert ch.dim == weyl_dimension(d, lam) == weyl_dim(d, lam)
            assert ch.is_weyl_invariant(d)
            done += 1


def _run_main(args):
    buf = io.StringIO()
    err = io.StringIO()
    with contextlib.redirect_stdout(buf), contextlib.redirect_stderr(err):
        code = main(args)
    return code, buf.getvalue(), err.getvalue()


def test_criterion_9_determinism_and_round_trip(tmp_path):
    with criterion(9, 5, "CLI determinism, bit-exact file round-trips, bad table exits 3"):
        a1 = ["--type", "A1", "--isogeny", "adjoint"]
        jobs = [["blocks", *a1, "--ell", "3", "--max-length", "6", "--box", "9"],
                ["components", *a1, "--ell", "3"],
                ["tilt", *a1, "--ell", "3", "--lambda", "0", "--w", "1 0"],
                ["kl", "--type", "A2", "--max-length", "4"]]
        for job in jobs:
            outs = {_run_main(job) for _ in range(3)}
            assert len(outs) == 1 and next(iter(outs))[0] == 0
        cmd = [sys.executable, "-m", "tiltkit.cli", *jobs[2]]
        runs = {subprocess.run(cmd, capture_output=True, check=True).stdout for _ in range(2)}
        assert len(runs) == 1

        d = build_root_datum("A2", "adjoint")
        p = tmp_path / "a.pcan"
        p.write_text(format_pcan(kl_fallback_table(d, 4), enumerate_fW(d, 5)))
        q = tmp_path / "b.pcan"
        dump_pcan(load_pcan(p, d, 4), q)
        assert p.read_bytes() == q.read_bytes()

        a = build_root_datum("A1", "adjoint")
        fw = enumerate_fW(a, 7)
        h1 = tmp_path / "a.hat"
        dump_hat(dict(zip(fw, fw[1:])), h1)
        h2 = tmp_path / "b.hat"
        dump_hat(load_hat(h1, a), h2)
        assert h1.read_bytes() == h2.read_bytes()
        assert format_hat(load_hat(h2, a)).encode() == h2.read_bytes()

        bad = tmp_path / "bad.pcan"
        bad.write_text(f"#ell=3 datum={a.hash}\n1 | e | 0 1\n1 | 1 | 0 1\n")
        code, out, err = _run_main(["tilt", *a1, "--ell", "3", "--lambda", "0",
                                    "--w", "1", "--pcan", str(bad)])
        assert code == 3 and out == ""
        assert json.loads(err)["exit_code"] == 3
        code, _, _ = _run_main(["pkl-import", *a1, "--ell", "3", "--pcan", str(bad)])
        assert code == 3


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
