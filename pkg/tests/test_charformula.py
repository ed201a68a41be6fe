import random
import warnings

import pytest

from tiltkit.affine_weyl import act, enumerate_fW, from_word, identity
from tiltkit.charformula import (CharacterExpr, YRegion, expand_to_weights, expr_dim,
                                 invert_unitriangular, matmul, nabla_in_simples,
                                 nabla_in_simples_matrix, regular_block,
                                 simples_in_nablas_kl, simples_in_nablas_matrix,
                                 tilting_character, y_region)
from tiltkit.hecke import kl_fallback_table, parse_pcan
from tiltkit.linkage import LinkageContext, blocks, block_dominant_weights, make_block
from tiltkit.rootdata import build_root_datum

A1 = build_root_datum("A1", "adjoint")
A2 = build_root_datum("A2", "adjoint")
B2 = build_root_datum("B2", "adjoint")
CTX = LinkageContext(A1, 3)
TABLE = kl_fallback_table(A1, 3)


def up_one(members):
    return dict(zip(members, members[1:]))


def test_expr_normalizes():
    e = CharacterExpr("nabla", (((4,), 1), ((0,), 1), ((4,), -1), ((2,), 0)))
    assert e.terms == (((0,), 1),)
    assert CharacterExpr.from_dict(e.to_dict()) == e
    with pytest.raises(ValueError):
        CharacterExpr("verma", ())


def test_tilting_examples():
    b = regular_block(CTX)
    assert tilting_character(CTX, b, identity(A1), TABLE).as_dict() == {(0,): 1}
    t4 = tilting_character(CTX, b, from_word(A1, [1]), TABLE)
    assert t4.as_dict() == {(4,): 1, (0,): 1} and expr_dim(A1, t4) == 6
    t6 = tilting_character(CTX, b, from_word(A1, [1, 0]), TABLE)
    assert t6.as_dict() == {(6,): 1, (4,): 1} and expr_dim(A1, t6) == 12
    with pytest.raises(ValueError):
        tilting_character(CTX, b, from_word(A1, [0]), TABLE)
    with pytest.raises(ValueError):
        tilting_character(CTX, make_block(CTX, (-1,)), from_word(A1, [1]), TABLE)


def test_tilting_from_file_table():
    text = f"#ell=3 datum={A1.hash}\n1 | e | 0 1\n1 | 1 | 1\n"
    t = parse_pcan(text, A1, 3)
    expr = tilting_character(CTX, regular_block(CTX), from_word(A1, [1]), t)
    assert expr.as_dict() == {(4,): 1, (0,): 1}


def test_singular_block_tilting():
    b = make_block(CTX, (-1,))
    dom = block_dominant_weights(CTX, b, 6)
    first = tilting_character(CTX, b, dom[0][0], TABLE)
    assert first.as_dict() == {(5,): 1}


@pytest.mark.parametrize("d, ell, L", [(A1, 3, 8), (A1, 2, 8), (A2, 3, 5), (B2, 5, 4)])
def test_tilting_properties(d, ell, L):
    ctx = LinkageContext(d, ell)
    table = kl_fallback_table(d, ell)
    for b in blocks(ctx):
        for w, top in block_dominant_weights(ctx, b, L):
            expr = tilting_character(ctx, b, w, table)
            assert expr.coefficient(top) == 1
            assert all(c > 0 for _, c in expr.terms)
            assert all(d.is_dominant(mu) for mu, _ in expr.terms)
            if d is A1 and b.is_regular:
                assert len(expr.terms) == (1 if w == b_first(ctx, b) else 2)
            elif d is A1:
                # singular A1 blocks: every KL column stays inside one coset
                assert len(expr.terms) == 1
            if d is not B2:
                assert expand_to_weights(d, expr).dim == expr_dim(d, expr)


def b_first(ctx, b):
    return block_dominant_weights(ctx, b, 2)[0][0]


def test_expand_examples():
    assert expand_to_weights(A1, CharacterExpr("nabla", (((0,), 1),))).weight_mults == {(0,): 1}
    ch = expand_to_weights(A1, CharacterExpr("nabla", (((4,), 1), ((0,), 1))))
    assert ch.dim == 6
    assert ch.weight_mults == {(4,): 1, (2,): 1, (0,): 2, (-2,): 1, (-4,): 1}
    two = expand_to_weights(A1, CharacterExpr("nabla", (((2,), 2),)))
    assert two.weight_mults == {(2,): 2, (0,): 2, (-2,): 2}
    with pytest.raises(ValueError):
        expand_to_weights(A1, CharacterExpr("simple", (((2,), 1),)))


def test_y_region_a1():
    for ell in (4, 5):
        y = y_region(LinkageContext(A1, ell))
        assert [w for w in y.elements] == [identity(A1)]
        assert y.coxeter_number == 2 and y.members[0][1] == 1
    scan = [w for w in enumerate_fW(A1, 6)
            if abs(act(w, (1,), 4, "box")[0]) < 4]
    assert scan == y_region(LinkageContext(A1, 4)).elements


def test_y_region_a2_independent_of_ell():
    lists = [[w.reduced_word() for w in y_region(LinkageContext(A2, ell)).elements]
             for ell in (4, 5, 7)]
    assert lists[0] == lists[1] == lists[2] == [(), (2,), (2, 0), (2, 1)]
    assert isinstance(y_region(LinkageContext(A2, 4)), YRegion)


def test_y_region_warning_and_errors():
    with pytest.warns(UserWarning):
        y_region(LinkageContext(A2, 3))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        y_region(LinkageContext(A2, 4))
    with pytest.raises(ValueError):
        y_region(LinkageContext(build_root_datum("A1xA1", "adjoint"), 4))


def test_reciprocity_corner():
    members = enumerate_fW(A1, 6)
    hat = up_one(enumerate_fW(A1, 7))
    e = identity(A1)
    lower = nabla_in_simples(CTX, e, TABLE, hat, members)
    assert lower.basis == "simple" and lower.as_dict() == {(0,): 1}
    top = simples_in_nablas_kl(CTX, e, members)
    assert top.as_dict() == {(0,): 1}
    with pytest.raises(ValueError):
        nabla_in_simples(CTX, e, TABLE, {}, members)
    with pytest.raises(ValueError):
        simples_in_nablas_kl(CTX, from_word(A1, [0]), members)


def test_reciprocity_signs():
    members = enumerate_fW(A1, 6)
    w = members[4]
    expr = simples_in_nablas_kl(CTX, w, members)
    by_weight = expr.as_dict()
    for y in members[:5]:
        c = by_weight[act(y, (0,), 3, "dot")]
        assert c == (-1) ** (w.length() + y.length())


def test_inverse_matrices():
    members = enumerate_fW(A1, 6)
    hat = up_one(enumerate_fW(A1, 7))
    M = nabla_in_simples_matrix(CTX, members, TABLE, hat)
    K = simples_in_nablas_matrix(CTX, members)
    n = len(members)
    eye = [[int(i == j) for j in range(n)] for i in range(n)]
    assert matmul(M, K) == eye and matmul(K, M) == eye
    assert invert_unitriangular(M) == K


def test_invert_unitriangular_examples():
    assert invert_unitriangular([[1, 0], [0, 1]]) == [[1, 0], [0, 1]]
    assert invert_unitriangular([[1, 0], [1, 1]]) == [[1, 0], [-1, 1]]
    assert invert_unitriangular([[1, 5], [0, 1]]) == [[1, -5], [0, 1]]
    assert invert_unitriangular([[1, 2], [0, 1]], order=[1, 0]) == [[1, -2], [0, 1]]
    with pytest.raises(ValueError):
        invert_unitriangular([[1, 1], [1, 1]])
    with pytest.raises(ValueError):
        invert_unitriangular([[2, 0], [0, 1]])
    with pytest.raises(ValueError):
        invert_unitriangular([[1, 0]])


def test_invert_random():
    rnd = random.Random(11)
    for _ in range(20):
        n = 6
        perm = list(range(n))
        rnd.shuffle(perm)
        T = [[1 if i == j else (rnd.randint(0, 9) if j < i else 0) for j in range(n)]
             for i in range(n)]
        M = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                M[perm[i]][perm[j]] = T[i][j]
        inv = invert_unitriangular(M, perm)
        eye = [[int(i == j) for j in range(n)] for i in range(n)]
        assert matmul(M, inv) == eye
