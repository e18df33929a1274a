import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weylkit import exact
from weylkit.exact import (
    CosetZn,
    QmodZ,
    det,
    hermite_normal_form,
    mat_mul,
    mat_vec,
    normal_forms,
    smith_normal_form,
    solve_integer_affine,
)


def brute_smith_diagonal(m):
    """Oracle: elementary row/column reduction without transform bookkeeping."""
    a = [list(row) for row in m]
    rows, cols = len(a), len(a[0])
    t = 0
    while t < min(rows, cols):
        if all(a[i][j] == 0 for i in range(t, rows) for j in range(t, cols)):
            break
        # move a minimal nonzero entry to the pivot
        i0, j0 = min(
            ((i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]),
            key=lambda ij: abs(a[ij[0]][ij[1]]),
        )
        a[t], a[i0] = a[i0], a[t]
        for row in a:
            row[t], row[j0] = row[j0], row[t]
        dirty = False
        for i in range(t + 1, rows):
            q = a[i][t] // a[t][t]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[t])]
            if a[i][t]:
                dirty = True
        for j in range(t + 1, cols):
            q = a[t][j] // a[t][t]
            if q:
                for row in a:
                    row[j] -= q * row[t]
            if a[t][j]:
                dirty = True
        if dirty:
            continue
        bad = next(
            (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % a[t][t]),
            None,
        )
        if bad is not None:
            a[t] = [x + y for x, y in zip(a[t], a[bad])]
            continue
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
        t += 1
    return [a[i][i] for i in range(min(rows, cols))]


def test_qmodz_normalization():
    assert QmodZ(5, 3) == QmodZ(2, 3)
    assert QmodZ(-1, 4) == QmodZ(3, 4)
    assert QmodZ(4, 2) == QmodZ(0, 1)
    assert QmodZ.parse("7/6").as_fraction() == Fraction(1, 6)
    assert QmodZ(1, 6).order() == 6
    assert (QmodZ(1, 2) + QmodZ(1, 2)).is_zero()
    assert QmodZ(1, 3).scale(3).is_zero()


def test_normal_forms_examples():
    _, (_, d, _) = normal_forms([[2, 0], [0, 2]])
    assert [d[0][0], d[1][1]] == [2, 2]
    _, (_, d, _) = normal_forms([[1, 0], [0, 1]])
    assert [d[0][0], d[1][1]] == [1, 1]
    _, (_, d, _) = normal_forms([[2, 4], [6, 8]])
    assert [d[0][0], d[1][1]] == [2, 4]


@settings(max_examples=150, deadline=None)
@given(
    st.integers(1, 4),
    st.integers(1, 4),
    st.data(),
)
def test_smith_properties(rows, cols, data):
    m = [
        [data.draw(st.integers(-9, 9)) for _ in range(cols)]
        for _ in range(rows)
    ]
    u, d, v = smith_normal_form(m)
    assert mat_mul(mat_mul(u, tuple(map(tuple, m))), v) == d
    assert abs(det(u)) == 1
    assert abs(det(v)) == 1
    diag = [d[i][i] for i in range(min(rows, cols))]
    for x, y in zip(diag, diag[1:]):
        if x:
            assert y % x == 0
        else:
            assert y == 0
    assert diag == brute_smith_diagonal(m)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_hermite_properties(rows, cols, data):
    m = [[data.draw(st.integers(-9, 9)) for _ in range(cols)] for _ in range(rows)]
    h, u = hermite_normal_form(m)
    assert mat_mul(u, tuple(map(tuple, m))) == h
    assert abs(det(u)) == 1
    # row-echelon with positive pivots, entries above pivots reduced
    last = -1
    for row in h:
        nz = next((j for j, x in enumerate(row) if x), None)
        if nz is None:
            continue
        assert nz > last
        last = nz
        assert row[nz] > 0


def test_solve_integer_affine_examples():
    assert solve_integer_affine([[2]], [1], [4]) is None
    sol = solve_integer_affine([[1]], [0], [1])
    assert sol.particular == (0,)
    assert sol.basis == ((1,),)
    sol = solve_integer_affine([[1]], [1], [2])
    assert sol.contains((1,))
    assert sol.contains((3,))
    assert not sol.contains((0,))
    assert sol.basis == ((2,),)


def exhaustive_solutions(a, b, moduli, box):
    """Residue-enumeration oracle over the box [-box, box]^n."""
    n = len(a[0])
    out = []
    from itertools import product

    for x in product(range(-box, box + 1), repeat=n):
        ok = True
        for row, bb, mm in zip(a, b, moduli):
            val = sum(Fraction(c) * xi for c, xi in zip(row, x)) - Fraction(bb)
            if mm == 0:
                if val != 0:
                    ok = False
                    break
            else:
                q = val / Fraction(mm)
                if q.denominator != 1:
                    ok = False
                    break
        if ok:
            out.append(x)
    return set(out)


def test_solver_agrees_with_residue_oracle():
    rng = random.Random(7)
    for _ in range(60):
        n = rng.randint(1, 2)
        rows = rng.randint(1, 2)
        a = [[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(n)] for _ in range(rows)]
        b = [Fraction(rng.randint(-3, 3), rng.randint(1, 4)) for _ in range(rows)]
        moduli = [Fraction(rng.randint(1, 12), rng.randint(1, 2)) for _ in range(rows)]
        sol = solve_integer_affine(a, b, moduli)
        truth = exhaustive_solutions(a, b, moduli, box=6)
        if sol is None:
            assert truth == set()
            continue
        from itertools import product as iproduct

        for x in iproduct(range(-6, 7), repeat=n):
            assert (x in truth) == sol.contains(x)
        # and the coset's own points satisfy the congruence
        pts = [sol.particular] + [
            tuple(p + q for p, q in zip(sol.particular, bvec)) for bvec in sol.basis
        ]
        for x in pts:
            for row, bb, mm in zip(a, b, moduli):
                val = sum(Fraction(c) * xi for c, xi in zip(row, x)) - Fraction(bb)
                if mm == 0:
                    assert val == 0
                else:
                    assert (val / Fraction(mm)).denominator == 1


def test_coset_membership_roundtrip():
    sol = solve_integer_affine([[2, 0], [0, 3]], [0, 0], [4, 1])
    # 2x = 0 mod 4 -> x even; y free
    assert sol.contains((2, 5))
    assert not sol.contains((1, 0))
