import itertools
import random
from fractions import Fraction

import pytest

from weylkit.exact import QmodZ, identity, mat_vec
from weylkit.affine import (
    AffineCoroot,
    CharacterPoint,
    ExtendedWeylElement,
    GramForm,
    NotPositiveDefinite,
    act_affine_coroot,
    affine_coroot_label,
    affine_coroot_positive,
    affine_coroot_reflection,
    affine_simple_data,
    character_from_config,
    dominant_base_point,
    element_length,
    element_order,
    eval_affine_coroot,
    extended_act_character,
    extended_act_cochar,
    extended_matrix,
    gram_from_ambient,
    gram_from_matrix,
    gram_from_weights,
    slice_act,
)
from weylkit.rootdata import preset, weyl_elements


def sl2():
    return preset("SL", 2)


def sl2_form():
    # standard representation: weights ±ϖ, ϖ(α̌) = 1
    return gram_from_weights(sl2(), [(1,), (-1,)])


def test_gram_sl2_standard():
    form = sl2_form()
    assert form.matrix == ((2,),)
    assert form.q((1,)) == 1


def test_gram_rejects_empty():
    with pytest.raises(NotPositiveDefinite):
        gram_from_weights(sl2(), [])


def test_gram_psp6_adjoint():
    psp6 = preset("PSp", 6)
    form = gram_from_weights(psp6, psp6.roots)
    # ambient form is 16*Id: S(e_i, e_j) = 16 delta_ij
    e = [psp6.ambient_to_lattice([int(k == i) for k in range(3)]) for i in range(3)]
    for i in range(3):
        for j in range(3):
            assert form.pair(e[i], e[j]) == (16 if i == j else 0)
    # same form via the ambient constructor
    amb = gram_from_ambient(psp6, [[16, 0, 0], [0, 16, 0], [0, 0, 16]])
    assert amb.matrix == form.matrix


def test_cochar_action_examples():
    rd, form = sl2(), sl2_form()
    t = ExtendedWeylElement.translation((1,))
    # t^alpha on alpha: alpha + 2 K_c
    assert extended_act_cochar(t, form, (0, (1,))) == (2, (1,))
    # anything fixes K_c
    s = ExtendedWeylElement.from_weyl(rd.reflection(rd.simple_indices[0]))
    assert extended_act_cochar(t * s, form, (1, (0,))) == (1, (0,))
    # pure w has no central term
    assert extended_act_cochar(s, form, (0, (1,))) == (0, (-1,))


def test_group_law_matches_matrix_action():
    rd, form = preset("Sp", 4), gram_from_weights(preset("Sp", 4), [(1, 0), (-1, 0), (0, 1), (0, -1)])
    rng = random.Random(11)
    ws = weyl_elements(rd)
    for _ in range(40):
        g = ExtendedWeylElement(tuple(rng.randint(-3, 3) for _ in range(2)), rng.choice(ws))
        h = ExtendedWeylElement(tuple(rng.randint(-3, 3) for _ in range(2)), rng.choice(ws))
        v = (rng.randint(-2, 2), tuple(rng.randint(-4, 4) for _ in range(2)))
        lhs = extended_act_cochar(g * h, form, v)
        rhs = extended_act_cochar(g, form, extended_act_cochar(h, form, v))
        assert lhs == rhs
        from weylkit.exact import mat_mul

        assert extended_matrix(g * h, form) == mat_mul(extended_matrix(g, form), extended_matrix(h, form))


def test_character_action_examples():
    rd, form = sl2(), sl2_form()
    chi = CharacterPoint(QmodZ(1, 2), (QmodZ(0, 1),))
    t = ExtendedWeylElement.translation((1,))
    assert extended_act_character(t, form, chi) == chi  # c*S(a,-) = (1/2)*2 = 0 mod 1
    s = ExtendedWeylElement.from_weyl(rd.reflection(0))
    assert extended_act_character(s, form, chi) == chi
    e = ExtendedWeylElement.unit(1)
    chi2 = CharacterPoint(QmodZ(1, 3), (QmodZ(1, 7),))
    assert extended_act_character(e, form, chi2) == chi2


def test_character_action_is_left_action():
    rd = preset("Sp", 4)
    form = gram_from_weights(rd, [(1, 0), (-1, 0), (0, 1), (0, -1)])
    rng = random.Random(5)
    ws = weyl_elements(rd)
    chi = CharacterPoint(QmodZ(1, 4), (QmodZ(1, 3), QmodZ(2, 5)))
    for _ in range(30):
        g = ExtendedWeylElement(tuple(rng.randint(-2, 2) for _ in range(2)), rng.choice(ws))
        h = ExtendedWeylElement(tuple(rng.randint(-2, 2) for _ in range(2)), rng.choice(ws))
        assert extended_act_character(g * h, form, chi) == extended_act_character(
            g, form, extended_act_character(h, form, chi)
        )


def test_affine_coroot_slice_intertwining():
    rd = preset("Sp", 4)
    form = gram_from_weights(rd, [(1, 0), (-1, 0), (0, 1), (0, -1)])
    rng = random.Random(3)
    ws = weyl_elements(rd)
    for _ in range(40):
        g = ExtendedWeylElement(tuple(rng.randint(-2, 2) for _ in range(2)), rng.choice(ws))
        ac = AffineCoroot(rng.choice(rd.coroots), rng.randint(-3, 3))
        x = tuple(Fraction(rng.randint(-9, 9), 7) for _ in range(2))
        lhs = eval_affine_coroot(form, act_affine_coroot(g, rd, form, ac), slice_act(g, form, x))
        assert lhs == eval_affine_coroot(form, ac, x)


def test_affine_simple_data_sl2():
    rd, form = sl2(), sl2_form()
    data = affine_simple_data(rd, form)
    labels = sorted(affine_coroot_label(rd, ac) for ac in data.simples)
    assert labels == [((1,), 0), ((1,), 1)]
    assert len(data.omega) == 1  # SL2 is simply connected
    assert data.coxeter[0][1] == "infinite"


def test_affine_simple_data_pgl2():
    rd = preset("PGL", 2)
    form = gram_from_matrix(rd, [[2]])
    data = affine_simple_data(rd, form)
    assert len(data.simples) == 2
    assert len(data.omega) == 2
    nontrivial = [g for g in data.omega if not g.is_identity()]
    assert len(nontrivial) == 1
    assert element_length(nontrivial[0], rd, form) == 0
    assert element_order(nontrivial[0]) in (2, "infinite")


def test_affine_simple_data_torus():
    rd = preset("torus", 2)
    form = gram_from_matrix(rd, [[1, 0], [0, 1]])
    data = affine_simple_data(rd, form)
    assert data.simples == ()
    assert len(data.omega_lattice) == 2  # translations form the lattice part


def test_affine_simple_data_sp4():
    rd = preset("Sp", 4)
    form = gram_from_weights(rd, [(1, 0), (-1, 0), (0, 1), (0, -1)])
    data = affine_simple_data(rd, form)
    assert len(data.simples) == 3
    labels = sorted(affine_coroot_label(rd, ac) for ac in data.simples)
    assert ((1, 0), 1) in labels  # the wall x(e1) = Q(e1)
    # affine C2 Coxeter matrix: orders {4, 4, 2} off-diagonal
    off = sorted(
        data.coxeter[i][j] for i in range(3) for j in range(3) if i < j
    )
    assert off == [2, 4, 4]


def test_lengths_sl2():
    rd, form = sl2(), sl2_form()
    e = ExtendedWeylElement.unit(1)
    assert element_length(e, rd, form) == 0
    s = ExtendedWeylElement.from_weyl(rd.reflection(0))
    assert element_length(s, rd, form) == 1
    t = ExtendedWeylElement.translation((1,))
    assert element_length(t, rd, form) == 2


def test_length_steps_by_one():
    rd = preset("Sp", 4)
    form = gram_from_weights(rd, [(1, 0), (-1, 0), (0, 1), (0, -1)])
    data = affine_simple_data(rd, form)
    refl = [affine_coroot_reflection(rd, ac) for ac in data.simples]
    rng = random.Random(2)
    ws = weyl_elements(rd)
    for _ in range(25):
        g = ExtendedWeylElement(tuple(rng.randint(-2, 2) for _ in range(2)), rng.choice(ws))
        lg = element_length(g, rd, form)
        for r in refl:
            assert abs(element_length(g * r, rd, form) - lg) == 1


def test_length_additive_on_reduced_words():
    rd, form = sl2(), sl2_form()
    data = affine_simple_data(rd, form)
    refl = [affine_coroot_reflection(rd, ac) for ac in data.simples]
    g = ExtendedWeylElement.unit(1)
    expected = 0
    word = [0, 1, 0, 1, 0, 1]
    for i in word:
        g = g * refl[i]
        expected += 1
        assert element_length(g, rd, form) == expected


def test_faithfulness_short_words():
    rd, form = sl2(), sl2_form()
    data = affine_simple_data(rd, form)
    gens = [affine_coroot_reflection(rd, ac) for ac in data.simples] + list(data.omega)
    seen = {}
    frontier = {ExtendedWeylElement.unit(1)}
    for _ in range(6):
        new = set()
        for g in frontier:
            for h in gens:
                new.add(g * h)
        frontier = new
        for g in frontier:
            m = extended_matrix(g, form)
            if m in seen:
                assert seen[m] == g
            else:
                seen[m] = g


def test_element_order():
    rd, form = sl2(), sl2_form()
    assert element_order(ExtendedWeylElement.unit(1)) == 1
    assert element_order(ExtendedWeylElement.from_weyl(rd.reflection(0))) == 2
    assert element_order(ExtendedWeylElement.translation((1,))) == "infinite"


def test_character_from_config_bases():
    psp6 = preset("PSp", 6)
    chi = character_from_config(psp6, "1/8", ["1/3", "1/5", "1/4"], basis="simple_roots")
    # chi_f(e1) = theta_1 = 1/3
    e1 = psp6.ambient_to_lattice([1, 0, 0])
    assert chi.value_on(e1) == QmodZ(1, 3)
    e3 = psp6.ambient_to_lattice([0, 0, 1])
    assert chi.value_on(e3) == QmodZ(3, 10)
