import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from g2cert.exterior import (
    Frame, FrameMismatch, KForm, contract, e, form_norm, hodge, inner, perm_sign, pullback, random_form,
    volume_form, wedge, wedge_all,
)

import oracles

seeds = st.integers(0, 2**32 - 1)
degrees = st.integers(0, 7)


def rand(seed, k, n=7):
    return random_form(np.random.default_rng(seed), n, k)


def test_basis_wedges():
    assert (e(1) ^ e(2)) == e(1, 2)
    assert (e(2) ^ e(1)) == -e(1, 2)
    assert (e(1) ^ e(1)).is_zero()
    assert wedge_all(*(e(i) for i in range(1, 8))) == volume_form(7)


def test_perm_sign_matches_inversion_count():
    rng = np.random.default_rng(3)
    for _ in range(50):
        p = list(rng.permutation(6))
        assert perm_sign(p) == oracles.levi_civita(p)


def test_reference_hodge_of_phi():
    phi = e(1, 2, 7) + e(3, 4, 7) + e(5, 6, 7) + e(1, 3, 5) - e(1, 4, 6) - e(2, 3, 6) - e(2, 4, 5)
    psi = hodge(phi)
    # [DERIVED] phi ^ *phi = 7 vol for the standard positive 3-form
    assert (phi ^ psi) == volume_form(7) * 7.0


@settings(max_examples=60, deadline=None)
@given(seeds, degrees)
def test_hodge_matches_levi_civita_oracle(seed, k):
    a = rand(seed, k)
    assert form_norm(hodge(a) - oracles.hodge_orthonormal(a)) < 1e-12


@settings(max_examples=60, deadline=None)
@given(seeds, degrees, degrees)
def test_wedge_graded_commutative(seed, k, l):
    if k + l > 7:
        return
    a, b = rand(seed, k), rand(seed + 1, l)
    assert form_norm((a ^ b) - (b ^ a) * (-1) ** (k * l)) < 1e-12


@settings(max_examples=40, deadline=None)
@given(seeds, degrees)
def test_star_star_is_identity_in_dim_7(seed, k):
    a = rand(seed, k)
    assert form_norm(hodge(hodge(a)) - a) < 1e-12


@settings(max_examples=40, deadline=None)
@given(seeds, degrees)
def test_star_star_on_general_metric(seed, k):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(7, 7))
    frame = Frame(7, X @ X.T + 7 * np.eye(7))
    a = rand(seed, k)
    assert form_norm(hodge(hodge(a, frame), frame) - a) < 1e-9


@settings(max_examples=40, deadline=None)
@given(seeds, degrees)
def test_wedge_star_gives_inner_product(seed, k):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(7, 7))
    frame = Frame(7, X @ X.T + 7 * np.eye(7))
    a, b = rand(seed, k), rand(seed + 7, k)
    lhs = a ^ hodge(b, frame)
    vol = np.sqrt(np.linalg.det(frame.metric))
    assert abs(lhs.coefficient(range(7)) - inner(a, b, frame) * vol) < 1e-9


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(1, 6), st.integers(1, 6))
def test_contraction_is_antiderivation(seed, k, l):
    if k + l > 7:
        return
    v = np.random.default_rng(seed).normal(size=7)
    a, b = rand(seed, k), rand(seed + 3, l)
    lhs = contract(v, a ^ b)
    rhs = (contract(v, a) ^ b) + (a ^ contract(v, b)) * (-1) ** k
    assert form_norm(lhs - rhs) < 1e-12


def test_pullback_composition_and_restriction():
    rng = np.random.default_rng(5)
    g, h = rng.normal(size=(7, 7)), rng.normal(size=(7, 7))
    a = rand(11, 3)
    assert form_norm(pullback(g @ h, a) - pullback(h, pullback(g, a))) < 1e-9
    Q = np.eye(7)[:, :6]
    assert pullback(Q, e(1, 2, 7)).is_zero()
    assert pullback(Q, e(1, 2, 3)) == KForm(6, 3, {(0, 1, 2): 1.0})
    with pytest.raises(FrameMismatch):
        pullback(np.eye(6), a)


def test_pullback_matches_brute_force_tensor_pullback():
    phi = e(1, 2, 7) + e(3, 4, 7) + e(5, 6, 7) + e(1, 3, 5) - e(1, 4, 6) - e(2, 3, 6) - e(2, 4, 5)
    h = np.random.default_rng(2).normal(size=(7, 7))
    brute = oracles.g2_stabilizer_brute(h, phi)
    assert abs(brute - float(np.max(np.abs((pullback(h, phi) - phi).to_vector())))) < 1e-9


def test_degree_mismatch_errors():
    with pytest.raises(ValueError):
        e(1) + e(1, 2)
    with pytest.raises(ValueError):
        KForm(7, 8)
    with pytest.raises(ValueError):
        wedge(e(1, 2, 3, 4), e(5, 6, 7, 1))
