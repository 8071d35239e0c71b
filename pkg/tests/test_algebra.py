import itertools

import numpy as np
import pytest

from qwcomplexity import (
    NumericalAssertionError,
    build_generators,
    build_majoranas,
    killing_form,
    penalty_metric,
    structure_constants,
)

I4 = np.eye(4)

GAMMA1 = np.array(
    [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]], dtype=complex
)


def test_majoranas_match_explicit_gamma1():
    m = build_majoranas()
    assert np.array_equal(m.gamma[0], GAMMA1)


def test_majorana_self_anticommutator_is_two():
    m = build_majoranas()
    g1 = m.gamma[0]
    assert np.abs(g1 @ g1 + g1 @ g1 - 2 * I4).max() <= 1e-12


def test_distinct_majoranas_anticommute():
    m = build_majoranas()
    for a, b in itertools.combinations(range(4), 2):
        anti = m.gamma[a] @ m.gamma[b] + m.gamma[b] @ m.gamma[a]
        assert np.abs(anti).max() <= 1e-12


def test_majoranas_hermitian_unitary():
    m = build_majoranas()
    for g in m.gamma:
        assert np.abs(g - g.conj().T).max() <= 1e-12
        assert np.abs(g @ g.conj().T - I4).max() <= 1e-12


def test_generator_five_is_minus_sigma3_tensor_identity():
    basis = build_generators(build_majoranas())
    expected = np.diag([-1.0, -1.0, 1.0, 1.0]).astype(complex)
    assert np.abs(basis.T[4] - expected).max() <= 1e-12


def test_generator_weights_partition():
    basis = build_generators(build_majoranas())
    assert basis.weight[14] == 4
    counts = {q: int(np.sum(basis.weight == q)) for q in (1, 2, 3, 4)}
    assert counts == {1: 4, 2: 6, 3: 4, 4: 1}


def test_generators_hermitian_traceless_orthonormal(basis):
    for t in basis.T:
        assert np.abs(t - t.conj().T).max() <= 1e-12
        assert abs(np.trace(t)) <= 1e-12
    gram = np.einsum("aij,bji->ab", basis.T, basis.T)
    assert np.abs(gram - 4 * np.eye(15)).max() <= 1e-12


def test_structure_constant_1_2_5(sc):
    assert sc.f[0, 1, 4] == pytest.approx(-2.0, abs=1e-12)
    assert sc.f[1, 0, 4] == pytest.approx(2.0, abs=1e-12)
    assert sc.f[0, 0, 4] == pytest.approx(0.0, abs=1e-12)


def test_structure_constants_antisymmetric(sc):
    assert np.abs(sc.f + np.transpose(sc.f, (1, 0, 2))).max() == 0.0


def test_structure_constants_reproduce_commutators(basis, sc):
    # [Ti, Tj] = i f_ij^k Tk
    comm = np.einsum("aij,bjk->abik", basis.T, basis.T) - np.einsum(
        "bij,ajk->abik", basis.T, basis.T
    )
    rebuilt = 1j * np.einsum("abk,kij->abij", sc.f, basis.T)
    assert np.abs(comm - rebuilt).max() <= 1e-10


def test_jacobi_identity(sc):
    f = sc.f
    jac = (
        np.einsum("ijm,mkl->ijkl", f, f)
        + np.einsum("jkm,mil->ijkl", f, f)
        + np.einsum("kim,mjl->ijkl", f, f)
    )
    assert np.abs(jac).max() <= 1e-10


def test_killing_form_is_identity(sc):
    K = killing_form(sc)
    assert np.abs(K - np.eye(15)).max() <= 1e-10


def test_killing_form_rejects_broken_f(sc):
    import dataclasses

    broken = dataclasses.replace(sc, f=2.0 * sc.f)
    with pytest.raises(NumericalAssertionError):
        killing_form(broken)


def test_penalty_metric_k2():
    p = penalty_metric(2, 10.0)
    assert p.c[4] == 1.0          # weight-2 generator stays easy
    assert p.c[10] == 11.0        # weight-3 generator pays 1 + mu
    assert np.array_equal(p.G, np.diag(p.c))


def test_penalty_metric_k4_all_easy():
    p = penalty_metric(4, 12345.0)
    assert np.all(p.c == 1.0)


@pytest.mark.parametrize("bad_k", [0, 5, -1])
def test_penalty_metric_rejects_bad_k(bad_k):
    with pytest.raises(ValueError):
        penalty_metric(bad_k, 1.0)


def test_penalty_metric_rejects_negative_mu():
    with pytest.raises(ValueError):
        penalty_metric(2, -0.5)
