import numpy as np
import pytest

from grusskit.dilation import kraus_from_choi, main_theorem_trace, russo_dye_decompose, stinespring
from grusskit.errors import DomainError, PreconditionError
from grusskit.matcore import dagger, is_unitary, op_norm, random_ginibre
from grusskit.posmaps import (
    apply,
    identity_map,
    random_unital_cp,
    reduction_map,
    trace_map,
    transpose_map,
)

COUNTER_A = np.array([[1.0, 3.0], [3.0, 3.0]])
COUNTER_B = np.diag([1.0, 3.0])


def test_kraus_examples():
    ks = kraus_from_choi(identity_map(3))
    assert len(ks) == 1
    K = ks[0]
    # Identity up to a global phase.
    assert op_norm(dagger(K) @ K - np.eye(3)) <= 1e-12
    assert abs(abs(K[0, 0]) - 1) <= 1e-12 and op_norm(K - K[0, 0] * np.eye(3)) <= 1e-12
    assert len(kraus_from_choi(trace_map(3))) == 9
    with pytest.raises(DomainError, match="Choi matrix not PSD"):
        kraus_from_choi(transpose_map(2))


def test_kraus_reproduces_map():
    rng = np.random.default_rng(1)
    phi = random_unital_cp(3, 2, 4)
    ks = kraus_from_choi(phi)
    assert len(ks) == 2
    for _ in range(10):
        X = random_ginibre(3, rng)
        assert op_norm(sum(K @ X @ dagger(K) for K in ks) - apply(phi, X)) <= 1e-10


def test_stinespring_examples():
    dil = stinespring(identity_map(2))
    assert dil.env_dim == 1
    assert op_norm(dagger(dil.v) @ dil.v - np.eye(2)) <= 1e-12
    dil = stinespring(trace_map(2))
    assert dil.env_dim == 4
    X = random_ginibre(2, 3)
    assert op_norm(dil.compress(X) - np.trace(X) / 2 * np.eye(2)) <= 1e-12
    with pytest.raises(DomainError):
        stinespring(transpose_map(3))
    with pytest.raises(PreconditionError):
        stinespring(identity_map(2).scaled(2.0))


def test_stinespring_random():
    rng = np.random.default_rng(2)
    for s in range(10):
        phi = random_unital_cp(2 + s % 3, 1 + s % 3, s)
        dil = stinespring(phi)
        assert op_norm(dagger(dil.v) @ dil.v - np.eye(phi.dim_out)) <= 1e-10
        for _ in range(5):
            X = random_ginibre(phi.dim_in, rng)
            assert op_norm(apply(phi, X) - dil.compress(X)) <= 1e-10


def test_representation_is_homomorphism():
    dil = stinespring(random_unital_cp(3, 2, 0))
    x, y = random_ginibre(3, 1), random_ginibre(3, 2)
    assert op_norm(dil.represent(x @ y) - dil.represent(x) @ dil.represent(y)) <= 1e-12
    assert op_norm(dil.represent(dagger(x)) - dagger(dil.represent(x))) <= 1e-15


def test_russo_dye_examples():
    dec = russo_dye_decompose(np.eye(3))
    assert dec.scale == 1.0 and dec.weights == (0.5, 0.5)
    for u in dec.unitaries:
        assert op_norm(u - np.eye(3)) <= 1e-12
    dec = russo_dye_decompose(0.5 * np.eye(2), scale=1.0)
    w = np.exp(1j * np.pi / 3)
    assert op_norm(dec.unitaries[0] - w * np.eye(2)) <= 1e-12
    assert op_norm(dec.unitaries[1] - np.conj(w) * np.eye(2)) <= 1e-12
    assert op_norm(dec.reconstruct() - 0.5 * np.eye(2)) <= 1e-15
    # Default scale is the norm, which turns this into the identity.
    assert russo_dye_decompose(0.5 * np.eye(2)).scale == 0.5
    with pytest.raises(DomainError):
        russo_dye_decompose(2 * np.eye(2), scale=1.0)


def test_russo_dye_zero_and_random():
    dec = russo_dye_decompose(np.zeros((3, 3)))
    assert dec.scale == 1.0
    assert op_norm(dec.reconstruct()) <= 1e-15
    for s in range(30):
        a = random_ginibre(2 + s % 3, s) * (0.1, 1.0, 10.0)[s % 3]
        dec = russo_dye_decompose(a)
        assert dec.scale == pytest.approx(op_norm(a))
        assert op_norm(dec.reconstruct() - a) <= 1e-10 * max(1.0, dec.scale)
        assert all(is_unitary(u) for u in dec.unitaries)


def test_trace_two_positive_holds():
    for s in range(10):
        rng = np.random.default_rng(s)
        a, b = random_ginibre(3, rng), random_ginibre(3, rng)
        for phi in (reduction_map(3), random_unital_cp(3, 2, s)):
            rep = main_theorem_trace(phi, a, b)
            assert rep.all_hold, rep.failures()
            stages = {l.stage for l in rep.links}
            assert stages == {"norm", "centered"}


def test_trace_norm_step_for_identity():
    rep = main_theorem_trace(identity_map(2), COUNTER_A, COUNTER_B)
    final = [l for l in rep.links if l.stage == "norm"][-1]
    assert final.left == 0.0 and final.right == pytest.approx(op_norm(COUNTER_A) * op_norm(COUNTER_B))


def test_trace_localizes_transpose_failure():
    a = np.zeros((3, 3)); a[:2, :2] = COUNTER_A
    b = np.zeros((3, 3)); b[:2, :2] = COUNTER_B
    rep = main_theorem_trace(transpose_map(3), a, b)
    assert not rep.all_hold
    failed = {(l.stage, l.label) for l in rep.failures()}
    assert ("centered", "defect <= radius(a) radius(b)") in failed
    assert all(l.requires == "2-positive" for l in rep.failures())
    assert any(l.label == "unitary variance bound" for l in rep.failures())


def test_trace_requires_unital():
    with pytest.raises(PreconditionError):
        main_theorem_trace(trace_map(2).scaled(2.0), np.eye(2), np.eye(2))
