import numpy as np

from miniversal.fields import ComplexField, LaurentField, PadicField
from miniversal.matrices import matrix_norm
from miniversal.sampling import make_rng, random_matrix, random_perturbation, random_scalar


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv("MINIVERSAL_SEED", "42")
    a = make_rng().integers(0, 10**9, 5)
    b = np.random.default_rng(42).integers(0, 10**9, 5)
    assert (a == b).all()
    assert (make_rng(1).integers(0, 10**9, 5) != a).any()


def test_perturbation_norms(field):
    rng = make_rng(0)
    for target in (1e-2, 3e-5):
        X = random_perturbation(field, 3, target, rng)
        nx = matrix_norm(X)
        assert 0 < nx <= target
        if isinstance(field, ComplexField):
            assert nx > target * (1 - 1e-12)
        else:
            # the next power of the uniformizer up would overshoot
            base = field.magnitude_base
            assert nx * base > target


def test_random_matrix_is_deterministic():
    K = PadicField(5)
    A = random_matrix(K, 4, make_rng(3))
    B = random_matrix(K, 4, make_rng(3))
    assert (A - B).is_zero()


def test_random_scalars_nonzero():
    rng = make_rng(0)
    for K in (PadicField(3), LaurentField(), LaurentField(5)):
        for _ in range(20):
            assert not K.is_zero(random_scalar(K, rng))
