import numpy as np
import pytest
from hypothesis import given, strategies as st

import biconsurf as bc
from biconsurf.ambient import EUCLIDEAN3, EUCLIDEAN4, LORENTZ4

E4 = np.eye(4)
E3 = np.eye(3)

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)


class TestInner:
    def test_euclidean_unit(self):
        assert EUCLIDEAN4.inner(E4[0], E4[0]) == 1.0

    def test_lorentz_timelike(self):
        assert LORENTZ4.inner(E4[3], E4[3]) == -1.0

    def test_lorentz_null(self):
        v = np.array([1.0, 0.0, 0.0, 1.0])
        assert LORENTZ4.inner(v, v) == 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(bc.UsageError):
            EUCLIDEAN4.inner(np.ones(3), np.ones(4))

    @given(st.lists(finite, min_size=4, max_size=4),
           st.lists(finite, min_size=4, max_size=4),
           st.lists(finite, min_size=4, max_size=4),
           finite)
    def test_bilinear_symmetric(self, a, b, c, lam):
        a, b, c = map(np.array, (a, b, c))
        for sig in (EUCLIDEAN4, LORENTZ4):
            assert sig.inner(a, b) == sig.inner(b, a)
            lhs = sig.inner(lam * a + c, b)
            rhs = lam * sig.inner(a, b) + sig.inner(c, b)
            scale = 1.0 + abs(lam) * np.abs(a).max() * np.abs(b).max() \
                + np.abs(c).max() * np.abs(b).max()
            assert abs(lhs - rhs) <= 1e-12 * scale

    def test_broadcasting(self):
        pts = np.random.default_rng(0).normal(size=(5, 7, 4))
        out = LORENTZ4.inner(pts, pts)
        assert out.shape == (5, 7)


class TestSpaceForm:
    def test_curvature_to_ambient(self):
        assert bc.R3.ambient.dim == 3 and bc.R3.ambient.timelike == 0
        assert bc.S3.ambient.dim == 4 and bc.S3.ambient.timelike == 0
        assert bc.H3.ambient.dim == 4 and bc.H3.ambient.timelike == 1

    def test_on_model_apex(self):
        assert bc.H3.on_model(np.array([0.0, 0.0, 0.0, 1.0]))

    def test_on_model_sphere(self):
        assert bc.S3.on_model(np.array([1.0, 0.0, 0.0, 0.0]))

    def test_null_vector_off_model(self):
        assert not bc.H3.on_model(np.array([1.0, 0.0, 0.0, 1.0]))

    def test_lower_sheet_rejected(self):
        assert not bc.H3.on_model(np.array([0.0, 0.0, 0.0, -1.0]))

    def test_flat_has_no_constraint(self):
        with pytest.raises(bc.UsageError):
            bc.R3.on_model(np.zeros(3))

    def test_ricci_normal(self):
        assert bc.S3.ricci_normal == 2.0
        assert bc.H3.ricci_normal == -2.0

    def test_bad_curvature(self):
        with pytest.raises(bc.UsageError):
            bc.space_form(2)


class TestComplement:
    def test_euclidean3(self):
        n = bc.orthonormal_complement(EUCLIDEAN3, [E3[0], E3[1]], E3[2])
        assert np.allclose(n, E3[2])

    def test_euclidean4_flipped(self):
        n = bc.orthonormal_complement(EUCLIDEAN4, [E4[0], E4[1], E4[2]], -E4[3])
        assert np.allclose(n, -E4[3])

    def test_lorentz_gram_solve(self):
        # hand solve: n must satisfy n1 = n2 = 0 and -n4 = 0, |<n,n>| = 1
        n = bc.orthonormal_complement(LORENTZ4, [E4[0], E4[1], E4[3]], E4[2])
        assert np.allclose(n, E4[2])

    def test_lorentz_timelike_complement(self):
        # the convention asks for positive Lorentz inner product with e4,
        # so a timelike complement comes back as -e4
        n = bc.orthonormal_complement(LORENTZ4, [E4[0], E4[1], E4[2]], E4[3])
        assert np.allclose(n, -E4[3])
        assert LORENTZ4.inner(n, n) == -1.0
        n2 = bc.orthonormal_complement(LORENTZ4, [E4[0], E4[1], E4[2]], -E4[3])
        assert np.allclose(n2, E4[3])

    def test_degenerate_span(self):
        with pytest.raises(bc.DegenerateSpanError):
            bc.orthonormal_complement(EUCLIDEAN3, [E3[0], E3[0]], E3[2])

    def test_lorentz_null_span(self):
        null = E4[2] + E4[3]
        with pytest.raises(bc.DegenerateSpanError):
            bc.orthonormal_complement(LORENTZ4, [E4[0], E4[1], null], E4[2])

    def test_wrong_count(self):
        with pytest.raises(bc.UsageError):
            bc.orthonormal_complement(EUCLIDEAN4, [E4[0], E4[1]], E4[3])

    @pytest.mark.parametrize("sig", [EUCLIDEAN3, EUCLIDEAN4, LORENTZ4])
    def test_random_spans_orthogonal(self, sig):
        rng = np.random.default_rng(42)
        for _ in range(50):
            vs = [rng.normal(size=sig.dim) for _ in range(sig.dim - 1)]
            try:
                n = bc.orthonormal_complement(sig, vs, sig.metric * 0 + 1.0)
            except bc.DegenerateSpanError:
                continue
            scale = max(np.linalg.norm(v) for v in vs)
            for v in vs:
                assert abs(sig.inner(n, v)) <= 1e-12 * scale
            assert abs(abs(sig.inner(n, n)) - 1.0) <= 1e-12

    def test_batched(self):
        rng = np.random.default_rng(7)
        a = rng.normal(size=(10, 4))
        b = rng.normal(size=(10, 4))
        c = rng.normal(size=(10, 4))
        n = bc.orthonormal_complement(LORENTZ4, [a, b, c], E4[3])
        assert n.shape == (10, 4)
        assert np.max(np.abs(LORENTZ4.inner(n, a))) < 1e-10


def test_tangency_of_model_tangents():
    # vectors built tangent to the quadric stay orthogonal to the position
    rng = np.random.default_rng(3)
    p = rng.normal(size=4)
    p /= np.linalg.norm(p)
    for _ in range(20):
        v = rng.normal(size=4)
        t = v - EUCLIDEAN4.inner(v, p) * p
        assert abs(EUCLIDEAN4.inner(t, p)) < 1e-12 * np.linalg.norm(v)


def test_signature_validation():
    with pytest.raises(bc.UsageError):
        bc.Signature(4, timelike=2)
    with pytest.raises(bc.UsageError):
        bc.Signature(3, timelike=1)
    with pytest.raises(bc.UsageError):
        bc.Signature(5)
