import random

from hypothesis import given, strategies as st

from pdcbench.algebra import sample_algebras
from pdcbench.complexes import is_quasi_isomorphism
from pdcbench.derived import ext
from pdcbench.modules import (
    are_isomorphic,
    direct_sum,
    dual,
    indecomposable_injective,
    indecomposable_projective,
    is_injective,
    is_projective,
    regular_module,
    simple_modules,
)
from pdcbench.resolutions import (
    coresolution_dimension,
    detect_coperiodicity,
    detect_periodicity,
    injective_coresolution,
    injective_dimension,
    projective_dimension,
    projective_resolution,
    syzygy,
)
from pdcbench.samples import modules_up_to_dim, random_complex, random_module

import pytest

ALGS = sample_algebras()
seeds = st.integers(0, 10**6)
names = st.sampled_from(sorted(ALGS))


def test_window_must_be_positive(D):
    with pytest.raises(ValueError):
        projective_resolution(regular_module(D), 0)


def test_projective_resolves_to_itself(sample_algebra):
    for i in range(len(sample_algebra.primitive_idempotents())):
        P = indecomposable_projective(sample_algebra, i)
        res = projective_resolution(P, 3)
        assert res.complete and res.length() == 0
        assert res.complex.support() == (0, 0)


def test_simple_over_dual_numbers_is_periodic(D):
    s = simple_modules(D)[0]
    res = projective_resolution(s, 3)
    assert not res.complete
    assert [res.complex[n].dim for n in range(-3, 1)] == [2, 2, 2, 2]
    for z in res.syzygy_sequence():
        assert z.dim == 1
    cert = detect_periodicity(s, 4)
    assert cert is not None and (cert.offset, cert.period) == (0, 1)
    assert cert.verify()


def test_s1_over_kA2_has_length_one(A2):
    s1 = simple_modules(A2)[0]
    res = projective_resolution(s1, 3)
    assert res.complete and res.length() == 1
    assert are_isomorphic(res.complex[-1], indecomposable_projective(A2, 1))
    assert are_isomorphic(res.complex[0], indecomposable_projective(A2, 0))


def test_no_periodicity_over_hereditary(A2):
    for m in modules_up_to_dim(A2, 3):
        assert detect_periodicity(m, 5) is None


def test_injective_coresolves_to_itself(sample_algebra):
    for i in range(len(sample_algebra.primitive_idempotents())):
        J = indecomposable_injective(sample_algebra, i)
        co = injective_coresolution(J, 3)
        assert co.complete and co.length() == 0


def test_simple_coresolution_over_dual_numbers(D):
    s = simple_modules(D)[0]
    co = injective_coresolution(s, 3)
    assert not co.complete
    assert [co.complex[n].dim for n in range(0, 4)] == [2, 2, 2, 2]
    assert detect_coperiodicity(s, 4) is not None


def test_coresolution_length_over_kA2(A2):
    for m in modules_up_to_dim(A2, 3):
        assert injective_dimension(m) <= 1
        assert projective_dimension(m) <= 1


@given(seeds, names)
def test_resolution_contract(seed, name):
    alg = ALGS[name]
    m = random_module(alg, random.Random(seed), 4)
    res = projective_resolution(m, 3)
    assert is_quasi_isomorphism(res.augmentation, res.trusted_from, None)
    assert all(is_projective(res.complex[n]) for n in res.complex.degrees)
    co = injective_coresolution(m, 3)
    assert is_quasi_isomorphism(co.coaugmentation, None, co.trusted_to)
    assert all(is_injective(co.complex[n]) for n in co.complex.degrees)


@given(seeds, names)
def test_complex_resolution_contract(seed, name):
    c = random_complex(ALGS[name], random.Random(seed))
    res = projective_resolution(c, 3)
    assert is_quasi_isomorphism(res.augmentation, res.trusted_from, None)
    assert all(is_projective(res.complex[n]) for n in res.complex.degrees)
    sup = c.support()
    if sup is not None:
        assert res.complex.hi <= sup[1]
        assert res.lowest >= sup[0] - 3


@given(seeds, names)
def test_resolution_of_direct_sum(seed, name):
    rng = random.Random(seed)
    alg = ALGS[name]
    m, n = random_module(alg, rng, 3), random_module(alg, rng, 3)
    rs = projective_resolution(direct_sum([m, n]), 3).complex
    rm = projective_resolution(m, 3).complex
    rn = projective_resolution(n, 3).complex
    for k in range(-3, 1):
        assert rs[k].dim == rm[k].dim + rn[k].dim


def test_periodicity_matches_ext(D):
    s = simple_modules(D)[0]
    cert = detect_periodicity(s, 4)
    for x in (s, regular_module(D)):
        dims = [ext(s, x, n, window=8) for n in range(0, 6)]
        for n in range(cert.offset + 1, 6 - cert.period):
            assert dims[n] == dims[n + cert.period]


def test_syzygy_of_simple_is_simple(D):
    s = simple_modules(D)[0]
    assert are_isomorphic(syzygy(s, 1), s)
    assert are_isomorphic(syzygy(s, 3), s)


def test_coresolution_dimension_examples(D, A2):
    s = simple_modules(D)[0]
    assert coresolution_dimension(s, lambda m: m.dim == 1, 3) == 0
    J = regular_module(D)
    assert coresolution_dimension(J, is_injective, 3) == 0
    assert coresolution_dimension(s, is_injective, 3) is None
    for m in modules_up_to_dim(A2, 3):
        assert coresolution_dimension(m, is_injective, 3) <= 1


def test_dual_of_projective_resolution_is_coresolution(sample_algebra):
    for m in modules_up_to_dim(sample_algebra, 2):
        co = injective_coresolution(m, 3)
        res = projective_resolution(dual(m), 3, "right")
        assert [co.complex[n].dim for n in range(0, 3)] == [res.complex[-n].dim for n in range(0, 3)]
