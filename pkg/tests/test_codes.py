import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hgpcert.codes import (
    ClassicalCode,
    SearchLimitExceeded,
    canonical_form,
    check_bipuncture,
    distance,
    find_puncture,
    find_simultaneous_bipuncture,
    hamming_code,
    is_puncture,
    is_robust,
    verify_robustness,
)
from hgpcert.ensembles import random_code
from hgpcert.f2core import BitMatrix, cokernel, indicator
from oracles import as_array, brute_min_weight, brute_robust, punctures, row_space_enum, space_masks

DEGENERATE_G = BitMatrix.parse("1000\n0100")
DEGENERATE_H = BitMatrix.parse("0010\n0001")


def brute_is_puncture(M, gamma):
    return punctures(space_masks(row_space_enum(as_array(M))), indicator(gamma))


def test_repetition_code_counts(rep_code):
    assert (rep_code.n, rep_code.m, rep_code.k, rep_code.k_T) == (4, 3, 1, 0)
    assert rep_code.G.to_literal() == "1111"
    assert (rep_code.H @ rep_code.G.T).is_zero()


def test_transposed_repetition_counts(db_code):
    assert (db_code.n, db_code.m, db_code.k, db_code.k_T) == (3, 4, 0, 1)


def test_redundant_row_keeps_k(rep_check):
    dup = ClassicalCode(rep_check.vstack(rep_check.select_rows([0])))
    assert dup.k == 1 and dup.k_T == 1
    assert dup.H_full.nrows == 3


def test_repetition_puncture_facts(rep_code):
    H, G = rep_code.H, rep_code.G
    for j in range(4):
        assert is_puncture(H, [j])
    for pair in itertools.combinations(range(4), 2):
        assert not is_puncture(H, pair)
    for triple in itertools.combinations(range(4), 3):
        assert is_puncture(G, triple)
    assert is_puncture(H, [])


def test_is_puncture_rejects_bad_indices(rep_check):
    with pytest.raises(IndexError):
        is_puncture(rep_check, [4])
    with pytest.raises(ValueError):
        is_puncture(rep_check, [1, 1])


def test_find_puncture_examples(rep_code):
    p = find_puncture(rep_code.H, 1)
    assert p.size == 1 and is_puncture(rep_code.H, p.indices)
    p = find_puncture(rep_code.G, 3)
    assert p.indices == (1, 2, 3)
    assert find_puncture(BitMatrix.identity(3), 1) is None


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 6), st.integers(1, 6), st.data())
def test_no_puncture_beyond_nullity(m, n, data):
    M = BitMatrix.from_rows(data.draw(st.lists(st.integers(0, (1 << n) - 1), min_size=m, max_size=m)), n)
    nullity = n - M.rank
    for e in range(nullity + 1, n + 1):
        assert find_puncture(M, e) is None
        assert not any(brute_is_puncture(M, g) for g in itertools.combinations(range(n), e))


def test_bipuncture_cap():
    M = BitMatrix.zeros(0, 30)
    with pytest.raises(SearchLimitExceeded):
        find_simultaneous_bipuncture(M, M, 15, cap=1000)


def test_bipuncture_examples(rep_code):
    assert find_simultaneous_bipuncture(rep_code.G, rep_code.H, 1) == ((0,), (1,))
    assert find_simultaneous_bipuncture(rep_code.G, rep_code.G, 2) == ((0, 1), (2, 3))


def test_bipuncture_degenerate_is_absent():
    for e in (1, 2):
        assert find_simultaneous_bipuncture(DEGENERATE_G, DEGENERATE_H, e) is None


def test_bipuncture_column_mismatch(rep_code):
    with pytest.raises(ValueError):
        find_simultaneous_bipuncture(rep_code.G, BitMatrix.identity(3), 1)


def test_canonical_form_repetition(rep_code):
    cf = canonical_form(rep_code)
    assert cf.perm == (0, 1, 2, 3)
    assert cf.G.to_literal() == "1111"
    assert cf.J.to_literal() == "111"
    assert (cf.H @ cf.G.T).is_zero()


def test_canonical_form_needs_k(db_code):
    with pytest.raises(ValueError):
        canonical_form(db_code)


def test_canonical_form_identity_prefix():
    code = ClassicalCode(BitMatrix.parse("1110\n1101"))
    cf = canonical_form(code)
    assert cf.perm == tuple(range(4))
    # H' spans the same space as H after undoing the permutation
    assert cf.H.select_columns([cf.perm.index(j) for j in range(4)]).vstack(code.H).rank == code.rank


def test_robust_examples(rep_code):
    cert = is_robust(rep_code)
    assert cert.verdict == "robust"
    assert not check_bipuncture(rep_code, *cert.witness_bipuncture)
    assert not verify_robustness(rep_code, cert)

    degenerate = ClassicalCode(DEGENERATE_H)
    assert degenerate.G == DEGENERATE_G
    cert = is_robust(degenerate)
    assert cert.verdict == "not_robust" and cert.search_exhausted

    ham = hamming_code(3)
    assert is_robust(ham).robust == brute_robust(as_array(ham.H))


def test_robust_k_zero(db_code):
    cert = is_robust(db_code)
    assert cert.verdict == "robust"
    assert cert.witness_bipuncture == ((), ())


def test_robust_certificate_round_trip(rep_code):
    from hgpcert.codes import RobustnessCertificate

    cert = is_robust(rep_code)
    again = RobustnessCertificate.from_dict(cert.to_dict())
    assert again.witness_bipuncture == cert.witness_bipuncture
    assert again.witness_J == cert.witness_J
    assert not verify_robustness(rep_code, again)


def test_verify_robustness_catches_bad_witness(rep_code):
    from hgpcert.codes import RobustnessCertificate

    bad = RobustnessCertificate("robust", 1, ((0,), (0,)))
    assert verify_robustness(rep_code, bad)


def test_distance_examples(rep_code):
    assert distance(rep_code) == 4
    assert distance(ClassicalCode(BitMatrix.zeros(0, 3))) == 1
    assert distance(hamming_code(3)) == 3
    assert distance(hamming_code(3), limit=8) is None


def test_distance_matches_enumeration():
    rng = np.random.default_rng(5)
    for _ in range(30):
        code = random_code(rng, 8)
        if code.k:
            assert distance(code) == brute_min_weight(as_array(code.H))


@st.composite
def small_codes(draw):
    n = draw(st.integers(1, 7))
    m = draw(st.integers(0, 7))
    rows = draw(st.lists(st.integers(0, (1 << n) - 1), min_size=m, max_size=m))
    return ClassicalCode(BitMatrix.from_rows(rows, n))


@settings(max_examples=150, deadline=None)
@given(small_codes())
def test_puncture_of_size_nullity_exists(code):
    M = code.H
    p = find_puncture(M, code.k)
    assert p is not None and is_puncture(M, p.indices)
    assert brute_is_puncture(M, p.indices)


@settings(max_examples=150, deadline=None)
@given(small_codes(), st.data())
def test_is_puncture_matches_enumeration(code, data):
    gamma = data.draw(st.sets(st.integers(0, code.n - 1)))
    assert is_puncture(code.H, gamma) == brute_is_puncture(code.H, gamma)


@settings(max_examples=100, deadline=None)
@given(small_codes(), st.data())
def test_copivot_subsets_puncture_generator(code, data):
    if code.k == 0:
        return
    free = code.G.rref.free_cols
    gamma = data.draw(st.sets(st.sampled_from(free))) if free else set()
    assert is_puncture(code.G, gamma)


@settings(max_examples=100, deadline=None)
@given(small_codes(), st.data())
def test_pivot_punctures_match_cokernel_of_J(code, data):
    if code.k == 0:
        return
    cf = canonical_form(code)
    k = code.k
    local = data.draw(st.sets(st.integers(0, k - 1)))
    gamma = [cf.perm[t] for t in local]
    assert is_puncture(code.G, gamma) == is_puncture(cokernel(cf.J), sorted(local))


@settings(max_examples=100, deadline=None)
@given(small_codes(), st.data())
def test_punctures_ignore_dependent_rows(code, data):
    if code.m == 0:
        return
    extra = data.draw(st.integers(1, (1 << code.m) - 1))
    row = 0
    for i in range(code.m):
        if (extra >> i) & 1:
            row ^= code.H.rows[i]
    H2 = code.H.vstack(BitMatrix.from_rows([row], code.n))
    gamma = data.draw(st.sets(st.integers(0, code.n - 1)))
    assert is_puncture(H2, gamma) == is_puncture(code.H, gamma)


@settings(max_examples=100, deadline=None)
@given(small_codes(), st.data())
def test_small_subsets_puncture_generator(code, data):
    if code.k == 0:
        return
    d = distance(code)
    gamma = data.draw(st.sets(st.integers(0, code.n - 1), max_size=d - 1))
    assert is_puncture(code.G, gamma)


@settings(max_examples=200, deadline=None)
@given(small_codes())
def test_robustness_matches_brute_force(code):
    cert = is_robust(code)
    assert cert.robust == brute_robust(as_array(code.H))
    assert not verify_robustness(code, cert)
