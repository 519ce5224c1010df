import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hgpcert.codes import ClassicalCode, hamming_code
from hgpcert.css import is_logical, is_trivial
from hgpcert.ensembles import random_code
from hgpcert.f2core import BitMatrix, indicator
from hgpcert.hgp import (
    DecompositionError,
    HgpCode,
    TautBudgetExceeded,
    decompose_taut,
    logical_basis,
    logical_qubit_count,
    product,
    sector,
    taut_operators,
)


def test_surface_code_dimensions(surface):
    assert surface.N == 25
    assert (surface.n_vertical, surface.n_horizontal) == (16, 9)
    assert surface.hx.shape == (12, 25) and surface.hz.shape == (12, 25)
    assert surface.k == 1
    assert sector(surface) == "vertical_restricted"


def test_surface_logicals_are_taut_lines(surface):
    basis = logical_basis(surface)
    gz = basis.punctures["gamma_Zv"]
    gx = basis.punctures["gamma_Xv"]
    assert len(gz) == len(gx) == 1
    j, i = gz[0], gx[0]
    assert basis.lz.rows == (indicator(surface.vertical_index(r, j) for r in range(4)),)
    assert basis.lx.rows == (indicator(surface.vertical_index(i, c) for c in range(4)),)
    assert basis.punctures["gamma_Zh"] == () and basis.punctures["gamma_Xh"] == ()


def test_toric_code_has_both_sectors(toric):
    assert toric.k == 2
    assert sector(toric) == "both_sectors"
    assert (toric.hx @ toric.hz.T).is_zero()
    basis = logical_basis(toric)
    assert basis.lz.nrows == basis.lx.nrows == 2


def test_trivial_factor_product():
    one = ClassicalCode(BitMatrix.zeros(0, 1))
    code = product(one, one)
    assert code.N == 0 and code.k == 0
    assert sector(code) == "trivial"
    basis = logical_basis(code)
    assert basis.lz.nrows == 0


def test_orthogonality_for_random_pairs():
    rng = np.random.default_rng(4)
    for _ in range(40):
        code = product(random_code(rng, 6), random_code(rng, 6))
        assert (code.hx @ code.hz.T).is_zero()
        assert logical_qubit_count(code) == code.k


def test_grid_round_trip(surface):
    for q in range(surface.N):
        block, a, b = surface.locate(q)
        back = surface.vertical_index(a, b) if block == "v" else surface.horizontal_index(a, b)
        assert back == q
    with pytest.raises(IndexError):
        surface.locate(25)
    with pytest.raises(IndexError):
        surface.vertical_index(4, 0)


def test_serialization_round_trip(surface):
    again = HgpCode.from_dict(surface.to_dict())
    assert again.hx == surface.hx and again.hz == surface.hz
    data = surface.to_dict()
    data["m_b"] = 5
    with pytest.raises(ValueError):
        HgpCode.from_dict(data)


@st.composite
def small_codes(draw, max_n=5):
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(0, max_n))
    return ClassicalCode(BitMatrix.from_rows(draw(st.lists(st.integers(0, (1 << n) - 1), min_size=m, max_size=m)), n))


@settings(max_examples=80, deadline=None)
@given(small_codes(), small_codes())
def test_basis_invariants(A, B):
    code = product(A, B)
    basis = logical_basis(code)
    assert (code.hx @ basis.lz.T).is_zero()
    assert (code.hz @ basis.lx.T).is_zero()
    assert (basis.lx @ basis.lz.T).rank == code.k


def test_taut_counts_surface(surface):
    ops = taut_operators(surface)
    kinds = [op.kind for op in ops]
    assert kinds.count("Z-vertical") == 4 and kinds.count("X-vertical") == 4
    for op in ops:
        assert is_logical(surface, op.vector, op.pauli)


def test_taut_budget():
    with pytest.raises(TautBudgetExceeded) as info:
        taut_operators(product(hamming_code(3), hamming_code(3).transpose()), budget=3)
    assert info.value.partial


def test_decompose_basis_rows(surface):
    basis = logical_basis(surface)
    pieces = decompose_taut(surface, basis.lz.rows[0], "Z")
    assert len(pieces) == 1 and pieces[0].vector == basis.lz.rows[0]
    pieces = decompose_taut(surface, basis.lx.rows[0], "X")
    assert len(pieces) == 1 and pieces[0].vector == basis.lx.rows[0]


def test_decompose_recombines_modulo_stabilizers():
    rng = np.random.default_rng(9)
    code = product(hamming_code(3), hamming_code(3).transpose())
    basis = logical_basis(code)
    for _ in range(20):
        for pauli, L, stab in (("Z", basis.lz, code.hz), ("X", basis.lx, code.hx)):
            coeffs = rng.integers(0, 2, size=L.nrows)
            v = 0
            for c, r in zip(coeffs, L.rows):
                if c:
                    v ^= r
            for c, r in zip(rng.integers(0, 2, size=stab.nrows), stab.rows):
                if c:
                    v ^= r
            pieces = decompose_taut(code, v, pauli, allow_horizontal=True)
            total = 0
            for p in pieces:
                assert total & p.vector == 0
                total |= p.vector
            assert is_trivial(code, total ^ v, pauli)


def test_decompose_rejections(surface, toric):
    with pytest.raises(DecompositionError):
        decompose_taut(toric, 1, "Z")
    with pytest.raises(DecompositionError):
        decompose_taut(surface, 1, "Z")
    with pytest.raises(DecompositionError):
        decompose_taut(surface, 1 << 20, "Z")
    with pytest.raises(ValueError):
        decompose_taut(surface, 0, "Y")
