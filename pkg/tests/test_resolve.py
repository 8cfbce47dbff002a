import numpy as np
import pytest

from fiberres.algebra import (
    MonomialQuotientPresentation,
    build_monomial_quotient,
    fiber_product,
)
from fiberres.gmodule import (
    AlgMatrix,
    FreeModule,
    algebra_as_module,
    cokernel_module,
    residue_module,
    restrict_to_fiber,
)
from fiberres.resolve import (
    FreeResolution,
    WindowError,
    betti_table_text,
    minimal_presentation,
    minimal_resolution,
    syzygy_module,
    verify_complex,
)

P = 32003


def mono(vars_degs, rels, cap=8, commutative=True):
    names = [v for v, _ in vars_degs]
    degs = [d for _, d in vars_degs]
    return build_monomial_quotient(
        P, cap, MonomialQuotientPresentation(names, degs, rels, commutative)
    )


def test_residue_field_over_dual_numbers():
    A = mono([("x", 1)], ["x^2"], cap=7)
    res = minimal_resolution(A, residue_module(A), 6)
    assert [res.rank(i) for i in range(7)] == [1] * 7
    assert res.betti() == {(i, i): 1 for i in range(7)}
    assert verify_complex(res).ok


def test_residue_field_over_cubic_hypersurface():
    # differentials alternate between the variable and its square, so
    # generator degrees step by 1, 2, 1, 2, ...
    A = mono([("x", 1)], ["x^3"], cap=10)
    res = minimal_resolution(A, residue_module(A), 6)
    assert [res.rank(i) for i in range(7)] == [1] * 7
    assert [res.gen_degrees(i)[0] for i in range(7)] == [0, 1, 3, 4, 6, 7, 9]
    assert verify_complex(res).ok


def test_polynomial_ring_finite_resolution():
    A = mono([("x", 1)], [], cap=6)
    res = minimal_resolution(A, residue_module(A), 4)
    assert [res.rank(i) for i in range(5)] == [1, 1, 0, 0, 0]
    assert verify_complex(res).ok


def test_koszul_complex_two_variables():
    A = mono([("x", 1), ("y", 1)], [], cap=6)
    res = minimal_resolution(A, residue_module(A), 4)
    assert [res.rank(i) for i in range(5)] == [1, 2, 1, 0, 0]
    assert res.betti() == {(0, 0): 1, (1, 1): 2, (2, 2): 1}
    assert verify_complex(res).ok


def test_hypersurface_xy_periodic_tail():
    A = mono([("x", 1), ("y", 1)], ["x*y"], cap=8)
    res = minimal_resolution(A, residue_module(A), 6)
    assert [res.rank(i) for i in range(7)] == [1, 2, 2, 2, 2, 2, 2]
    assert verify_complex(res).ok


def test_square_zero_fiber_product_doubles():
    S = mono([("x", 1)], ["x^2"])
    T = mono([("y", 1)], ["y^2"])
    R = fiber_product(S, T)
    res = minimal_resolution(R, residue_module(R), 6)
    assert [res.rank(i) for i in range(7)] == [1, 2, 4, 8, 16, 32, 64]
    assert res.betti() == {(0, 0): 1, **{(i, i): 2**i for i in range(1, 7)}}
    assert verify_complex(res).ok


def test_line_module_over_square_zero_pair():
    S = mono([("x", 1)], ["x^2"])
    T = mono([("y", 1)], ["y^2"])
    R = fiber_product(S, T)
    el = R.element_from_string("x+y")
    F0, F1 = FreeModule(R, [0]), FreeModule(R, [1])
    L = cokernel_module(AlgMatrix(R, F1, F0, {(0, 0): el}))
    res = minimal_resolution(R, L, 6)
    assert [res.rank(i) for i in range(7)] == [1, 1, 2, 4, 8, 16, 32]
    assert verify_complex(res).ok


def test_module_restricted_from_factor():
    S = mono([("x", 1)], ["x^3"])
    T = mono([("y", 1)], ["y^2"])
    R = fiber_product(S, T)
    M = restrict_to_fiber(R, algebra_as_module(S), "S")
    res = minimal_resolution(R, M, 4)
    assert res.rank(0) == 1
    assert verify_complex(res).ok
    # first syzygy is the T-side ideal: q = (y) has one generator
    assert res.rank(1) == 1 and res.gen_degrees(1) == [1]


def test_window_error_beyond_cap():
    A = mono([("x", 1)], ["x^2"], cap=5)
    with pytest.raises(WindowError):
        minimal_resolution(A, residue_module(A), 3, dmax=6)


def test_minimal_presentation():
    S = mono([("x", 1)], ["x^2"])
    T = mono([("y", 1)], ["y^2"])
    R = fiber_product(S, T)
    phi, res = minimal_presentation(R, residue_module(R))
    assert phi.src.rank == 2 and phi.tgt.rank == 1
    assert sorted(el.degree for el in phi.entries.values()) == [1, 1]


def test_syzygy_module_of_dual_numbers():
    A = mono([("x", 1)], ["x^2"], cap=6)
    res = minimal_resolution(A, residue_module(A), 2)
    syz = syzygy_module(res, 1)
    assert [syz.dim(n) for n in range(3)] == [0, 1, 0]
    x = A.generator("x")
    _, v = syz.act(x, 1, [1])
    assert v.shape == (0,)


def test_verify_catches_nonzero_composition():
    A = mono([("x", 1)], ["x^3"], cap=6)
    k = residue_module(A)
    res = minimal_resolution(A, k, 2)
    x = A.generator("x")
    bad_diffs = [None, res.diffs[1],
                 AlgMatrix(A, FreeModule(A, [2]), res.frees[1], {(0, 0): x})]
    bad = FreeResolution(A, k, 2, res.dmax, [res.frees[0], res.frees[1],
                                             bad_diffs[2].src],
                         bad_diffs, res.cover, res.kernel_bases)
    rep = verify_complex(bad)
    assert not rep.ok
    assert any("o d2" in c["name"] and not c["ok"] for c in rep.checks)


def test_verify_catches_inexactness():
    # over k[x]/(x^4), x^3 followed by x^3 squares to zero but misses
    # most of the kernel
    A = mono([("x", 1)], ["x^4"], cap=8)
    k = residue_module(A)
    res = minimal_resolution(A, k, 2)
    F1b, F2b = FreeModule(A, [3]), FreeModule(A, [6])
    cube = A.element_from_string("x^3")
    d1 = AlgMatrix(A, F1b, res.frees[0], {(0, 0): cube})
    d2 = AlgMatrix(A, F2b, F1b, {(0, 0): cube})
    bad = FreeResolution(A, k, 2, res.dmax, [res.frees[0], F1b, F2b],
                         [None, d1, d2], res.cover, res.kernel_bases)
    rep = verify_complex(bad)
    assert not rep.ok
    assert any(c["name"] == "exactness at step 0" and not c["ok"] for c in rep.checks)


def test_verify_catches_nonminimality():
    A = mono([("x", 1)], ["x^2"], cap=6)
    k = residue_module(A)
    res = minimal_resolution(A, k, 1)
    F1b = FreeModule(A, [0])
    d1 = AlgMatrix(A, F1b, res.frees[0], {(0, 0): A.unit()})
    bad = FreeResolution(A, k, 1, res.dmax, [res.frees[0], F1b], [None, d1],
                         res.cover, res.kernel_bases)
    rep = verify_complex(bad)
    assert any(c["name"] == "minimality step 1" and not c["ok"] for c in rep.checks)


def test_poincare_series_and_betti_text():
    S = mono([("x", 1)], ["x^2"])
    T = mono([("y", 1)], ["y^2"])
    R = fiber_product(S, T)
    res = minimal_resolution(R, residue_module(R), 4)
    ps = res.poincare_series()
    assert ps.coeffs == [1, 2, 4, 8, 16] and ps.truncation == 4
    text = betti_table_text(res.betti(), 4)
    assert "16" in text and text.count("\n") >= 4


def test_resolution_determinism():
    S = mono([("x", 1)], ["x^3"])
    T = mono([("y", 1)], ["y^2"])
    R = fiber_product(S, T)
    r1 = minimal_resolution(R, residue_module(R), 5)
    r2 = minimal_resolution(R, residue_module(R), 5)
    assert r1.betti() == r2.betti()
    for i in range(1, 6):
        assert r1.diffs[i].entry_strings() == r2.diffs[i].entry_strings()
