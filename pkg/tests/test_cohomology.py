import numpy as np
import pytest

from fiberres.algebra import (
    MonomialQuotientPresentation,
    build_monomial_quotient,
    fiber_product,
)
from fiberres.cohomology import (
    combined_residue_resolution,
    comparison_chain_map,
    depth_certificate,
    depth_upper_bound,
    ext_bidegree_dim,
    socle_dims,
    syzygy_split,
    verify_ext_sequence_L,
    verify_fiber_module_ext_sequence,
)
from fiberres.extalg import (
    ExtError,
    ext_algebra,
    ext_module,
    free_product,
    free_product_module,
)
from fiberres.gmodule import (
    AlgMatrix,
    FreeModule,
    algebra_as_module,
    cokernel_module,
    free_module_table,
    residue_module,
)
from fiberres.resolve import minimal_resolution, verify_complex

P = 32003


def mono(vars_degs, rels, cap=8, commutative=True):
    names = [v for v, _ in vars_degs]
    degs = [d for _, d in vars_degs]
    return build_monomial_quotient(
        P, cap, MonomialQuotientPresentation(names, degs, rels, commutative)
    )


@pytest.fixture(scope="module")
def square_zero_pair():
    S = mono([("x", 1)], ["x^2"])
    T = mono([("y", 1)], ["y^2"])
    return S, T, fiber_product(S, T)


def line_quotient(R):
    phi = AlgMatrix(R, FreeModule(R, [1]), FreeModule(R, [0]),
                    {(0, 0): R.element_from_string("x+y")})
    return cokernel_module(phi)


# -- syzygy splitting ---------------------------------------------------------


def test_syzygy_split_line_quotient(square_zero_pair):
    _, _, R = square_zero_pair
    split = syzygy_split(R, line_quotient(R))
    assert split.ok
    dims = split.dims()
    assert dims[2] == (2, 1, 1)
    assert all(d == (0, 0, 0) for i, d in enumerate(dims) if i != 2)
    assert [split.m_module.dim(n) for n in range(4)] == [0, 0, 1, 0]
    assert [split.n_module.dim(n) for n in range(4)] == [0, 0, 1, 0]


def test_syzygy_split_residue_field(square_zero_pair):
    _, _, R = square_zero_pair
    split = syzygy_split(R, residue_module(R))
    assert split.ok
    assert split.dims()[2] == (4, 2, 2)
    assert [split.m_module.dim(n) for n in range(4)] == [0, 0, 2, 0]
    assert [split.n_module.dim(n) for n in range(4)] == [0, 0, 2, 0]


def test_syzygy_split_free_module(square_zero_pair):
    _, _, R = square_zero_pair
    split = syzygy_split(R, algebra_as_module(R))
    assert split.ok
    assert all(d == (0, 0, 0) for d in split.dims())
    assert split.m_module.min_degree() is None
    assert split.n_module.min_degree() is None


def test_syzygy_split_mixed_pair():
    S = mono([("x", 1)], ["x^3"])
    T = mono([("y", 1)], ["y^2"])
    R = fiber_product(S, T)
    split = syzygy_split(R, residue_module(R))
    assert split.ok
    assert split.dims()[2] == (3, 1, 2)
    assert split.dims()[3] == (2, 2, 0)
    assert [split.m_module.dim(n) for n in range(5)] == [0, 0, 1, 2, 0]
    assert [split.n_module.dim(n) for n in range(5)] == [0, 0, 2, 0, 0]


def test_syzygy_split_random_pairs():
    rng = np.random.default_rng(7)
    s_pool = [
        ([("x", 1)], ["x^2"]),
        ([("x", 1)], ["x^3"]),
        ([("x", 1), ("y", 1)], ["x*y", "y^2"]),
    ]
    t_pool = [
        ([("z", 1)], ["z^2"]),
        ([("z", 1), ("w", 1)], ["z^2", "z*w", "w^2"]),
    ]
    for _ in range(5):
        S = mono(*s_pool[rng.integers(len(s_pool))], cap=6)
        T = mono(*t_pool[rng.integers(len(t_pool))], cap=6)
        R = fiber_product(S, T)
        split = syzygy_split(R, residue_module(R))
        assert split.ok
        for k, m, n in split.dims():
            assert m + n == k


# -- the Ext bookkeeping for an arbitrary module ------------------------------


def test_ext_sequence_line_quotient(square_zero_pair):
    _, _, R = square_zero_pair
    rep = verify_ext_sequence_L(R, line_quotient(R), 6)
    assert rep.ok
    assert rep.data["ext_dims"] == [1, 1, 2, 4, 8, 16, 32]
    assert rep.data["predicted_from_2"] == [2, 4, 8, 16, 32]
    assert rep.data["m_poincare"] == [1, 1, 1, 1, 1]


def test_ext_sequence_residue_field(square_zero_pair):
    _, _, R = square_zero_pair
    rep = verify_ext_sequence_L(R, residue_module(R), 6)
    assert rep.ok
    assert rep.data["ext_dims"] == [1, 2, 4, 8, 16, 32, 64]
    assert rep.data["predicted_from_2"] == [4, 8, 16, 32, 64]


def test_ext_sequence_free_module(square_zero_pair):
    _, _, R = square_zero_pair
    rep = verify_ext_sequence_L(R, algebra_as_module(R), 4)
    assert rep.ok
    assert rep.data["ext_dims"] == [1, 0, 0, 0, 0]
    assert rep.data["predicted_from_2"] == [0, 0, 0]


def test_ext_sequence_mixed_pair():
    S = mono([("x", 1)], ["x^3"])
    T = mono([("y", 1)], ["y^2"])
    R = fiber_product(S, T)
    rep = verify_ext_sequence_L(R, residue_module(R), 5)
    assert rep.ok
    assert rep.data["ext_dims"] == [1, 2, 4, 8, 16, 32]


# -- the Ext sequence of a pullback module ------------------------------------


def test_fiber_module_sequence_ring_factors(square_zero_pair):
    S, T, R = square_zero_pair
    rep = verify_fiber_module_ext_sequence(
        R, algebra_as_module(S), algebra_as_module(T), 6)
    assert rep.ok
    assert rep.data["p_fib"] == [1, 0, 0, 0, 0, 0, 0]
    assert rep.data["p_k"] == [1, 2, 4, 8, 16, 32, 64]
    assert rep.data["p_m"] == [1, 1, 2, 4, 8, 16, 32]
    assert rep.data["p_n"] == [1, 1, 2, 4, 8, 16, 32]


def test_fiber_module_sequence_residue_both(square_zero_pair):
    S, T, R = square_zero_pair
    rep = verify_fiber_module_ext_sequence(
        R, residue_module(S), residue_module(T), 5)
    assert rep.ok
    assert rep.data["p_fib"] == rep.data["p_k"]


def test_fiber_module_sequence_rank_two(square_zero_pair):
    S, T, R = square_zero_pair
    m2 = free_module_table(S, [0, 0])
    n2 = free_module_table(T, [0, 0])
    rep = verify_fiber_module_ext_sequence(R, m2, n2, 5)
    assert rep.ok
    assert rep.data["rank_v"] == 2
    assert rep.data["p_fib"] == [2, 0, 0, 0, 0, 0]
    assert rep.data["p_m"] == [2, 2, 4, 8, 16, 32]


def test_comparison_chain_map_identity(square_zero_pair):
    S, _, _ = square_zero_pair
    res = minimal_resolution(S, residue_module(S), 3)
    chain = comparison_chain_map(res, res, {0: np.eye(1, dtype=np.int64)}, 3)
    for n in range(4):
        for d in range(S.cap + 1):
            assert np.array_equal(chain[n][d],
                                  np.eye(res.frees[n].dim(d), dtype=np.int64))


# -- resolving k over a free product ------------------------------------------


def test_combined_resolution_polynomial_duals(square_zero_pair):
    # duals of square-zero factors are (truncated) polynomial algebras,
    # so the joined resolution stops at step 1
    S, T, _ = square_zero_pair
    fp = free_product(ext_algebra(S, 4), ext_algebra(T, 4))
    C = combined_residue_resolution(fp, 3)
    assert [C.rank(i) for i in range(4)] == [1, 2, 0, 0]
    assert verify_complex(C).ok
    direct = minimal_resolution(fp, residue_module(fp), 3)
    assert [direct.rank(i) for i in range(4)] == [1, 2, 0, 0]


def test_combined_resolution_exterior_duals():
    # duals of polynomial factors are exterior, with infinite resolutions
    S = mono([("x", 1)], [], cap=4)
    T = mono([("y", 1)], [], cap=4)
    fp = free_product(ext_algebra(S, 4), ext_algebra(T, 4))
    C = combined_residue_resolution(fp, 3)
    assert [C.rank(i) for i in range(4)] == [1, 2, 2, 2]
    assert C.gen_degrees(2) == [2, 2]
    assert verify_complex(C).ok
    direct = minimal_resolution(fp, residue_module(fp), 3)
    assert [direct.rank(i) for i in range(4)] == [1, 2, 2, 2]


def test_ext_bidegree_over_exterior_pair():
    S = mono([("x", 1)], [], cap=4)
    T = mono([("y", 1)], [], cap=4)
    s_ext, t_ext = ext_algebra(S, 4), ext_algebra(T, 4)
    fp = free_product(s_ext, t_ext)
    fpm = free_product_module(fp, ext_module(S, algebra_as_module(S), 4,
                                             ext=s_ext))
    C = combined_residue_resolution(fp, 3)
    assert ext_bidegree_dim(C, fpm, 0, 0) == 0
    assert ext_bidegree_dim(C, fpm, 1, 1) == 1


# -- socle ---------------------------------------------------------------------


def test_socle_dims_free_product_module(square_zero_pair):
    S, T, _ = square_zero_pair
    s_ext, t_ext = ext_algebra(S, 5), ext_algebra(T, 5)
    fp = free_product(s_ext, t_ext)
    fpm = free_product_module(fp, ext_module(S, residue_module(S), 5,
                                             ext=s_ext))
    assert all(v == 0 for v in socle_dims(fpm).values())


def test_socle_dims_detects_top_class():
    A = ext_algebra(mono([("x", 1)], [], cap=4), 4)  # exterior on one class
    assert socle_dims(algebra_as_module(A)) == {0: 0, 1: 1, 2: 0, 3: 0}


# -- depth certificates --------------------------------------------------------


def test_depth_certificate_module_not_free(square_zero_pair):
    S, _, R = square_zero_pair
    cert = depth_certificate(R, residue_module(S), 3, 6)
    assert cert.ok
    assert cert.case == "module-not-free"
    assert [w["internal_degree"] for w in cert.witnesses] == [-1, -3, -5]
    assert all(w["cocycle"] and w["nonzero"] for w in cert.witnesses)
    assert all(v == 0 for v in cert.socle.values())
    assert cert.interval == (1, 1)
    assert set(cert.chosen) == {"sigma", "theta", "mu", "mu'"}


def test_depth_certificate_second_factor_ext2(square_zero_pair):
    S, _, R = square_zero_pair
    cert = depth_certificate(R, algebra_as_module(S), 2, 6)
    assert cert.ok
    assert cert.case == "second-factor-ext2"
    assert [w["internal_degree"] for w in cert.witnesses] == [-2, -4]
    assert cert.interval == (1, 1)


def test_depth_certificate_first_factor_ext2():
    S = mono([("x", 1)], ["x^2"])
    T = mono([("y", 1)], [])
    R = fiber_product(S, T)
    cert = depth_certificate(R, algebra_as_module(S), 1, 6)
    assert cert.ok
    assert cert.case == "first-factor-ext2"
    assert [w["internal_degree"] for w in cert.witnesses] == [-3]
    assert cert.gldim_status["second factor"] == "no ext2 in window"


def test_depth_certificate_linear_factors_free_module():
    S = mono([("x", 1)], [])
    T = mono([("y", 1)], [])
    R = fiber_product(S, T)
    cert = depth_certificate(R, algebra_as_module(S), 1, 6)
    assert cert.ok
    assert cert.case == "linear-factors"
    assert cert.witnesses[0]["internal_degree"] == 1
    assert cert.witnesses[0]["ext1_dim"] == 1
    assert cert.interval == (1, 1)


def test_depth_certificate_linear_factors_residue_module():
    # Over polynomial factors the alternating-word witnesses are
    # coboundaries; the nonzero class sits at internal degree 0.
    S = mono([("x", 1)], [])
    T = mono([("y", 1)], [])
    R = fiber_product(S, T)
    cert = depth_certificate(R, residue_module(S), 1, 6)
    assert cert.ok
    assert cert.case == "linear-factors"
    assert cert.witnesses[0]["internal_degree"] == 0
    assert cert.witnesses[0]["ext1_dim"] == 1
    assert cert.interval == (1, 1)


def test_depth_certificate_rejects_residue_factor():
    S = mono([("x", 1)], ["x^2"])
    T = mono([("y", 1)], ["y"])  # the second factor collapses to k
    R = fiber_product(S, T)
    with pytest.raises(ExtError, match="residue field"):
        depth_certificate(R, residue_module(S), 1, 4)


def test_depth_certificate_window_too_small(square_zero_pair):
    S, _, R = square_zero_pair
    with pytest.raises(ExtError, match="window"):
        depth_certificate(R, residue_module(S), 5, 4)


def test_depth_certificate_witnesses_persist_in_larger_window(square_zero_pair):
    S, _, R = square_zero_pair
    small = depth_certificate(R, residue_module(S), 2, 5)
    large = depth_certificate(R, residue_module(S), 2, 7)
    key = [(w["j"], w["internal_degree"]) for w in small.witnesses]
    assert key == [(w["j"], w["internal_degree"]) for w in large.witnesses]
    assert small.ok and large.ok


# -- depth upper bound for an arbitrary module --------------------------------


def test_depth_upper_bound_free_module(square_zero_pair):
    _, _, R = square_zero_pair
    rep = depth_upper_bound(R, algebra_as_module(R), 4)
    assert rep.ok
    assert rep.data["case"] == "finite projective dimension"
    assert rep.data["depth"] == 0


def test_depth_upper_bound_residue_field(square_zero_pair):
    _, _, R = square_zero_pair
    rep = depth_upper_bound(R, residue_module(R), 4)
    assert rep.ok
    assert rep.data["case"] == "infinite projective dimension in window"
    assert rep.data["betti"] == [1, 2, 4, 8, 16]
    assert (0, 3) in rep.data["ext1"]
    assert rep.data["depth"] == "<= 1"


def test_depth_upper_bound_line_quotient(square_zero_pair):
    _, _, R = square_zero_pair
    rep = depth_upper_bound(R, line_quotient(R), 4)
    assert rep.ok
    assert rep.data["betti"] == [1, 1, 2, 4, 8]
    assert rep.data["ext1"]
