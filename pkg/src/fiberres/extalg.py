"""Cohomology algebras of connected graded algebras and their behaviour
under fiber products.

``ext_algebra`` tabulates the Yoneda algebra Ext(k, k) on the dual basis
of a minimal free resolution of the residue field, with products
computed by lifting chain maps; ``ext_module`` does the same for
Ext(M, k) as a left module.  ``free_product`` builds the coproduct of
two such algebras on the alternating-word basis, and ``verify_phi_iso``
/ ``verify_theta_iso`` check that for a fiber product the cohomology
algebra (resp. the cohomology of a factor module) is the free product
(resp. the induced module over it), degree by degree and product by
product.  ``koszul_check`` reads the diagonal condition off generator
degrees.
"""

from __future__ import annotations

import numpy as np

from . import linalg
from .algebra import Element, FiberProductAlgebra, GradedAlgebra
from .gmodule import (AlgMatrix, FreeModule, GradedModule, residue_module,
                      restrict_to_fiber)
from .resolve import ComplexReport, FreeResolution, minimal_resolution
from .series import coproduct_module_series
from .wordres import Letter, assemble_word_complex


class ExtError(RuntimeError):
    pass


# -- chain-map lifting ------------------------------------------------------


def lift_dual(src: FreeResolution, tgt: FreeResolution, step: int, idx: int,
              nmax: int) -> list[dict[int, np.ndarray]]:
    """Chain map lifting the dual of generator ``idx`` at ``step`` of
    ``src`` through ``tgt``, a minimal resolution of the residue field
    over the same algebra.

    Returns per-stage numeric matrices L[n][d] sending degree-d
    coordinates of src[step + n] to degree-(d - s) coordinates of
    tgt[n], where s is the generator's internal degree.  Stage 0 reads
    off the generator's coefficient; each later stage solves for the
    images of the source generators only and extends module-linearly,
    so the lift is a genuine chain map of free modules.
    """
    A = src.algebra
    assert tgt.algebra is A
    assert step + nmax <= src.hmax and nmax <= tgt.hmax
    p = A.p
    s = src.gen_degrees(step)[idx]
    dcap = min(src.dmax, tgt.dmax + s)
    first = AlgMatrix(A, src.frees[step], tgt.frees[0], {(0, idx): A.unit()},
                      shift=s)
    lifts: list[dict[int, np.ndarray]] = [
        {d: first.evaluate(d) for d in range(dcap + 1)}
    ]
    for n in range(1, nmax + 1):
        fsrc, ftgt = src.frees[step + n], tgt.frees[n]
        entries: dict[tuple[int, int], Element] = {}
        for j, sj in enumerate(fsrc.gen_degrees):
            if sj > dcap:
                raise ExtError(f"lift window too small for a degree-{sj} generator")
            col = fsrc.gen_index(sj, j)
            rhs = (lifts[n - 1][sj] @ src.eval_diff(step + n, sj))[:, col]
            sol = linalg.solve(tgt.eval_diff(n, sj - s), rhs % p, p)
            if sol is None:
                raise ExtError(f"chain-map lift failed at stage {n}, degree {sj}")
            for i, el in ftgt.decompose(sol, sj - s).items():
                entries[(i, j)] = el
        mat = AlgMatrix(A, fsrc, ftgt, entries, shift=s)
        lifts.append({d: mat.evaluate(d) for d in range(dcap + 1)})
    return lifts


def _dual_tensor(E: FreeResolution, P: FreeResolution, lifts: dict, m: int,
                 n: int) -> np.ndarray:
    """Tensor (rank E_m, rank P_n, rank P_{m+n}) of step-m dual classes
    over E acting on step-n dual classes over P, read off the lifted
    chain maps: entry (a, b, c) is the generator-a coefficient of the
    stage-m lift of b's dual evaluated on generator c."""
    arr = np.zeros((E.rank(m), P.rank(n), P.rank(m + n)), dtype=np.int64)
    fm = E.frees[m]
    for b in range(P.rank(n)):
        sb = P.gen_degrees(n)[b]
        Lm = lifts[(n, b)][m]
        for c in range(P.rank(m + n)):
            dc = P.gen_degrees(m + n)[c]
            if dc not in Lm:
                raise ExtError("lift window too small for product read-off")
            vec = Lm[dc][:, P.frees[m + n].gen_index(dc, c)]
            off = fm.offsets(dc - sb)
            for a in range(E.rank(m)):
                if E.gen_degrees(m)[a] == dc - sb:
                    arr[a, b, c] = vec[off[a]]
    return arr % E.algebra.p


# -- Ext algebras and Ext modules -------------------------------------------


class ExtAlgebra(GradedAlgebra):
    """Yoneda algebra on the dual basis of a minimal resolution of the
    residue field; the algebra grading is cohomological and ``internal``
    records each class's internal degree."""

    def __init__(self, p, cap, basis, mult, generators, base, resolution,
                 internal):
        super().__init__(p, cap, basis, mult, generators)
        self.base = base
        self.resolution = resolution
        self.internal = internal  # internal[i][a]: internal degree of basis a

    def bigraded_dims(self) -> dict[tuple[int, int], int]:
        out: dict[tuple[int, int], int] = {}
        for i, degs in enumerate(self.internal):
            for d in degs:
                out[(i, d)] = out.get((i, d), 0) + 1
        return out


def ext_algebra(algebra: GradedAlgebra, imax: int, dmax: int | None = None,
                resolution: FreeResolution | None = None) -> ExtAlgebra:
    """Ext(k, k) through cohomological degree ``imax`` with the Yoneda
    product (lift the right factor, then apply the left)."""
    res = resolution
    if res is None:
        res = minimal_resolution(algebra, residue_module(algebra), imax, dmax)
    assert res.algebra is algebra
    if res.hmax < imax:
        raise ExtError(f"resolution reaches step {res.hmax}, need {imax}")
    if res.rank(0) != 1 or res.gen_degrees(0) != [0]:
        raise ExtError("resolution must resolve the residue field")
    if not res.is_minimal():
        raise ExtError("resolution must be minimal")

    lifts = {}
    for j in range(1, imax + 1):
        for b in range(res.rank(j)):
            lifts[(j, b)] = lift_dual(res, res, j, b, imax - j)
    mult = {}
    for m in range(1, imax):
        for n in range(1, imax + 1 - m):
            mult[(m, n)] = _dual_tensor(res, res, lifts, m, n)

    basis = [["1"]] + [[lab + "'" for lab in res.frees[i].gen_labels]
                       for i in range(1, imax + 1)]
    generators = {}
    for i in range(1, imax + 1):
        for a, lab in enumerate(basis[i]):
            generators[lab] = (i, a)
    internal = [[0]] + [res.gen_degrees(i) for i in range(1, imax + 1)]
    return ExtAlgebra(algebra.p, imax, basis, mult, generators, algebra, res,
                      internal)


class ExtModule(GradedModule):
    """Ext(M, k) as a left module over the Yoneda algebra, on the dual
    basis of a minimal resolution of M."""

    def __init__(self, ext, basis, action, base_module, resolution, internal):
        super().__init__(ext, basis, action)
        self.ext = ext
        self.base_module = base_module
        self.resolution = resolution
        self.internal = internal

    def bigraded_dims(self) -> dict[tuple[int, int], int]:
        out: dict[tuple[int, int], int] = {}
        for i, degs in enumerate(self.internal):
            for d in degs:
                out[(i, d)] = out.get((i, d), 0) + 1
        return out


def ext_module(algebra: GradedAlgebra, module: GradedModule | None, imax: int,
               dmax: int | None = None, ext: ExtAlgebra | None = None,
               resolution: FreeResolution | None = None) -> ExtModule:
    """Ext(M, k) through degree ``imax``; a class at stage m acts on a
    module class at stage n by lifting the module class m stages."""
    if ext is None:
        ext = ext_algebra(algebra, imax, dmax)
    assert ext.base is algebra and ext.cap >= imax
    E = ext.resolution
    res = resolution
    if res is None:
        if module is None:
            raise ExtError("need a module or a resolution")
        res = minimal_resolution(algebra, module, imax, dmax)
    assert res.algebra is algebra
    if res.hmax < imax:
        raise ExtError(f"resolution reaches step {res.hmax}, need {imax}")
    if not res.is_minimal():
        raise ExtError("resolution must be minimal")

    lifts = {}
    for j in range(imax + 1):
        for b in range(res.rank(j)):
            lifts[(j, b)] = lift_dual(res, E, j, b, imax - j)
    action = {}
    for m in range(1, imax + 1):
        for n in range(imax + 1 - m):
            action[(m, n)] = _dual_tensor(E, res, lifts, m, n)

    basis = [[lab + "'" for lab in res.frees[i].gen_labels]
             for i in range(imax + 1)]
    internal = [res.gen_degrees(i) for i in range(imax + 1)]
    return ExtModule(ext, basis, action, res.module, res, internal)


# -- restriction along a fiber-product projection ----------------------------


def _coefficient_projection(R: FiberProductAlgebra, free_R: FreeModule,
                            twin: FreeModule, d: int, side: str) -> np.ndarray:
    """Project degree-d coordinates of a free module over the fiber
    product onto the twin free module over one factor, generator by
    generator, keeping that factor's block of each coefficient."""
    fac_alg = twin.algebra
    sl_fn = R.s_slice if side == "S" else R.t_slice
    mat = np.zeros((twin.dim(d), free_R.dim(d)), dtype=np.int64)
    roff, foff = free_R.offsets(d), twin.offsets(d)
    for j, s in enumerate(free_R.gen_degrees):
        da = d - s
        if da < 0:
            continue
        if da == 0:
            mat[foff[j], roff[j]] = 1
            continue
        nfac = fac_alg.dim(da)
        if nfac == 0:
            continue
        sl = sl_fn(da)
        mat[foff[j]: foff[j] + nfac,
            roff[j] + sl.start: roff[j] + sl.stop] = np.eye(nfac, dtype=np.int64)
    return mat


def restriction_chain_map(R_res: FreeResolution, fac_res: FreeResolution,
                          R: FiberProductAlgebra, side: str,
                          ) -> list[dict[int, np.ndarray]]:
    """Chain map from a resolution over the fiber product to one over a
    factor, equivariant for the projection onto that factor and lifting
    the identity on step-0 generators (which must match in degree).

    Each stage solves for generator images over the factor and extends
    equivariantly: a coefficient r on a generator goes to its factor
    block acting on the image.
    """
    assert side in ("S", "T")
    p = R.p
    fac_alg = R.s_algebra if side == "S" else R.t_algebra
    assert R_res.algebra is R and fac_res.algebra is fac_alg
    if R_res.gen_degrees(0) != fac_res.gen_degrees(0):
        raise ExtError("step-0 generators do not align")
    dcap = min(R_res.dmax, fac_res.dmax)
    nmax = min(R_res.hmax, fac_res.hmax)
    twins = [FreeModule(fac_alg, R_res.frees[n].gen_degrees,
                        R_res.frees[n].gen_labels) for n in range(nmax + 1)]
    maps = [{d: _coefficient_projection(R, R_res.frees[0], twins[0], d, side)
             for d in range(dcap + 1)}]
    for n in range(1, nmax + 1):
        fR, ffac = R_res.frees[n], fac_res.frees[n]
        entries: dict[tuple[int, int], Element] = {}
        for j, sj in enumerate(fR.gen_degrees):
            if sj > dcap:
                raise ExtError(f"window too small for a degree-{sj} generator")
            col = fR.gen_index(sj, j)
            rhs = (maps[n - 1][sj] @ R_res.eval_diff(n, sj))[:, col]
            sol = linalg.solve(fac_res.eval_diff(n, sj), rhs % p, p)
            if sol is None:
                raise ExtError(f"restriction lift failed at stage {n}, degree {sj}")
            for i, el in ffac.decompose(sol, sj).items():
                entries[(i, j)] = el
        fac_part = AlgMatrix(fac_alg, twins[n], ffac, entries)
        maps.append({
            d: (fac_part.evaluate(d)
                @ _coefficient_projection(R, fR, twins[n], d, side)) % p
            for d in range(dcap + 1)
        })
    return maps


def induced_ext_matrix(chain: list[dict[int, np.ndarray]],
                       fac_res: FreeResolution, R_res: FreeResolution,
                       n: int) -> np.ndarray:
    """Matrix of the induced map on step-n dual classes: row a holds the
    coordinates, over the duals of R_res's generators, of the pullback
    of the a-th dual generator of fac_res along the chain map."""
    out = np.zeros((fac_res.rank(n), R_res.rank(n)), dtype=np.int64)
    fm = fac_res.frees[n]
    for c in range(R_res.rank(n)):
        dc = R_res.gen_degrees(n)[c]
        vec = chain[n][dc][:, R_res.frees[n].gen_index(dc, c)]
        off = fm.offsets(dc)
        for a in range(fac_res.rank(n)):
            if fac_res.gen_degrees(n)[a] == dc:
                out[a, c] = vec[off[a]]
    return out


# -- free products on the alternating-word basis -----------------------------


def _fp_letters(a: GradedAlgebra, b: GradedAlgebra, cap: int) -> list[tuple]:
    out = []
    for t, alg in ((0, a), (1, b)):
        for deg in range(1, cap + 1):
            for i in range(alg.dim(deg)):
                out.append((t, deg, i))
    return out


def _fp_words(a: GradedAlgebra, b: GradedAlgebra, cap: int) -> list[list]:
    """Alternating words in positive-degree basis letters of the two
    factors, bucketed by total degree and sorted (length, letters)."""
    letters = _fp_letters(a, b, cap)
    buckets: list[list] = [[] for _ in range(cap + 1)]
    buckets[0].append(())
    frontier = []
    for x in letters:
        buckets[x[1]].append((x,))
        frontier.append((x[1], (x,)))
    while frontier:
        nxt = []
        for deg, w in frontier:
            for x in letters:
                if x[0] == w[0][0] or deg + x[1] > cap:
                    continue
                u = (x,) + w
                buckets[deg + x[1]].append(u)
                nxt.append((deg + x[1], u))
        frontier = nxt
    for d in range(cap + 1):
        buckets[d].sort(key=lambda w: (len(w), w))
    return buckets


def _fp_letter_label(a: GradedAlgebra, b: GradedAlgebra, x: tuple) -> str:
    alg = a if x[0] == 0 else b
    return f"{'S' if x[0] == 0 else 'T'}:{alg.labels(x[1])[x[2]]}"


def _fp_product(a: GradedAlgebra, b: GradedAlgebra, u: tuple, v: tuple):
    """Concatenate, merging the boundary letters inside their common
    factor when they share one; a single merge keeps words alternating."""
    x, y = u[-1], v[0]
    if x[0] != y[0]:
        return [(u + v, 1)]
    alg = a if x[0] == 0 else b
    prod = alg.multiply(alg.basis_element(x[1], x[2]),
                        alg.basis_element(y[1], y[2]))
    out = []
    for k in np.flatnonzero(prod.vec):
        merged = u[:-1] + ((x[0], x[1] + y[1], int(k)),) + v[1:]
        out.append((merged, int(prod.vec[k])))
    return out


class FreeProductAlgebra(GradedAlgebra):
    """Coproduct of two connected graded algebras on the basis of
    alternating words in their positive-degree basis elements."""

    def __init__(self, a: GradedAlgebra, b: GradedAlgebra, cap: int):
        assert a.p == b.p
        assert 0 <= cap <= min(a.cap, b.cap)
        self.factor_a = a
        self.factor_b = b
        words = _fp_words(a, b, cap)
        self.words = words
        self._index = [{w: i for i, w in enumerate(ws)} for ws in words]
        basis = [["1"]] + [
            [".".join(_fp_letter_label(a, b, x) for x in w) for w in ws]
            for ws in words[1:]
        ]
        mult = {}
        for m in range(1, cap):
            for n in range(1, cap + 1 - m):
                arr = np.zeros((len(words[m]), len(words[n]),
                                len(words[m + n])), dtype=np.int64)
                for i, u in enumerate(words[m]):
                    for j, v in enumerate(words[n]):
                        for w, coeff in _fp_product(a, b, u, v):
                            arr[i, j, self._index[m + n][w]] += coeff
                mult[(m, n)] = arr % a.p
        generators = {}
        for d in range(1, cap + 1):
            for i, w in enumerate(words[d]):
                if len(w) == 1:
                    generators[basis[d][i]] = (d, i)
        super().__init__(a.p, cap, basis, mult, generators)

    def word_index(self, degree: int, word: tuple) -> int:
        return self._index[degree][word]


def free_product(a: GradedAlgebra, b: GradedAlgebra,
                 cap: int | None = None) -> FreeProductAlgebra:
    if cap is None:
        cap = min(a.cap, b.cap)
    return FreeProductAlgebra(a, b, cap)


class FreeProductModule(GradedModule):
    """Module induced along factor A of a free product: basis words
    (letters, module element) whose letters alternate and end, if any,
    with a letter from factor B; A-letters reaching the module element
    are absorbed through the A-action."""

    def __init__(self, fp, factor_module, words, basis, action):
        super().__init__(fp, basis, action)
        self.factor_module = factor_module
        self.words = words


def free_product_module(fp: FreeProductAlgebra,
                        module: GradedModule) -> FreeProductModule:
    a, b = fp.factor_a, fp.factor_b
    assert module.algebra is a
    cap = fp.cap
    letters = _fp_letters(a, b, cap)
    buckets: list[list] = [[] for _ in range(cap + 1)]
    frontier = []
    for dm in range(cap + 1):
        for mi in range(module.dim(dm)):
            w = ((), (dm, mi))
            buckets[dm].append(w)
            frontier.append((dm, w))
    while frontier:
        nxt = []
        for deg, (ls, mpair) in frontier:
            for x in letters:
                if deg + x[1] > cap:
                    continue
                if ls:
                    if x[0] == ls[0][0]:
                        continue
                elif x[0] != 1:
                    continue
                w = ((x,) + ls, mpair)
                buckets[deg + x[1]].append(w)
                nxt.append((deg + x[1], w))
        frontier = nxt
    for d in range(cap + 1):
        buckets[d].sort(key=lambda w: (len(w[0]), w[0], w[1]))
    index = [{w: i for i, w in enumerate(ws)} for ws in buckets]

    def label(w):
        ls, (dm, mi) = w
        head = ".".join(_fp_letter_label(a, b, x) for x in ls)
        tail = module.labels(dm)[mi]
        return f"{head}.{tail}" if head else tail

    basis = [[label(w) for w in ws] for ws in buckets]
    action = {}
    for m in range(1, cap + 1):
        for n in range(cap + 1 - m):
            arr = np.zeros((fp.dim(m), len(buckets[n]), len(buckets[m + n])),
                           dtype=np.int64)
            for i, u in enumerate(fp.words[m]):
                x = u[-1]
                for j, (ls, mpair) in enumerate(buckets[n]):
                    if ls:
                        if x[0] != ls[0][0]:
                            arr[i, j, index[m + n][(u + ls, mpair)]] += 1
                        else:
                            for merged, coeff in _fp_product(a, b, u, ls):
                                arr[i, j, index[m + n][(merged, mpair)]] += coeff
                    elif x[0] == 1:
                        arr[i, j, index[m + n][(u, mpair)]] += 1
                    else:
                        dm, mi = mpair
                        row = module.act_matrix(
                            a.basis_element(x[1], x[2]), dm)[mi]
                        for k in np.flatnonzero(row):
                            w = (u[:-1], (dm + x[1], int(k)))
                            arr[i, j, index[m + n][w]] += int(row[k])
            action[(m, n)] = arr % fp.p
    return FreeProductModule(fp, module, buckets, basis, action)


# -- comparison with the cohomology of a fiber product -----------------------


class _PhiData:
    pass


def _phi_setup(R: FiberProductAlgebra, hmax: int, dmax: int) -> _PhiData:
    """Shared scaffolding: factor resolutions, the word resolution of
    the residue field, Ext algebras on both sides, the restriction
    chain maps, and the candidate isomorphism on basis words."""
    d = _PhiData()
    d.S, d.T = R.s_algebra, R.t_algebra
    d.E = minimal_resolution(d.S, residue_module(d.S), hmax, dmax,
                             gen_label="e")
    d.F = minimal_resolution(d.T, residue_module(d.T), hmax, dmax,
                             gen_label="f")
    d.P = minimal_resolution(d.S, residue_module(d.S), hmax, dmax,
                             gen_label="p")
    d.G = assemble_word_complex(R, d.E, d.F, d.P, hmax, dmax)
    d.gidx = [{w: i for i, w in enumerate(ws)} for ws in d.G.words]
    d.S_ext = ext_algebra(d.S, hmax, dmax, resolution=d.E)
    d.T_ext = ext_algebra(d.T, hmax, dmax, resolution=d.F)
    d.R_ext = ext_algebra(R, hmax, dmax, resolution=d.G)
    sigma = restriction_chain_map(d.G, d.E, R, "S")
    tau = restriction_chain_map(d.G, d.F, R, "T")
    d.sig_mats = [induced_ext_matrix(sigma, d.E, d.G, n)
                  for n in range(hmax + 1)]
    d.tau_mats = [induced_ext_matrix(tau, d.F, d.G, n)
                  for n in range(hmax + 1)]
    d.FP = free_product(d.S_ext, d.T_ext, hmax)
    d.phis = {}
    for n in range(1, hmax + 1):
        rows = []
        for w in d.FP.words[n]:
            el = d.R_ext.unit()
            for (t, deg, i) in w:
                mats = d.sig_mats if t == 0 else d.tau_mats
                el = el * Element(d.R_ext, deg, mats[deg][i])
            rows.append(el.vec)
        d.phis[n] = np.array(rows, dtype=np.int64).reshape(
            len(d.FP.words[n]), d.R_ext.dim(n))
    return d


def verify_phi_iso(R: FiberProductAlgebra, hmax: int, dmax: int | None = None,
                   products_to: int = 4) -> ComplexReport:
    """Check that cohomology of the fiber product is the free product of
    the factors' cohomology algebras: dimension counts against a direct
    resolution, the closed-form series, and a tensor-product control;
    generator images under the two restriction maps; concatenation
    products of letter duals; and bijectivity plus multiplicativity of
    the induced map on basis words."""
    if dmax is None:
        dmax = R.cap
    d = _phi_setup(R, hmax, dmax)
    p = R.p
    rep = ComplexReport()

    direct = minimal_resolution(R, residue_module(R), hmax, dmax)
    dims_fp = [d.FP.dim(n) for n in range(hmax + 1)]
    dims_direct = [direct.rank(n) for n in range(hmax + 1)]
    dims_word = [d.G.rank(n) for n in range(hmax + 1)]
    closed = coproduct_module_series(d.S_ext.hilbert_series(),
                                     d.T_ext.hilbert_series(),
                                     d.S_ext.hilbert_series()).coeffs
    tensor_dims = [int(sum(d.S_ext.dim(i) * d.T_ext.dim(n - i)
                           for i in range(n + 1))) for n in range(hmax + 1)]
    rep.data["dims"] = {
        "free_product": dims_fp,
        "direct": dims_direct,
        "word": dims_word,
        "series": closed,
        "tensor_control": tensor_dims,
    }
    rep.add("free product dims = Ext dims (direct resolution)",
            dims_fp == dims_direct, f"{dims_fp} vs {dims_direct}")
    rep.add("free product dims = word resolution ranks",
            dims_fp == dims_word, f"{dims_fp} vs {dims_word}")
    rep.add("dims match coproduct series",
            dims_fp == closed, f"{dims_fp} vs {closed}")
    mism = [n for n in range(hmax + 1) if tensor_dims[n] != dims_direct[n]]
    rep.add("tensor-product control disagrees somewhere",
            bool(mism),
            (f"first mismatch at n={mism[0]}: tensor {tensor_dims[mism[0]]}"
             f" vs {dims_direct[mism[0]]}") if mism
            else "tensor dims agree through the window")

    bad_sig = []
    for n in range(1, hmax + 1):
        for a in range(d.E.rank(n)):
            w = (Letter("P", n, a, d.E.gen_degrees(n)[a]),)
            exp = np.zeros(d.G.rank(n), dtype=np.int64)
            exp[d.gidx[n][w]] = 1
            if not np.array_equal(d.sig_mats[n][a], exp):
                bad_sig.append((n, a))
    rep.add("restriction to the first factor fixes dual generators",
            not bad_sig, f"failures {bad_sig[:5]}" if bad_sig else "")
    p0 = Letter("P", 0, 0, d.P.gen_degrees(0)[0])
    bad_tau = []
    for n in range(1, hmax + 1):
        for b in range(d.F.rank(n)):
            w = (Letter("F", n, b, d.F.gen_degrees(n)[b]), p0)
            exp = np.zeros(d.G.rank(n), dtype=np.int64)
            exp[d.gidx[n][w]] = 1
            if not np.array_equal(d.tau_mats[n][b], exp):
                bad_tau.append((n, b))
    rep.add("restriction to the second factor fixes dual generators",
            not bad_tau, f"failures {bad_tau[:5]}" if bad_tau else "")

    tmax = min(products_to, hmax)
    bad = []
    for j in range(1, tmax):
        for n in range(1, tmax + 1 - j):
            tensor = d.R_ext.mult[(j, n)]
            for wi, w in enumerate(d.G.words[n]):
                lead = w[0].tag
                if lead in ("E", "P"):
                    for b in range(d.F.rank(j)):
                        fl = Letter("F", j, b, d.F.gen_degrees(j)[b])
                        xi = d.gidx[j][(fl, p0)]
                        exp = np.zeros(d.G.rank(j + n), dtype=np.int64)
                        exp[d.gidx[j + n][(fl,) + w]] = 1
                        if not np.array_equal(tensor[xi, wi], exp):
                            bad.append(("f", j, b, n, wi))
                else:
                    for a in range(d.E.rank(j)):
                        el = Letter("E", j, a, d.E.gen_degrees(j)[a])
                        xi = d.gidx[j][(Letter("P", j, a, el.internal),)]
                        exp = np.zeros(d.G.rank(j + n), dtype=np.int64)
                        exp[d.gidx[j + n][(el,) + w]] = 1
                        if not np.array_equal(tensor[xi, wi], exp):
                            bad.append(("e", j, a, n, wi))
    rep.add(f"letter duals multiply by concatenation (total degree <= {tmax})",
            not bad, f"failures {bad[:5]}" if bad else "")

    ranks = [int(linalg.rank(d.phis[n], p)) for n in range(1, hmax + 1)]
    full = all(ranks[n - 1] == d.G.rank(n) == d.FP.dim(n)
               for n in range(1, hmax + 1))
    rep.add("induced map bijective per degree", full, f"ranks {ranks}")

    bad_mult = []
    for m in range(1, tmax):
        for n in range(1, tmax + 1 - m):
            lhs = np.einsum("ijc,ck->ijk", d.FP.mult[(m, n)],
                            d.phis[m + n]) % p
            rhs = np.einsum("ia,jb,abk->ijk", d.phis[m], d.phis[n],
                            d.R_ext.mult[(m, n)]) % p
            if not np.array_equal(lhs, rhs):
                bad_mult.append((m, n))
    rep.add(f"induced map multiplicative (total degree <= {tmax})",
            not bad_mult, f"failures {bad_mult}" if bad_mult else "")
    return rep


def verify_theta_iso(R: FiberProductAlgebra, module: GradedModule, hmax: int,
                     dmax: int | None = None,
                     products_to: int = 4) -> ComplexReport:
    """Check that for a module over the first factor, cohomology over
    the fiber product is the module induced from its factor cohomology
    along the free product: dimension counts, the closed-form series,
    generator images, concatenation action of letter duals, and
    bijectivity plus equivariance of the induced map."""
    if dmax is None:
        dmax = R.cap
    assert module.algebra is R.s_algebra
    d = _phi_setup(R, hmax, dmax)
    p = R.p
    rep = ComplexReport()

    PM = minimal_resolution(d.S, module, hmax, dmax, gen_label="m")
    GM = assemble_word_complex(R, d.E, d.F, PM, hmax, dmax)
    gidx = [{w: i for i, w in enumerate(ws)} for ws in GM.words]
    direct = minimal_resolution(R, restrict_to_fiber(R, module, "S"),
                                hmax, dmax)
    M_ext = ext_module(d.S, module, hmax, dmax, ext=d.S_ext, resolution=PM)
    FPM = free_product_module(d.FP, M_ext)

    dims_fpm = [FPM.dim(n) for n in range(hmax + 1)]
    dims_direct = [direct.rank(n) for n in range(hmax + 1)]
    dims_word = [GM.rank(n) for n in range(hmax + 1)]
    closed = coproduct_module_series(d.S_ext.hilbert_series(),
                                     d.T_ext.hilbert_series(),
                                     M_ext.hilbert_series()).coeffs
    rep.data["dims"] = {
        "induced_module": dims_fpm,
        "direct": dims_direct,
        "word": dims_word,
        "series": closed,
    }
    rep.add("induced module dims = Ext dims (direct resolution)",
            dims_fpm == dims_direct, f"{dims_fpm} vs {dims_direct}")
    rep.add("induced module dims = word resolution ranks",
            dims_fpm == dims_word, f"{dims_fpm} vs {dims_word}")
    rep.add("dims match coproduct module series",
            dims_fpm == closed, f"{dims_fpm} vs {closed}")

    cM = restriction_chain_map(GM, PM, R, "S")
    mats_m = [induced_ext_matrix(cM, PM, GM, n) for n in range(hmax + 1)]
    bad_res = []
    for n in range(hmax + 1):
        for b in range(PM.rank(n)):
            w = (Letter("P", n, b, PM.gen_degrees(n)[b]),)
            exp = np.zeros(GM.rank(n), dtype=np.int64)
            exp[gidx[n][w]] = 1
            if not np.array_equal(mats_m[n][b], exp):
                bad_res.append((n, b))
    rep.add("restriction to the first factor fixes module dual generators",
            not bad_res, f"failures {bad_res[:5]}" if bad_res else "")

    MR_ext = ext_module(R, None, hmax, dmax, ext=d.R_ext, resolution=GM)
    p0 = Letter("P", 0, 0, d.P.gen_degrees(0)[0])
    tmax = min(products_to, hmax)
    bad = []
    for j in range(1, tmax + 1):
        for n in range(tmax + 1 - j):
            tensor = MR_ext.action[(j, n)]
            for wi, w in enumerate(GM.words[n]):
                lead = w[0].tag
                if lead in ("E", "P"):
                    for b in range(d.F.rank(j)):
                        fl = Letter("F", j, b, d.F.gen_degrees(j)[b])
                        xi = d.gidx[j][(fl, p0)]
                        exp = np.zeros(GM.rank(j + n), dtype=np.int64)
                        exp[gidx[j + n][(fl,) + w]] = 1
                        if not np.array_equal(tensor[xi, wi], exp):
                            bad.append(("f", j, b, n, wi))
                else:
                    for a in range(d.E.rank(j)):
                        el = Letter("E", j, a, d.E.gen_degrees(j)[a])
                        xi = d.gidx[j][(Letter("P", j, a, el.internal),)]
                        exp = np.zeros(GM.rank(j + n), dtype=np.int64)
                        exp[gidx[j + n][(el,) + w]] = 1
                        if not np.array_equal(tensor[xi, wi], exp):
                            bad.append(("e", j, a, n, wi))
    rep.add(f"letter duals act by concatenation (total degree <= {tmax})",
            not bad, f"failures {bad[:5]}" if bad else "")

    thetas = {}
    for n in range(hmax + 1):
        rows = []
        for ls, (dm, mi) in FPM.words[n]:
            deg, vec = dm, mats_m[dm][mi]
            for (t, ldeg, i) in reversed(ls):
                mats = d.sig_mats if t == 0 else d.tau_mats
                el = Element(d.R_ext, ldeg, mats[ldeg][i])
                deg, vec = MR_ext.act(el, deg, vec)
            rows.append(vec)
        thetas[n] = np.array(rows, dtype=np.int64).reshape(
            len(FPM.words[n]), GM.rank(n))
    ranks = [int(linalg.rank(thetas[n], p)) for n in range(hmax + 1)]
    full = all(ranks[n] == GM.rank(n) == FPM.dim(n) for n in range(hmax + 1))
    rep.add("induced map bijective per degree", full, f"ranks {ranks}")

    bad_act = []
    for m in range(1, tmax + 1):
        for n in range(tmax + 1 - m):
            lhs = np.einsum("ijc,ck->ijk", FPM.action[(m, n)],
                            thetas[m + n]) % p
            rhs = np.einsum("ia,jb,abk->ijk", d.phis[m], thetas[n],
                            MR_ext.action[(m, n)]) % p
            if not np.array_equal(lhs, rhs):
                bad_act.append((m, n))
    rep.add(f"induced map equivariant (total degree <= {tmax})",
            not bad_act, f"failures {bad_act}" if bad_act else "")
    return rep


# -- Koszul diagonal test ----------------------------------------------------


def koszul_check(algebra: GradedAlgebra, hmax: int, dmax: int | None = None,
                 resolution: FreeResolution | None = None,
                 ) -> tuple[bool, list[tuple[int, int]]]:
    """Whether every Ext class in the window sits on the diagonal
    (internal degree equal to homological degree); offenders are the
    off-diagonal (step, degree) pairs."""
    res = resolution
    if res is None:
        res = minimal_resolution(algebra, residue_module(algebra), hmax, dmax)
    offenders = sorted({(i, dv) for i in range(min(hmax, res.hmax) + 1)
                        for dv in res.gen_degrees(i) if dv != i})
    return not offenders, offenders


def koszul_module_check(algebra: GradedAlgebra, module: GradedModule,
                        hmax: int, dmax: int | None = None,
                        resolution: FreeResolution | None = None,
                        ) -> tuple[bool, list[tuple[int, int]]]:
    """Diagonal test for a module generated in degree 0: every syzygy
    generator in the window must have internal degree equal to its
    homological degree."""
    res = resolution
    if res is None:
        res = minimal_resolution(algebra, module, hmax, dmax)
    offenders = sorted({(i, dv) for i in range(min(hmax, res.hmax) + 1)
                        for dv in res.gen_degrees(i) if dv != i})
    return not offenders, offenders
