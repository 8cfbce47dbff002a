"""Walk through the closed-form Poincare series of a module over a
fiber product: build two small quotient rings, glue them along k,
resolve the residue field directly, and compare the Betti numbers with
the series formula assembled from the factors."""

from fiberres import (
    MonomialQuotientPresentation,
    betti_table_text,
    build_monomial_quotient,
    fiber_product,
    minimal_resolution,
    poincare_fiber_formula,
    residue_module,
)

CAP, HMAX = 10, 6


def ring(var, rels):
    pres = MonomialQuotientPresentation([var], [1], rels, commutative=True)
    return build_monomial_quotient(32003, CAP, pres)


def main():
    S = ring("x", ["x^2"])
    T = ring("y", ["y^2"])
    R = fiber_product(S, T)
    print("R = S x_k T with S = k[x]/(x^2), T = k[y]/(y^2)")
    print("dim R_n:", [R.dim(n) for n in range(5)], "\n")

    print("Direct minimal resolution of k over R:")
    res = minimal_resolution(R, residue_module(R), HMAX)
    print(betti_table_text(res.betti(), HMAX))
    direct = res.poincare_series()
    print("Betti numbers:", direct.coeffs, "\n")

    psk = minimal_resolution(S, residue_module(S), HMAX).poincare_series()
    ptk = minimal_resolution(T, residue_module(T), HMAX).poincare_series()
    formula = poincare_fiber_formula(psk, psk, ptk)
    print("Factor series:", psk.coeffs, "and", ptk.coeffs)
    print("Formula  P_S * P_T / (P_S + P_T - P_S * P_T):", formula.coeffs)
    print("Matches the direct Betti numbers:", formula.matches(direct))
    print("(This is the geometric series of 1/(1-2t).)")


if __name__ == "__main__":
    main()
