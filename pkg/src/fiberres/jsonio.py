"""JSON input schemas for algebras, modules, and series, plus
deterministic report serialization.

Algebra files: ``{"field": {"char": p}, "cap": N, "algebra": {...}}``
where the algebra object has kind ``monomial_quotient`` (vars, rels,
optional commutative flag), ``table`` (explicit basis and structure
constants with their own char/cap), or ``fiber`` (nested ``s`` and
``t`` algebra objects sharing the file's field and cap).

Module files, interpreted against a given algebra: ``{"kind":
"residue"}``, ``{"kind": "free", "gens": [degrees]}``, or ``{"kind":
"coker", "matrix": [[polynomial strings]], "gens": [target degrees]}``
(target degrees default to 0; column degrees are inferred from the
entries, which must be homogeneous).

Series files follow ``PowerSeries.to_json``: decimal coefficient
strings plus a truncation.

Reports serialize with sorted keys, two-space indentation, and a
trailing newline, so equal inputs produce byte-identical files.
"""

from __future__ import annotations

import json

import numpy as np

from .algebra import (DEFAULT_CHAR, AlgebraError, GradedAlgebra,
                      MonomialQuotientPresentation, build_monomial_quotient,
                      fiber_product)
from .gmodule import (AlgMatrix, FreeModule, GradedModule, cokernel_module,
                      free_module_table, residue_module)
from .series import PowerSeries


class InputError(ValueError):
    """Malformed or inconsistent input file."""


def load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc}") from exc


def algebra_from_obj(obj: dict, char: int, cap: int) -> GradedAlgebra:
    kind = obj.get("kind")
    if kind == "monomial_quotient":
        try:
            names = [v["name"] for v in obj["vars"]]
            degs = [int(v["deg"]) for v in obj["vars"]]
            rels = list(obj.get("rels", []))
        except (KeyError, TypeError) as exc:
            raise InputError(f"bad monomial_quotient object: {exc}") from exc
        pres = MonomialQuotientPresentation(names, degs, rels,
                                            bool(obj.get("commutative", True)))
        try:
            return build_monomial_quotient(char, cap, pres)
        except (AlgebraError, AssertionError) as exc:
            raise InputError(f"bad presentation: {exc}") from exc
    if kind == "table":
        table = dict(obj)
        table.setdefault("char", char)
        table.setdefault("cap", cap)
        try:
            return GradedAlgebra.from_table_json(table)
        except (KeyError, ValueError, AssertionError) as exc:
            raise InputError(f"bad table object: {exc}") from exc
    if kind == "fiber":
        try:
            s = algebra_from_obj(obj["s"], char, cap)
            t = algebra_from_obj(obj["t"], char, cap)
        except KeyError as exc:
            raise InputError(f"fiber object needs 's' and 't': {exc}") from exc
        return fiber_product(s, t)
    raise InputError(f"unknown algebra kind {kind!r}")


def load_algebra(path: str, default_char: int | None = None) -> GradedAlgebra:
    obj = load_json(path)
    if not isinstance(obj, dict) or "algebra" not in obj:
        raise InputError(f"{path}: expected an object with an 'algebra' field")
    char = int(obj.get("field", {}).get("char",
                                        default_char or DEFAULT_CHAR))
    try:
        cap = int(obj["cap"])
    except KeyError as exc:
        raise InputError(f"{path}: missing 'cap'") from exc
    if char < 2 or cap < 0:
        raise InputError(f"{path}: need char >= 2 and cap >= 0")
    return algebra_from_obj(obj["algebra"], char, cap)


def module_from_obj(obj: dict, algebra: GradedAlgebra) -> GradedModule:
    kind = obj.get("kind")
    if kind == "residue":
        return residue_module(algebra)
    if kind == "free":
        try:
            gens = [int(d) for d in obj["gens"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"free module needs integer 'gens': {exc}") from exc
        return free_module_table(algebra, gens)
    if kind == "coker":
        rows = obj.get("matrix")
        if not isinstance(rows, list) or not rows:
            raise InputError("coker module needs a nonempty 'matrix'")
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows) or ncols == 0:
            raise InputError("coker matrix must be rectangular and nonempty")
        tgt_degs = [int(d) for d in obj.get("gens", [0] * len(rows))]
        if len(tgt_degs) != len(rows):
            raise InputError("coker 'gens' must match the number of rows")
        entries: dict[tuple[int, int], object] = {}
        col_degs: list[int | None] = [None] * ncols
        for i, row in enumerate(rows):
            for j, s in enumerate(row):
                if not str(s).strip() or str(s).strip() == "0":
                    continue
                try:
                    el = algebra.element_from_string(str(s))
                except AlgebraError as exc:
                    raise InputError(f"matrix entry ({i},{j}): {exc}") from exc
                if el is None:  # terms cancelled to zero
                    continue
                d = tgt_degs[i] + el.degree
                if col_degs[j] is None:
                    col_degs[j] = d
                elif col_degs[j] != d:
                    raise InputError(f"column {j} mixes degrees "
                                     f"{col_degs[j]} and {d}")
                entries[(i, j)] = el
        if any(d is None for d in col_degs):
            raise InputError("every matrix column needs a nonzero entry")
        tgt = FreeModule(algebra, tgt_degs)
        src = FreeModule(algebra, [int(d) for d in col_degs])
        return cokernel_module(AlgMatrix(algebra, src, tgt, entries))
    raise InputError(f"unknown module kind {kind!r}")


def load_module(path: str, algebra: GradedAlgebra) -> GradedModule:
    obj = load_json(path)
    if not isinstance(obj, dict):
        raise InputError(f"{path}: expected a module object")
    return module_from_obj(obj, algebra)


def load_series(path: str) -> PowerSeries:
    obj = load_json(path)
    try:
        return PowerSeries.from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: bad series object: {exc}") from exc


def plain(x):
    """Recursively coerce report payloads to JSON-safe builtins."""
    if isinstance(x, dict):
        return {str(k): plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return [plain(v) for v in x.tolist()]
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    raise TypeError(f"non-serializable report value of type {type(x)!r}")


def report_bytes(report: dict) -> bytes:
    return (json.dumps(plain(report), indent=2, sort_keys=True) + "\n").encode()


def write_report(path: str, report: dict) -> None:
    with open(path, "wb") as fh:
        fh.write(report_bytes(report))
