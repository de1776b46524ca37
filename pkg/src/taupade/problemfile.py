"""JSON problem files.

Example::

    {
      "basis": "chebyshev",
      "n": 150,
      "nu": 1,
      "p": [[-0.5], [1.0, 1.0]],
      "rhs": [0.0],
      "conditions": [{"terms": [{"point": 0.0, "order": 0, "weight": 1.0}],
                      "value": 1.1107207345395915}],
      "filter": {"pmax": 25, "qmax": 25, "tol": 1e-05,
                 "strategy": "max_clean_diagonal"}
    }

``p[i]`` holds the monomial coefficients (increasing powers) of the factor
multiplying the i-th derivative; ``rhs`` is the forcing term in the chosen
basis.  ``filter`` is optional.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources

from .exceptions import ConfigurationError, ProblemSpecError
from .froissart import DEFAULT_TOL, FilterStrategy
from .orthopoly import BasisKind, CoeffSeries, make_basis
from .taumethod import Condition, PolyOperator

__all__ = ["FilterSpec", "ProblemSpec", "parse_problem", "emit_problem", "load_builtin", "spec_from_operator"]

_TOP_KEYS = {"basis", "n", "nu", "p", "rhs", "conditions"}
_FILTER_KEYS = {"pmax", "qmax", "tol", "strategy"}
_TERM_KEYS = {"point", "order", "weight"}


@dataclass(frozen=True)
class FilterSpec:
    pmax: int
    qmax: int
    tol: float = DEFAULT_TOL
    strategy: str = FilterStrategy.MAX_CLEAN_DIAGONAL.value


@dataclass(frozen=True)
class ProblemSpec:
    basis: str
    n: int
    operator: PolyOperator = field(compare=False)
    filter: FilterSpec | None = None

    def __eq__(self, other):
        if not isinstance(other, ProblemSpec):
            return NotImplemented
        return _as_dict(self) == _as_dict(other)

    __hash__ = None


def _reject_constant(name):
    raise ValueError(f"non-finite number {name} not allowed")


def _check_keys(obj, required, optional, path):
    if not isinstance(obj, dict):
        raise ProblemSpecError("expected an object", path=path or "<root>")
    unknown = sorted(set(obj) - required - optional)
    if unknown:
        raise ProblemSpecError(f"unknown key(s) {unknown}", path=path or "<root>")
    missing = sorted(required - set(obj))
    if missing:
        raise ProblemSpecError(f"missing key(s) {missing}", path=path or "<root>")


def _number(x, path):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ProblemSpecError(f"expected a number, got {x!r}", path=path)
    if not math.isfinite(x):
        raise ProblemSpecError("number must be finite", path=path)
    return float(x)


def _integer(x, path, minimum=0):
    if isinstance(x, bool) or not isinstance(x, int):
        raise ProblemSpecError(f"expected an integer, got {x!r}", path=path)
    if x < minimum:
        raise ProblemSpecError(f"must be >= {minimum}", path=path)
    return x


def _number_list(x, path):
    if not isinstance(x, list) or not x:
        raise ProblemSpecError("expected a non-empty list of numbers", path=path)
    return [_number(v, f"{path}[{i}]") for i, v in enumerate(x)]


def parse_problem(text) -> ProblemSpec:
    """Parse and validate a problem file (``bytes`` or ``str``)."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ProblemSpecError(f"not valid UTF-8: {exc}") from None
    try:
        raw = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ProblemSpecError(f"syntax error: {exc.msg}", line=exc.lineno, column=exc.colno) from None
    except ValueError as exc:
        raise ProblemSpecError(str(exc)) from None

    _check_keys(raw, _TOP_KEYS, {"filter"}, "")
    try:
        basis = make_basis(raw["basis"])
    except ConfigurationError as exc:
        raise ProblemSpecError(str(exc), path="basis") from None
    n = _integer(raw["n"], "n")
    nu = _integer(raw["nu"], "nu")

    if not isinstance(raw["p"], list):
        raise ProblemSpecError("expected a list of coefficient lists", path="p")
    p = [_number_list(pi, f"p[{i}]") for i, pi in enumerate(raw["p"])]
    if len(p) != nu + 1:
        raise ProblemSpecError(f"order {nu} needs {nu + 1} coefficient lists, got {len(p)}", path="p")
    rhs = _number_list(raw["rhs"], "rhs")

    if not isinstance(raw["conditions"], list):
        raise ProblemSpecError("expected a list", path="conditions")
    if len(raw["conditions"]) != nu:
        raise ProblemSpecError(
            f"order {nu} needs {nu} conditions, got {len(raw['conditions'])}", path="conditions"
        )
    conditions = []
    for i, cond in enumerate(raw["conditions"]):
        cpath = f"conditions[{i}]"
        _check_keys(cond, {"terms", "value"}, set(), cpath)
        if not isinstance(cond["terms"], list) or not cond["terms"]:
            raise ProblemSpecError("expected a non-empty list of terms", path=f"{cpath}.terms")
        terms = []
        for j, term in enumerate(cond["terms"]):
            tpath = f"{cpath}.terms[{j}]"
            _check_keys(term, {"point", "order"}, {"weight"}, tpath)
            point = _number(term["point"], f"{tpath}.point")
            if not -1.0 <= point <= 1.0:
                raise ProblemSpecError("point must lie in [-1, 1]", path=f"{tpath}.point")
            order = _integer(term["order"], f"{tpath}.order")
            if order > nu - 1:
                raise ProblemSpecError(f"derivative order must be below nu={nu}", path=f"{tpath}.order")
            weight = _number(term.get("weight", 1.0), f"{tpath}.weight")
            terms.append((point, order, weight))
        conditions.append(Condition(tuple(terms), _number(cond["value"], f"{cpath}.value")))

    filt = None
    if "filter" in raw:
        fr = raw["filter"]
        _check_keys(fr, {"pmax", "qmax"}, _FILTER_KEYS - {"pmax", "qmax"}, "filter")
        tol = _number(fr.get("tol", DEFAULT_TOL), "filter.tol")
        if tol <= 0:
            raise ProblemSpecError("tol must be positive", path="filter.tol")
        strategy = fr.get("strategy", FilterStrategy.MAX_CLEAN_DIAGONAL.value)
        try:
            strategy = FilterStrategy(strategy).value
        except ValueError:
            raise ProblemSpecError(f"unknown strategy {strategy!r}", path="filter.strategy") from None
        filt = FilterSpec(_integer(fr["pmax"], "filter.pmax", 1), _integer(fr["qmax"], "filter.qmax", 1), tol, strategy)

    if n < nu:
        raise ProblemSpecError(f"n={n} is below the operator order {nu}", path="n")
    try:
        operator = PolyOperator(nu, tuple(p), CoeffSeries(basis, rhs), tuple(conditions))
    except ConfigurationError as exc:
        raise ProblemSpecError(str(exc), path="p") from None
    return ProblemSpec(basis.kind.value, n, operator, filt)


def _as_dict(spec: ProblemSpec) -> dict:
    op = spec.operator
    out = {
        "basis": spec.basis,
        "n": spec.n,
        "nu": op.nu,
        "p": [[float(v) for v in pi] for pi in op.p],
        "rhs": [float(v) for v in op.rhs.coeffs],
        "conditions": [
            {
                "terms": [{"point": pt, "order": o, "weight": w} for pt, o, w in c.terms],
                "value": c.value,
            }
            for c in op.conditions
        ],
    }
    if spec.filter is not None:
        f = spec.filter
        out["filter"] = {"pmax": f.pmax, "qmax": f.qmax, "tol": f.tol, "strategy": f.strategy}
    return out


def emit_problem(spec: ProblemSpec) -> str:
    """Serialise ``spec``; ``parse_problem(emit_problem(s)) == s``."""
    return json.dumps(_as_dict(spec), indent=2) + "\n"


def spec_from_operator(operator: PolyOperator, n: int, filter: FilterSpec | None = None) -> ProblemSpec:
    return ProblemSpec(operator.basis.kind.value, n, operator, filter)


def load_builtin(name: str) -> ProblemSpec:
    """Load one of the shipped problem files (``example1``, ``example2_alpha0.9``)."""
    text = resources.files("taupade.problems").joinpath(f"{name}.json").read_bytes()
    return parse_problem(text)
