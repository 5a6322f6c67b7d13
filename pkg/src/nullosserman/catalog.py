"""Built-in models and the JSON model-file format.

Three kinds of model are supported:

``algebraic``
    a bare :class:`~nullosserman.gff.GffPoint` (curvature comes from an
    algebraic engine and the ``parameters`` map, e.g. ``c``);
``lie``
    a :class:`~nullosserman.curvature.LiePointModel` with bracket constants;
``chart``
    a :class:`~nullosserman.curvature.ChartPointModel` with polynomial
    component functions and an evaluation point.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .curvature import ChartPointModel, LiePointModel, space_form_curvature
from .errors import SchemaError, StructureValidationError
from .gff import GffPoint, validate_structure
from .polynomial import Polynomial
from .tensor_core import CurvatureTensor, PseudoMetric

KINDS = ("algebraic", "lie", "chart")


@dataclass(frozen=True)
class ModelDescriptor:
    name: str
    kind: str
    parameters: dict = field(default_factory=dict)
    provenance: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaError(f"unknown kind {self.kind!r}; expected one of {KINDS}", field="kind")

    def as_dict(self) -> dict:
        return {"name": self.name, "kind": self.kind, "parameters": dict(self.parameters), "provenance": self.provenance}


def structure_of(model) -> GffPoint:
    """The structure point of any catalog model, in its structure frame."""
    if isinstance(model, GffPoint):
        return model
    if isinstance(model, LiePointModel):
        return model.base
    if isinstance(model, ChartPointModel):
        return model.structure_point
    raise TypeError(f"not a model: {type(model).__name__}")


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------


def build_u2_model() -> LiePointModel:
    """Left-invariant Lorentz S-structure on U(2), frame (xi_1, xi_2, X, Y)."""
    g = np.diag([-1.0, 1.0, 1.0, 1.0])
    phi = np.zeros((4, 4))
    phi[3, 2] = 1.0  # phi X = Y
    phi[2, 3] = -1.0  # phi Y = -X
    xi = np.eye(4)[:2]
    eta = np.eye(4)[:2]
    base = GffPoint(n=1, s=2, g=PseudoMetric(g), phi=phi, xi=xi, eta=eta, eps=(-1, 1))
    xi1, xi2, X, Y = np.eye(4)
    C = np.zeros((4, 4, 4))

    def bracket(i, j, v):
        C[i, j] = v
        C[j, i] = -v

    bracket(2, 3, 2 * xi1 + 2 * xi2)
    for a in (0, 1):
        bracket(2, a, -Y)
        bracket(3, a, X)
    return LiePointModel(base=base, brackets=C)


U2_DESCRIPTOR = ModelDescriptor(
    "u2", "lie", {"c": 4.0}, "U(2) with left-invariant Lorentz S-structure of rank 2"
)


def build_r4_model(point=(0.0, 0.0, 0.0, 0.0)) -> ChartPointModel:
    """R^4 with coordinates (x, y, z1, z2), xi_a = d/dz^a and eta^a = dz^a + y dx."""
    d = 4
    one = lambda v: Polynomial.constant(d, v)  # noqa: E731
    y = Polynomial.variable(d, 1)
    zero = one(0.0)
    metric = [
        [one(0.5), zero, -y, y],
        [zero, one(0.5), zero, zero],
        [-y, zero, one(-1.0), zero],
        [y, zero, zero, one(1.0)],
    ]
    phi = [
        [zero, one(-1.0), zero, zero],
        [one(1.0), zero, zero, zero],
        [zero, y, zero, zero],
        [zero, y, zero, zero],
    ]
    xi = [[zero, zero, one(1.0), zero], [zero, zero, zero, one(1.0)]]
    eta = [[y, zero, one(1.0), zero], [y, zero, zero, one(1.0)]]
    return ChartPointModel(
        n=1,
        s=2,
        eps=(-1, 1),
        point=np.asarray(point, dtype=float),
        metric_poly=np.array(metric, dtype=object),
        phi_poly=np.array(phi, dtype=object),
        xi_poly=np.array(xi, dtype=object),
        eta_poly=np.array(eta, dtype=object),
    )


R4_DESCRIPTOR = ModelDescriptor(
    "r4", "chart", {"c": 0.0}, "R^4 with a Lorentz S-structure of phi-sectional curvature 0"
)


def canonical_structure(n: int, s: int) -> GffPoint:
    """Orthonormal frame (x_1, phi x_1, ..., x_n, phi x_n, xi_1, ..., xi_s), xi_1 timelike."""
    if n < 1 or s < 1:
        raise ValueError(f"need n >= 1 and s >= 1, got n={n}, s={s}")
    d = 2 * n + s
    eps = (-1,) + (1,) * (s - 1)
    G = np.diag([1.0] * (2 * n) + [float(e) for e in eps])
    phi = np.zeros((d, d))
    for k in range(n):
        phi[2 * k + 1, 2 * k] = 1.0
        phi[2 * k, 2 * k + 1] = -1.0
    xi = np.eye(d)[2 * n :]
    eta = np.diag(eps) @ xi @ G
    return GffPoint(n=n, s=s, g=PseudoMetric(G), phi=phi, xi=xi, eta=eta, eps=eps)


def build_space_form_model(n: int, s: int, c: float) -> tuple[GffPoint, CurvatureTensor]:
    S = canonical_structure(n, s)
    return S, space_form_curvature(S, c)


def space_form_descriptor(n: int, s: int, c: float) -> ModelDescriptor:
    return ModelDescriptor(
        f"space_form_n{n}_s{s}_c{c:g}", "algebraic", {"c": float(c)}, "Lorentz S-space form, canonical frame"
    )


# ---------------------------------------------------------------------------
# Model files
# ---------------------------------------------------------------------------


def _matrix_json(a) -> list:
    return [[float(v) for v in row] for row in np.asarray(a, dtype=float)]


def _poly_table_json(a) -> list:
    return [[p.to_json() for p in row] for row in a]


def serialize_model(descriptor: ModelDescriptor, model) -> str:
    S = model.coordinate_point if isinstance(model, ChartPointModel) else structure_of(model)
    doc = {
        "name": descriptor.name,
        "kind": descriptor.kind,
        "provenance": descriptor.provenance,
        "parameters": {k: descriptor.parameters[k] for k in sorted(descriptor.parameters)},
        "n": S.n,
        "s": S.s,
        "eps": list(S.eps),
        "frame_metric": _matrix_json(S.G),
    }
    if isinstance(model, ChartPointModel):
        doc["phi"] = _poly_table_json(model.phi_poly)
        doc["xi"] = _poly_table_json(model.xi_poly)
        doc["eta"] = _poly_table_json(model.eta_poly)
        doc["metric_poly"] = _poly_table_json(model.metric_poly)
        doc["point"] = [float(v) for v in model.point]
    else:
        doc["phi"] = _matrix_json(S.phi)
        doc["xi"] = _matrix_json(S.xi)
        doc["eta"] = _matrix_json(S.eta)
        if isinstance(model, LiePointModel):
            doc["brackets"] = [_matrix_json(row) for row in model.brackets]
    return json.dumps(doc, indent=2) + "\n"


def _require(doc: dict, key: str, kind=None):
    if key not in doc:
        raise SchemaError("missing required field", field=key)
    value = doc[key]
    if kind is not None and not isinstance(value, kind):
        raise SchemaError(f"expected {kind.__name__ if isinstance(kind, type) else kind}", field=key)
    return value


def _numeric_array(doc: dict, key: str, shape: tuple) -> np.ndarray:
    value = _require(doc, key)
    try:
        arr = np.array(value, dtype=float)
    except (TypeError, ValueError):
        raise SchemaError("expected a numeric array", field=key) from None
    if arr.shape != shape:
        raise SchemaError(f"expected shape {shape}, got {arr.shape}", field=key)
    return arr


def _poly_table(doc: dict, key: str, shape: tuple, nvars: int) -> np.ndarray:
    value = _require(doc, key, list)
    out = np.empty(shape, dtype=object)
    try:
        if len(value) != shape[0] or any(len(row) != shape[1] for row in value):
            raise SchemaError(f"expected a {shape[0]} x {shape[1]} table", field=key)
        for i, row in enumerate(value):
            for j, entry in enumerate(row):
                out[i, j] = Polynomial.from_json(nvars, entry)
    except SchemaError:
        raise
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"bad polynomial entry: {exc}", field=key) from None
    return out


def load_model(text: str, validate: bool = True):
    """Parse a model file; returns ``(descriptor, model)``.

    Raises :class:`SchemaError` for malformed documents and
    :class:`StructureValidationError` when the structure axioms fail.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(exc.msg, line=exc.lineno) from None
    if not isinstance(doc, dict):
        raise SchemaError("top level must be an object")
    name = _require(doc, "name", str)
    kind = _require(doc, "kind", str)
    if kind not in KINDS:
        raise SchemaError(f"unknown kind {kind!r}; expected one of {KINDS}", field="kind")
    n = _require(doc, "n", int)
    s = _require(doc, "s", int)
    if n < 1 or s < 1:
        raise SchemaError("n and s must be positive", field="n" if n < 1 else "s")
    d = 2 * n + s
    eps = _require(doc, "eps", list)
    if len(eps) != s or any(e not in (-1, 1) for e in eps):
        raise SchemaError(f"expected {s} entries each +1 or -1", field="eps")
    params = doc.get("parameters", {})
    if not isinstance(params, dict) or not all(isinstance(v, (int, float)) for v in params.values()):
        raise SchemaError("expected an object of numbers", field="parameters")
    descriptor = ModelDescriptor(name, kind, dict(params), str(doc.get("provenance", "")))
    frame_metric = _numeric_array(doc, "frame_metric", (d, d))

    try:
        if kind == "chart":
            point = _numeric_array(doc, "point", (d,))
            model = ChartPointModel(
                n=n,
                s=s,
                eps=tuple(eps),
                point=point,
                metric_poly=_poly_table(doc, "metric_poly", (d, d), d),
                phi_poly=_poly_table(doc, "phi", (d, d), d),
                xi_poly=_poly_table(doc, "xi", (s, d), d),
                eta_poly=_poly_table(doc, "eta", (s, d), d),
            )
            evaluated = model.coordinate_point.G
            if np.max(np.abs(evaluated - frame_metric)) > 1e-12:
                raise SchemaError("does not match metric_poly evaluated at point", field="frame_metric")
            S = model.coordinate_point
        else:
            S = GffPoint(
                n=n,
                s=s,
                g=PseudoMetric(frame_metric),
                phi=_numeric_array(doc, "phi", (d, d)),
                xi=_numeric_array(doc, "xi", (s, d)),
                eta=_numeric_array(doc, "eta", (s, d)),
                eps=tuple(eps),
            )
            model = S
            if kind == "lie":
                model = LiePointModel(base=S, brackets=_numeric_array(doc, "brackets", (d, d, d)))
    except SchemaError:
        raise
    except ValueError as exc:
        raise SchemaError(str(exc)) from None

    if validate:
        report = validate_structure(S)
        if not report.passed:
            raise StructureValidationError(report)
    return descriptor, model
