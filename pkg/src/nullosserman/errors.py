"""Exception classes shared across the package."""

from __future__ import annotations


class GeometryError(ValueError):
    """Base class for rejected geometric inputs."""


class AsymmetricMatrixError(GeometryError):
    def __init__(self, max_asymmetry: float, tol: float):
        self.max_asymmetry = max_asymmetry
        super().__init__(f"matrix is not symmetric: max asymmetry {max_asymmetry:.3e} exceeds {tol:.1e}")


class MetricError(GeometryError):
    """Degenerate or non-symmetric metric."""


class NonLorentzError(GeometryError):
    pass


class DegeneratePlaneError(GeometryError):
    pass


class StructureShapeError(GeometryError):
    """Arrays of a structure do not have the dimensions n, s imply."""


class JacobiIdentityError(GeometryError):
    pass


class NonPolynomialMetricError(GeometryError):
    pass


class ScopeError(GeometryError):
    """Operation requested outside the hypotheses it is defined under."""


class NullDirectionError(GeometryError):
    pass


class EigenvalueNotSimpleError(GeometryError):
    def __init__(self, probe, target: float, multiplicity: int):
        self.probe = probe
        self.target = target
        self.multiplicity = multiplicity
        super().__init__(
            f"eigenvalue {target:.6g} has multiplicity {multiplicity} (expected 1) at probe {list(map(float, probe))}"
        )


class SchemaError(ValueError):
    """Model file does not match the documented schema."""

    def __init__(self, message: str, field: str | None = None, line: int | None = None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)


class StructureValidationError(ValueError):
    """A parsed model violates one of the structure axioms."""

    def __init__(self, report):
        self.report = report
        failed = ", ".join(report.failed())
        super().__init__(f"structure validation failed: {failed}")
