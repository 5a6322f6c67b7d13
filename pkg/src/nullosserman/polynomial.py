"""Sparse multivariate polynomials with exact differentiation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Polynomial:
    """``terms`` maps an exponent tuple (one entry per variable) to its coefficient."""

    nvars: int
    terms: tuple[tuple[tuple[int, ...], float], ...] = ()

    @classmethod
    def from_terms(cls, nvars: int, terms) -> "Polynomial":
        acc: dict[tuple[int, ...], float] = {}
        for powers, coeff in terms:
            powers = tuple(int(p) for p in powers)
            if len(powers) != nvars or any(p < 0 for p in powers):
                raise ValueError(f"bad exponent tuple {powers} for {nvars} variables")
            acc[powers] = acc.get(powers, 0.0) + float(coeff)
        return cls(nvars, tuple(sorted((p, c) for p, c in acc.items() if c != 0.0)))

    @classmethod
    def constant(cls, nvars: int, value: float) -> "Polynomial":
        return cls.from_terms(nvars, [((0,) * nvars, value)])

    @classmethod
    def variable(cls, nvars: int, index: int, coeff: float = 1.0) -> "Polynomial":
        powers = [0] * nvars
        powers[index] = 1
        return cls.from_terms(nvars, [(powers, coeff)])

    @property
    def degree(self) -> int:
        return max((sum(p) for p, _ in self.terms), default=0)

    def __call__(self, point) -> float:
        point = np.asarray(point, dtype=float)
        return float(sum(c * np.prod(point ** np.array(p)) for p, c in self.terms))

    def derivative(self, var: int) -> "Polynomial":
        out = []
        for p, c in self.terms:
            if p[var] == 0:
                continue
            q = list(p)
            q[var] -= 1
            out.append((q, c * p[var]))
        return Polynomial.from_terms(self.nvars, out)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        return Polynomial.from_terms(self.nvars, list(self.terms) + list(other.terms))

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.nvars, tuple((p, -c) for p, c in self.terms))

    def to_json(self) -> list:
        return [[c, list(p)] for p, c in self.terms]

    @classmethod
    def from_json(cls, nvars: int, data) -> "Polynomial":
        if isinstance(data, (int, float)) and not isinstance(data, bool):
            return cls.constant(nvars, data)
        return cls.from_terms(nvars, [(p, c) for c, p in data])


def evaluate_array(polys: np.ndarray, point) -> np.ndarray:
    return np.vectorize(lambda p: p(point), otypes=[float])(polys)


def derivative_array(polys: np.ndarray, var: int) -> np.ndarray:
    return np.vectorize(lambda p: p.derivative(var), otypes=[object])(polys)
