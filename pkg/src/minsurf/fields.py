"""Random polynomial test fields in two variables."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class PolynomialField:
    """sum_{i+j<=deg} coeffs[i, j] * a^i * b^j; callable on floats or jets."""

    coeffs: np.ndarray

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1

    def __call__(self, a, b):
        total = 0.0
        n = self.coeffs.shape[0]
        for i in range(n):
            for j in range(n - i):
                c = float(self.coeffs[i, j])
                if c:
                    total = total + c * (a**i) * (b**j)
        return total

    def terms(self) -> str:
        n = self.coeffs.shape[0]
        return " + ".join(f"{self.coeffs[i, j]:.6g}*a^{i}*b^{j}"
                          for i in range(n) for j in range(n - i) if self.coeffs[i, j])


def random_polynomial(rng: np.random.Generator, degree: int, low: float = -1.0, high: float = 1.0) -> PolynomialField:
    c = rng.uniform(low, high, size=(degree + 1, degree + 1))
    mask = np.add.outer(np.arange(degree + 1), np.arange(degree + 1)) <= degree
    return PolynomialField(np.where(mask, c, 0.0))
