"""Frechet and Pareto perturbation kernels.

Both are heavy-tailed with shape alpha > 1:

    Frechet:  f(x) = a x^-(a+1) exp(-1/x^a),  F(x) = exp(-1/x^a),  x >= 0
    Pareto:   f(x) = a x^-(a+1),              F(x) = 1 - x^-a,     x >= 1

Sampling is plain inverse-transform on uniforms from [0, 1): exact,
branch-free, and never produces a non-finite value (u = 0 maps to the left
endpoint nu; u = 1 is excluded by the generator).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DIST_KINDS


@dataclass(frozen=True)
class PerturbationDistribution:
    kind: str  # "frechet" | "pareto"
    alpha: float

    def __post_init__(self):
        if self.kind not in DIST_KINDS:
            raise ValueError(f"kind must be one of {DIST_KINDS}, got {self.kind!r}")
        if not (self.alpha > 1.0):
            raise ValueError("alpha must exceed 1")

    @property
    def nu(self) -> float:
        """Left endpoint of the support: 0 for Frechet, 1 for Pareto."""
        return 0.0 if self.kind == "frechet" else 1.0

    def _frechet_cut(self) -> float:
        # below this, exp(-x^-a) underflows; the true value is < 1e-304
        return 700.0 ** (-1.0 / self.alpha)

    def cdf(self, x):
        x = np.asarray(x, dtype=np.float64)
        a = self.alpha
        if self.kind == "frechet":
            cut = self._frechet_cut()
            xs = np.maximum(x, cut)
            out = np.where(x > cut, np.exp(-np.power(xs, -a)), 0.0)
        else:
            out = np.where(x >= 1.0, 1.0 - np.power(np.maximum(x, 1.0), -a), 0.0)
        return out if out.ndim else float(out)

    def sf(self, x):
        """Survival function 1 - F(x), computed without cancellation for Pareto."""
        x = np.asarray(x, dtype=np.float64)
        a = self.alpha
        if self.kind == "frechet":
            cut = self._frechet_cut()
            xs = np.maximum(x, cut)
            out = np.where(x > cut, -np.expm1(-np.power(xs, -a)), 1.0)
        else:
            out = np.where(x >= 1.0, np.power(np.maximum(x, 1.0), -a), 1.0)
        return out if out.ndim else float(out)

    def pdf(self, x):
        x = np.asarray(x, dtype=np.float64)
        a = self.alpha
        if self.kind == "frechet":
            cut = self._frechet_cut()
            xs = np.maximum(x, cut)
            out = np.where(x > cut, a * np.power(xs, -(a + 1.0)) * np.exp(-np.power(xs, -a)), 0.0)
        else:
            out = np.where(x >= 1.0, a * np.power(np.maximum(x, 1.0), -(a + 1.0)), 0.0)
        return out if out.ndim else float(out)

    def inverse_cdf(self, u):
        """Quantile function on u in [0, 1); u = 0 maps to the left endpoint."""
        u = np.asarray(u, dtype=np.float64)
        if np.any(u < 0.0) or np.any(u >= 1.0):
            raise ValueError("u must lie in [0, 1)")
        a = self.alpha
        if self.kind == "frechet":
            with np.errstate(divide="ignore"):
                # -log(0) = +inf and inf**(-1/a) = 0 = nu, so u = 0 is exact.
                out = np.power(-np.log(u), -1.0 / a)
        else:
            out = np.power(1.0 - u, -1.0 / a)
        return out if out.ndim else float(out)

    def sample_vector(self, d: int, rng: np.random.Generator) -> np.ndarray:
        """d i.i.d. draws via inverse transform; consumes exactly d uniforms."""
        return self.inverse_cdf(rng.random(d))


def frechet(alpha: float) -> PerturbationDistribution:
    return PerturbationDistribution("frechet", alpha)


def pareto(alpha: float) -> PerturbationDistribution:
    return PerturbationDistribution("pareto", alpha)
