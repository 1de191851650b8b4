"""Generating functions S(q, ξ) = f(q) + σξ² (+ a compact bump) on S¹ × ℝ."""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
from scipy.optimize import root

from skylink.errors import ArgumentError, CapabilityError, ChartDomainError, NumericalError
from skylink.utils.log import get_logger

LOG = get_logger(__name__)

TWO_PI = 2.0 * np.pi
DEDUPE = 1e-9
GRADIENT_TOL = 1e-10


@dataclass(frozen=True)
class TrigPolynomial:
    """f(q) = a₀ + Σ_k a_k cos kq + b_k sin kq, k = 1..N.

    ``cos`` holds a₀..a_N and ``sin`` holds b₁..b_N; the shorter tuple is padded.
    """

    cos: tuple = (0.0,)
    sin: tuple = ()

    def __post_init__(self) -> None:
        a = [float(c) for c in self.cos] or [0.0]
        b = [float(c) for c in self.sin]
        harmonics = max(len(a) - 1, len(b))
        a += [0.0] * (harmonics + 1 - len(a))
        b += [0.0] * (harmonics - len(b))
        object.__setattr__(self, "cos", tuple(a))
        object.__setattr__(self, "sin", tuple(b))

    @classmethod
    def constant(cls, c: float) -> "TrigPolynomial":
        return cls((c,))

    @classmethod
    def linear(cls, xbar) -> "TrigPolynomial":
        """q ↦ ⟨x̄, (cos q, sin q)⟩, the front of the fibre over x̄."""
        return cls((0.0, float(xbar[0])), (float(xbar[1]),))

    @classmethod
    def random(cls, rng: np.random.Generator, harmonics: int = 5, bound: float = 2.0) -> "TrigPolynomial":
        a = rng.uniform(-bound, bound, harmonics + 1)
        b = rng.uniform(-bound, bound, harmonics)
        return cls(tuple(a), tuple(b))

    @property
    def harmonics(self) -> int:
        return len(self.sin)

    @property
    def is_constant(self) -> bool:
        return not any(self.cos[1:]) and not any(self.sin)

    def __call__(self, q):
        q = np.asarray(q, dtype=float)
        out = np.full(q.shape, self.cos[0])
        for k in range(1, self.harmonics + 1):
            out = out + self.cos[k] * np.cos(k * q) + self.sin[k - 1] * np.sin(k * q)
        return out

    def derivative(self) -> "TrigPolynomial":
        k = np.arange(1, self.harmonics + 1)
        return TrigPolynomial((0.0,) + tuple(k * np.array(self.sin)), tuple(-k * np.array(self.cos[1:])))

    def sup_bound(self) -> float:
        return float(sum(abs(c) for c in self.cos) + sum(abs(c) for c in self.sin))

    def _padded(self, harmonics: int):
        a = np.zeros(harmonics + 1)
        b = np.zeros(harmonics)
        a[: len(self.cos)] = self.cos
        b[: len(self.sin)] = self.sin
        return a, b

    def __add__(self, other: "TrigPolynomial") -> "TrigPolynomial":
        n = max(self.harmonics, other.harmonics)
        a1, b1 = self._padded(n)
        a2, b2 = other._padded(n)
        return TrigPolynomial(tuple(a1 + a2), tuple(b1 + b2))

    def __sub__(self, other: "TrigPolynomial") -> "TrigPolynomial":
        return self + other.scaled(-1.0)

    def scaled(self, c: float) -> "TrigPolynomial":
        return TrigPolynomial(tuple(c * x for x in self.cos), tuple(c * x for x in self.sin))

    def shifted(self, c: float) -> "TrigPolynomial":
        return self + TrigPolynomial.constant(c)


@dataclass(frozen=True)
class BumpPerturbation:
    """ψ = A · exp(1 − 1/(1 − ρ²)) with ρ² = (dq² + (ξ − ξ₀)²) / r², zero for ρ ≥ 1."""

    amplitude: float
    q0: float
    xi0: float
    radius: float

    def __post_init__(self) -> None:
        if not 0.0 < self.radius < np.pi:
            raise ArgumentError(f"bump radius must lie in (0, π), got {self.radius}")

    def _rho2(self, q, xi):
        dq = np.pi - np.mod(np.pi - (np.asarray(q, dtype=float) - self.q0), TWO_PI)
        dxi = np.asarray(xi, dtype=float) - self.xi0
        return dq, dxi, (dq * dq + dxi * dxi) / self.radius ** 2

    def value(self, q, xi):
        _, _, r2 = self._rho2(q, xi)
        inside = r2 < 1.0
        safe = np.where(inside, r2, 0.0)
        return np.where(inside, self.amplitude * np.exp(1.0 - 1.0 / (1.0 - safe)), 0.0)

    def gradient(self, q, xi):
        dq, dxi, r2 = self._rho2(q, xi)
        inside = r2 < 1.0
        safe = np.where(inside, r2, 0.0)
        psi = np.where(inside, self.amplitude * np.exp(1.0 - 1.0 / (1.0 - safe)), 0.0)
        slope = np.where(inside, -psi / (1.0 - safe) ** 2, 0.0)
        scale = 2.0 / self.radius ** 2
        return slope * scale * dq, slope * scale * dxi


@dataclass(frozen=True)
class GenFamily:
    """S(q, ξ) = f(q) + σ·ξ² + ψ(q, ξ) on S¹ × [−R, R]."""

    f: TrigPolynomial
    sigma: int = 1
    radius: Optional[float] = None
    perturbation: Optional[BumpPerturbation] = None

    def __post_init__(self) -> None:
        if self.sigma not in (1, -1):
            raise ArgumentError(f"quadratic sign must be ±1, got {self.sigma}")
        bound = self.f.sup_bound() + (abs(self.perturbation.amplitude) if self.perturbation else 0.0)
        if self.radius is None:
            object.__setattr__(self, "radius", max(2.0, 2.0 * np.sqrt(bound + 1.0)))
        if bound >= self.radius ** 2 / 4.0:
            raise ChartDomainError(
                f"radius R={self.radius} too small: |f| + |ψ| = {bound:.6g} must stay below R²/4"
            )
        if self.perturbation is not None:
            reach = abs(self.perturbation.xi0) + self.perturbation.radius
            if reach > self.radius / 2.0:
                raise ChartDomainError(f"perturbation reaches |ξ| = {reach:.6g} beyond R/2 = {self.radius / 2:.6g}")

    @property
    def kappa(self) -> int:
        return 0 if self.sigma == 1 else 1

    def value(self, q, xi):
        out = self.f(q) + self.sigma * np.asarray(xi, dtype=float) ** 2
        if self.perturbation is not None:
            out = out + self.perturbation.value(q, xi)
        return out

    def gradient(self, q, xi):
        dq = self.f.derivative()(q)
        dxi = 2.0 * self.sigma * np.asarray(xi, dtype=float)
        if self.perturbation is not None:
            pq, pxi = self.perturbation.gradient(q, xi)
            dq, dxi = dq + pq, dxi + pxi
        return dq, dxi

    def hessian(self, q: float, xi: float, h: float = 1e-6) -> np.ndarray:
        fqq = float(self.f.derivative().derivative()(q))
        hess = np.array([[fqq, 0.0], [0.0, 2.0 * self.sigma]])
        if self.perturbation is not None:
            for col, (dq, dxi) in enumerate(((h, 0.0), (0.0, h))):
                gp = self.perturbation.gradient(q + dq, xi + dxi)
                gm = self.perturbation.gradient(q - dq, xi - dxi)
                hess[:, col] += (np.array(gp) - np.array(gm)) / (2.0 * h)
            hess = 0.5 * (hess + hess.T)
        return hess

    def generated_curve(self, n: int = 720):
        """Λ^f read off the fibre-critical set ξ = 0 as (q, ∂_qS, S)."""
        from skylink.contact.legendrian import LegendrianCurve

        if self.perturbation is not None:
            raise CapabilityError("generated curves are read off unperturbed families only")
        q = TWO_PI * np.arange(n) / n
        dq, _ = self.gradient(q, 0.0)
        return LegendrianCurve(q, dq, self.value(q, 0.0))


def genfun_for_front(f: TrigPolynomial, radius: Optional[float] = None) -> GenFamily:
    """S = f + ξ², generating Λ^f at ξ = 0."""
    return GenFamily(f, 1, radius)


@dataclass(frozen=True)
class CriticalPoint:
    q: float
    xi: float
    value: float
    index: int


@dataclass
class CriticalSet:
    points: List[CriticalPoint] = field(default_factory=list)
    # f constant and unperturbed: the critical set is the circle ξ = 0
    degenerate: bool = False
    circle_value: Optional[float] = None

    @property
    def values(self) -> np.ndarray:
        if self.degenerate:
            return np.array([self.circle_value])
        return np.array([c.value for c in self.points])


def _sign_changes(values: np.ndarray) -> np.ndarray:
    return np.flatnonzero(np.sign(values) * np.sign(np.roll(values, -1)) < 0)


def critical_points(family: GenFamily, seeds: int = 2048, xi_seeds: int = 9) -> CriticalSet:
    """Zeros of ∇S by damped Newton from every sign change of ∂_qS along seeding rows."""
    if family.f.is_constant and family.perturbation is None:
        LOG.warning("constant generating function: critical circle at value %.6g", family.f.cos[0])
        return CriticalSet(degenerate=True, circle_value=family.f.cos[0])

    grid = TWO_PI * (np.arange(seeds) + 0.5) / seeds
    rows: Sequence[float] = [0.0]
    if family.perturbation is not None:
        rows = np.linspace(-family.radius / 2.0, family.radius / 2.0, xi_seeds)

    def grad(z):
        return np.array(family.gradient(z[0], z[1]), dtype=float)

    def hess(z):
        return family.hessian(z[0], z[1])

    points: List[CriticalPoint] = []
    for xi in rows:
        dq, _ = family.gradient(grid, np.full(grid.shape, xi))
        for i in _sign_changes(dq):
            guess = np.array([grid[i] + 0.5 * TWO_PI / seeds, xi])
            sol = root(grad, guess, jac=hess, method="hybr", options={"xtol": 1e-12})
            q, x = float(np.mod(sol.x[0], TWO_PI)), float(sol.x[1])
            # hybr may flag an already converged root as stalled
            if np.max(np.abs(grad(sol.x))) > GRADIENT_TOL or abs(x) > family.radius:
                LOG.debug("dropping Newton seed at q=%.6f xi=%.3f (%s)", guess[0], xi, sol.message)
                continue
            if any(abs(np.pi - np.mod(np.pi - (q - c.q), TWO_PI)) < DEDUPE and abs(x - c.xi) < DEDUPE for c in points):
                continue
            index = int(np.sum(np.linalg.eigvalsh(hess(sol.x)) < 0))
            points.append(CriticalPoint(q, x, float(family.value(q, x)), index))

    if family.perturbation is None:
        dense = TWO_PI * (np.arange(10_000) + 0.5) / 10_000
        expected = _sign_changes(family.f.derivative()(dense)).size
        if expected != len(points):
            raise NumericalError(f"found {len(points)} critical points, sign changes of f' give {expected}")
    points.sort(key=lambda c: (c.q, c.xi))
    return CriticalSet(points)
