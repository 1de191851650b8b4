"""The hodograph contactomorphism ST*ℝ^m → 𝒥¹(S^{m−1}) and its inverse.

In the angle chart of S¹ a point of ST*ℝ² with base x and codirection
q = (cos φ, sin φ) goes to

    (φ, p, u) = (φ, −x₁ sin φ + x₂ cos φ, x₁ cos φ + x₂ sin φ).
"""

from typing import TYPE_CHECKING, Tuple

import numpy as np

from skylink.errors import ArgumentError

if TYPE_CHECKING:
    from skylink.contact.legendrian import LegendrianCurve
    from skylink.genfun.family import TrigPolynomial

UNIT_TOL = 1e-9


def _check_unit(q: np.ndarray) -> None:
    norms = np.linalg.norm(q, axis=-1)
    if np.any(np.abs(norms - 1.0) > UNIT_TOL):
        raise ArgumentError(f"codirection must be a unit vector (|q| = {np.max(np.abs(norms - 1.0)) + 1:.12g})")


def hodograph(base: np.ndarray, codirection: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(φ, p, u) of ST*ℝ² points; φ in [0, 2π). Vectorised over leading axes."""
    base = np.asarray(base, dtype=float)
    q = np.asarray(codirection, dtype=float)
    _check_unit(q)
    phi = np.mod(np.arctan2(q[..., 1], q[..., 0]), 2.0 * np.pi)
    c, s = np.cos(phi), np.sin(phi)
    p = -base[..., 0] * s + base[..., 1] * c
    u = base[..., 0] * c + base[..., 1] * s
    return phi, p, u


def inverse_hodograph(phi, p, u) -> Tuple[np.ndarray, np.ndarray]:
    """Base point and codirection of (φ, p, u)."""
    phi = np.asarray(phi, dtype=float)
    p = np.asarray(p, dtype=float)
    u = np.asarray(u, dtype=float)
    c, s = np.cos(phi), np.sin(phi)
    base = np.stack([u * c - p * s, u * s + p * c], axis=-1)
    return base, np.stack([c, s], axis=-1)


def hodograph_jet(x: np.ndarray, q: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """General form (q, η, u) with η = x − ⟨x,q⟩q ∈ T_q S^{m−1} and u = ⟨x,q⟩."""
    x = np.asarray(x, dtype=float)
    q = np.asarray(q, dtype=float)
    _check_unit(q)
    u = np.sum(x * q, axis=-1)
    eta = x - u[..., None] * q
    return q.copy(), eta, u


def inverse_hodograph_jet(q: np.ndarray, eta: np.ndarray, u: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    q = np.asarray(q, dtype=float)
    eta = np.asarray(eta, dtype=float)
    u = np.asarray(u, dtype=float)
    return eta + u[..., None] * q, q.copy()


def downshift(curve: "LegendrianCurve", h: "TrigPolynomial") -> "LegendrianCurve":
    """T^h(φ, p, u) = (φ, p − h′(φ), u − h(φ)); sends Λ^h to the zero section."""
    from skylink.contact.legendrian import LegendrianCurve

    dh = h.derivative()
    return LegendrianCurve(curve.phi.copy(), curve.p - dh(curve.phi), curve.u - h(curve.phi), curve.component)
