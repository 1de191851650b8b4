"""Trivial (1,1)-cable reference and the two-valued unlink verdict.

``unlink_verdict`` compares classical signature data (component rotation, tb,
winding and the inter-component crossing count) against the reference read
off two distinct fibres. Within the supported scenarios, whose skies are
graph fronts with winding 1, this data separates the trivial class from the
linked ones; that separation rests on the classification of Legendrian links
of this type, which is quoted as justification and not implemented here.
"""

from enum import Enum
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np

from skylink.config import settings
from skylink.contact.fronts import LinkSignature, link_signature
from skylink.contact.hodograph import hodograph
from skylink.contact.legendrian import TWO_PI, LegendrianCurve
from skylink.errors import ArgumentError, UnsupportedTopologyError


class LinkVerdict(str, Enum):
    TRIVIAL_CLASS = "trivial-class-signature"
    LINKED = "linked-signature"


def fibre_curve(xbar: np.ndarray, n: int, component: int = 0) -> LegendrianCurve:
    """Hodograph image of the fibre ST*_x̄ℝ²: the graph of the 1-jet of ⟨x̄, q⟩."""
    phi = TWO_PI * np.arange(n) / n
    q = np.stack([np.cos(phi), np.sin(phi)], axis=1)
    base = np.broadcast_to(np.asarray(xbar, dtype=float), q.shape)
    angle, p, u = hodograph(base, q)
    return LegendrianCurve(angle, p, u, component)


def trivial_link_reference(xbar, ybar, n: Optional[int] = None) -> Tuple[LegendrianCurve, LegendrianCurve]:
    xbar = np.asarray(xbar, dtype=float)
    ybar = np.asarray(ybar, dtype=float)
    if np.allclose(xbar, ybar, rtol=0.0, atol=1e-14):
        raise ArgumentError("the trivial link needs two distinct points")
    n = settings.fan if n is None else n
    return fibre_curve(xbar, n, 0), fibre_curve(ybar, n, 1)


@lru_cache(maxsize=1)
def reference_signature() -> LinkSignature:
    signature, _ = link_signature(*trivial_link_reference((0.0, 0.0), (1.0, 0.0)))
    return signature


def unlink_verdict(sig: LinkSignature) -> LinkVerdict:
    windings = [c.winding for c in sig.components]
    if windings != [1, 1]:
        raise UnsupportedTopologyError(f"unlink verdicts need winding 1 components, got {windings}")
    if sig.same_class_data(reference_signature()):
        return LinkVerdict.TRIVIAL_CLASS
    return LinkVerdict.LINKED
