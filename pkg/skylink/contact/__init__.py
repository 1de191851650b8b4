from skylink.contact.fronts import (
    ComponentInvariants,
    Crossing,
    Cusp,
    FrontDiagram,
    LinkSignature,
    classical_invariants,
    front_diagram,
    link_signature,
)
from skylink.contact.hodograph import downshift, hodograph, hodograph_jet, inverse_hodograph, inverse_hodograph_jet
from skylink.contact.isotopy import (
    IsotopyReport,
    RigidityReport,
    cotangent_nonneg_check,
    fibre_rigidity_check,
    nonneg_isotopy_check,
)
from skylink.contact.legendrian import LegendrianCurve, legendrian_residual, sky_to_legendrian
from skylink.contact.links import LinkVerdict, trivial_link_reference, unlink_verdict

__all__ = [
    "ComponentInvariants",
    "Crossing",
    "Cusp",
    "FrontDiagram",
    "IsotopyReport",
    "LegendrianCurve",
    "LinkSignature",
    "LinkVerdict",
    "RigidityReport",
    "classical_invariants",
    "cotangent_nonneg_check",
    "downshift",
    "fibre_rigidity_check",
    "front_diagram",
    "hodograph",
    "hodograph_jet",
    "inverse_hodograph",
    "inverse_hodograph_jet",
    "legendrian_residual",
    "link_signature",
    "nonneg_isotopy_check",
    "sky_to_legendrian",
    "trivial_link_reference",
    "unlink_verdict",
]
