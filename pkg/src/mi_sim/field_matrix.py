"""Per-axis field assembly and the cylindrical-to-Cartesian rotation.

The field matrix H stacks the cylindrical fields of unit-current x/y/z
transmit coils as columns; left-multiplying by the azimuth rotation L gives
the Cartesian fields actually seen by an arbitrarily oriented receiver.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import AXES, Excitation, simplified_field
from .media import Geometry, Medium
from .sommerfeld import QuadratureSpec, exact_field_stack

MODELS = ("simplified", "exact")


def rotation_l(azimuth: float) -> np.ndarray:
    """Rotation taking (rho, phi, z) components to (x, y, z) at a bearing."""
    c, s = np.cos(azimuth), np.sin(azimuth)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


@dataclass(frozen=True)
class FieldMatrix:
    """Cartesian receive fields per unit-current transmit axis.

    cartesian[:, j] is the Cartesian magnetic field at the receiver for a
    unit current on transmit axis j.  The water permeability rides along
    because every mutual-inductance computation needs it.
    """

    cartesian: np.ndarray
    excitation: Excitation
    water_permeability: float
    model: str = "simplified"

    def __post_init__(self):
        cart = np.asarray(self.cartesian, dtype=complex)
        if cart.shape != (3, 3):
            raise ValueError("field matrix must be 3x3")
        if not np.all(np.isfinite(cart.view(float))):
            raise ValueError("field matrix entries must be finite")
        object.__setattr__(self, "cartesian", cart)

    @property
    def frobenius(self) -> float:
        return float(np.linalg.norm(self.cartesian))


def field_matrix(geometry: Geometry, medium_air: Medium, medium_water: Medium,
                 excitation: Excitation, frequency: float,
                 model: str = "simplified",
                 quad: QuadratureSpec = QuadratureSpec()) -> FieldMatrix:
    """Assemble L.H for the chosen field model.

    The three per-axis cylindrical fields become the columns of H; the
    result caches the Cartesian product L(phi) @ H.
    """
    if model not in MODELS:
        raise ValueError(f"model must be one of {MODELS}, got {model!r}")
    if model == "exact":
        h_cyl = exact_field_stack(
            geometry, medium_air, medium_water, excitation, frequency, quad)
    else:
        cols = [
            simplified_field(axis, geometry, medium_air, medium_water,
                             excitation, frequency).as_array()
            for axis in AXES
        ]
        h_cyl = np.column_stack(cols)
    cartesian = rotation_l(geometry.azimuth) @ h_cyl
    if np.linalg.norm(cartesian) <= 0.0:
        raise ValueError("degenerate geometry produced a zero field matrix")
    return FieldMatrix(cartesian, excitation, medium_water.permeability, model)
