"""Elementary 2x2 ray-transfer (ABCD) matrices and their composition.

All optical elements in the resonator reduce to two primitives: propagation
through a refractive slab and refraction at a thin lens.  Every matrix built
here has unit determinant, which composition preserves.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class RayMatrix:
    """2x2 ray-transfer matrix [[a, b], [c, d]] in the standard convention.

    a, d are dimensionless, b is in meters, c in 1/meters.
    """

    a: float
    b: float
    c: float
    d: float

    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other: "RayMatrix") -> "RayMatrix":
        return compose(self, other)


IDENTITY = RayMatrix(1.0, 0.0, 0.0, 1.0)


def slab(distance: float, refractive_index: float = 1.0) -> RayMatrix:
    """Propagation through a refractive medium of geometric length `distance`.

    Free space is the special case refractive_index = 1.
    """
    if distance < 0:
        raise ValueError(f"slab distance must be >= 0, got {distance}")
    if refractive_index < 1:
        raise ValueError(f"refractive index must be >= 1, got {refractive_index}")
    return RayMatrix(1.0, distance / refractive_index, 0.0, 1.0)


def thin_lens(focal_length: float) -> RayMatrix:
    """Refraction through a thin lens of the given focal length."""
    if focal_length == 0:
        raise ValueError("focal length must be nonzero")
    return RayMatrix(1.0, 0.0, -1.0 / focal_length, 1.0)


def compose(second: RayMatrix, first: RayMatrix) -> RayMatrix:
    """Matrix product second @ first.

    The argument order follows the optical convention: the element traversed
    first sits rightmost in the product.
    """
    return RayMatrix(
        second.a * first.a + second.b * first.c,
        second.a * first.b + second.b * first.d,
        second.c * first.a + second.d * first.c,
        second.c * first.b + second.d * first.d,
    )
