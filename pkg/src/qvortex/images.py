"""Image-vortex cascades and the q-lattice of image positions.

Reflecting a vortex alternately in the two cylinders of an annulus produces
two interleaved cascades of images.  With ``q = (r2/r1)**2`` all positions
collapse onto two geometric ladders: ``z0 * q**n`` (carrying the parent's
sign) and ``(r1**2 / conj(z0)) * q**n`` (opposite sign), n ranging over all
integers.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError
from .qcalc import QBase


class Family(enum.Enum):
    """Which reflection starts the cascade an image belongs to."""

    INNER_FIRST = "inner-first"
    OUTER_FIRST = "outer-first"


@dataclass(frozen=True)
class AnnulusGeometry:
    """The annulus r1 < |z| < r2 between two coaxial cylinders."""

    r1: float
    r2: float

    def __post_init__(self):
        if not (math.isfinite(self.r1) and math.isfinite(self.r2)):
            raise DomainError("radii must be finite")
        if not (0.0 < self.r1 < self.r2):
            raise DomainError(
                f"need 0 < r1 < r2, got r1={self.r1!r}, r2={self.r2!r}"
            )
        QBase(self.q)  # rejects radius ratios too close to 1

    @property
    def q(self) -> float:
        """Squared radius ratio (r2/r1)**2; always > 1."""
        return (self.r2 * self.r2) / (self.r1 * self.r1)

    @property
    def base(self) -> QBase:
        return QBase(self.q)

    @property
    def mean_radius(self) -> float:
        """Geometric mean sqrt(r1 r2), the rest radius of a single vortex."""
        return math.sqrt(self.r1 * self.r2)

    def contains(self, z: complex) -> bool:
        """True if z lies strictly inside the open annulus."""
        return self.r1 < abs(z) < self.r2


@dataclass(frozen=True)
class Vortex:
    """A point vortex: position z and strength kappa (circulation / -2 pi)."""

    position: complex
    strength: float

    def __post_init__(self):
        z = complex(self.position)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise DomainError(f"vortex position must be finite, got {z!r}")
        if not math.isfinite(self.strength) or self.strength == 0.0:
            raise DomainError(
                f"vortex strength must be finite and nonzero, got {self.strength!r}"
            )


@dataclass(frozen=True)
class ImageVortex:
    """One image in a cascade; its strength is ``strength_sign`` times the parent's."""

    position: complex
    strength_sign: int
    generation: int
    family: Family


@dataclass(frozen=True)
class ImageSet:
    """Both reflection cascades of one parent vortex, to a fixed depth.

    ``images`` holds 2*depth entries ordered generation-major; within a
    generation the image lying across the inner cylinder comes first.
    Signs alternate with generation: odd generations flip the parent's
    sign, even ones restore it.
    """

    parent: Vortex
    images: tuple[ImageVortex, ...]
    depth: int


@dataclass(frozen=True)
class LatticeImage:
    """One point of the combined image lattice.

    ``shell`` is the integer n of the position ladder; the entry with
    shell 0 and positive sign is the physical vortex itself and is flagged
    with ``is_parent``.
    """

    position: complex
    sign: int
    shell: int
    is_parent: bool


def _require_inside(geom: AnnulusGeometry, z: complex) -> None:
    if not geom.contains(z):
        raise DomainError(
            f"vortex at {z!r} (|z|={abs(z):g}) is not strictly inside the "
            f"annulus ({geom.r1:g}, {geom.r2:g})"
        )


def cascade(parent: Vortex, geom: AnnulusGeometry, depth: int) -> ImageSet:
    """Generate both image cascades of ``parent`` by repeated inversion.

    Generation 1 holds the direct reflections r1**2/conj(z0) and
    r2**2/conj(z0); generation g+1 reflects each generation-g image in the
    opposite cylinder.  Positions are computed by the inversion recurrence
    itself; the closed forms z0 q**n and (r1**2/conj(z0)) q**n serve as an
    independent check in the test suite.
    """
    if depth < 1:
        raise DomainError(f"depth must be >= 1, got {depth}")
    z0 = complex(parent.position)
    _require_inside(geom, z0)
    r1sq = geom.r1 * geom.r1
    r2sq = geom.r2 * geom.r2

    images: list[ImageVortex] = []
    z_inner = r1sq / z0.conjugate()
    z_outer = r2sq / z0.conjugate()
    for g in range(1, depth + 1):
        if g > 1:
            z_inner, z_outer = r1sq / z_outer.conjugate(), r2sq / z_inner.conjugate()
        sign = -1 if g % 2 else 1
        fam_inner = Family.INNER_FIRST if g % 2 else Family.OUTER_FIRST
        fam_outer = Family.OUTER_FIRST if g % 2 else Family.INNER_FIRST
        images.append(ImageVortex(z_inner, sign, g, fam_inner))
        images.append(ImageVortex(z_outer, sign, g, fam_outer))
    return ImageSet(parent=parent, images=tuple(images), depth=depth)


def lattice_images(parent: Vortex, geom: AnnulusGeometry,
                   n_range: int) -> list[LatticeImage]:
    """Combined image lattice for shells n in [-n_range, n_range].

    Each shell n contributes the positive-sign point z0 * q**n and the
    negative-sign point (r1**2/conj(z0)) * q**n.  Emission order is
    n = 0, +1, -1, +2, -2, ... with the positive-family point first within
    a shell, which matches a nearest-images-first truncation.  The shell-0
    positive entry is the physical vortex (flagged, not excluded): the
    velocity assembly decides whether to keep the self term.
    """
    if n_range < 0:
        raise DomainError(f"n_range must be >= 0, got {n_range}")
    z0 = complex(parent.position)
    _require_inside(geom, z0)
    q = geom.q
    w0 = (geom.r1 * geom.r1) / z0.conjugate()

    out: list[LatticeImage] = []
    shells = [0]
    for m in range(1, n_range + 1):
        shells.extend((m, -m))
    for n in shells:
        qn = q ** n
        out.append(LatticeImage(z0 * qn, +1, n, is_parent=(n == 0)))
        out.append(LatticeImage(w0 * qn, -1, n, is_parent=False))
    return out
