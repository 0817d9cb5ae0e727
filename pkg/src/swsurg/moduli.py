"""Boundary data for the product of a surface with a circle.

The translation-invariant solution space on that boundary is, depending
on the restriction pairing m = (c . Sigma)/2: empty when the symmetric
power index k = (g-1) - |m| is negative, the k-th symmetric power of
the surface when m != 0, and for m = 0 either the Jacobian torus of
degree g-1 line bundles (reducibles, unperturbed) or, after the
standard small perturbation, the (g-1)-st symmetric power. Only the
kind and dimension are tracked; Betti numbers of positive-dimensional
symmetric powers are out of scope.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from .errors import LatticeError, UnsupportedCaseError
from .lattice import as_vector, pair, unit_vector
from .manifold import FourManifold, SurfaceEmbedding
from .surgery import GluedLatticePresentation


class ModuliKind(enum.Enum):
    EMPTY = "empty"
    SYMMETRIC_PRODUCT = "symmetric_product"
    JACOBIAN_REDUCIBLE = "jacobian_reducible"
    PERTURBED_SYMMETRIC_PRODUCT = "perturbed_symmetric_product"


@dataclass(frozen=True)
class ModuliDescriptor:
    """Kind and dimension of the boundary moduli space; no finer data."""

    kind: ModuliKind
    genus: int
    k: int | None = None
    complex_dimension: int | None = None
    unperturbed: "ModuliDescriptor | None" = None

    def describe(self) -> str:
        if self.kind is ModuliKind.EMPTY:
            return f"Empty (k={self.k})"
        if self.kind is ModuliKind.SYMMETRIC_PRODUCT:
            note = " (point)" if self.k == 0 else ""
            return f"SymmetricProduct k={self.k}{note}"
        if self.kind is ModuliKind.JACOBIAN_REDUCIBLE:
            return (f"JacobianReducible: degree {self.genus - 1} line bundles, "
                    f"complex dimension {self.complex_dimension}")
        text = (f"PerturbedSymmetricProduct s^{self.k}(Sigma), "
                f"complex dimension {self.complex_dimension}")
        if self.unperturbed is not None:
            text += f"; unperturbed: {self.unperturbed.describe()}"
        return text


def restriction_pairing(x: FourManifold, s: SurfaceEmbedding,
                        c: Sequence[int]) -> int:
    """Pairing of a class with the surface; callers halve it after the
    evenness check to get the boundary degree m."""
    if pair(x.lattice, s.surface_class, s.surface_class) != 0:
        raise LatticeError("restriction pairing needs a normalized surface")
    return pair(x.lattice, c, s.surface_class)


def pullback_condition(presentation: GluedLatticePresentation,
                       c: Sequence[int]) -> bool:
    """True iff the class vanishes on every torus generator.

    Classes meeting the boundary in a multiple of the circle factor are
    exactly those pulled back from the surface; equivalently they are
    orthogonal to all the square-zero tori.
    """
    cv = as_vector(c)
    if len(cv) != presentation.rank:
        raise LatticeError("class length does not match the presentation")
    lat = presentation.lattice
    return all(pair(lat, cv, unit_vector(presentation.rank, t)) == 0
               for t in presentation.torus_positions)


def moduli_descriptor(genus: int, c_dot_sigma: int) -> ModuliDescriptor:
    """Descriptor of the boundary moduli space for a given even pairing.

    2k = (2g - 2) - |c . Sigma|. Empty when k < 0; the k-th symmetric
    power when the pairing is nonzero; for zero pairing the perturbed
    picture s^{g-1} is returned with the unperturbed Jacobian picture
    attached.
    """
    if genus < 1:
        raise LatticeError(f"genus must be >= 1, got {genus}")
    if c_dot_sigma % 2 != 0:
        raise LatticeError(
            f"pairing with the surface must be even, got {c_dot_sigma}")
    k2 = (2 * genus - 2) - abs(c_dot_sigma)
    if k2 % 2:
        raise LatticeError("parity broke: 2k is odd")
    k = k2 // 2
    if k < 0:
        return ModuliDescriptor(ModuliKind.EMPTY, genus, k=k)
    if c_dot_sigma != 0:
        return ModuliDescriptor(ModuliKind.SYMMETRIC_PRODUCT, genus,
                                k=k, complex_dimension=k)
    jac = ModuliDescriptor(ModuliKind.JACOBIAN_REDUCIBLE, genus,
                           complex_dimension=genus)
    return ModuliDescriptor(ModuliKind.PERTURBED_SYMMETRIC_PRODUCT, genus,
                            k=genus - 1, complex_dimension=genus - 1,
                            unperturbed=jac)


def floer_total_rank_extremal(genus: int, k: int = 0) -> int:
    """Total homology rank of the boundary moduli in the extremal case.

    For k = 0 the space is a point, so the rank is 1, independent of
    genus. Higher symmetric powers need homology beyond what this
    engine tracks and are rejected.
    """
    if genus < 1:
        raise LatticeError(f"genus must be >= 1, got {genus}")
    if k != 0:
        raise UnsupportedCaseError(
            f"total rank for k = {k} needs the higher homology of the "
            "symmetric power, which is out of scope")
    return 1
