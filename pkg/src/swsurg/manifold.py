"""The surgery-state object: a smooth 4-manifold with b1 = 0.

A manifold here is its homeomorphism-level data (Euler characteristic,
signature, intersection form on degree-2 cohomology mod torsion)
together with the set of basic classes, each a characteristic lattice
vector carrying a nonzero integer invariant. Validation, the expected
dimension formula and candidate filtering live here; the surgery
calculus itself is in `surgery`.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InternalConsistencyError, LatticeError, ValidationError
from .lattice import (
    IntegerLattice,
    Vector,
    as_vector,
    determinant,
    is_characteristic,
    pair,
    signature,
)


@dataclass(frozen=True)
class BasicClass:
    """A characteristic vector with its nonzero invariant value."""

    k: Vector
    sw: int

    def __post_init__(self):
        object.__setattr__(self, "k", as_vector(self.k))
        if self.sw == 0:
            raise ValidationError(["basic class has sw = 0"])


@dataclass(frozen=True)
class SurfaceEmbedding:
    """A distinguished surface class with genus and an optional dual class.

    The dual class, when present, pairs to 1 with the surface class; it
    is needed only by the fiber-sum machinery and may be omitted until
    then.
    """

    surface_class: Vector
    genus: int
    dual_class: Vector | None = None

    def __post_init__(self):
        object.__setattr__(self, "surface_class", as_vector(self.surface_class))
        if self.dual_class is not None:
            object.__setattr__(self, "dual_class", as_vector(self.dual_class))
        if self.genus < 1:
            raise ValidationError([f"surface genus must be >= 1, got {self.genus}"])


@dataclass(frozen=True)
class FourManifold:
    """Surgery state: (chi, sigma, intersection lattice, basic classes)."""

    name: str
    chi: int
    sigma: int
    lattice: IntegerLattice
    basic_classes: tuple[BasicClass, ...] = ()
    simple_type: bool = True

    def __post_init__(self):
        object.__setattr__(self, "basic_classes", tuple(self.basic_classes))

    @property
    def b2(self) -> int:
        return self.lattice.rank

    @property
    def char_number(self) -> int:
        """2 chi + 3 sigma, the square every basic class must have."""
        return 2 * self.chi + 3 * self.sigma


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...]
    warnings: tuple[str, ...] = ()

    @property
    def is_valid(self) -> bool:
        return not self.violations

    def lines(self) -> list[str]:
        out = [f"violation: {v}" for v in self.violations]
        out += [f"warning: {w}" for w in self.warnings]
        return out


def validate(x: FourManifold) -> ValidationReport:
    """Check every manifold invariant; reports, never raises.

    Rank/Euler bookkeeping, unimodularity, signature agreement, and per
    basic class the characteristic and square conditions. The standing
    hypotheses b_plus > 1 and odd are warn-level only, since synthetic
    intermediates may violate them while staying internally consistent.
    """
    violations: list[str] = []
    warnings: list[str] = []
    rank = x.lattice.rank

    if rank != x.chi - 2:
        violations.append(f"b2 mismatch: lattice rank {rank} != chi - 2 = {x.chi - 2}")

    det = determinant(x.lattice.gram)
    if abs(det) != 1:
        violations.append(f"intersection form not unimodular: det = {det}")
    else:
        b_plus, b_minus = signature(x.lattice)
        if b_plus + b_minus != rank:
            raise InternalConsistencyError("nondegenerate form lost rank in diagonalization")
        if b_plus - b_minus != x.sigma:
            violations.append(
                f"signature mismatch: form gives {b_plus - b_minus}, manifold says {x.sigma}")
        if (rank - x.sigma) % 2 != 0:
            raise InternalConsistencyError("rank and signature have different parity")
        if b_plus <= 1:
            warnings.append(f"b+ = {b_plus} is not > 1")
        elif b_plus % 2 == 0:
            warnings.append(f"b+ = {b_plus} is even")

    seen: set[Vector] = set()
    target = x.char_number
    for idx, bc in enumerate(x.basic_classes):
        tag = f"basic_classes[{idx}]"
        if len(bc.k) != rank:
            violations.append(f"{tag}: length {len(bc.k)} != rank {rank}")
            continue
        if bc.k in seen:
            violations.append(f"{tag}: duplicate vector {bc.k}")
        seen.add(bc.k)
        if not is_characteristic(x.lattice, bc.k):
            violations.append(f"{tag}: not characteristic")
        sq = pair(x.lattice, bc.k, bc.k)
        if sq != target:
            violations.append(f"{tag}: square condition fails, k.k = {sq} != {target}")

    return ValidationReport(tuple(violations), tuple(warnings))


def require_valid(x: FourManifold) -> None:
    report = validate(x)
    if not report.is_valid:
        raise ValidationError([f"{x.name}: {v}" for v in report.violations])


def validate_surface(x: FourManifold, s: SurfaceEmbedding) -> ValidationReport:
    """Surface invariants relative to its ambient manifold."""
    violations: list[str] = []
    rank = x.lattice.rank
    if len(s.surface_class) != rank:
        return ValidationReport((f"surface class length {len(s.surface_class)} != rank {rank}",))
    if not any(s.surface_class):
        violations.append("surface class is zero (torsion-like)")
    if s.dual_class is not None:
        if len(s.dual_class) != rank:
            violations.append(f"dual class length {len(s.dual_class)} != rank {rank}")
        else:
            p = pair(x.lattice, s.dual_class, s.surface_class)
            if p != 1:
                violations.append(f"dual class pairs to {p} with the surface, not 1")
    return ValidationReport(tuple(violations))


def require_surface(x: FourManifold, s: SurfaceEmbedding) -> None:
    report = validate_surface(x, s)
    if not report.is_valid:
        raise ValidationError(list(report.violations))


def expected_dimension(x: FourManifold, c1) -> int:
    """(c1.c1 - 2 chi - 3 sigma) / 4, the virtual moduli dimension.

    Integral for every characteristic class on a unimodular form;
    non-integrality therefore signals an internal inconsistency rather
    than a user error.
    """
    if not is_characteristic(x.lattice, c1):
        raise LatticeError("expected_dimension needs a characteristic class")
    num = pair(x.lattice, c1, c1) - x.char_number
    if num % 4:
        raise InternalConsistencyError(
            f"expected dimension not integral: ({num})/4 for characteristic input")
    return num // 4


def is_basic_candidate(x: FourManifold, c1) -> bool:
    """Characteristic and of expected dimension zero."""
    if not is_characteristic(x.lattice, c1):
        return False
    return expected_dimension(x, c1) == 0
