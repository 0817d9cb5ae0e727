"""Surgery calculus on basic classes.

Blow-up, proper-transform normalization, fiber-sum lattice assembly,
the gluing formula for basic classes, the constraint filter, the
extremal product formula, and the cokernel of the restriction map.

Conventions fixed here (and relied on by the golden tests):

* The glued lattice basis is ordered torus block (2g), sphere block
  (2g), complement block of side 1, complement block of side 2, dual
  class D, surface class Sigma.
* The torus/sphere index set is a symplectic basis a1, b1, ..., ag, bg
  of the surface with a_i . b_i = 1.
* Sphere-sphere off-diagonal pairings are 0; only the self-pairing -2
  and the sphere-torus intersections are forced, and no output depends
  on the free block.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from itertools import product
from typing import Callable, Sequence

from .errors import (
    InternalConsistencyError,
    LatticeError,
    UnsupportedCaseError,
    ValidationError,
)
from .lattice import (
    IntegerLattice,
    SublatticeBasis,
    Vector,
    as_vector,
    determinant,
    direct_sum,
    freeze_matrix,
    is_characteristic,
    is_primitive,
    orthogonal_complement,
    pair,
    restrict_gram,
    signature,
    smith_normal_form,
    solve_integer_combination,
    unit_vector,
    vadd,
    vscale,
    vsub,
    zero_vector,
)
from .manifold import (
    BasicClass,
    FourManifold,
    SurfaceEmbedding,
    require_surface,
    require_valid,
)


class Role(enum.Enum):
    """What a basis vector of a glued lattice came from."""

    TORUS = "torus"
    SPHERE = "sphere"
    FROM_X1 = "from_x1"
    FROM_X2 = "from_x2"
    DUAL_D = "dual_d"
    SURFACE_SIGMA = "surface_sigma"


def _symplectic_name(index: int) -> str:
    # index 0, 1, 2, 3, ... -> a1, b1, a2, b2, ...
    return f"{'ab'[index % 2]}{index // 2 + 1}"


@dataclass(frozen=True)
class BasisRole:
    role: Role
    index: int = 0

    @property
    def label(self) -> str:
        if self.role is Role.TORUS:
            return f"T_{_symplectic_name(self.index)}"
        if self.role is Role.SPHERE:
            return f"S_{_symplectic_name(self.index)}"
        if self.role is Role.FROM_X1:
            return f"X1[{self.index}]"
        if self.role is Role.FROM_X2:
            return f"X2[{self.index}]"
        if self.role is Role.DUAL_D:
            return "D"
        return "Sigma"


@dataclass(frozen=True)
class GluedLatticePresentation:
    """Named basis of a fiber-sum lattice, with provenance of each generator.

    The complement bases record, for each FROM_X block coordinate, the
    actual vector in the corresponding input manifold's basis, so any
    output class can be read back in terms of the inputs.
    """

    genus: int
    basis_roles: tuple[BasisRole, ...]
    lattice: IntegerLattice
    w1_basis: SublatticeBasis
    w2_basis: SublatticeBasis

    @property
    def rank(self) -> int:
        return self.lattice.rank

    def positions(self, role: Role) -> tuple[int, ...]:
        return tuple(i for i, br in enumerate(self.basis_roles) if br.role is role)

    @property
    def torus_positions(self) -> tuple[int, ...]:
        return self.positions(Role.TORUS)

    @property
    def sphere_positions(self) -> tuple[int, ...]:
        return self.positions(Role.SPHERE)

    @property
    def dual_position(self) -> int:
        return self.positions(Role.DUAL_D)[0]

    @property
    def sigma_position(self) -> int:
        return self.positions(Role.SURFACE_SIGMA)[0]

    def labels(self) -> tuple[str, ...]:
        return tuple(br.label for br in self.basis_roles)


@dataclass(frozen=True)
class UndeterminedPair:
    """A class pair the gluing theory does not decide; never a vanishing claim."""

    class1: BasicClass
    class2: BasicClass
    surface_pairing: int
    status: str = "undetermined"
    reason: str = ("surface pairing is non-extremal; the gluing formula "
                   "does not determine a value")


@dataclass(frozen=True)
class FiberSumResult:
    manifold: FourManifold
    presentation: GluedLatticePresentation
    surface: SurfaceEmbedding
    undetermined: tuple[UndeterminedPair, ...]


# ---------------------------------------------------------------------------
# blow-up


def blow_up(x: FourManifold, name: str | None = None,
            child_sw: Callable[[BasicClass, int], int] | None = None) -> FourManifold:
    """Connected sum with a reversed projective plane.

    chi goes up by 1, sigma down by 1, the lattice gains a <-1> summand
    with exceptional class E as the new last basis vector, and each
    basic class K splits into K+E and K-E. Values are copied to both
    children unless `child_sw` overrides that convention.
    """
    require_valid(x)
    if not x.simple_type:
        raise UnsupportedCaseError(
            f"{x.name}: blow-up formula requires a manifold of simple type")
    n = x.lattice.rank
    new_lattice = direct_sum(x.lattice, IntegerLattice(((-1,),)))
    classes: list[BasicClass] = []
    for bc in x.basic_classes:
        for sign in (1, -1):
            sw = bc.sw if child_sw is None else child_sw(bc, sign)
            classes.append(BasicClass(bc.k + (sign,), sw))
    classes.sort(key=lambda bc: (bc.k, bc.sw))
    out = FourManifold(
        name=name if name is not None else f"{x.name}+E",
        chi=x.chi + 1,
        sigma=x.sigma - 1,
        lattice=new_lattice,
        basic_classes=tuple(classes),
        simple_type=True,
    )
    for bc in out.basic_classes:
        if pair(out.lattice, bc.k, bc.k) != out.char_number:
            raise InternalConsistencyError("blow-up output violates the square condition")
    return out


def blow_up_on_surface(x: FourManifold, s: SurfaceEmbedding, times: int,
                       name: str | None = None) -> tuple[FourManifold, SurfaceEmbedding]:
    """Blow up `times` points on the surface and take its proper transform.

    The returned surface class is Sigma - E_1 - ... - E_times, dropping
    the self-intersection by `times`; genus and the dual class (padded
    into the larger lattice) are unchanged.
    """
    if times < 0:
        raise LatticeError(f"cannot blow up a negative number of times: {times}")
    require_surface(x, s)
    out = x
    for _ in range(times):
        out = blow_up(out)
    pad = (0,) * times
    surface = SurfaceEmbedding(
        surface_class=s.surface_class + (-1,) * times,
        genus=s.genus,
        dual_class=s.dual_class + pad if s.dual_class is not None else None,
    )
    if times and name is None:
        name = f"{x.name}+{times}E"
    if name is not None:
        out = replace(out, name=name)
    return out, surface


def normalize_pair(x1: FourManifold, s1: SurfaceEmbedding,
                   x2: FourManifold, s2: SurfaceEmbedding,
                   ) -> tuple[tuple[FourManifold, SurfaceEmbedding],
                              tuple[FourManifold, SurfaceEmbedding]]:
    """Blow up on both surfaces until each has self-intersection zero.

    Only the case where both self-intersections are already nonnegative
    is supported; lowering one side below zero would consume the other
    side's surface data.
    """
    n1 = pair(x1.lattice, s1.surface_class, s1.surface_class)
    n2 = pair(x2.lattice, s2.surface_class, s2.surface_class)
    if n1 < 0 or n2 < 0:
        raise UnsupportedCaseError(
            f"negative surface self-intersection ({n1}, {n2}) is unsupported")
    return (blow_up_on_surface(x1, s1, n1),
            blow_up_on_surface(x2, s2, n2))


# ---------------------------------------------------------------------------
# the pair group and the restriction cokernel


def pairing_group_check(x1: FourManifold, s1: SurfaceEmbedding,
                        x2: FourManifold, s2: SurfaceEmbedding,
                        a1: Sequence[int], a2: Sequence[int]) -> bool:
    """Membership in the pair group: equal pairings against the two surfaces."""
    return pair(x1.lattice, a1, s1.surface_class) == pair(x2.lattice, a2, s2.surface_class)


def restriction_cokernel_order(m1: int, m2: int) -> int:
    """Order of the cokernel of the restriction onto the pair group.

    For surface divisibilities m1, m2 the cokernel is cyclic of order
    m1 m2 / lcm(m1, m2) = gcd(m1, m2); in particular the restriction is
    onto exactly when m1 and m2 are coprime. Cross-checked against the
    Smith normal form of the presentation (m1, -m2).
    """
    if m1 < 1 or m2 < 1:
        raise LatticeError(
            f"divisibilities must be positive, got ({m1}, {m2}); "
            "a zero divisibility means a torsion-like surface class")
    d = math.gcd(m1, m2)
    snf = smith_normal_form(((m1, -m2),))
    if snf.diagonal != (d,):
        raise InternalConsistencyError(
            f"cokernel cross-check failed: gcd {d} vs SNF {snf.diagonal}")
    return d


# ---------------------------------------------------------------------------
# fiber sum


def _extremal(genus: int) -> int:
    return 2 * genus - 2


def _check_fiber_sum_inputs(x1, s1, x2, s2) -> int:
    """Validate every fiber-sum precondition; returns the common genus."""
    if s1.genus != s2.genus:
        raise ValidationError([f"genus mismatch: {s1.genus} vs {s2.genus}"])
    g = s1.genus
    if g < 2:
        raise UnsupportedCaseError(
            f"fiber-sum formulas need genus >= 2, got {g}")
    for x, s, side in ((x1, s1, "side 1"), (x2, s2, "side 2")):
        require_valid(x)
        require_surface(x, s)
        if not x.simple_type:
            raise ValidationError([f"{side}: manifold {x.name} is not of simple type"])
        n = pair(x.lattice, s.surface_class, s.surface_class)
        if n < 0:
            raise UnsupportedCaseError(
                f"{side}: surface self-intersection {n} < 0 is unsupported")
        if n > 0:
            raise ValidationError(
                [f"{side}: surface not normalized (self-intersection {n}); "
                 "blow up on the surface first"])
        if not is_primitive(x.lattice, s.surface_class):
            raise ValidationError(
                [f"{side}: surface class is not primitive; no dual class can exist"])
        if s.dual_class is None:
            raise ValidationError([f"{side}: fiber sum needs a dual class for the surface"])
    return g


def _assemble_glued_lattice(x1, s1, x2, s2, g: int) -> GluedLatticePresentation:
    w1 = orthogonal_complement(
        x1.lattice, SublatticeBasis((s1.surface_class, s1.dual_class),
                                    label=f"{x1.name}:surface+dual"))
    w2 = orthogonal_complement(
        x2.lattice, SublatticeBasis((s2.surface_class, s2.dual_class),
                                    label=f"{x2.name}:surface+dual"))
    if w1.rank != x1.lattice.rank - 2 or w2.rank != x2.lattice.rank - 2:
        raise InternalConsistencyError("complement of a unimodular plane has wrong rank")

    roles = (
        tuple(BasisRole(Role.TORUS, i) for i in range(2 * g))
        + tuple(BasisRole(Role.SPHERE, i) for i in range(2 * g))
        + tuple(BasisRole(Role.FROM_X1, i) for i in range(w1.rank))
        + tuple(BasisRole(Role.FROM_X2, i) for i in range(w2.rank))
        + (BasisRole(Role.DUAL_D), BasisRole(Role.SURFACE_SIGMA))
    )
    rank = len(roles)
    gram = [[0] * rank for _ in range(rank)]

    torus0 = 0
    sphere0 = 2 * g
    x1_0 = 4 * g
    x2_0 = 4 * g + w1.rank
    d_pos = rank - 2
    sigma_pos = rank - 1

    def symplectic(i: int, j: int) -> int:
        if i // 2 == j // 2:
            if i % 2 == 0 and j == i + 1:
                return 1
            if i % 2 == 1 and j == i - 1:
                return -1
        return 0

    for i in range(2 * g):
        for j in range(2 * g):
            # sphere beta against torus gamma meets in (beta . gamma)
            val = symplectic(i, j)
            gram[sphere0 + i][torus0 + j] = val
            gram[torus0 + j][sphere0 + i] = val
        gram[sphere0 + i][sphere0 + i] = -2

    for (w, base, lat) in ((w1, x1_0, x1.lattice), (w2, x2_0, x2.lattice)):
        block = restrict_gram(lat, w)
        for i in range(w.rank):
            for j in range(w.rank):
                gram[base + i][base + j] = block.gram[i][j]

    d_square = (pair(x1.lattice, s1.dual_class, s1.dual_class)
                + pair(x2.lattice, s2.dual_class, s2.dual_class))
    gram[d_pos][d_pos] = d_square
    gram[d_pos][sigma_pos] = 1
    gram[sigma_pos][d_pos] = 1

    return GluedLatticePresentation(
        genus=g,
        basis_roles=roles,
        lattice=IntegerLattice(freeze_matrix(gram)),
        w1_basis=w1,
        w2_basis=w2,
    )


def glue_basic_classes(x1: FourManifold, s1: SurfaceEmbedding,
                       x2: FourManifold, s2: SurfaceEmbedding,
                       presentation: GluedLatticePresentation,
                       ) -> tuple[tuple[BasicClass, ...], tuple[UndeterminedPair, ...]]:
    """Glue extremal class pairs into classes of the fiber sum.

    A pair (k1, k2) with equal surface pairings +-(2g-2) decomposes as
    k_i = alpha_i + sign*(2g-2) D_i + r_i Sigma_i with alpha_i in the
    complement block; the glued class is alpha_1 + alpha_2 +
    sign*(2g-2) D + s Sigma with s = r_1 + r_2 + 2*sign, and its value
    is the product of the input values. The surface coefficient is
    independently recovered from the square condition and both
    computations must agree.

    Pairs with equal but non-extremal surface pairings are returned as
    undetermined, never as a vanishing claim.
    """
    g = presentation.genus
    ext = _extremal(g)
    glued: dict[Vector, BasicClass] = {}
    undetermined: list[UndeterminedPair] = []
    target = (x1.char_number + x2.char_number) + 8 * g - 8
    lat = presentation.lattice
    rank = presentation.rank
    d_pos = presentation.dual_position
    sigma_pos = presentation.sigma_position

    for bc1, bc2 in product(x1.basic_classes, x2.basic_classes):
        p1 = pair(x1.lattice, bc1.k, s1.surface_class)
        p2 = pair(x2.lattice, bc2.k, s2.surface_class)
        if p1 != p2:
            continue  # not in the pair group
        if abs(p1) > ext:
            continue  # no glued class can restrict to this pair
        if abs(p1) < ext:
            undetermined.append(UndeterminedPair(bc1, bc2, p1))
            continue
        sign = 1 if p1 > 0 else -1

        coords = [0] * rank
        r_total = 0
        for (x, s, bc, w, base) in (
                (x1, s1, bc1, presentation.w1_basis, 4 * g),
                (x2, s2, bc2, presentation.w2_basis, 4 * g + presentation.w1_basis.rank)):
            d_sq = pair(x.lattice, s.dual_class, s.dual_class)
            r = pair(x.lattice, bc.k, s.dual_class) - sign * ext * d_sq
            alpha = vsub(bc.k, vadd(vscale(sign * ext, s.dual_class),
                                    vscale(r, s.surface_class)))
            if pair(x.lattice, alpha, s.surface_class) != 0 \
                    or pair(x.lattice, alpha, s.dual_class) != 0:
                raise InternalConsistencyError("decomposition residue is not orthogonal")
            alpha_coords = solve_integer_combination(w.generators, alpha)
            if alpha_coords is None:
                raise InternalConsistencyError(
                    "decomposition residue is not an integer combination "
                    "of the complement basis")
            for i, c in enumerate(alpha_coords):
                coords[base + i] = c
            r_total += r

        s_coeff = r_total + 2 * sign
        coords[d_pos] = sign * ext
        coords[sigma_pos] = s_coeff
        k = tuple(coords)

        # Independent recovery of the surface coefficient from the
        # square condition: with Sigma^2 = 0 the equation is linear and
        # the Sigma-pairing of the rest is +-(2g-2) != 0, so the
        # solution is unique.
        fixed = tuple(0 if i == sigma_pos else c for i, c in enumerate(coords))
        c_sigma = pair(lat, fixed, unit_vector(rank, sigma_pos))
        if c_sigma == 0:
            raise InternalConsistencyError("surface coefficient equation is degenerate")
        num = target - pair(lat, fixed, fixed)
        if num % (2 * c_sigma):
            raise InternalConsistencyError("square condition has no integer solution")
        if num // (2 * c_sigma) != s_coeff:
            raise InternalConsistencyError(
                f"surface coefficient disagreement: decomposition gives {s_coeff}, "
                f"square condition gives {num // (2 * c_sigma)}")

        if pair(lat, k, k) != target:
            raise InternalConsistencyError("glued class violates the square condition")
        if not is_characteristic(lat, k):
            raise InternalConsistencyError("glued class is not characteristic")
        if k in glued:
            raise InternalConsistencyError(f"distinct pairs glued to the same class {k}")
        glued[k] = BasicClass(k, bc1.sw * bc2.sw)

    classes = tuple(sorted(glued.values(), key=lambda bc: (bc.k, bc.sw)))
    undetermined.sort(key=lambda up: (up.class1.k, up.class2.k))
    return classes, tuple(undetermined)


def fiber_sum(x1: FourManifold, s1: SurfaceEmbedding,
              x2: FourManifold, s2: SurfaceEmbedding,
              name: str | None = None) -> FiberSumResult:
    """Connected sum along a square-zero surface of common genus g >= 2.

    Characteristic numbers add as chi = chi1 + chi2 + 4g - 4 and
    sigma = sigma1 + sigma2; the assembled lattice is unimodular of
    rank b2(X1) + b2(X2) + 4g - 2; basic classes are glued pairwise
    from the extremal classes of the inputs.
    """
    g = _check_fiber_sum_inputs(x1, s1, x2, s2)
    presentation = _assemble_glued_lattice(x1, s1, x2, s2, g)
    lat = presentation.lattice

    chi = x1.chi + x2.chi + 4 * g - 4
    sigma = x1.sigma + x2.sigma
    if lat.rank != x1.b2 + x2.b2 + 4 * g - 2 or lat.rank != chi - 2:
        raise InternalConsistencyError("glued lattice has the wrong rank")
    if abs(determinant(lat.gram)) != 1:
        raise InternalConsistencyError("glued lattice is not unimodular")
    b_plus, b_minus = signature(lat)
    if b_plus - b_minus != sigma:
        raise InternalConsistencyError("glued lattice signature does not add up")

    classes, undetermined = glue_basic_classes(x1, s1, x2, s2, presentation)
    manifold = FourManifold(
        name=name if name is not None else f"fibersum({x1.name},{x2.name})",
        chi=chi,
        sigma=sigma,
        lattice=lat,
        basic_classes=classes,
        simple_type=True,
    )
    surface = SurfaceEmbedding(
        surface_class=unit_vector(lat.rank, presentation.sigma_position),
        genus=g,
        dual_class=unit_vector(lat.rank, presentation.dual_position),
    )
    return FiberSumResult(manifold, presentation, surface, undetermined)


# ---------------------------------------------------------------------------
# constraints and the product formula


def satisfies_basic_class_constraints(
        x: FourManifold, s: SurfaceEmbedding, c: Sequence[int],
        presentation: GluedLatticePresentation | None = None) -> bool:
    """Constraint filter every basic class of a fiber sum must pass.

    The pairing with the surface is even and bounded by 2g - 2 in
    absolute value; when a glued-lattice presentation is attached the
    class must also vanish on every torus generator.
    """
    n = pair(x.lattice, s.surface_class, s.surface_class)
    if n != 0:
        raise LatticeError(f"constraint filter needs a normalized surface, square is {n}")
    p = pair(x.lattice, c, s.surface_class)
    if p % 2 != 0 or abs(p) > _extremal(s.genus):
        return False
    if presentation is not None:
        cv = as_vector(c)
        if len(cv) != presentation.rank:
            raise LatticeError("class length does not match the presentation")
        for t in presentation.torus_positions:
            if pair(presentation.lattice, cv, unit_vector(presentation.rank, t)) != 0:
                return False
    return True


def extremal_sw_product(x1: FourManifold, s1: SurfaceEmbedding,
                        x2: FourManifold, s2: SurfaceEmbedding,
                        k1: BasicClass, k2: BasicClass) -> int:
    """Predicted fiber-sum total for an extremal class pair: sw1 * sw2.

    Applies only to pairs in the pair group whose surface pairings are
    both +-(2g-2) with matching sign, on simple-type inputs of common
    genus >= 2; anything else is a hypothesis failure, not a zero.
    """
    if s1.genus != s2.genus:
        raise UnsupportedCaseError(f"genus mismatch: {s1.genus} vs {s2.genus}")
    g = s1.genus
    if g < 2:
        raise UnsupportedCaseError(f"product formula needs genus >= 2, got {g}")
    if not (x1.simple_type and x2.simple_type):
        raise UnsupportedCaseError("product formula needs simple-type inputs")
    p1 = pair(x1.lattice, k1.k, s1.surface_class)
    p2 = pair(x2.lattice, k2.k, s2.surface_class)
    if p1 != p2:
        raise UnsupportedCaseError(
            f"pair not in the pair group: surface pairings {p1} vs {p2}")
    if abs(p1) != _extremal(g):
        raise UnsupportedCaseError(
            f"pair is not extremal: surface pairing {p1}, need +-{_extremal(g)}")
    return k1.sw * k2.sw
