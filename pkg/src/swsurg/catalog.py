"""Bundled example manifolds.

Each entry exists both as a programmatic builder and as a canonical
.mfd file under data/; a test pins the two together byte for byte.

* k3: the K3 surface. Intersection form 3H + 2(-E8), chi 24, sigma -16,
  single basic class 0 with value 1.
* x0: a synthetic fiber-sum workhorse. Form 3H with basis e1, f1, e2,
  f2, e3, f3; chi 8, sigma 0; the surface is e3 with dual f3, genus 2;
  basic classes +-(2 e1 + 2 f1 + 2 e2 + 2 f2 + 2 f3), both with value
  1, one extremal class per sign.
* nonprimitive: a negative example. Same manifold data as x0 but the
  genus-2 surface is 2 e3: square zero yet divisible, so no dual class
  exists and the fiber sum must refuse it.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .fileio import ManifoldFile, SCHEMA_VERSION, load
from .lattice import direct_sum, e8, hyperbolic, zero_vector
from .manifold import BasicClass, FourManifold, SurfaceEmbedding


def k3() -> ManifoldFile:
    lattice = direct_sum(hyperbolic(3), e8(negative=True), e8(negative=True))
    manifold = FourManifold(
        name="k3",
        chi=24,
        sigma=-16,
        lattice=lattice,
        basic_classes=(BasicClass(zero_vector(22), 1),),
        simple_type=True,
    )
    return ManifoldFile(SCHEMA_VERSION, manifold, {})


def x0() -> ManifoldFile:
    lattice = hyperbolic(3)
    kappa = (2, 2, 2, 2, 0, 2)
    manifold = FourManifold(
        name="x0",
        chi=8,
        sigma=0,
        lattice=lattice,
        basic_classes=(
            BasicClass(tuple(-c for c in kappa), 1),
            BasicClass(kappa, 1),
        ),
        simple_type=True,
    )
    surface = SurfaceEmbedding(
        surface_class=(0, 0, 0, 0, 1, 0),
        genus=2,
        dual_class=(0, 0, 0, 0, 0, 1),
    )
    return ManifoldFile(SCHEMA_VERSION, manifold, {"S": surface})


def nonprimitive() -> ManifoldFile:
    base = x0()
    surface = SurfaceEmbedding(surface_class=(0, 0, 0, 0, 2, 0), genus=2)
    manifold = FourManifold(
        name="x0-nonprimitive",
        chi=base.manifold.chi,
        sigma=base.manifold.sigma,
        lattice=base.manifold.lattice,
        basic_classes=base.manifold.basic_classes,
        simple_type=True,
    )
    return ManifoldFile(SCHEMA_VERSION, manifold, {"S": surface})


BUILDERS = {
    "k3.mfd": k3,
    "x0.mfd": x0,
    "nonprimitive.mfd": nonprimitive,
}


def catalog_path(name: str) -> Path:
    """Filesystem path of a bundled .mfd file."""
    if name not in BUILDERS:
        raise KeyError(f"no catalog entry {name!r}; have {sorted(BUILDERS)}")
    return Path(str(resources.files("swsurg") / "data" / name))


def load_catalog(name: str) -> ManifoldFile:
    return load(catalog_path(name))
