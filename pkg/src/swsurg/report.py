"""Audit reports for surgery operations.

A report records what was done, digests of the inputs, the produced
file, a provenance table naming every output basis vector, a per-class
audit (characteristic check, square check, surface pairing, constraint
filter), and the list of class pairs the gluing theory leaves
undetermined. Every emitted basic class must have an all-pass audit
row; anything else is an internal error.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import InternalConsistencyError
from .fileio import ManifoldFile, _enc_int, _enc_vector, digest
from .lattice import is_characteristic, pair
from .manifold import FourManifold, SurfaceEmbedding
from .surgery import (
    GluedLatticePresentation,
    UndeterminedPair,
    satisfies_basic_class_constraints,
)


@dataclass(frozen=True)
class ClassAudit:
    coords: tuple[int, ...]
    sw: int
    characteristic: bool
    square_ok: bool
    surface_pairing: int | None = None
    constraints_ok: bool | None = None

    @property
    def passed(self) -> bool:
        for check in (self.characteristic, self.square_ok, self.constraints_ok):
            if check is False:
                return False
        return True


@dataclass(frozen=True)
class SurgeryReport:
    operation: str
    inputs: tuple[dict, ...]
    output: ManifoldFile
    provenance: tuple[dict, ...] = ()
    class_audit: tuple[ClassAudit, ...] = ()
    undetermined: tuple[UndeterminedPair, ...] = ()
    notes: tuple[str, ...] = ()

    def to_document(self) -> dict:
        from .fileio import to_document
        return {
            "operation": self.operation,
            "inputs": list(self.inputs),
            "output": to_document(self.output),
            "provenance": list(self.provenance),
            "class_audit": [
                {
                    "coords": _enc_vector(a.coords),
                    "sw": _enc_int(a.sw),
                    "characteristic": a.characteristic,
                    "square_ok": a.square_ok,
                    "surface_pairing": None if a.surface_pairing is None
                    else _enc_int(a.surface_pairing),
                    "constraints_ok": a.constraints_ok,
                }
                for a in self.class_audit
            ],
            "undetermined": [
                {
                    "class1": _enc_vector(up.class1.k),
                    "class2": _enc_vector(up.class2.k),
                    "surface_pairing": _enc_int(up.surface_pairing),
                    "status": up.status,
                    "reason": up.reason,
                }
                for up in self.undetermined
            ],
            "notes": list(self.notes),
        }

    def serialize(self, canonical: bool = True) -> bytes:
        doc = self.to_document()
        if canonical:
            text = json.dumps(doc, sort_keys=True, separators=(",", ":"))
        else:
            text = json.dumps(doc, sort_keys=True, indent=2)
        return (text + "\n").encode("utf-8")


def audit_classes(x: FourManifold, surface: SurfaceEmbedding | None = None,
                  presentation: GluedLatticePresentation | None = None,
                  ) -> tuple[ClassAudit, ...]:
    """Run every applicable check on the stored basic classes."""
    rows = []
    target = x.char_number
    for bc in x.basic_classes:
        surface_pairing = None
        constraints = None
        if surface is not None:
            surface_pairing = pair(x.lattice, bc.k, surface.surface_class)
            if pair(x.lattice, surface.surface_class, surface.surface_class) == 0:
                constraints = satisfies_basic_class_constraints(
                    x, surface, bc.k, presentation)
        rows.append(ClassAudit(
            coords=bc.k,
            sw=bc.sw,
            characteristic=is_characteristic(x.lattice, bc.k),
            square_ok=pair(x.lattice, bc.k, bc.k) == target,
            surface_pairing=surface_pairing,
            constraints_ok=constraints,
        ))
    return tuple(rows)


def input_entry(name: str, mf: ManifoldFile) -> dict:
    return {"name": name, "digest": digest(mf)}


def presentation_provenance(presentation: GluedLatticePresentation) -> tuple[dict, ...]:
    rows = []
    for i, br in enumerate(presentation.basis_roles):
        entry = {"index": i, "role": br.role.value, "label": br.label}
        if br.role.value == "from_x1":
            entry["vector_in_input"] = _enc_vector(
                presentation.w1_basis.generators[br.index])
        elif br.role.value == "from_x2":
            entry["vector_in_input"] = _enc_vector(
                presentation.w2_basis.generators[br.index])
        rows.append(entry)
    return tuple(rows)


def blowup_provenance(original_rank: int, times: int) -> tuple[dict, ...]:
    rows = [{"index": i, "role": "from_input", "label": f"X[{i}]"}
            for i in range(original_rank)]
    rows += [{"index": original_rank + j, "role": "exceptional", "label": f"E{j + 1}"}
             for j in range(times)]
    return tuple(rows)


def build_report(operation: str, inputs: tuple[dict, ...], output: ManifoldFile,
                 provenance: tuple[dict, ...] = (),
                 surface: SurfaceEmbedding | None = None,
                 presentation: GluedLatticePresentation | None = None,
                 undetermined: tuple[UndeterminedPair, ...] = (),
                 notes: tuple[str, ...] = ()) -> SurgeryReport:
    audit = audit_classes(output.manifold, surface, presentation)
    for row in audit:
        if not row.passed:
            raise InternalConsistencyError(
                f"emitted basic class {row.coords} fails its own audit")
    return SurgeryReport(
        operation=operation,
        inputs=inputs,
        output=output,
        provenance=provenance,
        class_audit=audit,
        undetermined=undetermined,
        notes=notes,
    )
