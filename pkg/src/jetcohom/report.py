"""Report assembly: compute cells, cross-check predictions, serialize.

Reports are deterministic: for a fixed configuration and code version the
JSON bytes are identical run to run (timings are only included when
explicitly requested).  Exact numbers are serialized as rational strings
("p/q" or an integer string); the fock identity suite reports decimal
floats.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from . import cache as cache_mod
from . import exactlinalg as xl
from .affine import predict_cohomology
from .cochain import (
    CellComplex,
    harmonic_space,
    isotypic_eigen_check,
)
from .fock import EnergyWindow, verify_identity_suite
from .liealg import AlgebraData, AlgebraSpec, build_algebra
from .reptheory import (
    IrrepSummand,
    expand,
    is_weyl_symmetric,
    multiplicity_one_audit,
    weights_of_basis,
)

SCHEMA_VERSION = 1


@dataclass
class RunConfig:
    series: str = "A"
    rank: int = 1
    maxDegree: int = 3
    maxEnergy: int = 6
    kMin: int = -2
    kMax: int = 3
    guard: int = 1
    tolerance: float = 1e-9
    cacheDir: str | None = None
    outputFormat: str = "json"
    timing: bool = False

    def __post_init__(self):
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.outputFormat not in ("json", "csv", "text"):
            raise ValueError(f"unknown output format {self.outputFormat!r}")
        if self.maxDegree < 0 or self.maxEnergy < 0:
            raise ValueError("maxDegree and maxEnergy must be nonnegative")

    @property
    def algebra_spec(self) -> AlgebraSpec:
        return AlgebraSpec(self.series, self.rank)

    @property
    def window(self) -> EnergyWindow:
        return EnergyWindow(self.kMin, self.kMax, self.guard)

    def to_json_dict(self) -> dict:
        return {
            "series": self.series,
            "rank": self.rank,
            "maxDegree": self.maxDegree,
            "maxEnergy": self.maxEnergy,
            "kMin": self.kMin,
            "kMax": self.kMax,
            "guard": self.guard,
            "tolerance": self.tolerance,
            "cacheDir": self.cacheDir,
            "outputFormat": self.outputFormat,
        }


def _frac(x: Fraction) -> str:
    return str(Fraction(x))


def _weight(w: Sequence[Fraction]) -> List[str]:
    return [_frac(x) for x in w]


def compute_cell(data: AlgebraData, cc: CellComplex, p: int, k: int) -> dict:
    """Compute one (degree, energy) cell record, exact checks included."""
    basis = cc.basis(p, k)
    dim = len(basis)
    block = cc.block(p, k)
    record: dict = {
        "algebra_hash": data.content_hash(),
        "p": p,
        "k": k,
        "dim": dim,
        "block": block.to_json_dict(data.content_hash()),
    }
    if dim == 0:
        record.update(
            rank_d=0,
            harmonic_dim=0,
            harmonic=[],
            checks={"d_squared_zero": True, "weyl_symmetric": True,
                    "isotypic": True, "positivity": True, "round_trip": True},
        )
        return record

    nxt = cc.block(p + 1, k)
    d_sq_zero = True
    if len(nxt.basisIn) and len(nxt.basisOut):
        d_sq_zero = xl.is_zero_matrix(xl.matmul(nxt.dense(), block.dense()))
    rank_d = xl.rank(block.dense()) if len(block.basisOut) else 0

    multiset = weights_of_basis(data, basis.monomials)
    weyl_ok = is_weyl_symmetric(data, multiset)

    harm = harmonic_space(data, p, k, cc)
    iso = isotypic_eigen_check(data, p, k, cc)
    positivity = all(scalar >= 0 for _lw, scalar, _ok in iso.components)
    round_trip = expand(data, harm.decomposition) == harm.weight_multiset

    record.update(
        rank_d=rank_d,
        harmonic_dim=harm.dimension,
        harmonic=[
            {
                "lowestWeight": _weight(s.lowestWeight),
                "dim": s.dimension,
                "multiplicity": s.multiplicity,
                "energy": k,
            }
            for s in harm.decomposition
        ],
        checks={
            "d_squared_zero": d_sq_zero,
            "weyl_symmetric": weyl_ok,
            "isotypic": iso.passed,
            "positivity": positivity,
            "round_trip": round_trip,
        },
    )
    return record


def cmd_compute(config: RunConfig) -> dict:
    """Compute all cells p <= maxDegree, k <= maxEnergy and cross-check the
    affine prediction degree by degree."""
    t0 = time.monotonic()
    data = build_algebra(config.algebra_spec)
    cc = CellComplex(data)
    cache_dir = cache_mod.resolve_cache_dir(config.cacheDir)
    ahash = data.content_hash()

    cells: List[dict] = []
    for p in range(config.maxDegree + 1):
        for k in range(config.maxEnergy + 1):
            record = cache_mod.load_cell(cache_dir, ahash, p, k)
            if record is None:
                record = compute_cell(data, cc, p, k)
                cache_mod.store_cell(cache_dir, record)
            cells.append(record)

    predictions = predict_cohomology(data, config.maxDegree)
    pred_json = {
        str(p): [
            {
                "lowestWeight": {
                    "energy": irrep.energy,
                    "finite": _weight(irrep.lowestWeight.finite),
                    "central": "0",
                },
                "energy": irrep.energy,
                "dim": irrep.finiteDim,
                "reducedWord": list(irrep.sourceWord),
            }
            for irrep in predictions[p]
        ]
        for p in predictions
    }

    match: Dict[str, bool] = {}
    for p in range(config.maxDegree + 1):
        computed = []
        for record in cells:
            if record["p"] != p:
                continue
            for s in record["harmonic"]:
                computed.extend([(s["energy"], tuple(s["lowestWeight"]), s["dim"])] * s["multiplicity"])
        predicted = [
            (i.energy, tuple(_weight(i.lowestWeight.finite)), i.finiteDim)
            for i in predictions[p]
            if i.energy <= config.maxEnergy
        ]
        match[str(p)] = sorted(computed) == sorted(predicted)

    per_cell = []
    for record in cells:
        summands = [
            IrrepSummand(
                lowestWeight=tuple(Fraction(x) for x in s["lowestWeight"]),
                multiplicity=s["multiplicity"],
                dimension=s["dim"],
            )
            for s in record["harmonic"]
        ]
        per_cell.append(((record["p"], record["k"]), summands))
    audit = multiplicity_one_audit(per_cell)

    checks_ok = {
        name: all(record["checks"][name] for record in cells)
        for name in ("d_squared_zero", "weyl_symmetric", "isotypic", "positivity", "round_trip")
    }

    report = {
        "schema_version": SCHEMA_VERSION,
        "kind": "compute",
        "config": config.to_json_dict(),
        "algebra": {
            "name": config.algebra_spec.name,
            "dim": data.dim,
            "coxeter": data.coxeter,
            "content_hash": ahash,
        },
        "conventions": {
            "weights": "lowest weights, simple-root coordinates",
            "numbers": "exact rationals serialized as strings",
        },
        "cells": [
            {k: v for k, v in record.items() if k != "block"} for record in cells
        ],
        "predictions": pred_json,
        "matchVerdict": match,
        "exact_suite": {
            **checks_ok,
            "multiplicity_one": {
                "pass": audit.passed,
                "lowest_weights": [_weight(w) for w in audit.lowest_weights],
                "violations": [[_weight(w), c] for w, c in audit.violations],
            },
        },
        "identity_suite": None,
        "timing": {"seconds": round(time.monotonic() - t0, 3)} if config.timing else None,
    }
    return report


def cmd_predict(config: RunConfig) -> dict:
    data = build_algebra(config.algebra_spec)
    predictions = predict_cohomology(data, config.maxDegree)
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "predict",
        "config": config.to_json_dict(),
        "algebra": {
            "name": config.algebra_spec.name,
            "dim": data.dim,
            "coxeter": data.coxeter,
            "content_hash": data.content_hash(),
        },
        "conventions": {
            "weights": "lowest weights, simple-root coordinates",
            "numbers": "exact rationals serialized as strings",
        },
        "predictions": {
            str(p): [
                {
                    "lowestWeight": {
                        "energy": i.energy,
                        "finite": _weight(i.lowestWeight.finite),
                        "central": "0",
                    },
                    "energy": i.energy,
                    "dim": i.finiteDim,
                    "reducedWord": list(i.sourceWord),
                }
                for i in predictions[p]
            ]
            for p in predictions
        },
    }


def cmd_verify_identities(config: RunConfig) -> dict:
    data = build_algebra(config.algebra_spec)
    verdicts = verify_identity_suite(data, config.window, config.tolerance)
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "verify-identities",
        "config": config.to_json_dict(),
        "algebra": {
            "name": config.algebra_spec.name,
            "dim": data.dim,
            "coxeter": data.coxeter,
            "content_hash": data.content_hash(),
        },
        "identity_suite": [v.to_json_dict() for v in verdicts],
    }


def serialize_report(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        return _to_csv(report)
    if fmt == "text":
        return _to_text(report)
    raise ValueError(f"unknown format {fmt!r}")


def _to_csv(report: dict) -> str:
    lines = ["p,k,dim,rank_d,harmonic_dim,predicted_dim,match"]
    if report.get("kind") != "compute":
        raise ValueError("csv output is only defined for compute reports")
    predicted_at: Dict[Tuple[int, int], int] = {}
    for p, irreps in report["predictions"].items():
        for i in irreps:
            key = (int(p), i["energy"])
            predicted_at[key] = predicted_at.get(key, 0) + i["dim"]
    for cell in report["cells"]:
        p, k = cell["p"], cell["k"]
        pred = predicted_at.get((p, k), 0)
        lines.append(
            f"{p},{k},{cell['dim']},{cell['rank_d']},{cell['harmonic_dim']},"
            f"{pred},{str(report['matchVerdict'][str(p)]).lower()}"
        )
    return "\n".join(lines) + "\n"


def _to_text(report: dict) -> str:
    out = []
    alg = report["algebra"]
    out.append(f"algebra {alg['name']}  dim {alg['dim']}  coxeter {alg['coxeter']}")
    if report.get("kind") == "predict":
        out.append("predicted harmonic decomposition (lowest weights, simple-root coords):")
        for p, irreps in sorted(report["predictions"].items(), key=lambda kv: int(kv[0])):
            rows = ", ".join(
                f"dim {i['dim']} at energy {i['energy']} (lowest {i['lowestWeight']['finite']})"
                for i in irreps
            )
            out.append(f"  H^{p}: {rows or 'none'}")
        return "\n".join(out) + "\n"
    if report.get("kind") == "verify-identities":
        out.append(f"{'identity':44s} {'status':8s} {'max abs error'}")
        for v in report["identity_suite"]:
            status = "SKIP" if v["skipped"] else ("pass" if v["pass"] else "FAIL")
            err = "-" if v["maxAbsError"] is None else f"{v['maxAbsError']:.3e}"
            extra = f"  ({v['reason']})" if v["skipped"] else ""
            out.append(f"{v['identity']:44s} {status:8s} {err}{extra}")
        return "\n".join(out) + "\n"

    header = f"{'p':>3} {'k':>3} {'dim':>6} {'rank d':>7} {'dim H':>6} {'harmonic decomposition':<40} {'match':>6}"
    out.append(header)
    out.append("-" * len(header))
    for cell in report["cells"]:
        decomp = " + ".join(
            (f"{s['multiplicity']}x" if s["multiplicity"] > 1 else "") + f"V({','.join(s['lowestWeight'])})[{s['dim']}]"
            for s in cell["harmonic"]
        ) or "."
        verdict = str(report["matchVerdict"][str(cell["p"])]).lower()
        out.append(
            f"{cell['p']:>3} {cell['k']:>3} {cell['dim']:>6} {cell['rank_d']:>7} "
            f"{cell['harmonic_dim']:>6} {decomp:<40} {verdict:>6}"
        )
    suite = report["exact_suite"]
    out.append("")
    out.append(
        "exact suite: "
        + "  ".join(
            f"{name}={'ok' if (suite[name] if isinstance(suite[name], bool) else suite[name]['pass']) else 'FAIL'}"
            for name in ("d_squared_zero", "weyl_symmetric", "isotypic", "positivity", "round_trip", "multiplicity_one")
        )
    )
    return "\n".join(out) + "\n"


def exit_code_for(report: dict) -> int:
    """0 all pass; 2 computed/predicted mismatch; 3 identity-suite failure."""
    if report.get("kind") == "verify-identities":
        bad = [v for v in report["identity_suite"] if not v["skipped"] and not v["pass"]]
        return 3 if bad else 0
    if report.get("kind") == "compute":
        if not all(report["matchVerdict"].values()):
            return 2
        suite = report["exact_suite"]
        flags = [v if isinstance(v, bool) else v["pass"] for v in suite.values()]
        return 2 if not all(flags) else 0
    return 0
