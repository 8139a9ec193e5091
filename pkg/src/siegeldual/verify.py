"""Randomized identity suite: one entry per (check, trial) with status and timing."""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field as dc_field
from typing import Callable

from .errors import SiegelError
from .exact.fields import Field, parse_field
from .generate import random_lattice, random_shape, random_siegel
from .lattice import roundtrip_dual, verify_kernel_span, verify_pairing
from .linalg import Mat
from .partitions import jordan_data_from_k
from .serialize import lattice_to_json, matrix_to_json, ptable_to_json, siegel_to_json
from .siegel import (
    SiegelObject,
    build_B,
    build_Bbar,
    build_gothic_P,
    build_gothic_S,
    compute_P,
    dual_siegel,
    recover_Bbar,
    verify_BBbar,
    verify_recurrence,
)

CHECKS = ("recurrence", "b_bbar", "recover_bbar", "gothic_inverse", "double_dual",
          "m1_closed_form", "pairing", "kernel_span", "roundtrip")


@dataclass
class RunConfig:
    seed: int = 0
    field: str | dict = "rationals"
    m: int = 2
    k: tuple[int, ...] | None = None
    trials: int = 10
    bound: int = 2
    degree: int = 1
    max_r: int = 6
    checks: tuple[str, ...] = CHECKS
    jobs: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trial count must be >= 1")
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if self.k is not None:
            self.k = tuple(int(x) for x in self.k)
            if len(self.k) != self.m + 1:
                raise ValueError(f"k needs m + 1 = {self.m + 1} entries, got {len(self.k)}")
            if any(x < 0 for x in self.k):
                raise ValueError("k entries must be non-negative")
        unknown = set(self.checks) - set(CHECKS)
        if unknown:
            raise ValueError(f"unknown checks {sorted(unknown)}")


@dataclass
class CheckResult:
    trial: int
    check: str
    status: str  # pass / fail / skipped
    duration: float
    detail: str = ""
    counterexample: dict | None = None


@dataclass
class VerifyReport:
    config: dict
    results: list[CheckResult] = dc_field(default_factory=list)

    @property
    def status(self) -> str:
        return "fail" if any(r.status == "fail" for r in self.results) else "pass"

    def summary(self) -> dict:
        counts = {s: sum(1 for r in self.results if r.status == s) for s in ("pass", "fail", "skipped")}
        return {"status": self.status, **counts}

    def to_json(self, timing: bool = True) -> dict:
        rows = []
        for r in self.results:
            d = asdict(r)
            if not timing:
                d["duration"] = 0.0
            else:
                d["duration"] = round(d["duration"], 6)
            rows.append(d)
        return {"type": "verify_report", "config": self.config, "results": rows,
                "summary": self.summary()}


def _siegel_checks(S: SiegelObject) -> dict[str, Callable[[], tuple[bool | None, str, dict | None]]]:
    P = compute_P(S)

    def recurrence():
        rep = verify_recurrence(S, P)
        return rep["passed"], f"{rep['tuples']} tuples", None if rep["passed"] else {
            "failures": [list(t) for t in rep["failures"]], "ptable": ptable_to_json(P)}

    def b_bbar():
        rep = verify_BBbar(S, P)
        bad = rep["failures"]
        return rep["passed"], "", None if rep["passed"] else {
            "coefficient": bad[0], "matrix": matrix_to_json(rep["product"].coeff(bad[0]))}

    def recover():
        X = recover_Bbar(build_B(S), S.k)
        ok = X == build_Bbar(S, P)
        return ok, "", None if ok else {"recovered": [matrix_to_json(c) for c in X.coeffs]}

    def gothic():
        prod = build_gothic_P(S, P) @ build_gothic_S(S)
        ok = prod == Mat.identity(S.field, S.r)
        return ok, "", None if ok else {"matrix": matrix_to_json(prod)}

    def double_dual():
        back = dual_siegel(dual_siegel(S, P))
        ok = back == S
        return ok, "", None if ok else {"double_dual": siegel_to_json(back)}

    def m1():
        if S.m != 1:
            return None, "only for m = 1", None
        Sb = dual_siegel(S, P)
        ok = Sb[1, 0, 2, 0] == -S[1, 0, 2, 0].T
        return ok, "", None if ok else {"dual": siegel_to_json(Sb)}

    def pairing():
        rep = verify_pairing(S)
        return rep["passed"], "", None if rep["passed"] else {"failures": rep["failures"][:10]}

    def span():
        rep = verify_kernel_span(S)
        detail = f"omega rank {rep['omega_rank']}/{rep['omega_expected']}, chi rank {rep['chi_rank']}/{rep['chi_expected']}"
        return rep["passed"], detail, None if rep["passed"] else rep

    return {"recurrence": recurrence, "b_bbar": b_bbar, "recover_bbar": recover,
            "gothic_inverse": gothic, "double_dual": double_dual, "m1_closed_form": m1,
            "pairing": pairing, "kernel_span": span}


def run_trial(cfg: RunConfig, trial: int) -> list[CheckResult]:
    """All selected checks on the instances of one trial (seeded by ``(seed, trial)``)."""
    F: Field = parse_field(cfg.field)
    rng = random.Random(f"{cfg.seed}:{trial}")
    k = cfg.k if cfg.k is not None else random_shape(cfg.m, rng, cfg.max_r)
    S = random_siegel(F, k, rng, cfg.bound, cfg.degree)
    out = []
    checks = _siegel_checks(S)
    for name in cfg.checks:
        t0 = time.perf_counter()
        if name == "roundtrip":
            status, detail, cex = _roundtrip(F, k, rng, cfg)
        else:
            try:
                ok, detail, cex = checks[name]()
            except SiegelError as exc:
                ok, detail, cex = False, f"{type(exc).__name__}: {exc}", None
            status = "skipped" if ok is None else "pass" if ok else "fail"
        if cex is not None:
            cex = {"instance": siegel_to_json(S), **cex} if name != "roundtrip" else cex
        out.append(CheckResult(trial, name, status, time.perf_counter() - t0, detail, cex))
    return out


def _roundtrip(F: Field, k, rng: random.Random, cfg: RunConfig):
    jd = jordan_data_from_k(k)
    L = random_lattice(F, jd, rng, cfg.bound, cfg.degree)
    if L is None:
        return "skipped", "no lattice satisfying the spanning condition", None
    try:
        rep = roundtrip_dual(L)
    except SiegelError as exc:
        return "fail", f"{type(exc).__name__}: {exc}", {"instance": lattice_to_json(L)}
    if rep["status"] == "inadmissible":
        return "skipped", f"inadmissible dual: {rep['reason']}", None
    if rep["passed"]:
        return "pass", "", None
    return "fail", "dual lattice Siegel object differs", {
        "instance": lattice_to_json(L), "mismatch": rep.get("mismatch"),
        "dual_extracted": siegel_to_json(rep["dual_siegel"])}


def run_verify(cfg: RunConfig) -> VerifyReport:
    config = {"seed": cfg.seed, "field": parse_field(cfg.field).to_json(), "m": cfg.m,
              "k": list(cfg.k) if cfg.k is not None else None, "trials": cfg.trials,
              "bound": cfg.bound, "degree": cfg.degree, "max_r": cfg.max_r, "checks": list(cfg.checks)}
    report = VerifyReport(config)
    if cfg.jobs > 1:
        with ProcessPoolExecutor(cfg.jobs) as pool:
            chunks = list(pool.map(run_trial, [cfg] * cfg.trials, range(cfg.trials)))
    else:
        chunks = [run_trial(cfg, t) for t in range(cfg.trials)]
    for chunk in chunks:
        report.results.extend(chunk)
    return report
