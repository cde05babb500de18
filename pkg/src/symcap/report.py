"""Markdown summary of every reproduced quantity, one table per topic."""

from __future__ import annotations

import math

import numpy as np

from . import bodies as B
from . import lagrangian as L
from . import mahler as M
from . import toric as T
from .records import VerificationRecord
from .suites import SuiteConfig, run_suites


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "yes" if x else "no"
    if isinstance(x, (int, np.integer)):
        return str(x)
    if isinstance(x, float):
        return f"{x:.6f}" if 1e-3 <= abs(x) < 1e6 or x == 0 else f"{x:.3e}"
    return str(x)


def _table(header: list[str], rows: list[list]) -> list[str]:
    out = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    out += ["| " + " | ".join(_fmt(c) for c in row) + " |" for row in rows]
    return out + [""]


def _passed(records: list[VerificationRecord]) -> bool:
    return all(r.passed for r in records)


def build_report(cfg: SuiteConfig) -> tuple[str, bool]:
    """Report text and whether every check behind it passed."""
    results = run_suites(["all"], cfg)
    lines = ["# symcap verification report", "",
             f"seed {cfg.seed}, Monte Carlo samples {cfg.mc_samples}, scan grid {cfg.scan_grid}", ""]

    lines += ["## Suites", ""]
    lines += _table(["suite", "records", "failed", "passed"],
                    [[name, len(rs), sum(not r.passed for r in rs), _passed(rs)] for name, rs in results.items()])

    lines += ["## Convex toric domains", ""]
    rows = []
    for n in range(1, 6):
        rows.append([f"c(Simplex(π, {n}))", math.pi, T.capacity_convex_toric(T.Simplex(math.pi, n)).value])
    worst = max(-r.slack for r in results["oracle"])
    rows.append(["closed form vs grid oracle (max relative gap, 20 regions)", 0.0, worst])
    lines += _table(["quantity", "expected", "measured"], rows)

    lines += ["## Cube products and self-polar products", ""]
    rows = []
    for n in (2, 3, 4):
        for p in (1.0, 1.5, 2.0, 3.0, B.INF):
            v = L.capacity_cube_product(B.LpBall(n, p)).value
            rows.append([f"c(B^{n}_{p} ×_L B^{n}_∞) = 4", 4.0, v])
    chain = min(r.slack for r in results["selfpolar"])
    rows.append(["self-polar bound chain, min slack over 50 bodies", ">= 0", chain])
    lines += _table(["claim", "expected", "measured"], rows)

    lines += ["## Mahler volumes", ""]
    rows = []
    for n in range(2, 6):
        rows.append([f"Hanner, n = {n}: Vol(K)Vol(K°) = 4^{n}/{n}!", 4.0 ** n / math.factorial(n),
                     min(r.quantities["lhs"] for r in results["hanner"] if r.claim_id.startswith(f"hanner/n{n}/"))])
    rows.append(["Φ_n(2) = 0, max over n <= 10", 0.0, max(abs(M.phi(n, 2.0)) for n in range(1, 11))])
    rows.append(["min Φ_n(p) on the open grid, n = 2..10", "> 0",
                 min(r.quantities["min_phi"] for r in results["mahler-scan"] if r.claim_id.endswith("positive-open-grid"))])
    lines += _table(["claim", "expected", "measured"], rows)

    lines += ["## Capacity of X_p", ""]
    rows = []
    for p in [1.0 + 0.25 * k for k in range(9)] + [B.INF]:
        rep = L.xp_capacity(p)
        rows.append([p, rep.quantities["branch"], rep.value, L.XpDomain(p).volume()])
    lines += _table(["p", "branch", "capacity", "volume"], rows)
    rows = [[r.claim_id, r.quantities.get("area", ""), r.quantities.get("mc_mean", ""),
             r.quantities.get("mc_std_error", ""), r.passed]
            for r in results["xp-transport"] if "/mc/" in r.claim_id]
    lines += _table(["check", "Ω_p area", "MC volume", "std error", "passed"], rows)

    lines += ["## Concave toric domains", ""]
    rows = [[r.claim_id, r.quantities.get("lower", ""), r.quantities.get("upper", ""), r.passed]
            for r in results["concave"] if "bounds" in r.claim_id]
    lines += _table(["region", "Gromov width", "min_i ‖e_i‖*", "passed"], rows)

    ok = all(_passed(rs) for rs in results.values())
    lines += [f"Overall: {'PASS' if ok else 'FAIL'}", ""]
    return "\n".join(lines), ok
