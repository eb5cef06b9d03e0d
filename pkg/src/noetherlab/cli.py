"""Command-line surface: channel construction, trade-off sweeps, verification.

Exit codes: 0 success, 1 invariant or bound failure, 2 usage error.
Sweep rows are emitted in deterministic parameter order regardless of how
the worker pool schedules them; NOETHERLAB_THREADS caps the pool size.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import bounds as bnd
from . import mcoracle
from . import metrics
from . import su2cov
from . import u1cov
from .chan import ChannelValidationError, QuantumChannel, max_action_deviation, random_channel
from .numkit import parallel_map
from .su2rep import SpinJ

__all__ = ["TradeoffRecord", "main", "simplex_grid", "su2_tradeoff_records", "u1_tradeoff_records"]

_CSV_TAIL = ["delta", "sqrt_delta", "unitarity", "one_minus_u", "bound_lower", "bound_upper", "ok"]


@dataclass(frozen=True)
class TradeoffRecord:
    """One sweep point: parameters plus measured and bound values."""

    params: dict
    delta: float
    unitarity: float
    bound_lower: float
    bound_upper: float
    ok: bool

    @property
    def sqrt_delta(self) -> float:
        return float(np.sqrt(self.delta))

    def as_dict(self) -> dict:
        return {
            "params": dict(self.params),
            "delta": self.delta,
            "sqrt_delta": self.sqrt_delta,
            "unitarity": self.unitarity,
            "one_minus_u": 1.0 - self.unitarity,
            "bound_lower": self.bound_lower,
            "bound_upper": self.bound_upper,
            "ok": self.ok,
        }

    def csv_row(self) -> list:
        d = self.as_dict()
        return list(self.params.values()) + [d[k] for k in _CSV_TAIL]


def simplex_grid(n_parts: int, n_steps: int):
    """All probability vectors with n_parts entries on a 1/n_steps grid,
    in a fixed lexicographic order."""
    for bars in combinations(range(n_steps + n_parts - 1), n_parts - 1):
        prev = -1
        counts = []
        for b in (*bars, n_steps + n_parts - 1):
            counts.append(b - prev - 1)
            prev = b
        yield tuple(c / n_steps for c in counts)


def su2_tradeoff_records(two_j: int, grid: float) -> list[TradeoffRecord]:
    spin = SpinJ(two_j)
    n = two_j + 1
    n_steps = round(1.0 / grid)

    def one(weights) -> TradeoffRecord:
        mix = su2cov.CovariantMixture(spin, spin, weights)
        delta = metrics.deviation_su2_closed(mix)
        u = metrics.unitarity_su2_closed(mix)
        lo, up = bnd.su2_bounds(mix)
        params = {"two_j": two_j}
        params.update({f"p_{i}": w for i, w in enumerate(weights)})
        return TradeoffRecord(params=params, delta=delta, unitarity=u,
                              bound_lower=lo.lhs, bound_upper=up.rhs,
                              ok=lo.satisfied and up.satisfied)

    return parallel_map(one, simplex_grid(n, n_steps))


def u1_tradeoff_records(levels, grid: float) -> list[TradeoffRecord]:
    spec = u1cov.EnergySpectrum(tuple(levels))
    if spec.d != 2:
        raise ValueError("the population-grid sweep is defined for two-level spectra")
    n_steps = round(1.0 / grid)
    values = [k / n_steps for k in range(n_steps + 1)]
    d = spec.d
    g = spec.degeneracy()
    width = spec.width
    coeff = g * (d - g) / (d - 1) * np.sqrt(2.0 / (d * (d + 1))) / width

    def one(pp) -> TradeoffRecord:
        p00, p11 = pp
        pop = np.array([[p00, 1.0 - p11], [1.0 - p00, p11]])
        delta = u1cov.u1_deviation(spec, pop)
        u = u1cov.optimal_unitarity_for_population(spec, pop)
        upper = 1.0 - coeff * np.sqrt(delta)
        params = {"levels": ";".join(str(x) for x in spec.levels), "p00": p00, "p11": p11}
        return TradeoffRecord(params=params, delta=delta, unitarity=u,
                              bound_lower=0.0, bound_upper=float(upper),
                              ok=bool(u <= upper + 1e-9))

    return parallel_map(one, [(a, b) for a in values for b in values])


def _write_records(records: list[TradeoffRecord], fmt: str, out_path: str | None) -> None:
    if fmt == "json":
        text = json.dumps([r.as_dict() for r in records], indent=1, sort_keys=True) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(list(records[0].params.keys()) + _CSV_TAIL)
        for r in records:
            writer.writerow(r.csv_row())
        text = buf.getvalue()
    if out_path:
        with open(out_path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- verification suite ------------------------------------------------------


def _check_roundtrip(rng: np.random.Generator, inject_corrupt: bool) -> dict:
    worst = 0.0
    failure = None
    fixtures = []
    for _ in range(30):
        d_in = int(rng.integers(2, 5))
        d_out = int(rng.integers(2, 5))
        rank = int(rng.integers(1, 4))
        if d_out * rank < d_in:
            rank = int(np.ceil(d_in / d_out))
        e = random_channel(d_in, d_out, rank, rng)
        fixtures.append((d_in, d_out, e.jamiolkowski))
    if inject_corrupt:
        d_in, d_out, j = fixtures[0]
        w, v = np.linalg.eigh(j)
        w[0] -= 1e-6
        fixtures.append((d_in, d_out, (v * w) @ v.conj().T))
    for d_in, d_out, j in fixtures:
        try:
            e = QuantumChannel(d_in, d_out, jamiolkowski=j)
        except ChannelValidationError as err:
            failure = f"fixture rejected: {err}"
            break
        for other in (
            QuantumChannel(e.d_in, e.d_out, kraus=e.kraus),
            QuantumChannel(e.d_in, e.d_out, liouville=e.liouville),
            QuantumChannel(e.d_in, e.d_out, stinespring=e.stinespring),
        ):
            worst = max(worst, max_action_deviation(e, other))
    passed = failure is None and worst < 1e-9
    return {"name": "channel_representation_roundtrip", "passed": passed,
            "detail": failure or f"max action deviation {worst:.3e}"}


def _check_mc_agreement(rng: np.random.Generator, samples: int) -> dict:
    half = SpinJ(1)
    e1 = su2cov.extremal_channel(half, half, 2)
    gens = metrics.su2_generators(half)
    seed = int(rng.integers(2**63))
    est_u = mcoracle.mc_unitarity(e1, samples, seed)
    est_d = mcoracle.mc_deviation(e1, gens, samples, seed + 1)
    ok_u = est_u.within(1.0 / 9.0)
    ok_d = est_d.within(4.0 / 9.0)
    e = random_channel(3, 2, 2, rng)
    exact = metrics.unitarity_jamiolkowski(e)
    dual = abs(exact - metrics.unitarity_complementary(e))
    est_r = mcoracle.mc_unitarity(e, samples, seed + 2)
    ok_r = est_r.within(exact) and dual < 1e-10
    return {"name": "monte_carlo_vs_closed_form", "passed": bool(ok_u and ok_d and ok_r),
            "detail": f"u_hat={est_u.mean:.6f} delta_hat={est_d.mean:.6f} dual_gap={dual:.2e}"}


def _check_su2_sweep(rng: np.random.Generator) -> dict:
    violations = 0
    total = 0
    for two_j in (1, 2, 3, 4):
        spin = SpinJ(two_j)
        for _ in range(500):
            mix = su2cov.CovariantMixture(spin, spin, tuple(rng.dirichlet([0.7] * (two_j + 1))))
            lo, up = bnd.su2_bounds(mix)
            total += 1
            if not (lo.satisfied and up.satisfied):
                violations += 1
    return {"name": "su2_tradeoff_bounds", "passed": violations == 0,
            "detail": f"{violations} violations over {total} mixtures"}


def _check_u1_sweep(rng: np.random.Generator) -> dict:
    spec = u1cov.EnergySpectrum((0, 1))
    bad = 0
    for p00 in np.linspace(0, 1, 21):
        for p11 in np.linspace(0, 1, 21):
            pop = np.array([[p00, 1 - p11], [1 - p00, p11]])
            ch = u1cov.build_extremal(spec, pop)
            if not bnd.u1_bound(ch).satisfied:
                bad += 1
    return {"name": "u1_tradeoff_bound", "passed": bad == 0, "detail": f"{bad} violations on the grid"}


def _check_closed_forms(rng: np.random.Generator) -> dict:
    errs = []
    for two_j in range(1, 5):
        spin = SpinJ(two_j)
        f1 = su2cov.f1_explicit(spin, spin, 2 * two_j)
        errs.append(abs(f1 + spin.j / (spin.j + 1)))
        direct = su2cov.extremal_channel(spin, spin, 2 * two_j)
        rho = np.zeros((spin.dim, spin.dim), dtype=complex)
        rho[0, 0] = 1.0
        got = float(np.real(direct.apply(rho)[-1, -1]))
        errs.append(abs(got - su2cov.time_reversal_fidelity(spin)))
    worst = max(errs)
    return {"name": "inversion_closed_forms", "passed": worst < 1e-10,
            "detail": f"max closed-form residual {worst:.3e}"}


def _check_conservation_split(rng: np.random.Generator) -> dict:
    spin = SpinJ(2)
    worst = 0.0
    for two_l in (0, 2, 4):
        ch = su2cov.extremal_channel(spin, spin, two_l)
        comp = QuantumChannel(spin.dim, spin.dim,
                              kraus=su2cov.extremal_kraus(spin, spin, two_l)).complementary()
        envs = su2cov.environment_spin_generators(two_l)
        for _ in range(5):
            v = rng.standard_normal(spin.dim) + 1j * rng.standard_normal(spin.dim)
            v /= np.linalg.norm(v)
            rho = np.outer(v, v.conj())
            p_in = su2cov.spin_polarization(rho, spin)
            p_out = su2cov.spin_polarization(ch.apply(rho), spin)
            sigma = comp.apply(rho)
            p_env = np.array([float(np.real(np.trace(g @ sigma))) for g in envs])
            worst = max(worst, float(np.max(np.abs(p_in - p_out - p_env))))
    return {"name": "angular_momentum_conservation_split", "passed": worst < 1e-9,
            "detail": f"max split residual {worst:.3e}"}


def run_verification(seed: int, samples: int, inject_corrupt: bool = False) -> dict:
    seq = np.random.SeedSequence(seed)
    children = seq.spawn(6)
    checks = [
        _check_roundtrip(np.random.default_rng(children[0]), inject_corrupt),
        _check_mc_agreement(np.random.default_rng(children[1]), samples),
        _check_su2_sweep(np.random.default_rng(children[2])),
        _check_u1_sweep(np.random.default_rng(children[3])),
        _check_closed_forms(np.random.default_rng(children[4])),
        _check_conservation_split(np.random.default_rng(children[5])),
    ]
    return {
        "seed": seed,
        "samples": samples,
        "checks": checks,
        "all_passed": all(c["passed"] for c in checks),
    }


# -- argument parsing ---------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="noetherlab")
    sub = parser.add_subparsers(dest="group", required=True)

    su2 = sub.add_parser("su2", help="rotation-covariant channels")
    su2_sub = su2.add_subparsers(dest="command", required=True)

    tr = su2_sub.add_parser("tradeoff", help="sweep the covariant simplex")
    tr.add_argument("--two-j", type=int, required=True)
    tr.add_argument("--grid", type=float, required=True)
    tr.add_argument("--out", default=None)
    tr.add_argument("--format", choices=("csv", "json"), default="csv")
    tr.add_argument("--seed", type=int, default=0)

    ka = su2_sub.add_parser("kappa", help="optimal inversion/amplification factors")
    ka.add_argument("--two-jA", type=int, required=True)
    ka.add_argument("--two-jB", type=int, required=True)

    ex = su2_sub.add_parser("channel", help="export an extremal channel")
    ex.add_argument("--two-jA", type=int, required=True)
    ex.add_argument("--two-jB", type=int, required=True)
    ex.add_argument("--two-L", type=int, required=True)
    ex.add_argument("--out", default=None)
    ex.add_argument("--repr", dest="representation",
                    choices=("kraus", "liouville", "jamiolkowski"), default="kraus")

    u1 = sub.add_parser("u1", help="time-translation covariant channels")
    u1_sub = u1.add_subparsers(dest="command", required=True)

    ut = u1_sub.add_parser("tradeoff", help="population-grid sweep with optimal unitarity")
    ut.add_argument("--levels", required=True)
    ut.add_argument("--grid", type=float, required=True)
    ut.add_argument("--out", default=None)
    ut.add_argument("--format", choices=("csv", "json"), default="csv")

    ub = u1_sub.add_parser("build", help="build an extremal channel from JSON spec")
    ub.add_argument("--json", dest="json_path", required=True)
    ub.add_argument("--out", default=None)

    ver = sub.add_parser("verify", help="verification suite")
    ver_sub = ver.add_subparsers(dest="command", required=True)
    va = ver_sub.add_parser("all", help="run every invariant check")
    va.add_argument("--seed", type=int, default=0)
    va.add_argument("--samples", type=int, default=20_000)
    va.add_argument("--inject-corrupt", action="store_true",
                    help="corrupt one channel fixture to exercise failure reporting")

    return parser


def _cmd_su2_tradeoff(args) -> int:
    if args.two_j < 1 or not 0.0 < args.grid <= 1.0:
        print("error: need --two-j >= 1 and 0 < --grid <= 1", file=sys.stderr)
        return 2
    records = su2_tradeoff_records(args.two_j, args.grid)
    _write_records(records, args.format, args.out)
    n_bad = sum(not r.ok for r in records)
    print(f"# su2 tradeoff two_j={args.two_j} grid={args.grid} seed={args.seed}: "
          f"{len(records)} records, {n_bad} bound violations", file=sys.stderr)
    return 0 if n_bad == 0 else 1


def _cmd_su2_kappa(args) -> int:
    try:
        report = su2cov.kappa_extrema(SpinJ(args.two_jA), SpinJ(args.two_jB))
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    print(json.dumps(report.as_dict(), sort_keys=True))
    return 0


def _cmd_su2_channel(args) -> int:
    try:
        channel = su2cov.extremal_channel(SpinJ(args.two_jA), SpinJ(args.two_jB), args.two_L)
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    payload = channel.to_json_dict(args.representation)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(payload, fh)
    else:
        print(json.dumps(payload))
    return 0


def _cmd_u1_tradeoff(args) -> int:
    if not 0.0 < args.grid <= 1.0:
        print("error: need 0 < --grid <= 1", file=sys.stderr)
        return 2
    try:
        levels = [int(x) for x in args.levels.split(",")]
        records = u1_tradeoff_records(levels, args.grid)
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    _write_records(records, args.format, args.out)
    n_bad = sum(not r.ok for r in records)
    print(f"# u1 tradeoff levels={args.levels} grid={args.grid}: "
          f"{len(records)} records, {n_bad} bound violations", file=sys.stderr)
    return 0 if n_bad == 0 else 1


def _cmd_u1_build(args) -> int:
    try:
        with open(args.json_path) as fh:
            obj = json.load(fh)
        spec = u1cov.EnergySpectrum(tuple(obj["levels"]))
        ch = u1cov.build_extremal(spec, np.array(obj["gamma"], dtype=float),
                                  phases=obj.get("phases"))
        channel = ch.to_channel()
    except (ValueError, KeyError, OSError, ChannelValidationError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    check = bnd.u1_bound(ch)
    summary = {
        "levels": list(spec.levels),
        "unitarity": metrics.unitarity_jamiolkowski(channel),
        "deviation": u1cov.u1_deviation(spec, ch.population_matrix()),
        "bound_upper": check.rhs,
        "bound_satisfied": check.satisfied,
    }
    print(json.dumps(summary, sort_keys=True))
    if args.out:
        channel.save_json(args.out, "jamiolkowski")
    return 0


def _cmd_verify_all(args) -> int:
    report = run_verification(args.seed, args.samples, inject_corrupt=args.inject_corrupt)
    print(json.dumps(report, sort_keys=True, indent=1))
    return 0 if report["all_passed"] else 1


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.group == "su2" and args.command == "tradeoff":
        return _cmd_su2_tradeoff(args)
    if args.group == "su2" and args.command == "kappa":
        return _cmd_su2_kappa(args)
    if args.group == "su2" and args.command == "channel":
        return _cmd_su2_channel(args)
    if args.group == "u1" and args.command == "tradeoff":
        return _cmd_u1_tradeoff(args)
    if args.group == "u1" and args.command == "build":
        return _cmd_u1_build(args)
    if args.group == "verify" and args.command == "all":
        return _cmd_verify_all(args)
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
