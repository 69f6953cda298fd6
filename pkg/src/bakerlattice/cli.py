"""Config-driven command line front end.

Every command reads one JSON config (or falls back to the bundled
third-walk defaults), writes its artifacts under --out, and prints a
one-line summary.  Exit codes: 0 success, 1 a checked assertion failed
(e.g. a norm inequality violated), 2 invalid configuration.  Artifacts
embed the config hash and seed so identical inputs give identical bytes.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import fourier, mixing
from .lattice import (
    WalkDistribution,
    a1_boundary_constant,
    a1_defect,
    span_check,
)
from .observables import (
    BoxFamily,
    CellObservable,
    PeriodicTail,
    estimate_average,
    observable_from_config,
    reduce_to_site,
)
from .phase import DEFAULT_BUDGET, Strip, simulate_walk
from .presets import PRESETS, preset
from .rational import format_rational, parse_rational, to_jsonable
from .svgplot import write_loglog_svg

COMMANDS = (
    "span-check",
    "simulate",
    "correlate",
    "mixing-report",
    "fourier-decay",
    "nowak-test",
    "a1-check",
    "audit",
)

_DEFAULT_CONFIG = {
    "walk": {"preset": "third-walk"},
    "observables": [
        {"kind": "periodic", "period": [2], "table": {"0": "1", "1": "-1"}}
    ],
    "family": "translationInvariant",
    "schedules": {
        "n_list": [1, 2, 3, 4, 5, 6, 8, 10, 12],
        "r_list": [1, 2, 4, 8, 16, 32],
        "radii": [4, 8, 16, 32],
        "eps": "1/10",
    },
    "seed": 0,
    "samples": 100000,
    "steps": 4,
    "mixing_kinds": ["M5"],
}


class ConfigError(ValueError):
    pass


def _merge_defaults(config: dict) -> dict:
    merged = json.loads(json.dumps(_DEFAULT_CONFIG))
    merged.update(config or {})
    sched = dict(_DEFAULT_CONFIG["schedules"])
    sched.update((config or {}).get("schedules", {}))
    merged["schedules"] = sched
    return merged


def _config_hash(config: dict) -> str:
    canon = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def _walk_from_config(config: dict) -> WalkDistribution:
    spec = config.get("walk")
    if not isinstance(spec, dict):
        raise ConfigError("config needs a 'walk' object")
    if "preset" in spec:
        name = spec["preset"]
        if name not in PRESETS:
            raise ConfigError(f"unknown preset {name!r}")
        return preset(name)
    try:
        return WalkDistribution.from_json_dict(spec)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid walk: {exc}") from exc


def _family_from_config(config: dict, dim: int) -> BoxFamily:
    fam = config.get("family", "translationInvariant")
    if isinstance(fam, dict):
        fam = fam.get("kind")
    try:
        return BoxFamily(dim, fam)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _observables_from_config(config: dict, walk: WalkDistribution, budget: int):
    out = []
    for spec in config.get("observables", []):
        try:
            obs = observable_from_config(walk.dim, spec)
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"invalid observable {spec!r}: {exc}") from exc
        depth = 0
        if isinstance(obs, CellObservable):
            depth = obs.depth
            obs = reduce_to_site(obs, walk, budget)
        out.append((obs, depth))
    if not out:
        raise ConfigError("config declares no observables")
    return out


def _locals_from_config(config: dict, walk: WalkDistribution):
    specs = config.get("locals")
    if not specs:
        return [mixing.LocalObservable.unit_square((0,) * walk.dim)]
    out = []
    for spec in specs:
        terms = []
        for term in spec["terms"]:
            strip = Strip(
                tuple(int(c) for c in term.get("site", (0,) * walk.dim)),
                parse_rational(term.get("lo", 0)),
                parse_rational(term.get("hi", 1)),
            )
            terms.append((strip, parse_rational(term.get("weight", 1))))
        out.append(mixing.LocalObservable(tuple(terms)))
    return out


def _write_json(path: Path, payload: dict):
    path.write_text(json.dumps(to_jsonable(payload), sort_keys=True, indent=2) + "\n")


def _meta(config: dict, command: str) -> dict:
    return {
        "command": command,
        "config_hash": _config_hash(config),
        "seed": config.get("seed", 0),
    }


# ---------------------------------------------------------------------------
# command bodies (each returns (exit_code, summary, payload))


def _cmd_span_check(config, walk, out_dir, args):
    verdict = span_check(walk)
    payload = {
        **_meta(config, "span-check"),
        "verdict": verdict.verdict,
        "basis": [list(row) for row in verdict.basis],
        "walk": walk.to_json_dict(),
    }
    _write_json(out_dir / "span_check.json", payload)
    return 0, json.dumps({"verdict": verdict.verdict}), payload


def _cmd_simulate(config, walk, out_dir, args):
    steps = int(config.get("steps", 4))
    samples = int(config.get("samples", 100000))
    seed = int(config.get("seed", 0))
    hist = simulate_walk(walk, steps, samples, seed)
    hist.write_csv(out_dir / "histogram.csv", {"config_hash": _config_hash(config)})
    payload = {
        **_meta(config, "simulate"),
        "steps": steps,
        "samples": samples,
        "empirical_mean": list(hist.empirical_mean()),
        "sites_seen": len(hist.counts),
    }
    _write_json(out_dir / "simulate.json", payload)
    return 0, f"simulate: {samples} samples, {len(hist.counts)} sites", payload


def _write_report(report, out_dir, stem, written):
    report.write_csv(out_dir / f"{stem}.csv")
    _write_json(out_dir / f"{stem}.json", report.to_json_dict())
    written.extend([f"{stem}.csv", f"{stem}.json"])


def _cmd_correlate(config, walk, out_dir, args):
    family = _family_from_config(config, walk.dim)
    observables = _observables_from_config(config, walk, args.budget)
    locals_ = _locals_from_config(config, walk)
    n_list = config["schedules"]["n_list"]
    written = []
    for i, (obs, offset) in enumerate(observables):
        for j, g in enumerate(locals_):
            report = mixing.m4_report(
                obs,
                g,
                walk,
                n_list,
                family,
                metadata={**_meta(config, "correlate"), "observable": i, "local": j, "m_offset": offset},
            )
            _write_report(report, out_dir, f"correlate_{i}_{j}", written)
    payload = {**_meta(config, "correlate"), "walk": walk.to_json_dict(), "artifacts": written}
    _write_json(out_dir / "correlate.json", payload)
    return 0, f"correlate: wrote {len(written)} artifacts", payload


def _cmd_mixing_report(config, walk, out_dir, args):
    family = _family_from_config(config, walk.dim)
    observables = _observables_from_config(config, walk, args.budget)
    locals_ = _locals_from_config(config, walk)
    sched = config["schedules"]
    kinds = [k.upper() for k in config.get("mixing_kinds", ["M5"])]
    meta = _meta(config, "mixing-report")
    written = []
    averages = []
    for i, (obs, offset) in enumerate(observables):
        est = estimate_average(obs, family, sched["radii"], seed=int(config.get("seed", 0)))
        averages.append(
            {
                "observable": i,
                "value": "NonConvergent" if est.non_convergent else est.value,
                "uniformity_defect": est.uniformity_defect,
            }
        )
        if est.non_convergent:
            continue
        if "M5" in kinds:
            rep = mixing.m5_report(obs, walk, sched["n_list"], family, offset, metadata={**meta, "observable": i})
            _write_report(rep, out_dir, f"m5_{i}", written)
            if args.plot:
                xs = sorted(rep.series)
                write_loglog_svg(
                    out_dir / f"m5_{i}.svg",
                    f"M5 gap, observable {i}",
                    xs,
                    {"gap": [float(rep.series[n]) for n in xs]},
                )
                written.append(f"m5_{i}.svg")
        if "M4" in kinds:
            for j, g in enumerate(locals_):
                rep = mixing.m4_report(obs, g, walk, sched["n_list"], family, metadata={**meta, "observable": i, "local": j})
                _write_report(rep, out_dir, f"m4_{i}_{j}", written)
    if "M2" in kinds or "M1" in kinds:
        pairs = [
            (i, j)
            for i in range(len(observables))
            for j in range(len(observables))
            if i <= j
        ]
        for i, j in pairs:
            f_obs, g_obs = observables[i][0], observables[j][0]
            if "M2" in kinds:
                rep = mixing.m2_table(
                    f_obs, g_obs, walk, sched["n_list"], sched["r_list"], family,
                    metadata={**meta, "observables": f"{i},{j}"},
                )
                _write_report(rep, out_dir, f"m2_{i}_{j}", written)
            if "M1" in kinds and isinstance(f_obs.tail, PeriodicTail):
                try:
                    rep = mixing.m1_report(f_obs, g_obs, walk, sched["n_list"], metadata={**meta, "observables": f"{i},{j}"})
                except ValueError:
                    continue
                _write_report(rep, out_dir, f"m1_{i}_{j}", written)
    payload = {**meta, "kinds": kinds, "walk": walk.to_json_dict(), "averages": averages, "artifacts": written}
    _write_json(out_dir / "mixing_report.json", payload)
    return 0, f"mixing-report: kinds={','.join(kinds)}, {len(written)} artifacts", payload


def _cmd_fourier_decay(config, walk, out_dir, args):
    sched = config["schedules"]
    eps = parse_rational(sched.get("eps", "1/10"))
    try:
        fc = fourier.FourierConfig(walk.dim, eps)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    # exact d-dimensional convolution powers grow fast; keep the default
    # schedule short above one dimension
    default_n = [4, 16, 64, 256] if walk.dim == 1 else [4, 16, 64]
    n_list = sorted(int(n) for n in sched.get("decay_n_list", default_n))
    n_max = n_list[-1]
    bandwidth = n_max * walk.max_step + fc.radius(n_max)
    grid = args.grid or sched.get("grid") or fourier.smallest_grid(bandwidth)
    grid = int(grid)
    if grid <= 2 * bandwidth:
        raise ConfigError(
            f"grid {grid} is below the bandwidth {2 * bandwidth + 1} required for n_max={n_max}"
        )
    rows = []
    for n in n_list:
        _, norms = fourier.defect_signal(walk, n, fc, grid)
        rows.append(norms)
    meta = _meta(config, "fourier-decay")
    csv_path = out_dir / "decay.csv"
    with open(csv_path, "w", newline="") as fh:
        fh.write(f"# config_hash={meta['config_hash']} seed={meta['seed']}\n")
        fh.write("n,r_n,l1_grid,sobolev,a_norm,bound\n")
        for row in rows:
            fh.write(
                f"{row.n},{row.r},{row.l1_grid!r},{row.sobolev!r},{row.a_norm!r},{row.bound!r}\n"
            )
    payload = {
        **meta,
        "eps": format_rational(eps),
        "eps_within_proof_bound": fc.eps_within_proof_bound,
        "eps_proof_bound": format_rational(fc.eps_proof_bound),
        "grid": grid,
        "rows": [
            {
                "n": row.n,
                "r": row.r,
                "l1_grid": row.l1_grid,
                "sobolev": row.sobolev,
                "a_norm": row.a_norm,
                "bound": row.bound,
            }
            for row in rows
        ],
        "monotone": all(
            rows[i].h_total >= rows[i + 1].h_total for i in range(len(rows) - 1)
        ),
        "embedding_ok": all(row.a_norm <= row.bound + 1e-8 for row in rows),
    }
    _write_json(out_dir / "fourier_decay.json", payload)
    if args.plot:
        write_loglog_svg(
            out_dir / "decay.svg",
            "defect norm decay",
            [row.n for row in rows],
            {
                "l1_grid": [row.l1_grid for row in rows],
                "sobolev": [row.sobolev for row in rows],
                "a_norm": [row.a_norm for row in rows],
            },
        )
    code = 0 if payload["embedding_ok"] else 1
    return code, f"fourier-decay: monotone={payload['monotone']} embedding_ok={payload['embedding_ok']}", payload


def _cmd_nowak_test(config, walk, out_dir, args):
    dims = [int(d) for d in config.get("nowak_dims", [1, 2, 3])]
    count = int(config.get("nowak_count", 200))
    radius = int(config.get("nowak_radius", 6))
    seed = int(config.get("seed", 0))
    rng = np.random.default_rng(seed)
    failures = []
    for d in dims:
        for k in range(count):
            sig = _random_signal(rng, d, radius)
            if not fourier.nowak_check(sig):
                failures.append({"dim": d, "index": k})
    payload = {
        **_meta(config, "nowak-test"),
        "dims": dims,
        "count": count,
        "radius": radius,
        "constants": {str(d): fourier.nowak_constant(d) for d in dims},
        "failures": failures,
    }
    _write_json(out_dir / "nowak_test.json", payload)
    code = 0 if not failures else 1
    return code, f"nowak-test: {len(failures)} violations in {count * len(dims)} signals", payload


def _random_signal(rng, dim, radius):
    from .lattice import LatticeSignal

    size = int(rng.integers(1, 7))
    entries = {}
    for _ in range(size):
        site = tuple(int(c) for c in rng.integers(-radius, radius + 1, size=dim))
        entries[site] = Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 10)))
    return LatticeSignal.from_entries(dim, entries)


def _cmd_a1_check(config, walk, out_dir, args):
    r_list = [int(r) for r in config["schedules"].get("a1_r_list", [10, 100, 1000])]
    constant = a1_boundary_constant(walk)
    rows = []
    ok = True
    for r in r_list:
        ratio = a1_defect(walk, r)
        bound_ok = ratio * r <= constant
        ok = ok and bound_ok
        rows.append(
            {
                "r": r,
                "defect": format_rational(ratio),
                "defect_times_r": format_rational(ratio * r),
                "ok": bound_ok,
            }
        )
    payload = {
        **_meta(config, "a1-check"),
        "boundary_constant": format_rational(constant),
        "rows": rows,
        "ok": ok,
    }
    _write_json(out_dir / "a1_check.json", payload)
    return (0 if ok else 1), f"a1-check: ok={ok} over r={r_list}", payload


def _cmd_audit(config, walk, out_dir, args):
    family = _family_from_config(config, walk.dim)
    observables = [obs for obs, _ in _observables_from_config(config, walk, args.budget)]
    locals_ = _locals_from_config(config, walk)
    sched = config["schedules"]
    record = mixing.implication_audit(
        walk,
        observables,
        locals_,
        sched["n_list"],
        sched["r_list"],
        family,
        metadata=_meta(config, "audit"),
    )
    record.write_csv(out_dir / "audit.csv")
    _write_json(out_dir / "audit.json", record.to_json_dict())
    code = 0 if record.ok else 1
    return code, f"audit: ok={record.ok} ({len(record.m2_rows)} M2 rows, {len(record.m4_rows)} M4 rows)", record.to_json_dict()


_BODIES = {
    "span-check": _cmd_span_check,
    "simulate": _cmd_simulate,
    "correlate": _cmd_correlate,
    "mixing-report": _cmd_mixing_report,
    "fourier-decay": _cmd_fourier_decay,
    "nowak-test": _cmd_nowak_test,
    "a1-check": _cmd_a1_check,
    "audit": _cmd_audit,
}


def run(command: str, config: dict, out_dir, seed=None, grid=None, budget=None, plot=False) -> int:
    """Validate the config, execute one command, write artifacts, return the exit code."""
    args = argparse.Namespace(grid=grid, budget=budget or DEFAULT_BUDGET, plot=plot)
    try:
        if command not in _BODIES:
            raise ConfigError(f"unknown command {command!r}")
        config = _merge_defaults(config)
        if seed is not None:
            config["seed"] = int(seed)
        walk = _walk_from_config(config)
        _family_from_config(config, walk.dim)
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        code, summary, _ = _BODIES[command](config, walk, out, args)
    except ConfigError as exc:
        print(json.dumps({"error": {"exit": 2, "message": str(exc)}}), file=sys.stderr)
        return 2
    except (ValueError, KeyError, TypeError) as exc:
        print(json.dumps({"error": {"exit": 2, "message": f"{type(exc).__name__}: {exc}"}}), file=sys.stderr)
        return 2
    print(summary)
    return code


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="bakerlattice",
        description="Random-walk baker lattices: mixing estimators and torus diagnostics.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", type=Path, default=None, help="JSON experiment config")
    parser.add_argument("--out", type=Path, default=Path("artifacts"), help="output directory")
    parser.add_argument("--seed", type=int, default=None, help="override the config seed")
    parser.add_argument("--plot", action="store_true", help="also emit SVG plots")
    parser.add_argument("--grid", type=int, default=None, help="torus grid points per axis")
    parser.add_argument("--budget", type=int, default=None, help="itinerary enumeration budget")
    opts = parser.parse_args(argv)

    config = {}
    if opts.config is not None:
        try:
            config = json.loads(Path(opts.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            print(json.dumps({"error": {"exit": 2, "message": f"cannot read config: {exc}"}}), file=sys.stderr)
            return 2
    return run(
        opts.command,
        config,
        opts.out,
        seed=opts.seed,
        grid=opts.grid,
        budget=opts.budget,
        plot=opts.plot,
    )


if __name__ == "__main__":
    sys.exit(main())
