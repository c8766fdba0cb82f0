"""Config-driven command line front end.

Queries come from a TOML config ([connection], [tolerances], [optimizer],
[oracle], [[queries]]) or from one-off subcommand flags.  Every query emits a
JSON record; profile queries additionally emit a CSV curve and a PNG figure.
Floats are written with 17 significant digits and +inf as the literal `inf`,
so records round-trip losslessly.  Identical config + seed gives identical
output bytes.

Exit codes: 0 all queries succeeded, 1 at least one query failed (the failure
is recorded in its JSON record), 2 configuration or usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from .connection import TWO_PI, ConnectionSpec, PeriodicFunction, holonomy_summary
from .distances import (
    Branch,
    horizontal_distance,
    spectral_distance_fiber,
    spectral_distance_n2,
)
from .oracle import divergence_check, oracle_distance
from .states import PureState, TorusCoords, state_from_torus, to_bloch
from .topology import classify

QUERY_KINDS = ("distance", "classify", "profile-fiber", "profile-torus", "oracle")


class ConfigError(Exception):
    """Invalid configuration; message names the offending key."""


# ---------------------------------------------------------------------------
# configuration


@dataclass
class RunConfig:
    spec: ConnectionSpec
    tol_holonomy: float = 1e-9
    tol_phase: float = 1e-9
    k_max: int = 64
    opt_grid: int = 512
    opt_grid2d: int = 0
    refine_tol: float = 1e-10
    oracle_n: int = 256
    oracle_restarts: int = 8
    oracle_iters: int = 400
    oracle_seed: int = 0
    queries: list = field(default_factory=list)


def _as_number(block: dict, key: str, default, path: str, positive: bool = False):
    val = block.get(key, default)
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"{path}.{key}: expected a number, got {val!r}")
    if positive and val <= 0:
        raise ConfigError(f"{path}.{key}: must be positive, got {val!r}")
    return val


def _as_int(block: dict, key: str, default, path: str, minimum: Optional[int] = None):
    val = block.get(key, default)
    if isinstance(val, bool) or not isinstance(val, int):
        raise ConfigError(f"{path}.{key}: expected an integer, got {val!r}")
    if minimum is not None and val < minimum:
        raise ConfigError(f"{path}.{key}: must be >= {minimum}, got {val}")
    return val


def _parse_theta(entry, idx: int) -> PeriodicFunction:
    path = f"connection.theta[{idx}]"
    if not isinstance(entry, dict) or "mean" not in entry:
        raise ConfigError(f"{path}: expected a table with a 'mean' key")
    mean = entry["mean"]
    if isinstance(mean, bool) or not isinstance(mean, (int, float)):
        raise ConfigError(f"{path}.mean: expected a number, got {mean!r}")
    harmonics = []
    for h_idx, triple in enumerate(entry.get("harmonics", [])):
        hpath = f"{path}.harmonics[{h_idx}]"
        if not isinstance(triple, (list, tuple)) or len(triple) != 3:
            raise ConfigError(f"{hpath}: expected [m, cos_coeff, sin_coeff]")
        m, c, s = triple
        if isinstance(m, bool) or not isinstance(m, int) or m < 1:
            raise ConfigError(f"{hpath}: mode m must be a positive integer, got {m!r}")
        if any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in (c, s)):
            raise ConfigError(f"{hpath}: coefficients must be numbers")
        harmonics.append((m, float(c), float(s)))
    unknown = set(entry) - {"mean", "harmonics"}
    if unknown:
        raise ConfigError(f"{path}: unknown key {sorted(unknown)[0]!r}")
    return PeriodicFunction(float(mean), tuple(harmonics))


def load_config(path: str) -> RunConfig:
    """Parse and validate a TOML run configuration."""
    try:
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except tomllib.TOMLDecodeError as exc:  # message carries line/column
        raise ConfigError(f"{path}: {exc}")

    conn = doc.get("connection")
    if not isinstance(conn, dict) or "theta" not in conn:
        raise ConfigError("connection.theta: required")
    theta_list = conn["theta"]
    if not isinstance(theta_list, list) or len(theta_list) < 2:
        raise ConfigError("connection.theta: expected a list of at least 2 tables")
    spec = ConnectionSpec(tuple(_parse_theta(e, i) for i, e in enumerate(theta_list)))

    tols = doc.get("tolerances", {})
    opt = doc.get("optimizer", {})
    orc = doc.get("oracle", {})
    cfg = RunConfig(
        spec=spec,
        tol_holonomy=float(_as_number(tols, "holonomy", 1e-9, "tolerances", positive=True)),
        tol_phase=float(_as_number(tols, "phase", 1e-9, "tolerances", positive=True)),
        k_max=_as_int(tols, "k_max", 64, "tolerances", minimum=1),
        opt_grid=_as_int(opt, "grid", 512, "optimizer", minimum=16),
        opt_grid2d=_as_int(opt, "grid2d", 0, "optimizer", minimum=0),
        refine_tol=float(_as_number(opt, "refine_tol", 1e-10, "optimizer", positive=True)),
        oracle_n=_as_int(orc, "n_grid", 256, "oracle", minimum=64),
        oracle_restarts=_as_int(orc, "restarts", 8, "oracle", minimum=1),
        oracle_iters=_as_int(orc, "iters", 400, "oracle", minimum=10),
        oracle_seed=_as_int(orc, "seed", 0, "oracle", minimum=0),
    )

    queries = doc.get("queries", [])
    if not isinstance(queries, list):
        raise ConfigError("queries: expected an array of tables")
    for q_idx, q in enumerate(queries):
        qpath = f"queries[{q_idx}]"
        if not isinstance(q, dict):
            raise ConfigError(f"{qpath}: expected a table")
        kind = q.get("kind")
        if kind not in QUERY_KINDS:
            raise ConfigError(f"{qpath}.kind: expected one of {QUERY_KINDS}, got {kind!r}")
        name = q.get("name", f"q{q_idx:02d}-{kind}")
        if not isinstance(name, str) or not name:
            raise ConfigError(f"{qpath}.name: expected a nonempty string")
        cfg.queries.append({**q, "name": name})
    return cfg


def _query_state(cfg: RunConfig, q: dict, prefix: str = "") -> PureState:
    qname = q["name"]
    n = cfg.spec.n
    moduli = q.get(prefix + "state")
    if moduli is None:
        moduli = [1.0 / math.sqrt(n)] * n
    if not isinstance(moduli, list) or len(moduli) != n:
        raise ConfigError(f"{qname}.{prefix}state: expected {n} amplitudes")
    phases = q.get(prefix + "phases", [0.0] * n)
    if not isinstance(phases, list) or len(phases) != n:
        raise ConfigError(f"{qname}.{prefix}phases: expected {n} angles")
    ray = np.array([float(m) * np.exp(1j * float(p)) for m, p in zip(moduli, phases)])
    base = float(q.get(prefix + "base", 0.0))
    try:
        return PureState(base, ray)
    except ValueError as exc:
        raise ConfigError(f"{qname}.{prefix}state: {exc}")


def _query_coords(cfg: RunConfig, q: dict) -> TorusCoords:
    qname = q["name"]
    n = cfg.spec.n
    k = q.get("k", 0)
    if isinstance(k, bool) or not isinstance(k, int):
        raise ConfigError(f"{qname}.k: expected an integer")
    tau0 = q.get("tau0", 0.0)
    if isinstance(tau0, bool) or not isinstance(tau0, (int, float)):
        raise ConfigError(f"{qname}.tau0: expected a number")
    if not 0.0 <= tau0 < TWO_PI:
        raise ConfigError(f"{qname}.tau0: expected a value in [0, 2pi)")
    phi = q.get("phi", [0.0] * (n - 1))
    if isinstance(phi, (int, float)) and not isinstance(phi, bool):
        phi = [phi]
    if not isinstance(phi, list) or len(phi) != n - 1:
        raise ConfigError(f"{qname}.phi: expected {n - 1} angles (phi_2..phi_n)")
    return TorusCoords(k, float(tau0), tuple(float(p) for p in phi))


# ---------------------------------------------------------------------------
# serialization


def _fmt(x) -> str:
    """One float as a JSON/CSV token: 17 significant digits, `inf` literal."""
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return format(x, ".17g")


def _json_dump(obj, out: list) -> None:
    if obj is None or isinstance(obj, bool):
        out.append(json.dumps(obj))
    elif isinstance(obj, (int, np.integer)) and not isinstance(obj, bool):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        token = _fmt(obj)
        out.append(f'"{token}"' if token in ("inf", "-inf", "nan") else token)
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for i, key in enumerate(sorted(obj)):
            if i:
                out.append(", ")
            out.append(json.dumps(str(key)) + ": ")
            _json_dump(obj[key], out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(", ")
            _json_dump(item, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def record_text(record: dict) -> str:
    out: list = []
    _json_dump(record, out)
    return "".join(out) + "\n"


def _atomic_write(path: str, data: bytes) -> None:
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# query execution


def _distance_payload(cfg: RunConfig, q: dict) -> dict:
    xi = _query_state(cfg, q)
    coords = _query_coords(cfg, q)
    zeta = state_from_torus(cfg.spec, xi, coords)
    payload: dict = {}
    if cfg.spec.n == 2:
        res = spectral_distance_n2(
            cfg.spec,
            xi,
            coords=coords,
            grid_n=cfg.opt_grid,
            grid2d_n=cfg.opt_grid2d,
            refine_tol=cfg.refine_tol,
            tol=cfg.tol_phase,
        )
    elif coords.tau0 == 0.0:
        res = spectral_distance_fiber(cfg.spec, xi, coords, tol=cfg.tol_phase)
    else:
        raise ValueError("no closed form for n >= 3 off the fiber; use an oracle query")
    payload["d_spectral"] = res.value
    payload["branch"] = res.branch.value
    payload["warning"] = res.warning
    payload["argmax"] = (
        None if res.argmax is None else {"T": res.argmax.T, "Delta": res.argmax.Delta}
    )
    hor = horizontal_distance(cfg.spec, xi, zeta, k_max=cfg.k_max, tol=cfg.tol_phase)
    payload["d_horizontal"] = hor.value
    return payload


def _classify_payload(cfg: RunConfig, q: dict) -> dict:
    xi = _query_state(cfg, q)
    zeta = _query_state(cfg, q, prefix="zeta_")
    rel = classify(cfg.spec, xi, zeta, k_max=cfg.k_max, tol=cfg.tol_phase)
    return {"tag": rel.tag.value, "witness_k": rel.witness_k}


def _oracle_payload(cfg: RunConfig, q: dict, seed_override: Optional[int]) -> dict:
    xi = _query_state(cfg, q)
    coords = _query_coords(cfg, q)
    zeta = state_from_torus(cfg.spec, xi, coords)
    seed = cfg.oracle_seed if seed_override is None else seed_override
    n_grid = _as_int(q, "n_grid", cfg.oracle_n, q["name"], minimum=64)
    restarts = _as_int(q, "restarts", cfg.oracle_restarts, q["name"], minimum=1)
    iters = _as_int(q, "iters", cfg.oracle_iters, q["name"], minimum=10)
    try:
        rep = oracle_distance(
            cfg.spec, xi, zeta, N=n_grid, restarts=restarts, iters=iters,
            seed=seed, tol=cfg.tol_phase,
        )
    except ValueError:
        return {"divergent": divergence_check(cfg.spec, xi, zeta)}
    return {
        "best_value": rep.best_value,
        "comm_norm": rep.comm_norm,
        "iterations": rep.iterations,
        "restarts": rep.restarts,
        "converged": rep.converged,
        "slack": rep.slack,
        "snap_x": rep.snap_x,
        "snap_y": rep.snap_y,
        "seed_value": rep.seed_value,
        "n_grid": rep.n_grid,
    }


def _fiber_rows(cfg: RunConfig, q: dict):
    if cfg.spec.n != 2:
        raise ValueError("profile-fiber needs a rank-2 connection")
    xi = _query_state(cfg, q)
    k_values = q.get("k_values", [0, 1, 2, 3])
    if not isinstance(k_values, list) or not all(
        isinstance(k, int) and not isinstance(k, bool) for k in k_values
    ):
        raise ConfigError(f"{q['name']}.k_values: expected a list of integers")
    count = _as_int(q, "phi_count", 128, q["name"], minimum=2)
    summary = holonomy_summary(cfg.spec, tol=cfg.tol_holonomy)
    omega = summary.omega[1]
    R = to_bloch(xi).R
    rows = []
    for k in k_values:
        for i in range(count):
            phi = TWO_PI * i / count
            coords = TorusCoords(int(k), 0.0, (phi,))
            d_spec = spectral_distance_fiber(cfg.spec, xi, coords, tol=cfg.tol_phase).value
            zeta = state_from_torus(cfg.spec, xi, coords)
            d_hor = horizontal_distance(cfg.spec, xi, zeta, k_max=cfg.k_max, tol=cfg.tol_phase).value
            xi_angle = 2.0 * k * omega * math.pi + phi
            d_chord = 2.0 * R * abs(math.sin(0.5 * xi_angle))
            rows.append((int(k), phi, d_spec, d_hor, d_chord))
    return rows


def _torus_rows(cfg: RunConfig, q: dict):
    if cfg.spec.n != 2:
        raise ValueError("profile-torus needs a rank-2 connection")
    xi = _query_state(cfg, q)
    k = q.get("k", 0)
    if isinstance(k, bool) or not isinstance(k, int):
        raise ConfigError(f"{q['name']}.k: expected an integer")
    phi = q.get("phi", [0.0])
    if isinstance(phi, (int, float)) and not isinstance(phi, bool):
        phi = [phi]
    if not isinstance(phi, list) or len(phi) != 1:
        raise ConfigError(f"{q['name']}.phi: expected one angle")
    phi = float(phi[0])
    count = _as_int(q, "tau0_count", 128, q["name"], minimum=2)
    rows = []
    for i in range(count):
        tau0 = TWO_PI * i / count
        coords = TorusCoords(k, tau0, (phi,))
        d_spec = spectral_distance_n2(
            cfg.spec, xi, coords=coords, grid_n=cfg.opt_grid,
            grid2d_n=cfg.opt_grid2d, refine_tol=cfg.refine_tol, tol=cfg.tol_phase,
        ).value
        zeta = state_from_torus(cfg.spec, xi, coords)
        d_hor = horizontal_distance(cfg.spec, xi, zeta, k_max=cfg.k_max, tol=cfg.tol_phase).value
        rows.append((k, tau0, phi, d_spec, d_hor))
    return rows


def _write_csv(path: str, header: str, rows) -> None:
    lines = [header]
    for row in rows:
        lines.append(",".join(str(v) if isinstance(v, int) else _fmt(v) for v in row))
    _atomic_write(path, ("\n".join(lines) + "\n").encode())


def _render_profile(path: str, kind: str, rows) -> None:
    """PNG companion figure for a profile CSV; finite points only."""
    from matplotlib.figure import Figure

    fig = Figure(figsize=(7.0, 4.4), dpi=110)
    ax = fig.add_subplot(111)
    if kind == "profile-fiber":
        ks = sorted({r[0] for r in rows})
        for k in ks:
            pts = [r for r in rows if r[0] == k]
            xs = [r[1] for r in pts]
            ax.plot(xs, [r[2] for r in pts], label=f"spectral k={k}")
            ax.plot(xs, [r[4] for r in pts], linestyle="--", label=f"chord k={k}")
            acc = [(r[1], r[3]) for r in pts if math.isfinite(r[3])]
            if acc:
                ax.plot([a for a, _ in acc], [b for _, b in acc], "k.", markersize=8)
        ax.set_xlabel("phi")
    else:
        xs = [r[1] for r in rows]
        ax.plot(xs, [r[3] for r in rows], label="spectral")
        fin = [(x, r[4]) for x, r in zip(xs, rows) if math.isfinite(r[4])]
        if fin:
            ax.plot([a for a, _ in fin], [b for _, b in fin], linestyle="--", label="horizontal")
        ax.set_xlabel("tau0")
    ax.set_ylabel("distance")
    ax.legend(fontsize=7, ncol=2)
    fig.tight_layout()
    import io

    buf = io.BytesIO()
    fig.savefig(buf, format="png", metadata={"Software": ""})
    _atomic_write(path, buf.getvalue())


def run_query(cfg: RunConfig, q: dict, out_dir: str, seed_override: Optional[int]) -> dict:
    """Execute one query, write its artifacts, return the JSON record."""
    kind = q["kind"]
    name = q["name"]
    record: dict = {"kind": kind, "name": name, "ok": True, "error": None}
    echo = {k: v for k, v in q.items() if k not in ("kind", "name")}
    record["query"] = echo
    try:
        if kind == "distance":
            record["result"] = _distance_payload(cfg, q)
        elif kind == "classify":
            record["result"] = _classify_payload(cfg, q)
        elif kind == "oracle":
            record["result"] = _oracle_payload(cfg, q, seed_override)
        elif kind == "profile-fiber":
            rows = _fiber_rows(cfg, q)
            csv_path = os.path.join(out_dir, f"{name}.csv")
            _write_csv(csv_path, "k,phi,d_spectral,d_horizontal,d_chord", rows)
            _render_profile(os.path.join(out_dir, f"{name}.png"), kind, rows)
            record["result"] = {"rows": len(rows), "csv": f"{name}.csv", "png": f"{name}.png"}
        elif kind == "profile-torus":
            rows = _torus_rows(cfg, q)
            csv_path = os.path.join(out_dir, f"{name}.csv")
            _write_csv(csv_path, "k,tau0,phi,d_spectral,d_horizontal", rows)
            _render_profile(os.path.join(out_dir, f"{name}.png"), kind, rows)
            record["result"] = {"rows": len(rows), "csv": f"{name}.csv", "png": f"{name}.png"}
        else:  # pragma: no cover - kinds validated at load time
            raise ValueError(f"unknown query kind {kind!r}")
    except (ConfigError, ValueError, RuntimeError) as exc:
        record["ok"] = False
        record["error"] = str(exc)
        record["result"] = None
    _atomic_write(os.path.join(out_dir, f"{name}.json"), record_text(record).encode())
    return record


def run_queries(cfg: RunConfig, out_dir: str, seed_override: Optional[int] = None,
                query_filter: Optional[str] = None, workers: int = 1) -> int:
    """Run configured queries concurrently; 0 when all succeed, else 1."""
    queries = cfg.queries
    if query_filter is not None:
        queries = [q for q in queries if q["name"] == query_filter]
        if not queries:
            raise ConfigError(f"--query: no query named {query_filter!r}")
    os.makedirs(out_dir, exist_ok=True)
    if workers <= 1 or len(queries) <= 1:
        records = [run_query(cfg, q, out_dir, seed_override) for q in queries]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(
                pool.map(lambda q: run_query(cfg, q, out_dir, seed_override), queries)
            )
    return 0 if all(r["ok"] for r in records) else 1


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", required=True, help="TOML run configuration")
    sub.add_argument("--out", required=True, help="output directory")
    sub.add_argument("--seed", type=int, default=None, help="override oracle seed")
    sub.add_argument("--workers", type=int, default=1, help="concurrent query workers")


def _state_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--state", default=None, help="comma separated amplitudes of xi")
    sub.add_argument("--base", type=float, default=0.0, help="base point of xi")


def _coord_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--k", type=int, default=0, help="winding number")
    sub.add_argument("--tau0", type=float, default=0.0, help="base offset in [0, 2pi)")
    sub.add_argument("--phi", default=None, help="comma separated fiber angles phi_2..phi_n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="circledist",
        description="spectral and horizontal distances for circle bundles of pure states",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    run_p = subs.add_parser("run", help="run every query in the config")
    _add_common(run_p)
    run_p.add_argument("--query", default=None, help="run only the named query")

    dist_p = subs.add_parser("distance", help="closed-form distances for one pair")
    _add_common(dist_p)
    _state_flags(dist_p)
    _coord_flags(dist_p)

    cls_p = subs.add_parser("classify", help="relation of a state pair")
    _add_common(cls_p)
    _state_flags(cls_p)
    cls_p.add_argument("--zeta-state", default=None, help="comma separated amplitudes of zeta")
    cls_p.add_argument("--zeta-phases", default=None, help="comma separated phases of zeta")
    cls_p.add_argument("--zeta-base", type=float, default=0.0)

    fib_p = subs.add_parser("profile-fiber", help="sweep phi and k on the fiber (CSV + PNG)")
    _add_common(fib_p)
    _state_flags(fib_p)
    fib_p.add_argument("--k-values", default="0,1,2,3", help="comma separated windings")
    fib_p.add_argument("--phi-count", type=int, default=128)

    tor_p = subs.add_parser("profile-torus", help="sweep tau0 at fixed phi (CSV + PNG)")
    _add_common(tor_p)
    _state_flags(tor_p)
    tor_p.add_argument("--k", type=int, default=0)
    tor_p.add_argument("--phi", type=float, default=0.0)
    tor_p.add_argument("--tau0-count", type=int, default=128)

    orc_p = subs.add_parser("oracle", help="ascent lower bound for one pair (JSON)")
    _add_common(orc_p)
    _state_flags(orc_p)
    _coord_flags(orc_p)
    orc_p.add_argument("--n-grid", type=int, default=None, help="grid size N")
    orc_p.add_argument("--restarts", type=int, default=None)
    orc_p.add_argument("--iters", type=int, default=None)

    return parser


def _floats_arg(text: Optional[str], flag: str):
    if text is None:
        return None
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise ConfigError(f"{flag}: expected comma separated numbers, got {text!r}")


def _query_from_args(args) -> dict:
    q: dict = {"kind": args.command, "name": args.command}
    state = _floats_arg(getattr(args, "state", None), "--state")
    if state is not None:
        q["state"] = state
    if getattr(args, "base", 0.0):
        q["base"] = args.base
    if args.command in ("distance", "oracle"):
        q["k"] = args.k
        q["tau0"] = args.tau0
        phi = _floats_arg(args.phi, "--phi")
        if phi is not None:
            q["phi"] = phi
    if args.command == "classify":
        zstate = _floats_arg(args.zeta_state, "--zeta-state")
        if zstate is not None:
            q["zeta_state"] = zstate
        zphases = _floats_arg(args.zeta_phases, "--zeta-phases")
        if zphases is not None:
            q["zeta_phases"] = zphases
        if args.zeta_base:
            q["zeta_base"] = args.zeta_base
    if args.command == "profile-fiber":
        try:
            q["k_values"] = [int(tok) for tok in args.k_values.split(",") if tok.strip()]
        except ValueError:
            raise ConfigError(f"--k-values: expected comma separated integers, got {args.k_values!r}")
        q["phi_count"] = args.phi_count
    if args.command == "profile-torus":
        q["k"] = args.k
        q["phi"] = [args.phi]
        q["tau0_count"] = args.tau0_count
    if args.command == "oracle":
        for flag, key in (("n_grid", "n_grid"), ("restarts", "restarts"), ("iters", "iters")):
            val = getattr(args, flag)
            if val is not None:
                q[key] = val
    return q


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.command == "run":
            return run_queries(cfg, args.out, seed_override=args.seed,
                               query_filter=args.query, workers=max(1, args.workers))
        query = _query_from_args(args)
        cfg.queries = [query]
        return run_queries(cfg, args.out, seed_override=args.seed, workers=1)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
