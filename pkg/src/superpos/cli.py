"""Command-line front end.

Subcommands::

    measure   one measure of one state file, CSV row on stdout
    sweep     a named one-parameter family to a CSV file
    table1    the three-qubit GHZ/W summary table
    certify   structural zero-measure verdicts for a density matrix
    schmidt   Schmidt coefficients across a bipartition

Exit codes: 0 on success with converged optimization, 1 on invalid
input, 2 when an optimization failed to converge.  All CSV output uses
15 significant digits and UNIX newlines; a run is fully determined by
its RunConfig (seed included), so repeating a run reproduces the output
byte for byte.  Wall-clock time appears only on stdout, never in files.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields

from . import roof
from .measures import MeasureVariant, concurrence_mixed, concurrence_pure, \
    cq_certify, classical_certify, ppt_min_eigenvalue
from .optimize import OptimizerConfig
from .states import (
    Partition,
    PureState,
    StateValidationError,
    load_state,
    make_state,
    schmidt_decompose,
)

SWEEP_FAMILIES = ("fig1", "fig2", "ghz_like", "w_like")


@dataclass
class RunConfig:
    """Everything a run depends on; serializable to a JSON config file."""

    command: str = "measure"
    state: str = None
    name: str = None
    kind: str = "nls"
    block: int = None
    partition: str = None
    variant: str = None
    family: str = None
    points: int = 20
    jobs: int = 1
    seed: int = 42
    restarts: int = 32
    max_iters: int = 2000
    tol: float = 1e-10
    out: str = None

    def optimizer(self) -> OptimizerConfig:
        return OptimizerConfig(
            seed=self.seed, restarts=self.restarts, max_iters=self.max_iters, tol=self.tol
        )

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        data = json.loads(text)
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        return cls(**data)

    def merged_with_file(self, path: str) -> "RunConfig":
        """Apply a config file on top of this one; file values win."""
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        known = {f.name for f in fields(type(self))}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        merged = asdict(self)
        merged.update(data)
        return type(self)(**merged)


def _fmt(x) -> str:
    return format(float(x), ".15g")


def _parse_partition(text: str, n_subsystems: int) -> Partition:
    blocks = []
    for part in text.split("|"):
        part = part.strip()
        if not part:
            raise ValueError(f"empty block in partition spec {text!r}")
        blocks.append(tuple(int(ch) for ch in part))
    partition = Partition(tuple(blocks))
    partition.check_covers(n_subsystems)
    return partition


def _load_input(config: RunConfig):
    if config.state:
        return load_state(config.state)
    if config.name:
        name, _, param = config.name.partition(":")
        params = tuple(float(p) for p in param.split(",")) if param else ()
        return make_state(name, params)
    raise ValueError("no input state: pass --state PATH or --name NAME[:PARAM]")


def _variant_for(config: RunConfig, default: MeasureVariant) -> MeasureVariant:
    if config.variant:
        return MeasureVariant.parse(config.variant)
    return default


def _write_csv(path: str, header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(row))
    text = "\n".join(lines) + "\n"
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _measure_report(state, config: RunConfig):
    cfg = config.optimizer()
    kind = config.kind
    if kind == "nls":
        variant = _variant_for(config, MeasureVariant.ROOT_OF_PAIRSUM)
        partition = (
            _parse_partition(config.partition, state.n_subsystems)
            if config.partition
            else Partition.singletons(state.n_subsystems)
        )
        if isinstance(state, PureState):
            return roof.nls_pure(state, partition, variant, cfg)
        return roof.nls_mixed_estimate(state, partition, variant, cfg)
    variant = _variant_for(config, MeasureVariant.SUM_OF_PAIRROOTS)
    if kind == "ls":
        if config.block is None:
            raise ValueError("measure ls needs --block INDEX")
        if isinstance(state, PureState):
            return roof.ls_block_pure(state, config.block, variant, cfg)
        return roof.ls_mixed_estimate(state, block=config.block, variant=variant, cfg=cfg)
    if kind == "ls-sym":
        if isinstance(state, PureState):
            return roof.ls_symmetric_pure(state, variant, cfg)
        return roof.ls_mixed_estimate(state, symmetric=True, variant=variant, cfg=cfg)
    raise ValueError(f"unknown measure kind {kind!r}; use nls, ls or ls-sym")


def cmd_measure(config: RunConfig) -> int:
    state = _load_input(config)
    started = time.perf_counter()
    report = _measure_report(state, config)
    elapsed = time.perf_counter() - started
    converged = "true" if report.converged else "false"
    print("value,converged,variant,wall_time_s")
    print(f"{_fmt(report.value)},{converged},{report.variant.value},{_fmt(elapsed)}")
    if config.out:
        _write_csv(
            config.out,
            ("value", "converged", "variant"),
            [(_fmt(report.value), converged, report.variant.value)],
        )
    return 0 if report.converged else 2


def _sweep_grid(points: int):
    if points < 2:
        raise ValueError("sweep needs at least 2 grid points")
    return [k / (points + 1) for k in range(1, points + 1)]


def _sweep_row(family: str, x: float, cfg: OptimizerConfig):
    if family == "fig1":
        state = make_state("fig1_state", x)
        ls_sum = roof.ls_block_pure(state, 0, MeasureVariant.SUM_OF_PAIRROOTS, cfg)
        ls_root = roof.ls_block_pure(state, 0, MeasureVariant.ROOT_OF_PAIRSUM, cfg)
        closed = roof.ls_closed_form_pure(state, 0)
        values = (x, ls_sum.value, closed.sum_of_pairroots, ls_root.value, closed.root_of_pairsum)
        return values, ls_sum.converged and ls_root.converged
    if family == "fig2":
        state = make_state("schmidt_state", x)
        nls = roof.nls_pure(state, cfg=cfg)
        ref = 2.0 * x * math.sqrt(max(0.0, 1.0 - x * x))
        return (x, nls.value, concurrence_pure(state), ref), nls.converged
    if family == "ghz_like":
        state = make_state("ghz_like", x)
        ls = roof.ls_symmetric_pure(state, cfg=cfg)
        nls = roof.nls_pure(state, cfg=cfg)
        ref = 2.0 * x * math.sqrt(max(0.0, 1.0 - x * x))
        return (x, ls.value, nls.value, ref), ls.converged and nls.converged
    if family == "w_like":
        state = make_state("w_like", x)
        nls = roof.nls_pure(state, cfg=cfg)
        parts = [roof.ls_block_pure(state, i, cfg=cfg) for i in range(3)]
        ls = roof.ls_symmetric_pure(state, cfg=cfg)
        values = (x, nls.value, parts[0].value, parts[1].value, parts[2].value, ls.value)
        done = nls.converged and ls.converged and all(p.converged for p in parts)
        return values, done
    raise ValueError(f"unknown sweep family {family!r}; known: {', '.join(SWEEP_FAMILIES)}")


_SWEEP_HEADERS = {
    "fig1": ("lambda", "ls_sum_of_pairroots", "closed_form_sum",
             "ls_root_of_pairsum", "closed_form_root"),
    "fig2": ("alpha", "nls", "concurrence", "closed_form"),
    "ghz_like": ("lambda", "ls", "nls", "closed_form"),
    "w_like": ("lambda", "nls", "ls_a", "ls_b", "ls_c", "ls"),
}


def cmd_sweep(config: RunConfig) -> int:
    family = config.family
    if family not in _SWEEP_HEADERS:
        raise ValueError(f"unknown sweep family {family!r}; known: {', '.join(SWEEP_FAMILIES)}")
    cfg = config.optimizer()
    grid = _sweep_grid(config.points)
    # Points are independent; evaluate in parallel when asked, but always
    # write rows in grid order.
    if config.jobs > 1:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(lambda x: _sweep_row(family, x, cfg), grid))
    else:
        results = [_sweep_row(family, x, cfg) for x in grid]
    rows = [tuple(_fmt(v) for v in values) for values, _ in results]
    all_converged = all(done for _, done in results)
    out = config.out or f"{family}.csv"
    _write_csv(out, _SWEEP_HEADERS[family], rows)
    print(f"wrote {out} ({len(rows)} rows)", file=sys.stderr)
    return 0 if all_converged else 2


_TABLE1_ROWS = (
    ("NLS in A|B|C", "nls", "0|1|2"),
    ("NLS in AB|C", "nls", "01|2"),
    ("NLS in A|BC", "nls", "0|12"),
    ("NLS in AC|B", "nls", "02|1"),
    ("LS in A", "ls", (0,)),
    ("LS in B", "ls", (1,)),
    ("LS in C", "ls", (2,)),
    ("LS in AB", "ls", (0, 1)),
    ("LS in AC", "ls", (0, 2)),
    ("LS in BC", "ls", (1, 2)),
)


def cmd_table1(config: RunConfig) -> int:
    cfg = config.optimizer()
    ghz = make_state("ghz")
    w = make_state("w_state")
    rows = []
    all_converged = True
    for label, kind, spec in _TABLE1_ROWS:
        per_state = []
        for state in (ghz, w):
            if kind == "nls":
                partition = _parse_partition(spec, 3)
                rep = roof.nls_pure(state, partition, MeasureVariant.ROOT_OF_PAIRSUM, cfg)
            else:
                rep = roof.ls_block_pure(state, spec, MeasureVariant.SUM_OF_PAIRROOTS, cfg)
            per_state.append(rep.value)
            all_converged = all_converged and rep.converged
        rows.append((label, per_state[0], per_state[1]))
    print(f"{'superposition':<16}{'GHZ':>20}{'W':>20}")
    for label, g, v in rows:
        print(f"{label:<16}{g:>20.6f}{v:>20.6f}")
    if config.out:
        _write_csv(
            config.out,
            ("superposition", "ghz", "w"),
            [(label, _fmt(g), _fmt(v)) for label, g, v in rows],
        )
    return 0 if all_converged else 2


def cmd_certify(config: RunConfig) -> int:
    state = _load_input(config)
    if isinstance(state, PureState):
        state = state.density()
    lines = []
    witness = {}
    side_names = "ABCDEF"
    for i in range(state.n_subsystems):
        result = cq_certify(state, (i,))
        label = f"CQ(side {side_names[i]})" if i == 0 else f"QC(side {side_names[i]})"
        lines.append(f"{label}: {result.verdict.value} (residual {result.residual:.6e})")
        witness[label] = {
            "verdict": result.verdict.value,
            "residual": result.residual,
            "detail": result.detail,
            "bases": [[[z.real, z.imag] for z in b.ravel()] for b in result.bases],
        }
    if state.n_subsystems == 2:
        result = classical_certify(state)
        lines.append(f"classical: {result.verdict.value} (residual {result.residual:.6e})")
        witness["classical"] = {
            "verdict": result.verdict.value,
            "residual": result.residual,
            "detail": result.detail,
        }
        min_eig = ppt_min_eigenvalue(state, Partition(((0,), (1,))))
        status = "satisfied" if min_eig >= -1e-10 else "violated"
        lines.append(f"PPT: {status} (min eig {_fmt(min_eig)})")
        witness["PPT"] = {"status": status, "min_eigenvalue": min_eig}
        concurrence = concurrence_mixed(state) if state.dims == (2, 2) else None
        if concurrence is not None:
            lines.append(f"concurrence: {_fmt(concurrence)}")
            witness["concurrence"] = concurrence
    for line in lines:
        print(line)
    if config.out:
        with open(config.out, "w", encoding="utf-8") as fh:
            json.dump(witness, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0


def cmd_schmidt(config: RunConfig) -> int:
    state = _load_input(config)
    if not isinstance(state, PureState):
        raise ValueError("schmidt needs a pure state")
    if config.partition:
        partition = _parse_partition(config.partition, state.n_subsystems)
    else:
        partition = Partition(((0,), tuple(range(1, state.n_subsystems))))
    coeffs, _, _ = schmidt_decompose(state, partition)
    print("k,coefficient")
    for k, c in enumerate(coeffs):
        print(f"{k},{_fmt(c)}")
    return 0


_COMMANDS = {
    "measure": cmd_measure,
    "sweep": cmd_sweep,
    "table1": cmd_table1,
    "certify": cmd_certify,
    "schmidt": cmd_schmidt,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="superpos",
        description="Local and nonlocal superposition measures for finite quantum states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    defaults = RunConfig()

    def common(p, state=True):
        if state:
            p.add_argument("--state", help="path to a JSON state file")
            p.add_argument("--name", help="catalog state, e.g. werner:0.6 or ghz_like:0.3")
        p.add_argument("--variant", help="pairwise functional: root or sum")
        p.add_argument("--seed", type=int, default=defaults.seed)
        p.add_argument("--restarts", type=int, default=defaults.restarts)
        p.add_argument("--max-iters", dest="max_iters", type=int, default=defaults.max_iters)
        p.add_argument("--tol", type=float, default=defaults.tol)
        p.add_argument("--out", help="output file path")
        p.add_argument("--config", help="JSON config file overriding the flags")

    p = sub.add_parser("measure", help="measure one state")
    common(p)
    p.add_argument("--kind", default=defaults.kind, help="nls, ls or ls-sym")
    p.add_argument("--block", type=int, help="subsystem index for --kind ls")
    p.add_argument("--partition", help="partition spec such as 0|1|2 or 01|2")

    p = sub.add_parser("sweep", help="sweep a named family to CSV")
    common(p, state=False)
    p.add_argument("--family", help="one of: " + ", ".join(SWEEP_FAMILIES))
    p.add_argument("--points", type=int, default=defaults.points)
    p.add_argument("--jobs", type=int, default=defaults.jobs)

    p = sub.add_parser("table1", help="GHZ/W three-qubit summary table")
    common(p, state=False)

    p = sub.add_parser("certify", help="structural zero-measure verdicts")
    common(p)

    p = sub.add_parser("schmidt", help="Schmidt coefficients across a bipartition")
    common(p)
    p.add_argument("--partition", help="two-block partition spec such as 0|12")

    return parser


def config_from_args(args) -> RunConfig:
    data = {f.name: getattr(args, f.name) for f in fields(RunConfig) if hasattr(args, f.name)}
    config = RunConfig(**{k: v for k, v in data.items() if v is not None})
    if getattr(args, "config", None):
        config = config.merged_with_file(args.config)
    return config


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
        return _COMMANDS[config.command](config)
    except (ValueError, OSError, StateValidationError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
