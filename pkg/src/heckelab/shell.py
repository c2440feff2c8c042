"""Command-line interface: census, gelfand, witness, verify, decay,
embed-check, and spher subcommands.

Reports are JSON lines (written to --out when given, otherwise to stdout)
plus a human-readable summary on stdout.  Double-coset tables are cached on
disk keyed by tree parameters and pair kind; cache writes are atomic
(write-temp-then-rename) and the cache root can be overridden with --cache
or the HECKELAB_CACHE environment variable.  Primary output files carry no
timestamps, so identical configurations reproduce identical bytes.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass, field

from . import spheromorph
from .embed import SCENARIOS, scenario_report
from .errors import ScaleError, SearchFailureError
from .hecke import HeckePair
from .permgroup import DoubleCosetTable, symmetric_group
from .treefam import LEVEL_POINT_CAP, LevelGroupSpec, TreeShape
from .witness import (DEFAULT_BUDGET, DEFAULT_K_MAX, DEFAULT_SEED,
                      WitnessCertificate, decay_table, fejer_coefficients,
                      haar_convergence_check, search_witness, verify_certificate)

CACHE_ENV = "HECKELAB_CACHE"
CACHE_VERSION = 1
DECAY_THRESHOLD = 1e-3


@dataclass
class RunConfig:
    """Validated parameters of one CLI invocation."""

    command: str
    d: int = 2
    k: int = 2
    l: int | None = None
    n: int | None = None
    n_max: int = 20
    k_max: int = DEFAULT_K_MAX
    seed: int = DEFAULT_SEED
    budget: int = DEFAULT_BUDGET
    out: str | None = None
    cache: str | None = None
    cert: str | None = None
    scenario: str | None = None
    op: str | None = None
    files: list = field(default_factory=list)

    def validate(self):
        if self.d < 2 or self.k < 2:
            raise ScaleError("tree degrees d and k must be at least 2")
        if self.l is not None:
            if self.l < 1:
                raise ScaleError("depth l must be at least 1")
            if self.d ** self.l > LEVEL_POINT_CAP:
                raise ScaleError(
                    f"d^l = {self.d ** self.l} exceeds the point cap {LEVEL_POINT_CAP}")
        if self.n is not None:
            if self.n < 1:
                raise ScaleError("level n must be at least 1")
            size = TreeShape(self.d, self.k).level_size(self.n)
            if size > LEVEL_POINT_CAP:
                raise ScaleError(
                    f"|V_n| = {size} exceeds the point cap {LEVEL_POINT_CAP}")
        if self.k_max < 1:
            raise ScaleError("k-max must be at least 1")
        if self.budget < 1:
            raise ScaleError("budget must be at least 1")
        if self.n_max < 1:
            raise ScaleError("n-max must be at least 1")
        return self


def cache_root(config: RunConfig) -> str:
    return config.cache or os.environ.get(CACHE_ENV) or ".heckelab-cache"


def _atomic_write(path: str, text: str):
    directory = os.path.dirname(path) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_or_build_pair(config: RunConfig, kind: str) -> HeckePair:
    """Build (S_points, tree group) with the double-coset table cached on disk."""
    if kind == "depth":
        spec = LevelGroupSpec("depth", config.d, config.d, config.l)
        key = f"dc_depth_d{config.d}_l{config.l}_v{CACHE_VERSION}.json"
        descriptor = {"kind": "depth", "d": config.d, "l": config.l}
    else:
        spec = LevelGroupSpec("ball", config.d, config.k, config.n)
        key = f"dc_level_d{config.d}_k{config.k}_n{config.n}_v{CACHE_VERSION}.json"
        descriptor = {"kind": "level", "d": config.d, "k": config.k, "n": config.n}
    path = os.path.join(cache_root(config), key)
    table = None
    if os.path.exists(path):
        try:
            table = DoubleCosetTable.load(path)
        except (ValueError, KeyError, json.JSONDecodeError):
            table = None
    if table is None:
        table = DoubleCosetTable(symmetric_group(spec.points), spec.realize())
        _atomic_write(path, json.dumps(table.to_json_dict(descriptor)) + "\n")
    pair = HeckePair(table.group, table.subgroup, table, name=spec.label())
    pair.tree_d = config.d
    pair.tree_l = spec.level
    return pair


class Reporter:
    """Routes JSON lines to --out (or stdout) and summary text to stdout."""

    def __init__(self, out_path: str | None):
        self.out_path = out_path
        self.lines = []

    def emit(self, record: dict):
        self.lines.append(json.dumps(record))

    def summary(self, text: str):
        prefix = "" if self.out_path else "# "
        print(prefix + text)

    def close(self):
        payload = "\n".join(self.lines) + ("\n" if self.lines else "")
        if self.out_path:
            _atomic_write(self.out_path, payload)
        elif payload:
            sys.stdout.write(payload)


# -- subcommands -----------------------------------------------------------------------

def _pair_row(pair: HeckePair, config: RunConfig, kind: str) -> dict:
    report = pair.is_commutative()
    row = {
        "format": "heckelab/census-row/v1",
        "d": config.d,
    }
    if kind == "depth":
        row["l"] = config.l
    else:
        row["k"] = config.k
        row["n"] = config.n
    row.update({
        "group_order": pair.group.order(),
        "subgroup_order": pair.subgroup.order(),
        "index": pair.size,
        "double_coset_count": pair.dim,
        "commutative": report.commutative,
        "witness_pair": list(report.witness) if report.witness else None,
    })
    return row


def cmd_census(config: RunConfig) -> int:
    reporter = Reporter(config.out)
    kinds = []
    if config.l is not None:
        kinds.append("depth")
    if config.n is not None:
        kinds.append("level")
    if not kinds:
        kinds = ["depth"]
        config.l = 3
        config.validate()
    for kind in kinds:
        pair = load_or_build_pair(config, kind)
        row = _pair_row(pair, config, kind)
        reporter.emit(row)
        reporter.summary(
            f"{pair.name}: |G|={row['group_order']} |H|={row['subgroup_order']} "
            f"index={row['index']} classes={row['double_coset_count']} "
            f"commutative={row['commutative']}")
    reporter.close()
    return 0


def cmd_gelfand(config: RunConfig) -> int:
    reporter = Reporter(config.out)
    pair = load_or_build_pair(config, "depth")
    report = pair.is_commutative()
    record = {
        "format": "heckelab/gelfand-verdict/v1",
        "d": config.d,
        "l": config.l,
        "commutative": report.commutative,
        "witness_pair": list(report.witness) if report.witness else None,
        "witness_entry": list(report.entry) if report.entry else None,
    }
    reporter.emit(record)
    verdict = "commutative" if report.commutative else "noncommutative"
    detail = "" if report.commutative else (
        f"; witness basis pair {report.witness}, commutator entry {report.entry}")
    reporter.summary(f"{pair.name} is {verdict}{detail}")
    reporter.close()
    return 0


def cmd_witness(config: RunConfig) -> int:
    pair = load_or_build_pair(config, "depth")
    out = config.out or "witness-certificate.json"
    try:
        cert = search_witness(pair, seed=config.seed, budget=config.budget,
                              k_max=config.k_max)
    except (SearchFailureError, ValueError) as exc:
        print(f"witness search failed: {exc}", file=sys.stderr)
        return 1
    _atomic_write(out, json.dumps(cert.to_json_dict()) + "\n")
    print(f"certificate written to {out}")
    print(f"max |τ(w^k)| over 1 <= k <= {cert.k_max}: {cert.max_abs_moment:.12f}")
    print(f"margin to 1: {1.0 - cert.max_abs_moment:.6e}")
    return 0


def cmd_verify(config: RunConfig) -> int:
    cert = WitnessCertificate.load(config.cert)
    config.d, config.l = cert.d, cert.l
    config.validate()
    pair = load_or_build_pair(config, "depth")
    report = verify_certificate(cert, pair)
    print(report.summary())
    return 0 if report.ok else 1


def cmd_decay(config: RunConfig) -> int:
    cert = WitnessCertificate.load(config.cert)
    shape = TreeShape(config.d, config.k)
    reporter = Reporter(config.out)
    report = decay_table(cert, shape, n_max=config.n_max, k_max=config.k_max,
                         threshold=DECAY_THRESHOLD)
    for row in report.rows():
        reporter.emit({"format": "heckelab/decay-row/v1", **row})
    coeffs = fejer_coefficients()
    haar_rows = haar_convergence_check(cert, coeffs, report.levels, shape)
    for row in haar_rows:
        reporter.emit({
            "format": "heckelab/haar-row/v1",
            "n": row["n"],
            "tensor_count": row["tensor_count"],
            "value_re": row["value"].real,
            "value_im": row["value"].imag,
            "deviation": row["deviation"],
            "bound": row["bound"],
        })
    if report.first_level_below is not None:
        reporter.summary(
            f"max_k |τ(w^k)|^|V_n| drops below {DECAY_THRESHOLD} at n = "
            f"{report.first_level_below} (tensor count "
            f"{shape.level_size(report.first_level_below)})")
    else:
        reporter.summary(
            f"decay did not reach {DECAY_THRESHOLD} within n <= {config.n_max}")
    last = haar_rows[-1]
    reporter.summary(
        f"circle-average deviation at n = {last['n']}: {last['deviation']:.3e} "
        f"(constant coefficient {coeffs[0]})")
    reporter.close()
    return 0 if report.first_level_below is not None else 1


def cmd_embed_check(config: RunConfig) -> int:
    names = [config.scenario] if config.scenario else sorted(SCENARIOS)
    all_ok = True
    for name in names:
        if name not in SCENARIOS:
            print(f"unknown scenario {name!r}; known: {', '.join(sorted(SCENARIOS))}",
                  file=sys.stderr)
            return 2
        scenario = SCENARIOS[name]()
        report = scenario_report(scenario)
        print(f"scenario {name}: {scenario!r}")
        for axiom, ok in report.rows():
            print(f"  {axiom:<28} {'PASS' if ok else 'FAIL'}")
        all_ok = all_ok and report.ok
    return 0 if all_ok else 1


def cmd_spher(config: RunConfig) -> int:
    def read(path):
        with open(path) as fh:
            return spheromorph.from_json_dict(json.load(fh))

    if config.op == "compose":
        if len(config.files) != 2:
            print("spher compose needs exactly two element files", file=sys.stderr)
            return 2
        result = spheromorph.canonical_form(
            spheromorph.compose(read(config.files[0]), read(config.files[1])))
        payload = json.dumps(spheromorph.to_json_dict(result))
    elif config.op == "canonical":
        result = spheromorph.canonical_form(read(config.files[0]))
        payload = json.dumps(spheromorph.to_json_dict(result))
    elif config.op == "key":
        if config.n is None:
            print("spher key needs --n", file=sys.stderr)
            return 2
        element = read(config.files[0])
        key = spheromorph.double_coset_key(element, config.n)
        payload = json.dumps({
            "format": "heckelab/coset-key/v1",
            "n": config.n,
            "images": list(key.images),
        })
    else:
        print(f"unknown spher operation {config.op!r}", file=sys.stderr)
        return 2
    if config.out:
        _atomic_write(config.out, payload + "\n")
        print(f"written to {config.out}")
    else:
        print(payload)
    return 0


# -- argument parsing --------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heckelab",
        description="Hecke algebras of tree pairs: tables, verdicts, witnesses")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, tree=True, out=True, cache=True):
        if tree:
            p.add_argument("--d", type=int, default=2, help="branching degree")
            p.add_argument("--k", type=int, default=2, help="root degree")
        if out:
            p.add_argument("--out", help="write the JSON report here")
        if cache:
            p.add_argument("--cache", help="cache directory (or HECKELAB_CACHE)")

    p = sub.add_parser("census", help="pair table: orders, classes, commutativity")
    common(p)
    p.add_argument("--l", "--depth", type=int, dest="l",
                   help="depth of the regular-tree pair")
    p.add_argument("--n", "--level", type=int, dest="n",
                   help="level of the (k, n) pair")

    p = sub.add_parser("gelfand", help="commutativity verdict for (S_{d^l}, Q_l)")
    common(p)
    p.add_argument("--l", "--depth", type=int, dest="l", required=True)

    p = sub.add_parser("witness", help="search witness unitaries, emit a certificate")
    common(p)
    p.add_argument("--l", "--depth", type=int, dest="l", default=3)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--k-max", type=int, default=DEFAULT_K_MAX, dest="k_max")

    p = sub.add_parser("verify", help="re-verify a witness certificate")
    common(p, tree=False, out=False)
    p.add_argument("cert", help="certificate file")

    p = sub.add_parser("decay", help="tensor-power moment decay and circle averages")
    common(p)
    p.add_argument("cert", help="certificate file")
    p.add_argument("--n-max", "--level-max", type=int, default=20, dest="n_max")
    p.add_argument("--k-max", type=int, default=DEFAULT_K_MAX, dest="k_max")

    p = sub.add_parser("embed-check", help="wreath-embedding axiom suite")
    common(p, tree=False)
    p.add_argument("--scenario", choices=sorted(SCENARIOS),
                   help="run one pinned scenario (default: all)")

    p = sub.add_parser("spher", help="almost-automorphism calculus")
    common(p, tree=False)
    p.add_argument("op", choices=["compose", "canonical", "key"])
    p.add_argument("files", nargs="+", help="element JSON files")
    p.add_argument("--n", type=int, help="level for the double-coset key")

    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    fields = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__}
    return RunConfig(**fields).validate()


COMMANDS = {
    "census": cmd_census,
    "gelfand": cmd_gelfand,
    "witness": cmd_witness,
    "verify": cmd_verify,
    "decay": cmd_decay,
    "embed-check": cmd_embed_check,
    "spher": cmd_spher,
}


def run(config: RunConfig) -> int:
    return COMMANDS[config.command](config)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
        return run(config)
    except ScaleError as exc:
        print(f"scale cap violated: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
