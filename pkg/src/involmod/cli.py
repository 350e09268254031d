"""
Command-line front end.

    involmod twisted --group A2
    involmod lpoly --group A1 --format json
    involmod verify --group A2 --star 2,1 --check all

Exit codes: 0 success, 1 a check failed, 2 usage error, 3 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import warnings
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import __version__, cache
from .coxeter import CoxeterSpec, enumerate_group, parse_word
from .errors import (
    ForbiddenSpecialization, InvalidCoxeterSpec, InvariantViolation, InvolmodError,
    TruncatedTable,
)
from .exactring import LaurentPoly, Localized, Residue, check_parameter, specialize
from .hecke import HeckeAlgebra, HeckeElt
from .invmod import LTable, compute_L_table, mu_of_az
from .linalg import field_rank
from .twistinv import enumerate_twisted
from .verify import CHECKS, Workbench, default_lambdas, run_checks, sample_residues

try:  # Python >= 3.11
    import tomllib
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

CACHE_ENV = "INVOLMOD_CACHE_DIR"
FORMATS = ("text", "json", "csv", "latex")


class UsageError(Exception):
    """Invalid command-line input; the message names the offending field."""


@dataclass
class RunConfig:
    command: str
    group: str
    star: str | None = None
    max_length: int | None = None
    fmt: str = "text"
    cache_dir: str | None = None
    seed: int = 0
    lam: str | None = None
    mod: int | None = None
    z: str | None = None
    left: str | None = None
    right: str | None = None
    right_json: str | None = None
    check: str = "all"


# -- config -------------------------------------------------------------------


def load_spec(group: str, star: str | None = None) -> CoxeterSpec:
    """--group accepts a preset name, a JSON/TOML file, or inline JSON."""
    text = group.strip()
    data = None
    if text.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise UsageError(f"--group: invalid inline JSON ({e})") from None
    elif Path(text).is_file():
        raw = Path(text).read_text(encoding="utf-8")
        try:
            data = tomllib.loads(raw) if text.endswith(".toml") else json.loads(raw)
        except (json.JSONDecodeError, tomllib.TOMLDecodeError) as e:
            raise UsageError(f"--group: cannot parse {text} ({e})") from None
    star_arg = _parse_star(star)
    try:
        if data is None:
            return CoxeterSpec.preset(text, None if star_arg is None else _zero_based(star_arg))
        if not isinstance(data, dict):
            raise UsageError("--group: expected an object with 'preset' or 'matrix'")
        return CoxeterSpec.from_mapping(data, star_arg)
    except InvalidCoxeterSpec as e:
        field = "--star" if star is not None and "star" in str(e) else "--group"
        raise UsageError(f"{field}: {e}") from None


def _parse_star(star: str | None):
    if star is None:
        return None
    s = star.strip()
    if s in ("id", "flip"):
        return s
    try:
        return [int(x) for x in s.split(",")]
    except ValueError:
        raise UsageError(f"--star: expected 'id', 'flip' or a 1-based list like 2,1; got {star!r}") from None


def _zero_based(star):
    return star if isinstance(star, str) else tuple(x - 1 for x in star)


def _parse_lambda(lam: str | None, mod: int | None):
    if lam is None:
        if mod is not None:
            raise UsageError("--mod needs --lambda")
        return None
    try:
        if mod is not None:
            value = Residue(int(lam), mod)
        else:
            value = Fraction(lam)
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(f"--lambda/--mod: {e}") from None
    try:
        return check_parameter(value)
    except ForbiddenSpecialization as e:
        raise UsageError(f"--lambda: {e}") from None


# -- rendering ----------------------------------------------------------------


def _cell(v, fmt: str):
    if isinstance(v, (LaurentPoly, Localized)):
        if fmt == "json":
            return v.to_json()
        return f"${v}$" if fmt == "latex" else str(v)
    if isinstance(v, (Fraction, Residue)):
        return str(v)
    return v


def _meta_value(v) -> str:
    return json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else str(v)


_LATEX_ESC = str.maketrans({"_": r"\_", "&": r"\&", "%": r"\%", "#": r"\#"})


def render(meta: dict, columns: list[str], rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        doc = dict(meta)
        doc["columns"] = columns
        doc["rows"] = [{c: _cell(r[c], fmt) for c in columns} for r in rows]
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_cell(r[c], fmt) for c in columns])
        return buf.getvalue()
    if fmt == "latex":
        head = " & ".join(c.translate(_LATEX_ESC) for c in columns)
        lines = [f"% {k}: {_meta_value(meta[k])}" for k in sorted(meta)]
        lines += ["\\begin{tabular}{" + "l" * len(columns) + "}", "\\hline", head + " \\\\", "\\hline"]
        for r in rows:
            cells = []
            for c in columns:
                v = _cell(r[c], fmt)
                cells.append(v if isinstance(v, str) and v.startswith("$") else str(v).translate(_LATEX_ESC))
            lines.append(" & ".join(cells) + " \\\\")
        lines += ["\\hline", "\\end{tabular}"]
        return "\n".join(lines) + "\n"
    # text
    table = [columns] + [[str(_cell(r[c], fmt)) for c in columns] for r in rows]
    widths = [max(len(row[i]) for row in table) for i in range(len(columns))]
    out = [f"# {k}: {_meta_value(meta[k])}" for k in sorted(meta)]
    for row in table:
        out.append("  ".join(x.ljust(wd) for x, wd in zip(row, widths)).rstrip())
    return "\n".join(out) + "\n"


# -- tables -------------------------------------------------------------------


class Session:
    """Builds group, twisted involutions and L-table on demand, using the cache."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.spec = load_spec(cfg.group, cfg.star)
        self._group = self._twist = self._lt = None

    @property
    def group(self):
        if self._group is None:
            self._group = enumerate_group(self.spec, max_length=self.cfg.max_length)
        return self._group

    @property
    def twist(self):
        if self._twist is None:
            if self.group.truncated:
                raise UsageError(f"--group: {self.spec.label()} is infinite or cut off; "
                                 "this command needs a finite group")
            self._twist = enumerate_twisted(self.group)
        return self._twist

    @property
    def ltable(self) -> LTable:
        if self._lt is None:
            d = self.cfg.cache_dir
            lt = cache.load(d, self.twist) if d else None
            if lt is None:
                lt = compute_L_table(self.twist)
                if d:
                    cache.store(d, lt)
            self._lt = lt
        return self._lt

    def meta(self, **extra) -> dict:
        m = {"group": self.spec.label(), "spec": self.spec.to_json(), "version": __version__}
        m.update(extra)
        return m

    def word(self, text: str, field: str) -> int:
        try:
            w = parse_word(text, self.group.rank)
            return self.group.index_of_word(w)
        except (ValueError, KeyError, IndexError) as e:
            raise UsageError(f"{field}: {e}") from None


def cmd_enumerate(s: Session) -> tuple[str, int]:
    g = s.group
    rows = [{"index": x, "word": g.word_str(x), "length": g.length[x],
             "inverse": g.word_str(g.inverse[x]) if g.inverse[x] >= 0 else "",
             "star": g.word_str(g.star[x]) if g.star[x] >= 0 else ""}
            for x in range(len(g))]
    meta = s.meta(order=len(g), truncated=g.truncated)
    if g.truncated:
        meta["cutoff"] = g.cutoff
    return render(meta, ["index", "word", "length", "inverse", "star"], rows, s.cfg.fmt), 0


def cmd_twisted(s: Session) -> tuple[str, int]:
    rows = s.twist.rows()
    cols = ["index", "word", "length", "rho", "ell_star", "expression", "sigma", "completion"]
    return render(s.meta(size=len(rows)), cols, rows, s.cfg.fmt), 0


def cmd_lpoly(s: Session) -> tuple[str, int]:
    lt, g = s.ltable, s.group
    order = s.twist.position
    rows = []
    for x, row in enumerate(lt.L):
        for z in sorted(row, key=order.__getitem__):
            rows.append({"x": g.word_str(x), "z": g.word_str(z), "L": row[z],
                         "Ltilde": lt.Ltilde[x][z], "n": lt.n[x].get(z, 0)})
    return render(s.meta(), ["x", "z", "L", "Ltilde", "n"], rows, s.cfg.fmt), 0


def cmd_mu(s: Session) -> tuple[str, int]:
    if s.cfg.z is None:
        raise UsageError("--z: required for mu")
    z = s.word(s.cfg.z, "--z")
    if z not in s.twist:
        raise UsageError(f"--z: {s.group.word_str(z)} is not a twisted involution")
    g = s.group
    h = mu_of_az(s.ltable, z)
    rows = [{"w": g.word_str(w), "coeff": c} for w, c in sorted(h.items())]
    return render(s.meta(z=g.word_str(z)), ["w", "coeff"], rows, s.cfg.fmt), 0


def cmd_pi(s: Session) -> tuple[str, int]:
    g, lt = s.group, s.ltable
    rows = [{"x": g.word_str(x), "pi": g.word_str(lt.pi[x])} for x in range(len(g))]
    return render(s.meta(), ["x", "pi"], rows, s.cfg.fmt), 0


def cmd_heckemul(s: Session) -> tuple[str, int]:
    g = s.group
    H = HeckeAlgebra(g)
    if s.cfg.left is None:
        raise UsageError("--left: required for heckemul")
    left = H.T(s.word(s.cfg.left, "--left"))
    if s.cfg.right_json is not None:
        try:
            right = H.from_json(json.loads(Path(s.cfg.right_json).read_text(encoding="utf-8")))
        except (OSError, ValueError, KeyError) as e:
            raise UsageError(f"--right-json: {e}") from None
    elif s.cfg.right is not None:
        right = H.T(s.word(s.cfg.right, "--right"))
    else:
        raise UsageError("--right: required for heckemul (or --right-json)")
    prod: HeckeElt = H.mult(left, right)
    rows = [{"w": g.word_str(w), "coeff": c} for w, c in sorted(prod.items())]
    return render(s.meta(), ["w", "coeff"], rows, s.cfg.fmt), 0


def _lambdas(cfg: RunConfig):
    if cfg.lam is None and cfg.mod is not None:
        try:
            return sample_residues(cfg.mod, cfg.seed)
        except (ValueError, ForbiddenSpecialization) as e:
            raise UsageError(f"--mod: {e}") from None
    lam = _parse_lambda(cfg.lam, cfg.mod)
    return default_lambdas(cfg.seed) if lam is None else [lam]


def cmd_specialize(s: Session) -> tuple[str, int]:
    lam = _parse_lambda(s.cfg.lam, s.cfg.mod)
    if lam is None:
        raise UsageError("--lambda: required for specialize")
    g, tw, lt = s.group, s.twist, s.ltable
    cols = [g.word_str(z) for z in tw.elements]
    rows, mat = [], []
    for x in range(len(g)):
        vals = [specialize(lt.Ltilde[x].get(z, LaurentPoly()), lam) for z in tw.elements]
        mat.append(vals)
        r = {"x": g.word_str(x)}
        r.update({c: str(v) for c, v in zip(cols, vals)})
        rows.append(r)
    rank = field_rank(mat)
    field = f"F_{lam.p}" if isinstance(lam, Residue) else "Q"
    meta = s.meta(field=field, rank=rank, size=len(tw))
    meta["lambda"] = str(lam)
    return render(meta, ["x"] + cols, rows, s.cfg.fmt), 0


def cmd_verify(s: Session) -> tuple[str, int]:
    cfg = s.cfg
    if cfg.check != "all" and cfg.check not in CHECKS:
        raise UsageError(f"--check: unknown check {cfg.check!r}; choose from all, {', '.join(CHECKS)}")
    if s.group.truncated:
        raise UsageError(f"--group: {s.spec.label()} is infinite or cut off; "
                         "verification covers finite groups only")
    names = None if cfg.check == "all" else [cfg.check]
    bench = Workbench(s.spec, seed=cfg.seed, ltable=s.ltable, group_arg=_shell_group(cfg.group))
    reports = run_checks(bench, names, _lambdas(cfg))
    ok = all(r.passed for r in reports)
    if cfg.fmt == "json":
        doc = s.meta(seed=cfg.seed, passed=ok, reports=[_stable(r.to_dict()) for r in reports])
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    else:
        lines = [f"# group: {s.spec.label()}", f"# seed: {cfg.seed}"]
        lines += [r.line() for r in reports]
        for r in reports:
            if not r.passed:
                lines.append(f"  reproduce: involmod {r.reproduce}")
        lines.append(f"{sum(r.passed for r in reports)}/{len(reports)} checks passed")
        text = "\n".join(lines) + "\n"
    return text, 0 if ok else 1


def _stable(d: dict) -> dict:
    # wall time is the only nondeterministic field; keep it but rounded
    d["wall_time"] = round(d["wall_time"], 3)
    return d


def _shell_group(group: str) -> str:
    return "'" + group + "'" if group.strip().startswith("{") else group


COMMANDS = {
    "enumerate": cmd_enumerate,
    "twisted": cmd_twisted,
    "lpoly": cmd_lpoly,
    "mu": cmd_mu,
    "pi": cmd_pi,
    "heckemul": cmd_heckemul,
    "verify": cmd_verify,
    "specialize": cmd_specialize,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="involmod", description=__doc__.split("\n\n")[1].strip(),
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"involmod {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--group", required=True,
                        help="preset (A3, B2, D4, I2(5), ~A2, ...), JSON/TOML file, or inline JSON")
    common.add_argument("--star", help="diagram involution: 'id', 'flip' or 1-based list like 2,1")
    common.add_argument("--max-length", type=int, help="length cutoff for infinite groups")
    common.add_argument("--format", dest="fmt", choices=FORMATS, default="text")
    common.add_argument("--cache-dir", default=os.environ.get(CACHE_ENV),
                        help=f"L-table cache directory (default ${CACHE_ENV}; unset = no cache)")
    common.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("enumerate", parents=[common], help="list group elements")
    sub.add_parser("twisted", parents=[common], help="twisted involutions with rho, l*, expressions")
    sub.add_parser("lpoly", parents=[common], help="full table of L, Ltilde and n")
    p = sub.add_parser("mu", parents=[common], help="mu(a_z) in the T-basis")
    p.add_argument("--z", required=True, help="word of a twisted involution")
    sub.add_parser("pi", parents=[common], help="the map W -> I* as pairs")
    p = sub.add_parser("heckemul", parents=[common], help="T_left * (T_right | JSON element)")
    p.add_argument("--left", required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--right")
    g.add_argument("--right-json", help="file holding a Hecke element as JSON")
    p = sub.add_parser("verify", parents=[common], help="run named checks")
    p.add_argument("--check", default="all", help="check name or 'all': " + ", ".join(CHECKS))
    p.add_argument("--lambda", dest="lam")
    p.add_argument("--mod", type=int)
    p = sub.add_parser("specialize", parents=[common], help="mu-matrix at u = lambda and its rank")
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--mod", type=int)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=ns.command, group=ns.group, star=ns.star, max_length=ns.max_length,
        fmt=ns.fmt, cache_dir=ns.cache_dir, seed=ns.seed, lam=getattr(ns, "lam", None),
        mod=getattr(ns, "mod", None), z=getattr(ns, "z", None), left=getattr(ns, "left", None),
        right=getattr(ns, "right", None), right_json=getattr(ns, "right_json", None),
        check=getattr(ns, "check", "all"),
    )


def dispatch(cfg: RunConfig) -> tuple[str, int]:
    """Run one subcommand; returns (output, exit status)."""
    if cfg.max_length is not None and cfg.max_length < 0:
        raise UsageError("--max-length: must be non-negative")
    return COMMANDS[cfg.command](Session(cfg))


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    cfg = config_from_args(ns)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always", cache.CacheWarning)
            warnings.showwarning = _warn_to_stderr
            out, code = dispatch(cfg)
    except UsageError as e:
        print(f"involmod {cfg.command}: error: {e}", file=sys.stderr)
        return 2
    except InvariantViolation as e:
        print(f"involmod {cfg.command}: invariant violation ({type(e).__name__}): {e}", file=sys.stderr)
        return 3
    except TruncatedTable as e:
        print(f"involmod {cfg.command}: error: --max-length: {e}", file=sys.stderr)
        return 2
    except InvolmodError as e:
        print(f"involmod {cfg.command}: error: {e}", file=sys.stderr)
        return 2
    try:
        sys.stdout.write(out)
        sys.stdout.flush()
    except BrokenPipeError:  # e.g. piped into head
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
    return code


def _warn_to_stderr(message, category, filename, lineno, file=None, line=None):
    print(f"warning: {message}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
