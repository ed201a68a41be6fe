"""Command-line interface.

Words are read left to right as products of generators: for affine ``A1``
(generator 0 finite, generator 1 affine) ``--w "1 0"`` is ``s_1 s_0`` in
generator indices, whose dot action on 0 at ``ℓ = 3`` gives 6.

Exit codes: 0 success, 2 invalid arguments, 3 bad data file.  Errors are
written to stderr as a JSON object.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from tiltkit import __version__
from tiltkit.affine_weyl import (act, enumerate_elements, enumerate_fW, format_word,
                                 is_min_in_Wf, parse_word)
from tiltkit.charformula import (nabla_in_simples,
                                 simples_in_nablas_kl, tilting_character, expr_dim,
                                 y_region)
from tiltkit.hecke import (DataFileError, kl_basis_asph, kl_fallback_table,
                           load_hat, load_pcan)
from tiltkit.linkage import (LinkageContext, block_of, blocks,
                             blocks_vs_components_dictionary, fixed_point_components,
                             with_dominant)
from tiltkit.rootdata import (DatumError, build_root_datum, load_datum_file,
                              weyl_character, weyl_dim)

COMMANDS = ("blocks", "components", "dict", "kl", "pkl-import", "tilt", "simple",
            "weyl", "wgroup")
_NEEDS_ELL = {"blocks", "components", "dict", "pkl-import", "tilt", "simple"}


class ValidationError(ValueError):
    pass


@dataclass(frozen=True)
class JobConfig:
    command: str
    type: str | None = None
    isogeny: str | None = None
    datum_file: str | None = None
    ell: int | None = None
    max_length: int | None = None
    box: int | None = None
    pcan: str | None = None
    hat: str | None = None
    lam: str | None = None
    w: str | None = None
    format: str = "json"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValidationError(f"unknown command {self.command!r}")
        if (self.type is None) == (self.datum_file is None):
            raise ValidationError("give exactly one of --type and --datum-file")
        if self.datum_file is not None and self.isogeny is not None:
            raise ValidationError("--isogeny does not apply to --datum-file")
        for name in ("max_length", "box"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise ValidationError(f"--{name.replace('_', '-')} must be nonnegative")
        if self.command in _NEEDS_ELL and self.ell is None:
            raise ValidationError(f"{self.command} needs --ell")
        if self.ell is not None and self.ell < 2:
            raise ValidationError("--ell must be at least 2")
        if self.format not in ("json", "text"):
            raise ValidationError("--format is json or text")
        if self.command == "pkl-import" and self.pcan is None:
            raise ValidationError("pkl-import needs --pcan")

    @property
    def mode(self) -> str:
        return "file" if self.pcan else "kl_fallback"


# -- helpers ---------------------------------------------------------------------


def _datum(cfg: JobConfig):
    if cfg.datum_file is not None:
        try:
            return load_datum_file(cfg.datum_file)
        except OSError as exc:
            raise DataFileError(f"cannot read datum file: {exc}") from None
        except DatumError as exc:
            raise DataFileError(str(exc)) from None
    return build_root_datum(cfg.type, cfg.isogeny)


def _weight(cfg: JobConfig, d) -> tuple[int, ...]:
    if cfg.lam is None:
        raise ValidationError(f"{cfg.command} needs --lambda")
    try:
        mu = tuple(int(t) for t in cfg.lam.replace(",", " ").split())
    except ValueError:
        raise ValidationError(f"cannot parse weight {cfg.lam!r}") from None
    if len(mu) != d.rank:
        raise ValidationError(f"weight must have {d.rank} coordinates")
    return mu


def _element(cfg: JobConfig, d):
    if cfg.w is None:
        raise ValidationError(f"{cfg.command} needs --w")
    try:
        return parse_word(d, cfg.w)
    except (ValueError, IndexError) as exc:
        raise ValidationError(str(exc)) from None


def _max_length(cfg: JobConfig) -> int:
    if cfg.max_length is None:
        raise ValidationError(f"{cfg.command} needs --max-length")
    return cfg.max_length


def _table(cfg: JobConfig, d):
    if cfg.pcan:
        return load_pcan(cfg.pcan, d, cfg.ell)
    return kl_fallback_table(d, cfg.ell)


def _word(w) -> list[int]:
    return list(w.reduced_word())


def _column(x) -> list[dict]:
    return [{"y": _word(y), "poly": x[y].to_json()} for y in x.support()]


# -- commands --------------------------------------------------------------------


def _cmd_blocks(cfg, d):
    ctx = LinkageContext(d, cfg.ell)
    out = []
    for b in blocks(ctx):
        if cfg.max_length is not None:
            b = with_dominant(ctx, b, cfg.max_length)
        out.append(b.to_dict())
    if cfg.box is not None:
        by_rep = {tuple(r["rep"]): r for r in out}
        for mu in _box(d.rank, cfg.box):
            by_rep[block_of(ctx, mu).rep].setdefault("box_members", []).append(list(mu))
    return {"ell": cfg.ell, "blocks": out}


def _box(rank, r):
    pts = [()]
    for _ in range(rank):
        pts = [p + (a,) for p in pts for a in range(-r, r + 1)]
    return pts


def _cmd_components(cfg, d):
    ctx = LinkageContext(d, cfg.ell)
    return {"ell": cfg.ell,
            "components": [c.to_dict() for c in fixed_point_components(ctx)]}


def _cmd_dict(cfg, d):
    ctx = LinkageContext(d, cfg.ell)
    return {"ell": cfg.ell, "dictionary": blocks_vs_components_dictionary(ctx)}


def _cmd_kl(cfg, d):
    if cfg.w is not None:
        ws = [_element(cfg, d)]
        if not is_min_in_Wf(ws[0]):
            raise ValidationError("--w must be minimal in its W_f-coset")
    else:
        ws = enumerate_fW(d, _max_length(cfg))
    return {"columns": [{"w": _word(w), "entries": _column(kl_basis_asph(w))}
                        for w in ws]}


def _cmd_pkl_import(cfg, d):
    table = load_pcan(cfg.pcan, d, cfg.ell)
    cols = sorted(table.columns, key=lambda w: (w.length(), w.reduced_word()))
    return {"ell": table.ell, "datum": table.datum_hash, "mode": table.mode,
            "columns": [{"w": _word(w),
                         "entries": [{"y": _word(y), "poly": c.to_json()}
                                     for y, c in sorted(table.columns[w].items(),
                                                        key=lambda p: (p[0].length(),
                                                                       p[0].reduced_word()))]}
                        for w in cols]}


def _cmd_tilt(cfg, d):
    ctx = LinkageContext(d, cfg.ell)
    lam = _weight(cfg, d)
    block = block_of(ctx, lam)
    if block.rep != lam:
        raise ValidationError(f"--lambda must lie in the closed dot-alcove; "
                              f"its block representative is {list(block.rep)}")
    w = _element(cfg, d)
    try:
        expr = tilting_character(ctx, block, w, _table(cfg, d))
    except ValueError as exc:
        if isinstance(exc, DataFileError):
            raise
        raise ValidationError(str(exc)) from None
    return {"weight": list(act(w, lam, cfg.ell, "dot")), "expr": expr.to_dict(),
            "dim": expr_dim(d, expr), "mode": cfg.mode}


def _cmd_simple(cfg, d):
    ctx = LinkageContext(d, cfg.ell)
    if cfg.max_length is not None:
        members = enumerate_fW(d, cfg.max_length)
        region = "truncated"
    else:
        members = y_region(ctx).elements
        region = "Y"
    w = _element(cfg, d)
    if w not in members:
        raise ValidationError(f"{format_word(w)} is not in the region")
    out = {"w": _word(w), "weight": list(act(w, (0,) * d.rank, cfg.ell, "dot")),
           "region": region, "members": [_word(y) for y in members],
           "simple_in_nablas": simples_in_nablas_kl(ctx, w, members).to_dict(),
           "mode": cfg.mode}
    if cfg.hat:
        hat = load_hat(cfg.hat, d)
        try:
            expr = nabla_in_simples(ctx, w, _table(cfg, d), hat, members)
        except ValueError as exc:
            if isinstance(exc, DataFileError):
                raise
            raise DataFileError(str(exc)) from None
        out["nabla_in_simples"] = expr.to_dict()
    return out


def _cmd_weyl(cfg, d):
    lam = _weight(cfg, d)
    if not d.is_dominant(lam):
        raise ValidationError("--lambda must be dominant")
    ch = weyl_character(d, lam)
    return {"weight": list(lam), "dim": weyl_dim(d, lam), "weights": ch.to_json()}


def _cmd_wgroup(cfg, d):
    L = _max_length(cfg)
    elts = enumerate_elements(d, L)
    out = []
    for x in elts:
        rec = {"w": _word(x), "length": x.length(), "min_in_Wf": is_min_in_Wf(x)}
        if cfg.ell is not None and d.rho_vee_is_integral:
            rec["dot_0"] = list(act(x, (0,) * d.rank, cfg.ell, "dot"))
        out.append(rec)
    return {"max_length": L, "elements": out}


_DISPATCH = {"blocks": _cmd_blocks, "components": _cmd_components, "dict": _cmd_dict,
             "kl": _cmd_kl, "pkl-import": _cmd_pkl_import, "tilt": _cmd_tilt,
             "simple": _cmd_simple, "weyl": _cmd_weyl, "wgroup": _cmd_wgroup}


def run(cfg: JobConfig) -> dict:
    """Execute a job and return its JSON-serializable report."""
    d = _datum(cfg)
    return _DISPATCH[cfg.command](cfg, d)


# -- rendering -------------------------------------------------------------------


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, ensure_ascii=False) + "\n"
    lines: list[str] = []
    _render_text(report, "", lines)
    return "\n".join(lines) + "\n"


def _render_text(obj, prefix, lines):
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{prefix}{k}:")
                _render_text(v, prefix + "  ", lines)
            else:
                lines.append(f"{prefix}{k}: {_inline(v)}")
    elif isinstance(obj, list):
        for item in obj:
            if isinstance(item, (dict, list)) and not _flat(item):
                lines.append(f"{prefix}-")
                _render_text(item, prefix + "  ", lines)
            else:
                lines.append(f"{prefix}- {_inline(item)}")


def _flat(v) -> bool:
    if isinstance(v, list):
        return all(not isinstance(a, (dict, list)) for a in v)
    return False


def _inline(v) -> str:
    return json.dumps(v, ensure_ascii=False) if isinstance(v, (list, dict)) else str(v)


# -- entry point -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tiltkit", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--type", help="Cartan type, e.g. A2 or B2xG2")
    p.add_argument("--isogeny", choices=("adjoint", "simply_connected"))
    p.add_argument("--datum-file", help="JSON with rank, simple_roots, simple_coroots")
    p.add_argument("--ell", type=int)
    p.add_argument("--max-length", type=int)
    p.add_argument("--box", type=int, help="radius of a coweight box to partition")
    p.add_argument("--pcan", help="ℓ-KL table file (switches to file mode)")
    p.add_argument("--hat", help="hat-map file")
    p.add_argument("--lambda", dest="lam", help="coweight, e.g. '0' or '1 2'")
    p.add_argument("--w", help="word in generator indices, left-to-right product")
    p.add_argument("--format", default="json", choices=("json", "text"))
    return p


def _fail(code: int, kind: str, message: str) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message,
                                 "exit_code": code}, ensure_ascii=False) + "\n")
    return code


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code in (0, None):
            return 0
        return _fail(2, "usage", "invalid command line")
    try:
        cfg = JobConfig(**vars(ns))
        report = run(cfg)
    except DataFileError as exc:
        return _fail(3, "data_file", str(exc))
    except (ValidationError, DatumError, ValueError) as exc:
        return _fail(2, "validation", str(exc))
    sys.stdout.write(render(report, cfg.format))
    return 0


if __name__ == "__main__":
    sys.exit(main())
