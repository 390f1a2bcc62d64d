"""Command-line front end.

Every command prints JSON (with ``"schema": 1``) unless told otherwise.
Exit codes: 0 success, 1 a comparison found differences, 2 bad
configuration, 3 the cells changed between radius R and R + 2.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .cellalgo import claim_violations, tilde_partition
from .cells import cells_of_kind, default_trusted, diff_partitions
from .coxeter import get_group
from .klbasis import kl_table
from .weights import (
    WeightFunction,
    default_box,
    enumerate_facets,
    load_arrangement,
    normalize_signs,
    parabolic_of_facet,
)

SCHEMA = 1
EXIT_DIFF = 1
EXIT_CONFIG = 2
EXIT_UNSTABLE = 3


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    group: str
    weights: tuple[int, ...] | None
    radius: int
    trusted: int
    options: dict[str, Any] = field(default_factory=dict)
    output: str | None = None

    def weight_function(self) -> WeightFunction:
        if self.weights is None:
            raise ConfigError("--weights is required")
        try:
            L = WeightFunction.from_params(self.group, self.weights)
        except ValueError as err:
            raise ConfigError(str(err)) from err
        if not L.positive:
            if not self.options.get("normalize_signs"):
                raise ConfigError("weights must be positive (or pass --normalize-signs)")
            L = normalize_signs(L)
        return L


CONFIG_KEYS = {"group", "weights", "radius", "trusted", "output"}


def _parse_weights(text) -> tuple[int, ...] | None:
    if text is None:
        return None
    if isinstance(text, (list, tuple)):
        return tuple(int(x) for x in text)
    try:
        return tuple(int(x) for x in str(text).replace(" ", "").split(","))
    except ValueError as err:
        raise ConfigError(f"cannot read weights {text!r}") from err


def build_config(args: argparse.Namespace) -> RunConfig:
    file_cfg: dict[str, Any] = {}
    if getattr(args, "config", None):
        try:
            file_cfg = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as err:
            raise ConfigError(f"cannot read config {args.config}: {err}") from err
    opts = {k: v for k, v in vars(args).items() if k not in CONFIG_KEYS | {"config", "func", "command"}}
    for k, v in file_cfg.items():
        if k not in CONFIG_KEYS and opts.get(k) in (None, False):
            opts[k] = v

    def pick(key, default=None):
        v = getattr(args, key, None)
        return v if v is not None else file_cfg.get(key, default)

    group = pick("group", "g2")
    try:
        g = get_group(group)
    except ValueError as err:
        raise ConfigError(str(err)) from err
    radius = int(pick("radius", 10))
    if radius < 0:
        raise ConfigError("radius must be nonnegative")
    complete = g.preset.kind == "dihedral" and g.preset.m and radius >= g.preset.m
    trusted = pick("trusted")
    trusted = default_trusted(radius, bool(complete)) if trusted is None else int(trusted)
    if not complete and trusted >= radius:
        raise ConfigError("trusted radius must be below the radius")
    return RunConfig(group, _parse_weights(pick("weights")), radius, trusted, opts, pick("output"))


def _emit(cfg: RunConfig, payload: dict) -> None:
    payload = {"schema": SCHEMA, **payload}
    text = json.dumps(payload, indent=1, sort_keys=True) + "\n"
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)


def _header(cfg: RunConfig, L: WeightFunction | None = None) -> dict:
    out = {"group": get_group(cfg.group).preset.name, "radius": cfg.radius, "trusted": cfg.trusted}
    if L is not None:
        out["weights"] = list(L.params)
    return out


# -- commands ---------------------------------------------------------------------


def cmd_cells(cfg: RunConfig) -> int:
    L = cfg.weight_function()
    kinds = ["left", "right", "two-sided"] if cfg.options.get("kind") in (None, "all") else [cfg.options["kind"]]
    with_a = bool(cfg.options.get("with_a"))
    parts = {k: cells_of_kind(k, cfg.radius, L, cfg.trusted, with_a=with_a) for k in kinds}
    payload = _header(cfg, L)
    payload["partitions"] = {k: p.to_dict() for k, p in parts.items()}
    status = 0
    if cfg.options.get("check_stability"):
        unstable = {}
        for k, p in parts.items():
            bigger = cells_of_kind(k, cfg.radius + 2, L, cfg.trusted)
            d = diff_partitions(p, bigger)
            if d:
                unstable[k] = d
        payload["stability"] = {"compared_radius": cfg.radius + 2, "differences": unstable}
        if unstable:
            status = EXIT_UNSTABLE
    if cfg.options.get("svg"):
        from .render import render_svg

        left = parts.get("left") or cells_of_kind("left", cfg.radius, L, cfg.trusted)
        two = parts.get("two-sided") or cells_of_kind("two-sided", cfg.radius, L, cfg.trusted, with_a=with_a)
        Path(cfg.options["svg"]).write_text(render_svg(left, two))
    _emit(cfg, payload)
    return status


def _orders(cfg: RunConfig):
    def parse(key):
        v = cfg.options.get(key)
        return None if v is None else [int(x) for x in str(v).split(",")]

    return parse("b_order"), parse("c_order")


def cmd_algorithm(cfg: RunConfig) -> int:
    L = cfg.weight_function()
    b_order, c_order = _orders(cfg)
    try:
        tp = tilde_partition(cfg.group, L, cfg.radius, cfg.trusted, b_order=b_order, c_order=c_order)
    except ValueError as err:
        raise ConfigError(str(err)) from err
    payload = _header(cfg, L)
    payload["partition"] = tp.to_dict()
    payload["claim_violations"] = claim_violations(tp)
    _emit(cfg, payload)
    return 0


def cmd_compare(cfg: RunConfig) -> int:
    L = cfg.weight_function()
    b_order, c_order = _orders(cfg)
    tp = tilde_partition(cfg.group, L, cfg.radius, cfg.trusted, b_order=b_order, c_order=c_order)
    diffs = {
        "two-sided": diff_partitions(tp.two_sided(cfg.trusted), cells_of_kind("two-sided", cfg.radius, L, cfg.trusted)),
        "left": diff_partitions(tp.left(cfg.trusted), cells_of_kind("left", cfg.radius, L, cfg.trusted)),
    }
    payload = _header(cfg, L)
    payload["differences"] = diffs
    payload["verdict"] = "equal at radius %d" % cfg.radius if not any(diffs.values()) else "differ"
    _emit(cfg, payload)
    return EXIT_DIFF if any(diffs.values()) else 0


def cmd_klpoly(cfg: RunConfig) -> int:
    L = cfg.weight_function()
    g = get_group(cfg.group)
    table = kl_table(L, cfg.radius)
    payload = _header(cfg, L)
    w_word = cfg.options.get("w")
    if w_word is None:
        payload["table"] = table.to_json()
    else:
        try:
            w = g.parse(w_word)
        except (KeyError, ValueError) as err:
            raise ConfigError(f"cannot parse {w_word!r}") from err
        if g.length_of(w) > cfg.radius:
            raise ConfigError("w is longer than the radius")
        if cfg.options.get("y") is not None:
            y = g.parse(cfg.options["y"])
            payload["P"] = {"y": g.name(y), "w": g.name(w), "poly": str(table.P(y, w))}
        else:
            col = table.column(w)
            payload["column"] = {"w": g.name(w), "P": {g.name(y): str(p) for y, p in sorted(col.items())}}
    _emit(cfg, payload)
    return 0


def cmd_facets(cfg: RunConfig) -> int:
    arr = _arrangement(cfg)
    box = cfg.options.get("box") or default_box(len(arr[0].normal))
    facets = enumerate_facets(arr, int(box))
    g = get_group(cfg.group)
    rows = []
    for F in facets:
        rows.append(
            {
                "label": F.label(),
                "dimension": F.dimension,
                "signature": list(F.signature.signs),
                "samples": [list(p) for p in F.sample_points],
                "positive": F.positive,
                "undersampled": F.undersampled,
                "W_F": sorted(g.preset.generators[s] for s in parabolic_of_facet(F, g)),
            }
        )
    payload = _header(cfg)
    payload.update({"arrangement": [str(h) for h in arr], "box": int(box), "facets": rows})
    _emit(cfg, payload)
    return 0


def _arrangement(cfg: RunConfig):
    name = cfg.options.get("arrangement") or f"{get_group(cfg.group).preset.name}-essential"
    try:
        return load_arrangement(name)
    except (OSError, ValueError, KeyError) as err:
        raise ConfigError(f"cannot load arrangement {name!r}: {err}") from err


def cmd_semicont(cfg: RunConfig) -> int:
    from .semicont import essential_report

    arr = _arrangement(cfg)
    rep = essential_report(arr, cfg.group, cfg.radius, cfg.trusted,
                           box=cfg.options.get("box"), method=cfg.options.get("method") or "cells")
    if cfg.options.get("markdown"):
        Path(cfg.options["markdown"]).write_text(rep.to_markdown())
    payload = _header(cfg)
    payload.update({k: v for k, v in rep.to_dict().items() if k != "schema"})
    _emit(cfg, payload)
    return 0


def cmd_induction(cfg: RunConfig) -> int:
    from .induction import (
        Expander,
        check_dagger,
        check_I1_I3,
        check_I5,
        check_ideals,
        check_itsc,
        induction_datum,
        preorder_on_U,
    )

    L = cfg.weight_function()
    d = induction_datum(L, cfg.radius)
    ex = Expander(d)
    base = check_I1_I3(d)
    order = preorder_on_U(d, ex)
    i5 = check_I5(d, order, ex)
    dagger = check_dagger(order)
    ideals = check_ideals(d, order, cfg.trusted)
    from .cellalgo import tilde_partition as _tp

    itsc, open_pairs = check_itsc(_tp(cfg.group, L, cfg.radius + 6, cfg.radius + 6), cfg.trusted)
    if cfg.options.get("dot"):
        Path(cfg.options["dot"]).write_text(order.to_dot() + "\n")
    g = d.group
    payload = _header(cfg, L)
    payload.update(
        {
            "U": [{"name": d.labels[k], "u": g.name(u)} for k, u in enumerate(d.U)],
            "conditions": {r.name: {"ok": r.ok, "witnesses": r.witnesses} for r in base + [dagger, ideals]},
            "I5": {
                "verified": i5.verified,
                "violated": i5.violated,
                "inconclusive": i5.inconclusive,
                "corrections": [
                    {"v": d.labels[k], "y": g.name(y),
                     "terms": [{"xu": g.name(z), "a": str(a)} for z, a in terms]}
                    for (k, y), terms in sorted(i5.corrections.items())
                ],
            },
            "preorder": order.to_dict(),
            "itsc": {"open_pairs": open_pairs},
        }
    )
    _emit(cfg, payload)
    return 0


def cmd_render(cfg: RunConfig) -> int:
    from .render import render_svg

    L = cfg.weight_function()
    if get_group(cfg.group).preset.kind != "affine":
        raise ConfigError("pictures are drawn for g2 and b2 only")
    if (cfg.options.get("source") or "cells") == "algorithm":
        tp = tilde_partition(cfg.group, L, cfg.radius, cfg.trusted)
        left, two = tp.left(), tp.two_sided()
    else:
        left = cells_of_kind("left", cfg.radius, L, cfg.trusted)
        two = cells_of_kind("two-sided", cfg.radius, L, cfg.trusted, with_a=True)
    svg = render_svg(left, two, labels=bool(cfg.options.get("labels")))
    if cfg.output:
        Path(cfg.output).write_text(svg)
    else:
        sys.stdout.write(svg)
    return 0


# -- parser ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="klcells", description="Kazhdan-Lusztig cells of rank 2 Coxeter groups.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, weights=True):
        sp.add_argument("--config", help="JSON file with default settings")
        sp.add_argument("--group", help="g2, b2, a1 or i2(m)")
        if weights:
            sp.add_argument("--weights", help="comma separated weights, one per generator class")
            sp.add_argument("--normalize-signs", action="store_true", help="accept negative weights")
        sp.add_argument("--radius", type=int, help="ball radius R")
        sp.add_argument("--trusted", type=int, help="trusted radius R' < R")
        sp.add_argument("-o", "--output", help="output file (default stdout)")

    sp = sub.add_parser("cells", help="brute-force cells on a ball")
    common(sp)
    sp.add_argument("--kind", choices=["left", "right", "two-sided", "all"], help="default all")
    sp.add_argument("--with-a", action="store_true", help="attach a-function estimates")
    sp.add_argument("--check-stability", action="store_true", help="compare with radius R + 2")
    sp.add_argument("--svg", help="also write an alcove picture")
    sp.set_defaults(func=cmd_cells)

    sp = sub.add_parser("algorithm", help="tilde partition from the parabolic subgroups")
    common(sp)
    sp.add_argument("--b-order", help="numbering of the parabolic blocks")
    sp.add_argument("--c-order", help="numbering of the joined classes")
    sp.set_defaults(func=cmd_algorithm)

    sp = sub.add_parser("compare", help="algorithm against brute force")
    common(sp)
    sp.add_argument("--b-order")
    sp.add_argument("--c-order")
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("klpoly", help="Kazhdan-Lusztig polynomials")
    common(sp)
    sp.add_argument("--w", help="word of w, e.g. 1213 (digits are generators)")
    sp.add_argument("--y", help="word of y; with --w prints P_{y,w}")
    sp.set_defaults(func=cmd_klpoly)

    sp = sub.add_parser("facets", help="facets of a hyperplane arrangement")
    common(sp, weights=False)
    sp.add_argument("--arrangement", help="built-in name or JSON file")
    sp.add_argument("--box", type=int)
    sp.set_defaults(func=cmd_facets)

    sp = sub.add_parser("semicont", help="constancy and essential hyperplanes")
    common(sp, weights=False)
    sp.add_argument("--arrangement")
    sp.add_argument("--box", type=int)
    sp.add_argument("--method", choices=["cells", "algorithm"], help="default cells")
    sp.add_argument("--markdown", help="also write a Markdown report")
    sp.set_defaults(func=cmd_semicont)

    sp = sub.add_parser("induction-check", help="generalized induction conditions")
    common(sp)
    sp.add_argument("--dot", help="write the Hasse diagram in DOT")
    sp.set_defaults(func=cmd_induction)

    sp = sub.add_parser("render", help="SVG picture of the cells")
    common(sp)
    sp.add_argument("--source", choices=["cells", "algorithm"], help="default cells")
    sp.add_argument("--labels", action="store_true")
    sp.set_defaults(func=cmd_render)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        return args.func(cfg)
    except ConfigError as err:
        print(f"klcells: error: {err}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
