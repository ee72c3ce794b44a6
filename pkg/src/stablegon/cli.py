"""Command line front end.

Exit codes: 0 ok, 1 a check failed, 2 invalid input, 3 search exhausted.
"""
import argparse
from dataclasses import dataclass, field, replace
import hashlib
import json
import logging
import sys

from . import __version__
from .diagonals import DegenerateInput, ModelError, intersection_quiver, stability_function
from .dynkin import DynkinQuiver
from .geometry import format_fraction
from .polygon import InvalidPolygon, StablePolygon, is_stable

OK, FAILED, INVALID, EXHAUSTED = 0, 1, 2, 3

log = logging.getLogger("stablegon")


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    inputs: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)
    seed: int = 0
    order: int = None
    trials: int = 32


def _read(path):
    try:
        with open(path, "rb") as f:
            raw = f.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    try:
        data = json.loads(raw)
    except ValueError as e:
        raise InputError(f"{path} is not valid JSON: {e}") from None
    return data, hashlib.sha256(raw).hexdigest()


def _load_polygon(path, cfg, violations=False):
    """The polygon in a file. With violations=True a well-formed file whose
    vertices break a defining relation gives (None, violation) instead of
    an input error."""
    data, digest = _read(path)
    cfg.inputs[path] = digest
    try:
        p = StablePolygon.from_json(data)
    except InvalidPolygon as e:
        if violations and not str(e).startswith(("malformed", "exactly two")):
            return None, e.violation
        raise InputError(f"{path}: {e}") from None
    except (ValueError, TypeError) as e:
        raise InputError(f"{path}: {e}") from None
    return (p, None) if violations else p


def _load_quiver(path, cfg):
    data, digest = _read(path)
    cfg.inputs[path] = digest
    try:
        return DynkinQuiver.from_json(data)
    except (ValueError, TypeError) as e:
        raise InputError(f"{path}: {e}") from None


def _header(cfg):
    return {"tool": "stablegon", "version": __version__, "command": cfg.command,
            "inputs": [{"path": p, "sha256": h} for p, h in sorted(cfg.inputs.items())]}


def _dump(obj):
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


def _write(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def _emit(obj, path=None):
    text = _dump(obj)
    if path:
        _write(path, text)
    else:
        sys.stdout.write(text)


def _vec(v):
    return [format_fraction(v.dx), format_fraction(v.dy)]


# commands

def cmd_realize(args, cfg):
    from .realize import SearchConfig, SearchExhausted, realize
    q = _load_quiver(args.quiver, cfg)
    sc = SearchConfig(seed=cfg.seed, workers=args.workers, cache_dir=args.cache_dir,
                      use_fixtures=not args.no_fixtures)
    if args.max_candidates is not None:
        sc = replace(sc, max_candidates=args.max_candidates)
    try:
        p = realize(q, sc)
    except SearchExhausted as e:
        log.error("%s", e)
        return EXHAUSTED
    _write(args.out, _dump(p.to_json()))
    if args.svg:
        from .svg import render
        _write(args.svg, render(p))
    return OK


def verify_polygon(p, target=None, trials=32, seed=0, pairs=False):
    """Run the whole certificate chain; returns (passed, report dict)."""
    from .modules import check_total_stability, ext_quiver_check
    rep = {"polygon": p.to_json(), "steps": []}

    def step(name, ok, **info):
        rep["steps"].append(dict(name=name, ok=bool(ok), **info))
        return ok

    step("relations", True, detail="vertices satisfy the defining relations")
    cert = is_stable(p)
    if not step("stable", cert.ok, clauses=[{"name": c.name, "ok": c.ok, "detail": c.detail}
                                            for c in cert.clauses]):
        return False, rep
    try:
        iq = intersection_quiver(p)
        q = iq.to_dynkin()
    except (DegenerateInput, ModelError, ValueError) as e:
        step("intersection quiver", False, detail=str(e))
        return False, rep
    arrows = [[a.source, a.target, a.grade] for a in sorted(iq.arrows, key=lambda a: (a.source, a.target))]
    ok = step("intersection quiver", True, quiver=q.to_json(), arrows=arrows)
    if target is not None:
        ok = step("matches target", q == target, target=target.to_json())
    try:
        Z, rows = stability_function(p)
    except (DegenerateInput, ModelError) as e:
        step("stability function", False, detail=str(e))
        return False, rep
    n, h = p.n, p.h
    count_ok = len(rows) == n * h // 2
    ok &= step("stability function", count_ok,
               charges={str(i): _vec(v) for i, v in sorted(Z.Z.items())},
               classes=len(rows), expected=n * h // 2)
    st = check_total_stability(q, Z, trials, seed)
    js = st.to_json()
    if not pairs:
        js["pairs_checked"] = len(js.pop("pairs"))
    ok &= step("total stability", st.verdict, report=js)
    ok &= step("ext quiver", ext_quiver_check(q, iq))
    return bool(ok), rep


def cmd_verify(args, cfg):
    p, bad = _load_polygon(args.polygon, cfg, violations=True)
    target = _load_quiver(args.against, cfg) if args.against else None
    if p is None:
        ok, rep = False, {"steps": [{"name": "relations", "ok": False, "detail": bad}]}
    else:
        ok, rep = verify_polygon(p, target, cfg.trials, cfg.seed, args.pairs)
    out = _header(cfg)
    out.update(rep)
    out["passed"] = ok
    _emit(out, args.report)
    return OK if ok else FAILED


def cmd_diagonals(args, cfg):
    p = _load_polygon(args.polygon, cfg)
    out = _header(cfg)
    try:
        Z, rows = stability_function(p)
    except (DegenerateInput, ModelError) as e:
        out["error"] = str(e)
        _emit(out)
        return FAILED
    out["classes"] = [{"label": c.label(), "vector": _vec(c.vec), "dimension_vector": list(d)}
                      for c, d in rows]
    out["count"] = len(rows)
    _emit(out)
    return OK


def cmd_stability(args, cfg):
    from .modules import check_total_stability
    p = _load_polygon(args.polygon, cfg)
    out = _header(cfg)
    try:
        q = intersection_quiver(p).to_dynkin()
        Z, _ = stability_function(p)
    except (DegenerateInput, ModelError, ValueError) as e:
        out["error"] = str(e)
        _emit(out)
        return FAILED
    st = check_total_stability(q, Z, cfg.trials, cfg.seed)
    out["quiver"] = q.to_json()
    out["report"] = st.to_json()
    _emit(out)
    return OK if st.verdict else FAILED


def cmd_dt(args, cfg):
    from .dt import (NonDiscrete, discrete_perturbation, dt_product, source_order_charges,
                     stable_classes)
    p = _load_polygon(args.polygon, cfg)
    out = _header(cfg)
    out["order"] = cfg.order
    try:
        q = intersection_quiver(p).to_dynkin()
        Z, _ = stability_function(p)
    except (DegenerateInput, ModelError, ValueError) as e:
        out["error"] = str(e)
        _emit(out)
        return FAILED
    Zc = Z.Z
    classes = stable_classes(q, Zc, cfg.trials, cfg.seed)
    try:
        if args.perturb:
            Zc, classes = discrete_perturbation(q, Zc)
            out["perturbed_charges"] = {str(i): _vec(v) for i, v in sorted(Zc.items())}
        prod, factors = dt_product(q, Zc, cfg.order, classes)
    except NonDiscrete as e:
        out["error"] = str(e)
        _emit(out)
        return FAILED
    out["factors"] = [list(d) for d in factors]
    out["terms"] = prod.to_json()
    code = OK
    if args.compare:
        Z2 = source_order_charges(q)
        other, f2 = dt_product(q, Z2, cfg.order)
        same = prod == other
        out["compare"] = {"against": args.compare, "factors": [list(d) for d in f2], "equal": same}
        code = OK if same else FAILED
    _emit(out)
    return code


def cmd_svg(args, cfg):
    from .svg import render
    p = _load_polygon(args.polygon, cfg)
    _write(args.out, render(p))
    return OK


def build_parser():
    ap = argparse.ArgumentParser(prog="stablegon", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"stablegon {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    r = sub.add_parser("realize", help="build a certified polygon for a quiver")
    r.add_argument("--quiver", required=True)
    r.add_argument("--out", required=True)
    r.add_argument("--svg")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--workers", type=int, default=1)
    r.add_argument("--cache-dir")
    r.add_argument("--no-fixtures", action="store_true", help="search even if a fixture exists")
    r.add_argument("--max-candidates", type=int, help="search budget for type E")

    v = sub.add_parser("verify", help="run every check on a polygon")
    v.add_argument("--polygon", required=True)
    v.add_argument("--against")
    v.add_argument("--report")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--trials", type=int, default=32)
    v.add_argument("--pairs", action="store_true", help="list every compared pair in the report")

    d = sub.add_parser("diagonals", help="upward diagonal classes with dimension vectors")
    d.add_argument("--polygon", required=True)

    s = sub.add_parser("stability", help="total stability report")
    s.add_argument("--polygon", required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--trials", type=int, default=32)

    t = sub.add_parser("dt", help="truncated DT product")
    t.add_argument("--polygon", required=True)
    t.add_argument("--order", type=int, required=True)
    t.add_argument("--compare", choices=["source-order"])
    t.add_argument("--perturb", action="store_true",
                   help="break phase ties by a small exact perturbation of the charges")

    g = sub.add_parser("svg", help="draw a polygon")
    g.add_argument("--polygon", required=True)
    g.add_argument("--out", required=True)
    return ap


COMMANDS = {"realize": cmd_realize, "verify": cmd_verify, "diagonals": cmd_diagonals,
            "stability": cmd_stability, "dt": cmd_dt, "svg": cmd_svg}


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return INVALID if e.code else OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    cfg = RunConfig(args.command, seed=getattr(args, "seed", 0), order=getattr(args, "order", None),
                    trials=getattr(args, "trials", 32))
    if cfg.order is not None and cfg.order < 0:
        log.error("order must be non-negative")
        return INVALID
    try:
        return COMMANDS[args.command](args, cfg)
    except InputError as e:
        log.error("%s", e)
        return INVALID


if __name__ == "__main__":
    sys.exit(main())
