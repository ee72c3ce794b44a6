"""From a Dynkin quiver to a certified stable polygon realizing it.

Types A and D have closed-form constructions on (a rational approximation
of) the unit circle. Type E uses a seeded search in the solution space of
the defining relations, steered by the floating-point probe, followed by
mirror and leaf moves. Every output is re-certified exactly.
"""
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
import json
import logging
import math
from math import isqrt
from pathlib import Path

import numpy as np

from ._probe import Probe
from .diagonals import DegenerateInput, ModelError, intersection_quiver, stability_function, type_model
from .dynkin import DynkinQuiver, DynkinType, canonical_edges, leaves
from .geometry import RatPoint
from .modules import check_total_stability
from .polygon import InvalidPolygon, StablePolygon, is_stable, mirror, recenter, rotate_rational

log = logging.getLogger(__name__)

CIRCLE_DENOMINATOR = 10 ** 6


class SearchExhausted(RuntimeError):
    def __init__(self, what, seed, candidates):
        super().__init__(f"no certified polygon for {what} (seed {seed}, {candidates} candidates)")
        self.seed = seed
        self.candidates = candidates


class CannotDeform(RuntimeError):
    pass


@dataclass(frozen=True)
class SearchConfig:
    seed: int = 0
    max_candidates: int = 20000
    denominator: int = 10 ** 6
    workers: int = 1
    cache_dir: object = None
    use_fixtures: bool = True


# certification

def realized_quiver(p):
    """The (ungraded) intersection quiver of p as a DynkinQuiver, or None."""
    try:
        if not is_stable(p):
            return None
        return intersection_quiver(p).to_dynkin()
    except (DegenerateInput, ModelError, ValueError):
        return None


def certify(p, q, total=None):
    """Exact certificate: stable, intersection quiver equal to q and, when
    total is set (the default for type E), every indecomposable stable."""
    if realized_quiver(p) != q:
        return False
    if total is None:
        total = q.dtype.family == "E"
    if total:
        Z, _ = stability_function(p)
        return check_total_stability(q, Z).verdict
    return True


# circle points

def _circle_x(y, sign, D=CIRCLE_DENOMINATOR):
    """Rational x slightly inside the unit circle at height y, with the given sign."""
    r = 1 - y * y
    x = Fraction(isqrt(int(r * D * D)), D)
    return sign * x


def _eps(signs, i):
    """epsilon_i of the arrow between i-1 and i (edge index i-2)."""
    return 1 if signs[i - 2] == "+" else -1


def _ccw(points):
    """Order points on a circle around the origin counter-clockwise from the bottom apex."""
    def key(p):
        return (math.atan2(float(p.y), float(p.x)) + math.pi / 2) % (2 * math.pi)
    return sorted(points, key=key)


# type A

def realize_A(q):
    t = q.dtype
    if t.family != "A":
        raise ValueError("realize_A needs a type A quiver")
    n = t.rank
    pts = [RatPoint(0, -1)]
    for i in range(2, n + 1):
        y = Fraction(-1) + Fraction(2 * (i - 1), n)
        pts.append(RatPoint(_circle_x(y, -_eps(q.orientation, i)), y))
    pts.append(RatPoint(0, 1))
    right = [p for p in pts[1:-1] if p.x > 0]
    left = [p for p in pts[1:-1] if p.x < 0]
    verts = [pts[0]] + right + [pts[-1]] + left[::-1]
    p = StablePolygon(t, verts)
    if not certify(p, q):
        raise ModelError(f"type A construction failed for {q}")
    return p


# type D

def _D_ring(q, n):
    """Y_{+-i} for 3 <= i <= n, as a dict index -> point."""
    Y = {n: RatPoint(0, 1), -n: RatPoint(0, -1)}
    for i in range(3, n):
        y = Fraction(i, n)
        s = _eps(q.orientation, n + 1 - i)
        x = _circle_x(y, s)
        Y[i] = RatPoint(x, y)
        Y[-i] = RatPoint(-x, -y)
    return Y


def _D_epsilons(q):
    n = q.rank
    o = q.orientation
    return (1 if o[n - 3] == "+" else -1), (1 if o[n - 2] == "+" else -1)


def _y_axis_extent(verts, s):
    """Largest y0 such that (0, y) lies in the level-s region for |y| < y0.

    The region is centrally symmetric about the origin, so it meets the
    y-axis in a segment [-y0, y0]. Each length-s diagonal a->b cuts the
    axis at a height bounding the segment from one side.
    """
    h = len(verts)
    top = None
    for j in range(h):
        a, b = verts[j], verts[(j + s) % h]
        dx, dy = b.x - a.x, b.y - a.y
        # the point (0, y) is on the left of a->b iff dx*(y - a.y) + dy*a.x > 0
        if dx == 0:
            continue
        y = a.y - dy * a.x / dx
        if dx < 0 and (top is None or y < top):
            top = y
    return top


def _realize_D_b(q):
    n = q.rank
    Y = _D_ring(q, n)
    Y[1], Y[-1] = RatPoint(1, 0), RatPoint(-1, 0)
    verts = _ccw(list(Y.values()))
    d = _y_axis_extent(verts, n - 2)
    if d is None or d <= 0:
        raise ModelError("level region misses the y-axis")
    punct = (RatPoint(0, -d / 3), RatPoint(0, d / 3))
    return StablePolygon(q.dtype, verts, punct)


def _first_certified(q, make, step=Fraction(1, 50), tries=30):
    """make(step) for halving steps until the result realizes q."""
    for _ in range(tries):
        cand = make(step)
        if certify(cand, q):
            return cand
        step /= 2
    raise ModelError(f"no certified small rotation for {q}")


def realize_D(q, route="rotate"):
    """Closed-form stable polygon of type D.

    For (eps_{n-1}, eps_n) = (+, -) two routes exist: "rotate" turns the
    (-, +) polygon clockwise by a small certified angle, "mirror" reflects
    the polygon of the opposite quiver.
    """
    t = q.dtype
    if t.family != "D":
        raise ValueError("realize_D needs a type D quiver")
    n = t.rank
    e1, e2 = _D_epsilons(q)
    if e1 == e2:
        Y = _D_ring(q, n)
        y = Fraction(2, n)
        x = _circle_x(y, e1)
        Y[2], Y[-2] = RatPoint(x, y), RatPoint(-x, -y)
        O = RatPoint(0, 0)
        p = StablePolygon(t, _ccw(list(Y.values())), (O, O))
    elif (e1, e2) == (-1, 1):
        p = _realize_D_b(q)
    elif route == "mirror":
        # Y_{+-1} of the case (b) polygon share a height, and the mirror
        # swaps them in the height order; a small turn first removes the tie
        base = realize_D(q.opposite())
        p = _first_certified(q, lambda st: mirror(rotate_rational(base, st)))
    else:
        o = list(q.orientation)
        o[n - 3], o[n - 2] = "-", "+"
        base = _realize_D_b(DynkinQuiver(t, tuple(o)))
        p = _first_certified(q, lambda st: rotate_rational(base, -st))
    if not certify(p, q):
        raise ModelError(f"type D construction failed for {q}")
    return p


# type E: exact <-> probe coordinates

def _snap(x, D):
    return Fraction(round(x * D), D)


def polygon_from_coeffs(t, c, D=10 ** 6):
    """Exact polygon whose free edge vectors are c, snapped to denominator D."""
    m = type_model(t)
    cq = [(_snap(float(v.real), D), _snap(float(v.imag), D)) for v in c]
    verts = []
    for j in range(m.h):
        f = m.forms[("V", j)]
        x = sum((a * re for a, (re, _) in zip(f, cq)), Fraction(0))
        y = sum((a * im for a, (_, im) in zip(f, cq)), Fraction(0))
        verts.append(RatPoint(x, y))
    return recenter(StablePolygon(t, verts))


def coeffs_of(p):
    m = type_model(p.dtype)
    return np.array([complex(float(p.z(f).dx), float(p.z(f).dy)) for f in m.free])


# type E: search

_probes = {}


def probe_for(t):
    if t not in _probes:
        _probes[t] = Probe(t)
    return _probes[t]


class _Budget:
    def __init__(self, limit):
        self.limit, self.used = limit, 0

    def spend(self, k=1):
        self.used += k
        return self.used <= self.limit


def _flip_moves(pr, c, rng):
    """Chart moves: one simple charge is rotated across 0 or pi."""
    r = pr.analyze(c)
    if r is None:
        return
    _, pairs, Z = r
    L = pr.chart(pairs)
    for k in rng.permutation(pr.n):
        mod = abs(Z[k])
        for th in (-0.02, -0.1, -0.3, math.pi + 0.02, math.pi + 0.1, math.pi + 0.3, 0.01, math.pi - 0.01):
            for sc in (1, 0.5, 2):
                Z2 = Z.copy()
                Z2[k] = sc * mod * np.exp(1j * th)
                try:
                    c2 = np.linalg.solve(L, Z2)
                except np.linalg.LinAlgError:
                    continue
                r2 = pr.analyze(c2)
                if r2 is not None:
                    yield c2, r2


def _perturb_moves(pr, c, rng):
    for _ in range(4):
        eps = rng.choice([0.02, 0.05, 0.1])
        cc = c + eps * np.abs(c).mean() * (rng.normal(size=pr.n) + 1j * rng.normal(size=pr.n))
        if not pr.stable(pr.points(cc)):
            continue
        yield from pr.sweep(cc)


def _reflect_moves(pr, c, rng):
    """Reflection at a random sink or source: climb until its charge is
    extreme and then push it across the real axis."""
    r = pr.analyze(c)
    if r is None:
        return
    q = DynkinQuiver(pr.t, tuple(r[0]))
    cands = [(k, "-") for k in q.sinks()] + [(k, "+") for k in q.sources()]
    k, direction = cands[rng.integers(len(cands))]
    want = q.reflect(k).signs
    c, r, g, room = pr.climb_extreme(c, k, direction, rng, iters=400)
    if room <= 0:
        return
    delta = max(g, 0.02)
    for _ in range(6):
        for cand in pr.crossings(c, r, k, direction, delta):
            r2 = pr.analyze(cand)
            if r2 is not None and r2[0] == want:
                yield cand, r2
                return
        delta /= 2


def _dist(a, b):
    return sum(x != y for x, y in zip(a, b))


def search_stable_E(t, accept, cfg=SearchConfig(), score=None, start=None):
    """Seeded search for a certified polygon of type E.

    accept(signs) decides whether a probe orientation is worth certifying;
    the exact certificate is then built from the snapped polygon and must
    satisfy accept as well. score(signs) (smaller is better) steers the
    choice of states to expand. Returns the exact polygon.
    """
    if isinstance(t, str):
        t = DynkinType.parse(t)
    if t.family != "E":
        raise ValueError("search_stable_E needs a type E")
    pr = probe_for(t)
    rng = np.random.default_rng(cfg.seed)
    budget = _Budget(cfg.max_candidates)
    score = score or (lambda s: 0)
    c0 = pr.regular() if start is None else start
    pool = {}
    tried = set()

    def offer(c, signs):
        if signs not in pool:
            pool[signs] = c
        if accept(signs) and signs not in tried:
            tried.add(signs)
            for D in (cfg.denominator, cfg.denominator * 100):
                try:
                    p = polygon_from_coeffs(t, c, D)
                except InvalidPolygon:
                    continue
                got = realized_quiver(p)
                if got is not None and accept(got.signs) and certify(p, got):
                    return p
            tried.discard(signs)
        return None

    for cc, (signs, _, _) in list(pr.sweep(c0)):
        budget.spend()
        p = offer(cc, signs)
        if p is not None:
            return p
    if not pool:
        # the symmetric seed is degenerate; move off it
        for cc, (signs, _, _) in _perturb_moves(pr, c0, rng):
            budget.spend()
            p = offer(cc, signs)
            if p is not None:
                return p
    while budget.used < budget.limit:
        if not pool:
            break
        keys = sorted(pool)
        best = min(score(k) for k in keys)
        if rng.random() < 0.7:
            keys = [k for k in keys if score(k) == best]
        base = pool[keys[rng.integers(len(keys))]]
        u = rng.random()
        if u < 0.35:
            moves = _flip_moves(pr, base, rng)
        elif u < 0.7:
            moves = _reflect_moves(pr, base, rng)
        elif u < 0.75:
            mc = pr.mirror(base)
            r = pr.analyze(mc)
            moves = [(mc, r)] if r is not None else []
        else:
            moves = _perturb_moves(pr, base, rng)
        for cc, (signs, _, _) in moves:
            if not budget.spend():
                break
            p = offer(cc, signs)
            if p is not None:
                return p
    raise SearchExhausted(str(t), cfg.seed, budget.used)


# type E: leaf deformation

def _leaf_neighbor(t, leaf):
    for a, b in canonical_edges(t):
        if leaf in (a, b):
            return b if a == leaf else a
    raise ValueError(f"{leaf} is not a vertex of {t}")


def deform_leaf(p, leaf, direction=None, cfg=SearchConfig()):
    """Reverse the arrow at a leaf simple by a small certified deformation.

    The leaf charge is first brought close to the real axis (keeping the
    quiver), then only that charge is moved across arg 0 (direction "-")
    or arg pi (direction "+"). The crossing angle is halved until the
    exact certificate shows the leaf arrow reversed and every other arrow
    unchanged.
    """
    t = p.dtype
    if leaf not in leaves(t):
        raise ValueError(f"{leaf} is not a leaf of {t}")
    q0 = realized_quiver(p)
    if q0 is None:
        raise CannotDeform("input polygon is not certified")
    want = q0.reflect(leaf)
    nb = _leaf_neighbor(t, leaf)
    is_sink = (nb, leaf) in q0.arrows()
    if direction is None:
        direction = "-" if is_sink else "+"
    if (direction == "-") != is_sink:
        raise CannotDeform(f"s_{leaf} is a {'sink' if is_sink else 'source'}; "
                           f"cannot push it across {'0' if direction == '-' else 'pi'}")
    pr = probe_for(t)
    rng = np.random.default_rng(cfg.seed)
    c = coeffs_of(p)
    r = pr.analyze(c)
    if r is None or r[0] != q0.signs:
        raise CannotDeform("probe disagrees with the exact quiver")
    climbed = pr.climb_extreme(c, leaf, direction, rng)
    c, r, g, room = climbed
    delta = max(g, 0.02)
    for _ in range(24):
        for cand in pr.crossings(c, r, leaf, direction, delta):
            if pr.analyze(cand) is None:
                continue
            for D in (cfg.denominator, cfg.denominator * 100):
                try:
                    p2 = polygon_from_coeffs(t, cand, D)
                except InvalidPolygon:
                    continue
                if certify(p2, want):
                    return p2
        delta /= 2
    raise CannotDeform(f"no certified deformation of s_{leaf} for {q0}")


# type E: pipeline

def _fixture_path(t, signs):
    return f"E{t.rank}/{signs}.json"


def load_fixture(q, cache_dir=None):
    rel = _fixture_path(q.dtype, q.signs)
    if cache_dir is not None:
        f = Path(cache_dir) / rel
        if f.exists():
            return StablePolygon.from_json(json.loads(f.read_text()))
    f = resources.files("stablegon").joinpath("fixtures", *rel.split("/"))
    if f.is_file():
        return StablePolygon.from_json(json.loads(f.read_text()))
    return None


def store_fixture(p, q, cache_dir):
    f = Path(cache_dir) / _fixture_path(q.dtype, q.signs)
    f.parent.mkdir(parents=True, exist_ok=True)
    f.write_text(json.dumps(p.to_json(), separators=(",", ":")) + "\n")


def _base_edges(t):
    lv = set(leaves(t))
    return [k for k, (a, b) in enumerate(canonical_edges(t)) if a not in lv and b not in lv]


def realize_E_cold(q, cfg=SearchConfig()):
    """Search, mirror and leaf moves, without consulting any cache."""
    t = q.dtype
    base = _base_edges(t)
    flip = {"+": "-", "-": "+"}
    want = [q.signs[k] for k in base]
    want_m = [flip[s] for s in want]

    def accept(signs):
        got = [signs[k] for k in base]
        return got == want or got == want_m

    def score(signs):
        got = [signs[k] for k in base]
        return min(_dist(got, want), _dist(got, want_m))

    try:
        p = search_stable_E(t, accept, cfg, score)
        cur = realized_quiver(p)
        if [cur.signs[k] for k in base] != want:
            p = mirror(p)
            cur = realized_quiver(p)
        for leaf in leaves(t):
            if cur == q:
                break
            e = next(k for k, ed in enumerate(canonical_edges(t)) if leaf in ed)
            if cur.signs[e] != q.signs[e]:
                p = deform_leaf(p, leaf, cfg=cfg)
                cur = realized_quiver(p)
        if cur == q and certify(p, q):
            return p
    except (CannotDeform, SearchExhausted) as e:
        log.info("pipeline failed for %s (%s); searching directly", q, e)
    return search_stable_E(t, lambda s: s == q.signs, cfg,
                           lambda s: _dist(s, q.signs))


def realize_E(q, cfg=SearchConfig()):
    t = q.dtype
    if t.family != "E":
        raise ValueError("realize_E needs a type E quiver")
    if cfg.use_fixtures:
        p = load_fixture(q, cfg.cache_dir)
        if p is not None and certify(p, q):
            return p
    p = realize_E_cold(q, cfg)
    if not certify(p, q):
        raise ModelError(f"search returned an uncertified polygon for {q}")
    if cfg.cache_dir is not None:
        store_fixture(p, q, cfg.cache_dir)
    return p


def realize(q, cfg=SearchConfig()):
    f = q.dtype.family
    if f == "A":
        return realize_A(q)
    if f == "D":
        return realize_D(q)
    return realize_E(q, cfg)


def _realize_task(args):
    q, cfg = args
    return realize(q, cfg)


def realize_many(quivers, cfg=SearchConfig()):
    """Realize several quivers; the result order follows the input order."""
    quivers = list(quivers)
    if cfg.workers <= 1 or len(quivers) < 2:
        return [realize(q, cfg) for q in quivers]
    from concurrent.futures import ProcessPoolExecutor
    with ProcessPoolExecutor(cfg.workers) as ex:
        return list(ex.map(_realize_task, [(q, cfg) for q in quivers]))
