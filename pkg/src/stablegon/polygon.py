"""Type-tagged h-gons: relations, satellite points, stability, rigid motions."""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .dynkin import DynkinType, coxeter_number
from .geometry import (RatPoint, RatVec, cmp_points, Order, is_positively_convex,
                       clip_halfplane, polygon_area2, rotate_point, centroid,
                       format_fraction, as_fraction)


class InvalidPolygon(ValueError):
    """Raised when raw data violates a defining relation of its type."""

    def __init__(self, violation):
        super().__init__(violation)
        self.violation = violation


def relation_rows(t):
    """Linear relations on the edge vectors z_0..z_{h-1}.

    Each row is (name, {index: coefficient}). Closure is always included;
    the type-specific families follow.
    """
    h = coxeter_number(t)
    rows = [("closure", {j: 1 for j in range(h)})]

    def add(name, terms):
        d = {}
        for k, c in terms:
            k %= h
            d[k] = d.get(k, 0) + c
        rows.append((name, {k: c for k, c in d.items() if c}))

    if t.family == "D" or (t.family == "E" and t.rank in (7, 8)):
        for j in range(h // 2):
            add(f"central symmetry at {j}", [(j, 1), (j + h // 2, 1)])
    if t.family == "E" and t.rank == 6:
        for j in range(h):
            add(f"triangle relation j={j}", [(j, 1), (j + 4, 1), (j + 8, 1)])
            add(f"alternating relation j={j}", [(j, 1), (j - 3, -1), (j - 6, 1), (j - 9, -1)])
    elif t.family == "E" and t.rank == 7:
        for j in range(h):
            add(f"hexagon relation j={j}",
                [(j, 1), (j + 1, 1), (j + 6, 1), (j + 7, 1), (j + 12, 1), (j + 13, 1)])
    elif t.family == "E" and t.rank == 8:
        for j in range(h):
            add(f"triangle relation j={j}", [(j, 1), (j + 10, 1), (j + 20, 1)])
            add(f"pentagon relation j={j}",
                [(j, 1), (j + 6, 1), (j + 12, 1), (j + 18, 1), (j + 24, 1)])
    return rows


def satellite_terms(t):
    """Defining and alternative expressions of the satellite points.

    Each entry maps a satellite name to a list of expressions
    (base kind, base offset, [(sign, edge offset), ...]); every expression
    must give the same point for all j.
    """
    if t.family != "E":
        return {}
    if t.rank == 6:
        return {"W": [("V", 0, [(1, 4)]), ("V", -1, [(-1, 8)])]}
    if t.rank == 7:
        return {"W": [("V", 0, [(1, 5)]), ("V", 0, [(-1, 14)])],
                "U": [("W", 1, [(1, 7)]), ("W", -1, [(1, 3)]), ("V", 1, [(1, 6), (1, 7)])]}
    return {"W": [("V", 1, [(1, 11)]), ("V", 0, [(1, 6)]), ("V", 0, [(-1, 21)])]}


@dataclass(frozen=True)
class ConvexRegion:
    """Intersection of left half-planes of directed lines a->b."""
    halfplanes: tuple
    vertices: tuple = field(default=())

    @property
    def empty(self):
        return len(self.vertices) < 3 or polygon_area2(list(self.vertices)) <= 0

    def contains(self, p, strict=True):
        for a, b in self.halfplanes:
            c = (b - a).cross(p - a)
            if c < 0 or (strict and c == 0):
                return False
        return True

    def violated_by(self, p):
        """Index of the first half-plane not strictly containing p, else None."""
        for i, (a, b) in enumerate(self.halfplanes):
            if (b - a).cross(p - a) <= 0:
                return i
        return None


@dataclass(frozen=True)
class Clause:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class StabilityCertificate:
    ok: bool
    clauses: list

    def failures(self):
        return [c for c in self.clauses if not c.ok]

    def __bool__(self):
        return self.ok


class StablePolygon:
    """A validated h-gon of a Dynkin type.

    Only vertices and (for D) punctures are stored; edges and satellite
    points are derived. Construction always validates the relations, so an
    instance is a certified "h-gon of type Q". Use is_stable for stability.
    """

    def __init__(self, dtype, vertices, punctures=None):
        if isinstance(dtype, str):
            dtype = DynkinType.parse(dtype)
        self.dtype = dtype
        self.vertices = tuple(RatPoint(p.x, p.y) if isinstance(p, RatPoint) else RatPoint(*p)
                              for p in vertices)
        if punctures is not None:
            bm, bp = (q if isinstance(q, RatPoint) else RatPoint(*q) for q in punctures)
            # the lower puncture is always called B_-
            if cmp_points(bp, bm) == Order.Less:
                bm, bp = bp, bm
            punctures = (bm, bp)
        self.punctures = punctures
        v = _check_relations(self)
        if v is not None:
            raise InvalidPolygon(v)

    @property
    def h(self):
        return len(self.vertices)

    @property
    def n(self):
        return self.dtype.rank

    def V(self, j):
        return self.vertices[j % self.h]

    @cached_property
    def edges(self):
        h = self.h
        return tuple(self.vertices[j] - self.vertices[j - 1] for j in range(h))

    def z(self, j):
        return self.edges[j % self.h]

    @cached_property
    def center(self):
        return centroid(self.vertices)

    @cached_property
    def satellites(self):
        return derive_satellites(self)

    def W(self, j):
        return self.satellites["W"][j % self.h]

    def U(self, j):
        return self.satellites["U"][j % self.h]

    @property
    def B_minus(self):
        return self.punctures[0]

    @property
    def B_plus(self):
        return self.punctures[1]

    def point(self, tag):
        """Resolve a symbolic endpoint tag such as ('V', 3), ('W', 0), ('B', '+')."""
        kind, idx = tag
        if kind == "V":
            return self.V(idx)
        if kind == "W":
            return self.W(idx)
        if kind == "U":
            return self.U(idx)
        if kind == "B":
            return self.punctures[0] if idx == "-" else self.punctures[1]
        raise KeyError(tag)

    def to_json(self):
        d = {"dynkin_type": self.dtype.family, "rank": self.dtype.rank,
             "vertices": [[format_fraction(p.x), format_fraction(p.y)] for p in self.vertices]}
        if self.punctures is not None:
            d["punctures"] = [[format_fraction(p.x), format_fraction(p.y)] for p in self.punctures]
        return d

    @classmethod
    def from_json(cls, d):
        try:
            t = DynkinType(d["dynkin_type"], d["rank"])
            verts = [RatPoint(as_fraction(x), as_fraction(y)) for x, y in d["vertices"]]
            punct = None
            if "punctures" in d and d["punctures"] is not None:
                punct = [RatPoint(as_fraction(x), as_fraction(y)) for x, y in d["punctures"]]
                if len(punct) != 2:
                    raise InvalidPolygon("exactly two punctures expected")
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
            if isinstance(e, InvalidPolygon):
                raise
            raise InvalidPolygon(f"malformed polygon JSON: {e}") from None
        return cls(t, verts, punct)

    def __eq__(self, other):
        return (isinstance(other, StablePolygon) and self.dtype == other.dtype
                and self.vertices == other.vertices and self.punctures == other.punctures)

    def __hash__(self):
        return hash((self.dtype, self.vertices, self.punctures))

    def __repr__(self):
        return f"StablePolygon({self.dtype}, h={self.h})"


def _check_relations(p):
    t = p.dtype
    h = coxeter_number(t)
    if len(p.vertices) != h:
        return f"wrong vertex count: expected {h}, got {len(p.vertices)}"
    if t.family == "D" and p.punctures is None:
        return "type D needs two punctures"
    if t.family != "D" and p.punctures is not None:
        return f"type {t.family} has no punctures"
    z = [p.vertices[j] - p.vertices[j - 1] for j in range(h)]
    for j in range(h):
        if z[j].is_zero():
            return f"zero edge at {j}"
    if t.family == "A" and t.rank == 1:
        return None
    two_o = None
    if t.family == "D" or (t.family == "E" and t.rank in (7, 8)):
        s = h // 2
        two_o = RatPoint(p.vertices[0].x + p.vertices[s].x, p.vertices[0].y + p.vertices[s].y)
        for j in range(h):
            q = p.vertices[(j + s) % h]
            if (p.vertices[j].x + q.x, p.vertices[j].y + q.y) != (two_o.x, two_o.y):
                return f"central symmetry at {j}"
    if t.family == "D":
        bm, bp = p.punctures
        if (bm.x + bp.x, bm.y + bp.y) != (two_o.x, two_o.y):
            return "central symmetry of punctures"
    for name, row in relation_rows(t):
        if name == "closure" or name.startswith("central symmetry"):
            continue
        sx = sum((c * z[k].dx for k, c in row.items()), Fraction(0))
        sy = sum((c * z[k].dy for k, c in row.items()), Fraction(0))
        if sx != 0 or sy != 0:
            return name
    return None


def validate_relations(dtype, vertices, punctures=None):
    """Return a StablePolygon, or raise InvalidPolygon naming the violated relation."""
    return StablePolygon(dtype, vertices, punctures)


def check_relations(dtype, vertices, punctures=None):
    """Like validate_relations but returns (polygon, None) or (None, violation)."""
    try:
        return StablePolygon(dtype, vertices, punctures), None
    except InvalidPolygon as e:
        return None, e.violation


def derive_satellites(p):
    """W_j (types E) and U_j (type E7), with every alternative expression checked."""
    terms = satellite_terms(p.dtype)
    if not terms:
        return {}
    h = p.h
    out = {}
    for name in ("W", "U"):
        if name not in terms:
            continue
        pts = []
        for j in range(h):
            val = None
            for kind, off, chain in terms[name]:
                base = p.V(j + off) if kind == "V" else out["W"][(j + off) % h]
                q = base
                for sgn, e in chain:
                    zz = p.z(j + e)
                    q = q + (zz if sgn > 0 else -zz)
                if val is None:
                    val = q
                elif q != val:
                    raise InvalidPolygon(f"inconsistent satellite {name}_{j}")
            pts.append(val)
        out[name] = tuple(pts)
    return out


def level_diagonal_gon(p, s):
    """Intersection of the left half-planes of all V_j V_{j+s}."""
    h = p.h
    if not 1 <= s <= h // 2:
        raise ValueError(f"level must lie in 1..{h // 2}")
    hp = tuple((p.V(j), p.V(j + s)) for j in range(h))
    poly = list(p.vertices)
    for a, b in hp:
        poly = clip_halfplane(poly, a, b)
        if not poly:
            break
    return ConvexRegion(hp, tuple(poly))


def stability_level(t):
    """The level of the diagonal-gon that must contain punctures / satellites."""
    if t.family == "D":
        return t.rank - 2
    if t.family == "E":
        return t.rank - 3
    return None


def is_stable(p):
    """Certificate of stability: convexity plus the type-specific containments."""
    t = p.dtype
    clauses = []
    if t.family == "A" and t.rank == 1:
        ok = p.vertices[0] != p.vertices[1]
        return StabilityCertificate(ok, [Clause("bigon with distinct ends", ok)])
    conv = is_positively_convex(p.vertices)
    clauses.append(Clause("positively convex", conv))
    if not conv:
        return StabilityCertificate(False, clauses)
    level = stability_level(t)
    if level is not None:
        region = level_diagonal_gon(p, level)
        if t.family == "D":
            for lab, b in (("-", p.B_minus), ("+", p.B_plus)):
                bad = region.violated_by(b)
                det = "" if bad is None else f"fails against V_{bad}V_{(bad + level) % p.h}"
                clauses.append(Clause(f"puncture B_{lab} inside level-{level} diagonal-gon",
                                      bad is None, det))
        else:
            for j in range(p.h):
                bad = region.violated_by(p.W(j))
                det = "" if bad is None else f"fails against V_{bad}V_{(bad + level) % p.h}"
                clauses.append(Clause(f"W_{j} inside level-{level} diagonal-gon", bad is None, det))
    return StabilityCertificate(all(c.ok for c in clauses), clauses)


def _reflect_x(q):
    return RatPoint(-q.x, q.y)


def mirror(p):
    """Reflect in the y-axis and re-index so the cycle is counter-clockwise again.

    V'_j is the mirror image of V_{-j}. The punctures are exchanged and then
    relabelled so that B_- stays the lower one.
    """
    h = p.h
    verts = [_reflect_x(p.vertices[(-j) % h]) for j in range(h)]
    punct = None
    if p.punctures is not None:
        punct = (_reflect_x(p.punctures[1]), _reflect_x(p.punctures[0]))
    return StablePolygon(p.dtype, verts, punct)


def rotate_rational(p, t):
    """Rotate about the origin by the rational circle point with tan(theta/2) = t."""
    t = as_fraction(t)
    verts = [rotate_point(q, t) for q in p.vertices]
    punct = None
    if p.punctures is not None:
        punct = [rotate_point(q, t) for q in p.punctures]
    return StablePolygon(p.dtype, verts, punct)


def translate(p, v):
    verts = [q + v for q in p.vertices]
    punct = None if p.punctures is None else [q + v for q in p.punctures]
    return StablePolygon(p.dtype, verts, punct)


def recenter(p):
    """Translate so the centroid sits at the origin."""
    c = p.center
    return translate(p, RatVec(-c.x, -c.y))
