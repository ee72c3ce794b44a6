"""Exact rational plane geometry.

Everything here works over ``fractions.Fraction``. Angles are never
materialized; they are compared through quadrant classes and cross
products.
"""
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction


class Order(IntEnum):
    Less = -1
    Equal = 0
    Greater = 1


class Side(IntEnum):
    Right = -1
    On = 0
    Left = 1


def _sign(x):
    return (x > 0) - (x < 0)


def as_fraction(v):
    """Coerce ints, Fractions and "p/q" strings to a Fraction.

    Floats are refused on purpose; they would silently break exactness.
    """
    if isinstance(v, Fraction):
        return v
    if isinstance(v, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v.strip())
    raise TypeError(f"expected an exact rational, got {type(v).__name__}")


def format_fraction(v):
    """Serialize as "p/q" in lowest terms, or "p" when q = 1."""
    v = as_fraction(v)
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v.numerator}/{v.denominator}"


@dataclass(frozen=True, slots=True)
class RatVec:
    dx: Fraction
    dy: Fraction

    def __post_init__(self):
        object.__setattr__(self, "dx", as_fraction(self.dx))
        object.__setattr__(self, "dy", as_fraction(self.dy))

    def __add__(self, other):
        return RatVec(self.dx + other.dx, self.dy + other.dy)

    def __sub__(self, other):
        return RatVec(self.dx - other.dx, self.dy - other.dy)

    def __neg__(self):
        return RatVec(-self.dx, -self.dy)

    def __mul__(self, k):
        k = as_fraction(k)
        return RatVec(self.dx * k, self.dy * k)

    __rmul__ = __mul__

    def is_zero(self):
        return self.dx == 0 and self.dy == 0

    def cross(self, other):
        return self.dx * other.dy - self.dy * other.dx

    def dot(self, other):
        return self.dx * other.dx + self.dy * other.dy

    def to_complex(self):
        return complex(float(self.dx), float(self.dy))

    def __repr__(self):
        return f"RatVec({format_fraction(self.dx)}, {format_fraction(self.dy)})"


@dataclass(frozen=True, slots=True)
class RatPoint:
    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", as_fraction(self.x))
        object.__setattr__(self, "y", as_fraction(self.y))

    def __sub__(self, other):
        if isinstance(other, RatPoint):
            return RatVec(self.x - other.x, self.y - other.y)
        return RatPoint(self.x - other.dx, self.y - other.dy)

    def __add__(self, v):
        return RatPoint(self.x + v.dx, self.y + v.dy)

    def vec(self):
        """Position vector from the origin."""
        return RatVec(self.x, self.y)

    def to_complex(self):
        return complex(float(self.x), float(self.y))

    def __repr__(self):
        return f"RatPoint({format_fraction(self.x)}, {format_fraction(self.y)})"


@dataclass(frozen=True, slots=True)
class DirectedSegment:
    tail: RatPoint
    head: RatPoint

    def __post_init__(self):
        if self.tail == self.head:
            raise ValueError("degenerate segment: tail equals head")

    @property
    def vec(self):
        return self.head - self.tail


def cmp_points(p, q):
    """Compare by y first, then by x."""
    if p.y != q.y:
        return Order.Less if p.y < q.y else Order.Greater
    if p.x != q.x:
        return Order.Less if p.x < q.x else Order.Greater
    return Order.Equal


def point_key(p):
    """Sort key realizing cmp_points."""
    return (p.y, p.x)


def _quadrant(v):
    # half-open quadrants of [0, 2pi): [0, pi/2), [pi/2, pi), [pi, 3pi/2), [3pi/2, 2pi)
    if v.dy == 0:
        return 0 if v.dx > 0 else 2
    if v.dy > 0:
        return 0 if v.dx > 0 else 1
    return 2 if v.dx < 0 else 3


def cmp_arg(u, v):
    """Compare arg(u) and arg(v) in [0, 2pi) exactly."""
    if u.is_zero() or v.is_zero():
        raise ValueError("zero vector has no argument")
    qu, qv = _quadrant(u), _quadrant(v)
    if qu != qv:
        return Order.Less if qu < qv else Order.Greater
    # same quadrant: the angle between them is below pi/2
    return Order(-_sign(u.cross(v)))


def arg_key(v):
    """A sort key that orders vectors by arg in [0, 2pi).

    Within a quadrant we use a rational monotone of the angle, so no
    transcendental functions are needed.
    """
    if v.is_zero():
        raise ValueError("zero vector has no argument")
    q = _quadrant(v)
    dx, dy = v.dx, v.dy
    # rotate into the first quadrant, then t = y / (x + y) is increasing in angle
    for _ in range(q):
        dx, dy = dy, -dx
    return (q, dy / (dx + dy))


def is_upward(v):
    """arg(v) lies in [0, pi)."""
    return v.dy > 0 or (v.dy == 0 and v.dx > 0)


def upward(seg):
    """Orient a segment so that it points from the smaller to the larger end."""
    if cmp_points(seg.tail, seg.head) == Order.Less:
        return seg
    return DirectedSegment(seg.head, seg.tail)


def upward_vec(v):
    if v.is_zero():
        raise ValueError("zero vector cannot be normalized")
    return v if is_upward(v) else -v


def side_of(a, b, p):
    """Which side of the directed line a->b the point p lies on."""
    if a == b:
        raise ValueError("side_of needs two distinct points")
    return Side(_sign((b - a).cross(p - a)))


def is_positively_convex(cycle):
    """Strict counter-clockwise convexity.

    Every point not on a directed edge must lie strictly to its left.
    """
    pts = list(cycle)
    m = len(pts)
    if m < 3:
        return False
    for i in range(m):
        a, b = pts[i], pts[(i + 1) % m]
        if a == b:
            return False
        e = b - a
        for k in range(m):
            if k == i or k == (i + 1) % m:
                continue
            if e.cross(pts[k] - a) <= 0:
                return False
    return True


def point_in_convex(p, hull, strict=True):
    """Membership in a positively convex polygon."""
    hull = list(hull)
    if not is_positively_convex(hull):
        raise ValueError("hull is not positively convex")
    return _in_convex_unchecked(p, hull, strict)


def _in_convex_unchecked(p, hull, strict):
    m = len(hull)
    for i in range(m):
        a, b = hull[i], hull[(i + 1) % m]
        c = (b - a).cross(p - a)
        if c < 0 or (strict and c == 0):
            return False
    return True


def rational_circle_point(t):
    """(cos, sin) of the rotation with tan(theta/2) = t."""
    t = as_fraction(t)
    d = 1 + t * t
    return (1 - t * t) / d, 2 * t / d


def rotate_point(p, t):
    c, s = rational_circle_point(t)
    return RatPoint(c * p.x - s * p.y, s * p.x + c * p.y)


def clip_halfplane(poly, a, b):
    """Keep the part of a convex polygon on the closed left of a->b."""
    out = []
    m = len(poly)
    d = b - a
    vals = [d.cross(q - a) for q in poly]
    for i in range(m):
        p, q = poly[i], poly[(i + 1) % m]
        fp, fq = vals[i], vals[(i + 1) % m]
        if fp >= 0:
            out.append(p)
        if (fp > 0 and fq < 0) or (fp < 0 and fq > 0):
            r = fp / (fp - fq)
            out.append(RatPoint(p.x + r * (q.x - p.x), p.y + r * (q.y - p.y)))
    # drop repeated points produced by touching vertices
    clean = []
    for q in out:
        if not clean or clean[-1] != q:
            clean.append(q)
    if len(clean) > 1 and clean[0] == clean[-1]:
        clean.pop()
    return clean


def polygon_area2(poly):
    """Twice the signed area."""
    s = Fraction(0)
    m = len(poly)
    for i in range(m):
        p, q = poly[i], poly[(i + 1) % m]
        s += p.x * q.y - p.y * q.x
    return s


def centroid(points):
    pts = list(points)
    n = len(pts)
    return RatPoint(sum((p.x for p in pts), Fraction(0)) / n,
                    sum((p.y for p in pts), Fraction(0)) / n)
