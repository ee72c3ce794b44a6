"""Admissible diagonals, simples, decomposition and the intersection quiver.

The combinatorics (which endpoint pairs are admissible, which of them are
identified, which triples bound triangles) depends only on the Dynkin type,
so it is computed once per type on symbolic endpoint tags. Each tag also
carries a linear form: its position as a linear function on the solution
space of the defining relations. Two symbolic diagonals whose forms agree
up to sign have the same vector on every polygon of the type.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, cmp_to_key
import itertools

from networkx.utils import UnionFind

from .dynkin import DynkinQuiver, canonical_edges, coxeter_number
from .geometry import (RatVec, cmp_points, point_key, cmp_arg, arg_key, is_upward,
                       is_positively_convex, centroid, Order)
from .linalg import nullspace, solve
from .polygon import relation_rows, satellite_terms


class DegenerateInput(ValueError):
    """The polygon is not generic enough (ties, non-stable layout)."""


class ModelError(RuntimeError):
    """An internal consistency check failed."""


_KIND = {"V": 0, "W": 1, "B": 2}


def tag_key(tag):
    kind, idx = tag
    return (_KIND[kind], 0 if idx == "-" else 1 if idx == "+" else idx)


def tag_str(tag):
    kind, idx = tag
    return f"{kind}{idx}" if kind != "B" else f"B{idx}"


def _pair(a, b):
    return frozenset((a, b))


def _sorted_pair(m):
    a, b = sorted(m, key=tag_key)
    return a, b


# symbolic layer

class TypeModel:
    """Polygon-independent data for one Dynkin type."""

    def __init__(self, t):
        self.t = t
        self.n = t.rank
        self.h = coxeter_number(t)
        self._forms()
        self._members()
        self._classes()
        self._triangles()

    def _forms(self):
        t, h = self.t, self.h
        rows = []
        for _, row in relation_rows(t):
            r = [Fraction(0)] * h
            for k, c in row.items():
                r[k] = Fraction(c)
            rows.append(r)
        basis, free = nullspace(rows, h, with_free=True)
        self.free = free
        extra = 1 if t.family == "D" else 0
        dim = len(basis) + extra
        if dim != self.n:
            raise ModelError(f"solution space of {t} has dimension {dim}, expected {self.n}")
        self.basis = basis

        def zform(k):
            return tuple([b[k % h] for b in basis] + [Fraction(0)] * extra)

        def add(f, g, s=1):
            return tuple(x + s * y for x, y in zip(f, g))

        forms = {}
        cur = tuple([Fraction(0)] * dim)
        forms[("V", 0)] = cur
        for j in range(1, h):
            cur = add(cur, zform(j))
            forms[("V", j)] = cur
        self.zform = zform
        for name, exprs in satellite_terms(t).items():
            kind, off, chain = exprs[0]
            for j in range(h):
                base = forms[(kind, (j + off) % h)]
                f = base
                for sgn, e in chain:
                    f = add(f, zform(j + e), sgn)
                forms[(name, j)] = f
        if t.family == "D":
            o = tuple(x / 2 for x in forms[("V", h // 2)])
            unit = tuple([Fraction(0)] * (dim - 1) + [Fraction(1)])
            forms[("B", "+")] = add(o, unit)
            forms[("B", "-")] = add(o, unit, -1)
        self.forms = forms
        self.tags = sorted((tg for tg in forms if tg[0] != "U"), key=tag_key)

    def diff_form(self, a, b):
        fa, fb = self.forms[a], self.forms[b]
        return tuple(y - x for x, y in zip(fa, fb))

    def _members(self):
        t, h, n = self.t, self.h, self.n
        groups = []
        V = lambda j: ("V", j % h)
        W = lambda j: ("W", j % h)
        if t.family == "A":
            for a in range(h):
                for b in range(a + 1, h):
                    groups.append([(V(a), V(b))])
        elif t.family == "D":
            half = h // 2
            for j in range(h):
                for s in range(1, half):
                    groups.append([(V(j), V(j + s)), (V(j + half), V(j + s + half))])
                groups.append([(V(j), ("B", "-")), (("B", "+"), V(j + half))])
                groups.append([(V(j), ("B", "+")), (("B", "-"), V(j + half))])
        else:
            for j in range(h):
                for s in range(1, n - 2):
                    groups.append([(V(j), V(j + s))])
                groups.append([(V(j - 1), W(j + 2)), (W(j + 1), V(j + n - 3))])
                groups.append([(V(j - 1), W(j + 1)), (W(j + 2), V(j + n - 3))])
                groups.append([(V(j - 1), V(j)), (W(j + 4), V(j + n - 3)), (V(j + 2 - n), W(j + 2 - n))])
                if n == 6:
                    groups.append([(W(j), W(j + 2))])
                elif n == 7:
                    groups.append([(W(j), W(j + 2)), (W(j + 8), V(j + 7)), (V(j - 5), W(j - 6))])
                else:
                    groups.append([(W(j), W(j + 2)), (W(j + 14), V(j + 13)), (V(j - 10), W(j - 12))])
            if n in (7, 8):
                half = h // 2
                shifted = []
                for g in groups:
                    a, b = g[0]
                    shifted.append([(a, b), ((a[0], (a[1] + half) % h), (b[0], (b[1] + half) % h))])
                groups.extend(shifted)
        self.groups = groups

    def _classes(self):
        uf = UnionFind()
        for g in self.groups:
            ms = [_pair(a, b) for a, b in g]
            for m in ms:
                if len(m) != 2:
                    raise ModelError(f"degenerate symbolic diagonal {g}")
                uf[m]
            uf.union(*ms)
        listed = [frozenset(s) for s in uf.to_sets()]
        self.listed_class_count = len(listed)

        def key_of(m):
            a, b = _sorted_pair(m)
            f = self.diff_form(a, b)
            if not any(f):
                raise ModelError(f"symbolic diagonal {m} has zero form")
            lead = next(x for x in f if x != 0)
            return f if lead > 0 else tuple(-x for x in f)

        # the listed identifications must be consistent with the forms
        by_key = {}
        for s in listed:
            keys = {key_of(m) for m in s}
            if len(keys) != 1:
                raise ModelError(f"listed identification joins different vectors: {sorted(map(sorted, s))}")
            k = keys.pop()
            by_key.setdefault(k, set()).update(s)
        classes = []
        for k, ms in by_key.items():
            rep = min(ms, key=lambda m: tuple(tag_key(x) for x in _sorted_pair(m)))
            classes.append((rep, frozenset(ms), k))
        classes.sort(key=lambda c: tuple(tag_key(x) for x in _sorted_pair(c[0])))
        self.class_members = [c[1] for c in classes]
        self.class_rep = [_sorted_pair(c[0]) for c in classes]
        self.class_form = [c[2] for c in classes]
        self.cid = {}
        for i, ms in enumerate(self.class_members):
            for m in ms:
                self.cid[m] = i
        expected = self.n * self.h // 2
        if len(classes) != expected:
            raise ModelError(f"{self.t}: {len(classes)} diagonal classes, expected {expected}")

    def _triangles(self):
        adj = {tg: set() for tg in self.tags}
        for m in self.cid:
            a, b = tuple(m)
            adj[a].add(b)
            adj[b].add(a)
        tris = []
        for a in self.tags:
            for b in adj[a]:
                if tag_key(b) <= tag_key(a):
                    continue
                for c in adj[a] & adj[b]:
                    if tag_key(c) <= tag_key(b):
                        continue
                    tris.append((a, b, c))
        self.triangles = tris
        by_class = {}
        for tri in tris:
            for x, y in itertools.combinations(tri, 2):
                by_class.setdefault(self.cid[_pair(x, y)], []).append(tri)
        self.triangles_of_class = by_class
        by_pair = {}
        for tri in tris:
            a, b, c = tri
            ids = [self.cid[_pair(a, b)], self.cid[_pair(b, c)], self.cid[_pair(a, c)]]
            for x, y in itertools.combinations(ids, 2):
                by_pair.setdefault(frozenset((x, y)), []).append(tri)
        self.triangles_of_pair = by_pair


@lru_cache(maxsize=None)
def type_model(t):
    return TypeModel(t)


# per-polygon layer

@dataclass(frozen=True)
class DiagonalClass:
    cid: int
    members: frozenset
    representative: tuple
    vec: RatVec
    tail: object
    head: object

    @property
    def endpoints_geo(self):
        return (self.tail, self.head)

    def label(self):
        a, b = self.representative
        return f"{tag_str(a)}{tag_str(b)}"


@dataclass
class SimpleSet:
    classes: dict
    members: dict
    locator: dict
    analysis: object = field(repr=False, default=None)

    def __getitem__(self, i):
        return self.classes[i]

    def vec(self, i):
        return self.classes[i].vec

    @property
    def rank(self):
        return len(self.classes)


@dataclass(frozen=True)
class Arrow:
    source: int
    target: int
    grade: int


@dataclass
class IntersectionQuiver:
    rank: int
    arrows: list
    dtype: object = None

    def arrow_set(self):
        return {(a.source, a.target) for a in self.arrows}

    def to_dynkin(self):
        return DynkinQuiver.from_arrows(self.dtype, self.arrow_set())

    def opposite(self):
        return IntersectionQuiver(self.rank, [Arrow(a.target, a.source, a.grade) for a in self.arrows],
                                  self.dtype)


@dataclass
class StabilityFunction:
    """Central charges of the simples, compared by exact phase."""
    Z: dict

    @property
    def rank(self):
        return len(self.Z)

    def charge(self, dim):
        v = RatVec(0, 0)
        for i, m in enumerate(dim, start=1):
            if m:
                v = v + self.Z[i] * m
        return v

    def cmp_phase(self, a, b):
        return cmp_arg(self.charge(a), self.charge(b))

    def phase_key(self, dim):
        return arg_key(self.charge(dim))

    def is_upward(self):
        return all(is_upward(v) for v in self.Z.values())


class Analysis:
    """All diagonal data of one polygon, computed lazily."""

    def __init__(self, p):
        self.p = p
        self.t = p.dtype
        self.model = type_model(p.dtype)
        self._dec = {}

    # classes
    @property
    def classes(self):
        if not hasattr(self, "_classes"):
            self._classes = self._build_classes()
        return self._classes

    def _build_classes(self):
        m, p = self.model, self.p
        pts = {tg: p.point(tg) for tg in m.tags}
        self.pts = pts
        out = []
        for cid, ms in enumerate(m.class_members):
            a, b = m.class_rep[cid]
            v = pts[b] - pts[a]
            if v.is_zero():
                raise DegenerateInput(f"diagonal {tag_str(a)}{tag_str(b)} has zero length")
            for mm in ms:
                x, y = tuple(mm)
                w = pts[y] - pts[x]
                if w != v and w != -v:
                    raise ModelError(f"class of {tag_str(a)}{tag_str(b)} has inconsistent member "
                                     f"{tag_str(x)}{tag_str(y)}")
            if is_upward(v):
                out.append(DiagonalClass(cid, ms, (a, b), v, pts[a], pts[b]))
            else:
                out.append(DiagonalClass(cid, ms, (b, a), -v, pts[b], pts[a]))
        return out

    def class_of(self, a, b):
        return self.classes[self.model.cid[_pair(a, b)]]

    def has_member(self, a, b):
        return _pair(a, b) in self.model.cid

    # simples
    @property
    def simples(self):
        if not hasattr(self, "_simples"):
            self._simples = self._build_simples()
        return self._simples

    def _build_simples(self):
        f = self.t.family
        if f == "A":
            pairs, loc = self._simples_A()
        elif f == "D":
            pairs, loc = self._simples_D()
        else:
            pairs, loc = self._simples_E()
        classes, members = {}, {}
        for i, (a, b) in pairs.items():
            if not self.has_member(a, b):
                raise DegenerateInput(f"s_{i} = {tag_str(a)}{tag_str(b)} is not admissible")
            classes[i] = self.class_of(a, b)
            members[i] = (a, b)
        if len({c.cid for c in classes.values()}) != len(classes):
            raise DegenerateInput("simples are not pairwise distinct")
        return SimpleSet(classes, members, loc, self)

    def _sorted_tags(self, tags):
        pts = self.p.point
        return sorted(tags, key=lambda tg: (point_key(pts(tg)), tag_key(tg)))

    def _simples_A(self):
        Y = self._sorted_tags(self.model.tags)
        self._check_no_ties(Y)
        self.Y = Y
        return {i: (Y[i - 1], Y[i]) for i in range(1, len(Y))}, {"Y": Y}

    def _check_no_ties(self, tags, allowed=()):
        pts = [self.p.point(tg) for tg in tags]
        for i in range(len(pts) - 1):
            if pts[i] == pts[i + 1] and {tags[i], tags[i + 1]} not in allowed:
                raise DegenerateInput(f"ordering ambiguity: {tag_str(tags[i])} = {tag_str(tags[i + 1])}")

    def _simples_D(self):
        n, p = self.t.rank, self.p
        tags = self._sorted_tags(self.model.tags)
        self._check_no_ties(tags, allowed=({("B", "-"), ("B", "+")},))
        Ylist = tags

        def Y(i):
            return Ylist[i + n] if i < 0 else Ylist[i + n - 1]

        o2 = RatVec(2 * p.center.x, 2 * p.center.y)
        for i in range(1, n + 1):
            a, b = p.point(Y(i)), p.point(Y(-i))
            if (a.x + b.x, a.y + b.y) != (o2.dx, o2.dy):
                raise DegenerateInput("ordered points are not centrally symmetric")
        bm, bp = ("B", "-"), ("B", "+")
        if Y(-1) == bm and Y(1) == bp:
            case = 1
            sn = (Y(-2), bp)
        elif Y(-2) == bm and Y(2) == bp:
            case = 2
            sn = (Y(-1), bp)
        else:
            raise DegenerateInput("punctures are neither Y_{+-1} nor Y_{+-2}")
        self.Ylist, self.Yd, self.Dcase = Ylist, Y, case
        pairs = {i: (Y(i - n - 1), Y(i - n)) for i in range(1, n)}
        pairs[n] = sn
        lower = [Y(i) for i in range(-n, 0)]
        upper = [tg for tg in lower if tg != bm] + [bp]
        hull_ok = {}
        for name, hull in (("V_n^-", lower), ("V_n^+", upper)):
            hull_ok[name] = _convex_position(self.p, hull)
            if not hull_ok[name]:
                raise DegenerateInput(f"{name} is not a stable A-type polygon")
        return pairs, {"Y": Ylist, "case": "B=Y1" if case == 1 else "B=Y2",
                       "hulls": {"V_n^-": lower, "V_n^+": upper}}

    def _simples_E(self):
        n, h, p = self.t.rank, self.model.h, self.p
        tags = self._sorted_tags(self.model.tags)
        self._check_no_ties(tags)
        low = tags[:n - 3]
        if any(tg[0] != "V" for tg in low):
            raise DegenerateInput("the lowest points are not all polygon vertices")
        idx = sorted(tg[1] for tg in low)
        start = None
        for a in range(h):
            if sorted((a + i) % h for i in range(n - 3)) == idx:
                start = a
                break
        if start is None:
            raise DegenerateInput("the lowest vertices are not consecutive")
        off = start - 1

        def R(kind, j):
            return (kind, (j + off) % h)

        P = [R("V", i) for i in range(1, n - 2)]
        dl = [R("V", 0), R("W", 1), R("W", 3)]
        dr = [R("W", 2), R("W", 4), R("V", n - 2)]
        pl = sorted((p.point(tg) for tg in dl), key=point_key)
        pr = sorted((p.point(tg) for tg in dr), key=point_key)
        shift = pr[0] - pl[0]
        if any(pr[k] - pl[k] != shift for k in range(3)):
            raise ModelError("Delta_L and Delta_R are not parallel")
        if cmp_points(p.point(R("W", 1)), p.point(R("W", 4))) == Order.Less:
            dplus, which = dl, "L"
        else:
            dplus, which = dr, "R"
        J = self._sorted_tags(P + dplus)
        if not _convex_position(p, J):
            raise DegenerateInput("J_n is not positively convex")
        steps = [(J[k], J[k + 1]) for k in range(n - 1)][::-1]
        labels = [1, 2] + list(range(4, n + 1))
        pairs = dict(zip(labels, steps))
        a, b = R("V", 0), R("W", 2)
        if cmp_points(p.point(a), p.point(b)) != Order.Less:
            a, b = b, a
        pairs[3] = (a, b)
        alt = (R("W", 3), R("V", n - 2))
        v3 = p.point(b) - p.point(a)
        w3 = p.point(alt[1]) - p.point(alt[0])
        if w3 != v3 and w3 != -v3:
            raise ModelError("V_0W_2 and W_3V_{n-2} differ")
        self.Eoffset = off
        return pairs, {"offset": off, "P": P, "Delta_L": dl, "Delta_R": dr,
                       "Delta_+": which, "J": J}

    # decomposition
    def dimvector(self, cls):
        """K-class of an upward diagonal class in terms of the simples."""
        if cls.cid in self._dec:
            return self._dec[cls.cid]
        f = self.t.family
        if f == "A":
            d = self._dec_A(cls)
        elif f == "D":
            d = self._dec_D(cls)
        else:
            d = self._dec_split(cls, set())
        self._dec[cls.cid] = d
        return d

    def _unit(self, i):
        return tuple(1 if k == i else 0 for k in range(1, self.t.rank + 1))

    def _dec_A(self, cls):
        S = self.simples
        pos = {tg: k for k, tg in enumerate(S.locator["Y"])}
        a, b = cls.representative
        i, j = sorted((pos[a], pos[b]))
        return tuple(1 if i <= k - 1 < j else 0 for k in range(1, self.t.rank + 1))

    def _dec_D(self, cls):
        self.simples
        n = self.t.rank
        Y = self.Yd
        where = {}
        for i in list(range(-n, 0)) + list(range(1, n + 1)):
            where[Y(i)] = i
        # any member may be used; take the representative's upward orientation
        a, b = cls.representative
        return self._dec_D_idx(where[a], where[b])

    def _dec_D_idx(self, i, j):
        n, Y, case = self.t.rank, self.Yd, self.Dcase
        zero = [0] * n

        def add(u, v):
            return [x + y for x, y in zip(u, v)]

        def chain(lo, hi, steps):
            # sum of consecutive steps between positions lo < hi of a chain
            out = list(zero)
            for k in range(lo, hi):
                for s in steps[k]:
                    out[s - 1] += 1
            return out

        lower = [Y(k) for k in range(-n, 0)]
        lower_steps = [[m + n + 1] for m in range(-n, -1)]
        bm, bp = ("B", "-"), ("B", "+")
        if case == 1:
            upper = lower[:-1] + [bp]
            upper_steps = [[m + n + 1] for m in range(-n, -2)] + [[n]]
        else:
            upper = [tg for tg in lower if tg != bm] + [bp]
            upper_steps = [[m + n + 1] for m in range(-n, -3)] + [[n - 2, n - 1], [n]]
        bm_i = -1 if case == 1 else -2
        bp_i = -bm_i

        def rec(i, j):
            if j <= -1:
                return chain(i + n, j + n, lower_steps)
            if i >= 1:
                return rec(-j, -i)
            if j == bp_i and i != bm_i:
                ui, uj = upper.index(Y(i)), upper.index(bp)
                return chain(ui, uj, upper_steps)
            if i == bm_i:
                return rec(-j, bp_i)
            if i < bm_i:
                return add(rec(i, bm_i), rec(-j, bp_i))
            # remaining: case 2, i = -1, j >= 3
            return add(rec(-1, 2), rec(-j, -2))

        if i + j == 0:
            raise ModelError("diameters are not admissible")
        return tuple(rec(i, j))

    def _splits(self, cls):
        """All triangle splits cls = l1 + l2 with l1, l2 upward admissible classes."""
        m, pts = self.model, self.pts
        out = []
        for tri in m.triangles_of_class.get(cls.cid, ()):
            a, b, c = sorted(tri, key=lambda tg: (point_key(pts[tg]), tag_key(tg)))
            if m.cid[_pair(a, c)] != cls.cid:
                continue
            if pts[a] == pts[b] or pts[b] == pts[c]:
                continue
            out.append((self.classes[m.cid[_pair(a, b)]], self.classes[m.cid[_pair(b, c)]], (a, b, c)))
        return out

    def _measure(self, v):
        return (v.dy, v.dx * v.dx + v.dy * v.dy)

    def _dec_split(self, cls, busy, chooser=None):
        S = self.simples
        for i, s in S.classes.items():
            if s.cid == cls.cid:
                return self._unit(i)
        mv = self._measure(cls.vec)
        splits = [sp for sp in self._splits(cls)
                  if self._measure(sp[0].vec) < mv and self._measure(sp[1].vec) < mv]
        if not splits:
            raise ModelError(f"no split found for non-simple diagonal {cls.label()}")
        if chooser is not None:
            splits = chooser(splits)
        for l1, l2, _ in splits:
            if l1.cid in busy or l2.cid in busy:
                continue
            d1 = self._memo_split(l1, busy | {cls.cid}, chooser)
            d2 = self._memo_split(l2, busy | {cls.cid}, chooser)
            return tuple(x + y for x, y in zip(d1, d2))
        raise ModelError(f"splitting of {cls.label()} does not terminate")

    def _memo_split(self, cls, busy, chooser):
        memo = self._dec if chooser is None else self._alt_memo
        if cls.cid not in memo:
            memo[cls.cid] = self._dec_split(cls, busy, chooser)
        return memo[cls.cid]

    def dimvector_with(self, cls, chooser):
        """Decompose with a custom split order (used for path-independence checks)."""
        self._alt_memo = {}
        self.classes
        return self._dec_split(cls, set(), chooser)

    def split_consistency(self):
        """Check that every available split of every class gives the same K-class.

        Returns the number of splits checked.
        """
        count = 0
        for cls in self.classes:
            d = self.dimvector(cls)
            for l1, l2, tri in self._splits(cls):
                d1, d2 = self.dimvector(l1), self.dimvector(l2)
                if tuple(x + y for x, y in zip(d1, d2)) != d:
                    raise ModelError(f"split of {cls.label()} through {tri} is inconsistent")
                count += 1
        return count

    def dimvector_symbolic(self, cls):
        """Independent route: solve the linear-form identity l = sum m_i s_i."""
        m = self.model
        S = self.simples
        n = self.t.rank
        cols = []
        for i in range(1, n + 1):
            a, b = S.classes[i].representative
            cols.append(m.diff_form(a, b))
        a, b = cls.representative
        rhs = m.diff_form(a, b)
        rows = [[cols[i][r] for i in range(n)] for r in range(n)]
        x = solve(rows, rhs)
        if any(v.denominator != 1 for v in x):
            raise ModelError(f"non-integral K-class for {cls.label()}")
        return tuple(int(v) for v in x)

    # intersections
    def essential(self):
        if hasattr(self, "_essential"):
            return self._essential
        S = self.simples
        m, pts = self.model, self.pts
        punct = []
        if self.t.family == "D":
            punct = [self.p.B_minus, self.p.B_plus]
        by_cid = {c.cid: i for i, c in S.classes.items()}
        found = {}
        for i, j in itertools.combinations(sorted(S.classes), 2):
            ci, cj = S.classes[i].cid, S.classes[j].cid
            for tri in m.triangles_of_pair.get(frozenset((ci, cj)), ()):
                res = self._oriented_at(tri, ci, cj, punct)
                if res is None:
                    continue
                src_c, dst_c = res
                src, dst = by_cid[src_c], by_cid[dst_c]
                grade = 1 if cmp_arg(S.classes[dst].vec, S.classes[src].vec) == Order.Less else 0
                key = frozenset((i, j))
                if key in found and found[key] != (src, dst, grade):
                    raise ModelError(f"conflicting intersections between s_{i} and s_{j}")
                found[key] = (src, dst, grade)
        self._essential = sorted(found.values())
        return self._essential

    def _oriented_at(self, tri, ci, cj, punct):
        m, pts = self.model, self.pts
        sides = {}
        for x, y in itertools.combinations(tri, 2):
            sides.setdefault(m.cid[_pair(x, y)], []).append((x, y))
        a, b, c = (pts[tg] for tg in tri)
        area = (b - a).cross(c - a)
        if area == 0:
            return None
        if punct:
            ccw = (a, b, c) if area > 0 else (a, c, b)
            for q in punct:
                if all((ccw[(k + 1) % 3] - ccw[k]).cross(q - ccw[k]) > 0 for k in range(3)):
                    return None
        for si in sides.get(ci, ()):
            for sj in sides.get(cj, ()):
                shared = set(si) & set(sj)
                if len(shared) != 1:
                    continue
                P = shared.pop()
                ri = pts[si[0] if si[1] == P else si[1]] - pts[P]
                rj = pts[sj[0] if sj[1] == P else sj[1]] - pts[P]
                cr = ri.cross(rj)
                if cr > 0:
                    return ci, cj
                if cr < 0:
                    return cj, ci
        return None


def _convex_position(p, tags):
    pts = [p.point(tg) for tg in tags]
    if len(pts) < 3:
        return len(set(pts)) == len(pts)
    c = centroid(pts)
    order = sorted(pts, key=lambda q: arg_key(q - c) if q != c else (0, 0))
    return is_positively_convex(order)


_cache = {}


def analyze(p):
    """Per-polygon analysis, memoized on the polygon's content."""
    key = (p.dtype, p.vertices, p.punctures)
    a = _cache.get(key)
    if a is None:
        if len(_cache) > 512:
            _cache.clear()
        a = Analysis(p)
        _cache[key] = a
    return a


# public operations

def admissible_diagonals(p):
    return list(analyze(p).classes)


def upward_diagonals(p):
    """One upward representative per class, sorted by decreasing arg."""
    cls = analyze(p).classes
    return sorted(cls, key=cmp_to_key(lambda a, b: -int(cmp_arg(a.vec, b.vec))))


def central_charge(cls):
    return cls.vec


def simples(p):
    return analyze(p).simples


def decompose(cls, S):
    """K-class of an upward class in terms of a simple set."""
    return S.analysis.dimvector(cls)


def essential_intersections(S, all_classes=None):
    """Set of (source, target, grade) over pairs of simples."""
    return set(S.analysis.essential())


def intersection_quiver(p):
    a = analyze(p)
    n = p.dtype.rank
    arrows = [Arrow(s, t, g) for s, t, g in a.essential()]
    iq = IntersectionQuiver(n, arrows, p.dtype)
    und = {frozenset((x.source, x.target)) for x in arrows}
    want = {frozenset(e) for e in canonical_edges(p.dtype)}
    if und != want:
        raise DegenerateInput(f"intersection quiver is not the {p.dtype} diagram: "
                              f"{sorted(tuple(sorted(e)) for e in und)}")
    return iq


def stability_function(p):
    """Central charges of the simples and the phase-sorted upward classes with K-classes.

    Returns (StabilityFunction, [(class, dimvector), ...]) in decreasing phase.
    """
    a = analyze(p)
    S = a.simples
    Z = StabilityFunction({i: S.classes[i].vec for i in S.classes})
    rows = []
    for cls in upward_diagonals(p):
        d = a.dimvector(cls)
        if Z.charge(d) != cls.vec:
            raise ModelError(f"charge of {cls.label()} is not additive")
        rows.append((cls, d))
    return Z, rows
