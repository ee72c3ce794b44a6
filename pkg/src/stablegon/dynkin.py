"""Dynkin types, orientations, roots and the Euler form."""
from dataclasses import dataclass
from functools import lru_cache
import itertools


@dataclass(frozen=True)
class DynkinType:
    family: str
    rank: int

    def __post_init__(self):
        f, n = self.family, self.rank
        if f not in ("A", "D", "E"):
            raise ValueError(f"unknown Dynkin family {f!r}")
        if not isinstance(n, int) or isinstance(n, bool):
            raise ValueError("rank must be an integer")
        ok = (f == "A" and n >= 1) or (f == "D" and n >= 4) or (f == "E" and n in (6, 7, 8))
        if not ok:
            raise ValueError(f"invalid rank {n} for type {f}")

    def __str__(self):
        return f"{self.family}{self.rank}"

    @classmethod
    def parse(cls, s):
        s = s.strip()
        return cls(s[0].upper(), int(s[1:]))

    @property
    def h(self):
        return coxeter_number(self)

    def edges(self):
        return canonical_edges(self)


def coxeter_number(t):
    if t.family == "A":
        return t.rank + 1
    if t.family == "D":
        return 2 * (t.rank - 1)
    return {6: 12, 7: 18, 8: 30}[t.rank]


@lru_cache(maxsize=None)
def canonical_edges(t):
    """Edge list in the fixed serialization order."""
    n = t.rank
    if t.family == "A":
        return tuple((i, i + 1) for i in range(1, n))
    if t.family == "D":
        path = [(i, i + 1) for i in range(1, n - 2)]
        return tuple(path + [(n - 2, n - 1), (n - 2, n)])
    return tuple([(1, 2), (2, 4), (3, 4)] + [(i, i + 1) for i in range(4, n)])


def leaves(t):
    """Vertices of degree one in the canonical diagram."""
    deg = {i: 0 for i in range(1, t.rank + 1)}
    for a, b in canonical_edges(t):
        deg[a] += 1
        deg[b] += 1
    return tuple(i for i in sorted(deg) if deg[i] == 1)


@dataclass(frozen=True)
class DynkinQuiver:
    dtype: DynkinType
    orientation: tuple

    def __post_init__(self):
        o = tuple(self.orientation)
        object.__setattr__(self, "orientation", o)
        if len(o) != self.dtype.rank - 1:
            raise ValueError(f"expected {self.dtype.rank - 1} orientation signs, got {len(o)}")
        for s in o:
            if s not in ("+", "-"):
                raise ValueError(f"orientation sign must be '+' or '-', got {s!r}")

    @classmethod
    def from_signs(cls, t, signs):
        if isinstance(t, str):
            t = DynkinType.parse(t)
        return cls(t, tuple(signs))

    @property
    def rank(self):
        return self.dtype.rank

    @property
    def signs(self):
        return "".join(self.orientation)

    def arrows(self):
        """List of (source, target) pairs."""
        out = []
        for (a, b), s in zip(canonical_edges(self.dtype), self.orientation):
            out.append((a, b) if s == "+" else (b, a))
        return out

    def opposite(self):
        flip = {"+": "-", "-": "+"}
        return DynkinQuiver(self.dtype, tuple(flip[s] for s in self.orientation))

    def sinks(self):
        src = {a for a, _ in self.arrows()}
        return [i for i in range(1, self.rank + 1) if i not in src]

    def sources(self):
        tgt = {b for _, b in self.arrows()}
        return [i for i in range(1, self.rank + 1) if i not in tgt]

    def reflect(self, k):
        """Reverse all arrows at vertex k."""
        flip = {"+": "-", "-": "+"}
        o = []
        for (a, b), s in zip(canonical_edges(self.dtype), self.orientation):
            o.append(flip[s] if k in (a, b) else s)
        return DynkinQuiver(self.dtype, tuple(o))

    @classmethod
    def from_arrows(cls, t, arrows):
        """Build from an arrow set, which must be an orientation of the diagram."""
        arrows = set(arrows)
        o = []
        for a, b in canonical_edges(t):
            if (a, b) in arrows:
                o.append("+")
            elif (b, a) in arrows:
                o.append("-")
            else:
                raise ValueError(f"edge ({a},{b}) missing")
        if len(arrows) != len(o):
            raise ValueError("arrows outside the Dynkin diagram")
        return cls(t, tuple(o))

    def to_json(self):
        return {"dynkin_type": self.dtype.family, "rank": self.rank,
                "orientation": list(self.orientation)}

    @classmethod
    def from_json(cls, d):
        try:
            t = DynkinType(d["dynkin_type"], d["rank"])
            return cls(t, tuple(d["orientation"]))
        except (KeyError, TypeError) as e:
            raise ValueError(f"malformed quiver JSON: {e}") from None

    def __str__(self):
        return f"{self.dtype}[{self.signs}]"


def all_orientations(t):
    for signs in itertools.product("+-", repeat=t.rank - 1):
        yield DynkinQuiver(t, signs)


def cartan_matrix(t):
    n = t.rank
    c = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for a, b in canonical_edges(t):
        c[a - 1][b - 1] = c[b - 1][a - 1] = -1
    return c


def reflect_root(t, alpha, i):
    """Simple reflection s_i (0-based index) applied to a root."""
    c = cartan_matrix(t)
    k = sum(alpha[j] * c[j][i] for j in range(t.rank))
    out = list(alpha)
    out[i] -= k
    return tuple(out)


@lru_cache(maxsize=None)
def positive_roots(t):
    """Positive roots as tuples, closed under reflections that keep positivity."""
    n = t.rank
    c = cartan_matrix(t)
    simple = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    seen = set(simple)
    queue = list(simple)
    while queue:
        a = queue.pop()
        for i in range(n):
            k = sum(a[j] * c[j][i] for j in range(n))
            if k == 0:
                continue
            b = list(a)
            b[i] -= k
            b = tuple(b)
            if min(b) >= 0 and any(b) and b not in seen:
                seen.add(b)
                queue.append(b)
    return frozenset(seen)


def euler_matrix(q):
    n = q.rank
    e = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for a, b in q.arrows():
        e[a - 1][b - 1] -= 1
    return e


def euler_form(q, a, b):
    if len(a) != q.rank or len(b) != q.rank:
        raise ValueError("dimension vector rank mismatch")
    s = sum(x * y for x, y in zip(a, b))
    for i, j in q.arrows():
        s -= a[i - 1] * b[j - 1]
    return s


def lambda_form(q, i, j):
    """lambda(i, j) = <e_j, e_i> - <e_i, e_j> for vertices i, j (1-based)."""
    e = euler_matrix(q)
    return e[j - 1][i - 1] - e[i - 1][j - 1]


def lambda_matrix(q):
    n = q.rank
    e = euler_matrix(q)
    return [[e[j][i] - e[i][j] for j in range(n)] for i in range(n)]


def support_connected(t, alpha):
    supp = {i + 1 for i, a in enumerate(alpha) if a}
    if not supp:
        return False
    adj = {i: set() for i in supp}
    for a, b in canonical_edges(t):
        if a in supp and b in supp:
            adj[a].add(b)
            adj[b].add(a)
    start = next(iter(supp))
    seen, stack = {start}, [start]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == supp
