"""Representations of Dynkin quivers: an independent check of total stability.

Indecomposables are produced from projectives by the inverse Coxeter
functor (a composite of source reflection functors), or dually from
injectives by the Coxeter functor. Hom spaces come from the linear system
of commuting squares; everything is over the integers or rationals.
"""
from dataclasses import dataclass, field
from functools import lru_cache
import random

import flint

from .dynkin import euler_form, positive_roots
from .geometry import Order, cmp_arg
from .linalg import int_left_kernel, int_nullspace


def _mat(rows, r, c):
    return flint.fmpz_mat(r, c, [int(x) for row in rows for x in row]) if r and c else flint.fmpz_mat(r, c)


def _to_lists(m):
    return [[int(m[i, j]) for j in range(m.ncols())] for i in range(m.nrows())]


class Representation:
    """A representation: a space k^dim[v] at each vertex and one integer
    matrix (target dim x source dim) per arrow."""

    def __init__(self, quiver, dim, maps):
        self.quiver = quiver
        self.dim = tuple(int(x) for x in dim)
        self.maps = {}
        for a, b in quiver.arrows():
            m = maps.get((a, b))
            r, c = self.dim[b - 1], self.dim[a - 1]
            if m is None:
                m = flint.fmpz_mat(r, c)
            elif not isinstance(m, flint.fmpz_mat):
                m = _mat(m, r, c)
            if (m.nrows(), m.ncols()) != (r, c):
                raise ValueError(f"map on arrow {a}->{b} has shape {m.nrows()}x{m.ncols()}, expected {r}x{c}")
            self.maps[(a, b)] = m

    def matrix(self, arrow):
        return _to_lists(self.maps[arrow])

    def is_zero(self):
        return not any(self.dim)

    def to_json(self):
        return {"dim": list(self.dim),
                "maps": {f"{a}->{b}": self.matrix((a, b)) for a, b in self.quiver.arrows()}}

    def __repr__(self):
        return f"Representation({self.quiver}, dim={self.dim})"


def simple(q, i):
    return Representation(q, [1 if v == i else 0 for v in range(1, q.rank + 1)], {})


def _reach(q, i, forward):
    succ = {}
    for a, b in q.arrows():
        s, t = (a, b) if forward else (b, a)
        succ.setdefault(s, []).append(t)
    seen, stack = {i}, [i]
    while stack:
        for w in succ.get(stack.pop(), []):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def _thin(q, support):
    one = flint.fmpz_mat(1, 1, [1])
    dim = [1 if v in support else 0 for v in range(1, q.rank + 1)]
    maps = {(a, b): one for a, b in q.arrows() if a in support and b in support}
    return Representation(q, dim, maps)


def projective(q, i):
    """P(i): paths starting at i (the diagram is a tree, so at most one per vertex)."""
    return _thin(q, _reach(q, i, True))


def injective(q, i):
    """I(i): paths ending at i."""
    return _thin(q, _reach(q, i, False))


# reflection functors

def reflect_source(M, k):
    """Source reflection functor at k: replaces M_k by the cokernel of
    M_k -> (sum of M_i over arrows k->i); the arrows at k are reversed."""
    q = M.quiver
    out = [(a, b) for a, b in q.arrows() if a == k]
    if any(b == k for _, b in q.arrows()):
        raise ValueError(f"{k} is not a source")
    nq = q.reflect(k)
    dk = M.dim[k - 1]
    blocks = [M.dim[b - 1] for _, b in out]
    total = sum(blocks)
    rows = []
    for (a, b) in out:
        rows.extend(_to_lists(M.maps[(a, b)]) if dk else [[] for _ in range(M.dim[b - 1])])
    if dk:
        Y = int_left_kernel(rows, total, dk)
    else:
        Y = [[1 if i == j else 0 for j in range(total)] for i in range(total)]
    r = len(Y)
    dim = list(M.dim)
    dim[k - 1] = r
    maps = {}
    for arrow, m in M.maps.items():
        if k not in arrow:
            maps[arrow] = m
    off = 0
    for (a, b), w in zip(out, blocks):
        maps[(b, a)] = _mat([row[off:off + w] for row in Y], r, w)
        off += w
    return Representation(nq, dim, maps)


def reflect_sink(M, k):
    """Sink reflection functor at k: replaces M_k by the kernel of
    (sum of M_i over arrows i->k) -> M_k; the arrows at k are reversed."""
    q = M.quiver
    inc = [(a, b) for a, b in q.arrows() if b == k]
    if any(a == k for a, _ in q.arrows()):
        raise ValueError(f"{k} is not a sink")
    nq = q.reflect(k)
    dk = M.dim[k - 1]
    blocks = [M.dim[a - 1] for a, _ in inc]
    total = sum(blocks)
    if dk:
        mats = [_to_lists(M.maps[(a, b)]) for a, b in inc]
        psi = [sum((m[r] for m in mats), []) for r in range(dk)]
        K = int_nullspace(psi, dk, total)
    else:
        K = [[1 if i == j else 0 for j in range(total)] for i in range(total)]
    r = len(K)
    dim = list(M.dim)
    dim[k - 1] = r
    maps = {}
    for arrow, m in M.maps.items():
        if k not in arrow:
            maps[arrow] = m
    off = 0
    for (a, b), w in zip(inc, blocks):
        # columns of the new map are the kernel vectors restricted to block a
        maps[(b, a)] = _mat([[K[c][off + i] for c in range(r)] for i in range(w)], w, r)
        off += w
    return Representation(nq, dim, maps)


def sink_sequence(q):
    """An ordering k_1..k_n with k_j a sink after reflecting k_1..k_{j-1}."""
    seq, cur = [], q
    left = set(range(1, q.rank + 1))
    while left:
        k = min(v for v in cur.sinks() if v in left)
        seq.append(k)
        left.discard(k)
        cur = cur.reflect(k)
    return seq


def coxeter_minus(M, seq):
    """Inverse Coxeter functor: source reflections at k_n, ..., k_1."""
    for k in reversed(seq):
        M = reflect_source(M, k)
        if M.is_zero():
            return M
    return M


def coxeter_plus(M, seq):
    """Coxeter functor: sink reflections at k_1, ..., k_n."""
    for k in seq:
        M = reflect_sink(M, k)
        if M.is_zero():
            return M
    return M


def _knit(q, method):
    seq = sink_sequence(q)
    if method == "projectives":
        start, step = projective, (lambda M: coxeter_minus(M, seq))
    elif method == "injectives":
        start, step = injective, (lambda M: coxeter_plus(M, seq))
    else:
        raise ValueError(f"unknown method {method!r}")
    found = {}
    for i in range(1, q.rank + 1):
        M = start(q, i)
        while not M.is_zero():
            if M.dim in found:
                raise RuntimeError(f"dimension vector {M.dim} produced twice")
            found[M.dim] = M
            M = step(M)
    return found


@lru_cache(maxsize=256)
def indecomposables(q, method="projectives"):
    """Mapping dimension vector -> indecomposable representation.

    method "projectives" applies the inverse Coxeter functor to the
    projectives, "injectives" the Coxeter functor to the injectives.
    """
    found = _knit(q, method)
    if set(found) != set(positive_roots(q.dtype)):
        raise RuntimeError(f"knitting for {q} does not reach exactly the positive roots")
    return found


# homomorphisms

def _hom_system(M, N):
    """Rows of the commuting-square system for f = (f_v : M_v -> N_v).

    Unknown (v, r, c) is entry (r, c) of f_v, numbered vertex by vertex.
    """
    q = M.quiver
    off, cur = {}, 0
    for v in range(1, q.rank + 1):
        off[v] = cur
        cur += N.dim[v - 1] * M.dim[v - 1]
    nvar = cur
    rows = []
    for (s, t) in q.arrows():
        ms, mt = M.dim[s - 1], M.dim[t - 1]
        ns, nt = N.dim[s - 1], N.dim[t - 1]
        if ms == 0 or nt == 0:
            continue
        Na, Ma = N.maps[(s, t)], M.maps[(s, t)]
        for r in range(nt):
            for c in range(ms):
                row = [0] * nvar
                # (N_a f_s)[r, c] = sum_k N_a[r, k] f_s[k, c]
                for k in range(ns):
                    x = Na[r, k]
                    if x:
                        row[off[s] + k * ms + c] += int(x)
                # (f_t M_a)[r, c] = sum_k f_t[r, k] M_a[k, c]
                for k in range(mt):
                    x = Ma[k, c]
                    if x:
                        row[off[t] + r * mt + k] -= int(x)
                rows.append(row)
    return rows, nvar, off


@dataclass
class HomSpace:
    source: Representation
    target: Representation
    basis: list  # each element: dict vertex -> fmpz_mat (target dim x source dim)

    @property
    def dim(self):
        return len(self.basis)

    def combine(self, coeffs):
        out = {}
        for v in range(1, self.source.quiver.rank + 1):
            r, c = self.target.dim[v - 1], self.source.dim[v - 1]
            acc = flint.fmpz_mat(r, c)
            for a, f in zip(coeffs, self.basis):
                if a:
                    acc = acc + f[v] * a
            out[v] = acc
        return out


def hom_space(M, N):
    """Exact integer basis of Hom(M, N)."""
    if M.quiver != N.quiver:
        raise ValueError("representations of different quivers")
    rows, nvar, off = _hom_system(M, N)
    if nvar == 0:
        return HomSpace(M, N, [])
    if rows:
        vecs = int_nullspace(rows, len(rows), nvar)
    else:
        vecs = [[1 if i == j else 0 for j in range(nvar)] for i in range(nvar)]
    basis = []
    for x in vecs:
        f = {}
        for v in range(1, M.quiver.rank + 1):
            r, c = N.dim[v - 1], M.dim[v - 1]
            f[v] = _mat([x[off[v] + i * c:off[v] + (i + 1) * c] for i in range(r)], r, c)
        basis.append(f)
    return HomSpace(M, N, basis)


def hom_dim(M, N):
    return hom_space(M, N).dim


def is_hom(f, M, N):
    return all(N.maps[a] * f[a[0]] == f[a[1]] * M.maps[a] for a in M.quiver.arrows())


def is_injective(f, M):
    return all(M.dim[v - 1] == 0 or f[v].rank() == M.dim[v - 1] for v in f)


@dataclass
class EmbedResult:
    embeds: bool
    certain: bool
    certificate: dict = None
    note: str = ""

    def __bool__(self):
        return self.embeds


def hom_vanishes(M, N):
    """Hom(M, N) = 0 for non-isomorphic indecomposables with <dim M, dim N> <= 0.

    Over a Dynkin quiver Hom(M, N) and Ext(M, N) of two non-isomorphic
    indecomposables are never both nonzero (the category is directed), so
    dim Hom(M, N) = max(<dim M, dim N>, 0).
    """
    return M.dim != N.dim and euler_form(M.quiver, M.dim, N.dim) <= 0


def embeds(M, N, trials=32, seed=0, hom=None, exact_hom=False):
    """Does M embed into N? Both are assumed indecomposable.

    True answers carry an injective homomorphism, verified exactly. False
    answers are certain when Hom(M, N) = 0 or when the basis maps share a
    kernel vector at some vertex; otherwise they rest on the random trials
    (generic injectivity is an open condition). Unless exact_hom is set,
    Hom = 0 is read off the Euler form when it applies.
    """
    if any(a > b for a, b in zip(M.dim, N.dim)):
        return EmbedResult(False, True, note="dimension vector not bounded")
    if hom is None and not exact_hom and hom_vanishes(M, N):
        return EmbedResult(False, True, note="Hom = 0 by the Euler form")
    H = hom if hom is not None else hom_space(M, N)
    if H.dim == 0:
        return EmbedResult(False, True, note="Hom = 0")
    cands = [f for f in H.basis]
    rng = random.Random(seed)
    for _ in range(trials):
        cands.append(H.combine([rng.randint(-7, 7) for _ in range(H.dim)]))
    for f in cands:
        if is_injective(f, M):
            if not is_hom(f, M, N):
                raise RuntimeError("hom basis element violates a commuting square")
            return EmbedResult(True, True, {v: _to_lists(f[v]) for v in f}, "injective map found")
    for v in range(1, M.quiver.rank + 1):
        d = M.dim[v - 1]
        if d == 0:
            continue
        stacked = flint.fmpz_mat(N.dim[v - 1] * H.dim, d,
                                 [int(f[v][i, j]) for f in H.basis
                                  for i in range(N.dim[v - 1]) for j in range(d)])
        if stacked.rank() < d:
            return EmbedResult(False, True, note=f"every map kills a common vector at vertex {v}")
    if H.dim == 1:
        return EmbedResult(False, True, note="the only map up to scalar is not injective")
    return EmbedResult(False, False, note=f"no injective map in {trials} random trials")


# total stability

@dataclass
class PairRecord:
    sub: tuple
    root: tuple
    phase: str        # "<", "=" or ">" comparing phase(sub) with phase(root)
    embeds: object    # True, False, or None when not needed
    certain: bool = True
    certificate: dict = None
    note: str = ""


@dataclass
class StabilityReport:
    verdict: bool
    pairs: list = field(default_factory=list)
    counterexample: PairRecord = None
    uncertain: int = 0
    note: str = ("submodules are checked among indecomposables only: a direct summand "
                 "of a destabilizing submodule embeds as well")

    def to_json(self):
        def rec(r):
            d = {"sub": list(r.sub), "root": list(r.root), "phase": r.phase,
                 "embeds": r.embeds, "certain": r.certain}
            if r.certificate is not None:
                d["certificate"] = {str(v): m for v, m in r.certificate.items()}
            if r.note:
                d["note"] = r.note
            return d
        return {"verdict": self.verdict, "note": self.note, "uncertain_pairs": self.uncertain,
                "counterexample": rec(self.counterexample) if self.counterexample else None,
                "pairs": [rec(r) for r in self.pairs]}


def _charge(Z, dim):
    if hasattr(Z, "charge"):
        return Z.charge(dim)
    from .geometry import RatVec
    v = RatVec(0, 0)
    for i, m in enumerate(dim, start=1):
        if m:
            v = v + Z[i] * m
    return v


def check_total_stability(q, Z, trials=32, seed=0, exact_hom=False):
    """Check that every indecomposable is Z-stable.

    For every pair of roots e != d with e <= d, an embedding M_e -> M_d
    must come with phase(e) < phase(d). Embeddings are only searched for
    pairs whose phases are in the wrong order.
    """
    reps = indecomposables(q)
    roots = sorted(reps)
    charge = {d: _charge(Z, d) for d in roots}
    rep = StabilityReport(True)
    sym = {Order.Less: "<", Order.Equal: "=", Order.Greater: ">"}
    for d in roots:
        for e in roots:
            if e == d or any(a > b for a, b in zip(e, d)):
                continue
            c = cmp_arg(charge[e], charge[d])
            if c == Order.Less:
                rep.pairs.append(PairRecord(e, d, "<", None))
                continue
            res = embeds(reps[e], reps[d], trials, seed, exact_hom=exact_hom)
            r = PairRecord(e, d, sym[c], res.embeds, res.certain, res.certificate, res.note)
            rep.pairs.append(r)
            if not res.certain:
                rep.uncertain += 1
            if res.embeds and rep.verdict:
                rep.verdict = False
                rep.counterexample = r
    return rep


def ext_dim(M, N):
    """dim Ext^1(M, N) = dim Hom(M, N) - <dim M, dim N> (hereditary)."""
    return hom_dim(M, N) - euler_form(M.quiver, M.dim, N.dim)


def ext_quiver_check(q, iq):
    """The Ext-quiver of the simples agrees with the intersection quiver,
    and every intersection has grade 1."""
    n = q.rank
    S = {i: simple(q, i) for i in range(1, n + 1)}
    ext = set()
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            e = ext_dim(S[i], S[j])
            if e < 0:
                raise RuntimeError("negative Ext dimension")
            if e:
                ext.add((i, j))
    return ext == iq.arrow_set() and all(a.grade == 1 for a in iq.arrows)
