"""Floating-point probe used to steer the E-type search.

Nothing computed here is trusted: every polygon the search proposes is
snapped to rationals and certified by the exact modules. The probe only
mirrors the exact pipeline (stability, simples, quiver) fast enough to
evaluate thousands of candidates.

A polygon of type E is described by complex coefficients c in the
solution space of the defining relations; with the canonical nullspace
basis, c is simply the list of edge vectors z_f at the free columns f.
"""
import math

import numpy as np

from .diagonals import type_model
from .dynkin import canonical_edges


class Probe:
    def __init__(self, t):
        m = type_model(t)
        self.t, self.m = t, m
        self.n, self.h = t.rank, m.h
        n, h = self.n, self.h
        self.B = np.array([[float(x) for x in b] for b in m.basis])
        self.free = list(m.free)
        self.tags = [("V", j) for j in range(h)] + [("W", j) for j in range(h)]
        self.row = {tg: i for i, tg in enumerate(self.tags)}
        self.F = np.array([[float(x) for x in m.forms[tg]] for tg in self.tags])
        self.cid = {}
        for mm, k in m.cid.items():
            a, b = tuple(mm)
            self.cid[(self.row[a], self.row[b])] = k
            self.cid[(self.row[b], self.row[a])] = k
        self.adj = set(m.triangles_of_pair)
        lev = n - 3
        self.lev_a = np.arange(h)
        self.lev_b = (np.arange(h) + lev) % h
        self.c0, self.c1, self.c2 = np.arange(h), (np.arange(h) + 1) % h, (np.arange(h) + 2) % h
        self.c3 = (np.arange(h) + 3) % h
        self.edges = canonical_edges(t)
        # member index pairs for the class-arg sweep
        reps = [m.class_rep[k] for k in range(len(m.class_rep))]
        self.rep_a = np.array([self.row[a] for a, _ in reps])
        self.rep_b = np.array([self.row[b] for _, b in reps])

    def points(self, c):
        return self.F @ c

    def regular(self):
        """Coefficients of the regular h-gon (it satisfies every relation)."""
        h = self.h
        z = np.exp(2j * np.pi * (np.arange(h) + 0.5) / h)
        return z[self.free]

    def stable(self, P, tol=1e-9):
        V = P[:self.h]
        W = P[self.h:]
        scale = max(1e-300, float(np.max(np.abs(V - V.mean()))))
        eps = tol * scale * scale

        def cross(u, v):
            return u.real * v.imag - u.imag * v.real

        if np.any(cross(V[self.c1] - V[self.c0], V[self.c2] - V[self.c0]) <= eps):
            return False
        A = V[self.lev_a][:, None]
        Bv = V[self.lev_b][:, None]
        if not np.all(cross(Bv - A, W[None, :] - A) > eps):
            return False
        # W_{k+1} left of V_k -> W_{k+3}: not part of the stability
        # predicate, but it separates the polygons whose charge is totally
        # stable from the others in every sample we drew
        return bool(np.all(cross(W[self.c3] - V, W[self.c1] - V) > eps))

    def _key(self, P, i):
        return (P[i].imag, P[i].real)

    def simple_pairs(self, P):
        n, h = self.n, self.h
        order = np.lexsort((P.real, P.imag))
        low = order[:n - 3]
        if np.any(low >= h):
            return None
        idx = sorted(int(x) for x in low)
        start = None
        for a in range(h):
            if sorted((a + i) % h for i in range(n - 3)) == idx:
                start = a
                break
        if start is None:
            return None
        off = start - 1

        def R(kind, j):
            return self.row[(kind, (j + off) % h)]

        key = lambda i: self._key(P, i)
        dl = [R("V", 0), R("W", 1), R("W", 3)]
        dr = [R("W", 2), R("W", 4), R("V", n - 2)]
        dp = dl if key(R("W", 1)) < key(R("W", 4)) else dr
        J = sorted([R("V", i) for i in range(1, n - 2)] + dp, key=key)
        steps = [(J[k], J[k + 1]) for k in range(n - 1)][::-1]
        labels = [1, 2] + list(range(4, n + 1))
        pairs = dict(zip(labels, steps))
        a, b = R("V", 0), R("W", 2)
        pairs[3] = (a, b) if key(a) < key(b) else (b, a)
        for a, b in pairs.values():
            if (a, b) not in self.cid:
                return None
        return pairs

    def analyze(self, c, tol=1e-9):
        """(signs, pairs, Z) for a stable probe polygon, or None."""
        P = self.points(c)
        if not self.stable(P, tol):
            return None
        pairs = self.simple_pairs(P)
        if pairs is None:
            return None
        n = self.n
        Z = np.array([P[pairs[i][1]] - P[pairs[i][0]] for i in range(1, n + 1)])
        args = np.angle(Z) % (2 * np.pi)
        cls = {i: self.cid[pairs[i]] for i in pairs}
        arrows = set()
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                if frozenset((cls[i], cls[j])) in self.adj:
                    arrows.add((i, j) if args[i - 1] > args[j - 1] else (j, i))
        if {frozenset(a) for a in arrows} != {frozenset(e) for e in self.edges}:
            return None
        signs = "".join("+" if e in arrows else "-" for e in self.edges)
        return signs, pairs, Z

    def chart(self, pairs):
        """Matrix L with Z(simples) = L c for a fixed choice of simple endpoints."""
        return np.array([self.F[pairs[i][1]] - self.F[pairs[i][0]] for i in range(1, self.n + 1)])

    def mirror(self, c):
        h = self.h
        V = self.points(c)[:h]
        Vm = np.array([-np.conj(V[(-j) % h]) for j in range(h)])
        z = Vm - np.roll(Vm, 1)
        return z[self.free]

    def class_args(self, c):
        P = self.points(c)
        return np.angle(P[self.rep_b] - P[self.rep_a]) % math.pi

    def sweep(self, c):
        """Rotations that put the boundary between consecutive class phases.

        Yields (rotated coefficients, analysis) for every stable result.
        """
        angs = np.unique(np.round(self.class_args(c), 12))
        mids = list((angs[:-1] + angs[1:]) / 2) + [(angs[-1] + math.pi) / 2]
        for a in mids:
            cc = c * np.exp(-1j * a)
            r = self.analyze(cc)
            if r is not None:
                yield cc, r

    def climb_extreme(self, c, k, direction, rng, iters=4000, target=0.02):
        """Random walk in the simple-charge chart that keeps the quiver and
        pushes simple k towards arg 0 (direction "-") or arg pi ("+"),
        below (above) every other simple.

        Returns (c, analysis, gap, room): gap is the distance of arg Z_k to
        the axis, room its margin to the nearest other simple.
        """
        r = self.analyze(c)
        if r is None:
            return None
        signs, pairs, Z = r
        i = k - 1
        others = [j for j in range(self.n) if j != i]

        def gap(Z):
            a = np.angle(Z) % (2 * math.pi)
            if direction == "-":
                return a[i], a[others].min() - a[i]
            return math.pi - a[i], a[i] - a[others].max()

        L = self.chart(pairs)
        g, room = gap(Z)
        for _ in range(iters):
            if g < target and room > 0:
                break
            step = rng.choice([0.01, 0.03, 0.1])
            Z2 = Z * np.exp(1j * step * rng.normal(size=self.n)) * np.exp(step * rng.normal(size=self.n))
            a2 = np.angle(Z2[i]) % (2 * math.pi)
            if direction == "-":
                Z2[i] = abs(Z2[i]) * np.exp(1j * min(a2, g * 0.9))
            else:
                Z2[i] = abs(Z2[i]) * np.exp(1j * max(a2, math.pi - g * 0.9))
            c2 = np.linalg.solve(L, Z2)
            r2 = self.analyze(c2)
            if r2 is None or r2[0] != signs:
                continue
            g2, room2 = gap(r2[2])
            if g2 < g or (room <= 0 and room2 > room):
                c, r, g, room = c2, r2, g2, room2
                Z = r2[2]
                L = self.chart(r2[1])
        return c, r, g, room

    def crossings(self, c, r, k, direction, delta):
        """Candidates with simple k just across the real axis: a chart move
        of Z_k alone, and a rotation of the whole polygon."""
        _, pairs, Z = r
        i = k - 1
        th = -delta if direction == "-" else math.pi + delta
        Z2 = Z.copy()
        Z2[i] = abs(Z[i]) * np.exp(1j * th)
        out = [np.linalg.solve(self.chart(pairs), Z2)]
        out.append(c * np.exp(1j * (th - np.angle(Z[i]))))
        return out
