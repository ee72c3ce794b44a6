"""Truncated quantum affine space, the quantum dilogarithm and DT products.

Coefficients are rational functions of t = q^{1/2} with rational
coefficients, kept as reduced numerator/denominator pairs so equality is
exact. Monomials are normal ordered with y^a y^b = t^(-lambda(a, b)) y^(a+b),
so y_i y_j = q^(-lambda(i, j)) y_j y_i. This sign is the one for which
the phase-decreasing products satisfy the pentagon identity; with the
opposite sign the identity fails at every truncation order.
"""
from fractions import Fraction
from functools import cmp_to_key, lru_cache
import math

import flint

from .dynkin import lambda_matrix
from .geometry import Order, RatVec, cmp_arg, rational_circle_point
from .modules import _charge, embeds, indecomposables


class NonDiscrete(ValueError):
    def __init__(self, a, b):
        super().__init__(f"classes {a} and {b} have the same phase")
        self.pair = (a, b)


T = flint.fmpq_poly([0, 1])
ONE = flint.fmpq_poly([1])


def _pstr(p):
    """Polynomial in t, highest degree first, e.g. "t^2 - 1"."""
    parts = []
    for k in range(p.degree(), -1, -1):
        c = Fraction(int(p[k].p), int(p[k].q))
        if c == 0:
            continue
        mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
        a = abs(c)
        coef = str(a) if (a != 1 or not mono) else ""
        body = coef + ("*" if coef and mono else "") + mono
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts) if parts else "0"


class RatFunc:
    """num/den in t, reduced, with monic denominator."""
    __slots__ = ("num", "den")

    def __init__(self, num, den=ONE):
        num, den = flint.fmpq_poly(num), flint.fmpq_poly(den)
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if num == 0:
            self.num, self.den = flint.fmpq_poly(0), ONE
            return
        g = num.gcd(den)
        num, den = num // g, den // g
        lead = den[den.degree()]
        self.num, self.den = num / lead, den / lead

    @classmethod
    def monomial(cls, k):
        if k >= 0:
            return cls(T ** k)
        return cls(ONE, T ** (-k))

    def __add__(self, o):
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    def __mul__(self, o):
        return RatFunc(self.num * o.num, self.den * o.den)

    def shift(self, k):
        """Multiply by t^k."""
        if k == 0:
            return self
        if k > 0:
            return RatFunc(self.num * T ** k, self.den)
        return RatFunc(self.num, self.den * T ** (-k))

    def is_zero(self):
        return self.num == 0

    def __eq__(self, o):
        return isinstance(o, RatFunc) and self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((str(self.num), str(self.den)))

    def __str__(self):
        n = _pstr(self.num)
        if self.den == ONE:
            return n
        return f"({n})/({_pstr(self.den)})"

    __repr__ = __str__


class QSeries:
    """Truncated series sum c_a y^a over dimension vectors with |a| <= N."""

    def __init__(self, lam, order, terms=None):
        self.lam = [list(r) for r in lam]
        self.order = order
        self.terms = {}
        for a, c in (terms or {}).items():
            a = tuple(a)
            if sum(a) <= order and not c.is_zero():
                self.terms[a] = c

    @classmethod
    def one(cls, lam, order):
        n = len(lam)
        return cls(lam, order, {(0,) * n: RatFunc(ONE)})

    @property
    def rank(self):
        return len(self.lam)

    def pairing(self, a, b):
        """lambda(a, b), extended bilinearly."""
        lam = self.lam
        return sum(a[i] * b[j] * lam[i][j] for i in range(len(a)) if a[i]
                   for j in range(len(b)) if b[j])

    def __mul__(self, o):
        out = {}
        for a, ca in self.terms.items():
            sa = sum(a)
            for b, cb in o.terms.items():
                if sa + sum(b) > self.order:
                    continue
                k = tuple(x + y for x, y in zip(a, b))
                c = (ca * cb).shift(-self.pairing(a, b))
                out[k] = out[k] + c if k in out else c
        return QSeries(self.lam, self.order, out)

    def __eq__(self, o):
        return isinstance(o, QSeries) and self.order == o.order and self.terms == o.terms

    @classmethod
    def monomial(cls, lam, order, a):
        return cls(lam, order, {tuple(a): RatFunc(ONE)})

    def coefficient(self, a):
        return self.terms.get(tuple(a), RatFunc(0))

    def to_json(self):
        keys = sorted(self.terms, key=lambda a: (sum(a), a))
        return {",".join(map(str, a)): str(self.terms[a]) for a in keys}


@lru_cache(maxsize=None)
def _dilog_coeff(j):
    """t^{j^2} / prod_{k<j} (q^j - q^k) with q = t^2."""
    den = ONE
    for k in range(j):
        den = den * (T ** (2 * j) - T ** (2 * k))
    return RatFunc(T ** (j * j), den)


def qdilog(alpha, order, lam):
    alpha = tuple(alpha)
    if not any(alpha):
        raise ValueError("the quantum dilogarithm needs a nonzero class")
    s = sum(alpha)
    terms = {}
    j = 0
    while j * s <= order:
        terms[tuple(j * x for x in alpha)] = _dilog_coeff(j)
        j += 1
    return QSeries(lam, order, terms)


# stable classes and products

def stable_classes(q, Z, trials=32, seed=0):
    """Roots whose indecomposable is Z-stable (checked against indecomposable subs)."""
    reps = indecomposables(q)
    roots = sorted(reps)
    ch = {d: _charge(Z, d) for d in roots}
    out = []
    for d in roots:
        ok = True
        for e in roots:
            if e == d or any(a > b for a, b in zip(e, d)):
                continue
            if cmp_arg(ch[e], ch[d]) == Order.Less:
                continue
            if embeds(reps[e], reps[d], trials, seed).embeds:
                ok = False
                break
        if ok:
            out.append(d)
    return out


def phase_order(Z, classes):
    """Classes in strictly decreasing phase; raises NonDiscrete on a tie."""
    ch = {d: _charge(Z, d) for d in classes}
    srt = sorted(classes, key=cmp_to_key(lambda a, b: -int(cmp_arg(ch[a], ch[b]))))
    for a, b in zip(srt, srt[1:]):
        if cmp_arg(ch[a], ch[b]) == Order.Equal:
            raise NonDiscrete(a, b)
    return srt


def dt_product(q, Z, order, classes=None):
    """Product of E(y^{dim M}) over the stable classes in decreasing phase.

    Returns (series, factor list).
    """
    if classes is None:
        classes = stable_classes(q, Z)
    factors = phase_order(Z, classes)
    lam = lambda_matrix(q)
    prod = QSeries.one(lam, order)
    for d in factors:
        prod = prod * qdilog(d, order, lam)
    return prod, factors


def source_order_charges(q):
    """Charges on the upper unit half circle with phase(S_j) > phase(S_i)
    for every arrow i -> j; for these only the simples are stable."""
    n = q.rank
    indeg = {v: 0 for v in range(1, n + 1)}
    succ = {v: [] for v in range(1, n + 1)}
    for a, b in q.arrows():
        indeg[b] += 1
        succ[a].append(b)
    order, ready = [], sorted(v for v in indeg if indeg[v] == 0)
    while ready:
        v = ready.pop(0)
        order.append(v)
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
        ready.sort()
    Z = {}
    for k, v in enumerate(order):
        # phase (k+1)/(n+1) of a half turn, as an exact rational circle point
        tt = Fraction(math.tan(math.pi * (k + 1) / (2 * (n + 1)))).limit_denominator(1000)
        x, y = rational_circle_point(tt)
        Z[v] = RatVec(x, y)
    return Z


def is_discrete(Z, classes):
    try:
        phase_order(Z, classes)
    except NonDiscrete:
        return False
    return True


_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _turn(v, t):
    c, s = rational_circle_point(t)
    return RatVec(v.dx * c - v.dy * s, v.dx * s + v.dy * c)


def discrete_perturbation(q, Z, tries=12):
    """Turn and scale the simple charges by distinct small amounts until
    every root has its own phase, keeping every indecomposable stable.

    Returns (charges, stable classes); an already discrete input comes back
    unchanged. Raises NonDiscrete if no try works.
    """
    from .modules import check_total_stability
    Z = dict(Z.Z) if hasattr(Z, "Z") else dict(Z)
    roots = sorted(indecomposables(q))
    if is_discrete(Z, roots) and check_total_stability(q, Z).verdict:
        return Z, roots
    eps = Fraction(1, 100)
    for _ in range(tries):
        Zp = {}
        for i, v in Z.items():
            w = Fraction(1, _PRIMES[(i - 1) % len(_PRIMES)] + i)
            Zp[i] = _turn(v, eps * w) * (1 + eps * w * w)
        if is_discrete(Zp, roots) and check_total_stability(q, Zp).verdict:
            return Zp, roots
        eps /= 3
    raise NonDiscrete(*roots[:2])


def wall_crossing_check(q, Z1, Z2, order, classes1=None, classes2=None):
    """Exact equality of the two DT products."""
    p1, _ = dt_product(q, Z1, order, classes1)
    p2, _ = dt_product(q, Z2, order, classes2)
    return p1 == p2
