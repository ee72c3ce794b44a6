"""SVG drawing of a polygon and its simples. Display only, never read back."""
from fractions import Fraction

from .diagonals import DegenerateInput, ModelError, simples
from .polygon import is_stable


def _dec(x):
    """Exact rational rounded half-up to 6 decimal places."""
    x = Fraction(x)
    neg = x < 0
    m = int(abs(x) * 10 ** 6 + Fraction(1, 2))
    s = f"{m // 10 ** 6}.{m % 10 ** 6:06d}"
    return "-" + s if neg and m else s


def _xy(p):
    # svg y grows downward
    return f"{_dec(p.x)},{_dec(-p.y)}"


def render(p, show_simples=True):
    pts = list(p.vertices)
    extra = []
    if p.punctures is not None:
        extra += list(p.punctures)
    if p.dtype.family == "E":
        extra += [p.W(j) for j in range(p.h)]
    allp = pts + extra
    xs = [q.x for q in allp]
    ys = [-q.y for q in allp]
    w, hgt = max(xs) - min(xs), max(ys) - min(ys)
    pad = max(w, hgt) / 10
    x0, y0 = min(xs) - pad, min(ys) - pad
    sw = max(w, hgt) / 300
    out = ['<?xml version="1.0" encoding="UTF-8"?>',
           f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{_dec(x0)} {_dec(y0)} '
           f'{_dec(w + 2 * pad)} {_dec(hgt + 2 * pad)}">',
           f'<title>{p.dtype} h-gon</title>',
           f'<polygon points="{" ".join(_xy(q) for q in pts)}" fill="none" '
           f'stroke="black" stroke-width="{_dec(sw)}"/>']
    for j, q in enumerate(pts):
        out.append(f'<circle cx="{_dec(q.x)}" cy="{_dec(-q.y)}" r="{_dec(2 * sw)}" fill="black">'
                   f'<title>V{j}</title></circle>')
    if p.punctures is not None:
        for lab, q in zip("-+", p.punctures):
            out.append(f'<circle cx="{_dec(q.x)}" cy="{_dec(-q.y)}" r="{_dec(3 * sw)}" '
                       f'fill="white" stroke="red" stroke-width="{_dec(sw)}"><title>B{lab}</title></circle>')
    if p.dtype.family == "E":
        for j in range(p.h):
            q = p.W(j)
            out.append(f'<circle cx="{_dec(q.x)}" cy="{_dec(-q.y)}" r="{_dec(1.5 * sw)}" fill="gray">'
                       f'<title>W{j}</title></circle>')
    if show_simples and is_stable(p):
        try:
            S = simples(p)
        except (DegenerateInput, ModelError):
            S = None
        if S is not None:
            for i in sorted(S.classes):
                a, b = S.classes[i].endpoints_geo
                out.append(f'<line x1="{_dec(a.x)}" y1="{_dec(-a.y)}" x2="{_dec(b.x)}" y2="{_dec(-b.y)}" '
                           f'stroke="blue" stroke-width="{_dec(sw)}"><title>s{i}</title></line>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
