"""Growth rates and structure matrices for the count recursions.

The PO recursion multiplies count blocks by A (first column b-1, ones on the
superdiagonal); the TD recursion uses B (top row b,1,0,...,0, superdiagonal
shift, bottom row -1,0,...,0).  Their characteristic polynomials

    f(x) = x^m - (b-1)(x^{m-1} + ... + x + 1)
    g(x) = x^m - b x^{m-1} + 1

each have one simple root in (b-1, b); those roots are the extreme growth
rates of survivor counts.  The mixed pattern adds x^m - b x^{m-1} + x - (b-1)
for m >= 3.  Root finding is bisection with exact rational sign evaluation,
so the returned bracket is trustworthy down to float resolution; conjugate
moduli come from a simultaneous (Weierstrass) iteration over all roots.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .model import Params


class SpectraError(ValueError):
    """Invalid spectral request or failed convergence."""


# ---------------------------------------------------------------------------
# polynomials (monic, integer coefficients, index i holds the x^(deg-i) term)


def growth_poly_po(p: Params) -> tuple[int, ...]:
    if p.m < 2:
        raise SpectraError("the PO growth polynomial needs m >= 2")
    return (1,) + (-(p.b - 1),) * p.m


def growth_poly_td(p: Params) -> tuple[int, ...]:
    if p.m < 2:
        raise SpectraError("the TD growth polynomial needs m >= 2")
    return (1, -p.b) + (0,) * (p.m - 2) + (1,)


def growth_poly_mixed(p: Params) -> tuple[int, ...]:
    if p.m < 3:
        raise SpectraError("the mixed growth polynomial needs m >= 3")
    return (1, -p.b) + (0,) * (p.m - 3) + (1, -(p.b - 1))


def eval_poly_fraction(coeffs, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in coeffs:
        acc = acc * x + c
    return acc


def _eval_poly_complex(coeffs, z: complex) -> complex:
    acc = 0j
    for c in coeffs:
        acc = acc * z + c
    return acc


def _poly_scale(coeffs, x: float) -> float:
    """Magnitude of the polynomial's terms at x; the natural residual scale."""
    acc = 0.0
    ax = abs(x)
    for c in coeffs:
        acc = acc * ax + abs(c)
    return max(acc, 1.0)


# ---------------------------------------------------------------------------
# root results


@dataclass(frozen=True)
class RootResult:
    """A dominant real root with verification data.

    bracket is a float interval with an exact sign change across it;
    residual is |poly(value)| evaluated in exact arithmetic and must stay
    below 1e-10 relative to the terms' magnitude at the root.
    conjugate_moduli lists |z| of the remaining roots, descending.  pisot is
    True when the root is simple, exceeds 1, and every conjugate modulus is
    below 1 - 1e-6.
    """

    value: float
    bracket: tuple[float, float]
    residual: float
    conjugate_moduli: tuple[float, ...]
    pisot: bool
    poly: tuple[int, ...]


def all_roots(coeffs, max_iter: int = 600, tol: float = 1e-13) -> list[complex]:
    """All complex roots of a monic integer polynomial, by simultaneous
    Weierstrass iteration from fixed spiral starting points."""
    coeffs = tuple(coeffs)
    if not coeffs or coeffs[0] != 1:
        raise SpectraError("polynomial must be monic with integer coefficients")
    n = len(coeffs) - 1
    if n == 0:
        return []
    c = [complex(v) for v in coeffs]
    # Fujiwara bound keeps the starting circle at the scale of the roots
    radius = 2.0 * max(
        (abs(coeffs[j]) ** (1.0 / j) for j in range(1, n + 1) if coeffs[j]),
        default=1.0,
    )
    radius = max(radius, 1.0)
    roots = [
        0.7 * radius * (1.0 + 0.08 * i / n) * cmath.exp(2j * math.pi * i / n + 0.4j)
        for i in range(n)
    ]
    for _ in range(max_iter):
        moved = 0.0
        new: list[complex] = []
        for i, z in enumerate(roots):
            den = 1.0 + 0j
            for j, w in enumerate(roots):
                if j != i:
                    den *= z - w
            if den == 0:
                den = complex(1e-40)
            delta = _eval_poly_complex(c, z) / den
            new.append(z - delta)
            moved = max(moved, abs(delta) / max(1.0, abs(z)))
        roots = new
        if moved < tol:
            break
    else:
        raise SpectraError(
            f"root iteration did not converge within {max_iter} steps"
        )
    worst = max(
        abs(_eval_poly_complex(c, z)) / _poly_scale(coeffs, abs(z)) for z in roots
    )
    if worst > 1e-10:
        raise SpectraError(f"root iteration residual {worst:.3e} too large")
    return roots


def _bisect_exact(coeffs, lo: float, hi: float) -> tuple[float, float]:
    """Shrink [lo, hi] to float resolution keeping an exact sign change."""
    slo = _sign(eval_poly_fraction(coeffs, Fraction(lo)))
    shi = _sign(eval_poly_fraction(coeffs, Fraction(hi)))
    if slo == 0:
        return lo, lo
    if shi == 0:
        return hi, hi
    if slo == shi:
        raise SpectraError(f"no sign change on bracket ({lo}, {hi})")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        smid = _sign(eval_poly_fraction(coeffs, Fraction(mid)))
        if smid == 0:
            return mid, mid
        if smid == slo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def dominant_root(kind: str, p: Params | None = None, *, coeffs=None, bracket=None) -> RootResult:
    """Locate the dominant real root of a growth polynomial.

    kind selects the polynomial: "lambda" (PO rate), "eta" (TD rate),
    "gamma" (mixed rate), all bracketed in (b-1, b), or "custom" with
    explicit monic integer coeffs and a bracket showing a sign change.
    """
    if kind == "lambda":
        coeffs, bracket = growth_poly_po(p), (float(p.b - 1), float(p.b))
    elif kind == "eta":
        coeffs, bracket = growth_poly_td(p), (float(p.b - 1), float(p.b))
    elif kind == "gamma":
        coeffs, bracket = growth_poly_mixed(p), (float(p.b - 1), float(p.b))
    elif kind == "custom":
        if coeffs is None or bracket is None:
            raise SpectraError("custom roots need coeffs and bracket")
        coeffs = tuple(int(c) for c in coeffs)
        if coeffs[0] != 1:
            raise SpectraError("custom polynomial must be monic")
    else:
        raise SpectraError(f"unknown root kind {kind!r}")
    lo0, hi0 = float(bracket[0]), float(bracket[1])
    if kind != "custom":
        # the b=2 TD polynomial vanishes at x = b-1 = 1 for every m; the
        # growth rate, when one exists, lies strictly inside the bracket
        while lo0 < hi0 and eval_poly_fraction(coeffs, Fraction(lo0)) == 0:
            lo0 += 1e-7
    try:
        lo, hi = _bisect_exact(coeffs, lo0, hi0)
    except SpectraError:
        if kind == "custom":
            raise
        lo = hi = float(bracket[0])  # fall through to the strict-interior failure
    value = 0.5 * (lo + hi)
    if kind != "custom" and not bracket[0] < value < bracket[1]:
        # e.g. b=2, m=2 TD: (x-1)^2 has no root strictly inside (1, 2)
        raise SpectraError(
            f"no dominant root strictly inside ({bracket[0]}, {bracket[1]}) "
            f"for kind {kind!r} at b={p.b}, m={p.m}"
        )
    residual = abs(float(eval_poly_fraction(coeffs, Fraction(value))))
    scale = _poly_scale(coeffs, value)
    if residual > 1e-10 * scale:
        raise SpectraError(f"residual {residual:.3e} exceeds tolerance at scale {scale:.3e}")
    roots = all_roots(coeffs)
    dom_i = max(range(len(roots)), key=lambda i: abs(roots[i]))
    dom = roots[dom_i]
    if abs(dom - value) > 1e-6 * max(1.0, abs(value)):
        raise SpectraError(
            f"dominant root mismatch: bisection {value}, iteration {dom}"
        )
    others = [z for i, z in enumerate(roots) if i != dom_i]
    moduli = tuple(sorted((abs(z) for z in others), reverse=True))
    simple = all(abs(dom - z) > 1e-8 * max(1.0, abs(dom)) for z in others)
    pisot = bool(simple and value > 1.0 and all(mu < 1.0 - 1e-6 for mu in moduli))
    return RootResult(
        value=value,
        bracket=(lo, hi),
        residual=residual,
        conjugate_moduli=moduli,
        pisot=pisot,
        poly=tuple(coeffs),
    )


def pisot_conjugates(coeffs) -> tuple[float, ...]:
    """Moduli of all roots except the dominant one, descending."""
    roots = all_roots(coeffs)
    if not roots:
        return ()
    dom_i = max(range(len(roots)), key=lambda i: abs(roots[i]))
    return tuple(
        sorted((abs(z) for i, z in enumerate(roots) if i != dom_i), reverse=True)
    )


# ---------------------------------------------------------------------------
# structure matrices and exact linear algebra


def struct_matrix_a(p: Params) -> list[list[int]]:
    """PO one-step matrix: first column b-1, superdiagonal ones."""
    if p.m < 2:
        raise SpectraError("structure matrices need m >= 2")
    m = p.m
    mat = [[0] * m for _ in range(m)]
    for i in range(m):
        mat[i][0] = p.b - 1
        if i + 1 < m:
            mat[i][i + 1] = 1
    return mat


def struct_matrix_b(p: Params) -> list[list[int]]:
    """TD one-step matrix: top row (b, 1, 0, ...), shift below, -1 corner."""
    if p.m < 2:
        raise SpectraError("structure matrices need m >= 2")
    m = p.m
    mat = [[0] * m for _ in range(m)]
    mat[0][0] = p.b
    mat[0][1] = 1
    for i in range(1, m - 1):
        mat[i][i + 1] = 1
    mat[m - 1][0] = -1
    return mat


def mat_mul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    n, k, m = len(a), len(b), len(b[0])
    if len(a[0]) != k:
        raise SpectraError("matrix shapes do not match")
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            x = ai[t]
            if x:
                bt = b[t]
                for j in range(m):
                    oi[j] += x * bt[j]
    return out


def mat_pow(a: list[list[int]], n: int) -> list[list[int]]:
    if n < 0:
        raise SpectraError("negative matrix power")
    size = len(a)
    result = [[int(i == j) for j in range(size)] for i in range(size)]
    base = [row[:] for row in a]
    while n:
        if n & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        n >>= 1
    return result


def char_poly_exact(mat: list[list[int]]) -> tuple[int, ...]:
    """Characteristic polynomial by the trace recursion, exact integers."""
    n = len(mat)
    frac = [[Fraction(v) for v in row] for row in mat]
    coeffs: list[Fraction] = [Fraction(1)]
    a_k = frac
    for k in range(1, n + 1):
        c_k = -sum(a_k[i][i] for i in range(n)) / k
        coeffs.append(c_k)
        if k == n:
            break
        shifted = [
            [a_k[i][j] + (c_k if i == j else 0) for j in range(n)] for i in range(n)
        ]
        a_k = [
            [sum(frac[i][t] * shifted[t][j] for t in range(n)) for j in range(n)]
            for i in range(n)
        ]
    out = []
    for c in coeffs:
        if c.denominator != 1:
            raise SpectraError("characteristic polynomial came out non-integral")
        out.append(int(c))
    return tuple(out)


def b_power_closed(p: Params, k: int) -> list[list[int]]:
    """Closed form for the k-th power of the TD matrix.

    Uses the linear recurrence v_n = b v_{n-1} - v_{n-m} seeded with
    v_{-m} = -1 and zeros elsewhere below 0 (so v_n = b^n for 0 <= n < m).
    Row 1 of B^k is (v_{k}, v_{k-1}, ..., v_{k-m+1}); row i > 1 holds
    -v_{k+i-j-m} at column j.
    """
    if p.m < 2:
        raise SpectraError("structure matrices need m >= 2")
    if k < 0:
        raise SpectraError("negative matrix power")
    b, m = p.b, p.m
    off = 2 * m
    top = max(k, 0)
    v = [0] * (top + off + 1)
    v[off - m] = -1
    for n in range(0, top + 1):
        v[n + off] = b * v[n - 1 + off] - v[n - m + off]
    mat = [[0] * m for _ in range(m)]
    for j in range(1, m + 1):
        mat[0][j - 1] = v[k - j + 1 + off]
    for i in range(2, m + 1):
        for j in range(1, m + 1):
            mat[i - 1][j - 1] = -v[k + i - j - m + off]
    return mat


# ---------------------------------------------------------------------------
# spectral radius and the p/q growth rate


def spectral_radius(mat: list[list[int]], rel_tol: float = 1e-12, max_iter: int = 200000) -> float:
    """Power iteration with Rayleigh-quotient stopping, for nonnegative
    integer matrices; cross-checked against the characteristic polynomial
    for dimension <= 4."""
    n = len(mat)
    for row in mat:
        for v in row:
            if v < 0:
                raise SpectraError("spectral_radius expects a nonnegative matrix")
    a = np.array(mat, dtype=float)
    v = np.ones(n) / n
    prev = math.inf
    est = 0.0
    for _ in range(max_iter):
        w = a @ v
        nrm = float(np.linalg.norm(w))
        if nrm == 0.0:
            est = 0.0
            break
        est = float(v @ w) / float(v @ v)
        v = w / nrm
        if abs(est - prev) <= rel_tol * max(1.0, abs(est)):
            break
        prev = est
    else:
        raise SpectraError("power iteration did not converge")
    if n <= 4:
        rho = max((abs(z) for z in all_roots(char_poly_exact(mat))), default=0.0)
        if abs(rho - est) > 1e-9 * max(1.0, rho):
            raise SpectraError(
                f"power iteration {est} disagrees with characteristic root {rho}"
            )
    return est


def is_primitive(mat: list[list[int]], cap: int) -> bool:
    """Support-pattern primitivity test: square the 0/1 support until every
    entry is positive or the exponent cap is passed."""
    n = len(mat)
    support = [[1 if mat[i][j] != 0 else 0 for j in range(n)] for i in range(n)]
    if any(all(v == 0 for v in row) for row in support):
        return False
    power = 1
    while power <= cap:
        if all(all(v > 0 for v in row) for row in support):
            return True
        nxt = [[0] * n for _ in range(n)]
        for i in range(n):
            si = support[i]
            for t in range(n):
                if si[t]:
                    st = support[t]
                    row = nxt[i]
                    for j in range(n):
                        if st[j]:
                            row[j] = 1
        support = nxt
        power *= 2
    return all(all(v > 0 for v in row) for row in support)


@dataclass(frozen=True)
class LambdaPQ:
    """Dominant growth data of the block product A^p B^q."""

    params: Params
    p: int
    q: int
    matrix: tuple[tuple[int, ...], ...]
    primitive: bool
    root: RootResult
    normalized: float  # log(value) / ((p+q) log b)


def lambda_pq(params: Params, p: int, q: int) -> LambdaPQ:
    """Exact A^p B^q, its primitivity, and its dominant eigenvalue.

    The product of PO and TD steps is nonnegative and primitive for p, q >= 1,
    and its spectral radius normalizes to a growth exponent strictly between
    the TD and PO rates.
    """
    if p < 1 or q < 1:
        raise SpectraError(f"need p, q >= 1, got ({p}, {q})")
    mat = mat_mul(mat_pow(struct_matrix_a(params), p), mat_pow(struct_matrix_b(params), q))
    for row in mat:
        for v in row:
            if v < 0:
                raise SpectraError("A^p B^q has a negative entry; this contradicts the structure theory")
    m = params.m
    cap = max(m * m * (p + q), 2 * m * m)
    primitive = is_primitive(mat, cap)
    if not primitive:
        raise SpectraError(f"A^{p} B^{q} failed the primitivity test with cap {cap}")
    value = spectral_radius(mat)
    poly = char_poly_exact(mat)
    delta = max(1e-9 * value, 1e-12)
    lo, hi = value - delta, value + delta
    for _ in range(80):
        slo = _sign(eval_poly_fraction(poly, Fraction(lo)))
        shi = _sign(eval_poly_fraction(poly, Fraction(hi)))
        if slo == 0 or shi == 0 or slo != shi:
            break
        delta *= 2.0
        lo, hi = value - delta, value + delta
    root = dominant_root("custom", coeffs=poly, bracket=(lo, hi))
    normalized = math.log(root.value) / ((p + q) * math.log(params.b))
    return LambdaPQ(
        params=params,
        p=p,
        q=q,
        matrix=tuple(tuple(row) for row in mat),
        primitive=primitive,
        root=root,
        normalized=normalized,
    )
