"""Zeon extensions of analytic functions.

An analytic ``f`` extends to the algebra through its Taylor expansion
around the scalar part: with ``u = s + d`` (``d`` the nilpotent dual
part),

    f(u) = sum_{k=0..n} f_k(s) / k! * d**k

and the sum is exact because ``d**k`` vanishes beyond grade ``n``.
Collecting the same coefficients as a polynomial in ``(u - s)`` gives a
degree-``n`` zeon polynomial that agrees with the extension on every
element sharing the scalar part ``s``; that polynomial form is what
makes preimages reachable with the spectral zero iteration.

Functions are described by their derivative sequence rather than code
for ``f`` alone, so the extension never needs numerical
differentiation.  The built-ins use principal branches; ``log``,
``sqrt`` and non-integer powers refuse the cut ``(-inf, 0]``.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from typing import Callable

from .algebra import Tolerance, Zeon, _resolve
from .errors import (
    DimensionMismatch,
    NotSpectrallySimple,
    OutsideDomain,
    SeedMismatch,
)
from .poly import ZeonPoly
from .solve import spectrally_simple_zero

__all__ = [
    "AnalyticFunction",
    "EXP",
    "LOG",
    "SIN",
    "COS",
    "SQRT",
    "power_function",
    "by_name",
    "ZeonExtension",
    "extend_eval",
    "polynomial_form",
    "preimage",
]


@dataclass(frozen=True)
class AnalyticFunction:
    """An analytic function given by its derivative sequence.

    ``derivative(z, k)`` returns the k-th derivative at ``z`` (k = 0 is
    the function itself); ``in_domain`` guards scalar arguments.
    """

    name: str
    derivative: Callable[[complex, int], complex]
    in_domain: Callable[[complex], bool]


def _off_cut(z: complex) -> bool:
    # principal branch: reject the ray (-inf, 0]
    return not (z.imag == 0.0 and z.real <= 0.0)


def _exp_derivative(z: complex, k: int) -> complex:
    return cmath.exp(z)


def _log_derivative(z: complex, k: int) -> complex:
    if k == 0:
        return cmath.log(z)
    sign = 1.0 if k % 2 else -1.0
    return sign * math.factorial(k - 1) / z ** k


_SIN_CYCLE = (cmath.sin, cmath.cos, lambda z: -cmath.sin(z), lambda z: -cmath.cos(z))


def _sin_derivative(z: complex, k: int) -> complex:
    return _SIN_CYCLE[k % 4](z)


def _cos_derivative(z: complex, k: int) -> complex:
    return _SIN_CYCLE[(k + 1) % 4](z)


EXP = AnalyticFunction("exp", _exp_derivative, lambda z: True)
LOG = AnalyticFunction("log", _log_derivative, _off_cut)
SIN = AnalyticFunction("sin", _sin_derivative, lambda z: True)
COS = AnalyticFunction("cos", _cos_derivative, lambda z: True)


def power_function(p: complex) -> AnalyticFunction:
    """``z**p`` with the principal branch.

    A nonnegative integer ``p`` is entire (zero included); any other
    exponent keeps the branch cut exclusion.
    """
    p = complex(p)
    integral = p.imag == 0.0 and p.real == int(p.real) and p.real >= 0

    def derivative(z: complex, k: int) -> complex:
        falling = 1.0 + 0j
        for j in range(k):
            falling *= p - j
        if falling == 0:
            return 0j
        e = p - k
        if z == 0:
            # only reachable for integral p; the exponent is then >= 0
            return falling if e == 0 else 0j
        return falling * cmath.exp(e * cmath.log(z))

    in_domain = (lambda z: True) if integral else _off_cut
    label = f"pow({_format_exponent(p)})"
    return AnalyticFunction(label, derivative, in_domain)


def _format_exponent(p: complex) -> str:
    if p.imag == 0.0:
        r = p.real
        return str(int(r)) if r == int(r) else repr(r)
    return f"{p.real}+{p.imag}j"


SQRT = AnalyticFunction("sqrt", power_function(0.5).derivative, _off_cut)

_NAMED = {"exp": EXP, "log": LOG, "sin": SIN, "cos": COS, "sqrt": SQRT}
_POW_RE = re.compile(r"^pow\((?P<arg>[^)]+)\)$")


def by_name(name: str) -> AnalyticFunction:
    """Look up a built-in: exp, log, sin, cos, sqrt, or pow(<exponent>)."""
    key = name.strip()
    if key in _NAMED:
        return _NAMED[key]
    m = _POW_RE.match(key)
    if m:
        return power_function(complex(m.group("arg").replace("i", "j")))
    raise ValueError(f"unknown analytic function {name!r}")


@dataclass(frozen=True)
class ZeonExtension:
    """An analytic function extended to the ``n``-generator algebra."""

    fn: AnalyticFunction
    n: int

    def eval(self, u: Zeon) -> Zeon:
        return extend_eval(self, u)

    __call__ = eval


def extend_eval(ext: ZeonExtension, u: Zeon) -> Zeon:
    """Evaluate the extension at ``u`` via the truncated Taylor sum.

    Exact up to floating point: powers of the dual part die out by
    grade, so the loop stops as soon as a power vanishes.
    """
    if u.n != ext.n:
        raise DimensionMismatch(
            f"element has n={u.n}, extension has n={ext.n}"
        )
    s = u.scalar_part()
    if not ext.fn.in_domain(s):
        raise OutsideDomain(
            f"{ext.fn.name} is undefined at scalar part {s}"
        )
    d = u.dual_part()
    acc = Zeon.scalar(ext.n, ext.fn.derivative(s, 0))
    pw = Zeon.one(ext.n)
    fact = 1.0
    for k in range(1, ext.n + 1):
        pw = pw.mul(d)
        if pw.is_zero():
            break
        fact *= k
        acc = acc.add(pw.scale(ext.fn.derivative(s, k) / fact))
    return acc


def polynomial_form(ext: ZeonExtension, z0: complex) -> ZeonPoly:
    """The degree-``n`` polynomial matching the extension at scalar ``z0``.

    Returns ``sum_k f_k(z0)/k! (u - z0)**k`` expanded in ``u``.  Its
    value at any ``u`` with scalar part ``z0`` equals ``extend_eval(u)``;
    elements with other scalar parts see only a truncation.
    """
    z0 = complex(z0)
    if not ext.fn.in_domain(z0):
        raise OutsideDomain(f"{ext.fn.name} is undefined at {z0}")
    fact = 1.0
    alphas = [ext.fn.derivative(z0, 0)]
    for k in range(1, ext.n + 1):
        fact *= k
        alphas.append(ext.fn.derivative(z0, k) / fact)
    # Horner in (u - z0): p <- p * (u - z0) + a, top coefficient first
    coeffs = [0j]
    for a in reversed(alphas):
        nxt = [0j] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i + 1] += c
            nxt[i] -= z0 * c
        nxt[0] += a
        coeffs = nxt
    return ZeonPoly.from_scalars(ext.n, coeffs)


def _refine_scalar_preimage(ext: ZeonExtension, target: complex,
                            z0: complex, tol: Tolerance) -> complex:
    """Newton-solve f(z) = target starting from the seed ``z0``.

    The seed selects the branch: iteration stays in its basin, so the
    caller still chooses among preimages of a non-injective function.
    """
    scale = max(1.0, abs(target))
    z = z0
    for _ in range(80):
        value = ext.fn.derivative(z, 0)
        if abs(value - target) <= tol.root_eps * scale:
            return z
        slope = ext.fn.derivative(z, 1)
        if abs(slope) <= tol.root_eps:
            raise NotSpectrallySimple(
                f"hit a critical point of {ext.fn.name} near {z} while "
                f"refining the seed {z0}"
            )
        step = (value - target) / slope
        z = z - step
        if not ext.fn.in_domain(z):
            raise OutsideDomain(
                f"seed refinement left the domain of {ext.fn.name} at {z}"
            )
        if abs(step) <= 1e-16 * max(1.0, abs(z)):
            break
    value = ext.fn.derivative(z, 0)
    if abs(value - target) > tol.root_eps * scale:
        raise SeedMismatch(
            f"no scalar preimage of {target} under {ext.fn.name} found "
            f"from seed {z0}; reached {z} with {ext.fn.name}(z) = {value}"
        )
    return z


def preimage(ext: ZeonExtension, w: Zeon, z0: complex,
             tol: Tolerance | None = None) -> Zeon:
    """An element mapped onto ``w`` by the extension, near scalar ``z0``.

    ``z0`` seeds the scalar preimage of ``C(w)``: it is polished by
    Newton iteration on ``f(z) = C(w)``, so it only has to sit in the
    basin of the intended branch (the library never picks a branch on
    its own).  The refined point must not be a critical point.  The
    preimage is then the spectrally simple zero of the polynomial form
    minus ``w`` seeded there; by construction its image is ``w``.
    """
    tol = _resolve(tol)
    if w.n != ext.n:
        raise DimensionMismatch(f"element has n={w.n}, extension has n={ext.n}")
    z0 = complex(z0)
    if not ext.fn.in_domain(z0):
        raise OutsideDomain(f"{ext.fn.name} is undefined at {z0}")
    target = w.scalar_part()
    z_at = _refine_scalar_preimage(ext, target, z0, tol)
    slope = ext.fn.derivative(z_at, 1)
    if abs(slope) <= tol.root_eps:
        raise NotSpectrallySimple(
            f"{z_at} is a critical point of {ext.fn.name}; the scalar "
            "preimage is not simple"
        )
    psi = polynomial_form(ext, z_at) - ZeonPoly([w], n=ext.n)
    return spectrally_simple_zero(psi, z_at, tol).zero
