"""Polynomials with zeon coefficients.

Coefficients are stored densely in ascending degree order and
normalised so that the leading coefficient is nonzero (the zero
polynomial keeps an empty coefficient tuple and degree -1).  Division
follows ordinary leading-term elimination, which is why the divisor's
leading coefficient must be invertible; when it is, quotient and
remainder are unique.

The quadratic machinery lives here too: the discriminant, a best-effort
square-root search for nilpotent elements, and the quadratic solver
with its five-way outcome.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import least_squares

from .algebra import (
    Tolerance,
    Zeon,
    ZeonLike,
    _coerce,
    _resolve,
    mask_to_indices,
    principal_kth_root,
)
from .errors import (
    DimensionMismatch,
    DivisorNotMonicizable,
    LeadingCoefficientNotInvertible,
    SqrtNotFound,
)

__all__ = [
    "ZeonPoly",
    "DivisionResult",
    "divide",
    "remainder_at",
    "discriminant",
    "nilpotent_sqrt",
    "QuadraticKind",
    "QuadraticOutcome",
    "quadratic_solve",
]


class ZeonPoly:
    """A polynomial in one variable with zeon coefficients."""

    __slots__ = ("n", "coeffs")

    def __init__(self, coeffs: Sequence[ZeonLike], n: int | None = None):
        """``coeffs`` ascending by degree; ``n`` required only when no
        coefficient is a :class:`Zeon` (e.g. an all-scalar or empty list)."""
        ambient = n
        for c in coeffs:
            if isinstance(c, Zeon):
                if ambient is None:
                    ambient = c.n
                elif c.n != ambient:
                    raise DimensionMismatch(
                        f"coefficients mix n={ambient} and n={c.n}"
                    )
        if ambient is None:
            raise ValueError("ambient dimension n is required")
        lifted = [_coerce(c, ambient) for c in coeffs]
        while lifted and lifted[-1].is_zero():
            lifted.pop()
        object.__setattr__(self, "n", ambient)
        object.__setattr__(self, "coeffs", tuple(lifted))

    def __setattr__(self, name, value):
        raise AttributeError("ZeonPoly is immutable")

    # -- construction ------------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "ZeonPoly":
        return cls((), n=n)

    @classmethod
    def from_scalars(cls, n: int, scalars: Iterable[complex]) -> "ZeonPoly":
        """Polynomial with plain complex coefficients, ascending."""
        return cls([Zeon.scalar(n, c) for c in scalars], n=n)

    @classmethod
    def monomial(cls, n: int, degree: int, coeff: ZeonLike = 1.0) -> "ZeonPoly":
        if degree < 0:
            raise ValueError("degree must be nonnegative")
        return cls([Zeon.zero(n)] * degree + [_coerce(coeff, n)], n=n)

    @classmethod
    def from_roots(cls, n: int, roots: Iterable[ZeonLike]) -> "ZeonPoly":
        """Monic polynomial with the given zeros: product of (u - r)."""
        acc = cls.from_scalars(n, [1.0])
        for r in roots:
            acc = acc * cls([_coerce(r, n).scale(-1.0), Zeon.one(n)], n=n)
        return acc

    # -- queries -----------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with the zero polynomial at -1."""
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Zeon:
        if not self.coeffs:
            raise ValueError("the zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int) -> Zeon:
        """Coefficient of degree ``k`` (zero beyond the stored range)."""
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Zeon.zero(self.n)

    def is_scalar(self, tol: Tolerance | None = None) -> bool:
        """True when every coefficient has a negligible dual part."""
        tol = _resolve(tol)
        return all(c.dual_part().max_abs() <= tol.eq_eps for c in self.coeffs)

    def scalar_projection(self) -> np.ndarray:
        """Ascending complex coefficient array of scalar parts.

        The zero polynomial projects to ``[0]`` so downstream numpy
        polynomial helpers always see a nonempty array.
        """
        if not self.coeffs:
            return np.zeros(1, dtype=np.complex128)
        return np.array([c.scalar_part() for c in self.coeffs],
                        dtype=np.complex128)

    def eval(self, u: ZeonLike) -> Zeon:
        """Horner evaluation at a zeon (or scalar) point."""
        point = _coerce(u, self.n)
        if point.n != self.n:
            raise DimensionMismatch(
                f"point has n={point.n}, polynomial has n={self.n}"
            )
        acc = Zeon.zero(self.n)
        for c in reversed(self.coeffs):
            acc = acc.mul(point).add(c)
        return acc

    __call__ = eval

    def derivative(self) -> "ZeonPoly":
        return ZeonPoly(
            [c.scale(k) for k, c in enumerate(self.coeffs) if k >= 1],
            n=self.n,
        )

    def monic(self, tol: Tolerance | None = None) -> "ZeonPoly":
        """Scale by the inverse of the leading coefficient.

        Raises :class:`LeadingCoefficientNotInvertible` when that
        coefficient has no inverse.
        """
        tol = _resolve(tol)
        if self.is_zero():
            raise LeadingCoefficientNotInvertible("zero polynomial")
        lead = self.lead
        if abs(lead.scalar_part()) <= tol.eq_eps:
            raise LeadingCoefficientNotInvertible(
                "leading coefficient has zero scalar part"
            )
        if lead == 1:
            return self
        inv = lead.inverse(tol)
        return ZeonPoly([c.mul(inv) for c in self.coeffs], n=self.n)

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other: "ZeonPoly") -> None:
        if self.n != other.n:
            raise DimensionMismatch(
                f"polynomials live in different algebras: "
                f"n={self.n} vs n={other.n}"
            )

    def __add__(self, other: "ZeonPoly") -> "ZeonPoly":
        self._check(other)
        size = max(len(self.coeffs), len(other.coeffs))
        return ZeonPoly(
            [self.coeff(k).add(other.coeff(k)) for k in range(size)],
            n=self.n,
        )

    def __sub__(self, other: "ZeonPoly") -> "ZeonPoly":
        return self + (-other)

    def __neg__(self) -> "ZeonPoly":
        return ZeonPoly([c.scale(-1.0) for c in self.coeffs], n=self.n)

    def __mul__(self, other) -> "ZeonPoly":
        if isinstance(other, ZeonPoly):
            self._check(other)
            if self.is_zero() or other.is_zero():
                return ZeonPoly.zero(self.n)
            out = [Zeon.zero(self.n)] * (self.degree + other.degree + 1)
            for i, a in enumerate(self.coeffs):
                for j, b in enumerate(other.coeffs):
                    out[i + j] = out[i + j].add(a.mul(b))
            return ZeonPoly(out, n=self.n)
        factor = _coerce(other, self.n)
        return ZeonPoly([c.mul(factor) for c in self.coeffs], n=self.n)

    def __rmul__(self, other) -> "ZeonPoly":
        return self * other

    def __eq__(self, other) -> bool:
        if not isinstance(other, ZeonPoly):
            return NotImplemented
        return self.n == other.n and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.n, self.coeffs))

    def isclose(self, other: "ZeonPoly", tol: Tolerance | None = None,
                *, eps: float | None = None) -> bool:
        self._check(other)
        tol = _resolve(tol)
        if eps is None:
            eps = tol.eq_eps
        size = max(len(self.coeffs), len(other.coeffs))
        return all(
            (self.coeff(k) - other.coeff(k)).max_abs() <= eps
            for k in range(size)
        )

    def __repr__(self) -> str:
        from .textio import format_poly
        return f"<ZeonPoly n={self.n} deg={self.degree}: {format_poly(self)}>"


@dataclass(frozen=True)
class DivisionResult:
    quotient: ZeonPoly
    remainder: ZeonPoly


def divide(phi: ZeonPoly, psi: ZeonPoly,
           tol: Tolerance | None = None) -> DivisionResult:
    """Division with remainder: ``phi = psi * q + r`` with ``deg r < deg psi``.

    Requires the divisor's leading coefficient to be invertible, which
    makes the pair ``(q, r)`` unique.  Each elimination step cancels the
    current leading term exactly by construction, so the top slot is
    dropped outright rather than left to float noise.
    """
    phi._check(psi)
    tol = _resolve(tol)
    if psi.is_zero():
        raise DivisorNotMonicizable("division by the zero polynomial")
    if abs(psi.lead.scalar_part()) <= tol.eq_eps:
        raise DivisorNotMonicizable(
            "divisor's leading coefficient has zero scalar part"
        )
    lead_inv = psi.lead.inverse(tol)
    dpsi = psi.degree
    rem = list(phi.coeffs)
    quot = [Zeon.zero(phi.n)] * max(0, len(rem) - dpsi)
    while len(rem) - 1 >= dpsi and rem:
        shift = len(rem) - 1 - dpsi
        factor = rem[-1].mul(lead_inv)
        quot[shift] = factor
        for j in range(dpsi):
            rem[shift + j] = rem[shift + j] - psi.coeffs[j].mul(factor)
        rem.pop()
        while rem and rem[-1].is_zero():
            rem.pop()
    return DivisionResult(
        quotient=ZeonPoly(quot, n=phi.n),
        remainder=ZeonPoly(rem, n=phi.n),
    )


def remainder_at(phi: ZeonPoly, z: ZeonLike,
                 tol: Tolerance | None = None) -> Zeon:
    """Remainder of ``phi`` on division by ``(u - z)``.

    Equals ``phi(z)``; the explicit division form is kept as an
    independent route for consistency checks.
    """
    point = _coerce(z, phi.n)
    linear = ZeonPoly([point.scale(-1.0), Zeon.one(phi.n)], n=phi.n)
    rem = divide(phi, linear, tol).remainder
    return rem.coeff(0)


def discriminant(alpha: Zeon, beta: Zeon, gamma: Zeon) -> Zeon:
    """``beta**2 - 4*alpha*gamma`` of the quadratic with those coefficients."""
    if not (alpha.n == beta.n == gamma.n):
        raise DimensionMismatch("quadratic coefficients mix algebras")
    return beta.mul(beta) - alpha.mul(gamma).scale(4.0)


# -- nilpotent square roots -------------------------------------------------


def _blades_of_grade(bits: list[int], grade: int) -> list[int]:
    return [sum(c) for c in itertools.combinations(bits, grade)]


def _mask_ix(mask: int) -> tuple[int, ...]:
    return mask_to_indices(mask)


def _lsq(residual, x0: np.ndarray, n_res: int):
    # lm rejects underdetermined systems; fall back to trf there
    method = "lm" if n_res >= x0.size else "trf"
    return least_squares(residual, x0, method=method, xtol=1e-15, ftol=1e-15)


def _search_square_root(w: Zeon, grade_lo: int, tol: Tolerance,
                        max_unknowns: int = 120) -> Zeon | None:
    """Least-squares search for v with v*v = w, min grade >= grade_lo.

    Candidate blades are restricted to the generators appearing in ``w``
    and to grades that can still contribute to a product of grade <= n.
    Returns None when the search space is too large or no candidate
    verifies.
    """
    n = w.n
    bits = 0
    for m in w.support_masks():
        bits |= m
    gen_bits = [1 << i for i in range(n) if bits >> i & 1]
    grade_hi = max(grade_lo, n - grade_lo)
    cands: list[int] = []
    for g in range(grade_lo, min(grade_hi, len(gen_bits)) + 1):
        cands.extend(_blades_of_grade(gen_bits, g))
    if not cands or len(cands) > max_unknowns:
        return None
    scale = max(1.0, w.max_abs())
    row_masks = sorted(set(
        w.support_masks()
        + [a | b for a, b in itertools.combinations(cands, 2) if not a & b]
    ))
    target = np.asarray(
        [w.coeff(_mask_ix(m)) for m in row_masks], dtype=np.complex128
    )

    def residual(x: np.ndarray) -> np.ndarray:
        vals = x[: len(cands)] + 1j * x[len(cands):]
        v = Zeon(w.n, [(_mask_ix(m), c) for m, c in zip(cands, vals)])
        sq = v.mul(v)
        got = np.asarray(
            [sq.coeff(_mask_ix(m)) for m in row_masks], dtype=np.complex128
        )
        diff = got - target
        return np.concatenate([diff.real, diff.imag])

    amp = float(np.sqrt(scale / 2.0))
    rng = np.random.default_rng(20240801)
    starts = [np.full(2 * len(cands), amp)]
    for _ in range(3):
        starts.append(rng.normal(scale=amp, size=2 * len(cands)))
    best = None
    for x0 in starts:
        sol = _lsq(residual, x0, 2 * len(row_masks))
        vals = sol.x[: len(cands)] + 1j * sol.x[len(cands):]
        v = Zeon(w.n, [(_mask_ix(m), c) for m, c in zip(cands, vals)])
        err = (v.mul(v) - w).max_abs()
        if err <= tol.eq_eps * scale:
            return v
        if best is None or err < best[0]:
            best = (err, v)
    return None


def nilpotent_sqrt(w: Zeon, tol: Tolerance | None = None) -> Zeon:
    """Best-effort square root of a nilpotent element.

    A nonzero nilpotent square always has minimum grade at least 2
    (every blade of ``v*v`` is a disjoint union of two blades of ``v``),
    so an input with a grade-1 term fails immediately and that failure
    is certified.  Everything else runs a layered search: the lowest
    unknown layer ``v_g`` with ``2g = min_grade(w)`` is fit by damped
    least squares (for odd minimum grade 2g+1 the bottom is a trial
    null-square blade instead), and each higher layer then solves a
    linear minimum-norm system, since ``2 v_g x`` is linear in ``x``.

    Raises :class:`SqrtNotFound` when nothing verifies; ``certified`` is
    True only for the provable grade obstruction.
    """
    tol = _resolve(tol)
    if abs(w.scalar_part()) > tol.eq_eps:
        raise ValueError("nilpotent_sqrt expects a nilpotent element")
    w = w.dual_part()
    if w.is_zero():
        return w
    m = w.min_grade()
    if m < 2:
        raise SqrtNotFound(
            "a nonzero square of a nilpotent has minimum grade >= 2, "
            f"input has minimum grade {m}",
            certified=True,
        )
    n = w.n
    scale = max(1.0, w.max_abs())
    if m % 2 == 1:
        v = _odd_layered_sqrt(w, (m - 1) // 2, tol)
        if v is None:
            v = _search_square_root(w, (m - 1) // 2, tol)
        if v is not None:
            return v
        raise SqrtNotFound(
            f"odd minimum grade {m}: no root found by search",
            certified=False,
        )
    g = m // 2
    v = _layered_sqrt(w, g, tol)
    if v is not None and (v.mul(v) - w).max_abs() <= tol.eq_eps * scale:
        return v
    v = _search_square_root(w, g, tol)
    if v is not None:
        return v
    raise SqrtNotFound("no square root found by layered search",
                       certified=False)


def _support_generators(w: Zeon) -> list[int]:
    bits = 0
    for m in w.support_masks():
        bits |= m
    return [1 << i for i in range(w.n) if bits >> i & 1]


def _complete_layers(w: Zeon, v_g: Zeon, g: int,
                     gen_bits: list[int]) -> Zeon:
    """Extend a fixed bottom layer of grade ``g`` upward.

    With the bottom frozen, the grade g+t slice only reaches grade
    2g+t of the square through 2*v_g*x, so each higher layer is a
    linear minimum-norm solve against the residual at its grade.
    Earlier layers feed later residuals through the known-part square.
    """
    n = w.n
    comps = [v_g]
    for t in range(1, n - 2 * g + 1):
        grade = g + t
        if grade > len(gen_bits):
            break
        known = comps[0]
        for c in comps[1:]:
            known = known.add(c)
        residual = w.grade_part(2 * g + t) - known.mul(known).grade_part(2 * g + t)
        cands = _blades_of_grade(gen_bits, grade)
        if not cands:
            break
        if residual.is_zero():
            continue
        rows = sorted(set(
            residual.support_masks()
            + [a | k for a in v_g.support_masks() for k in cands if not a & k]
        ))
        A = np.zeros((len(rows), len(cands)), dtype=np.complex128)
        row_pos = {mk: i for i, mk in enumerate(rows)}
        for j, k in enumerate(cands):
            for a in v_g.support_masks():
                if a & k:
                    continue
                A[row_pos[a | k], j] += 2.0 * v_g.coeff(_mask_ix(a))
        b = np.asarray(
            [residual.coeff(_mask_ix(mk)) for mk in rows], dtype=np.complex128
        )
        x, *_ = np.linalg.lstsq(A, b, rcond=None)
        comps.append(Zeon(n, [(_mask_ix(k), c) for k, c in zip(cands, x)]))
    out = comps[0]
    for c in comps[1:]:
        out = out.add(c)
    return out


def _layered_sqrt(w: Zeon, g: int, tol: Tolerance) -> Zeon | None:
    """Grade-layered construction of v with v*v = w, min grade g."""
    gen_bits = _support_generators(w)
    if g > len(gen_bits):
        return None
    base_target = w.grade_part(2 * g)
    v_g = _fit_bottom_layer(base_target, gen_bits, g, tol)
    if v_g is None:
        return None
    return _complete_layers(w, v_g, g, gen_bits)


def _odd_layered_sqrt(w: Zeon, g: int, tol: Tolerance) -> Zeon | None:
    """Layered construction for odd minimum grade 2g+1.

    The bottom layer must square to zero (the input has nothing at
    grade 2g), and every lowest-grade blade of the input has to contain
    a bottom blade for the first linear layer to be solvable.  A single
    grade-g blade inside the common intersection of those supports
    satisfies both, so each such blade is tried as the bottom and the
    higher layers are completed linearly; the caller verifies.
    """
    gen_bits = _support_generators(w)
    if g > len(gen_bits):
        return None
    common = ~0
    for mk in w.grade_part(2 * g + 1).support_masks():
        common &= mk
    shared = [b for b in gen_bits if b & common]
    scale = max(1.0, w.max_abs())
    for mask_tuple in itertools.combinations(shared, g):
        mask = 0
        for b in mask_tuple:
            mask |= b
        bottom = Zeon(w.n, [(_mask_ix(mask), 1.0)])
        v = _complete_layers(w, bottom, g, gen_bits)
        if (v.mul(v) - w).max_abs() <= tol.eq_eps * scale:
            return v
    return None


def _fit_bottom_layer(target: Zeon, gen_bits: list[int], g: int,
                      tol: Tolerance) -> Zeon | None:
    """Solve (v_g)**2 = target for homogeneous v_g of grade g.

    The system is quadratic in the unknown coefficients, so it runs a
    small multi-start Levenberg-Marquardt fit and keeps a solution only
    when the squared result reproduces the target to eq_eps.
    """
    n = target.n
    cands = _blades_of_grade(gen_bits, g)
    if not cands or len(cands) > 120:
        return None
    rows = sorted(set(
        target.support_masks()
        + [a | b for a, b in itertools.combinations(cands, 2) if not a & b]
    ))
    tvec = np.asarray([target.coeff(_mask_ix(m)) for m in rows],
                      dtype=np.complex128)
    scale = max(1.0, target.max_abs())

    def residual(x: np.ndarray) -> np.ndarray:
        vals = x[: len(cands)] + 1j * x[len(cands):]
        v = Zeon(n, [(_mask_ix(m), c) for m, c in zip(cands, vals)])
        sq = v.mul(v)
        got = np.asarray([sq.coeff(_mask_ix(m)) for m in rows],
                         dtype=np.complex128)
        diff = got - tvec
        return np.concatenate([diff.real, diff.imag])

    amp = float(np.sqrt(scale / 2.0))
    rng = np.random.default_rng(20240802)
    starts = [np.full(2 * len(cands), amp)]
    for _ in range(3):
        starts.append(rng.normal(scale=amp, size=2 * len(cands)))
    for x0 in starts:
        sol = _lsq(residual, x0, 2 * len(rows))
        vals = sol.x[: len(cands)] + 1j * sol.x[len(cands):]
        v = Zeon(n, [(_mask_ix(m), c) for m, c in zip(cands, vals)])
        if (v.mul(v) - target).max_abs() <= tol.eq_eps * scale:
            return v
    return None


# -- quadratics ---------------------------------------------------------------


class QuadraticKind(str, Enum):
    TWO_DISTINCT = "TwoDistinct"
    NULL_SQUARE_FAMILY = "NullSquareFamily"
    NILPOTENT_DISCRIMINANT_ROOTS = "NilpotentDiscriminantRoots"
    NO_ZEROS = "NoZeros"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class QuadraticOutcome:
    """Zero set of ``alpha u**2 + beta u + gamma`` as far as determined.

    ``zeros`` lists verified representative zeros.  For the family
    kinds, ``family_base`` is a base point: NullSquareFamily means
    ``base + eta`` is a zero exactly for null-square nilpotents ``eta``;
    NilpotentDiscriminantRoots means the listed zeros extend to the
    infinite families obtained by adding multiples of the top blade.
    """

    kind: QuadraticKind
    zeros: tuple[Zeon, ...]
    discriminant: Zeon
    family_base: Zeon | None = None
    note: str = ""


def quadratic_solve(alpha: Zeon, beta: Zeon, gamma: Zeon,
                    tol: Tolerance | None = None) -> QuadraticOutcome:
    """Solve the quadratic by completing the square.

    With ``alpha`` invertible, zeros are exactly
    ``(alpha^-1 / 2) (w - beta)`` for square roots ``w`` of the
    discriminant, which leaves three shapes: an invertible discriminant
    gives two distinct zeros, a zero discriminant gives the null-square
    family around the double point, and a nonzero nilpotent
    discriminant has zeros only if it admits a square root, in which
    case adding any multiple of the top blade to ``w`` gives another
    root and the zero set is infinite.
    """
    tol = _resolve(tol)
    if not (alpha.n == beta.n == gamma.n):
        raise DimensionMismatch("quadratic coefficients mix algebras")
    n = alpha.n
    if abs(alpha.scalar_part()) <= tol.eq_eps:
        raise LeadingCoefficientNotInvertible(
            "quadratic leading coefficient has zero scalar part"
        )
    delta = discriminant(alpha, beta, gamma)
    half_inv = alpha.inverse(tol).scale(0.5)
    if delta.is_zero():
        base = half_inv.mul(beta).scale(-1.0)
        return QuadraticOutcome(
            kind=QuadraticKind.NULL_SQUARE_FAMILY,
            zeros=(base,),
            discriminant=delta,
            family_base=base,
            note="zeros are base + eta for every eta with eta*eta = 0",
        )
    if abs(delta.scalar_part()) > tol.eq_eps:
        w = principal_kth_root(delta, 2, tol)
        z1 = half_inv.mul(w - beta)
        z2 = half_inv.mul(w.scale(-1.0) - beta)
        return QuadraticOutcome(
            kind=QuadraticKind.TWO_DISTINCT,
            zeros=(z1, z2),
            discriminant=delta,
        )
    try:
        w = nilpotent_sqrt(delta, tol)
    except SqrtNotFound as exc:
        if exc.certified:
            return QuadraticOutcome(
                kind=QuadraticKind.NO_ZEROS,
                zeros=(),
                discriminant=delta,
                note=str(exc),
            )
        return QuadraticOutcome(
            kind=QuadraticKind.UNDETERMINED,
            zeros=(),
            discriminant=delta,
            note=str(exc),
        )
    z1 = half_inv.mul(w - beta)
    z2 = half_inv.mul(w.scale(-1.0) - beta)
    zeros = (z1,) if z1.isclose(z2, tol) else (z1, z2)
    return QuadraticOutcome(
        kind=QuadraticKind.NILPOTENT_DISCRIMINANT_ROOTS,
        zeros=zeros,
        discriminant=delta,
        family_base=z1,
        note="each listed zero extends to an infinite family: adding any "
             "complex multiple of the full blade "
             f"z{{{','.join(str(i) for i in range(1, n + 1))}}} "
             "to the discriminant root leaves its square unchanged",
    )
