"""Finite-difference discretization of the transformed 1-d operators and
exact counting of negative eigenvalues by Sturm sequences.

The operator is always discretized in the fully transformed s-coordinate,
where -d^2/ds^2 + W(s) has no inverse-square singularity, so the plain
three-point stencil with Dirichlet ends converges cleanly.  Dirichlet
truncation restricts the form domain, so a count reported at any finite
window never exceeds the count of the full operator; refinement (window and
grid doubling) can only reveal more.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import DomainError, DepthCapError, EvaluationError
from .iterfun import (
    DEPTH_CAP,
    degeneracy,
    hardy_weight_stack,
    iterated_exp,
    safe_iterated_log,
)
from .bounds import OperatorSpec, l_max
from .potentials import (
    Potential,
    ZeroPotential,
    effective_radial_potential,
    transform_potential,
    transformed_breakpoints,
)
from .quadrature import integrate
from .testfunctions import TestFunction, transform_test_function

_PIVOT_EPS = 2.0**-40


@dataclass(frozen=True)
class Grid:
    """Uniform grid with Dirichlet conditions at both ends; m interior points."""

    s_min: float
    s_max: float
    m: int

    def __post_init__(self):
        if not self.s_min < self.s_max:
            raise DomainError(f"grid needs s_min < s_max, got ({self.s_min}, {self.s_max})")
        if not isinstance(self.m, int) or self.m < 2:
            raise DomainError(f"grid needs at least 2 interior points, got {self.m!r}")

    @property
    def h(self) -> float:
        return (self.s_max - self.s_min) / (self.m + 1)

    def points(self) -> np.ndarray:
        return self.s_min + self.h * np.arange(1, self.m + 1)


@dataclass(frozen=True)
class TridiagonalOperator:
    diagonal: np.ndarray
    off_diagonal: np.ndarray

    def __post_init__(self):
        diag = np.asarray(self.diagonal, dtype=float)
        off = np.asarray(self.off_diagonal, dtype=float)
        object.__setattr__(self, "diagonal", diag)
        object.__setattr__(self, "off_diagonal", off)
        if diag.ndim != 1 or off.ndim != 1 or len(off) != len(diag) - 1:
            raise DomainError("need m diagonal and m-1 off-diagonal entries")
        if not (np.all(np.isfinite(diag)) and np.all(np.isfinite(off))):
            raise DomainError("tridiagonal entries must be finite")

    @property
    def size(self) -> int:
        return len(self.diagonal)

    def norm_inf(self) -> float:
        d = np.abs(self.diagonal).copy()
        e = np.abs(self.off_diagonal)
        d[:-1] += e
        d[1:] += e
        return float(d.max()) if len(d) else 0.0

    def dense(self) -> np.ndarray:
        return (
            np.diag(self.diagonal)
            + np.diag(self.off_diagonal, 1)
            + np.diag(self.off_diagonal, -1)
        )


def assemble(W, grid: Grid) -> TridiagonalOperator:
    """Three-point stencil for -d^2/ds^2 + W(s) on the grid:
    diagonal 2/h^2 + W(s_i), off-diagonal -1/h^2."""
    h = grid.h
    pts = grid.points()
    diag = np.empty(grid.m)
    base = 2.0 / (h * h)
    for i, s in enumerate(pts):
        try:
            diag[i] = base + W(float(s))
        except (DomainError, OverflowError) as exc:
            raise EvaluationError(
                f"potential evaluation failed at grid index {i} (s = {s}): {exc}"
            ) from exc
    off = np.full(grid.m - 1, -1.0 / (h * h))
    return TridiagonalOperator(diag, off)


def _sturm_count(diag, off, shift: float, pivot_sub: float) -> int:
    """Negative pivots of the shifted LDL^T factorization = eigenvalues < shift.

    Exact zero pivots are replaced by ``pivot_sub``.  Infinite intermediate
    pivots are harmless: the following ratio collapses to zero and the
    recurrence self-heals.
    """
    count = 0
    d = diag[0] - shift
    if d == 0.0:
        d = pivot_sub
    if d < 0.0:
        count += 1
    for i in range(1, len(diag)):
        e = off[i - 1]
        d = (diag[i] - shift) - e * e / d
        if d == 0.0:
            d = pivot_sub
        if d < 0.0:
            count += 1
    return count


def inertia_negative_count(
    T: TridiagonalOperator, shift: float = 0.0
) -> Union[int, tuple[int, int]]:
    """Number of eigenvalues strictly below ``shift``.

    Zero pivots are perturbed by +/- eps ||T|| with eps = 2^-40; when the two
    perturbations disagree the ambiguity is surfaced as an interval
    (low, high) instead of a silently chosen integer.
    """
    scale = T.norm_inf() or 1.0
    diag = T.diagonal.tolist()
    off = T.off_diagonal.tolist()
    up = _sturm_count(diag, off, shift, _PIVOT_EPS * scale)
    down = _sturm_count(diag, off, shift, -_PIVOT_EPS * scale)
    if up == down:
        return up
    return (min(up, down), max(up, down))


def _count_scalar(T: TridiagonalOperator, shift: float) -> int:
    """Deterministic integer count (the +eps branch) for internal bisection."""
    scale = T.norm_inf() or 1.0
    return _sturm_count(T.diagonal.tolist(), T.off_diagonal.tolist(), shift, _PIVOT_EPS * scale)


def lowest_eigenvalues(T: TridiagonalOperator, k: int, tol: float = 1e-10) -> list[float]:
    """k smallest eigenvalues by bisection on the inertia function, each
    bracketed to width <= tol, sorted ascending."""
    if not 1 <= k <= T.size:
        raise DomainError(f"need 1 <= k <= {T.size}, got {k}")
    d = T.diagonal
    e = np.abs(T.off_diagonal)
    radius = np.zeros(T.size)
    radius[:-1] += e
    radius[1:] += e
    lo_all = float((d - radius).min())
    hi_all = float((d + radius).max())
    out = []
    lo_j = lo_all
    for j in range(1, k + 1):
        lo, hi = lo_j, hi_all
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if _count_scalar(T, mid) >= j:
                hi = mid
            else:
                lo = mid
        val = 0.5 * (lo + hi)
        out.append(val)
        lo_j = lo  # eigenvalues are ordered; restart the next search here
    return out


@dataclass(frozen=True)
class CountResult:
    negative_count: int
    lowest_eigenvalues: tuple[float, ...]
    s_min: float
    s_max: float
    m: int
    trail: tuple[dict, ...]
    ambiguous: bool = False
    pivot_interval: Optional[tuple[int, int]] = None


def transformed_window_start(spec: OperatorSpec, steps: int) -> float:
    """Image of the domain threshold under s = ln^(steps) x.

    -inf means the transformed operator lives on the whole line."""
    rem = spec.threshold_depth - steps
    base = 0.0 if spec.variant == "zero" else 1.0
    if rem >= 0:
        return iterated_exp(base, rem)
    return safe_iterated_log(base, -rem)


def channel_potential(V: Potential, spec: OperatorSpec, l: Optional[int]):
    """Transformed potential seen by the flat operator -d^2/ds^2 + W.

    d = 1 takes the potential as is; central d >= 2 prepends the channel's
    centrifugal term, whose transform picks up one fewer exponential factor
    than the potential itself.
    """
    k = spec.n + 1
    if k > DEPTH_CAP:
        raise DepthCapError(f"log depth n = {spec.n} needs {k} transform steps (cap {DEPTH_CAP})")
    if spec.d == 1:
        if l not in (None, 0):
            raise DomainError("d = 1 has no angular channels")
        return transform_potential(V, k)
    if l is None:
        raise DomainError("central operators with d >= 2 need a channel index l")
    return transform_potential(effective_radial_potential(V, l, spec.d), k)


def count_negative(
    spec: OperatorSpec,
    V: Potential,
    l: Optional[int] = None,
    L: float = 20.0,
    m: int = 4000,
    doublings: int = 0,
    eigenvalues: int = 0,
) -> CountResult:
    """Negative-eigenvalue count of the transformed operator on a Dirichlet
    window of half-width L (full line) or length L (half line), with
    ``doublings`` rounds of simultaneous window and grid doubling recorded in
    the refinement trail."""
    if L <= 0.0 or m < 2:
        raise DomainError(f"need L > 0 and m >= 2, got L={L}, m={m}")
    W = channel_potential(V, spec, l)
    s0 = transformed_window_start(spec, spec.n + 1)
    trail = []
    result = None
    for j in range(doublings + 1):
        Lj = L * 2**j
        mj = m * 2**j
        if math.isinf(s0):
            grid = Grid(-Lj, Lj, mj)
        else:
            grid = Grid(s0, s0 + Lj, mj)
        T = assemble(W, grid)
        raw = inertia_negative_count(T, 0.0)
        ambiguous = isinstance(raw, tuple)
        count = raw[1] if ambiguous else raw
        trail.append({"L": Lj, "m": mj, "count": count, "ambiguous": ambiguous})
        lows = tuple(lowest_eigenvalues(T, eigenvalues)) if eigenvalues else ()
        result = CountResult(
            negative_count=count,
            lowest_eigenvalues=lows,
            s_min=grid.s_min,
            s_max=grid.s_max,
            m=mj,
            trail=tuple(trail),
            ambiguous=ambiguous,
            pivot_interval=raw if ambiguous else None,
        )
    return result


def total_central_count(
    spec: OperatorSpec,
    V: Potential,
    L: float = 20.0,
    m: int = 4000,
    doublings: int = 0,
) -> tuple[int, list[dict]]:
    """Degeneracy-weighted sum of channel counts for a central potential.

    Channels are scanned upward; the sum stops at the first channel with a
    zero count beyond l_max (channels above l_max have non-negative potential
    after the transform, hence exactly zero count).
    """
    if spec.d < 2:
        raise DomainError("total_central_count needs d >= 2")
    if not V.central:
        raise DomainError("total_central_count needs a central potential")
    lm = l_max(V, spec.d, spec.threshold)
    lm_eff = -1 if lm is None else lm
    total = 0
    table = []
    l = 0
    while True:
        res = count_negative(spec, V, l=l, L=L, m=m, doublings=doublings)
        D = degeneracy(spec.d, l)
        total += D * res.negative_count
        table.append(
            {"l": l, "degeneracy": D, "count": res.negative_count, "trail": res.trail}
        )
        if res.negative_count == 0 and l > lm_eff:
            break
        l += 1
        if l > lm_eff + 64:
            raise EvaluationError(
                f"channel scan did not terminate by l = {l}; l_max = {lm_eff}"
            )
    return total, table


def quadratic_form_value(
    side: str,
    d: int,
    n: int,
    u: TestFunction,
    V: Optional[Potential] = None,
    l: int = 0,
    tol: float = 1e-11,
) -> float:
    """Quadratic form of the depth-n Hardy operator on a radial profile, in
    the integrated-by-parts form (first derivatives only).

    side "original":
        int ( u'^2 + (l(l+d-2)/r^2 - weight_stack(r) + V) u^2 ) r^{d-1} dr
    side "transformed": push u through n+1 changes of variable and evaluate
        int ( phi'^2 + W phi^2 ) ds
    against the transformed channel potential W.  For matching supports the
    two values agree; that identity is what the verification suite checks.
    """
    Vp = V if V is not None else ZeroPotential()
    if d == 1 and l != 0:
        raise DomainError("d = 1 has no angular channels")
    if side == "original":
        L = float(l * (l + d - 2))
        lo, hi = u.support

        def f(r: float) -> float:
            uu = u.value(r)
            du = u.derivative(r)
            pot = Vp.evaluate(r)
            cent = L / (r * r) if L else 0.0
            return (du * du + (cent - hardy_weight_stack(r, d, n) + pot) * uu * uu) * r ** (
                d - 1
            )

        pts = [p for p in Vp.breakpoints() if lo < p < hi]
        return integrate(f, lo, hi, tol=tol, breakpoints=pts).value

    if side == "transformed":
        k = n + 1
        spec = OperatorSpec(d=d, n=n, variant="zero")
        W = channel_potential(Vp, spec, l if d >= 2 else None)
        phi = transform_test_function(u, d, k)
        lo, hi = phi.support

        def g(s: float) -> float:
            ps = phi.value(s)
            dps = phi.derivative(s)
            return dps * dps + W(s) * ps * ps

        pts = [p for p in transformed_breakpoints(Vp, k) if lo < p < hi]
        return integrate(g, lo, hi, tol=tol, breakpoints=pts).value

    raise DomainError(f"side must be 'original' or 'transformed', got {side!r}")


def kinetic_term(u: TestFunction, d: int, tol: float = 1e-11) -> float:
    """int u'(r)^2 r^{d-1} dr, the positive scale of the quadratic form."""
    lo, hi = u.support
    return integrate(lambda r: u.derivative(r) ** 2 * r ** (d - 1), lo, hi, tol=tol).value
