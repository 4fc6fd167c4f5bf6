"""The family of affine cubic surfaces carrying SL2 trace coordinates.

S(theta) is the zero locus of the Fricke polynomial

    f(x, theta) = x1 x2 x3 + x1^2 + x2^2 + x3^2
                  - th1 x1 - th2 x2 - th3 x3 + th4,

the single relation satisfied by the trace coordinates of a four-point
SL2(C) representation.  This module evaluates f, its gradient and Hessian,
the Poincare residue two-form on the smooth locus, the lifted discriminant
factors, and the singular points of S(theta) together with their ADE types
(at most four rational double points, total Milnor number at most 4).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class SingularPointError(ValueError):
    """Operation requested at (or too close to) a singular surface point."""


class NoConvergenceError(RuntimeError):
    """Singular-point refinement failed to converge."""


def _theta_array(theta):
    arr = np.asarray(theta, dtype=complex)
    if arr.shape != (4,):
        raise ValueError("theta must have four components")
    return arr


def _x_array(x):
    arr = np.asarray(x, dtype=complex)
    if arr.shape != (3,):
        raise ValueError("x must have three components")
    return arr


def eval_f(x, theta):
    """Evaluate the Fricke cubic at x."""
    x1, x2, x3 = _x_array(x)
    t1, t2, t3, t4 = _theta_array(theta)
    return x1 * x2 * x3 + x1**2 + x2**2 + x3**2 - t1 * x1 - t2 * x2 - t3 * x3 + t4


def grad_f(x, theta):
    """Gradient of f with respect to x."""
    x1, x2, x3 = _x_array(x)
    t1, t2, t3, _ = _theta_array(theta)
    return np.array(
        [x2 * x3 + 2 * x1 - t1, x3 * x1 + 2 * x2 - t2, x1 * x2 + 2 * x3 - t3]
    )


def hessian_f(x):
    """Hessian of f (independent of theta)."""
    x1, x2, x3 = _x_array(x)
    return np.array([[2, x3, x2], [x3, 2, x1], [x2, x1, 2]], dtype=complex)


@dataclass(frozen=True)
class SurfacePoint:
    """A point of C^3 together with its theta and the defect |f(x,theta)|."""

    x: np.ndarray
    theta: np.ndarray
    residual: float

    @classmethod
    def make(cls, x, theta):
        x = _x_array(x)
        theta = _theta_array(theta)
        return cls(x, theta, float(abs(eval_f(x, theta))))


def residue_form(point, u, v):
    """Poincare residue two-form omega(u, v) at a smooth surface point.

    omega = dx_i ^ dx_j / (df/dx_k) for cyclic (i,j,k); the three cyclic
    expressions agree on tangent vectors, so the partial of largest modulus
    is used as denominator.  Raises SingularPointError when all three
    partials vanish to tolerance.
    """
    u = _x_array(u)
    v = _x_array(v)
    g = grad_f(point.x, point.theta)
    scale = max(1.0, float(np.max(np.abs(point.x))) ** 2, float(np.max(np.abs(point.theta))))
    k = int(np.argmax(np.abs(g)))
    if abs(g[k]) < 1e-12 * scale:
        raise SingularPointError("all partials vanish: singular point")
    i, j = (k + 1) % 3, (k + 2) % 3
    return (u[i] * v[j] - u[j] * v[i]) / g[k]


_SIGNS = ((1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1))


def fricke_w(a):
    """The degree-four trace polynomial w(a) entering the discriminant.

    Product of (e1 a1 + e2 a2 + e3 a3 + a4) over sign triples with
    e1 e2 e3 = 1, minus the product of (a_i a_4 - a_j a_k) over cyclic
    (i,j,k).
    """
    a1, a2, a3, a4 = np.asarray(a, dtype=complex)
    first = np.prod([e1 * a1 + e2 * a2 + e3 * a3 + a4 for e1, e2, e3 in _SIGNS])
    second = (a1 * a4 - a2 * a3) * (a2 * a4 - a3 * a1) * (a3 * a4 - a1 * a2)
    return first - second


def discriminant_lift(a):
    """Lift of the cubic-surface discriminant: w(a)^2 * prod_i (a_i^2 - 4)."""
    a = np.asarray(a, dtype=complex)
    return fricke_w(a) ** 2 * np.prod(a**2 - 4.0)


@dataclass(frozen=True)
class SingularPoint:
    x: np.ndarray
    local_type: str  # A1 | A2 | A3 | D4
    milnor: int
    hessian_corank: int


@dataclass(frozen=True)
class SingularPointReport:
    theta: np.ndarray
    points: tuple

    def __bool__(self):
        return bool(self.points)


def _cluster_roots(roots, tol):
    """Merge root clusters of a polynomial to their centroids.

    Multiple roots split symmetrically under rounding, so the centroid of a
    cluster is far more accurate than any member.
    """
    roots = list(roots)
    used = [False] * len(roots)
    merged = []
    for i, r in enumerate(roots):
        if used[i]:
            continue
        cluster = [r]
        used[i] = True
        for j in range(i + 1, len(roots)):
            if not used[j] and abs(roots[j] - r) < tol:
                cluster.append(roots[j])
                used[j] = True
        merged.append(sum(cluster) / len(cluster))
    return merged


def _solve_quadratic(a, b, c):
    """Roots of a z^2 + b z + c with a double root snapped to -b/(2a)."""
    disc = b * b - 4 * a * c
    scale = max(abs(a), abs(b), abs(c), 1.0)
    if abs(disc) < 1e-12 * scale**2:
        return [-b / (2 * a)]
    sq = np.sqrt(disc)
    # stable variant: avoid cancellation in the smaller root
    if abs(-b + sq) > abs(-b - sq):
        z1 = (-b + sq) / (2 * a)
    else:
        z1 = (-b - sq) / (2 * a)
    return [z1, c / (a * z1)]


def _special_branch(theta, slot):
    """Critical-point candidates with x_slot = ±2.

    f is invariant under cyclic relabeling of (x, theta[:3]) together, so
    the slot is rotated into the third position, where fixing x3 = t and
    eliminating x1 = (th1 - x2 t)/2 reduces grad_f = 0 to the quadratic
    -t x2^2 + th1 x2 + 4 t - 2 th3 = 0.  Every corank >= 1 point has some
    coordinate equal to ±2 (the diagonal 2x2 minors of the Hessian vanish),
    and there the quadratic has a double root, which the snap in the solver
    recovers exactly.
    """
    shift = (slot - 2) % 3
    t1, t2, t3 = (theta[(i + shift) % 3] for i in range(3))
    out = []
    for t in (2.0 + 0.0j, -2.0 + 0.0j):
        for x2 in _solve_quadratic(-t, t1, 4.0 * t - 2.0 * t3):
            rot = [(t1 - x2 * t) / 2.0, x2, t]
            x = np.empty(3, dtype=complex)
            for i in range(3):
                x[(i + shift) % 3] = rot[i]
            out.append(x)
    return out


def _critical_candidates(theta):
    """Candidate solutions of grad_f = 0 by elimination.

    From df/dx1 = 0, x1 = (th1 - x2 x3)/2.  Substituting into the other two
    components gives P = x2 (4 - x3^2) + th1 x3 - 2 th2 = 0 (linear in x2)
    and Q = -x3 x2^2 + th1 x2 + 4 x3 - 2 th3 = 0.  Eliminating x2 yields a
    quintic in x3 with constant leading coefficient 4; the branches x_k = ±2,
    where the linear solve degenerates, are searched separately in every
    coordinate slot.  Special-branch candidates come first: their double
    roots are snapped exactly, and deduplication keeps the first member of
    a cluster.
    """
    t1, t2, t3, _ = theta
    candidates = []
    for slot in range(3):
        candidates.extend(_special_branch(theta, slot))
    poly = np.array(
        [
            4.0,
            -2.0 * t3,
            -32.0,
            2.0 * t1 * t2 + 16.0 * t3,
            64.0 - 4.0 * t1**2 - 4.0 * t2**2,
            8.0 * t1 * t2 - 32.0 * t3,
        ],
        dtype=complex,
    )
    scale = max(1.0, float(np.max(np.abs(theta))))
    # multiple roots split by as much as eps^(1/4); centroids of merged
    # clusters are first-order accurate
    x3_roots = _cluster_roots(np.roots(poly), 3e-3 * max(1.0, scale**0.25))
    for x3 in x3_roots:
        denom = 4.0 - x3 * x3
        if abs(denom) < 1e-6 * scale:
            continue  # covered by the special branch
        x2 = (2.0 * t2 - t1 * x3) / denom
        x1 = (t1 - x2 * x3) / 2.0
        candidates.append(np.array([x1, x2, x3]))
    return candidates


def _defect(x, theta):
    return max(float(np.max(np.abs(grad_f(x, theta)))), float(abs(eval_f(x, theta))))


def _refine(x, theta, steps=40):
    """Truncated Gauss-Newton on (grad_f, f).

    lstsq runs with a singular-value cutoff so that near a degenerate root
    the kernel direction receives no noise-amplified update; the kernel
    component of the error is whatever the candidate generator achieved,
    and _kernel_polish repairs it afterwards.
    """
    x = x.copy()
    for _ in range(steps):
        g = grad_f(x, theta)
        fv = eval_f(x, theta)
        F = np.array([g[0], g[1], g[2], fv])
        if not np.all(np.isfinite(F)):
            raise NoConvergenceError("refinement diverged")
        J = np.vstack([hessian_f(x), g[None, :]])
        step, *_ = np.linalg.lstsq(J, -F, rcond=1e-9)
        if not np.all(np.isfinite(step)):
            raise NoConvergenceError("refinement produced non-finite step")
        x = x + step
        if np.max(np.abs(step)) < 1e-14 * max(1.0, float(np.max(np.abs(x)))):
            break
    return x


def _refine_gradient(x, theta, steps=40):
    """Newton iteration on grad_f = 0 alone.

    Critical points of a generic surface do not lie on the surface, so the
    on-surface row used by _refine would be inconsistent there; this variant
    works for critical points regardless of the value of f.  The lstsq
    cutoff again freezes near-kernel directions at degenerate roots.
    """
    x = x.copy()
    for _ in range(steps):
        g = grad_f(x, theta)
        if not np.all(np.isfinite(g)):
            raise NoConvergenceError("refinement diverged")
        step, *_ = np.linalg.lstsq(hessian_f(x), -g, rcond=1e-9)
        if not np.all(np.isfinite(step)):
            raise NoConvergenceError("refinement produced non-finite step")
        x = x + step
        if np.max(np.abs(step)) < 1e-14 * max(1.0, float(np.max(np.abs(x)))):
            break
    return x


def _kernel_polish(x, theta, rounds=3):
    """Newton along the Hessian kernel line using the exact cubic Taylor.

    f is a cubic, so along x + s v the kernel component of the gradient is
    exactly quadratic in s:

        v . grad_f(x + s v) = (v.g) + s (v^T H v) + s^2 (3 v1 v2 v3).

    Solving that quadratic with the double-root snap recovers the kernel
    coordinate of a degenerate critical point to machine accuracy, where
    residual-driven iterations stall near sqrt(eps).
    """
    for _ in range(rounds):
        H = hessian_f(x)
        _, sv, vh = np.linalg.svd(H)
        if sv[2] > 1e-5 * sv[0]:
            break  # no near-kernel direction: nothing to polish
        v = vh[2].conj()
        g = grad_f(x, theta)
        alpha = 3.0 * v[0] * v[1] * v[2]
        beta = v @ H @ v
        gamma = v @ g
        if abs(alpha) < 1e-12:
            if abs(beta) < 1e-12:
                break
            s = -gamma / beta
        else:
            s = min(_solve_quadratic(alpha, beta, gamma), key=abs)
        if not np.isfinite(s) or abs(s) > 1.0:
            break  # not in the basin of a degenerate root
        xn = x + s * v
        if _defect(xn, theta) <= _defect(x, theta):
            x = xn
        else:
            break
        if abs(s) < 1e-14:
            break
    return x


def _local_type(x, rank_rtol=1e-8, cubic_tol=1e-6):
    """ADE type from the Hessian rank, with A2/A3 split on the kernel line.

    The only cubic monomial of f is x1 x2 x3, so f restricted to the line
    x + s*v is exactly quadratic + (v1 v2 v3) s^3; at a rank-2 point the
    kernel coefficient v1 v2 v3 decides A2 (nonzero) against A3 (zero).
    Total Milnor number is at most 4, which closes the case analysis.
    """
    H = hessian_f(x)
    _, sv, vh = np.linalg.svd(H)
    rank = int(np.sum(sv > rank_rtol * sv[0]))
    if rank == 3:
        return "A1", 1, 0
    if rank == 2:
        v = vh[2].conj()  # right singular vector spanning the kernel
        c3 = v[0] * v[1] * v[2]
        if abs(c3) > cubic_tol:
            return "A2", 2, 1
        return "A3", 3, 1
    if rank == 1:
        return "D4", 4, 2
    raise NoConvergenceError("Hessian rank 0 is impossible for this family")


def critical_points(theta, tol=1e-8):
    """All solutions of grad_f = 0 (on or off the surface), deduplicated."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    theta = _theta_array(theta)
    scale = max(1.0, float(np.max(np.abs(theta))))
    accepted = []
    for cand in _critical_candidates(theta):
        try:
            x = _refine_gradient(cand, theta)
            # a candidate that lands on the surface is a singular-surface
            # point; the joint iteration sharpens it using the consistent
            # f = 0 row as well
            if abs(eval_f(x, theta)) < 1e-6 * max(scale, float(np.max(np.abs(x))) ** 3):
                x = _refine(x, theta)
        except NoConvergenceError:
            continue  # spurious candidate ran away; legitimate roots remain
        x = _kernel_polish(x, theta)
        xscale = max(1.0, float(np.max(np.abs(x))) ** 2, scale)
        if float(np.max(np.abs(grad_f(x, theta)))) > 1e-7 * xscale:
            continue
        accepted.append(x)
    return _merge_close(accepted, theta, 1e-6)


def _merge_close(points, theta, radius):
    """Deduplicate, keeping the lowest-defect representative of a cluster.

    Endpoints stalled along a degenerate direction of the same root carry a
    strictly larger defect than a snapped representative, so defect ranking
    selects the accurate one.
    """
    kept = []
    for x in points:
        d = _defect(x, theta)
        for i, (y, dy) in enumerate(kept):
            if np.max(np.abs(x - y)) < radius:
                if d < dy:
                    kept[i] = (x, d)
                break
        else:
            kept.append((x, d))
    return [x for x, _ in kept]


def singular_points(theta, tol=1e-8):
    """Singular points of S(theta) with local ADE data.

    Critical points of f are found by elimination plus Gauss-Newton
    polishing; those lying on the surface (|f| below a scale-normalized
    tolerance) are singular points of the surface and get a local type.
    """
    theta = _theta_array(theta)
    scale = max(1.0, float(np.max(np.abs(theta))))

    def collect(xs):
        out = []
        for x in xs:
            if abs(eval_f(x, theta)) > tol * scale * 10.0:
                continue
            local_type, milnor, corank = _local_type(x)
            out.append(SingularPoint(x, local_type, milnor, corank))
        return out

    on_surface = critical_points(theta, tol=tol)
    points = collect(on_surface)
    if len(points) > 4 or sum(p.milnor for p in points) > 4:
        # stalled endpoints of one degenerate root can sit ~eps^(1/3) apart;
        # remerge coarsely before declaring failure
        points = collect(_merge_close(on_surface, theta, 1e-4))
    if len(points) > 4 or sum(p.milnor for p in points) > 4:
        raise NoConvergenceError(
            "more singular structure than the family admits; refinement "
            "likely failed for this theta"
        )
    points.sort(key=lambda p: (p.x[0].real, p.x[1].real, p.x[2].real))
    return SingularPointReport(theta, tuple(points))
