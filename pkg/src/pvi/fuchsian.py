"""Numeric Riemann-Hilbert map via second-order Fuchsian equations.

A phase point (q, p, t; kappa) determines the unique Fuchsian equation

    f'' - v1(z) f' + v2(z) f = 0,
    v1 = 1/(z-q) + sum_i (kappa_i - 1)/(z - t_i),
    v2 = p/(z-q) + sum_i H_i/(z - t_i),

with regular singular points t1, t2, t3, infinity and an apparent one at
q.  Transporting the companion system around loops gives the monodromy
matrices; after scalar normalization to SL2 their traces are the local
data a and the surface coordinates x, landing on the Fricke cubic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import cubic, params
from .rk import adaptive_rk


class PoleClearanceError(ValueError):
    """A transport path passes closer to a pole than the clearance."""


@dataclass(frozen=True)
class PhasePoint:
    """Canonical coordinates (q, p, t1, t2, t3) with exponent data."""

    q: complex
    p: complex
    t: np.ndarray
    kappa: params.Exponents

    @classmethod
    def make(cls, q, p, t, kappa):
        q = complex(q)
        p = complex(p)
        t = np.asarray(t, dtype=complex)
        if t.shape != (3,):
            raise ValueError("t must have three components")
        if not isinstance(kappa, params.Exponents):
            kappa = params.Exponents(*np.asarray(kappa, dtype=complex))
        gaps = [abs(t[i] - t[j]) for i in range(3) for j in range(i + 1, 3)]
        if min(gaps) == 0:
            raise ValueError("t components must be pairwise distinct")
        if min(abs(q - ti) for ti in t) == 0:
            raise ValueError("q must avoid t1, t2, t3")
        return cls(q, p, t, kappa)

    def poles(self):
        """The four finite singular points t1, t2, t3, q."""
        return np.array([self.t[0], self.t[1], self.t[2], self.q])

    def min_pole_gap(self):
        ps = self.poles()
        return min(
            abs(ps[i] - ps[j]) for i in range(4) for j in range(i + 1, 4)
        )


def hamiltonian(i, pt):
    """H_i(q, p, t; kappa), polynomial in (q, p)."""
    if i not in (1, 2, 3):
        raise ValueError("Hamiltonian index must be 1, 2 or 3")
    i0 = i - 1
    j0, k0 = (i0 + 1) % 3, (i0 + 2) % 3
    k = pt.kappa
    kk = (k.k1, k.k2, k.k3)
    qi = pt.q - pt.t[i0]
    qj = pt.q - pt.t[j0]
    qk = pt.q - pt.t[k0]
    tij = pt.t[i0] - pt.t[j0]
    tik = pt.t[i0] - pt.t[k0]
    num = (
        qi * qj * qk * pt.p**2
        - ((kk[i0] - 1) * qj * qk + kk[j0] * qk * qi + kk[k0] * qi * qj) * pt.p
        + k.k0 * (k.k0 + k.k4) * qi
    )
    return num / (tij * tik)


@dataclass(frozen=True)
class FuchsianEquation:
    """Partial-fraction data of (v1, v2) over the poles (t1, t2, t3, q)."""

    poles: np.ndarray
    v1_residues: np.ndarray
    v2_residues: np.ndarray

    def v1(self, z):
        return np.sum(self.v1_residues / (z - self.poles))

    def v2(self, z):
        return np.sum(self.v2_residues / (z - self.poles))

    def indicial_roots(self, pole_index):
        """Local exponents {0, 1 + res(v1)} at the given finite pole."""
        return 0.0 + 0.0j, 1.0 + self.v1_residues[pole_index]

    def min_pole_gap(self):
        ps = self.poles
        n = len(ps)
        if n < 2:
            return float("inf")
        return min(
            abs(ps[i] - ps[j]) for i in range(n) for j in range(i + 1, n)
        )


def build_equation(pt):
    """The Fuchsian equation attached to a phase point.

    The v1 residues are kappa_i - 1 at t_i and 1 at q.  The v2 residues at
    the t_i are minus the Hamiltonians, and p at q: the sign is pinned by
    regularity at infinity, which demands that the v2 residues sum to zero
    and that the first moment q p - sum_i t_i H_i equal the product
    kappa0 (kappa0 + kappa4) of the exponents at infinity.  Both identities
    hold exactly for the H_i returned by hamiltonian (whose sign convention
    is the one the flow equations use) and make useful independent checks.
    """
    k = pt.kappa
    h = [hamiltonian(i, pt) for i in (1, 2, 3)]
    return FuchsianEquation(
        poles=pt.poles(),
        v1_residues=np.array([k.k1 - 1.0, k.k2 - 1.0, k.k3 - 1.0, 1.0]),
        v2_residues=np.array([-h[0], -h[1], -h[2], pt.p]),
    )


def _segment_pole_distance(z0, z1, c):
    """Distance from pole c to the segment [z0, z1]."""
    d = z1 - z0
    L2 = abs(d) ** 2
    if L2 == 0.0:
        return abs(c - z0)
    s = ((c - z0) * np.conj(d)).real / L2
    s = min(1.0, max(0.0, s))
    return abs(c - (z0 + s * d))


def transport(eq, path, rtol=1e-12, atol=1e-14, clearance=None):
    """Transfer matrix of the companion system along a polyline.

    Returns T with (f, f')(end) = T (f, f')(start).  The default clearance
    is 0.05 times the minimal pole gap; each integration step is clamped to
    0.25 times the distance to the nearest pole, which keeps the adaptive
    controller honest right where the coefficients blow up.
    """
    path = np.asarray(path, dtype=complex)
    if path.ndim != 1 or len(path) < 1:
        raise ValueError("path must be a nonempty sequence of points")
    if clearance is None:
        gap = eq.min_pole_gap()
        clearance = 0.05 * gap if np.isfinite(gap) else 0.0
    for z0, z1 in zip(path[:-1], path[1:]):
        for c in eq.poles:
            if _segment_pole_distance(z0, z1, c) < clearance:
                raise PoleClearanceError(
                    f"pole clearance violated near {c:.6g}"
                )

    T = np.eye(2, dtype=complex)
    for z0, z1 in zip(path[:-1], path[1:]):
        seg = z1 - z0
        if seg == 0.0:
            continue

        def rhs(s, y, z0=z0, seg=seg):
            z = z0 + s * seg
            a = eq.v1(z)
            b = eq.v2(z)
            # companion system on the flattened fundamental matrix
            y = y.reshape(2, 2)
            dy = np.empty_like(y)
            dy[0] = y[1]
            dy[1] = a * y[1] - b * y[0]
            return seg * dy.reshape(4)

        def clamp(s, y, z0=z0, seg=seg):
            z = z0 + s * seg
            d = min(abs(z - c) for c in eq.poles)
            return max(1e-12, 0.25 * d / abs(seg))

        y = adaptive_rk(rhs, T.reshape(4), 0.0, 1.0, rtol=rtol, atol=atol,
                        max_step=clamp)
        T = y.reshape(2, 2)
    return T


def _auto_basepoint(poles, clearance):
    """A basepoint north of the poles with pole-free straight tails.

    Placing the basepoint above the cluster makes the anticlockwise loops
    compose so that the transport of a large boundary circle equals
    M3 M2 M1, which is the arrangement behind the product identity
    M4 M3 M2 M1 = I (checked against an explicitly integrated big circle).
    """
    center = np.mean(poles)
    span = max(1.0, max(abs(c - center) for c in poles) * 2.0)
    for trial in range(24):
        bp = center + span * (0.1371 + 0.31 * trial) + 1.8j * span
        ok = all(
            _segment_pole_distance(bp, c, other) >= clearance
            for c in poles
            for other in poles
            if other != c
        )
        if ok:
            return bp
    raise PoleClearanceError("no pole-free basepoint found")


def loop_around(eq, pole_index, basepoint=None, radius_factor=0.3,
                chords=24, clearance=None):
    """Anticlockwise polyline loop around one pole, tailed to the basepoint.

    The circle radius is radius_factor times the distance to the nearest
    other pole, so the loop encloses exactly its own pole; the tail runs
    straight from the basepoint to the circle.
    """
    poles = eq.poles
    center = poles[pole_index]
    others = [c for i, c in enumerate(poles) if i != pole_index]
    radius = radius_factor * min(abs(center - c) for c in others)
    if clearance is None:
        clearance = 0.05 * eq.min_pole_gap()
    if basepoint is None:
        basepoint = _auto_basepoint(poles, clearance)
    phi0 = np.angle(basepoint - center)
    entry = center + radius * np.exp(1j * phi0)
    circle = [
        center + radius * np.exp(1j * (phi0 + 2.0 * np.pi * m / chords))
        for m in range(chords + 1)
    ]
    return np.array([basepoint, entry] + circle[1:] + [basepoint])


@dataclass(frozen=True)
class MonodromyRep:
    """SL2-normalized monodromy quadruple with M4 M3 M2 M1 = I."""

    matrices: tuple
    basepoint: complex

    def product_defect(self):
        m4, m3, m2, m1 = (self.matrices[i] for i in (3, 2, 1, 0))
        return float(np.linalg.norm(m4 @ m3 @ m2 @ m1 - np.eye(2)))

    def traces(self):
        return np.array([np.trace(m) for m in self.matrices])

    def surface_coordinates(self):
        m1, m2, m3, _ = self.matrices
        return np.array(
            [np.trace(m2 @ m3), np.trace(m3 @ m1), np.trace(m1 @ m2)]
        )


def monodromy(pt, basepoint=None, rtol=1e-12, atol=1e-14):
    """Normalized monodromy of the Fuchsian equation of a phase point.

    Raw transports around t1, t2, t3 have determinant e^{2 pi i kappa_i};
    the scalar factor e^{-i pi kappa_i} moves them into SL2 with trace
    2 cos(pi kappa_i).  The matrix at infinity is realized as the inverse
    of the raw product M3 M2 M1 and carries the extra sign forced by the
    Fuchs relation, reproducing the trace -2 cos(pi kappa_4).
    """
    eq = build_equation(pt)
    clearance = 0.05 * eq.min_pole_gap()
    if basepoint is None:
        basepoint = _auto_basepoint(eq.poles, clearance)
    k = pt.kappa
    raw = []
    for i in range(3):
        path = loop_around(eq, i, basepoint=basepoint)
        raw.append(transport(eq, path, rtol=rtol, atol=atol))
    raw4 = np.linalg.inv(raw[2] @ raw[1] @ raw[0])
    kk = (k.k1, k.k2, k.k3)
    normalized = [np.exp(-1j * np.pi * kk[i]) * raw[i] for i in range(3)]
    normalized.append(-np.exp(-1j * np.pi * (2 * k.k0 + k.k4)) * raw4)
    return MonodromyRep(tuple(normalized), basepoint)


def apparent_check(pt, basepoint=None, rtol=1e-12, atol=1e-14):
    """Norm of (raw monodromy around q) minus the identity.

    Small values certify that q is an apparent singular point, which is
    exactly the property the Hamiltonian values encode; corrupting any H_i
    destroys it.
    """
    eq = build_equation(pt)
    path = loop_around(eq, 3, basepoint=basepoint)
    Tq = transport(eq, path, rtol=rtol, atol=atol)
    return float(np.linalg.norm(Tq - np.eye(2)))


def rh_point(pt, basepoint=None, rtol=1e-12, atol=1e-14):
    """The Riemann-Hilbert image of a phase point on its cubic surface.

    x_i = Tr(M_j M_k) for (i,j,k) cyclic, theta = rh_param(kappa); the
    returned SurfacePoint carries |f(x, theta)| as residual.
    """
    rep = monodromy(pt, basepoint=basepoint, rtol=rtol, atol=atol)
    x = rep.surface_coordinates()
    theta = params.rh_param(pt.kappa)
    return cubic.SurfacePoint.make(x, theta)
