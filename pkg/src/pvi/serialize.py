"""JSON and CSV encodings shared by the command-line tools.

Complex numbers are [re, im] pairs in JSON and separate re/im columns in
CSV, which keeps the files free of locale- and format-dependent parsing.
All encoders are deterministic: identical inputs give identical bytes.
"""

from __future__ import annotations

import csv

import numpy as np

from . import fuchsian, modular, params


def encode_complex(z):
    z = complex(z)
    return [z.real, z.imag]


def decode_complex(value):
    """Accept a real number or an [re, im] pair."""
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise ValueError(f"expected a number or [re, im] pair, got {value!r}")


def encode_complex_seq(values):
    return [encode_complex(z) for z in values]


def decode_complex_seq(values, n=None):
    out = np.array([decode_complex(v) for v in values], dtype=complex)
    if n is not None and out.shape != (n,):
        raise ValueError(f"expected {n} entries, got {len(out)}")
    return out


def encode_exponents(kappa):
    return encode_complex_seq(kappa.as_array())


def decode_exponents(obj):
    """Five components, or four free ones under 'kappa_free'."""
    if isinstance(obj, dict):
        if "kappa_free" in obj:
            free = decode_complex_seq(obj["kappa_free"], 4)
            return params.Exponents.from_free(*free)
        obj = obj["kappa"]
    comps = decode_complex_seq(obj, 5)
    return params.Exponents(*comps)


def encode_phase_point(pt):
    return {
        "q": encode_complex(pt.q),
        "p": encode_complex(pt.p),
        "t": encode_complex_seq(pt.t),
        "kappa": encode_exponents(pt.kappa),
    }


def decode_phase_point(obj):
    if "kappa_free" in obj:
        kappa = params.Exponents.from_free(
            *decode_complex_seq(obj["kappa_free"], 4)
        )
    else:
        kappa = params.Exponents(*decode_complex_seq(obj["kappa"], 5))
    return fuchsian.PhasePoint.make(
        decode_complex(obj["q"]),
        decode_complex(obj["p"]),
        decode_complex_seq(obj["t"], 3),
        kappa,
    )


def encode_ambient_point(point):
    return {
        "x": encode_complex_seq(point.x),
        "theta": encode_complex_seq(point.theta),
    }


def decode_ambient_point(obj):
    return modular.AmbientPoint.make(
        decode_complex_seq(obj["x"], 3),
        decode_complex_seq(obj["theta"], 4),
    )


def encode_matrix(m):
    return [[encode_complex(z) for z in row] for row in np.asarray(m)]


ORBIT_HEADER = (
    "step",
    "re_x1", "im_x1", "re_x2", "im_x2", "re_x3", "im_x3",
    "f_residual",
)

TRAJECTORY_HEADER = (
    "arclength",
    "re_t3", "im_t3",
    "re_q", "im_q", "re_p", "im_p",
    "re_H1", "im_H1", "re_H2", "im_H2", "re_H3", "im_H3",
    "pvi_residual",
)


def write_orbit_csv(fh, samples):
    """One row per orbit step: index, x coordinates, cubic residual."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(ORBIT_HEADER)
    for smp in samples:
        x = smp.point.x
        writer.writerow([
            smp.step,
            repr(float(x[0].real)), repr(float(x[0].imag)),
            repr(float(x[1].real)), repr(float(x[1].imag)),
            repr(float(x[2].real)), repr(float(x[2].imag)),
            repr(float(smp.f_residual)),
        ])


def write_trajectory_csv(fh, traj, residuals=None):
    """One row per accepted flow step.

    The Hamiltonian columns are evaluated per sample; the residual column
    takes the given per-sample values, or nan when the trajectory is not
    in the (0, 1, x) chart where the scalar equation lives.
    """
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(TRAJECTORY_HEADER)
    for n, smp in enumerate(traj.samples):
        pt = fuchsian.PhasePoint.make(smp.q, smp.p, smp.t, traj.kappa)
        hs = [fuchsian.hamiltonian(i, pt) for i in (1, 2, 3)]
        res = float("nan") if residuals is None else float(residuals[n])
        writer.writerow([
            repr(float(smp.arclength)),
            repr(float(smp.t[2].real)), repr(float(smp.t[2].imag)),
            repr(float(smp.q.real)), repr(float(smp.q.imag)),
            repr(float(smp.p.real)), repr(float(smp.p.imag)),
            repr(float(hs[0].real)), repr(float(hs[0].imag)),
            repr(float(hs[1].real)), repr(float(hs[1].imag)),
            repr(float(hs[2].real)), repr(float(hs[2].imag)),
            repr(res),
        ])


def encode_singular_report(report):
    """Wall data of a cubic surface as plain JSON types."""
    return {
        "theta": encode_complex_seq(report.theta),
        "points": [
            {
                "x": encode_complex_seq(p.x),
                "type": p.local_type,
                "milnor": p.milnor,
                "hessian_corank": p.hessian_corank,
            }
            for p in report.points
        ],
    }
