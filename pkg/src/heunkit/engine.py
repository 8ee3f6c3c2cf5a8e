"""High-accuracy integration of second-order linear ODEs along complex paths.

The first-order system (w, w') is pushed along polyline segments with the
8(7) Dormand-Prince pair (scipy's DOP853), real-ified as a 4-vector; the
segment parametrization z(s) = z0 + s dz keeps the complex geometry in the
right-hand side. Clearance from singular points scales with the local
singularity spacing, so tight geometries (points at distance ~1) and wide
ones are treated uniformly.

Connection matrices express the Frobenius basis at one singular point in
the basis at another by integrating both basis solutions to a matching
point inside the target convergence disk and solving the 2x2 system there.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad, solve_ivp

from .errors import (
    DegenerateSystem,
    IllConditioned,
    SingularityTooClose,
    StepUnderflow,
)
from .heun import general_heun, heun_radius, heun_value

CLEARANCE_FACTOR = 1e-3
DEFAULT_TOL = 1e-10


@dataclass(frozen=True)
class ComplexPath:
    """Polyline in the complex plane."""

    vertices: tuple

    def __post_init__(self):
        verts = tuple(complex(v) for v in self.vertices)
        if len(verts) < 2:
            raise ValueError("a path needs at least two vertices")
        object.__setattr__(self, "vertices", verts)

    @property
    def segments(self):
        return list(zip(self.vertices[:-1], self.vertices[1:]))

    @property
    def length(self):
        return sum(abs(b - a) for a, b in self.segments)

    @staticmethod
    def line(a, b):
        return ComplexPath((a, b))

    @staticmethod
    def circle(center, radius, n=24, start_angle=0.0):
        """Closed n-gon approximating a circle, traversed counterclockwise."""
        pts = [center + radius * cmath.exp(1j * (start_angle + 2.0 * math.pi * k / n))
               for k in range(n)]
        pts.append(pts[0])
        return ComplexPath(tuple(pts))


@dataclass(frozen=True)
class SolutionState:
    z: complex
    w: complex
    dw: complex


@dataclass(frozen=True)
class ConnectionMatrix:
    """2x2 matrix C with (basis_from) = C . (basis_to)."""

    entries: tuple  # ((c11, c12), (c21, c22))

    @property
    def determinant(self):
        (a, b), (c, d) = self.entries
        return a * d - b * c

    def as_array(self):
        return np.array(self.entries, dtype=complex)

    @property
    def condition_number(self):
        return float(np.linalg.cond(self.as_array()))

    def __matmul__(self, other):
        prod = self.as_array() @ other.as_array()
        return ConnectionMatrix(tuple(tuple(row) for row in prod))


def point_segment_distance(p, a, b):
    """Distance from point p to the segment [a, b]."""
    d = b - a
    L2 = (d * d.conjugate()).real
    if L2 == 0.0:
        return abs(p - a)
    t = ((p - a) * d.conjugate()).real / L2
    t = min(1.0, max(0.0, t))
    return abs(p - (a + t * d))


def _singular_points_of(ode):
    return [loc for loc, _, _ in ode.finite_singular_points()]


def _local_spacing(sing, idx):
    others = [s for j, s in enumerate(sing) if j != idx]
    if not others:
        return max(1.0, abs(sing[idx]))
    return min(abs(sing[idx] - s) for s in others)


def check_clearance(singular_points, path):
    """Raise SingularityTooClose when the polyline passes within
    CLEARANCE_FACTOR * (local singularity spacing) of any singular point."""
    sing = list(singular_points)
    for i, s in enumerate(sing):
        clearance = CLEARANCE_FACTOR * _local_spacing(sing, i)
        for a, b in path.segments:
            d = point_segment_distance(s, a, b)
            if d < clearance:
                raise SingularityTooClose(
                    f"path within {d:.3e} of singular point {s} "
                    f"(clearance {clearance:.3e})")


def _integrate_segments(pfun, qfun, init, path, tol):
    z = init.z
    if abs(z - path.vertices[0]) > 1e-9 * max(1.0, abs(z)):
        raise ValueError("initial state is not at the first path vertex")
    y = np.array([init.w.real, init.w.imag, init.dw.real, init.dw.imag])
    for za, zb in path.segments:
        dz = zb - za
        if dz == 0:
            continue

        def rhs(s, v, za=za, dz=dz):
            zz = za + s * dz
            w = complex(v[0], v[1])
            dw = complex(v[2], v[3])
            ddw = -(pfun(zz) * dw + qfun(zz) * w)
            r0 = dw * dz
            r1 = ddw * dz
            return (r0.real, r0.imag, r1.real, r1.imag)

        sol = solve_ivp(rhs, (0.0, 1.0), y, method="DOP853",
                        rtol=tol, atol=tol, dense_output=False)
        if not sol.success:
            raise StepUnderflow(f"integrator failed on segment {za} -> {zb}: "
                                f"{sol.message}")
        y = sol.y[:, -1]
    zf = path.vertices[-1]
    return SolutionState(zf, complex(y[0], y[1]), complex(y[2], y[3]))


def integrate_callable(pfun, qfun, init, path, tol=DEFAULT_TOL,
                       singular_points=()):
    """Integrate w'' + p(z) w' + q(z) w = 0 with callable coefficients."""
    if singular_points:
        check_clearance(singular_points, path)
    return _integrate_segments(pfun, qfun, init, path, tol)


def integrate_path(ode, init, path, tol=DEFAULT_TOL):
    """Integrate a rational-coefficient LinearODE along a polyline.

    The initial state must sit on the first vertex; the result is the state
    at the last vertex. Raises SingularityTooClose / StepUnderflow.
    """
    check_clearance(_singular_points_of(ode), path)
    return _integrate_segments(ode.p, ode.q, init, path, tol)


def trace_path(ode, init, path, tol=DEFAULT_TOL, points_per_segment=16):
    """Like integrate_path but returns sampled states along the way."""
    check_clearance(_singular_points_of(ode), path)
    states = [init]
    y = np.array([init.w.real, init.w.imag, init.dw.real, init.dw.imag])
    for za, zb in path.segments:
        dz = zb - za
        if dz == 0:
            continue

        def rhs(s, v, za=za, dz=dz):
            zz = za + s * dz
            w = complex(v[0], v[1])
            dw = complex(v[2], v[3])
            ddw = -(ode.p(zz) * dw + ode.q(zz) * w)
            r0 = dw * dz
            r1 = ddw * dz
            return (r0.real, r0.imag, r1.real, r1.imag)

        t_eval = np.linspace(0.0, 1.0, points_per_segment + 1)
        sol = solve_ivp(rhs, (0.0, 1.0), y, method="DOP853",
                        rtol=tol, atol=tol, t_eval=t_eval)
        if not sol.success:
            raise StepUnderflow(sol.message)
        for s, col in zip(sol.t[1:], sol.y[:, 1:].T):
            states.append(SolutionState(za + s * dz,
                                        complex(col[0], col[1]),
                                        complex(col[2], col[3])))
        y = sol.y[:, -1]
    return states


def trace_to_csv(states):
    """Render integration states as CSV with columns
    z_re, z_im, w_re, w_im, dw_re, dw_im."""
    lines = ["z_re,z_im,w_re,w_im,dw_re,dw_im"]
    for st in states:
        lines.append(",".join(f"{v:.17g}" for v in
                              (st.z.real, st.z.imag, st.w.real, st.w.imag,
                               st.dw.real, st.dw.imag)))
    return "\n".join(lines) + "\n"


def complex_quad(f, a, b, epsabs=1e-13, epsrel=1e-13):
    re = quad(lambda t: f(t).real, a, b, epsabs=epsabs, epsrel=epsrel, limit=200)[0]
    im = quad(lambda t: f(t).imag, a, b, epsabs=epsabs, epsrel=epsrel, limit=200)[0]
    return complex(re, im)


def integrate_p_along(ode, path):
    """Adaptive quadrature of p(z) dz along a polyline."""
    total = 0j
    for za, zb in path.segments:
        dz = zb - za
        if dz == 0:
            continue
        total += complex_quad(lambda s: ode.p(za + s * dz) * dz, 0.0, 1.0)
    return total


def wronskian(state1, state2):
    return state1.w * state2.dw - state2.w * state1.dw


def wronskian_abel_check(ode, pair_start, pair_end, path):
    """Relative deviation from the Wronskian identity
    W(z1) = W(z0) * exp(-int p dz) for two solutions integrated along `path`.

    pair_start/pair_end are (state of solution 1, state of solution 2) at
    the path's first/last vertex. Raises DegenerateSystem when |W(z0)| is
    below 1e-12 (the two solutions are not a fundamental system).
    """
    w0 = wronskian(*pair_start)
    w1 = wronskian(*pair_end)
    if abs(w0) < 1e-12:
        raise DegenerateSystem(f"|W(z0)| = {abs(w0):.3e}: not a fundamental pair")
    expected = w0 * cmath.exp(-integrate_p_along(ode, path))
    return abs(w1 - expected) / abs(w0)


def loop_transfer_matrix(ode, loop, tol=DEFAULT_TOL):
    """Matrix mapping (w, w') at the loop start to their values after one
    traversal, computed from the two unit initial conditions."""
    z0 = loop.vertices[0]
    cols = []
    for w0, dw0 in ((1.0, 0.0), (0.0, 1.0)):
        st = integrate_path(ode, SolutionState(z0, w0, dw0), loop, tol)
        cols.append((st.w, st.dw))
    return ConnectionMatrix(((cols[0][0], cols[1][0]),
                             (cols[0][1], cols[1][1])))


# ---------------------------------------------------------------------------
# Connection matrices between Frobenius bases of the general Heun equation
# ---------------------------------------------------------------------------


def _heun_centers(params):
    return {0: 0j, 1: 1.0 + 0j, 2: params.f}


def _match_point(params, frm, to):
    """Matching point inside the target disk.

    Preferred location: midpoint of the segment between the centers, offset
    perpendicular by 10% of the center distance. When that point is not
    comfortably inside the target convergence disk (it is not whenever the
    target radius is set by a third singular point, e.g. 0 -> f with f > 2),
    fall back to a point halfway into the target disk with a small
    perpendicular offset on the same side.
    """
    d = to - frm
    u = d / abs(d)
    perp = 1j * u
    z_m = (frm + to) / 2.0 + 0.1 * abs(d) * perp
    r_to = _disk_radius(params, to)
    if abs(z_m - to) <= 0.9 * r_to:
        return z_m
    return to - 0.5 * r_to * u + 0.1 * r_to * perp


def _disk_radius(params, center):
    return heun_radius(params, center)


def _anchor_point(params, frm, to):
    r = _disk_radius(params, frm)
    u = (to - frm) / abs(to - frm)
    return frm + min(0.35 * r, 0.4 * abs(to - frm)) * u + 0.05 * r * (1j * u)


def connection_matrix(params, frm, to, path=None, tol=DEFAULT_TOL):
    """Connection matrix between Frobenius bases at two of the points 0, 1, f.

    Both branch series at `frm` are evaluated at an anchor point inside the
    source disk, integrated along `path` (default: anchor -> offset midpoint
    -> matching point) and matched against the two branch series at `to`.
    Returns C with (u1, u2)^T = C (v1, v2)^T near the matching region.
    Raises LogarithmicCase for resonant exponents and IllConditioned when
    the target basis is numerically degenerate at the matching point.
    """
    centers = _heun_centers(params)
    frm_c = centers[_center_index(params, frm)]
    to_c = centers[_center_index(params, to)]
    ode = general_heun(params)
    same = abs(frm_c - to_c) <= 1e-12 * max(1.0, abs(frm_c))

    if same:
        r = _disk_radius(params, frm_c)
        z_a = frm_c + 0.4 * r * cmath.exp(0.4j)
        z_m = frm_c + 0.4 * r * cmath.exp(-0.4j)
        default_path = ComplexPath((z_a, z_m))
    else:
        z_a = _anchor_point(params, frm_c, to_c)
        z_m = _match_point(params, frm_c, to_c)
        mid = (frm_c + to_c) / 2.0 + 0.1 * abs(to_c - frm_c) * 1j * \
            (to_c - frm_c) / abs(to_c - frm_c)
        default_path = ComplexPath((z_a, mid, z_m)) if abs(mid - z_m) > 1e-12 \
            else ComplexPath((z_a, z_m))
    if path is None:
        path = default_path
    else:
        path = path if isinstance(path, ComplexPath) else ComplexPath(tuple(path))
        z_a = path.vertices[0]
        z_m = path.vertices[-1]

    check_clearance(_singular_points_of(ode), path)

    # target basis at the matching point
    v = []
    for branch in ("first", "second"):
        val, _ = heun_value(params, to_c, branch, z_m, tail_tol=1e-13)
        v.append(val)
    M = np.array([[v[0].w, v[1].w], [v[0].dw, v[1].dw]], dtype=complex)
    cond = float(np.linalg.cond(M))
    if cond > 1e8:
        raise IllConditioned(f"target basis condition number {cond:.3e}")

    rows = []
    for branch in ("first", "second"):
        val, _ = heun_value(params, frm_c, branch, z_a, tail_tol=1e-13)
        st = integrate_path(ode, SolutionState(z_a, val.w, val.dw), path, tol)
        rhs = np.array([st.w, st.dw], dtype=complex)
        coeff = np.linalg.solve(M, rhs)
        rows.append((complex(coeff[0]), complex(coeff[1])))
    C = ConnectionMatrix((rows[0], rows[1]))
    if abs(C.determinant) < 1e-12:
        raise DegenerateSystem("connection matrix is singular")
    return C


def _center_index(params, center):
    if isinstance(center, str):
        label = center.strip().lower()
        if label in ("0", "zero"):
            return 0
        if label in ("1", "one"):
            return 1
        if label in ("f", "2"):
            return 2
        raise ValueError(f"unknown center label {center!r}")
    z0 = complex(center)
    for idx, loc in _heun_centers(params).items():
        if abs(z0 - loc) <= 1e-9 * max(1.0, abs(loc)):
            return idx
    raise ValueError(f"center {center} is not one of 0, 1, f")
