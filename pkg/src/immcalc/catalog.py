"""Closed-form immersions with analytic jets and known invariants.

These entries are the ground truth for everything else: products of round
spheres inside a sphere (Clifford-type tori), the quadratic minimal
embedding of the projective plane in the 4-sphere, equatorial and small
spheres, umbilic hypersurfaces of hyperbolic space, and a flat product
torus with non-parallel mean-curvature direction.

Analytic jets are mandatory here (no finite differencing), so residual
tolerances downstream reflect quadrature error only.  Each builder
self-validates its advertised invariants against the shape pipeline at a
fixed set of pseudo-random chart points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .ambient import ambient_space
from .calculus import Chart, Immersion, shape_batch

_VALIDATE_TOL = 1e-7
_VALIDATE_POINTS = 20
_VALIDATE_SEED = 20240917


# ---------------------------------------------------------------------------
# jet helpers for round-sphere factor charts


def _circle_jets(t):
    """Unit circle chart t -> (cos t, sin t) with first/second partials."""
    c, s = np.cos(t), np.sin(t)
    u = np.stack([c, s], axis=-1)                      # (B, 2)
    du = np.stack([-s, c], axis=-1)[..., None]         # (B, 2, 1)
    d2u = (-u)[..., None, None]                        # (B, 2, 1, 1)
    return u, du, d2u


def _sphere2_jets(th, ph):
    """Unit 2-sphere latitude-longitude chart with partials up to order 2."""
    st, ct = np.sin(th), np.cos(th)
    sp, cp = np.sin(ph), np.cos(ph)
    B = th.shape[0]
    u = np.stack([st * cp, st * sp, ct], axis=-1)
    du = np.empty((B, 3, 2))
    du[:, :, 0] = np.stack([ct * cp, ct * sp, -st], axis=-1)
    du[:, :, 1] = np.stack([-st * sp, st * cp, np.zeros(B)], axis=-1)
    d2u = np.empty((B, 3, 2, 2))
    d2u[:, :, 0, 0] = -u
    d2u[:, :, 0, 1] = np.stack([-ct * sp, ct * cp, np.zeros(B)], axis=-1)
    d2u[:, :, 1, 0] = d2u[:, :, 0, 1]
    d2u[:, :, 1, 1] = np.stack([-st * cp, -st * sp, np.zeros(B)], axis=-1)
    return u, du, d2u


def _sphere3_jets(t1, t2, ph):
    """Unit 3-sphere chart (t1, t2, ph) -> nested spherical coordinates."""
    s1, c1 = np.sin(t1), np.cos(t1)
    s2, c2 = np.sin(t2), np.cos(t2)
    sp, cp = np.sin(ph), np.cos(ph)
    B = t1.shape[0]
    zero = np.zeros(B)
    u = np.stack([c1, s1 * c2, s1 * s2 * cp, s1 * s2 * sp], axis=-1)
    du = np.empty((B, 4, 3))
    du[:, :, 0] = np.stack([-s1, c1 * c2, c1 * s2 * cp, c1 * s2 * sp], axis=-1)
    du[:, :, 1] = np.stack([zero, -s1 * s2, s1 * c2 * cp, s1 * c2 * sp], axis=-1)
    du[:, :, 2] = np.stack([zero, zero, -s1 * s2 * sp, s1 * s2 * cp], axis=-1)
    d2u = np.empty((B, 4, 3, 3))
    d2u[:, :, 0, 0] = -u
    d2u[:, :, 0, 1] = np.stack([zero, -c1 * s2, c1 * c2 * cp, c1 * c2 * sp], axis=-1)
    d2u[:, :, 0, 2] = np.stack([zero, zero, -c1 * s2 * sp, c1 * s2 * cp], axis=-1)
    d2u[:, :, 1, 1] = np.stack([zero, -s1 * c2, -s1 * s2 * cp, -s1 * s2 * sp], axis=-1)
    d2u[:, :, 1, 2] = np.stack([zero, zero, -s1 * c2 * sp, s1 * c2 * cp], axis=-1)
    d2u[:, :, 2, 2] = np.stack([zero, zero, -s1 * s2 * cp, -s1 * s2 * sp], axis=-1)
    d2u[:, :, 1, 0] = d2u[:, :, 0, 1]
    d2u[:, :, 2, 0] = d2u[:, :, 0, 2]
    d2u[:, :, 2, 1] = d2u[:, :, 1, 2]
    return u, du, d2u


_SPHERE_JETS = {1: lambda x: _circle_jets(x[:, 0]),
                2: lambda x: _sphere2_jets(x[:, 0], x[:, 1]),
                3: lambda x: _sphere3_jets(x[:, 0], x[:, 1], x[:, 2])}


def _sphere_chart_axes(k: int):
    """Chart box and periodicity for the unit k-sphere, k <= 3."""
    if k == 1:
        return ((0.0,), (2 * math.pi,), (True,))
    if k == 2:
        return ((0.0, 0.0), (math.pi, 2 * math.pi), (False, True))
    if k == 3:
        return ((0.0, 0.0, 0.0), (math.pi, math.pi, 2 * math.pi), (False, False, True))
    raise ValueError("sphere factors up to dimension 3 are supported")


def sphere_volume(k: int, r: float = 1.0) -> float:
    """Riemannian volume of the round k-sphere of radius r."""
    area = 2 * math.pi ** ((k + 1) / 2) / math.gamma((k + 1) / 2)
    return area * r**k


# ---------------------------------------------------------------------------
# catalog entries


@dataclass
class CatalogEntry:
    """A named immersion with exactly known invariants."""

    name: str
    params: dict
    immersion: Immersion
    known: dict = field(default_factory=dict)
    weight_scale: float = 1.0          # quadrature factor (1/2 for double covers)
    grid_hint: Optional[tuple] = None  # per-axis node counts
    spherical: bool = True             # ambient curvature +1

    def sample_points(self, rng, count, margin=0.2):
        return self.immersion.chart.sample(rng, count, margin=margin)


def _validate_entry(entry: CatalogEntry):
    rng = np.random.default_rng(_VALIDATE_SEED)
    pts = entry.sample_points(rng, _VALIDATE_POINTS)
    batch = shape_batch(entry.immersion, pts)
    known = entry.known
    checks = []
    if "alpha_sq" in known:
        checks.append(("alpha_sq", np.max(np.abs(batch.alpha_sq - known["alpha_sq"]))))
    if "h" in known:
        checks.append(("h", np.max(np.abs(batch.h - known["h"]))))
    if "scalar_curvature" in known:
        checks.append(
            ("scalar_curvature", np.max(np.abs(batch.scalar_curvature() - known["scalar_curvature"])))
        )
    if "principal_curvatures" in known and entry.immersion.codim == 1:
        target = np.sort(np.asarray(known["principal_curvatures"], dtype=float))
        eigs = np.sort(np.linalg.eigvalsh(batch.h_coeffs[:, 0]), axis=1)
        plus = np.max(np.abs(eigs - target[None]), axis=1)
        minus = np.max(np.abs(np.sort(-eigs, axis=1) - target[None]), axis=1)
        # minimal entries carry an unoriented normal: compare up to sign per point
        defect = np.max(plus) if not known.get("minimal") else np.max(np.minimum(plus, minus))
        checks.append(("principal_curvatures", defect))
    for label, defect in checks:
        if defect > _VALIDATE_TOL:
            raise AssertionError(
                f"catalog entry {entry.name!r}: {label} off by {defect:.3e} (> {_VALIDATE_TOL:.0e})"
            )
    return entry


# -- Clifford-type product tori ---------------------------------------------


def clifford_torus(m: int, n: int, r1: float, r2: Optional[float] = None, validate: bool = True) -> CatalogEntry:
    """Product of round spheres S^m(r1) x S^{n-m}(r2) inside the unit (n+1)-sphere.

    Requires r1^2 + r2^2 = 1.  Minimal exactly when r1 = sqrt(m/n); the
    principal curvatures are r2/r1 and -r1/r2 with multiplicities m, n - m
    (up to normal orientation).
    """
    if not (1 <= m < n):
        raise ValueError("need 1 <= m < n")
    if r2 is None:
        r2 = math.sqrt(max(0.0, 1.0 - r1 * r1))
    if abs(r1 * r1 + r2 * r2 - 1.0) > 1e-12:
        raise ValueError("radius constraint r1^2 + r2^2 = 1 violated")
    dim_a, dim_b = m, n - m
    lo_a, hi_a, per_a = _sphere_chart_axes(dim_a)
    lo_b, hi_b, per_b = _sphere_chart_axes(dim_b)
    chart = Chart(lo_a + lo_b, hi_a + hi_b, per_a + per_b)
    space = ambient_space(1.0, n + 1)
    na, nb = dim_a, dim_b
    Na, Nb = dim_a + 1, dim_b + 1

    def jets(pts):
        B = pts.shape[0]
        ua, dua, d2ua = _SPHERE_JETS[dim_a](pts[:, :na])
        ub, dub, d2ub = _SPHERE_JETS[dim_b](pts[:, na:])
        F = np.concatenate([r1 * ua, r2 * ub], axis=1)
        D1 = np.zeros((B, Na + Nb, na + nb))
        D1[:, :Na, :na] = r1 * dua
        D1[:, Na:, na:] = r2 * dub
        D2 = np.zeros((B, Na + Nb, na + nb, na + nb))
        D2[:, :Na, :na, :na] = r1 * d2ua
        D2[:, Na:, na:, na:] = r2 * d2ub
        return F, D1, D2

    imm = Immersion(
        ambient=space, chart=chart, map_fn=lambda p: jets(p)[0], jet_provider=jets,
        name=f"clifford_{m}_{n}", constant_mean_curvature=True,
    )
    ka = r2 / r1
    kb = -r1 / r2
    h = abs(m * ka + (n - m) * kb)
    entry = CatalogEntry(
        name=f"clifford(m={m},n={n},r1={r1:.8g})",
        params={"type": "clifford", "m": m, "n": n, "r1": r1, "r2": r2},
        immersion=imm,
        known={
            "alpha_sq": m * ka**2 + (n - m) * kb**2,
            "h": h,
            "principal_curvatures": [ka] * m + [kb] * (n - m) if m * ka + (n - m) * kb >= 0
            else [-ka] * m + [-kb] * (n - m),
            "scalar_curvature": n * (n - 1) + h**2 - (m * ka**2 + (n - m) * kb**2),
            "volume": sphere_volume(dim_a, r1) * sphere_volume(dim_b, r2),
            "minimal": abs(r1 - math.sqrt(m / n)) <= 1e-10,
        },
        grid_hint=_product_grid_hint(per_a + per_b),
    )
    return _validate_entry(entry) if validate else entry


def _product_grid_hint(periodic_flags):
    dim = len(periodic_flags)
    if dim <= 3:
        return tuple(64 if per else 48 for per in periodic_flags)
    # four-dimensional product charts: keep quadrature desk-scale
    return tuple(24 if per else 40 for per in periodic_flags)


# -- Veronese surface ---------------------------------------------------------


_VERONESE_C = np.zeros((5, 3, 3))
_VERONESE_C[0, 0, 1] = _VERONESE_C[0, 1, 0] = 1.0 / math.sqrt(3.0)
_VERONESE_C[1, 0, 2] = _VERONESE_C[1, 2, 0] = 1.0 / math.sqrt(3.0)
_VERONESE_C[2, 1, 2] = _VERONESE_C[2, 2, 1] = 1.0 / math.sqrt(3.0)
_VERONESE_C[3, 0, 0] = 1.0 / math.sqrt(3.0)
_VERONESE_C[3, 1, 1] = -1.0 / math.sqrt(3.0)
_VERONESE_C[4, 0, 0] = _VERONESE_C[4, 1, 1] = 1.0 / 3.0
_VERONESE_C[4, 2, 2] = -2.0 / 3.0


def veronese(validate: bool = True) -> CatalogEntry:
    """Quadratic minimal embedding of the projective plane into the 4-sphere.

    The chart runs over the double cover (a round sphere of radius
    sqrt(3)); integrals carry a factor 1/2.  The advertised invariants
    (alpha_sq = 4/3, scalar curvature 2/3, Einstein) are validated, not
    assumed.
    """
    space = ambient_space(1.0, 4)
    chart = Chart((0.0, 0.0), (math.pi, 2 * math.pi), (False, True))
    C = _VERONESE_C

    def jets(pts):
        q, dq, d2q = _sphere2_jets(pts[:, 0], pts[:, 1])
        q = math.sqrt(3.0) * q
        dq = math.sqrt(3.0) * dq
        d2q = math.sqrt(3.0) * d2q
        Cq = np.einsum("kab,bB->Bka", C, q.T)          # (B, 5, 3): (C_k q)
        F = 0.5 * np.einsum("Bka,Ba->Bk", Cq, q)
        D1 = np.einsum("Bka,Bai->Bki", Cq, dq)
        D2 = np.einsum("kab,Bai,Bbj->Bkij", C, dq, dq) + np.einsum("Bka,Baij->Bkij", Cq, d2q)
        return F, D1, D2

    imm = Immersion(
        ambient=space, chart=chart, map_fn=lambda p: jets(p)[0], jet_provider=jets,
        name="veronese", constant_mean_curvature=True,
    )
    entry = CatalogEntry(
        name="veronese",
        params={"type": "veronese"},
        immersion=imm,
        known={
            "alpha_sq": 4.0 / 3.0,
            "h": 0.0,
            "scalar_curvature": 2.0 / 3.0,
            "volume": 0.5 * sphere_volume(2, math.sqrt(3.0)),
            "minimal": True,
        },
        weight_scale=0.5,
        grid_hint=(48, 96),
    )
    return _validate_entry(entry) if validate else entry


# -- equatorial and small spheres ---------------------------------------------


def equatorial_sphere(n: int, p: int, validate: bool = True) -> CatalogEntry:
    """Totally geodesic S^n inside S^{n+p} (zero second fundamental form)."""
    if n not in _SPHERE_JETS:
        raise ValueError("equatorial spheres supported for n <= 3")
    if p < 1:
        raise ValueError("codimension must be >= 1")
    space = ambient_space(1.0, n + p)
    lo, hi, per = _sphere_chart_axes(n)
    chart = Chart(lo, hi, per)
    pad = p

    def jets(pts):
        B = pts.shape[0]
        u, du, d2u = _SPHERE_JETS[n](pts)
        F = np.concatenate([u, np.zeros((B, pad))], axis=1)
        D1 = np.concatenate([du, np.zeros((B, pad, n))], axis=1)
        D2 = np.concatenate([d2u, np.zeros((B, pad, n, n))], axis=1)
        return F, D1, D2

    imm = Immersion(
        ambient=space, chart=chart, map_fn=lambda p_: jets(p_)[0], jet_provider=jets,
        name=f"equatorial_{n}_{p}", constant_mean_curvature=True,
    )
    entry = CatalogEntry(
        name=f"equatorial(n={n},p={p})",
        params={"type": "equatorial", "n": n, "p": p},
        immersion=imm,
        known={
            "alpha_sq": 0.0,
            "h": 0.0,
            "scalar_curvature": n * (n - 1),
            "volume": sphere_volume(n),
            "minimal": True,
        },
        grid_hint=(64,) * n if n == 1 else (48, 96) if n == 2 else (32, 32, 64),
    )
    return _validate_entry(entry) if validate else entry


def small_sphere(n: int, r: float, p: int = 1, validate: bool = True) -> CatalogEntry:
    """Umbilic S^n(r) in S^{n+p}, 0 < r < 1, sitting inside a great (n+1)-sphere.

    All principal curvatures equal sqrt(1 - r^2)/r; for p >= 2 the
    mean-curvature direction is parallel in the normal bundle.
    """
    if not (0 < r < 1):
        raise ValueError("need 0 < r < 1")
    if n not in _SPHERE_JETS:
        raise ValueError("small spheres supported for n <= 3")
    space = ambient_space(1.0, n + p)
    lo, hi, per = _sphere_chart_axes(n)
    chart = Chart(lo, hi, per)
    w = math.sqrt(1.0 - r * r)

    def jets(pts):
        B = pts.shape[0]
        u, du, d2u = _SPHERE_JETS[n](pts)
        F = np.concatenate([r * u, np.full((B, 1), w), np.zeros((B, p - 1))], axis=1)
        D1 = np.concatenate([r * du, np.zeros((B, p, n))], axis=1)
        D2 = np.concatenate([r * d2u, np.zeros((B, p, n, n))], axis=1)
        return F, D1, D2

    imm = Immersion(
        ambient=space, chart=chart, map_fn=lambda p_: jets(p_)[0], jet_provider=jets,
        name=f"small_sphere_{n}_{r}", constant_mean_curvature=True,
    )
    k = w / r
    entry = CatalogEntry(
        name=f"small_sphere(n={n},r={r:.8g},p={p})",
        params={"type": "small_sphere", "n": n, "r": r, "p": p},
        immersion=imm,
        known={
            "alpha_sq": n * k * k,
            "h": n * k,
            "principal_curvatures": [k] * n,
            "scalar_curvature": n * (n - 1) + (n * k) ** 2 - n * k * k,
            "volume": sphere_volume(n, r),
            "normal_conn_sq": 0.0,
            "minimal": False,
        },
        grid_hint=(64,) * n if n == 1 else (48, 96) if n == 2 else (32, 32, 64),
    )
    return _validate_entry(entry) if validate else entry


# -- umbilic hypersurfaces of hyperbolic space --------------------------------


def hyperbolic_umbilic(n: int, k: float, validate: bool = True) -> CatalogEntry:
    """Umbilic hypersurface of H^{n+1} with principal curvature k >= 0.

    k = 0: totally geodesic H^n; 0 < k < 1: equidistant hypersurface;
    k = 1: horosphere; k > 1: geodesic sphere.  Realized on the upper
    hyperboloid sheet in Minkowski coordinates; chart patches only, no
    compact quotient is built.
    """
    if k < 0:
        raise ValueError("principal curvature must be >= 0")
    space = ambient_space(-1.0, n + 1)

    if k > 1.0:
        # geodesic sphere of radius rho, coth(rho) = k
        rho = math.atanh(1.0 / k)
        ch, sh = math.cosh(rho), math.sinh(rho)
        if n not in _SPHERE_JETS:
            raise ValueError("geodesic spheres supported for n <= 3")
        lo, hi, per = _sphere_chart_axes(n)
        chart = Chart(lo, hi, per)

        def jets(pts):
            B = pts.shape[0]
            u, du, d2u = _SPHERE_JETS[n](pts)
            F = np.concatenate([np.full((B, 1), ch), sh * u], axis=1)
            D1 = np.concatenate([np.zeros((B, 1, n)), sh * du], axis=1)
            D2 = np.concatenate([np.zeros((B, 1, n, n)), sh * d2u], axis=1)
            return F, D1, D2

        grid_hint = (64,) * n if n == 1 else (48, 96) if n == 2 else (32, 32, 64)
    else:
        # graph-style charts over a coordinate box v in R^n
        half = 0.8
        chart = Chart((-half,) * n, (half,) * n, (False,) * n)

        if k == 1.0:
            # horosphere through the null direction (1, 0, ..., 0, 1)
            def jets(pts):
                B, nn = pts.shape
                v = pts
                q = np.einsum("bi,bi->b", v, v)
                F = np.concatenate(
                    [((q + 2.0) / 2.0)[:, None], v, (q / 2.0)[:, None]], axis=1
                )
                D1 = np.zeros((B, nn + 2, nn))
                D1[:, 0, :] = v
                for i in range(nn):
                    D1[:, 1 + i, i] = 1.0
                D1[:, nn + 1, :] = v
                D2 = np.zeros((B, nn + 2, nn, nn))
                eye = np.eye(nn)
                D2[:, 0] = eye
                D2[:, nn + 1] = eye
                return F, D1, D2
        else:
            # equidistant hypersurface at signed distance d, tanh(d) = k;
            # d = 0 is the totally geodesic case
            d = math.atanh(k)
            ch, sh = math.cosh(d), math.sinh(d)

            def jets(pts):
                B, nn = pts.shape
                v = pts
                q = np.sqrt(1.0 + np.einsum("bi,bi->b", v, v))
                F = np.concatenate([(ch * q)[:, None], ch * v, np.full((B, 1), sh)], axis=1)
                D1 = np.zeros((B, nn + 2, nn))
                D1[:, 0, :] = ch * v / q[:, None]
                for i in range(nn):
                    D1[:, 1 + i, i] = ch
                D2 = np.zeros((B, nn + 2, nn, nn))
                eye = np.eye(nn)
                outer = np.einsum("bi,bj->bij", v, v)
                D2[:, 0] = ch * (eye[None] / q[:, None, None] - outer / q[:, None, None] ** 3)
                return F, D1, D2

        grid_hint = (32,) * n

    imm = Immersion(
        ambient=space, chart=chart, map_fn=lambda p_: jets(p_)[0], jet_provider=jets,
        name=f"hyperbolic_umbilic_{n}_{k}", constant_mean_curvature=True,
    )
    entry = CatalogEntry(
        name=f"hyperbolic_umbilic(n={n},k={k:.8g})",
        params={"type": "hyperbolic_umbilic", "n": n, "k": k},
        immersion=imm,
        known={
            "alpha_sq": n * k * k,
            "h": n * k,
            "principal_curvatures": [k] * n,
            "scalar_curvature": -n * (n - 1) + (n * k) ** 2 - n * k * k,
            "normal_conn_sq": 0.0,
            "minimal": k == 0.0,
        },
        spherical=False,
        grid_hint=grid_hint,
    )
    return _validate_entry(entry) if validate else entry


# -- flat product torus with non-parallel mean-curvature direction ------------


def product_torus(
    radii=(0.55, 0.6), freqs=(2, 1), validate: bool = True
) -> CatalogEntry:
    """Flat 2-torus in the 5-sphere built from three circles, the third with
    mixed frequencies; generic parameters give a non-parallel mean-curvature
    direction, which exercises the codimension >= 2 machinery."""
    r1, r2 = radii
    r3sq = 1.0 - r1 * r1 - r2 * r2
    if r3sq <= 0:
        raise ValueError("radii leave no room for the third circle")
    r3 = math.sqrt(r3sq)
    a, b = freqs
    space = ambient_space(1.0, 5)
    chart = Chart((0.0, 0.0), (2 * math.pi, 2 * math.pi), (True, True))

    def jets(pts):
        B = pts.shape[0]
        u, v = pts[:, 0], pts[:, 1]
        w = a * u + b * v
        cols = [
            (r1 * np.cos(u), r1 * np.sin(u)),
            (r2 * np.cos(v), r2 * np.sin(v)),
            (r3 * np.cos(w), r3 * np.sin(w)),
        ]
        F = np.stack([cols[0][0], cols[0][1], cols[1][0], cols[1][1], cols[2][0], cols[2][1]], axis=1)
        D1 = np.zeros((B, 6, 2))
        D1[:, 0, 0] = -r1 * np.sin(u)
        D1[:, 1, 0] = r1 * np.cos(u)
        D1[:, 2, 1] = -r2 * np.sin(v)
        D1[:, 3, 1] = r2 * np.cos(v)
        dw = np.array([a, b], dtype=float)
        for i, wi in enumerate(dw):
            D1[:, 4, i] = -r3 * np.sin(w) * wi
            D1[:, 5, i] = r3 * np.cos(w) * wi
        D2 = np.zeros((B, 6, 2, 2))
        D2[:, 0, 0, 0] = -r1 * np.cos(u)
        D2[:, 1, 0, 0] = -r1 * np.sin(u)
        D2[:, 2, 1, 1] = -r2 * np.cos(v)
        D2[:, 3, 1, 1] = -r2 * np.sin(v)
        for i, wi in enumerate(dw):
            for j, wj in enumerate(dw):
                D2[:, 4, i, j] = -r3 * np.cos(w) * wi * wj
                D2[:, 5, i, j] = -r3 * np.sin(w) * wi * wj
        return F, D1, D2

    imm = Immersion(
        ambient=space, chart=chart, map_fn=lambda p_: jets(p_)[0], jet_provider=jets,
        name="product_torus", constant_mean_curvature=True,
    )
    entry = CatalogEntry(
        name=f"product_torus(r1={r1},r2={r2},freqs={a},{b})",
        params={"type": "product_torus", "r1": r1, "r2": r2, "a": a, "b": b},
        immersion=imm,
        known={"volume": (2 * math.pi) ** 2 * math.sqrt(
            (r1**2 + a**2 * r3sq) * (r2**2 + b**2 * r3sq) - (a * b * r3sq) ** 2
        )},
        grid_hint=(64, 64),
    )
    return _validate_entry(entry) if validate else entry


# ---------------------------------------------------------------------------
# default registry


def default_registry() -> list[CatalogEntry]:
    """The entries every cross-module sweep runs over."""
    return [
        clifford_torus(1, 2, math.sqrt(0.5)),
        clifford_torus(1, 3, math.sqrt(1.0 / 3.0)),
        clifford_torus(2, 4, math.sqrt(0.5)),
        clifford_torus(1, 2, 0.6),
        veronese(),
        equatorial_sphere(2, 2),
        small_sphere(2, 0.8),
        small_sphere(2, 0.8, p=2),
        product_torus(),
        hyperbolic_umbilic(2, 0.5),
        hyperbolic_umbilic(3, 1.5),
        hyperbolic_umbilic(2, 0.0),
    ]


def build_entry(spec: dict) -> CatalogEntry:
    """Construct an entry from a CLI/JSON parameter spec."""
    spec = dict(spec)
    kind = spec.pop("type", None)
    builders: dict[str, Callable] = {
        "clifford": lambda: clifford_torus(int(spec["m"]), int(spec["n"]), float(spec["r1"]),
                                           float(spec["r2"]) if "r2" in spec else None),
        "veronese": lambda: veronese(),
        "equatorial": lambda: equatorial_sphere(int(spec["n"]), int(spec["p"])),
        "small_sphere": lambda: small_sphere(int(spec["n"]), float(spec["r"]), int(spec.get("p", 1))),
        "hyperbolic_umbilic": lambda: hyperbolic_umbilic(int(spec["n"]), float(spec["k"])),
        "product_torus": lambda: product_torus(
            radii=tuple(spec.get("radii", (0.55, 0.6))), freqs=tuple(spec.get("freqs", (2, 1)))
        ),
    }
    if kind not in builders:
        raise ValueError(f"unknown catalog type {kind!r}")
    return builders[kind]()
