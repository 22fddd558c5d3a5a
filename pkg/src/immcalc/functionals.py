"""Quadrature functionals, Euler-Lagrange residuals, and gap scans.

Three curvature energies are integrated over chart grids: the squared
norm of the second fundamental form, the squared mean curvature, and the
normalized total curvature n(n-1)c + ||H||^2.  Critical immersions of
each are characterized by pointwise equations in the adapted frame; this
module evaluates those equations as residual fields, scans the pointwise
gap expressions, and checks the integrated scalar-curvature identity.

Sign bookkeeping: the residual density returned by the ``*_field``
helpers is oriented so that pairing it against the normal profile of a
deformation (with an overall minus) reproduces the derivative of the
discretized functional; reported residual magnitudes are orientation
free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .calculus import (
    EPS_H,
    Immersion,
    ShapeBatch,
    laplace_beltrami,
    shape_batch,
)
from .catalog import CatalogEntry
from .errors import FrameDegenerationError

_CHUNK = 32768


class Scheme(Enum):
    TENSOR_TRAPEZOID_PERIODIC = "TensorTrapezoidPeriodic"
    GAUSS_LEGENDRE = "GaussLegendre"
    PRODUCT_SPHERE = "ProductSphere"


@dataclass
class QuadratureGrid:
    """Tensor-product nodes and positive weights on a chart box."""

    nodes: np.ndarray     # (Q, n)
    weights: np.ndarray   # (Q,)
    scheme: Scheme

    @property
    def count(self) -> int:
        return self.nodes.shape[0]


def _axis_rule(lo: float, hi: float, periodic: bool, count: int):
    if periodic:
        # trapezoid on a periodic axis = rectangle rule, spectrally accurate
        xs = lo + (hi - lo) * np.arange(count) / count
        ws = np.full(count, (hi - lo) / count)
        return xs, ws
    # composite two-point Gauss panels (order-4 convergence under refinement)
    panels = max(1, count // 2)
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 / math.sqrt(3.0)
    xs = np.empty(2 * panels)
    ws = np.empty(2 * panels)
    for k in range(panels):
        a, b = edges[k], edges[k + 1]
        mid, span = 0.5 * (a + b), (b - a)
        xs[2 * k] = mid - half * span
        xs[2 * k + 1] = mid + half * span
        ws[2 * k] = ws[2 * k + 1] = 0.5 * span
    return xs, ws


def grid_for(target, resolution=None) -> QuadratureGrid:
    """Tensor grid for an immersion or catalog entry.

    ``resolution`` is a per-axis node count (int or tuple); defaults come
    from the entry's grid hint, falling back to 48 per axis.  Catalog
    weight factors (double covers) are folded into the weights.
    """
    entry = target if isinstance(target, CatalogEntry) else None
    imm = entry.immersion if entry is not None else target
    chart = imm.chart
    n = chart.dim
    if resolution is None:
        resolution = entry.grid_hint if entry is not None and entry.grid_hint else 48
    if isinstance(resolution, int):
        resolution = (resolution,) * n
    axes = []
    wts = []
    for ax in range(n):
        xs, ws = _axis_rule(chart.lo[ax], chart.hi[ax], chart.periodic[ax], resolution[ax])
        axes.append(xs)
        wts.append(ws)
    mesh = np.meshgrid(*axes, indexing="ij")
    nodes = np.stack([m.ravel() for m in mesh], axis=1)
    weights = wts[0]
    for ws in wts[1:]:
        weights = np.outer(weights, ws).ravel()
    if entry is not None:
        weights = weights * entry.weight_scale
    if all(chart.periodic):
        scheme = Scheme.TENSOR_TRAPEZOID_PERIODIC
    elif any(chart.periodic):
        scheme = Scheme.PRODUCT_SPHERE
    else:
        scheme = Scheme.GAUSS_LEGENDRE
    return QuadratureGrid(nodes=nodes, weights=weights, scheme=scheme)


def _batches(imm: Immersion, grid: QuadratureGrid, **kw):
    for start in range(0, grid.count, _CHUNK):
        sl = slice(start, min(start + _CHUNK, grid.count))
        yield grid.weights[sl], shape_batch(imm, grid.nodes[sl], **kw)


def volume(imm: Immersion, grid: QuadratureGrid) -> float:
    return float(sum(np.sum(w * b.sqrt_det_g) for w, b in _batches(imm, grid)))


def functional_value(imm: Immersion, grid: QuadratureGrid, which: str) -> float:
    """Quadrature value of Pi, Psi, or Theta_c on the given grid."""
    which = which.lower()
    c = imm.ambient.c
    n = imm.n
    total = 0.0
    for w, b in _batches(imm, grid):
        if which == "pi":
            integrand = b.alpha_sq
        elif which == "psi":
            integrand = b.h**2
        elif which in ("theta", "theta_c"):
            integrand = n * (n - 1) * c + b.h**2
        else:
            raise ValueError(f"unknown functional {which!r}")
        total += float(np.sum(w * b.sqrt_det_g * integrand))
    return total


# ---------------------------------------------------------------------------
# Euler-Lagrange residuals


@dataclass
class ResidualReport:
    functional: str
    sup_residual: float
    l2_residual: float
    per_equation: list
    minimal_flag: bool
    gap_stats: Optional[dict] = None

    def as_dict(self):
        return {
            "functional": self.functional,
            "sup_residual": self.sup_residual,
            "l2_residual": self.l2_residual,
            "per_equation": list(self.per_equation),
            "minimal_flag": self.minimal_flag,
            "gap_stats": self.gap_stats,
        }


def _classify_minimal(h: np.ndarray) -> bool:
    minimal = h <= EPS_H
    if np.all(minimal):
        return True
    if np.all(~minimal):
        return False
    raise FrameDegenerationError("frame degeneration; residual undefined")


def _delta_h(imm: Immersion, pts: np.ndarray) -> np.ndarray:
    """Laplacian of the mean-curvature field at each point.

    Exactly zero for constant-mean-curvature immersions (constant field);
    otherwise a divergence-form stencil on the chart.
    """
    if imm.constant_mean_curvature:
        return np.zeros(pts.shape[0])

    def h_field(y):
        return shape_batch(imm, y).h

    return np.array([laplace_beltrami(imm, h_field, x) for x in pts])


def _trace_cubed_vector(b: ShapeBatch) -> np.ndarray:
    """t_m = trace(A_m sum_k A_k^2) for every normal index, shape (B, p)."""
    Asum = np.einsum("brij,brjk->bik", b.h_coeffs, b.h_coeffs)
    return np.einsum("bmij,bji->bm", b.h_coeffs, Asum)


def _frame_inner(space, u, v):
    sig = space.signature
    return np.einsum("...x,x,...x->...", u, sig, v)


def _m_equation_terms(imm: Immersion, pts: np.ndarray, step: float = 1e-3):
    """Stencil terms entering the codimension equations at ``pts``.

    Returns (s, ds, cross, eh_frame) with
      s[b, a, m]      = <nabla^nu_{e_a} nu_1, nu_m>
      ds[b, a, m]     = e_a of that scalar field
      cross[b, a, m]  = <nabla^nu_{e_a} nu_1, nabla^nu_{e_a} nu_m> summed over a
      eh_frame[b, a]  = e_a(h)
    The frame completion is deterministic, so the nu_m field is smooth on
    the charts in use and plain central stencils apply.
    """
    space = imm.ambient
    base = shape_batch(imm, pts, need_normal_conn=True, need_frame_derivs=True, field_step=step)
    B, n = pts.shape
    p = base.p

    def conn_matrix(bt: ShapeBatch):
        # nabla^nu_{e_a} nu_r as ambient vectors: (B, a, r, X)
        dn = np.einsum("bai,birx->barx", bt.T, bt.dnu_coord.transpose(0, 1, 2, 3))
        dn = np.einsum("bai,birx->barx", bt.T, bt.dnu_coord)
        w = space.project_tangent_raw(bt.F[:, None, None, :], dn)
        tang = np.einsum("barx,x,bcx->barc", w, space.signature, bt.E)
        w = w - np.einsum("barc,bcx->barx", tang, bt.E)
        return w

    w0 = conn_matrix(base)
    s = _frame_inner(space, w0[:, :, 0:1, :].repeat(p, axis=2), base.NU[:, None, :, :])
    cross = np.einsum(
        "bax,x,bamx->bam", w0[:, :, 0, :], space.signature, w0
    )
    eh = np.einsum("bai,bi->ba", base.T, base.dh_coord)

    # e_a of the scalar field s via coordinate stencils of <nabla nu_1, nu_m>
    from .calculus import _D1_COEFFS, _D1_OFFSETS  # stencil constants

    ds_coord = np.zeros((B, n, n, p))  # [b, deriv axis j, frame a, m]
    for j in range(n):
        for off, cf in zip(_D1_OFFSETS, _D1_COEFFS):
            delta = np.zeros(n)
            delta[j] = off * step
            shifted = shape_batch(
                imm, imm.chart.shift(pts, delta),
                need_normal_conn=True, need_frame_derivs=True, field_step=step,
            )
            wj = conn_matrix(shifted)
            sj = _frame_inner(
                space, wj[:, :, 0:1, :].repeat(p, axis=2), shifted.NU[:, None, :, :]
            )
            ds_coord[:, j] += cf * sj
    ds_coord /= step
    ds = np.einsum("baj,bjam->bam", base.T, ds_coord)
    return base, s, ds, cross, eh


def _el_report(imm, grid, which, primary_fn, m_fn) -> ResidualReport:
    n = imm.n
    p = imm.codim
    c = imm.ambient.c
    sup_eq = np.zeros(p)
    l2_acc = 0.0
    minimal_flag = None
    for w, b in _batches(imm, grid):
        is_min = _classify_minimal(b.h)
        if minimal_flag is None:
            minimal_flag = is_min
        elif minimal_flag != is_min:
            raise FrameDegenerationError("frame degeneration; residual undefined")
        if is_min:
            if which == "pi":
                t = _trace_cubed_vector(b)
                primary = 2.0 * np.sqrt(np.einsum("bm,bm->b", t, t))
                rows = [primary] + [2.0 * np.abs(t[:, m]) for m in range(1, p)]
            else:
                rows = [np.zeros(b.h.shape[0]) for _ in range(p)]
        else:
            dh = _delta_h(imm, b.pts)
            if p == 1:
                kappa = np.zeros(b.h.shape[0])
                rows = [np.abs(primary_fn(b, dh, kappa, c, n))]
            else:
                base, s, ds, cross, eh = _m_equation_terms(imm, b.pts)
                kappa = base.normal_conn_sq
                rows = [np.abs(primary_fn(base, dh, kappa, c, n))]
                for m in range(1, p):
                    rows.append(np.abs(m_fn(base, s, ds, cross, eh, m)))
        stack = np.stack(rows, axis=1)
        sup_eq = np.maximum(sup_eq, stack.max(axis=0))
        l2_acc += float(np.sum(w * b.sqrt_det_g * np.einsum("bm,bm->b", stack, stack)))
    return ResidualReport(
        functional=which,
        sup_residual=float(np.max(sup_eq)),
        l2_residual=math.sqrt(max(0.0, l2_acc)),
        per_equation=[float(v) for v in sup_eq],
        minimal_flag=bool(minimal_flag),
    )


def _pi_primary(b, dh, kappa, c, n):
    t1 = _trace_cubed_vector(b)[:, 0]
    return 2.0 * dh - (2.0 * c * b.h - 2.0 * b.h * kappa - b.h * b.alpha_sq + 2.0 * t1)


def _pi_m(b, s, ds, cross, eh, m):
    t = _trace_cubed_vector(b)
    return (
        2.0 * np.einsum("ba,ba->b", eh, s[:, :, m])
        + b.h * np.einsum("bam->b", ds[:, :, m][:, :, None])
        - b.h * np.einsum("ba->b", cross[:, :, m][:, :, None].squeeze(-1))
        + 2.0 * t[:, m]
    )


def _psi_primary(b, dh, kappa, c, n):
    tr1 = np.einsum("bij,bij->b", b.h_coeffs[:, 0], b.h_coeffs[:, 0])
    return 2.0 * dh - (2.0 * c * n * b.h - 2.0 * b.h * kappa - b.h**3 + 2.0 * b.h * tr1)


def _psi_m(b, s, ds, cross, eh, m):
    tr1m = np.einsum("bij,bij->b", b.h_coeffs[:, 0], b.h_coeffs[:, m])
    return (
        4.0 * np.einsum("ba,ba->b", eh, s[:, :, m])
        + 2.0 * b.h * np.sum(ds[:, :, m], axis=1)
        - 2.0 * b.h * np.sum(cross[:, :, m], axis=1)
        + 2.0 * b.h * tr1m
    )


def _theta_primary(b, dh, kappa, c, n):
    tr1 = np.einsum("bij,bij->b", b.h_coeffs[:, 0], b.h_coeffs[:, 0])
    coeff = (3.0 * n - n * n) * c
    return 2.0 * dh - (coeff * b.h - 2.0 * b.h * kappa - b.h**3 + 2.0 * b.h * tr1)


def el_residual_pi(imm: Immersion, grid: QuadratureGrid) -> ResidualReport:
    """Residuals of the criticality system for the second-form energy.

    At minimal points the adapted frame degenerates and the primary
    residual is the largest |2 trace(A_nu sum A_k^2)| over unit normals
    nu, which the codimension equations collectively assert there.
    """
    return _el_report(imm, grid, "pi", _pi_primary, _pi_m)


def el_residual_psi(imm: Immersion, grid: QuadratureGrid) -> ResidualReport:
    """Residuals for the mean-curvature energy; identically zero on
    minimal immersions since every term carries a factor of h."""
    return _el_report(imm, grid, "psi", _psi_primary, _psi_m)


def el_residual_theta(imm: Immersion, grid: QuadratureGrid) -> ResidualReport:
    """Residuals for the normalized total curvature; shares the
    codimension equations with the mean-curvature energy."""
    return _el_report(imm, grid, "theta", _theta_primary, _psi_m)


def el_residual_field(imm: Immersion, batch: ShapeBatch, which: str) -> np.ndarray:
    """Signed residual density (B, p) for the first-variation pairing.

    Valid for constant-mean-curvature bases (the Laplacian term drops);
    the sign is fixed so that -integral(<field, variation>) dmu equals
    the functional derivative.
    """
    which = which.lower()
    c = imm.ambient.c
    n = imm.n
    p = imm.codim
    B = batch.h.shape[0]
    if not imm.constant_mean_curvature:
        raise ValueError("signed residual field requires a constant-h base")
    dh = np.zeros(B)
    out = np.zeros((B, p))
    minimal = np.all(batch.h <= EPS_H)
    if which == "pi":
        t = _trace_cubed_vector(batch)
        if minimal:
            out = 2.0 * t
        else:
            kappa = np.zeros(B) if p == 1 else shape_batch(
                imm, batch.pts, need_normal_conn=True
            ).normal_conn_sq
            out[:, 0] = _pi_primary(batch, dh, kappa, c, n)
            out[:, 1:] = 2.0 * t[:, 1:]
    elif which in ("psi", "theta", "theta_c"):
        if minimal:
            return out
        kappa = np.zeros(B) if p == 1 else shape_batch(
            imm, batch.pts, need_normal_conn=True
        ).normal_conn_sq
        fn = _psi_primary if which == "psi" else _theta_primary
        out[:, 0] = fn(batch, dh, kappa, c, n)
        tr1m = np.einsum("bij,bmij->bm", batch.h_coeffs[:, 0], batch.h_coeffs[:, 1:])
        out[:, 1:] = 2.0 * batch.h[:, None] * tr1m
    else:
        raise ValueError(f"unknown functional {which!r}")
    return out


# ---------------------------------------------------------------------------
# gap scans


@dataclass
class GapStats:
    name: str
    expressions: dict = field(default_factory=dict)   # label -> (min, max)
    lambda_min: float = 0.0
    upper_bound: Optional[float] = None
    upper_holds: Optional[bool] = None
    upper_equality: Optional[bool] = None
    violation_mass: float = 0.0
    branch: Optional[str] = None
    extras: dict = field(default_factory=dict)

    def as_dict(self):
        return {
            "name": self.name,
            "expressions": {k: [float(v[0]), float(v[1])] for k, v in self.expressions.items()},
            "lambda_min": float(self.lambda_min),
            "upper_bound": self.upper_bound,
            "upper_holds": self.upper_holds,
            "upper_equality": self.upper_equality,
            "violation_mass": float(self.violation_mass),
            "branch": self.branch,
            "extras": {k: (float(v) if np.isscalar(v) or isinstance(v, (int, float)) else v)
                       for k, v in self.extras.items()},
        }


def _minmax(arr):
    return float(np.min(arr)), float(np.max(arr))


def _scan_core(imm, grid, need_kappa):
    """Collect pointwise quantities for the gap scans in one pass."""
    rows = {"h": [], "S": [], "trA1sq": [], "kappa": [], "N1": [], "w": [], "sq": []}
    for w, b in _batches(imm, grid):
        minimal = b.h <= EPS_H
        if need_kappa and imm.codim >= 2 and not np.all(minimal):
            kb = shape_batch(imm, b.pts, need_normal_conn=True)
            kappa = kb.normal_conn_sq
        else:
            kappa = np.zeros(b.h.shape[0])
        kappa = np.where(minimal, 0.0, kappa)
        tr1 = np.einsum("bij,bij->b", b.h_coeffs[:, 0], b.h_coeffs[:, 0])
        tr1 = np.where(minimal, 0.0, tr1)  # nu_H undefined at minimal points
        rows["h"].append(b.h)
        rows["S"].append(b.alpha_sq)
        rows["trA1sq"].append(tr1)
        rows["kappa"].append(kappa)
        rows["N1"].append(_trace_cubed_vector(b)[:, 0])
        rows["w"].append(w * b.sqrt_det_g)
        rows["sq"].append(b.sqrt_det_g)
    return {k: np.concatenate(v) for k, v in rows.items()}


def gap_scan_es(imm: Immersion, grid: QuadratureGrid) -> GapStats:
    """Chain scan of the primary pointwise estimate.

    Node-wise:  -lambda h^2 - n <= trace A_1^2 - h^2 - kappa
                <= ||alpha||^2 - h^2 - kappa <= n p / (2p - 1),
    reporting min/max of each expression, the smallest admissible
    lambda >= 0, the upper-bound boolean, and the measure of violating
    nodes.  Minimal immersions zero the mean-curvature-direction terms.
    """
    n, p = imm.n, imm.codim
    d = _scan_core(imm, grid, need_kappa=True)
    minimal = d["h"] <= EPS_H
    E1 = np.where(minimal, 0.0, d["trA1sq"] - d["h"] ** 2 - d["kappa"])
    E2 = d["S"] - np.where(minimal, 0.0, d["h"] ** 2 + d["kappa"])
    bound = n * p / (2.0 * p - 1.0)
    lam_need = np.where(
        d["h"] > EPS_H, (-n - E1) / np.maximum(d["h"], EPS_H) ** 2, -np.inf
    )
    lam = max(0.0, float(np.max(lam_need)))
    viol = E2 > bound + 1e-9
    mass = float(np.sum(d["w"][viol]) / max(np.sum(d["w"]), 1e-300))
    return GapStats(
        name="es",
        expressions={"lower": _minmax(E1), "middle": _minmax(E1), "upper_expr": _minmax(E2)},
        lambda_min=lam,
        upper_bound=bound,
        upper_holds=bool(np.max(E2) <= bound + 1e-9),
        upper_equality=bool(abs(float(np.max(E2)) - bound) <= 1e-8),
        violation_mass=mass,
        branch="minimal" if bool(np.all(minimal)) else "generic",
    )


def gap_scan_es2(imm: Immersion, grid: QuadratureGrid) -> GapStats:
    """Chain scan of the refined estimate with the cubic-trace middle term.

    Non-minimal points evaluate
        -lambda h^2 - 1 <= trace(A_1 sum A_j^2)/h - ||alpha||^2/2 - kappa - h^2
        <= ||alpha||^2 - h^2 - kappa <= n p/(2p - 1)
    and assert middle <= upper node-wise.  Minimal immersions skip the
    1/h term: the scan reduces to the upper bound, and the cubic ratio is
    reported separately.
    """
    n, p = imm.n, imm.codim
    d = _scan_core(imm, grid, need_kappa=True)
    minimal_all = bool(np.all(d["h"] <= EPS_H))
    bound = n * p / (2.0 * p - 1.0)
    if minimal_all:
        E2 = d["S"]
        viol = E2 > bound + 1e-9
        mass = float(np.sum(d["w"][viol]) / max(np.sum(d["w"]), 1e-300))
        ratio = np.where(d["S"] > 0, d["N1"] / np.maximum(d["S"], 1e-300), 0.0)
        return GapStats(
            name="es2",
            expressions={"upper_expr": _minmax(E2)},
            lambda_min=0.0,
            upper_bound=bound,
            upper_holds=bool(np.max(E2) <= bound + 1e-9),
            upper_equality=bool(abs(float(np.max(E2)) - bound) <= 1e-8),
            violation_mass=mass,
            branch="minimal",
            extras={"cubic_ratio_range": _minmax(ratio)},
        )
    if np.any(d["h"] <= EPS_H):
        raise FrameDegenerationError("mean curvature vanishes on part of the grid")
    Emid = d["N1"] / d["h"] - 0.5 * d["S"] - d["kappa"] - d["h"] ** 2
    E2 = d["S"] - d["h"] ** 2 - d["kappa"]
    lam_need = (-1.0 - Emid) / d["h"] ** 2
    lam = max(0.0, float(np.max(lam_need)))
    mid_le_upper = Emid <= E2 + 1e-9
    viol = E2 > bound + 1e-9
    mass = float(np.sum(d["w"][viol]) / max(np.sum(d["w"]), 1e-300))
    return GapStats(
        name="es2",
        expressions={"middle": _minmax(Emid), "upper_expr": _minmax(E2)},
        lambda_min=lam,
        upper_bound=bound,
        upper_holds=bool(np.max(E2) <= bound + 1e-9),
        upper_equality=bool(abs(float(np.max(E2)) - bound) <= 1e-8),
        violation_mass=mass,
        branch="generic",
        extras={
            "middle_le_upper_everywhere": bool(np.all(mid_le_upper)),
            "worst_middle_minus_upper": float(np.max(Emid - E2)),
        },
    )


def hyperbolic_gap_check(imm: Immersion, grid: QuadratureGrid, which: str) -> GapStats:
    """Scans of the negative-curvature dichotomies on chart patches.

    ``which`` selects the mean-curvature-energy variant ("thm15",
    0 <= ||alpha||^2 - ||H||^2/2 - kappa <= n) or the second-form-energy
    variant ("thm16").  Reports the scanned expression range, whether the
    hypothesis window holds, and the predicted branch: "minimal",
    "equality" (with parallel mean-curvature direction), or "strict".
    Results are per chart patch; no compact quotient is built.
    """
    if imm.ambient.c >= 0:
        raise ValueError("hyperbolic scan requires ambient curvature c < 0")
    which = which.lower()
    n = imm.n
    d = _scan_core(imm, grid, need_kappa=True)
    minimal_all = bool(np.all(d["h"] <= EPS_H))
    tol = 1e-7
    if which == "thm15":
        T = d["S"] - 0.5 * d["h"] ** 2 - d["kappa"]
        holds = bool(np.min(T) >= -tol and np.max(T) <= n + tol)
        if minimal_all:
            branch = "minimal"
            eq = {}
        else:
            d1 = np.max(np.abs(d["S"] - (0.5 * d["h"] ** 2 + n)))
            d2 = np.max(np.abs(d["S"] - d["trA1sq"]))
            d3 = np.max(d["kappa"])
            eq = {"equality_defect": float(max(d1, d2)), "kappa_max": float(d3)}
            branch = "equality" if max(d1, d2, d3) <= tol else "strict"
        viol = (T < -tol) | (T > n + tol)
        mass = float(np.sum(d["w"][viol]) / max(np.sum(d["w"]), 1e-300))
        return GapStats(
            name="thm15",
            expressions={"window_expr": _minmax(T)},
            upper_bound=float(n),
            upper_holds=holds,
            violation_mass=mass,
            branch=branch,
            extras=eq,
        )
    if which == "thm16":
        lhs = d["S"] * ((3.0 - 0.5 * n) * d["S"] - d["h"] ** 2)
        rhs = n * d["S"] + 2.0 * d["h"] ** 2
        slack = rhs - lhs
        holds = bool(np.min(slack) >= -tol)
        if minimal_all:
            branch = "minimal"
            eq = {}
        else:
            d2 = np.max(np.abs(d["S"] - d["trA1sq"]))
            d3 = np.max(d["kappa"])
            eqok = (np.max(np.abs(slack)) <= tol) and d2 <= tol and d3 <= tol and n <= 5
            eq = {"slack_min": float(np.min(slack)), "kappa_max": float(d3)}
            branch = "equality" if eqok else "strict"
        viol = slack < -tol
        mass = float(np.sum(d["w"][viol]) / max(np.sum(d["w"]), 1e-300))
        return GapStats(
            name="thm16",
            expressions={"lhs": _minmax(lhs), "rhs": _minmax(rhs), "slack": _minmax(slack)},
            upper_holds=holds,
            violation_mass=mass,
            branch=branch,
            extras=eq,
        )
    raise ValueError(f"unknown hyperbolic check {which!r}")


def total_scalar_identity(imm: Immersion, grid: QuadratureGrid):
    """(lhs, rhs, defect): integral of scalar curvature vs n(n-1)Vol + Psi - Pi.

    Stated for the unit-curvature sphere; the two sides go through
    independent accumulations.
    """
    if abs(imm.ambient.c - 1.0) > 1e-12:
        raise ValueError("total scalar identity is evaluated at c = 1")
    n = imm.n
    lhs = 0.0
    vol = 0.0
    psi = 0.0
    pi = 0.0
    for w, b in _batches(imm, grid):
        dmu = w * b.sqrt_det_g
        lhs += float(np.sum(dmu * b.scalar_curvature()))
        vol += float(np.sum(dmu))
        psi += float(np.sum(dmu * b.h**2))
        pi += float(np.sum(dmu * b.alpha_sq))
    rhs = n * (n - 1) * vol + psi - pi
    return lhs, rhs, abs(lhs - rhs)


def node_table(imm: Immersion, grid: QuadratureGrid) -> dict:
    """Per-node pointwise quantities for CSV dumps."""
    d = _scan_core(imm, grid, need_kappa=True)
    cols = {f"x{i}": grid.nodes[:, i] for i in range(grid.nodes.shape[1])}
    cols.update(
        weight=grid.weights,
        sqrt_det_g=d["sq"],
        h=d["h"],
        alpha_sq=d["S"],
        trace_A1_sq=d["trA1sq"],
        normal_conn_sq=d["kappa"],
        cubic_trace=d["N1"],
    )
    return cols
