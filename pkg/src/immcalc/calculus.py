"""Extrinsic differential calculus of chart-parametrized immersions.

From a map of a chart box into an ambient space form this module computes
jets, the induced metric, adapted orthonormal tangent/normal frames, the
second fundamental form and shape operators, mean curvature, the normal
connection of the mean-curvature direction, the Laplace-Beltrami operator
of chart scalar fields, and an intrinsic-curvature cross check of the
Gauss equation.

The whole pipeline is batched over points: every array carries a leading
batch axis, and single-point wrappers slice batch size one.  Frames are
built by modified Gram-Schmidt with a second reorthogonalization pass and
a fixed candidate order, so repeated evaluations are bitwise reproducible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .ambient import AmbientSpace, AmbientVector, Model
from .errors import (
    BoundaryStencilError,
    DegenerateMetricError,
    MeanCurvatureVanishesError,
)

EPS_H = 1e-8           # below this ||H||, a point counts as minimal
COND_LIMIT = 1e8       # immersion condition: cond(g) must stay under this
DEFAULT_FD_STEP = 1e-4
DEFAULT_FIELD_STEP = 1e-3  # stencil step for derived fields (h, nu_1, metric)

# 4th-order central stencils
_D1_OFFSETS = np.array([-2, -1, 1, 2])
_D1_COEFFS = np.array([1.0, -8.0, 8.0, -1.0]) / 12.0
_D2_OFFSETS = np.array([-2, -1, 0, 1, 2])
_D2_COEFFS = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0


# ---------------------------------------------------------------------------
# charts


@dataclass(frozen=True)
class Chart:
    """Axis-aligned box domain with per-axis periodicity flags."""

    lo: tuple
    hi: tuple
    periodic: tuple

    def __post_init__(self):
        if not (len(self.lo) == len(self.hi) == len(self.periodic)):
            raise ValueError("chart axis lists disagree in length")

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def spans(self) -> np.ndarray:
        return np.asarray(self.hi, dtype=float) - np.asarray(self.lo, dtype=float)

    def shift(self, pts: np.ndarray, delta: np.ndarray) -> np.ndarray:
        """Shift points, wrapping periodic axes and bound-checking the rest."""
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        out = pts + delta
        lo = np.asarray(self.lo, dtype=float)
        hi = np.asarray(self.hi, dtype=float)
        for ax in range(self.dim):
            if self.periodic[ax]:
                span = hi[ax] - lo[ax]
                out[:, ax] = lo[ax] + np.mod(out[:, ax] - lo[ax], span)
            else:
                bad = (out[:, ax] < lo[ax] - 1e-12) | (out[:, ax] > hi[ax] + 1e-12)
                if np.any(bad):
                    raise BoundaryStencilError(
                        f"boundary stencil: axis {ax} leaves [{lo[ax]}, {hi[ax]}]"
                    )
        return out

    def contains(self, pts: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        lo = np.asarray(self.lo, dtype=float)
        hi = np.asarray(self.hi, dtype=float)
        ok = np.ones(pts.shape[0], dtype=bool)
        for ax in range(self.dim):
            if not self.periodic[ax]:
                ok &= (pts[:, ax] >= lo[ax] - 1e-12) & (pts[:, ax] <= hi[ax] + 1e-12)
        return ok

    def sample(self, rng: np.random.Generator, count: int, margin: float = 0.0) -> np.ndarray:
        """Uniform chart points; non-periodic axes shrink by ``margin`` (absolute)."""
        lo = np.asarray(self.lo, dtype=float).copy()
        hi = np.asarray(self.hi, dtype=float).copy()
        for ax in range(self.dim):
            if not self.periodic[ax]:
                lo[ax] += margin
                hi[ax] -= margin
        if np.any(hi <= lo):
            raise ValueError("margin exhausts the chart")
        return rng.uniform(lo, hi, size=(count, self.dim))


# ---------------------------------------------------------------------------
# immersions and jets


@dataclass
class Immersion:
    """A chart-parametrized immersion into an ambient space form.

    ``map_fn`` takes an array of chart points (B, n) and returns flat
    coordinates (B, N).  ``jet_provider``, when given, returns the exact
    tuple (F, D1, D2) with shapes (B, N), (B, N, n), (B, N, n, n); catalog
    entries always supply one.  Without it, jets come from 4th-order
    central differences with step ``fd_step``.
    """

    ambient: AmbientSpace
    chart: Chart
    map_fn: Callable[[np.ndarray], np.ndarray]
    jet_provider: Optional[Callable[[np.ndarray], tuple]] = None
    name: str = ""
    constant_mean_curvature: bool = False
    fd_step: float = DEFAULT_FD_STEP

    def __post_init__(self):
        n = self.chart.dim
        if n == 1 and self.ambient.c >= 0:
            raise ValueError("one-dimensional charts are admitted only for c < 0")
        if not (1 <= n <= self.ambient.dim - 1):
            raise ValueError(
                f"domain dimension {n} incompatible with ambient dimension {self.ambient.dim}"
            )

    @property
    def n(self) -> int:
        return self.chart.dim

    @property
    def codim(self) -> int:
        return self.ambient.dim - self.chart.dim

    def points(self, pts: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        F = np.asarray(self.map_fn(pts), dtype=float)
        self.ambient.validate_point(F)
        return F

    def jets_upto2(self, pts: np.ndarray):
        """(F, D1, D2): values, first and second partials of the map."""
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        if self.jet_provider is not None:
            F, D1, D2 = self.jet_provider(pts)
            return (
                np.asarray(F, dtype=float),
                np.asarray(D1, dtype=float),
                np.asarray(D2, dtype=float),
            )
        return _fd_jets2(self.map_fn, self.chart, pts, self.fd_step)

    def jet(self, x: np.ndarray, order: int) -> np.ndarray:
        """Order-``order`` derivative tensor of the map at a single point.

        Tensors are symmetric under permutations of the derivative axes;
        orders 3 and 4 difference the order-2 jets and are symmetrized
        explicitly.
        """
        if order not in (0, 1, 2, 3, 4):
            raise ValueError("jet order must be in 0..4")
        x = np.atleast_2d(np.asarray(x, dtype=float))
        F, D1, D2 = self.jets_upto2(x)
        self.ambient.validate_point(F)
        if order == 0:
            return F[0]
        if order == 1:
            return D1[0]
        if order == 2:
            return D2[0]
        h = max(self.fd_step, 1e-4)
        n = self.n
        if order == 3:
            T = np.empty(D2.shape[1:] + (n,))
            for k in range(n):
                acc = 0.0
                for off, cf in zip(_D1_OFFSETS, _D1_COEFFS):
                    delta = np.zeros(n)
                    delta[k] = off * h
                    acc = acc + cf * self.jets_upto2(self.chart.shift(x, delta))[2][0]
                T[..., k] = acc / h
            return _symmetrize(T, 3)
        T = np.empty(D2.shape[1:] + (n, n))
        for k in range(n):
            for l in range(k, n):
                if k == l:
                    acc = 0.0
                    for off, cf in zip(_D2_OFFSETS, _D2_COEFFS):
                        delta = np.zeros(n)
                        delta[k] = off * h
                        acc = acc + cf * self.jets_upto2(self.chart.shift(x, delta))[2][0]
                    T[..., k, k] = acc / h**2
                else:
                    acc = 0.0
                    for oa, ca in zip(_D1_OFFSETS, _D1_COEFFS):
                        for ob, cb in zip(_D1_OFFSETS, _D1_COEFFS):
                            delta = np.zeros(n)
                            delta[k] = oa * h
                            delta[l] = ob * h
                            acc = acc + ca * cb * self.jets_upto2(self.chart.shift(x, delta))[2][0]
                    T[..., k, l] = acc / h**2
                    T[..., l, k] = T[..., k, l]
        return _symmetrize(T, 4)


def _symmetrize(T: np.ndarray, k: int) -> np.ndarray:
    """Average a tensor over permutations of its last ``k`` axes."""
    lead = T.ndim - k
    acc = np.zeros_like(T)
    perms = list(itertools.permutations(range(k)))
    for perm in perms:
        axes = tuple(range(lead)) + tuple(lead + p for p in perm)
        acc += np.transpose(T, axes)
    return acc / len(perms)


def _fd_jets2(map_fn, chart: Chart, pts: np.ndarray, h: float):
    """4th-order central-difference jets up to order 2, one batched map call."""
    B, n = pts.shape
    offsets = [np.zeros(n)]
    index = {(): 0}
    for i in range(n):
        for off in _D1_OFFSETS:
            index[(i, off)] = len(offsets)
            delta = np.zeros(n)
            delta[i] = off * h
            offsets.append(delta)
    for i in range(n):
        for j in range(i + 1, n):
            for oa in _D1_OFFSETS:
                for ob in _D1_OFFSETS:
                    index[(i, oa, j, ob)] = len(offsets)
                    delta = np.zeros(n)
                    delta[i] = oa * h
                    delta[j] = ob * h
                    offsets.append(delta)
    S = len(offsets)
    stacked = np.empty((S, B, n))
    for s, delta in enumerate(offsets):
        stacked[s] = chart.shift(pts, delta)
    vals = np.asarray(map_fn(stacked.reshape(S * B, n)), dtype=float)
    N = vals.shape[-1]
    vals = vals.reshape(S, B, N)

    F = vals[0]
    D1 = np.zeros((B, N, n))
    D2 = np.zeros((B, N, n, n))
    for i in range(n):
        acc1 = np.zeros((B, N))
        for off, cf in zip(_D1_OFFSETS, _D1_COEFFS):
            acc1 += cf * vals[index[(i, off)]]
        D1[:, :, i] = acc1 / h
        acc2 = _D2_COEFFS[2] * vals[0]
        for off, cf in zip(_D1_OFFSETS, [_D2_COEFFS[0], _D2_COEFFS[1], _D2_COEFFS[3], _D2_COEFFS[4]]):
            acc2 += cf * vals[index[(i, off)]]
        D2[:, :, i, i] = acc2 / h**2
    for i in range(n):
        for j in range(i + 1, n):
            acc = np.zeros((B, N))
            for oa, ca in zip(_D1_OFFSETS, _D1_COEFFS):
                for ob, cb in zip(_D1_OFFSETS, _D1_COEFFS):
                    acc += ca * cb * vals[index[(i, oa, j, ob)]]
            D2[:, :, i, j] = acc / h**2
            D2[:, :, j, i] = D2[:, :, i, j]
    return F, D1, D2


# ---------------------------------------------------------------------------
# frames


def _mgs(space: AmbientSpace, vecs: np.ndarray):
    """Orthonormalize rows of (B, k, N) stacks; also return the coefficient
    matrix T with frame[a] = sum_i T[a, i] vecs[i].  Two projection passes."""
    B, k, N = vecs.shape
    sig = space.signature
    E = np.zeros_like(vecs)
    T = np.zeros((B, k, k))
    for a in range(k):
        w = vecs[:, a].copy()
        coef = np.zeros((B, k))
        coef[:, a] = 1.0
        for _ in range(2):
            for b in range(a):
                proj = np.einsum("bx,x,bx->b", w, sig, E[:, b])
                w -= proj[:, None] * E[:, b]
                coef -= proj[:, None] * T[:, b]
        nrm2 = np.einsum("bx,x,bx->b", w, sig, w)
        if np.any(nrm2 <= 1e-24):
            raise DegenerateMetricError("degenerate metric: dependent derivative vectors")
        nrm = np.sqrt(nrm2)
        E[:, a] = w / nrm[:, None]
        T[:, a] = coef / nrm[:, None]
    return E, T


def _complete_normal_frame(space: AmbientSpace, F, E, p):
    """Extend a tangent frame to the model tangent space, deterministically.

    Standard flat basis vectors are projected and orthogonalized in fixed
    order; per point the first p independent ones are kept.
    """
    B, n, N = E.shape
    sig = space.signature
    NU = np.zeros((B, p, N))
    count = np.zeros(B, dtype=int)
    for cand in range(N):
        if np.all(count >= p):
            break
        w = np.zeros((B, N))
        w[:, cand] = 1.0
        w = space.project_tangent_raw(F, w)
        for _ in range(2):
            for a in range(n):
                proj = np.einsum("bx,x,bx->b", w, sig, E[:, a])
                w -= proj[:, None] * E[:, a]
            for r in range(p):
                proj = np.einsum("bx,x,bx->b", w, sig, NU[:, r])
                w -= proj[:, None] * NU[:, r]
        nrm2 = np.einsum("bx,x,bx->b", w, sig, w)
        accept = (nrm2 > 1e-12) & (count < p)
        idx = np.nonzero(accept)[0]
        if idx.size:
            NU[idx, count[idx]] = w[idx] / np.sqrt(nrm2[idx])[:, None]
            count[idx] += 1
    if np.any(count < p):
        raise DegenerateMetricError("could not complete a normal frame")
    return NU


def _adapt_frame_to_H(space: AmbientSpace, NU, nu1, adapt_mask):
    """Rotate the normal frame so its first vector is nu1 where adapt_mask holds."""
    B, p, N = NU.shape
    if not np.any(adapt_mask):
        return NU.copy()
    sig = space.signature
    cands = np.concatenate([nu1[:, None, :], NU], axis=1)
    NEW = np.zeros_like(NU)
    count = np.zeros(B, dtype=int)
    for c in range(p + 1):
        w = cands[:, c].copy()
        for _ in range(2):
            for r in range(p):
                proj = np.einsum("bx,x,bx->b", w, sig, NEW[:, r])
                w -= proj[:, None] * NEW[:, r]
        nrm2 = np.einsum("bx,x,bx->b", w, sig, w)
        accept = adapt_mask & (nrm2 > 1e-12) & (count < p)
        idx = np.nonzero(accept)[0]
        if idx.size:
            NEW[idx, count[idx]] = w[idx] / np.sqrt(nrm2[idx])[:, None]
            count[idx] += 1
    if np.any(adapt_mask & (count < p)):
        raise DegenerateMetricError("normal frame adaptation failed")
    out = NU.copy()
    out[adapt_mask] = NEW[adapt_mask]
    return out


# ---------------------------------------------------------------------------
# the shape pipeline


@dataclass
class ShapeBatch:
    """Pointwise extrinsic data over a batch of chart points."""

    immersion: Immersion
    pts: np.ndarray          # (B, n)
    F: np.ndarray            # (B, N) base points
    g: np.ndarray            # (B, n, n) induced metric in chart coordinates
    sqrt_det_g: np.ndarray   # (B,)
    T: np.ndarray            # (B, n, n) frame coefficients: e_a = T[a,i] d_i
    E: np.ndarray            # (B, n, N) orthonormal tangent frame
    NU: np.ndarray           # (B, p, N) orthonormal normal frame (nu_1 = H/|H| where adapted)
    alpha: np.ndarray        # (B, n, n, N) second fundamental form in the tangent frame
    h_coeffs: np.ndarray     # (B, p, n, n) coefficients of alpha against NU
    H_vec: np.ndarray        # (B, N) mean curvature vector
    h: np.ndarray            # (B,) its norm
    alpha_sq: np.ndarray     # (B,)
    adapted: np.ndarray      # (B,) bool: frame adapted to H (h > EPS_H)
    normal_conn_sq: Optional[np.ndarray] = None   # (B,), only on request
    dh_coord: Optional[np.ndarray] = None         # (B, n) coordinate derivs of h
    dnu_coord: Optional[np.ndarray] = None        # (B, n, p, N) coordinate derivs of NU

    @property
    def n(self) -> int:
        return self.pts.shape[1]

    @property
    def p(self) -> int:
        return self.NU.shape[1]

    def trace_powers(self):
        """(trace A_r, trace A_r^2 summed, trace A_1 A_r^2 summed) helpers."""
        tr = np.einsum("brii->br", self.h_coeffs)
        sq = np.einsum("brij,brij->b", self.h_coeffs, self.h_coeffs)
        return tr, sq

    def scalar_curvature(self):
        c = self.immersion.ambient.c
        n = self.n
        return n * (n - 1) * c + self.h**2 - self.alpha_sq

    def ricci(self):
        """Ricci tensor in the orthonormal tangent frame, (B, n, n)."""
        c = self.immersion.ambient.c
        n = self.n
        eye = np.eye(n)
        tr = np.einsum("brii->br", self.h_coeffs)
        mean_term = np.einsum("br,brjk->bjk", tr, self.h_coeffs)
        square_term = np.einsum("brji,brik->bjk", self.h_coeffs, self.h_coeffs)
        return (n - 1) * c * eye[None] + mean_term - square_term


def shape_batch(
    imm: Immersion,
    pts: np.ndarray,
    need_normal_conn: bool = False,
    need_frame_derivs: bool = False,
    field_step: float = DEFAULT_FIELD_STEP,
) -> ShapeBatch:
    """Run the extrinsic pipeline at a batch of chart points."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    space = imm.ambient
    sig = space.signature
    n = imm.n
    p = imm.codim

    F, D1, D2 = imm.jets_upto2(pts)
    space.validate_point(F)

    D = np.transpose(D1, (0, 2, 1))            # (B, n, N) coordinate derivatives
    g = np.einsum("bix,x,bjx->bij", D, sig, D)
    g = 0.5 * (g + np.transpose(g, (0, 2, 1)))
    evals = np.linalg.eigvalsh(g)
    if np.any(evals[:, 0] <= 0):
        raise DegenerateMetricError("degenerate metric: not positive definite")
    cond = evals[:, -1] / evals[:, 0]
    if np.any(cond > COND_LIMIT):
        raise DegenerateMetricError(
            f"degenerate metric: condition number {float(np.max(cond)):.3e} exceeds {COND_LIMIT:.1e}"
        )
    sqrt_det_g = np.sqrt(np.linalg.det(g))

    E, T = _mgs(space, D)
    NU = _complete_normal_frame(space, F, E, p)

    # normal part (within the model tangent space) of the flat second derivative
    M2 = np.transpose(D2, (0, 2, 3, 1))        # (B, n, n, N)
    M2 = space.project_tangent_raw(F[:, None, None, :], M2)
    tang = np.einsum("bijx,x,bax->bija", M2, sig, E)
    AC = M2 - np.einsum("bija,bax->bijx", tang, E)
    alpha = np.einsum("bai,bcj,bijx->bacx", T, T, AC)

    H = np.einsum("baax->bx", alpha)
    h = np.sqrt(np.maximum(space.product(H, H), 0.0))
    adapted = h > EPS_H
    nu1 = np.zeros_like(H)
    nz = np.nonzero(adapted)[0]
    if nz.size:
        nu1[nz] = H[nz] / h[nz, None]
    NU = _adapt_frame_to_H(space, NU, nu1, adapted)

    h_coeffs = np.einsum("bijx,x,brx->brij", alpha, sig, NU)
    alpha_sq = np.einsum("brij,brij->b", h_coeffs, h_coeffs)

    batch = ShapeBatch(
        immersion=imm, pts=pts, F=F, g=g, sqrt_det_g=sqrt_det_g, T=T, E=E, NU=NU,
        alpha=alpha, h_coeffs=h_coeffs, H_vec=H, h=h, alpha_sq=alpha_sq, adapted=adapted,
    )

    if need_normal_conn or need_frame_derivs:
        _attach_frame_derivatives(batch, field_step, need_frame_derivs)
    return batch


def _attach_frame_derivatives(batch: ShapeBatch, step: float, keep_frames: bool):
    """Stencil derivatives of h and of the adapted normal frame.

    Needs ||H|| > EPS_H on the whole stencil; the mean-curvature direction
    is otherwise undefined and no limit is guessed.
    """
    imm = batch.immersion
    space = imm.ambient
    sig = space.signature
    B, n = batch.pts.shape
    p = batch.p

    if p == 1 and not keep_frames:
        # rank-one normal bundle: the unit section is parallel
        if np.any(~batch.adapted):
            raise MeanCurvatureVanishesError("mean curvature vanishes on the stencil")
        batch.normal_conn_sq = np.zeros(B)
        dh = _h_field_gradient(imm, batch.pts, step)
        batch.dh_coord = dh
        return

    h_shift = np.empty((n, len(_D1_OFFSETS), B))
    nu_shift = np.empty((n, len(_D1_OFFSETS), B, p, batch.NU.shape[2]))
    for ax in range(n):
        for k, off in enumerate(_D1_OFFSETS):
            delta = np.zeros(n)
            delta[ax] = off * step
            sub = shape_batch(imm, imm.chart.shift(batch.pts, delta))
            if np.any(~sub.adapted):
                raise MeanCurvatureVanishesError("mean curvature vanishes on the stencil")
            h_shift[ax, k] = sub.h
            nu_shift[ax, k] = sub.NU
    if np.any(~batch.adapted):
        raise MeanCurvatureVanishesError("mean curvature vanishes")

    dh = np.einsum("k,akb->ba", _D1_COEFFS, h_shift) / step
    dnu = np.einsum("k,akbrx->barx", _D1_COEFFS, nu_shift) / step

    # normal-bundle projection of the nu_1 derivative: drop the model-radial
    # part, then the tangential part (the shape-operator term)
    w = space.project_tangent_raw(batch.F[:, None, :], dnu[:, :, 0, :])
    tang = np.einsum("bax,x,bcx->bac", w, sig, batch.E)
    w = w - np.einsum("bac,bcx->bax", tang, batch.E)
    ginv = np.linalg.inv(batch.g)
    batch.normal_conn_sq = np.einsum("bij,bix,x,bjx->b", ginv, w, sig, w)
    batch.dh_coord = dh
    if keep_frames:
        batch.dnu_coord = dnu


def _h_field_gradient(imm: Immersion, pts: np.ndarray, step: float) -> np.ndarray:
    pts = np.atleast_2d(pts)
    B, n = pts.shape
    vals = np.empty((n, len(_D1_OFFSETS), B))
    for ax in range(n):
        for k, off in enumerate(_D1_OFFSETS):
            delta = np.zeros(n)
            delta[ax] = off * step
            vals[ax, k] = shape_batch(imm, imm.chart.shift(pts, delta)).h
    return np.einsum("k,akb->ba", _D1_COEFFS, vals) / step


# ---------------------------------------------------------------------------
# single-point views


@dataclass
class ShapeData:
    """Adapted-frame extrinsic data at one chart point."""

    point: np.ndarray
    metric: np.ndarray
    tangent_frame: list
    normal_frame: list
    h_coeffs: np.ndarray
    mean_curvature: float
    shape_ops: np.ndarray
    alpha_sq: float
    normal_conn_sq: Optional[float]
    frame_coeffs: np.ndarray
    minimal: bool

    @property
    def h(self) -> float:
        return self.mean_curvature


def shape_data(imm: Immersion, x, with_normal_conn: bool = True) -> ShapeData:
    """ShapeData at a single chart point.

    ``normal_conn_sq`` is present only when ||H|| > EPS_H (for p = 1 it is
    identically zero and returned directly).
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    batch = shape_batch(imm, x)
    minimal = not bool(batch.adapted[0])
    conn = None
    if with_normal_conn and not minimal:
        if imm.codim == 1:
            conn = 0.0
        else:
            sub = shape_batch(imm, x, need_normal_conn=True)
            conn = float(sub.normal_conn_sq[0])
    space = imm.ambient
    base = batch.F[0]
    tangent = [AmbientVector(space, base, batch.E[0, a]) for a in range(imm.n)]
    normal = [AmbientVector(space, base, batch.NU[0, r]) for r in range(imm.codim)]
    return ShapeData(
        point=x[0],
        metric=batch.g[0],
        tangent_frame=tangent,
        normal_frame=normal,
        h_coeffs=batch.h_coeffs[0],
        mean_curvature=float(batch.h[0]),
        shape_ops=batch.h_coeffs[0],
        alpha_sq=float(batch.alpha_sq[0]),
        normal_conn_sq=conn,
        frame_coeffs=batch.T[0],
        minimal=minimal,
    )


def ricci(imm: Immersion, x) -> np.ndarray:
    """Ricci tensor in the orthonormal tangent frame at one point."""
    return shape_batch(imm, np.atleast_2d(x)).ricci()[0]


def scalar_curvature(imm: Immersion, x) -> float:
    return float(shape_batch(imm, np.atleast_2d(x)).scalar_curvature()[0])


def normal_connection_sq(imm: Immersion, x, step: float = DEFAULT_FIELD_STEP) -> float:
    """Squared norm of the normal-connection derivative of nu_1 = H/||H||."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    batch = shape_batch(imm, x, need_normal_conn=True, field_step=step)
    return float(batch.normal_conn_sq[0])


# ---------------------------------------------------------------------------
# Laplace-Beltrami in divergence form


def laplace_beltrami(
    imm: Immersion,
    f: Callable[[np.ndarray], np.ndarray],
    x,
    step: float = DEFAULT_FIELD_STEP,
) -> float:
    """(1/sqrt det g) d_i( sqrt(det g) g^{ij} d_j f ) by nested differencing.

    ``f`` maps chart points (Q, n) to scalars (Q,).  Vanishing spectrum
    convention: constants map to zero, and on the unit round 2-sphere the
    degree-one coordinate restriction maps to -2 times itself.
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    n = imm.n

    def metric_parts(y):
        _, D1, _ = imm.jets_upto2(y)
        D = np.transpose(D1, (0, 2, 1))
        sig = imm.ambient.signature
        g = np.einsum("bix,x,bjx->bij", D, sig, D)
        return np.sqrt(np.linalg.det(g)), np.linalg.inv(g)

    def grad_f(y):
        Q = y.shape[0]
        out = np.empty((Q, n))
        for k in range(n):
            acc = np.zeros(Q)
            for off, cf in zip(_D1_OFFSETS, _D1_COEFFS):
                delta = np.zeros(n)
                delta[k] = off * step
                acc += cf * np.asarray(f(imm.chart.shift(y, delta)), dtype=float)
            out[:, k] = acc / step
        return out

    def flux(y):
        sq, ginv = metric_parts(y)
        df = grad_f(y)
        return sq[:, None] * np.einsum("bjk,bk->bj", ginv, df)

    div = 0.0
    for j in range(n):
        acc = 0.0
        for off, cf in zip(_D1_OFFSETS, _D1_COEFFS):
            delta = np.zeros(n)
            delta[j] = off * step
            acc = acc + cf * flux(imm.chart.shift(x, delta))[:, j]
        div = div + acc / step
    sq0, _ = metric_parts(x)
    return float(div[0] / sq0[0])


# ---------------------------------------------------------------------------
# intrinsic curvature and the Gauss-equation cross check


def _metric_field(imm: Immersion, pts: np.ndarray) -> np.ndarray:
    _, D1, _ = imm.jets_upto2(pts)
    D = np.transpose(D1, (0, 2, 1))
    sig = imm.ambient.signature
    g = np.einsum("bix,x,bjx->bij", D, sig, D)
    return 0.5 * (g + np.transpose(g, (0, 2, 1)))


def _christoffel(imm: Immersion, pts: np.ndarray, step: float) -> np.ndarray:
    """Gamma^l_{ij} at each point, from 4th-order differences of the metric."""
    pts = np.atleast_2d(pts)
    B, n = pts.shape
    dg = np.empty((B, n, n, n))      # dg[b, k, i, j] = d_k g_ij
    for k in range(n):
        acc = 0.0
        for off, cf in zip(_D1_OFFSETS, _D1_COEFFS):
            delta = np.zeros(n)
            delta[k] = off * step
            acc = acc + cf * _metric_field(imm, imm.chart.shift(pts, delta))
        dg[:, k] = acc / step
    g = _metric_field(imm, pts)
    ginv = np.linalg.inv(g)
    # sym[b, i, j, m] = d_i g_jm + d_j g_im - d_m g_ij
    sym = dg + dg.transpose(0, 2, 1, 3) - dg.transpose(0, 2, 3, 1)
    return 0.5 * np.einsum("blm,bijm->blij", ginv, sym)


def intrinsic_curvature(imm: Immersion, x, step: float = DEFAULT_FIELD_STEP) -> np.ndarray:
    """R_{ijkl} = <R(d_i, d_j) d_k, d_l> from the chart metric field only."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    n = imm.n
    dGamma = np.empty((1, n, n, n, n))   # [b, i, l, j, k] = d_i Gamma^l_jk
    for i in range(n):
        acc = 0.0
        for off, cf in zip(_D1_OFFSETS, _D1_COEFFS):
            delta = np.zeros(n)
            delta[i] = off * step
            acc = acc + cf * _christoffel(imm, imm.chart.shift(x, delta), step)
        dGamma[:, i] = acc / step
    Gam = _christoffel(imm, x, step)
    Rup = (
        np.transpose(dGamma, (0, 2, 1, 3, 4))                # [b, l, i, j, k] from d_i G^l_jk
        - np.transpose(dGamma, (0, 2, 3, 1, 4))              # minus d_j G^l_ik
        + np.einsum("blim,bmjk->blijk", Gam, Gam)
        - np.einsum("bljm,bmik->blijk", Gam, Gam)
    )
    g = _metric_field(imm, x)
    # R[b, i, j, k, l] = g_{lm} R^m_{ijk}
    R = np.einsum("blm,bmijk->bijkl", g, Rup)
    return R[0]


def gauss_check(imm: Immersion, x, step: float = DEFAULT_FIELD_STEP) -> float:
    """Max defect of the Gauss equation over orthonormal-frame 4-tuples.

    The intrinsic side comes from finite differences of the chart metric
    field (Christoffel route); the extrinsic side combines the ambient
    curvature with second-fundamental-form products.  A self-test of the
    pipeline, not a modeling quantity.
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    batch = shape_batch(imm, x)
    n = imm.n
    c = imm.ambient.c
    sig = imm.ambient.signature
    T = batch.T[0]
    Rcoord = intrinsic_curvature(imm, x, step)
    Rframe = np.einsum("ai,bj,ck,dl,ijkl->abcd", T, T, T, T, Rcoord)
    alpha = batch.alpha[0]
    pair = np.einsum("abx,x,cdx->abcd", alpha, sig, alpha)  # <alpha_ab, alpha_cd>
    eye = np.eye(n)
    rhs = c * (np.einsum("bc,ad->abcd", eye, eye) - np.einsum("ac,bd->abcd", eye, eye))
    rhs = rhs + np.einsum("adx,x,bcx->abcd", alpha, sig, alpha) - np.einsum(
        "acx,x,bdx->abcd", alpha, sig, alpha
    )
    return float(np.max(np.abs(Rframe - rhs)))
