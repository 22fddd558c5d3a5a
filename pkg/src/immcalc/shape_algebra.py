"""Pointwise operator algebra on shape-operator tuples.

Everything here is detached from any immersion: a tuple of symmetric
matrices (the shape operators in an implicit orthonormal normal frame)
with the trace constraints trace A_1 = h >= 0 and trace A_r = 0 for
r >= 2.  The module provides the quadratic form of Simons' inequality,
the space-form curvature operator on shape data, the algebraic
right-hand side of the Laplacian identity for the second fundamental
form, and the constrained maximization of the normalized cubic trace.

The cubic trace ratio trace(A_1 sum_j A_j^2) / ||alpha||^2 is unbounded
over the raw trace-constraint set once n >= 3 (stretch one eigenvalue of
A_1 against the others), so "its maximum" only makes sense on the
stationarity variety of the ratio, where the first-order identity

    trace(A_1 sum A_j^2) = h (||alpha||^2 + 2 ||A_1||^2) / (n + 2 h^2/||alpha||^2)

holds.  On that variety the ratio is algebraically bounded by 3h/n and
the bound is approached exactly when all A_r with r >= 2 vanish; the
maximizer below ascends the variety and reports those diagnostics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

TRACE_TOL = 1e-9


@dataclass
class ShapeTuple:
    """Symmetric shape operators A_1..A_p with the standard trace constraints."""

    n: int
    p: int
    A: np.ndarray          # (p, n, n) symmetric
    h: float               # = trace A_1 >= 0

    def __post_init__(self):
        A = np.asarray(self.A, dtype=float)
        if A.shape != (self.p, self.n, self.n):
            raise ValueError(f"A must have shape {(self.p, self.n, self.n)}")
        if np.max(np.abs(A - np.transpose(A, (0, 2, 1)))) > 1e-10:
            raise ValueError("shape operators must be symmetric")
        if self.h < 0:
            raise ValueError("h must be >= 0")
        if abs(np.trace(A[0]) - self.h) > TRACE_TOL * max(1.0, abs(self.h)):
            raise ValueError("trace A_1 != h")
        for r in range(1, self.p):
            if abs(np.trace(A[r])) > TRACE_TOL:
                raise ValueError(f"trace A_{r + 1} != 0")
        object.__setattr__(self, "A", A)

    @property
    def alpha_sq(self) -> float:
        return float(np.einsum("rij,rij->", self.A, self.A))

    @property
    def a1_sq(self) -> float:
        return float(np.einsum("ij,ij->", self.A[0], self.A[0]))


def random_shape_tuple(rng: np.random.Generator, n: int, p: int, h: Optional[float] = None) -> ShapeTuple:
    """Standard-normal symmetric entries, traces projected onto the constraints."""
    G = rng.standard_normal((p, n, n))
    A = 0.5 * (G + np.transpose(G, (0, 2, 1)))
    for r in range(1, p):
        A[r] -= np.trace(A[r]) / n * np.eye(n)
    t = np.trace(A[0])
    if h is None:
        if t < 0:
            A[0] = -A[0]
            t = -t
        h = float(t)
    else:
        A[0] += (h - t) / n * np.eye(n)
    return ShapeTuple(n=n, p=p, A=A, h=float(h))


# ---------------------------------------------------------------------------
# Simons' quadratic form


def simons_quadratic_batch(A: np.ndarray) -> np.ndarray:
    """<A o Atilde + Lambda o A, A> for a batch (B, p, n, n) of tuples.

    Equals sum_{r,s} (trace A_r A_s)^2 + sum_{r,s} ||[A_r, A_s]||_F^2,
    which is nonnegative; the commutator convention is fixed so both
    summands are sums of squares.
    """
    A = np.asarray(A, dtype=float)
    G = np.einsum("bpij,bqij->bpq", A, A)
    term1 = np.einsum("bpq,bpq->b", G, G)
    P = np.einsum("bpij,bqjk->bpqik", A, A)
    comm = P - np.transpose(P, (0, 2, 1, 3, 4))
    term2 = np.einsum("bpqik,bpqik->b", comm, comm)
    return term1 + term2


def simons_quadratic(t: ShapeTuple) -> float:
    return float(simons_quadratic_batch(t.A[None])[0])


def simons_bound(t_or_alpha_sq, p: Optional[int] = None) -> float:
    """(2 - 1/p) ||A||^4, the right side of Simons' inequality."""
    if isinstance(t_or_alpha_sq, ShapeTuple):
        return (2.0 - 1.0 / t_or_alpha_sq.p) * t_or_alpha_sq.alpha_sq**2
    return (2.0 - 1.0 / p) * float(t_or_alpha_sq) ** 2


# ---------------------------------------------------------------------------
# curvature operator and the Laplacian right-hand side


def curvature_term(t: ShapeTuple, c: float, w_index: int) -> np.ndarray:
    """Space-form curvature operator on shape data in normal direction w_index.

    Returns c n (A_r - (2/n) <H, nu_r> Id); with the adapted frame the
    inner product is h for r = 1 and zero otherwise.  ``w_index`` is
    1-based to match the frame labels nu_1..nu_p.
    """
    if not (1 <= w_index <= t.p):
        raise ValueError("w_index out of range")
    r = w_index - 1
    out = c * t.n * t.A[r].copy()
    if r == 0:
        out -= 2.0 * c * t.h * np.eye(t.n)
    return out


def form_laplacian_rhs(t: ShapeTuple, c: float, hessian_H: Optional[np.ndarray] = None) -> np.ndarray:
    """Algebraic right side of the Laplacian identity for the second
    fundamental form in a space form, per normal direction: (p, n, n).

    ``hessian_H`` supplies the second-derivative term of the mean
    curvature vector (zero in the covariantly-constant-H regime).  The
    composition with A_H is realized as the symmetrized product, which is
    the matrix of the bilinear form (X, Y) -> <A_W Y, A_H X>.  For
    parallel second fundamental forms of minimal tuples the result is the
    zero list.
    """
    A = t.A
    p, n = t.p, t.n
    G = np.einsum("rij,sij->rs", A, A)
    a_tilde = np.einsum("rs,sij->rij", G, A)
    lam = np.zeros_like(A)
    for r in range(p):
        for j in range(p):
            inner = A[j] @ A[r] - A[r] @ A[j]
            lam[r] += A[j] @ inner - inner @ A[j]
    out = -(a_tilde + lam)
    out += c * n * A
    out[0] -= c * t.h * np.eye(n)
    if hessian_H is not None:
        out = out + np.asarray(hessian_H, dtype=float)
    A_H = t.h * A[0]
    out += 0.5 * (np.einsum("ij,rjk->rik", A_H, A) + np.einsum("rij,jk->rik", A, A_H))
    return out


# ---------------------------------------------------------------------------
# the normalized cubic trace and its constrained maximization


def cubic_trace_numerator(A: np.ndarray) -> float:
    """trace(A_1 sum_j A_j^2)."""
    Asum = np.einsum("rij,rjk->ik", A, A)
    return float(np.einsum("ij,ji->", A[0], Asum))


def cubic_trace_ratio(t: ShapeTuple) -> float:
    """trace(A_1 sum_j A_j^2) / ||alpha||^2, extended by 0 at the origin.

    Degree-1 homogeneous in the tuple.
    """
    S = t.alpha_sq
    if S == 0.0:
        return 0.0
    return cubic_trace_numerator(t.A) / S


def stationarity_defect(t: ShapeTuple) -> float:
    """Relative defect of the first-order identity of the constrained ratio."""
    S = t.alpha_sq
    if S == 0.0:
        return 0.0
    N = cubic_trace_numerator(t.A)
    rhs = t.h * (S + 2.0 * t.a1_sq) / (t.n + 2.0 * t.h**2 / S)
    return abs(N - rhs) / max(1e-300, abs(rhs))


def _ray_polynomial(n, p, h, B):
    """Coefficients (c0, c1, c3) of the stationarity cubic along U + lambda B.

    U is the umbilic base tuple ((h/n) Id, 0, ..., 0) and B carries
    traceless slots.  The identity along the ray reduces to
    c3 lam^3 + c1 lam + c0 = 0 with

        c0 = 4 h^3 b1 / n,   c1 = 3 h^2 gамma,   c3 = n b gamma,

    where b1 = ||B_1||^2, b = sum ||B_r||^2 and gamma is the cubic trace
    of B.  (The quadratic coefficient cancels identically.)
    """
    b1 = float(np.einsum("ij,ij->", B[0], B[0]))
    b = float(np.einsum("rij,rij->", B, B))
    gamma = cubic_trace_numerator(B)
    c0 = 4.0 * h**3 * b1 / n
    c1 = 3.0 * h**2 * gamma
    c3 = n * b * gamma
    return c0, c1, c3, b1, b, gamma


def _depressed_cubic_roots(c3, c1, c0):
    """Real roots of c3 x^3 + c1 x + c0 = 0 (c3 may be ~0), vectorized."""
    c3 = np.atleast_1d(np.asarray(c3, dtype=float))
    c1 = np.atleast_1d(np.asarray(c1, dtype=float))
    c0 = np.atleast_1d(np.asarray(c0, dtype=float))
    roots = np.full(c3.shape + (3,), np.nan)
    lin = np.abs(c3) < 1e-300
    ok_lin = lin & (np.abs(c1) > 1e-300)
    if np.any(ok_lin):
        roots[ok_lin, 0] = -c0[ok_lin] / c1[ok_lin]
    cub = ~lin
    safe = np.where(cub, c3, 1.0)
    p = np.where(cub, c1 / safe, 0.0)
    q = np.where(cub, c0 / safe, 0.0)
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    one = cub & (disc > 0)
    if np.any(one):
        s = np.sqrt(disc[one])
        roots[one, 0] = np.cbrt(-q[one] / 2.0 + s) + np.cbrt(-q[one] / 2.0 - s)
    three = cub & (disc <= 0)
    if np.any(three):
        pm = p[three]
        qm = q[three]
        m = 2.0 * np.sqrt(np.maximum(-pm / 3.0, 1e-300))
        denom = np.where(np.abs(pm * m) > 1e-300, pm * m, 1e-300)
        arg = np.clip(3.0 * qm / denom, -1.0, 1.0)
        theta = np.arccos(arg) / 3.0
        for k in range(3):
            roots[three, k] = m * np.cos(theta - 2.0 * math.pi * k / 3.0)
    return roots


def _umbilic_tuple(n, p, h):
    A = np.zeros((p, n, n))
    A[0] = (h / n) * np.eye(n)
    return A


def _project_traces(B):
    out = B.copy()
    n = B.shape[-1]
    for r in range(B.shape[0]):
        out[r] -= np.trace(out[r]) / n * np.eye(n)
    return out


def _project_to_variety(n, p, h, A, prefer=1.0):
    """Pull a trace-feasible tuple onto the stationarity variety along the
    ray through the umbilic base; returns (tuple, lambda) or None."""
    U = _umbilic_tuple(n, p, h)
    B = A - U
    c0, c1, c3, b1, b, gamma = _ray_polynomial(n, p, h, B)
    if b < 1e-30 or b1 < 1e-30:
        return U + B, 1.0  # umbilic A_1: the identity holds for any lambda
    lams = _depressed_cubic_roots(np.array(c3), np.array(c1), np.array(c0))
    lams = lams[np.isfinite(lams)]
    lams = lams[np.abs(lams) > 1e-12]
    if lams.size == 0:
        return None
    lam = lams[np.argmin(np.abs(lams - prefer))]
    return U + lam * B, float(lam)


def _ratio_gradient(A, h):
    """Trace-projected Euclidean gradient of the ratio at tuple A."""
    p, n, _ = A.shape
    Asum = np.einsum("rij,rjk->ik", A, A)
    N = float(np.einsum("ij,ji->", A[0], Asum))
    S = float(np.einsum("rij,rij->", A, A))
    dN = np.empty_like(A)
    dN[0] = Asum + 2.0 * A[0] @ A[0]
    for r in range(1, p):
        dN[r] = A[0] @ A[r] + A[r] @ A[0]
    grad = (dN * S - N * 2.0 * A) / S**2
    return _project_traces(grad), N / S


@dataclass
class RatioMaximizerResult:
    tuple: ShapeTuple
    value: float
    identity_defect: float
    alpha_gap: float          # ||alpha||^2 - ||A_1||^2 at the maximizer
    converged: bool
    starts: int
    best_trace: list = field(default_factory=list)


def maximize_cubic_trace_ratio(
    n: int,
    p: int,
    h: float,
    trials: int = 64,
    steps: int = 400,
    seed: int = 0,
) -> RatioMaximizerResult:
    """Multi-start projected-gradient ascent of the cubic trace ratio.

    Iterates stay on the trace constraints and are re-projected onto the
    stationarity variety after every step (the raw constraint set has
    non-compact directions of unbounded ratio for n >= 3; on the variety
    the ratio is bounded by 3h/n <= 3h/2).  Among equal maxima the tuple
    with the smallest ||alpha||^2 - ||A_1||^2 is reported, surfacing the
    equality case in which every A_r with r >= 2 vanishes.
    """
    if n < 2 or p < 1 or h <= 0:
        raise ValueError("need n >= 2, p >= 1, h > 0")
    rng = np.random.default_rng(seed)
    U = _umbilic_tuple(n, p, h)
    best = (cubic_trace_numerator(U) / float(np.einsum("rij,rij->", U, U)), 0.0, U, True)

    for trial in range(trials):
        B = _project_traces(rng.standard_normal((p, n, n)))
        B = 0.5 * (B + np.transpose(B, (0, 2, 1)))
        if trial % 4 == 0:
            B[1:] = 0.0  # seed the equality-case stratum as well
        proj = _project_to_variety(n, p, h, U + B)
        if proj is None:
            proj = _project_to_variety(n, p, h, U - B)
            if proj is None:
                continue
        A, _ = proj
        grad, val = _ratio_gradient(A, h)
        eta = 0.5
        converged = False
        for _ in range(steps):
            gn = float(np.sqrt(np.einsum("rij,rij->", grad, grad)))
            if gn == 0.0:
                converged = True
                break
            stepped = False
            while eta > 1e-14:
                cand = _project_to_variety(n, p, h, A + eta * grad / max(gn, 1e-300), prefer=1.0)
                if cand is not None:
                    cval = cubic_trace_numerator(cand[0]) / float(
                        np.einsum("rij,rij->", cand[0], cand[0])
                    )
                    if cval > val + 1e-15:
                        A = cand[0]
                        val = cval
                        grad, _ = _ratio_gradient(A, h)
                        eta = min(eta * 2.0, 1e6)
                        stepped = True
                        break
                eta *= 0.5
            if not stepped:
                converged = True
                break
        S = float(np.einsum("rij,rij->", A, A))
        S1 = float(np.einsum("ij,ij->", A[0], A[0]))
        key = (val, -(S - S1))
        if key > (best[0], -(best[1])):
            best = (val, S - S1, A, converged)

    val, gap, A, converged = best
    t = ShapeTuple(n=n, p=p, A=A, h=h)
    return RatioMaximizerResult(
        tuple=t,
        value=val,
        identity_defect=stationarity_defect(t),
        alpha_gap=gap,
        converged=converged,
        starts=trials,
    )


def random_search_cubic_ratio(
    n: int, p: int, h: float, samples: int, seed: int = 0, chunk: int = 100_000
):
    """Best ratio over random tuples projected onto the stationarity variety.

    Returns (best value, number of feasible samples).  Directions whose
    ray through the umbilic base never meets the variety are skipped.
    """
    rng = np.random.default_rng(seed)
    best = -np.inf
    feasible = 0
    done = 0
    U = _umbilic_tuple(n, p, h)
    while done < samples:
        m = min(chunk, samples - done)
        done += m
        G = rng.standard_normal((m, p, n, n))
        B = 0.5 * (G + np.transpose(G, (0, 1, 3, 2)))
        tr = np.einsum("brii->br", B) / n
        B -= tr[:, :, None, None] * np.eye(n)[None, None]
        b1 = np.einsum("bij,bij->b", B[:, 0], B[:, 0])
        b = np.einsum("brij,brij->b", B, B)
        Bsum = np.einsum("brij,brjk->bik", B, B)
        gamma = np.einsum("bij,bji->b", B[:, 0], Bsum)
        c0 = 4.0 * h**3 * b1 / n
        c1 = 3.0 * h**2 * gamma
        c3 = n * b * gamma
        lams = _depressed_cubic_roots(c3, c1, c0)      # (m, 3)
        ok = np.isfinite(lams) & (np.abs(lams) > 1e-12)
        if not np.any(ok):
            continue
        lam = np.where(ok, lams, 0.0)
        # polynomial values of N and S along each ray
        a0 = h**3 / n**2
        a2 = (h / n) * (3.0 * b1 + (b - b1))
        Nv = a0 + a2[:, None] * lam**2 + gamma[:, None] * lam**3
        Sv = h**2 / n + b[:, None] * lam**2
        vals = np.where(ok, Nv / Sv, -np.inf)
        feasible += int(np.count_nonzero(np.any(ok, axis=1)))
        best = max(best, float(np.max(vals)))
    if not np.isfinite(best):
        # no sampled ray met the variety: the umbilic base itself is feasible
        best = cubic_trace_numerator(U) / float(np.einsum("rij,rij->", U, U))
    return best, feasible
