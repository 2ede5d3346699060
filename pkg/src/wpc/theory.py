"""Entropy utilities, the information-embedding capacity envelope, the
entropy-constrained tilted-distribution solver, the decoding-condition
certifier, and an empirical check of the coset-intersection bound."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq
from scipy.special import expit

from .channels import ChannelModel
from .gf2 import BitVec, sample_full_rank

__all__ = [
    "hb",
    "hb_inv",
    "CapacityCurve",
    "capacity_embedding",
    "tilt",
    "TiltSolution",
    "tilt_solve",
    "DecodingConditionReport",
    "check_decoding_condition",
    "LemmaCheckReport",
    "lemma_intersection_check",
    "check_decoding_condition_grid",
    "mutual_information",
    "best_input_bias",
]

_LN2 = math.log(2.0)


def hb(phi, psi=None):
    """Binary cross entropy -phi log2 psi - (1-phi) log2 (1-psi), with the
    0 log 0 = 0 convention; hb(phi) alone is the binary entropy."""
    if psi is None:
        psi = phi
    phi_a = np.asarray(phi, dtype=np.float64)
    psi_a = np.asarray(psi, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        t1 = np.where(phi_a > 0.0, -phi_a * np.log2(psi_a), 0.0)
        t2 = np.where(phi_a < 1.0, -(1.0 - phi_a) * np.log2(1.0 - psi_a), 0.0)
    out = t1 + t2
    if np.isscalar(phi) and np.isscalar(psi):
        return float(out)
    return out


def hb_inv(target: float) -> float:
    """Unique preimage of the binary entropy in [0, 1/2]."""
    if not 0.0 <= target <= 1.0:
        raise ValueError("target must lie in [0, 1]")
    if target == 0.0:
        return 0.0
    if target == 1.0:
        return 0.5
    return float(brentq(lambda x: hb(x) - target, 0.0, 0.5, xtol=1e-15, rtol=8.9e-16))


def tilt(r, lam: float):
    """Exponential tilt r^lam / (r^lam + (1-r)^lam), computed stably."""
    r_a = np.asarray(r, dtype=np.float64)
    if lam == 0.0:
        out = np.full_like(r_a, 0.5)
    else:
        with np.errstate(divide="ignore"):
            logit = np.log(r_a) - np.log1p(-r_a)
        out = expit(lam * logit)
    if np.isscalar(r):
        return float(out)
    return out


# ----------------------------------------------------------------- capacity


@dataclass(frozen=True)
class CapacityCurve:
    """g(D) and its upper concave envelope for binary-Hamming embedding."""

    beta: float
    d_grid: np.ndarray
    g: np.ndarray
    envelope: np.ndarray
    d_star: float
    slope: float
    tangency_residual: float


def _embedding_g(d, beta: float):
    d_a = np.asarray(d, dtype=np.float64)
    out = np.where(d_a < beta, 0.0, hb(np.clip(d_a, 1e-300, 0.5)) - hb(beta))
    return out


def capacity_embedding(beta: float, d_grid) -> CapacityCurve:
    """Capacity of binary-Hamming information embedding over BSC(beta):
    the upper concave envelope of g(D) = max(H(D) - H(beta), 0) on [0, 1/2],
    realised by the tangent line from the origin up to the tangency point."""
    if not 0.0 < beta < 0.5:
        raise ValueError("beta must lie in (0, 1/2)")
    d_grid = np.asarray(d_grid, dtype=np.float64)
    if d_grid.ndim != 1 or d_grid.size == 0:
        raise ValueError("need a non-empty grid of D values")
    if np.any(d_grid < 0.0) or np.any(d_grid > 0.5):
        raise ValueError("D values must lie in [0, 1/2]")

    def tangency(d):
        return math.log2((1.0 - d) / d) * d - (hb(d) - hb(beta))

    d_star = float(brentq(tangency, beta + 1e-12, 0.5 - 1e-12, xtol=1e-14))
    slope = math.log2((1.0 - d_star) / d_star)
    residual = abs(slope * d_star - (hb(d_star) - hb(beta)))

    g = _embedding_g(d_grid, beta)
    envelope = np.where(d_grid <= d_star, slope * d_grid, g)
    return CapacityCurve(beta, d_grid, g, envelope, d_star, slope, residual)


# --------------------------------------------------------------- tilt solve


def _largest_feasible(f, target: float, cap: float, iters: int = 100) -> float:
    """Largest lam in [0, cap] with f(lam) >= target, for decreasing f with
    f(0) >= target.  Plain bisection keeps the returned point feasible even
    when hard biases make f jump at 0."""
    lo, hi = 0.0, cap
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if f(mid) >= target:
            lo = mid
        else:
            hi = mid
    return lo


def _dot0(weights, values) -> float:
    """Probability-weighted sum with the 0 * inf = 0 convention."""
    w = np.asarray(weights, dtype=np.float64)
    v = np.asarray(values, dtype=np.float64)
    with np.errstate(invalid="ignore"):
        terms = np.where(w > 0.0, w * v, 0.0)
    return float(np.sum(terms))


def _expect_over_q(spec, f) -> float:
    """E[f(Q)] for a parity-bias distribution: exact atoms plus adaptive
    quadrature over the unit-density pieces."""
    total = 0.0
    for value, mass in spec.atoms():
        if mass > 0.0:
            total += mass * f(value)
    for a, b in spec.uniform_pieces():
        if b > a:
            val, _ = quad(f, a, b, epsabs=1e-12, epsrel=1e-12, limit=200)
            total += val
    return total


@dataclass(frozen=True)
class TiltSolution:
    """Minimizer of E[Hb(X, p_e(S))] + (1-R) E[Hb(V, Q)] under the entropy
    constraint, parameterised by the tilt exponent lam."""

    lam: float
    p_x1_given_s: np.ndarray
    objective: float
    constraint_value: float
    slack: float
    saturated: bool
    q_support: np.ndarray | None = None
    q_masses: np.ndarray | None = None
    p_v1_given_q: np.ndarray | None = None


def tilt_solve(p_e, p_s, spec, rate: float, lam_cap: float = 1e6) -> TiltSolution:
    """Solve the constrained cross-entropy minimisation by choosing the tilt
    exponent so the entropy constraint H(X|S) + (1-R) H(V|Q) = 1 binds.

    The constraint is decreasing in lam; a cap with a saturation flag covers
    configurations where even the hard tilt leaves it slack.
    """
    p_e = np.asarray(p_e, dtype=np.float64)
    p_s = np.asarray(p_s, dtype=np.float64)
    if p_e.shape != p_s.shape:
        raise ValueError("p_e and P_S must have matching shapes")
    if not 0.0 < rate < 1.0:
        raise ValueError("rate must lie in (0, 1)")

    def constraint(lam: float) -> float:
        hx = _dot0(p_s, hb(tilt(p_e, lam)))
        hv = _expect_over_q(spec, lambda qv: hb(tilt(qv, lam)))
        return hx + (1.0 - rate) * hv

    g0 = constraint(0.0)
    if g0 < 1.0 - 1e-12:
        raise ValueError("constraint unsatisfiable even at the uniform tilt")
    saturated = False
    if constraint(lam_cap) > 1.0:
        lam = lam_cap
        saturated = True
    else:
        lam = _largest_feasible(constraint, 1.0, lam_cap)

    px = tilt(p_e, lam)
    objective = _dot0(p_s, hb(px, p_e)) + (1.0 - rate) * _expect_over_q(
        spec, lambda qv: hb(tilt(qv, lam), qv)
    )
    cval = constraint(lam)

    q_support = q_masses = p_v1 = None
    atoms = spec.atoms()
    if not spec.uniform_pieces() and atoms:
        q_support = np.array([a for a, _ in atoms])
        q_masses = np.array([m for _, m in atoms])
        p_v1 = tilt(q_support, lam)

    return TiltSolution(
        lam=lam,
        p_x1_given_s=np.atleast_1d(px),
        objective=objective,
        constraint_value=cval,
        slack=cval - 1.0,
        saturated=saturated,
        q_support=q_support,
        q_masses=q_masses,
        p_v1_given_q=p_v1,
    )


# ------------------------------------------------- decoding condition check


@dataclass(frozen=True)
class DecodingConditionReport:
    margin: float
    lam_star: float
    lhs_min: float
    rhs: float
    certified: bool
    saturated: bool
    method: str = "tilted-family"
    grid_lambdas: np.ndarray | None = None
    grid_constraint: np.ndarray | None = None
    grid_objective: np.ndarray | None = None

    def summary(self) -> str:
        status = "certified on tilted family" if self.certified else "not certified"
        return (
            f"margin={self.margin:.6g} lam_star={self.lam_star:.6g} "
            f"lhs_min={self.lhs_min:.6g} rhs={self.rhs:.6g} [{status}]"
        )


def check_decoding_condition(
    p_d,
    channel: ChannelModel,
    p_s,
    p_x1_given_s,
    spec,
    rate: float,
    lam_grid=None,
    lam_cap: float = 1e6,
) -> DecodingConditionReport:
    """Certify the decoder-side strict-inequality condition on the tilted
    (Lagrangian-optimal) family of competitor distributions.

    Minimises E[Hb(X~, p_d(Y))] + (1-R) E[Hb(V~, Q)] over exponentially
    tilted competitors subject to H(X~|Y) + (1-R) H(V~|Q) >= 1 - R and
    reports the gap to the true-distribution value.  A positive margin
    certifies the condition on the searched family.
    """
    p_d = np.asarray(p_d, dtype=np.float64)
    p_s = np.asarray(p_s, dtype=np.float64)
    px1 = np.asarray(p_x1_given_s, dtype=np.float64)
    table = channel.table
    n_s, _, n_y = table.shape
    if p_d.shape != (n_y,):
        raise ValueError("p_d must give P(X=1|y) for every output symbol")
    if p_s.shape != (n_s,) or px1.shape != (n_s,):
        raise ValueError("state arrays must match the channel state alphabet")

    pxs = np.stack([(1.0 - px1) * p_s, px1 * p_s], axis=1)  # (s, x)
    pxy = np.einsum("sx,sxy->xy", pxs, table)  # (x, y)
    p_y = pxy.sum(axis=0)

    rhs = _dot0(pxy[1], hb(1.0, p_d)) + _dot0(pxy[0], hb(0.0, p_d))
    rhs += (1.0 - rate) * _expect_over_q(spec, lambda qv: hb(qv))

    def h_side(lam: float) -> float:
        hx = _dot0(p_y, hb(tilt(p_d, lam)))
        hv = _expect_over_q(spec, lambda qv: hb(tilt(qv, lam)))
        return hx + (1.0 - rate) * hv

    def objective(lam: float) -> float:
        sx = tilt(p_d, lam)
        ox = _dot0(p_y, hb(sx, p_d))
        ov = _expect_over_q(spec, lambda qv: hb(tilt(qv, lam), qv))
        return ox + (1.0 - rate) * ov

    target = 1.0 - rate
    saturated = False
    if h_side(lam_cap) >= target:
        lam_star = lam_cap
        saturated = True
    else:
        lam_star = _largest_feasible(h_side, target, lam_cap)

    lhs_min = objective(lam_star)
    margin = lhs_min - rhs

    gl = gc = go = None
    if lam_grid is not None:
        gl = np.asarray(lam_grid, dtype=np.float64)
        gc = np.array([h_side(t) for t in gl])
        go = np.array([objective(t) for t in gl])

    return DecodingConditionReport(
        margin=margin,
        lam_star=lam_star,
        lhs_min=lhs_min,
        rhs=rhs,
        certified=bool(margin > 0.0),
        saturated=saturated,
        grid_lambdas=gl,
        grid_constraint=gc,
        grid_objective=go,
    )


def check_decoding_condition_grid(
    p_d,
    channel: ChannelModel,
    p_s,
    p_x1_given_s,
    spec,
    rate: float,
    mesh: int = 13,
) -> DecodingConditionReport:
    """Exhaustive coarse-grid variant of the decoding-condition check.

    Meshes every competitor conditional pmf P(X~=1|y) and P(V~=1|q) on a
    uniform grid instead of restricting to the tilted family.  Exponential in
    |Y| plus the number of parity-bias atoms, so only tiny supports are
    accepted; the spec must be purely atomic.
    """
    p_d = np.asarray(p_d, dtype=np.float64)
    p_s = np.asarray(p_s, dtype=np.float64)
    px1 = np.asarray(p_x1_given_s, dtype=np.float64)
    atoms = spec.atoms()
    if spec.uniform_pieces():
        raise ValueError("grid search needs a finite-support parity bias")
    n_y = channel.table.shape[2]
    dims = n_y + len(atoms)
    if dims > 6:
        raise ValueError("grid search limited to at most 6 free pmfs")

    pxs = np.stack([(1.0 - px1) * p_s, px1 * p_s], axis=1)
    pxy = np.einsum("sx,sxy->xy", pxs, channel.table)
    p_y = pxy.sum(axis=0)
    rhs = _dot0(pxy[1], hb(1.0, p_d)) + _dot0(pxy[0], hb(0.0, p_d))
    rhs += (1.0 - rate) * sum(m * hb(q) for q, m in atoms)

    q_vals = np.array([q for q, _ in atoms])
    q_mass = np.array([m for _, m in atoms])
    grid = np.linspace(0.0, 1.0, mesh)
    axes = np.meshgrid(*([grid] * dims), indexing="ij")
    flat = np.stack([a.ravel() for a in axes], axis=1)
    ty = flat[:, :n_y]
    tv = flat[:, n_y:]

    h_side = (hb(ty) @ p_y) + (1.0 - rate) * (hb(tv) @ q_mass)
    with np.errstate(divide="ignore", invalid="ignore"):
        obj_y = np.where(ty > 0, -ty * np.log2(p_d), 0.0) + np.where(
            ty < 1, -(1.0 - ty) * np.log2(1.0 - p_d), 0.0
        )
        obj_v = np.where(tv > 0, -tv * np.log2(q_vals), 0.0) + np.where(
            tv < 1, -(1.0 - tv) * np.log2(1.0 - q_vals), 0.0
        )
    lhs = obj_y @ p_y + (1.0 - rate) * (obj_v @ q_mass)
    feasible = h_side >= 1.0 - rate
    if not feasible.any():
        raise ValueError("no feasible grid point")
    lhs_min = float(np.min(lhs[feasible]))
    margin = lhs_min - rhs
    return DecodingConditionReport(
        margin=margin,
        lam_star=float("nan"),
        lhs_min=lhs_min,
        rhs=rhs,
        certified=bool(margin > 0.0),
        saturated=False,
        method="grid",
    )


# ------------------------------------------------------- intersection lemma


@dataclass(frozen=True)
class LemmaCheckReport:
    theta: float
    bound: float
    applicable: bool
    precondition_ok: bool
    empirical_probability: float
    samples: int
    empty_count: int

    def summary(self) -> str:
        return (
            f"theta={self.theta:.6g} bound={self.bound:.6g} "
            f"applicable={self.applicable} precondition={self.precondition_ok} "
            f"empirical={self.empirical_probability:.6g} samples={self.samples}"
        )


def _as_vector_codes(vectors, n: int) -> np.ndarray:
    codes = set()
    for v in vectors:
        val = v.value if isinstance(v, BitVec) else int(v)
        if not 0 < val < (1 << n):
            raise ValueError("set elements must be nonzero n-bit vectors")
        codes.add(val)
    return np.array(sorted(codes), dtype=np.int64)


def lemma_intersection_check(
    n: int,
    set_a,
    set_b,
    samples: int,
    rng: np.random.Generator,
) -> LemmaCheckReport:
    """Monte-Carlo estimate of P(A intersect HB = empty) over uniformly
    random full-rank H, against the closed-form bound (1 + ln t)/t with
    t = log2(|A||B|/n) - n - 1 (flagged inapplicable when t <= 1)."""
    a_codes = _as_vector_codes(set_a, n)
    b_codes = _as_vector_codes(set_b, n)
    theta = math.log2(len(a_codes) * len(b_codes) / n) - n - 1
    applicable = theta > 1.0
    bound = (1.0 + math.log(theta)) / theta if applicable else math.inf
    precondition_ok = applicable and (
        math.log(theta) / theta >= len(a_codes) / (1 << n)
    )

    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    b_bits = ((b_codes[:, None] >> shifts) & 1).astype(np.int64)
    pow2 = (1 << shifts).astype(np.int64)

    empties = 0
    for _ in range(samples):
        fr = sample_full_rank(n, rng)
        harr = fr.h.to_array().astype(np.int64)
        hb_codes = (((b_bits @ harr.T) & 1) * pow2).sum(axis=1)
        idx = np.searchsorted(a_codes, hb_codes)
        idx[idx == len(a_codes)] = len(a_codes) - 1
        if not np.any(a_codes[idx] == hb_codes):
            empties += 1

    return LemmaCheckReport(
        theta=theta,
        bound=bound,
        applicable=applicable,
        precondition_ok=precondition_ok,
        empirical_probability=empties / samples,
        samples=samples,
        empty_count=empties,
    )


# ----------------------------------------------------------- input bias


def mutual_information(ch: ChannelModel, states, px1: float) -> float:
    """I(X;Y) in bits for input Bern(px1) over the state-marginalised channel."""
    pyx = np.einsum("s,sxy->xy", np.asarray(states.pmf, dtype=np.float64), ch.table)
    px = np.array([1.0 - px1, px1])
    py = px @ pyx
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(pyx > 0.0, np.log2(pyx / py), 0.0)
    return _dot0(px[:, None] * pyx, ratio)


def best_input_bias(ch: ChannelModel, states) -> float:
    """Capacity-achieving P(X=1) by one-dimensional maximisation."""
    from scipy.optimize import minimize_scalar

    res = minimize_scalar(
        lambda p: -mutual_information(ch, states, p),
        bounds=(1e-9, 1.0 - 1e-9),
        method="bounded",
        options={"xatol": 1e-12},
    )
    return float(res.x)
