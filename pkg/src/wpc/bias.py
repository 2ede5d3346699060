"""Parity-bias distributions: the threshold / constant / linear /
threshold-linear families, explicit value lists, the exact nested-code
special case, their CDFs, the derandomized quantile rule, and calibration
of each family to a target expected binary entropy."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .theory import hb, hb_inv

__all__ = [
    "Threshold",
    "Constant",
    "Linear",
    "ThresholdLinear",
    "Explicit",
    "NestedExact",
    "cdf",
    "quantile_vector",
    "expected_hb",
    "calibrate",
    "sample_iid",
    "parse_spec",
]

_LN2 = math.log(2.0)
LINEAR_EXPECTED_HB = 1.0 / (2.0 * _LN2)


def _entropy_antideriv(t: float) -> float:
    # int_0^t -u log2 u du
    if t <= 0.0:
        return 0.0
    return t * t * (1.0 - 2.0 * math.log(t)) / (4.0 * _LN2)


def entropy_integral(a: float, b: float) -> float:
    """int_a^b Hb(t) dt in closed form via the antiderivative of -t log2 t."""

    def j(t: float) -> float:
        return _entropy_antideriv(t) + _entropy_antideriv(1.0) - _entropy_antideriv(1.0 - t)

    return j(b) - j(a)


def _step_cdf(atoms, pieces, t: float) -> float:
    if t < 0.0:
        return 0.0
    total = 0.0
    for value, mass in atoms:
        if value <= t:
            total += mass
    for a, b in pieces:
        if t > a:
            total += min(t, b) - a
    return min(total, 1.0)


@dataclass(frozen=True)
class Threshold:
    """Atoms at 0, 1/2 and 1; essentially the nested linear code."""

    gamma: float
    family = "threshold"
    is_symmetric = True

    def __post_init__(self):
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError("gamma must lie in [0, 1]")

    def atoms(self):
        a = (1.0 - self.gamma) / 2.0
        out = []
        if a > 0.0:
            out.append((0.0, a))
        if self.gamma > 0.0:
            out.append((0.5, self.gamma))
        if a > 0.0:
            out.append((1.0, a))
        return out

    def uniform_pieces(self):
        return []

    def cdf(self, t: float) -> float:
        return _step_cdf(self.atoms(), [], t)

    def quantile(self, u: float) -> float:
        a = (1.0 - self.gamma) / 2.0
        if u <= a:
            return 0.0
        if u <= 1.0 - a:
            return 0.5
        return 1.0

    def expected_hb(self) -> float:
        return self.gamma

    def label(self) -> str:
        return f"threshold:gamma={self.gamma:.10g}"


@dataclass(frozen=True)
class Constant:
    """Half the mass at c, half at 1-c."""

    c: float
    family = "constant"
    is_symmetric = True

    def __post_init__(self):
        if not 0.0 <= self.c <= 0.5:
            raise ValueError("c must lie in [0, 1/2]")

    def atoms(self):
        if self.c == 0.5:
            return [(0.5, 1.0)]
        return [(self.c, 0.5), (1.0 - self.c, 0.5)]

    def uniform_pieces(self):
        return []

    def cdf(self, t: float) -> float:
        return _step_cdf(self.atoms(), [], t)

    def quantile(self, u: float) -> float:
        return self.c if u <= 0.5 else 1.0 - self.c

    def expected_hb(self) -> float:
        return float(hb(self.c))

    def label(self) -> str:
        return f"constant:c={self.c:.10g}"


@dataclass(frozen=True)
class Linear:
    """Uniform on [0, 1]; universal but not capacity-calibrated."""

    family = "linear"
    is_symmetric = True

    def atoms(self):
        return []

    def uniform_pieces(self):
        return [(0.0, 1.0)]

    def cdf(self, t: float) -> float:
        return min(max(t, 0.0), 1.0)

    def quantile(self, u: float) -> float:
        return u

    def expected_hb(self) -> float:
        return LINEAR_EXPECTED_HB

    def label(self) -> str:
        return "linear"


@dataclass(frozen=True)
class ThresholdLinear:
    """Uniform in the middle with the tails collapsed: for theta >= 0 the
    outer theta/2 of mass sits exactly on {0, 1}; for theta < 0 it piles on
    the interior points |theta|/2 and 1 - |theta|/2."""

    theta: float
    family = "threshold-linear"
    is_symmetric = True

    def __post_init__(self):
        if not -1.0 <= self.theta <= 1.0:
            raise ValueError("theta must lie in [-1, 1]")

    def atoms(self):
        a = abs(self.theta) / 2.0
        if a == 0.0:
            return []
        if self.theta > 0.0:
            return [(0.0, a), (1.0, a)]
        return [(a, a), (1.0 - a, a)]

    def uniform_pieces(self):
        a = abs(self.theta) / 2.0
        if a >= 0.5:
            return []
        return [(a, 1.0 - a)]

    def cdf(self, t: float) -> float:
        a = abs(self.theta) / 2.0
        lo = max(self.theta / 2.0, 0.0)
        if t < 0.0:
            return 0.0
        if t < a:
            return lo
        if t < 1.0 - a:
            return t
        if t < 1.0:
            return 1.0 - lo
        return 1.0

    def quantile(self, u: float) -> float:
        a = abs(self.theta) / 2.0
        if self.theta >= 0.0:
            if u <= a:
                return 0.0
            if u <= 1.0 - a:
                return u
            return 1.0
        if u <= a:
            return a
        if u <= 1.0 - a:
            return u
        return 1.0 - a

    def expected_hb(self) -> float:
        a = abs(self.theta) / 2.0
        middle = entropy_integral(a, 1.0 - a) if a < 0.5 else 0.0
        if self.theta < 0.0:
            return middle + 2.0 * a * float(hb(a))
        return middle

    def label(self) -> str:
        return f"threshold-linear:theta={self.theta:.10g}"


@dataclass(frozen=True)
class Explicit:
    """An explicit multiset of bias values, symmetric about 1/2."""

    values: tuple
    family = "explicit"
    is_symmetric = True

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise ValueError("need at least one value")
        arr = np.asarray(vals)
        if np.any(arr < 0.0) or np.any(arr > 1.0):
            raise ValueError("values must lie in [0, 1]")
        if np.max(np.abs(np.sort(arr) - np.sort(1.0 - arr))) > 1e-12:
            raise ValueError("value multiset must be symmetric about 1/2")
        object.__setattr__(self, "values", vals)

    def atoms(self):
        mass = 1.0 / len(self.values)
        agg: dict[float, float] = {}
        for v in self.values:
            agg[v] = agg.get(v, 0.0) + mass
        return sorted(agg.items())

    def uniform_pieces(self):
        return []

    def cdf(self, t: float) -> float:
        return _step_cdf(self.atoms(), [], t)

    def quantile(self, u: float) -> float:
        vals = sorted(self.values)
        idx = max(math.ceil(u * len(vals)) - 1, 0)
        return vals[min(idx, len(vals) - 1)]

    def expected_hb(self) -> float:
        return float(np.mean([hb(v) for v in self.values]))

    def label(self) -> str:
        return "explicit:" + ",".join(f"{v:.10g}" for v in self.values)


@dataclass(frozen=True)
class NestedExact:
    """The classic nested linear code: ktilde unused parity checks followed
    by parity checks pinned to zero.  Deliberately not symmetric."""

    ktilde: int
    length: int
    family = "nested-exact"
    is_symmetric = False

    def __post_init__(self):
        if self.length < 1:
            raise ValueError("length must be positive")
        if not 0 <= self.ktilde <= self.length:
            raise ValueError("need 0 <= ktilde <= length")

    def atoms(self):
        g = self.ktilde / self.length
        out = []
        if g < 1.0:
            out.append((0.0, 1.0 - g))
        if g > 0.0:
            out.append((0.5, g))
        return out

    def uniform_pieces(self):
        return []

    def cdf(self, t: float) -> float:
        return _step_cdf(self.atoms(), [], t)

    def quantile(self, u: float) -> float:
        return 0.0 if u <= 1.0 - self.ktilde / self.length else 0.5

    def expected_hb(self) -> float:
        return self.ktilde / self.length

    def label(self) -> str:
        return f"nested-exact:ktilde={self.ktilde},length={self.length}"


ParityBiasSpec = (
    Threshold | Constant | Linear | ThresholdLinear | Explicit | NestedExact
)


def cdf(spec, t: float) -> float:
    """Right-continuous CDF of the parity-bias distribution at t."""
    return spec.cdf(t)


def quantile_vector(spec, length: int) -> np.ndarray:
    """Derandomized bias vector q_i = F^{-1}((i - 3/4) / length), where the
    generalized inverse is inf{t : F(t) >= u}.  The nested special case is
    laid out exactly: ktilde free checks first, then the pinned zeros."""
    if length < 1:
        raise ValueError("length must be positive")
    if isinstance(spec, NestedExact):
        if length != spec.length:
            raise ValueError("length does not match the nested spec")
        return np.concatenate(
            [np.full(spec.ktilde, 0.5), np.zeros(length - spec.ktilde)]
        )
    u = (np.arange(1, length + 1) - 0.75) / length
    return np.array([spec.quantile(float(ui)) for ui in u])


def expected_hb(spec) -> float:
    """E[Hb(Q)] under the family, atoms exact and continuous parts in
    closed form."""
    return spec.expected_hb()


def calibrate(family: str, target: float, length: int | None = None):
    """Return the family member with E[Hb(Q)] = target (to 1e-9)."""
    if not 0.0 <= target <= 1.0:
        raise ValueError("target must lie in [0, 1]")
    if family == "threshold":
        return Threshold(target)
    if family == "constant":
        return Constant(hb_inv(target))
    if family == "threshold-linear":
        if target == 0.0:
            return ThresholdLinear(1.0)
        if target == 1.0:
            return ThresholdLinear(-1.0)
        theta = float(
            brentq(
                lambda t: ThresholdLinear(t).expected_hb() - target,
                -1.0,
                1.0,
                xtol=1e-14,
            )
        )
        spec = ThresholdLinear(theta)
        if abs(spec.expected_hb() - target) > 1e-9:
            raise ValueError("calibration failed to converge")
        return spec
    if family == "linear":
        if abs(target - LINEAR_EXPECTED_HB) > 1e-9:
            raise ValueError("target outside achievable range of the family")
        return Linear()
    if family == "nested-exact":
        if length is None:
            raise ValueError("nested-exact calibration needs the vector length")
        ktilde = round(target * length)
        if abs(ktilde / length - target) > 1e-9:
            raise ValueError("target outside achievable range of the family")
        return NestedExact(ktilde, length)
    if family == "explicit":
        raise ValueError("explicit family is not calibratable")
    raise ValueError(f"unknown family: {family}")


def sample_iid(spec, length: int, rng: np.random.Generator) -> np.ndarray:
    """i.i.d. q vector, the un-derandomized variant."""
    return np.array([spec.quantile(float(u)) for u in rng.random(length)])


def parse_spec(text: str):
    """Inverse of the label() short text form."""
    name, _, args = text.partition(":")
    fields = {}
    if name != "explicit" and args:
        for part in args.split(","):
            key, _, val = part.partition("=")
            fields[key] = val
    if name == "threshold":
        return Threshold(float(fields["gamma"]))
    if name == "constant":
        return Constant(float(fields["c"]))
    if name == "linear":
        return Linear()
    if name == "threshold-linear":
        return ThresholdLinear(float(fields["theta"]))
    if name == "explicit":
        return Explicit(tuple(float(v) for v in args.split(",")))
    if name == "nested-exact":
        return NestedExact(int(fields["ktilde"]), int(fields["length"]))
    raise ValueError(f"unknown family: {name}")
