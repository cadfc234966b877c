"""Spectral measure, admissible weight family and the Bessel transform.

The weight h is a product over archimedean places.  With a parameter a > 1
per place,

    real place:     h(nu) = exp((nu^2 - 1/4)/a)   for |Re nu| < 2/3,
                    h(nu) = 1                      for nu in 1/2 + Z,
                                                       3/2 <= |nu| <= a,
                    h(nu) = 0                      otherwise;
    complex place:  h(nu, p) = exp((nu^2 + p^2 - 1)/a)
                                                   for |Re nu| < 2/3, |p| <= a,
                    h(nu, p) = 0                   otherwise.

The spectral measure integrates, per real place,

    int_0^{i inf} f(nu) (-4 pi nu) tan(pi nu) dnu/(2 pi i)
        = int_0^inf f(it) 2 t tanh(pi t) dt,

plus the discrete sum over nu in {3/2, 5/2, ...}; per complex place it sums
over p and integrates f(nu, p)(p^2 - nu^2) dnu along the imaginary axis
(the literal contour measure, including the i from dnu = i dt).

The Bessel transform of h against the kernels of the sum formula is the
product over places of these integrals with the kernel as extra factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AccuracyError, DomainError, InputError
from .quadrature import gl_panels
from .specialfun import kernel_complex_nus, kernel_real_nus

_STRIP = 2.0 / 3.0


@dataclass(frozen=True)
class PlaceWeight:
    """One place's factor of the weight family: kind 'real' or 'complex'."""

    kind: str
    a: float

    def __post_init__(self):
        if self.kind not in ("real", "complex"):
            raise InputError(f"place kind must be real or complex, got {self.kind!r}")
        if not self.a > 1.0:
            raise InputError(f"weight parameter must exceed 1, got {self.a}")


@dataclass(frozen=True)
class WeightFunctionH:
    """The admissible product weight: one (kind, a) pair per place."""

    per_place: tuple[PlaceWeight, ...]

    @classmethod
    def from_field(cls, fd, a_values) -> "WeightFunctionH":
        r, s = fd.signature
        a_values = list(a_values)
        if len(a_values) != r + s:
            raise InputError(f"need {r + s} weight parameters, got {len(a_values)}")
        kinds = ["real"] * r + ["complex"] * s
        return cls(tuple(PlaceWeight(k, float(a)) for k, a in zip(kinds, a_values)))

    def __len__(self):
        return len(self.per_place)


@dataclass(frozen=True)
class MeasureConfig:
    """Truncation and resolution of the spectral-measure quadrature."""

    t_max: float | None = None       # None: from the Gaussian envelope of h
    nodes: int = 16                  # Gauss nodes per 0.5-wide panel
    p_max: int | None = None         # None: ceil(max a_j) at complex places
    discrete_cap: float = 60.5       # safety cap on the real discrete sum

    def __post_init__(self):
        if self.t_max is not None and self.t_max <= 0:
            raise InputError("t_max must be positive")
        if self.nodes <= 0 or self.discrete_cap <= 0:
            raise InputError("caps and node counts must be positive")
        if self.p_max is not None and self.p_max <= 0:
            raise InputError("p_max must be positive")

    def effective_t_max(self, a: float, tol: float = 1e-12) -> float:
        if self.t_max is not None:
            return self.t_max
        return math.sqrt(a * math.log(1.0 / tol)) + 1.0

    def effective_p_max(self, a: float) -> int:
        p = self.p_max if self.p_max is not None else math.ceil(a)
        if p < math.ceil(a):
            raise InputError(
                f"p_max={p} does not cover the weight support |p| <= {a}")
        return p


DEFAULT_CONFIG = MeasureConfig()


def h_eval(place: PlaceWeight, nu: complex, p: int | None = None) -> float:
    """The weight factor at one place; nonnegative real on its domain."""
    nu = complex(nu)
    if abs(nu.real) > 1e-13 and abs(nu.imag) > 1e-13:
        raise DomainError("weight defined for nu on the real or imaginary axis")
    if place.kind == "real":
        if abs(nu.real) < _STRIP:
            val = (nu * nu).real
            return math.exp((val - 0.25) / place.a)
        half = nu.real * 2.0
        if abs(nu.imag) < 1e-13 and abs(half - round(half)) < 1e-9 \
                and round(half) % 2 != 0 and 1.5 <= abs(nu.real) <= place.a:
            return 1.0
        return 0.0
    if p is None:
        raise DomainError("complex place requires p")
    if abs(nu.real) < _STRIP and abs(p) <= place.a:
        return math.exp(((nu * nu).real + p * p - 1.0) / place.a)
    return 0.0


def discrete_support(place: PlaceWeight, cap: float) -> list[float]:
    """The real-place discrete points {3/2, 5/2, ...} within the h support."""
    out = []
    v = 1.5
    while v <= min(place.a, cap):
        out.append(v)
        v += 1.0
    return out


def _contour_nodes(t_max: float, nodes_per_panel: int, two_sided: bool):
    rule = np.polynomial.legendre.leggauss(nodes_per_panel)
    lo = -t_max if two_sided else 0.0
    return gl_panels(lo, t_max, 0.5, rule=rule)


def mu_integrate(place: PlaceWeight, f, cfg: MeasureConfig = DEFAULT_CONFIG,
                 p_values: list[int] | None = None):
    """Integrate a callback against the spectral measure at one place.

    Real place: ``f(nu_array) -> values`` is evaluated on nu = it,
    t in (0, t_max], with weight 2 t tanh(pi t) dt, plus the discrete sum
    over nu in {3/2, 5/2, ...}.  Complex place: ``f(nu_array, p) -> values``
    is summed over |p| <= p_max and integrated with weight (p^2 - nu^2) dnu
    on nu = it, t in [-t_max, t_max].  Returns (value, tail_estimate).
    """
    if place.kind == "real":
        t_max = cfg.effective_t_max(place.a)
        ts, ws = _contour_nodes(t_max, cfg.nodes, two_sided=False)
        vals = np.asarray(f(1j * ts))
        weights = ws * 2.0 * ts * np.tanh(math.pi * ts)
        total = complex(np.sum(vals * weights))
        # Gaussian-envelope tail: the h factor dies like exp(-t^2/a)
        lastpanel = ts >= t_max - 0.5
        last_mag = float(np.max(np.abs(vals[lastpanel] * weights[lastpanel]))) \
            if np.any(lastpanel) else 0.0
        tail = 4.0 * last_mag * place.a / (2.0 * t_max)
        if not _envelope_decreasing(vals, ws, ts, t_max):
            raise AccuracyError("integrand is not decaying along the contour",
                                value=total, achieved=math.inf)
        for v in discrete_support(place, cfg.discrete_cap):
            total += complex(np.asarray(f(np.array([v + 0j]))).reshape(-1)[0])
        return total, tail
    # complex place
    t_max = cfg.effective_t_max(place.a)
    p_cap = cfg.effective_p_max(place.a)
    if p_values is None:
        p_values = list(range(-p_cap, p_cap + 1))
    ts, ws = _contour_nodes(t_max, cfg.nodes, two_sided=True)
    total = 0.0 + 0.0j
    tail = 0.0
    for p in p_values:
        vals = np.asarray(f(1j * ts, p))
        weights = ws * (p * p + ts * ts)
        total += 1j * complex(np.sum(vals * weights))
        lastpanel = np.abs(ts) >= t_max - 0.5
        if np.any(lastpanel):
            tail += 4.0 * float(np.max(np.abs(vals[lastpanel] * weights[lastpanel]))) \
                * place.a / (2.0 * t_max)
    return total, tail


def _envelope_decreasing(vals, ws, ts, t_max) -> bool:
    mid = np.abs(ts - t_max / 2.0) < 0.5
    end = ts >= t_max - 1.0
    if not (np.any(mid) and np.any(end)):
        return True
    m = float(np.mean(np.abs(np.asarray(vals)[mid])))
    e = float(np.mean(np.abs(np.asarray(vals)[end])))
    return e <= m + 1e-30 or m == 0.0


def integrate_weight(place: PlaceWeight, cfg: MeasureConfig = DEFAULT_CONFIG):
    """int h dmu at one place (the delta-term factor)."""
    if place.kind == "real":
        return mu_integrate(place, lambda nus: np.array(
            [h_eval(place, nu) for nu in nus]), cfg)
    return mu_integrate(place, lambda nus, p: np.array(
        [h_eval(place, nu, p) for nu in nus]), cfg)


def bessel_transform_h(h: WeightFunctionH, z_values,
                       cfg: MeasureConfig = DEFAULT_CONFIG):
    """Product over places of int B(z_j) h_j dmu_j.

    ``z_values`` holds one nonzero kernel argument per place.  Returns
    (value, combined relative tail estimate).
    """
    z_values = list(z_values)
    if len(z_values) != len(h.per_place):
        raise InputError(f"need {len(h.per_place)} kernel arguments")
    total = 1.0 + 0.0j
    rel_tail = 0.0
    for place, z in zip(h.per_place, z_values):
        if z == 0:
            raise DomainError("kernel arguments must be nonzero")
        if place.kind == "real":
            def f(nus, _place=place, _z=z):
                hv = np.array([h_eval(_place, nu) for nu in nus])
                return kernel_real_nus(nus, float(abs(_z))) * hv
        else:
            def f(nus, p, _place=place, _z=z):
                hv = np.array([h_eval(_place, nu, p) for nu in nus])
                return kernel_complex_nus(nus, p, complex(_z)) * hv
        val, tail = mu_integrate(place, f, cfg)
        total *= val
        rel_tail += tail / max(abs(val), 1e-300)
    return total, rel_tail * abs(total)
