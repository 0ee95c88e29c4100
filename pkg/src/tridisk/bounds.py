"""Double-sided modulus bounds from the internal side distances.

lower(s_a, s_b) uses t = s_b/s_a:   (log(1+2t))^2 / (pi + 2*pi*log(1+2t))
upper(s_a, s_b) uses t = s_a/s_b:   (pi + 2*pi*log(1+2t)) / (log(1+2t))^2

The two formulas are reciprocal under swapping the ratio, so the map from a
modulus cap K to the side-ratio cap L inverts the lower bound alone.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BadK, ModulusOutOfRange, NonPositiveDistance
from .geometry import A_SIDES, B_SIDES, ContactDisk, PolygonalQuadrilateral


def _lower_of_ratio(t: float) -> float:
    x = math.log1p(2.0 * t)
    return x * x / (math.pi + 2.0 * math.pi * x)


def _upper_of_ratio(t: float) -> float:
    x = math.log1p(2.0 * t)
    return (math.pi + 2.0 * math.pi * x) / (x * x)


@dataclass(frozen=True)
class LvBounds:
    lower: float
    upper: float
    ratio_ba: float
    ratio_ab: float

    def to_json(self):
        return {"lower": self.lower, "upper": self.upper}


def lv_bounds(s_a: float, s_b: float) -> LvBounds:
    """Lower and upper bounds on the modulus from the internal side distances."""
    if s_a <= 0 or s_b <= 0:
        raise NonPositiveDistance(f"side distances must be positive, got {s_a}, {s_b}")
    ratio_ba = s_b / s_a
    ratio_ab = s_a / s_b
    return LvBounds(
        lower=_lower_of_ratio(ratio_ba),
        upper=_upper_of_ratio(ratio_ab),
        ratio_ba=ratio_ba,
        ratio_ab=ratio_ab,
    )


def L_from_K(K: float, rel_tol: float = 1e-12) -> float:
    """Smallest L >= 1 with s_a/s_b in [1/L, L] whenever the modulus is in [1/K, K].

    Inverts the monotone lower-bound function at value K by bisection in
    log-ratio space.
    """
    if K < 1.0:
        raise BadK(f"K must be >= 1, got {K}")
    # upper bracket from the quadratic-in-log structure of the bound:
    # the root x = log(1+2L) solves x^2 = K*pi*(1+2x), so x < 2*pi*K + 1
    x_hi = 2.0 * math.pi * K + 2.0 * math.sqrt((math.pi * K) ** 2 + math.pi * K) + 1.0
    lo, hi = 0.0, x_hi  # bisect on u = log(t); t = ratio cap
    if _lower_of_ratio(math.exp(hi)) < K:
        raise BadK(f"bracket failed for K={K}")
    for _ in range(200):
        if hi - lo <= rel_tol:
            break
        mid = 0.5 * (lo + hi)
        if _lower_of_ratio(math.exp(mid)) < K:
            lo = mid
        else:
            hi = mid
    return math.exp(0.5 * (lo + hi))


def delta_from_K(K: float) -> float:
    """Radius factor: a modulus cap K guarantees a disk of radius delta*max(s_a, s_b)."""
    return 1.0 / (2.0 * L_from_K(K))


def verify_corollary(
    q: PolygonalQuadrilateral,
    disk: ContactDisk,
    K: float,
    *,
    modulus: float,
    s_a: float,
    s_b: float,
    slack: float = 0.05,
) -> dict:
    """Check the guaranteed-radius chain for a found three-side disk.

    Requires the modulus estimate to lie in [1/K, K] (with the given relative
    discretization slack).  Checks r >= delta(K)*max(s_a, s_b) and the
    ungapped chain 2r >= s(touched pair) >= s(other pair)/L.
    """
    if K < 1.0:
        raise BadK(f"K must be >= 1, got {K}")
    if not (1.0 / K <= modulus * (1.0 + slack) and modulus * (1.0 - slack) <= K):
        raise ModulusOutOfRange(f"modulus {modulus} outside [1/{K}, {K}] with {slack} slack")
    L = L_from_K(K)
    delta = 1.0 / (2.0 * L)
    tau = q.tau_geom
    labels = disk.label_set
    bounds = lv_bounds(s_a, s_b)

    touched_a = A_SIDES <= labels
    touched_b = B_SIDES <= labels
    if touched_a:
        s_touched, s_other = s_a, s_b
    elif touched_b:
        s_touched, s_other = s_b, s_a
    else:
        s_touched = s_other = float("nan")

    pass_opposite = touched_a or touched_b
    pass_diameter = pass_opposite and (2.0 * disk.radius >= s_touched - tau)
    pass_ratio = pass_opposite and (s_touched >= s_other / L - tau)
    pass_corollary = disk.radius >= delta * max(s_a, s_b) - tau
    pass_sandwich = (
        bounds.lower * (1.0 - slack) <= modulus <= bounds.upper * (1.0 + slack)
    )
    return {
        "s_a": s_a,
        "s_b": s_b,
        "modulus": modulus,
        "lv_lower": bounds.lower,
        "lv_upper": bounds.upper,
        "K": K,
        "L": L,
        "delta": delta,
        "radius": disk.radius,
        "pass": {
            "sandwich": bool(pass_sandwich),
            "corollary": bool(pass_corollary),
            "opposite_pair": bool(pass_opposite),
            "diameter_chain": bool(pass_diameter),
            "ratio_chain": bool(pass_ratio),
        },
    }
