"""Universal critical scaling function of the chain's fidelity.

In the thermodynamic regime ``ln F ~ -N |delta| A(c)`` with the scaled
distance ``c = (g - 1) / |delta|``.  The closed form is assembled from
complete elliptic integrals at negative (first kind) and super-unit
(second kind, analytically continued) parameter:

    |c| <= 1:  A = 1/4 + |c| K(m1) / 2pi + (|c| - 1) Im E(m2) / 4pi
    |c| >  1:  A = |c|/4 - |c| K(m1) / 2pi - (|c| - 1) Im E(m2) / 4pi

    m1 = -4 |c| / (|c| - 1)^2,   m2 = ((|c| + 1) / (|c| - 1))^2.

A is even in c, non-negative, equals 1/4 at c = 0 and decays as
1/(16 |c|).  At |c| = 1 (one of the two states exactly critical) both
branches meet at the pinch value (pi - 2) / 4pi, where dA/dc diverges
logarithmically: dA/dc -> ln|1 - c| / 4pi - 3 ln 2 / 4pi + (1 +- 1)/8
as c -> 1 from above / below.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .chain import _validate_size, fidelity_susceptibility
from .elliptic import EllipticConfig, DEFAULT_CONFIG, ellip_e, ellip_k
from .errors import DomainError, RegimeError

__all__ = [
    "Regime",
    "Formula",
    "ScalingEval",
    "Prediction",
    "PINCH_VALUE",
    "PINCH_TOLERANCE",
    "scaling_a",
    "scaling_a_asymptotic",
    "scaling_a_derivative",
    "predict_log_fidelity",
    "scaling_parameter",
]

PINCH_VALUE = (math.pi - 2.0) / (4.0 * math.pi)
PINCH_TOLERANCE = 1e-9

# hard regime guards for the asymptotic formulas (silent misuse outside
# their validity window is the main user error)
SCALING_MAX_DELTA = 0.05
SCALING_MAX_DISTANCE = 0.05
AWAY_MIN_RATIO = 10.0
SUSCEPTIBILITY_MAX_NDELTA = 0.1


class Regime(enum.Enum):
    INNER = "inner"
    OUTER = "outer"
    PINCH = "pinch"


class Formula(enum.Enum):
    SCALING_LAW = "scaling_law"
    AWAY = "away"
    SUSCEPTIBILITY = "susceptibility"


@dataclass(frozen=True)
class ScalingEval:
    """Scaling function, its slope and regime at one scaled coordinate.

    ``da_dc`` is a central finite difference; at the pinch it is flagged
    infinite with the sign of the divergence (-inf at c = +1, +inf at
    c = -1 by evenness).
    """

    c: float
    a_value: float
    da_dc: float
    regime: Regime


@dataclass(frozen=True)
class Prediction:
    log_f_predicted: float
    formula: Formula


def _a_value(c: float, config: EllipticConfig) -> float:
    ac = abs(c)
    if abs(ac - 1.0) < PINCH_TOLERANCE:
        return PINCH_VALUE
    gap = ac - 1.0
    m1 = -4.0 * ac / (gap * gap)
    ratio = (ac + 1.0) / gap
    m2 = ratio * ratio
    first = ellip_k(m1, config)
    im_second = ellip_e(m2, config).imag
    if ac <= 1.0:
        return 0.25 + ac * first / (2.0 * math.pi) + gap * im_second / (4.0 * math.pi)
    return ac / 4.0 - ac * first / (2.0 * math.pi) - gap * im_second / (4.0 * math.pi)


def scaling_a(c: float, config: EllipticConfig = DEFAULT_CONFIG) -> ScalingEval:
    """Evaluate A(c) with its finite-difference slope and regime flag.

    Within ``PINCH_TOLERANCE`` of |c| = 1 the analytic limit value is
    returned (the elliptic parameters blow up there) and the slope is
    flagged infinite.
    """
    if not math.isfinite(c):
        raise DomainError(f"scaled coordinate must be finite, got {c!r}")
    c = float(c)
    ac = abs(c)
    if abs(ac - 1.0) < PINCH_TOLERANCE:
        slope = -math.inf if c > 0 else math.inf
        return ScalingEval(c=c, a_value=PINCH_VALUE, da_dc=slope, regime=Regime.PINCH)
    step = min(1e-6, abs(1.0 - ac) / 20.0)
    return ScalingEval(
        c=c,
        a_value=_a_value(c, config),
        da_dc=scaling_a_derivative(c, step, config),
        regime=Regime.INNER if ac < 1.0 else Regime.OUTER,
    )


def scaling_a_asymptotic(c: float) -> float:
    """Large-|c| tail ``1 / (16 |c|)``; defined for |c| > 1 only."""
    if not math.isfinite(c):
        raise DomainError(f"scaled coordinate must be finite, got {c!r}")
    if abs(c) <= 1.0:
        raise DomainError(
            f"asymptotic form is valid only for |c| > 1, got c = {c}"
        )
    return 1.0 / (16.0 * abs(c))


def scaling_a_derivative(
    c: float, h: float, config: EllipticConfig = DEFAULT_CONFIG
) -> float:
    """Central finite difference (A(c+h) - A(c-h)) / 2h.

    The step must satisfy ``h <= min(1e-4, |1 - |c|| / 10)`` so that the
    stencil never straddles the pinch.
    """
    if not math.isfinite(c) or abs(abs(c) - 1.0) < PINCH_TOLERANCE:
        raise DomainError(f"derivative undefined at the pinch, got c = {c!r}")
    limit = min(1e-4, abs(1.0 - abs(c)) / 10.0)
    if not 0.0 < h <= limit:
        raise DomainError(
            f"step h = {h!r} violates 0 < h <= min(1e-4, |1-|c||/10) = {limit:g}"
        )
    return (_a_value(c + h, config) - _a_value(c - h, config)) / (2.0 * h)


def predict_log_fidelity(
    g: float, delta: float, size: int, formula: Formula
) -> Prediction:
    """Closed-form ln F prediction in one of the three asymptotic regimes.

    scaling_law:    -N |delta| A((g-1)/|delta|), near-critical scaling
    away:           -N delta^2 / (16 |g-1|),     off-critical tail
    susceptibility: -delta^2 chi(g, N) / 2,      small-system Taylor limit
    """
    _validate_size(size)
    if not (math.isfinite(g) and math.isfinite(delta)):
        raise DomainError("field and half_diff must be finite")
    formula = Formula(formula)
    if delta == 0.0:
        return Prediction(log_f_predicted=0.0, formula=formula)
    if formula is Formula.SCALING_LAW:
        if abs(delta) > SCALING_MAX_DELTA:
            raise RegimeError(
                f"scaling_law requires |delta| <= {SCALING_MAX_DELTA}, got {abs(delta)}"
            )
        if abs(g - 1.0) > SCALING_MAX_DISTANCE:
            raise RegimeError(
                f"scaling_law requires |g - 1| <= {SCALING_MAX_DISTANCE}, got {abs(g - 1.0)}"
            )
        value = -size * abs(delta) * _a_value((g - 1.0) / abs(delta), DEFAULT_CONFIG)
    elif formula is Formula.AWAY:
        if abs(g - 1.0) < AWAY_MIN_RATIO * abs(delta):
            raise RegimeError(
                f"away formula requires |g - 1| >= {AWAY_MIN_RATIO}|delta| "
                f"(= {AWAY_MIN_RATIO * abs(delta):g}), got {abs(g - 1.0):g}"
            )
        value = -size * delta * delta / (16.0 * abs(g - 1.0))
    else:
        if size * abs(delta) > SUSCEPTIBILITY_MAX_NDELTA:
            raise RegimeError(
                f"susceptibility formula requires N |delta| <= "
                f"{SUSCEPTIBILITY_MAX_NDELTA}, got {size * abs(delta):g}"
            )
        value = -delta * delta * fidelity_susceptibility(g, size) / 2.0
    return Prediction(log_f_predicted=value, formula=formula)


def scaling_parameter(g: float, delta: float) -> float:
    """Fidelity per site in the thermodynamic limit, ``|delta| A(c)``.

    Leading-order equivalent of minus the per-site integral of the mode
    overlaps; valid near criticality (|delta| and |g - 1| both <= 0.05).
    """
    if not (math.isfinite(g) and math.isfinite(delta)):
        raise DomainError("field and half_diff must be finite")
    if abs(delta) > SCALING_MAX_DELTA:
        raise RegimeError(
            f"scaling regime requires |delta| <= {SCALING_MAX_DELTA}, got {abs(delta)}"
        )
    if abs(g - 1.0) > SCALING_MAX_DISTANCE:
        raise RegimeError(
            f"scaling regime requires |g - 1| <= {SCALING_MAX_DISTANCE}, "
            f"got {abs(g - 1.0)}"
        )
    if delta == 0.0:
        return 0.0
    return abs(delta) * _a_value((g - 1.0) / abs(delta), DEFAULT_CONFIG)
