"""Complete elliptic integrals on the full real parameter line.

Built on Carlson symmetric forms evaluated over complex numbers by the
argument-duplication iteration, which treats negative and complex
arguments uniformly (the arithmetic-geometric mean stays available as an
independent test oracle).  Everything uses the PARAMETER convention:
the argument is m = k^2, so ``K(m) = \\int_0^{pi/2} (1 - m sin^2 t)^{-1/2} dt``.

For m > 1 the second-kind integral is continued across its branch cut:
the argument ``1 - m`` entering the symmetric forms is taken as a complex
number on the principal branch approached from above (``1 - m + i0``),
which makes Im E(m) positive, continuous in m, and vanishing as m -> 1+.
That branch is the one under which the chain's scaling function is
non-negative and matches the mode-product numerics.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DomainError, NumericalError

__all__ = [
    "EllipticConfig",
    "DEFAULT_CONFIG",
    "carlson_rf",
    "carlson_rd",
    "carlson_rg",
    "ellip_k",
    "ellip_e",
]


@dataclass(frozen=True)
class EllipticConfig:
    """Stopping rule for the duplication iteration.

    ``rel_tol`` bounds the relative spread of the arguments at which the
    Taylor tail is applied; the overall relative error is below
    ``10 * rel_tol``.
    """

    rel_tol: float = 1e-12
    max_iter: int = 100

    def __post_init__(self):
        if not 0.0 < self.rel_tol <= 1e-8:
            raise DomainError(
                f"rel_tol must lie in (0, 1e-8], got {self.rel_tol!r}"
            )
        if self.max_iter < 20:
            raise DomainError(f"max_iter must be >= 20, got {self.max_iter!r}")


DEFAULT_CONFIG = EllipticConfig()


def _validate_args(name: str, args: tuple[complex, ...], max_zeros: int) -> None:
    zeros = sum(1 for a in args if a == 0)
    if zeros > max_zeros:
        raise DomainError(
            f"{name} allows at most {max_zeros} zero argument(s), got {zeros}"
        )
    if any(not (math.isfinite(a.real) and math.isfinite(a.imag)) for a in args):
        raise DomainError(f"{name} arguments must be finite")


def carlson_rf(x, y, z, config: EllipticConfig = DEFAULT_CONFIG) -> complex:
    """Symmetric integral R_F(x, y, z) by argument duplication.

    Arguments may be complex; values on the negative real axis are taken
    on the principal branch (approached from above unless a negative
    imaginary part is passed explicitly).
    """
    x, y, z = complex(x), complex(y), complex(z)
    _validate_args("carlson_rf", (x, y, z), max_zeros=1)
    a0 = a = (x + y + z) / 3.0
    x0, y0 = x, y
    scale = 1.0
    for _ in range(config.max_iter):
        if max(abs(a - x), abs(a - y), abs(a - z)) < config.rel_tol * abs(a):
            break
        sx, sy, sz = cmath.sqrt(x), cmath.sqrt(y), cmath.sqrt(z)
        lam = sx * sy + sx * sz + sy * sz
        x = (x + lam) / 4.0
        y = (y + lam) / 4.0
        z = (z + lam) / 4.0
        a = (a + lam) / 4.0
        scale *= 4.0
    else:
        raise NumericalError(
            f"carlson_rf did not converge in {config.max_iter} iterations"
        )
    big_x = (a0 - x0) / (scale * a)
    big_y = (a0 - y0) / (scale * a)
    big_z = -(big_x + big_y)
    e2 = big_x * big_y - big_z * big_z
    e3 = big_x * big_y * big_z
    # Taylor tail through 5th order in the residual spread
    series = 1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0
    return series / cmath.sqrt(a)


def carlson_rd(x, y, z, config: EllipticConfig = DEFAULT_CONFIG) -> complex:
    """Degenerate third-kind symmetric integral R_D(x, y, z) = R_J(x, y, z, z).

    ``z`` must be nonzero; at most one of ``x, y`` may be zero.
    """
    x, y, z = complex(x), complex(y), complex(z)
    if z == 0:
        raise DomainError("carlson_rd requires z != 0")
    _validate_args("carlson_rd", (x, y, z), max_zeros=1)
    a0 = a = (x + y + 3.0 * z) / 5.0
    x0, y0 = x, y
    acc = 0.0 + 0.0j
    scale = 1.0
    for _ in range(config.max_iter):
        if max(abs(a - x), abs(a - y), abs(a - z)) < config.rel_tol * abs(a):
            break
        sx, sy, sz = cmath.sqrt(x), cmath.sqrt(y), cmath.sqrt(z)
        lam = sx * sy + sx * sz + sy * sz
        acc += 1.0 / (scale * sz * (z + lam))
        x = (x + lam) / 4.0
        y = (y + lam) / 4.0
        z = (z + lam) / 4.0
        a = (a + lam) / 4.0
        scale *= 4.0
    else:
        raise NumericalError(
            f"carlson_rd did not converge in {config.max_iter} iterations"
        )
    big_x = (a0 - x0) / (scale * a)
    big_y = (a0 - y0) / (scale * a)
    big_z = -(big_x + big_y) / 3.0
    e2 = big_x * big_y - 6.0 * big_z * big_z
    e3 = (3.0 * big_x * big_y - 8.0 * big_z * big_z) * big_z
    e4 = 3.0 * (big_x * big_y - big_z * big_z) * big_z * big_z
    e5 = big_x * big_y * big_z * big_z * big_z
    series = (
        1.0
        - 3.0 * e2 / 14.0
        + e3 / 6.0
        + 9.0 * e2 * e2 / 88.0
        - 3.0 * e4 / 22.0
        - 9.0 * e2 * e3 / 52.0
        + 3.0 * e5 / 26.0
    )
    return 3.0 * acc + series / (scale * a * cmath.sqrt(a))


def carlson_rg(x, y, z, config: EllipticConfig = DEFAULT_CONFIG) -> complex:
    """Symmetric integral R_G, assembled from R_F and R_D:

    2 R_G = z R_F - (x - z)(y - z) R_D / 3 + sqrt(x) sqrt(y) / sqrt(z),

    with principal square roots taken factor by factor (which preserves
    the branch for arguments continued across the negative real axis).
    """
    x, y, z = complex(x), complex(y), complex(z)
    _validate_args("carlson_rg", (x, y, z), max_zeros=1)
    if z == 0:  # R_G is symmetric; rotate a nonzero argument into z
        x, z = z, x
    rf = carlson_rf(x, y, z, config)
    rd = carlson_rd(x, y, z, config)
    if x == 0 or y == 0:
        root = 0.0 + 0.0j
    else:
        root = cmath.sqrt(x) * cmath.sqrt(y) / cmath.sqrt(z)
    return 0.5 * (z * rf - (x - z) * (y - z) * rd / 3.0 + root)


def ellip_k(m: float, config: EllipticConfig = DEFAULT_CONFIG) -> float:
    """Complete integral of the first kind, parameter convention.

    Defined for m < 1 (it diverges at m = 1); arbitrarily large negative
    parameters are fine and arise from the scaling function near its
    pinch point.
    """
    if not math.isfinite(m):
        raise DomainError(f"parameter must be finite, got {m!r}")
    if m >= 1.0:
        raise DomainError(f"ellip_k requires parameter < 1, got {m}")
    return carlson_rf(0.0, 1.0 - m, 1.0, config).real


def ellip_e(m: float, config: EllipticConfig = DEFAULT_CONFIG) -> complex:
    """Complete integral of the second kind, parameter convention.

    Real for m <= 1.  For m > 1 the result is complex: the argument
    ``1 - m`` is continued onto the principal branch from above the cut,
    giving Im E(m) > 0, continuous and vanishing as m -> 1+.
    """
    if not math.isfinite(m):
        raise DomainError(f"parameter must be finite, got {m!r}")
    if m == 1.0:
        return complex(1.0, 0.0)
    value = 2.0 * carlson_rg(0.0, complex(1.0 - m, 0.0), 1.0, config)
    if m <= 1.0:
        return complex(value.real, 0.0)
    return value
