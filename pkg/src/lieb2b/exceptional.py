"""
Exceptional points of the two-body Lieb-Liniger spectrum.

A branch point of the quasi-momentum surface satisfies the Bethe
condition together with dJ/dk = 0, i.e.

    bethe_residual(parity, g, k) = 0,
    r(g, k) = k^2 + g^2 + 2 g / pi = 0.

The real solutions (g = 0 for the even family, g = -2/pi for the odd
family) are ordinary degeneracies of counter-propagating momenta, not
spectral defects.  The complex solutions are exceptional points: each
excited branch n > 1 collides with its family's bound-capable branch
(n_b = 0 for even n, n_b = 1 for odd n) at a single point g_ep in the
lower half plane (the upper half plane holds the mirror images, which
belong to the reflected momentum branch).  Even-family points sit at
Re g < 0, odd-family points at Re g < -2/pi.  A useful seed is
g ~ -i (n - 1), with k near sqrt(-g_ep (g_ep + 2/pi)) taken in the
right half k plane.

Local structure: with eps = g - g_ep, the two colliding branches obey

    k_{n_b}(g) = k_ep - sqrt((2/pi) eps) + O(eps),
    k_n(g)     = k_ep + sqrt((2/pi) eps) + O(eps),

where the square root's branch cut runs from the exceptional point
straight down (argument of eps in (-pi/2, 3*pi/2]), so that values
continued vertically from the real axis stay on the principal side.
The square-root coefficient G2 = -(g^2+k^2)/g equals 2/pi exactly on
the solution set of r = 0.
"""

from __future__ import annotations

import cmath
import warnings
from dataclasses import dataclass

import numpy as np

from .bethe import (
    Parity,
    bethe_residual,
    residual_k_derivative,
    residual_scale,
)
from .continuation import branch_point_function

#: reject "exceptional points" that are really the real-axis degeneracies
REAL_AXIS_GUARD = 0.05


class ExceptionalPointError(RuntimeError):
    """Search for one or more exceptional points failed."""

    def __init__(self, message, failures=None):
        super().__init__(message)
        self.failures = failures or {}


@dataclass(frozen=True)
class ExceptionalPoint:
    """Collision of branch n with its family's bound-capable branch n_b."""

    n: int
    n_b: int
    g_ep: complex
    k_ep: complex
    parity: Parity

    def residuals(self) -> tuple[complex, complex]:
        return ep_residual(self.parity, self.g_ep, self.k_ep)

    def max_residual(self) -> float:
        a, b = self.residuals()
        return float(max(abs(a), abs(b)))


def ep_residual(parity: Parity, g, k) -> tuple[complex, complex]:
    """Joint residual (Bethe condition, branch-point condition)."""
    return (complex(bethe_residual(parity, g, k)),
            complex(branch_point_function(g, k)))


def _residual_g_derivative(parity: Parity, g, k):
    h = 0.5 * np.pi * k
    if parity is Parity.EVEN:
        return -np.cos(h)
    return np.sin(h)


def _newton_2d(parity: Parity, g, k, *, tol: float, max_iter: int = 80,
               max_move: float = 0.7):
    """Newton on (bethe_residual, r) in the two unknowns (g, k).

    Steps are capped in length (trust region) rather than forced to
    decrease a merit function: the joint system is non-monotone on the
    approach but converges quadratically once near a root.
    """
    g = complex(g)
    k = complex(k)
    for _ in range(max_iter):
        f1, f2 = ep_residual(parity, g, k)
        norm = max(abs(f1) / float(residual_scale(parity, g, k)), abs(f2))
        if norm < tol:
            return g, k, True
        j11 = _residual_g_derivative(parity, g, k)
        j12 = residual_k_derivative(parity, g, k)
        j21 = 2.0 * g + 2.0 / np.pi
        j22 = 2.0 * k
        det = j11 * j22 - j12 * j21
        if det == 0:
            return g, k, False
        dg = (f1 * j22 - f2 * j12) / det
        dk = (j11 * f2 - j21 * f1) / det
        move = max(abs(dg), abs(dk))
        if move > max_move:
            dg *= max_move / move
            dk *= max_move / move
        g, k = g - dg, k - dk
    f1, f2 = ep_residual(parity, g, k)
    norm = max(abs(f1) / float(residual_scale(parity, g, k)), abs(f2))
    return g, k, norm < tol


def default_seed(n: int) -> tuple[complex, complex]:
    """Strong-coupling estimate g ~ -i(n-1) with the matching k root."""
    g0 = -1j * (n - 1.0)
    k0 = cmath.sqrt(-g0 * (g0 + 2.0 / np.pi))
    if k0.real < 0:
        k0 = -k0
    return g0, k0


def find_ep(n: int, *, seed=None, tol: float = 1e-12,
            verify_unique: bool = True, sweep: int = 12,
            sweep_radius: float = 1.0) -> ExceptionalPoint:
    """Locate the exceptional point that couples branch n (n > 1) to its
    family's bound-capable branch.

    2D Newton from the strong-coupling seed, with step damping.  With
    verify_unique a sweep x sweep grid of start points in a window of
    sweep_radius around the seed re-runs the search and requires every
    convergent start inside the window to land on the same root;
    anything else raises.  Convergence onto the real axis (the ordinary
    degeneracies at g = 0, -2/pi) is rejected.
    """
    if n <= 1:
        raise ValueError("exceptional points exist for excited labels n > 1")
    parity = Parity.of_level(n)
    g0, k0 = default_seed(n) if seed is None else (complex(seed[0]), complex(seed[1]))
    g, k, ok = _newton_2d(parity, g0, k0, tol=tol)
    if not ok:
        raise ExceptionalPointError(f"no convergence for n={n} from seed {g0}")
    if abs(g.imag) < REAL_AXIS_GUARD:
        raise ExceptionalPointError(
            f"search for n={n} converged to the real axis at g={g}; "
            "that is an ordinary degeneracy, not an exceptional point")
    if g.imag > 0:
        # mirror-image root: fold back to the curated lower half plane
        g, k = g.conjugate(), k.conjugate()
    if k.real < 0:
        k = -k
    limit = 0.0 if parity is Parity.EVEN else -2.0 / np.pi
    if not g.real < limit:
        raise ExceptionalPointError(
            f"n={n}: converged point {g} violates Re g < {limit:.6f}")

    if verify_unique:
        _verify_unique_root(parity, n, g, tol=tol,
                            sweep=sweep, radius=sweep_radius)
    return ExceptionalPoint(n, parity.bound_level, g, k, parity)


def _verify_unique_root(parity, n, g_root, *, tol, sweep, radius):
    """Multi-start sweep confirming a single root near the found point.

    The audit window is centered on the root itself (the naive seed can
    sit near the window edge for small n, which would make a
    seed-centered audit vacuous).
    """
    found = []
    offsets = np.linspace(-radius, radius, sweep)
    for dx in offsets:
        for dy in offsets:
            g0 = g_root + complex(dx, dy)
            k0 = cmath.sqrt(-g0 * (g0 + 2.0 / np.pi))
            if k0.real < 0:
                k0 = -k0
            g, k, ok = _newton_2d(parity, g0, k0, tol=max(tol, 1e-11), max_iter=60)
            if not ok or abs(g.imag) < REAL_AXIS_GUARD:
                continue
            if g.imag > 0:
                g = g.conjugate()
            if abs(g - g_root) > radius:
                continue  # converged outside the audited window
            if not any(abs(g - f) < 1e-6 for f in found):
                found.append(g)
    if len(found) != 1 or abs(found[0] - g_root) > 1e-6:
        raise ExceptionalPointError(
            f"multi-start sweep for n={n} found roots {found}; "
            f"expected exactly one at {g_root}")


def enumerate_eps(parity: Parity, n_max: int, **kw) -> list[ExceptionalPoint]:
    """All exceptional points of one family with n <= n_max, sorted by n.

    Per-level failures are aggregated; a partial catalog raises with
    the failing labels attached rather than returning silently short.
    """
    start = 2 if parity is Parity.EVEN else 3
    results = []
    failures = {}
    for n in range(start, n_max + 1, 2):
        try:
            results.append(find_ep(n, **kw))
        except ExceptionalPointError as exc:
            failures[n] = str(exc)
    if failures:
        raise ExceptionalPointError(
            f"exceptional-point search failed for labels {sorted(failures)}",
            failures=failures)
    return results


def sqrt_lower_cut(eps) -> complex:
    """Square root with branch cut running straight down: the argument
    of eps is taken in (-pi/2, 3*pi/2]."""
    eps = complex(eps)
    if eps == 0:
        return 0.0 + 0.0j
    a = cmath.phase(eps)
    if a <= -0.5 * np.pi:
        a += 2.0 * np.pi
    return cmath.sqrt(abs(eps)) * cmath.exp(0.5j * a)


def local_expansion(ep: ExceptionalPoint, epsilon, *,
                    max_abs: float = 1e-2) -> tuple[complex, complex]:
    """First-order square-root approximants of the two colliding branches
    at g = g_ep + epsilon.

    Returns (k_bound_branch, k_excited_branch) = k_ep -/+ sqrt((2/pi) eps)
    with the downward branch cut.  The expansion is local; requesting
    |epsilon| beyond max_abs is allowed but flagged with a warning.
    """
    epsilon = complex(epsilon)
    if abs(epsilon) > max_abs:
        warnings.warn(
            f"|epsilon| = {abs(epsilon):.3g} exceeds the trust radius "
            f"{max_abs:.3g} of the square-root expansion", stacklevel=2)
    s = cmath.sqrt(2.0 / np.pi) * sqrt_lower_cut(epsilon)
    return ep.k_ep - s, ep.k_ep + s


def sqrt_coefficient(ep: ExceptionalPoint) -> complex:
    """G2 = -(g^2 + k^2)/g at the point; equals 2/pi on exact solutions,
    so its deviation measures the residual of the computed coordinates."""
    g, k = ep.g_ep, ep.k_ep
    return -(g * g + k * k) / g
