"""
Quasi-momentum branches of the two-body Lieb-Liniger model.

Two identical bosons on a 2*pi-periodic line interact through a contact
potential of strength g (units hbar = mass = 1).  The center-of-mass
momentum kbar is an integer, and the relative quasi-momentum k = k2 - k1
is fixed by the requirement that

    J(g, k) = k + (2/pi) * arctan(k / g)

takes an integer value.  Branches are labelled by a non-negative integer
n through k_n(0) = n.  Even-n branches obey k/g = cot(pi k / 2), odd-n
branches obey k/g = -tan(pi k / 2); this module works with the pole-free
forms

    even n:  k sin(pi k / 2) - g cos(pi k / 2) = 0
    odd  n:  k cos(pi k / 2) + g sin(pi k / 2) = 0

whose zero sets coincide with the branches and which are entire in
(g, k).

Sign conventions.  The n = 0 branch for g < 0 and the n = 1 branch for
g < -2/pi describe two-particle bound states with k on the imaginary
axis.  Both are defined by continuation from g > 0 through the lower
half of the complex g plane, which places them on the negative
imaginary axis: k_0(g) ~ i*g -> -i*inf as g -> -inf.  Strong-coupling
limits are k_n(+inf) = n + 1 and, for n > 1, k_n(-inf) = n - 1; callers
represent infinite coupling by a large proxy value.

Energies are E_{kbar,n}(g) = (kbar^2 + k_n(g)^2) / 2 with kbar and n of
equal parity.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

TWO_OVER_PI = 2.0 / np.pi

#: default solver tolerances (scaled residual); see RunConfig for overrides
RESIDUAL_TARGET = 1e-12
RESIDUAL_ACCEPT = 1e-10
NEWTON_MAX_STEPS = 50


class BranchCutWarning(UserWarning):
    """The principal arctan was evaluated on its branch cut."""


class SolverError(RuntimeError):
    """Root search failed; carries the last iterate for diagnostics."""

    def __init__(self, message, g=None, k=None, residual=None):
        super().__init__(message)
        self.g = g
        self.k = k
        self.residual = residual


class Parity(enum.Enum):
    EVEN = 0
    ODD = 1

    @classmethod
    def of_level(cls, n: int) -> "Parity":
        return cls.EVEN if n % 2 == 0 else cls.ODD

    @property
    def bound_level(self) -> int:
        """Label of the family's bound-capable branch (0 or 1)."""
        return self.value

    @property
    def real_branch_point(self) -> float:
        """Real coupling where the family's k=0 degeneracy sits."""
        return 0.0 if self is Parity.EVEN else -TWO_OVER_PI


@dataclass(frozen=True)
class BetheState:
    """One quasi-momentum branch value: label n, coupling g, momentum k."""

    n: int
    g: complex
    k: complex
    parity: Parity

    def __post_init__(self):
        if Parity.of_level(self.n) is not self.parity:
            raise ValueError(
                f"level {self.n} belongs to the "
                f"{Parity.of_level(self.n).name.lower()} family")

    def residual(self) -> complex:
        return bethe_residual(self.parity, self.g, self.k)

    def scaled_residual(self) -> float:
        return scaled_bethe_residual(self.parity, self.g, self.k)


@dataclass(frozen=True)
class EnergyLevel:
    kbar: int
    n: int
    energy: complex


def j_function(g, k):
    """J(g, k) = k + (2/pi) arctan(k/g), principal branch of arctan.

    On a branch k_n at real g > 0 this evaluates to the integer n + 1.
    Raises ValueError for g = 0, where k/g is undefined.  When k/g falls
    on the branch cut of the principal inverse tangent (the imaginary
    axis at |Im| >= 1, which happens for deeply bound states) the
    principal value is returned and a BranchCutWarning is emitted.
    """
    g = complex(g)
    k = complex(k)
    if g == 0:
        raise ValueError("J(g, k) is undefined at g = 0 (real branch point)")
    z = k / g
    if z.real == 0.0 and abs(z.imag) >= 1.0:
        warnings.warn(
            "arctan argument %r lies on the principal branch cut; "
            "principal value returned" % (z,),
            BranchCutWarning,
            stacklevel=2,
        )
    return complex(k + TWO_OVER_PI * np.arctan(z))


def bethe_residual(parity: Parity, g, k):
    """Pole-free residual whose zeros are the quasi-momentum branches.

    Even parity: k sin(pi k/2) - g cos(pi k/2).
    Odd parity:  k cos(pi k/2) + g sin(pi k/2).
    Accepts scalars or arrays; entire in both arguments, no poles.
    """
    h = 0.5 * np.pi * k
    if parity is Parity.EVEN:
        return k * np.sin(h) - g * np.cos(h)
    return k * np.cos(h) + g * np.sin(h)


def residual_k_derivative(parity: Parity, g, k):
    """d/dk of `bethe_residual` at fixed g."""
    h = 0.5 * np.pi * k
    if parity is Parity.EVEN:
        return np.sin(h) * (1.0 + 0.5 * np.pi * g) + h * np.cos(h)
    return np.cos(h) * (1.0 + 0.5 * np.pi * g) - h * np.sin(h)


def residual_scale(parity: Parity, g, k):
    """Evaluation-error magnitude of the residual, floored at 1.

    Sum of the term magnitudes plus the argument sensitivity
    |h| * |d(terms)/dh|, which is the scale of unavoidable floating
    point error in the residual.  Dividing the raw residual by this
    gives a convergence measure that stays meaningful for bound states
    (where the terms grow like exp(pi |Im k| / 2) and cancel) and for
    very large couplings (where cos or sin sits near a zero and the
    argument reduction error is amplified by g).
    """
    h = 0.5 * np.pi * k
    sh, ch = np.abs(np.sin(h)), np.abs(np.cos(h))
    ak, ag, ah = np.abs(k), np.abs(g), np.abs(h)
    if parity is Parity.EVEN:
        s = ak * sh + ag * ch + ah * (ak * ch + ag * sh)
    else:
        s = ak * ch + ag * sh + ah * (ak * sh + ag * ch)
    return np.maximum(s, 1.0)


def scaled_bethe_residual(parity: Parity, g, k) -> float:
    """|bethe_residual| / residual_scale, stable for deep bound momenta.

    Beyond |Im(pi k/2)| of about 300 the residual terms overflow the
    double range even though their quotient is well defined; rescaling
    sin and cos by exp(-|Im h|) keeps every intermediate finite without
    changing the ratio (the scale is far above its floor of 1 there).
    """
    g = complex(g)
    k = complex(k)
    h = 0.5 * np.pi * k
    y = h.imag
    if abs(y) <= 300.0:
        return float(abs(bethe_residual(parity, g, k))
                     / residual_scale(parity, g, k))
    x = h.real
    damp = np.exp(-2.0 * abs(y))
    cosh_r = 0.5 * (1.0 + damp)
    sinh_r = 0.5 * np.copysign(1.0 - damp, y)
    sin_r = complex(np.sin(x) * cosh_r, np.cos(x) * sinh_r)
    cos_r = complex(np.cos(x) * cosh_r, -np.sin(x) * sinh_r)
    sh, ch = abs(sin_r), abs(cos_r)
    ak, ag, ah = abs(k), abs(g), abs(h)
    if parity is Parity.EVEN:
        num = abs(k * sin_r - g * cos_r)
        scale = ak * sh + ag * ch + ah * (ak * ch + ag * sh)
    else:
        num = abs(k * cos_r + g * sin_r)
        scale = ak * ch + ag * sh + ah * (ak * sh + ag * ch)
    return float(num / scale)


def newton_polish(parity: Parity, g, k, *, tol=RESIDUAL_TARGET, max_steps=8):
    """A few damped Newton steps on the residual in k at fixed g.

    Returns (k, scaled_residual).  Used to tighten roots produced by
    bracketing or by continuation predictors; does not raise on
    stagnation, callers decide what residual level is acceptable.
    """
    k = complex(k)
    g = complex(g)
    best_k = k
    best = scaled_bethe_residual(parity, g, k)
    for _ in range(max_steps):
        r = bethe_residual(parity, g, k)
        dr = residual_k_derivative(parity, g, k)
        if dr == 0:
            break
        step = r / dr
        # plain damping: halve until the residual does not grow
        for _ in range(5):
            trial = k - step
            r_new = bethe_residual(parity, g, trial)
            if abs(r_new) <= abs(r) or abs(step) < 1e-16 * max(1.0, abs(k)):
                break
            step *= 0.5
        k = k - step
        scaled = scaled_bethe_residual(parity, g, k)
        if scaled < best:
            best, best_k = scaled, k
        if scaled < tol:
            return k, float(scaled)
    return best_k, float(best)


def _bound_kappa_even(g: float) -> float:
    """kappa > 0 with kappa*tanh(pi kappa/2) = -g, for n = 0, g < 0."""
    f = lambda kappa: kappa * np.tanh(0.5 * np.pi * kappa) + g
    hi = max(1.0, -g) + 1.0
    return brentq(f, 0.0, hi, xtol=1e-14)


def _bound_kappa_odd(g: float) -> float:
    """kappa > 0 with kappa/tanh(pi kappa/2) = -g, for n = 1, g < -2/pi."""

    def f(kappa):
        x = 0.5 * np.pi * kappa
        # kappa/tanh(x) -> 2/pi as kappa -> 0
        return kappa / np.tanh(x) + g if kappa > 0 else TWO_OVER_PI + g

    hi = max(1.0, -g) + 1.0
    return brentq(f, 1e-13, hi, xtol=1e-14)


def _real_bracket(n: int, g: float) -> tuple[float, float]:
    """Bracketing interval for the real root of branch n at coupling g."""
    if g > 0:
        return (float(n), float(n + 1)) if n > 0 else (0.0, 1.0)
    # g < 0 here; bound regions are handled before this is called
    if n == 1:
        return (1e-13, 1.0)
    return (float(n - 1), float(n))


def solve_k_real(n: int, g: float, *, tol: float = RESIDUAL_TARGET,
                 accept: float = RESIDUAL_ACCEPT) -> BetheState:
    """Quasi-momentum k_n(g) for real coupling g.

    Returns the branch with k_n(0) = n, continued smoothly along the
    real axis; bound regions (n = 0 with g < 0, n = 1 with g < -2/pi)
    return k on the negative imaginary axis per the lower-half-plane
    continuation convention.  Real roots come from sign-bracketed
    bisection on the pole-free residual followed by Newton polish;
    bound roots from the equivalent real equations in kappa = i*k.
    """
    if n < 0 or int(n) != n:
        raise ValueError("branch label n must be a non-negative integer")
    n = int(n)
    g = float(g)
    parity = Parity.of_level(n)

    if g == 0.0:
        return BetheState(n, 0.0, complex(n), parity)

    if n == 0 and g < 0:
        kappa = _bound_kappa_even(g)
        return BetheState(n, g, complex(0.0, -kappa), parity)
    if n == 1 and g < -TWO_OVER_PI:
        kappa = _bound_kappa_odd(g)
        return BetheState(n, g, complex(0.0, -kappa), parity)
    if n == 1 and g == -TWO_OVER_PI:
        # real branch point of the odd family: k_1 reaches zero exactly
        return BetheState(n, g, 0.0 + 0.0j, parity)

    lo, hi = _real_bracket(n, g)
    f = lambda k: np.real(bethe_residual(parity, g, k))
    try:
        root = brentq(f, lo, hi, xtol=1e-14)
    except ValueError as exc:
        if abs(g) <= 1e-12:
            # coupling below the trig evaluation noise: the root equals
            # the free value to double precision, so polish instead
            k, scaled = newton_polish(parity, g, complex(n), tol=tol)
            if scaled <= accept:
                return BetheState(n, g, complex(k.real, 0.0), parity)
        raise SolverError(
            f"no sign change for n={n}, g={g} in [{lo}, {hi}]", g=g
        ) from exc
    k, scaled = newton_polish(parity, g, root, tol=tol)
    if scaled > accept:
        raise SolverError(
            f"residual {scaled:.3e} above acceptance for n={n}, g={g}",
            g=g, k=k, residual=scaled,
        )
    # the branch is real here; discard polish round-off in Im
    return BetheState(n, g, complex(k.real, 0.0), parity)


def energy(kbar: int, state: BetheState) -> EnergyLevel:
    """Total energy E = (kbar^2 + k^2) / 2 of a two-boson level.

    kbar and the branch label must have equal parity (momentum
    superselection of the symmetric two-body problem).
    """
    if (kbar - state.n) % 2 != 0:
        raise ValueError(
            f"kbar={kbar} and n={state.n} carry different parity; "
            "no such two-boson level exists"
        )
    e = 0.5 * (kbar * kbar + state.k * state.k)
    return EnergyLevel(int(kbar), state.n, complex(e))


def asymptotic_quasimomentum(n: int, sign: int) -> int:
    """Exact integer limit of k_n at infinite coupling of the given sign.

    k_n(+inf) = n + 1 for every n; k_n(-inf) = n - 1 for n > 1.  The
    bound branches (n = 0, 1) diverge along the negative imaginary axis
    at -inf, which has no integer label; requesting them raises.
    """
    if sign not in (1, -1):
        raise ValueError("sign selects the coupling infinity: +1 or -1")
    if sign > 0:
        return n + 1
    if n > 1:
        return n - 1
    raise ValueError("bound branches have no finite quasi-momentum at g -> -inf")
