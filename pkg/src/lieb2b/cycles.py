"""Spectral cycles: Hermitian coupling sweeps and exceptional-point contours.

Two kinds of closed journeys through the coupling plane rearrange the
two-boson levels.

The Hermitian cycle runs along the real axis, g0 -> +infinity, reenters
at -infinity, and returns to g0.  Adiabatic transport of a
nondegenerate level along the real axis never mixes levels, so the only
nontrivial step is the relabeling at infinity: the branch labeled n has
k -> n + 1 at +infinity, and the branch holding that same limit at
-infinity is labeled n + 2.  The net permutation is the upward shift
n -> n + 2, with the top of a truncated family exiting.  No
differential equation is integrated; the identity is checked
numerically at a large finite proxy coupling.

The same shift is produced, two levels at a time, by closed contours in
the complex plane that enclose exceptional points.  Permutations of
closed contours are read from the frame monodromy: the adiabatic
continuation of each level around the loop, which is a signed
permutation read off exactly from the returned quasi-momenta.  The
parallel-transport matrix of the same loop carries the identical
permutation conjugated by the transport of the approach corridor (a
consequence of flatness: it depends only on the loop's homotopy class),
so its columns are not directly dominated by single entries unless the
loop is a small circle entered through a continued frame.  The two
pictures are reconciled by :func:`chained_loop_holonomy`, which
composes the small-circle transports of the individual exceptional
points in path order; its product converges to the same closed-form
chain monodromy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bethe import Parity, asymptotic_quasimomentum, energy, solve_k_real
from .continuation import ComplexPath, circle_path
from .exceptional import find_ep
from .holonomy import (HolonomyMatrix, TruncationSpec, ep_loop_holonomy,
                       frame_monodromy)

#: Distance in the coupling plane below which transport around an
#: exceptional point becomes expensive and fragile.
EP_PROXIMITY_G = 1e-3


class PathConstructionError(ValueError):
    """The requested contour cannot keep its clearance from every EP."""


class InconclusivePermutationError(RuntimeError):
    """No dominant entry: the holonomy is not close to a signed permutation."""


@dataclass(frozen=True)
class CycleResult:
    """Outcome of one closed spectral journey.

    ``permutation`` maps each starting level label to the label it
    lands on; for an exiting level the image lies outside the
    truncation and the label is repeated in ``exiting``.  ``phases``
    holds the accompanying unimodular coefficients.
    """

    g0: float
    truncation: TruncationSpec
    kbar: int
    permutation: dict
    phases: dict
    energies_before: dict
    energies_after: dict
    exiting: tuple = ()
    holonomy: HolonomyMatrix | None = None


def _family_energies(levels, g0: float, kbar: int) -> dict:
    # real g0 keeps k either real or purely imaginary, so E is real
    return {n: energy(kbar, solve_k_real(n, g0)).energy.real for n in levels}


def hermitian_cycle(g0: float, trunc: TruncationSpec, *, proxy: float = 1e6,
                    kbar: int | None = None) -> CycleResult:
    """Level bookkeeping of the real-axis cycle g0 -> +inf -> -inf -> g0.

    The flip at infinity is an index relabeling at the finite proxy
    coupling, justified by the shared integer limit of k_n(+inf) and
    k_{n+2}(-inf); the identification is verified numerically at
    +-proxy.  Adiabatic phases in the parallel-transport gauge are all
    +1.  The top retained level hands its state to a label outside the
    truncation and is reported in ``exiting``.
    """
    g0 = float(g0)
    if proxy < 1e4:
        raise ValueError("proxy coupling must be at least 1e4 to stand in for infinity")
    if abs(g0 - trunc.parity.real_branch_point) < 1e-9:
        raise ValueError(f"g0 = {g0} sits at the family's real branch point")
    if kbar is None:
        kbar = trunc.base
    levels = trunc.levels

    permutation = {}
    for n in levels:
        limit = asymptotic_quasimomentum(n, +1)
        partner = n + 2
        if asymptotic_quasimomentum(partner, -1) != limit:
            raise RuntimeError("asymptotic relabeling identity violated")
        k_out = solve_k_real(n, proxy).k
        k_in = solve_k_real(partner, -proxy).k
        if abs(k_out - k_in) > 10.0 * limit / proxy:
            raise RuntimeError(
                f"levels {n} (+proxy) and {partner} (-proxy) do not meet: "
                f"k = {k_out} vs {k_in}")
        permutation[n] = partner

    energies_before = _family_energies(levels, g0, kbar)
    energies_after = {n: energy(kbar, solve_k_real(permutation[n], g0)).energy.real
                      for n in levels}
    phases = {n: 1.0 + 0.0j for n in levels}
    return CycleResult(g0, trunc, kbar, permutation, phases,
                       energies_before, energies_after, exiting=(levels[-1],))


def _point_segment_distance(p: complex, a: complex, b: complex) -> float:
    seg = b - a
    denom = abs(seg) ** 2
    if denom == 0.0:
        return abs(p - a)
    t = ((p - a) * np.conjugate(seg)).real / denom
    t = min(1.0, max(0.0, t))
    return abs(p - (a + t * seg))


def _path_distance(p: complex, waypoints) -> float:
    return min(_point_segment_distance(p, a, b)
               for a, b in zip(waypoints, waypoints[1:]))


def n_ep_contour(g0: float, n_ep: int, parity: Parity, *,
                 clearance: float = 0.5) -> ComplexPath:
    """Closed clockwise contour from real g0 around the first n_ep EPs.

    The hexagon drops from g0 into the lower half plane, passes beneath
    the deepest enclosed exceptional point, climbs back across the real
    axis on their far left, and returns to g0 at a small positive
    height, so the interior contains exactly the exceptional points of
    the family's levels n_b + 2, ..., n_b + 2 n_ep, each wound once
    clockwise, and none of their mirror images.  (It also winds the
    family's real branch point, whose monodromy is trivial: k and -k
    describe the same state.)  Construction fails if any relevant point
    comes closer to the boundary than ``clearance``.
    """
    g0 = float(g0)
    if n_ep < 0:
        raise ValueError("the number of enclosed points cannot be negative")
    if clearance < 10.0 * EP_PROXIMITY_G:
        raise ValueError("clearance below ten times the proximity floor")
    if n_ep == 0:
        return ComplexPath([g0])

    base = parity.bound_level
    enclosed = [find_ep(base + 2 * i, verify_unique=False).g_ep
                for i in range(1, n_ep + 1)]
    sentinel = find_ep(base + 2 * (n_ep + 1), verify_unique=False).g_ep

    re_lo = min(e.real for e in enclosed)
    re_hi = max(e.real for e in enclosed)
    im_lo = min(e.imag for e in enclosed)
    if g0 < re_hi + clearance:
        raise PathConstructionError(
            f"base point {g0} is not clear of the enclosed points on the right")
    x_left = re_lo - clearance
    y_bottom = im_lo - clearance
    y_top = min(clearance, 0.45 * min(-e.imag for e in enclosed))
    waypoints = [g0, g0 + 1j * y_bottom, x_left + 1j * y_bottom,
                 x_left + 1j * y_top, g0 + 1j * y_top, g0]

    outside = [sentinel, np.conjugate(sentinel)] + [np.conjugate(e) for e in enclosed]
    for p in list(enclosed) + outside:
        d = _path_distance(complex(p), waypoints)
        if d < clearance * (1.0 - 1e-9):
            raise PathConstructionError(
                f"exceptional point at {p} lies {d:.3g} from the contour, "
                f"inside the clearance {clearance}")
    if not (x_left < sentinel.real < g0 and sentinel.imag < y_bottom):
        raise PathConstructionError(
            f"the first excluded point {sentinel} is not safely below the contour")
    return ComplexPath(waypoints)


def ep_chain_path(ns, g0: float = 1.0, radius: float = 0.05, *,
                  arc_points: int = 48, channel_depth: float = 0.05) -> ComplexPath:
    """Concatenated clockwise loops around the EPs of the given levels.

    Each loop is based at real g0 and reaches its target through the
    canonical corridor: a shallow channel just below the real axis,
    then a vertical drop to the circle's three o'clock point, with the
    drop passing to the left of every shallower exceptional point.
    This corridor choice makes the loop homotopic, in the punctured
    coupling plane, to the small-circle loop that defines the
    elementary monodromy, so the frame monodromy of the concatenated
    path is exactly the product of the elementary monodromies in path
    order (later loops acting from the left).  A corridor taking the
    wrong side of a shallower point would conjugate its factor by that
    point's monodromy instead.
    """
    g0 = float(g0)
    if g0 <= 0.0:
        raise PathConstructionError("the chain must be based at positive real coupling")
    points = {n: find_ep(n, verify_unique=False).g_ep for n in ns}
    if channel_depth <= 0 or 2.0 * channel_depth > min(-e.imag for e in points.values()):
        raise PathConstructionError("channel depth must sit well above every loop target")
    for n, e in points.items():
        a = e.real + radius
        for m, other in points.items():
            if m == n or -other.imag >= -e.imag:
                continue
            if not (a < other.real - 0.4 * radius):
                raise PathConstructionError(
                    f"drop to the level-{n} point at Re g = {a:.4f} does not "
                    f"clear the level-{m} point at {other}")

    dip = -1j * channel_depth
    waypoints = [g0]
    for n in ns:
        e = points[n]
        a = e.real + radius
        circle = circle_path(e, radius, n_points=arc_points, clockwise=True)
        waypoints += [g0 + dip, a + dip]
        waypoints += list(circle.waypoints)
        waypoints += [a + dip, g0 + dip, g0]
    return ComplexPath(waypoints)


def chained_loop_holonomy(ns, trunc: TruncationSpec, radius: float = 1e-3, *,
                          rtol: float = 1e-10) -> HolonomyMatrix:
    """Ordered product of small-circle transports around the given EPs.

    Each circle starts at its point's three o'clock position with the
    standard frame continued straight down from the real axis, so every
    factor converges to its elementary monodromy as the radius shrinks,
    and the product converges to the closed-form chain.  Loops listed
    first act first, i.e. their matrices stand rightmost in the product.
    """
    out = np.eye(trunc.n_levels, dtype=complex)
    steps = 0
    for n in ns:
        piece = ep_loop_holonomy(n, trunc, radius, rtol=rtol)
        out = piece.holonomy.matrix @ out
        steps += piece.steps
    return HolonomyMatrix(trunc, out, None, steps=steps)


def permutation_from_holonomy(hol: HolonomyMatrix, *, threshold: float = 0.9,
                              kbar: int | None = None,
                              g0: float | None = None) -> CycleResult:
    """Threshold a holonomy matrix into a permutation with phases.

    Each column must have a single dominant entry of modulus above
    ``threshold`` and the dominant rows must all be distinct; otherwise
    the permutation is inconclusive (truncation too small, contour too
    close to an exceptional point, or a corridor-conjugated matrix).
    """
    trunc = hol.truncation
    levels = trunc.levels
    if kbar is None:
        kbar = trunc.base
    v = hol.matrix

    permutation = {}
    phases = {}
    rows_taken = set()
    for j, n in enumerate(levels):
        i = int(np.argmax(np.abs(v[:, j])))
        mag = abs(v[i, j])
        if mag <= threshold:
            raise InconclusivePermutationError(
                f"level {n}: dominant coefficient {mag:.3f} is below "
                f"threshold {threshold}")
        if i in rows_taken:
            raise InconclusivePermutationError(
                f"level {n}: slot {levels[i]} already claimed, holonomy "
                "is not close to a signed permutation")
        rows_taken.add(i)
        permutation[n] = levels[i]
        phases[n] = complex(v[i, j])

    if g0 is not None:
        energies_before = _family_energies(levels, g0, kbar)
        energies_after = {n: energies_before[permutation[n]] for n in levels}
    else:
        g0 = float("nan")
        energies_before = {}
        energies_after = {}
    return CycleResult(g0, trunc, kbar, permutation, phases,
                       energies_before, energies_after, holonomy=hol)


def contour_permutation(path: ComplexPath, trunc: TruncationSpec, *,
                        threshold: float = 0.9,
                        kbar: int | None = None) -> CycleResult:
    """Continue the truncated family around a closed path and read the
    induced level permutation.

    The holonomy is the frame monodromy: each level's quasi-momentum is
    continued around the loop by Newton tracking and matched back to
    the standard levels at the base point, giving the adiabatic
    permutation and its signs exactly.  The dominance threshold is
    applied to the resulting matrix.
    """
    g_start = complex(path.waypoints[0])
    if abs(complex(path.waypoints[-1]) - g_start) > 1e-12:
        raise ValueError("permutation readout needs a closed path")
    hol = frame_monodromy(path, trunc)
    g0 = float(g_start.real) if abs(g_start.imag) < 1e-12 else None
    return permutation_from_holonomy(hol, threshold=threshold, kbar=kbar, g0=g0)
