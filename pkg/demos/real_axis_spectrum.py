"""Quasi-momentum branches along the real coupling axis.

Two bosons on a ring of circumference 2*pi interact through a contact
potential of strength g.  The relative-motion quasi-momentum k_n(g)
interpolates between the free values as g sweeps the real line: every
branch starts at k_n(0) = n, climbs to n + 1 in the hard-core limit
g -> +inf, and falls to n - 1 as g -> -inf.  The two lowest labels are
special: their momentum rotates onto the negative imaginary axis below
a threshold coupling (g = 0 for n = 0, g = -2/pi for n = 1), which is
the ring's two-body bound state.

Run:  python3 demos/real_axis_spectrum.py
"""

import numpy as np

from lieb2b import Parity, energy, solve_k_real


def sweep_table(levels, couplings):
    print(f"{'g':>10} | " + " | ".join(f"k_{n}(g)".center(19) for n in levels))
    print("-" * (13 + 22 * len(levels)))
    for g in couplings:
        cells = []
        for n in levels:
            k = solve_k_real(n, g).k
            if abs(k.imag) > 1e-12:
                cells.append(f"{k.imag:+.6f}j".center(19))
            else:
                cells.append(f"{k.real:+.6f}".center(19))
        print(f"{g:>10.3f} | " + " | ".join(cells))


def main():
    print("=== real-coupling spectrum of the interacting pair ===\n")

    print("Repulsive side: each level climbs from n toward n + 1.")
    sweep_table((0, 1, 2, 3), (0.0, 0.5, 2.0, 10.0, 1000.0))

    print("\nAttractive side: n >= 2 fall toward n - 1; the ground pair")
    print("acquires an imaginary momentum (a bound state, printed as +ij).")
    sweep_table((0, 1, 2, 3), (-0.05, -0.5, -2.0, -10.0))

    # kbar = 0 here, so E = k^2/2 and the deep-bound limit is -g^2/2
    print("\nDeep attraction, n = 0: k approaches -i|g| and the energy the")
    print("delta-well value -g^2/2 (up to the exponentially small remainder).")
    for g in (-4.0, -8.0, -16.0):
        state = solve_k_real(0, g)
        e = energy(0, state).energy.real
        print(f"  g = {g:7.1f}   k = {state.k.imag:+.6f}j   E = {e:12.4f}"
              f"   E + g^2/2 = {e + g * g / 2.0:+.2e}")

    print("\nThresholds: the second bound branch appears only below -2/pi.")
    for g in (-0.5, -2.0 / np.pi, -0.7, -1.0):
        k = solve_k_real(1, g).k
        kind = "bound" if k.imag < -1e-9 else "scattering"
        print(f"  g = {g:+.4f}   k_1 = {k:+.6f}   ({kind})")

    print("\nEvery root above is a zero of the quantization residual; the")
    print("largest scaled residual across this page:")
    worst = 0.0
    for n in (0, 1, 2, 3):
        for g in np.linspace(-10, 10, 81):
            worst = max(worst, solve_k_real(n, float(g)).scaled_residual())
    print(f"  {worst:.3e}")

    # parity superselection: kbar = 0 carries even n, kbar = 1 odd n
    assert Parity.of_level(0) is Parity.EVEN
    assert Parity.of_level(1) is Parity.ODD


if __name__ == "__main__":
    main()
