"""Print how the ring couplings fall off with separation.

The hopping magnitude decays roughly as 1/d^2 away from the source
site and the density coupling as 1/d^2 as well, which is what makes
nearest-neighbor truncations workable.  On an even ring both vanish
exactly at the antipode.
"""

from critchains.lattice import coupling_table

N = 24

for q in (2, 3, 4):
    hop, dens = coupling_table(q, N)
    print(f"q = {q}, N = {N}")
    print(f"{'d':>3} {'|C1|':>12} {'C2':>12}")
    for d in range(1, N // 2 + 1):
        print(f"{d:>3} {abs(hop[d]):>12.6f} {dens[d]:>12.6f}")
    ratio = abs(hop[1]) / abs(hop[2])
    print(f"  |C1(1)|/|C1(2)| = {ratio:.3f}")
    print()
