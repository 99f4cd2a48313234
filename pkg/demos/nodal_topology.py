"""Count nodal domains and hunt for sign-respecting maps between nodal sets.

Two ideas demonstrated here:

  1. Sampling |psi|^2, linking nearby same-sign points whose connecting
     segment never crosses the node, and counting connected components gives
     an upper bound on the number of nodal domains.  For all the two-electron
     2p^2 states that bound is the known answer: 2.

  2. Whether two states share a nodal set (up to a simple symmetry) can be
     tested pointwise.  The 1D and 3P couplings of 2p^2 have different wave
     functions but their nodes map onto each other under x -> -x applied to
     one electron; the 1S coupling is genuinely different and no such map
     exists among signed per-particle axis permutations.
"""

import time

from nda.catalog import get_state
from nda.topology import (TransformSpec, count_nodal_domains,
                          find_block_transform)
from nda.topology import test_node_equivalence as node_equivalence

print("domain counts (sampled upper bounds)")
for name in ["2P_2p", "3P_2p2", "1S_2p2", "1D_2p2", "subshell_k1_l2"]:
    t0 = time.perf_counter()
    rep = count_nodal_domains(get_state(name))
    dt = time.perf_counter() - t0
    print(f"  {name:16s} {rep.n_domains} domains   "
          f"({rep.n_points} points, {dt:.1f} s)")

print("\nnode map between the 1D and 3P couplings")
flip = TransformSpec.axis_flip(2, axis=0, particle=1)
out = node_equivalence(get_state("1D_2p2"), get_state("3P_2p2"), flip,
                       n_points=100_000, seed=3)
print(f"  proposed map: flip x of electron 2")
print(f"  verdict: {out['verdict']} "
      f"(agreement {out['agreement_fraction']:.6f} on {out['n_points']} points)")

print("\nautomatic search over signed block permutations")
found = find_block_transform(get_state("1D_2p2"), get_state("3P_2p2"), seed=3)
if found is not None:
    print(f"  1D -> 3P: found, det = {found.determinant:+.0f}")

missing = find_block_transform(get_state("1S_2p2"), get_state("3P_2p2"), seed=3)
print(f"  1S -> 3P: {'found' if missing is not None else 'none found'} "
      "(the 1S node is a cone, not a plane pair -- no rigid map can work)")
