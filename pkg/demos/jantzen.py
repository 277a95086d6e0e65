"""Jantzen flags of random lattices for GL(3, F_2)."""
import random

from k1hecke.groups import build_group
from k1hecke.loophecke import elementary_divisor_type, jantzen_flag
from k1hecke.suites import jantzen_checks, random_kappa

G = build_group(3, 2)
rng = random.Random(7)
for _ in range(5):
    kappa = random_kappa(G, rng)
    J = jantzen_flag(G, kappa)
    grE, grEp = J.gr_dims(G.F)
    print("type", elementary_divisor_type(kappa), "flag", J.flag_type(G.F),
          "gr E", {k: v for k, v in grE.items() if v}, "failures", jantzen_checks(G, kappa, rng))
