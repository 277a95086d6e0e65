"""Double cosets, bundles and the act map for GL(2, F_3).

Run: python3 demos/censuses.py
"""
from k1hecke.bundles import act_map
from k1hecke.groups import build_group
from k1hecke.suites import census_rows

G = build_group(2, 3)
print(G, "order", G.order)

# |A_λ| (double cosets) and |V_λ| (bundles with two trivializations) agree stratum by stratum
for r in census_rows(G, ((0, 0), (1, 0), (2, 0))):
    print(r["lambda"], "A:", r["A"], "V:", r["V"], "formula:", r["expected"], "oracles:",
          r["local_oracle"], r["global_oracle"])

# act: A -> V, a -> a * δ, is a bijection on each window
for w in [(1, 0), (2, 0)]:
    A = act_map(G, (w,))
    print("window", w, "size", A.matrix.nrows(), "invertible", A.is_invertible())
