"""Divisor Hecke operators acting on the cuspidal part of V for PGL(2, F_3).

Run: python3 demos/eta_values.py   (about a minute; degree 4 is the slow part)
"""
from k1hecke.arith import tower
from k1hecke.characters import cuspidal_characters, eta, lifted_value
from k1hecke.divhecke import cuspidal_parameter, divisor_hecke, eval_phi
from k1hecke.groups import build_group

q = 3
G = build_group(2, q, "PGL")
T = tower(q, 4)
(chi,) = cuspidal_characters(G, T)
print("cuspidal character: θ exponent", chi.pair.j, "dim", chi.dim)

for i in (1, 2, 4):
    for D in T.divisors_of_degree(i)[:4]:
        e = eta(divisor_hecke(G, D), chi)
        line = f"deg {i} x={D.rep:<3} η = {e}"
        if i == 4:
            par = cuspidal_parameter(q, 2, chi.pair.j, "s").relevel(4)
            line += f"   φ (s in SL2) = {eval_phi(par, D)}   -(θ(Nx)+θ(Nx)^q) = {lifted_value(chi.pair, 2, D.rep, T)}"
        print(line)
