"""Named verification suites.  Each returns a list of check records.

A record is {"suite", "check", "status": pass|fail|skipped, "witness"}.
Checks are deterministic: fixed seeds and canonical orderings throughout.
"""
from __future__ import annotations

import random
from math import gcd, lcm

from . import poly
from .arith import tower
from .arith import fqlinalg
from .groups import (FiniteGroup, build_group, normalize_coweight, normalize_window,
                     parabolic_datum, twisted_product, window_strata)


def _rec(suite, check, ok, witness=None, status=None):
    return {"suite": suite, "check": check, "status": status or ("pass" if ok else "fail"),
            "witness": None if ok else witness}


# -- radon ------------------------------------------------------------------------

def suite_radon(G: FiniteGroup, **_):
    from .funspace import generating_set, radon, radon_data, standard_coweights
    out = []
    for lam in standard_coweights(G.N):
        datum = parabolic_datum(lam, G)
        R = radon(datum)
        out.append(_rec("radon", f"invertible {lam}", R.is_invertible(), {"rank": R.rank()}))
        bad = radon_data(datum).equivariance_failures(generating_set(G), generating_set(G, datum.M))
        out.append(_rec("radon", f"equivariant {lam}", not bad, bad[:1]))
    return out


# -- censuses -----------------------------------------------------------------------

def census_rows(G: FiniteGroup, window, precision=None, z=1, cache_dir=None, with_zero=False):
    """|A_λ|, |V_λ|, expected twisted-product size and the raw oracles, per stratum.

    Rows found in cache_dir are re-validated against the order formula.
    """
    from . import cache
    from .bundles import raw_transition_census, stabilizer_census_global
    from .loophecke import stabilizer_census_local, _default_precision, t_power
    strata = window_strata(normalize_window(window, G.kind), G.kind)
    zero = normalize_coweight((0,) * G.N, G.kind)
    if with_zero and zero not in strata:
        strata = [zero] + strata
    rows = []
    for lam in strata:
        datum = parabolic_datum(lam, G)
        A = twisted_product(datum, "+-")
        V = twisted_product(datum, "++")
        M = precision or _default_precision(t_power(G, lam))
        expected = A.expected_size()
        row = cache.load(cache_dir, G.N, G.q, G.kind, lam, M, z, expected)
        if row is None:
            row = {"lambda": list(lam), "A": len(A), "V": len(V), "expected": expected,
                   "local_oracle": stabilizer_census_local(G, lam, M),
                   "local_oracle_M+1": stabilizer_census_local(G, lam, M + 1),
                   "global_oracle": stabilizer_census_global(G, lam),
                   "raw_transitions": (raw_transition_census(G, lam, max(abs(x) for x in lam))
                                       if G.kind == "GL" else None)}
            cache.store(cache_dir, G.N, G.q, G.kind, lam, M, z, row)
        rows.append(row)
    return rows


def suite_census(G: FiniteGroup, window=None, precision=None, z=1, cache_dir=None, **_):
    window = window or (normalize_coweight((1,) + (0,) * (G.N - 1), G.kind),)
    out = []
    for r in census_rows(G, window, precision, z, cache_dir):
        lam = tuple(r["lambda"])
        out.append(_rec("census", f"local {lam}", r["A"] == r["local_oracle"] == r["local_oracle_M+1"], r))
        out.append(_rec("census", f"global {lam}", r["V"] == r["global_oracle"], r))
        if r["raw_transitions"] is not None:
            out.append(_rec("census", f"raw transitions {lam}", r["raw_transitions"] == r["V"], r))
    return out


# -- local/global ------------------------------------------------------------------

def suite_loc_glob(G: FiniteGroup, window=None, z=1, **_):
    from .bundles import act_map, graded_act_matrix, predicted_graded_act
    window = window or (normalize_coweight((1,) + (0,) * (G.N - 1), G.kind),)
    A = act_map(G, window, z)
    out = [_rec("loc-glob", f"act invertible on {list(map(list, normalize_window(window, G.kind)))}",
                A.is_invertible(), {"rank": A.rank(), "size": A.matrix.nrows()})]
    for lam in window_strata(normalize_window(window, G.kind), G.kind):
        got = graded_act_matrix(G, lam, z)
        want = predicted_graded_act(G, lam)
        ok = {k: int(v) for k, v in got.items()} == {k: int(v) for k, v in want.items()}
        out.append(_rec("loc-glob", f"graded act = intertwining operator {lam}", ok))
    return out


# -- bimodule / ι -----------------------------------------------------------------

def suite_bimodule(G: FiniteGroup, window=None, z=1, samples: int = 8, seed: int = 0, **_):
    from .bundles import delta_point, hecke_act, iota, v_space
    from .loophecke import (HeckeElement, convolve_hecke, e_fin, group_element_delta, hecke_basis)
    one = normalize_coweight((1,) + (0,) * (G.N - 1), G.kind)
    zero = normalize_coweight((0,) * G.N, G.kind)
    two = normalize_coweight((2,) + (0,) * (G.N - 1), G.kind)
    rng = random.Random(seed)
    out = []
    V = v_space(G, (zero, one, two))
    B = hecke_basis(G, one)
    pts = [k for k in B.points if k[0] == one]
    bad = []
    d = V.index[delta_point(G, z)]
    for _ in range(samples):
        a = HeckeElement(B, {rng.choice(B.points): 1})
        b = HeckeElement(B, {rng.choice(B.points): 1})
        v = {d: 1}
        l = hecke_act("0", a, hecke_act("inf", b, v, V, z), V, z)
        r = hecke_act("inf", b, hecke_act("0", a, v, V, z), V, z)
        if l != r:
            bad.append({"a": list(a.values), "b": list(b.values)})
    out.append(_rec("bimodule", "actions at 0 and ∞ commute", not bad, bad[:1]))
    B0 = hecke_basis(G, zero)
    bad = [g for g in range(G.order)
           if iota(group_element_delta(G, g, B0), z) != group_element_delta(G, int(G.inv[g]), B0)]
    out.append(_rec("bimodule", "ι(δ_g) = δ_{g^-1}", not bad, bad[:1]))
    # ι fixes e_fin A e_fin inside the window
    Bw = hecke_basis(G, one)
    ef = e_fin(G, Bw)
    bad = []
    for key in sorted(Bw.points)[: max(samples, 4)]:
        x = convolve_hecke(convolve_hecke(ef, HeckeElement(Bw, {key: 1}), Bw), ef, Bw)
        if iota(x, z) != x:
            bad.append(key)
    out.append(_rec("bimodule", "ι = id on e_fin A e_fin", not bad, bad[:1]))
    bad = []
    for _ in range(samples):
        a = HeckeElement(B, {rng.choice(B.points): 1})
        b = HeckeElement(B, {rng.choice(B.points): 1})
        if iota(convolve_hecke(a, b), z) != convolve_hecke(iota(b, z), iota(a, z)):
            bad.append({"a": list(a.values), "b": list(b.values)})
    out.append(_rec("bimodule", "ι(ab) = ι(b)ι(a)", not bad, bad[:1]))
    return out


# -- cuspidal part ------------------------------------------------------------------

def suite_cusp(G: FiniteGroup, window=None, **_):
    from .bundles import trivial_stratum_identification, v_cuspidal_projector, v_space
    from .funspace import cuspidal_projector
    if G.kind != "PGL":
        return [_rec("cusp", "cuspidal projector", True, status="skipped")]
    zero = normalize_coweight((0,) * G.N, G.kind)
    one = normalize_coweight((1,) + (0,) * (G.N - 1), G.kind)
    two = normalize_coweight((2,) + (0,) * (G.N - 1), G.kind)
    V = v_space(G, window or (zero, one, two))
    P = v_cuspidal_projector(V)
    z = set(V.stratum_indices(zero))
    off = [i for i in range(V.size) if i not in z]
    killed = all(P.entry(i, j) == 0 and P.entry(j, i) == 0 for j in off for i in range(V.size))
    C = cuspidal_projector(G)
    idx = list(V.stratum_indices(zero))
    ident = trivial_stratum_identification(V)
    same = all(P.entry(idx[a], idx[b]) == C.entry(ident[a], ident[b])
               for a in range(len(idx)) for b in range(len(idx)))
    return [_rec("cusp", "projector kills strata λ ≠ 0", killed),
            _rec("cusp", "projector restricts to F_cusp(G(k)) on stratum 0", same, {"rank": P.rank()})]


# -- divisor operators ------------------------------------------------------------------

def suite_gl1(G: FiniteGroup, i_max: int = 3, **_):
    from .divhecke import gl1_centdiv_suite
    if G.N != 1:
        return [_rec("gl1", "GL(1) eigenvalues", True, status="skipped")]
    r = gl1_centdiv_suite(G.q, i_max)
    return [_rec("gl1", f"eigenvalue = φ on {r['checks']} (character, D, f) triples",
                 not r["failures"], r["failures"][:1])]


def suite_centrality(G: FiniteGroup, degrees=(1, 2), **_):
    from .divhecke import centrality_check, divisor_hecke
    out = []
    for i in degrees:
        D = tower(G.q, i).divisors_of_degree(i)[0]
        r = centrality_check(divisor_hecke(G, D), full_gxg=G.order <= 48)
        for c in r["checks"]:
            out.append(_rec("centrality", f"deg {i}: {c['name']}", c["status"] == "pass", c["witness"]))
    return out


def suite_orbit(G: FiniteGroup, **_):
    from .bundles import central_point_element
    from .divhecke import modifications
    from .groups import elliptic_class
    out = []
    T = tower(G.q, G.N)
    zero = normalize_coweight((0,) * G.N, G.kind)
    cen = normalize_coweight((1,) * G.N, G.kind)
    tp = twisted_product(parabolic_datum(zero, G), "++")
    for D in T.divisors_of_degree(G.N):
        corr = set()
        for pt in range(len(tp)):
            g2 = central_point_element(G, zero, pt)
            for (mu, p2), _m in modifications(G, zero, pt, D).items():
                if mu == cen:
                    corr.add((central_point_element(G, cen, p2), g2))
        Om = set(elliptic_class(D.rep, G, T).members)
        want = {(a, int(G.mul[G.inv[o], a])) for a in range(G.order) for o in Om}
        out.append(_rec("orbit", f"x = {D.rep}", corr == want,
                        {"correspondence": len(corr), "predicted": len(want)}))
    return out


def eta_rows(G: FiniteGroup, degrees=(1, 2), T=None):
    """Per cuspidal π, divisor D: computed η against the closed-form predictions."""
    from .characters import cuspidal_characters, eta, lifted_value
    from .divhecke import cuspidal_parameter, divisor_hecke, eval_phi
    from .groups import elliptic_class
    # odd degrees get their own tower: avoids building k_{lcm} for mixed degree lists
    top = lcm(G.N, *(i for i in degrees if i % G.N == 0))
    T = T or tower(G.q, top)
    rows = []
    for chi in cuspidal_characters(G, T):
        for i in degrees:
            DT = T if top % i == 0 else tower(G.q, i)
            for D in DT.divisors_of_degree(i):
                op = divisor_hecke(G, D)
                e = eta(op, chi)
                if i % G.N:
                    pred, source = 0, "zero (i not divisible by N)"
                elif i == G.N:
                    pred, source = chi(elliptic_class(D.rep, G, DT).representative), "χ_π(x)"
                else:
                    pred, source = lifted_value(chi.pair, i // G.N, D.rep, DT), "−Σ θ(Norm x)^{q^j}"
                level = lcm(i, G.N)
                phi = {c: eval_phi(cuspidal_parameter(G.q, G.N, chi.pair.j, c).relevel(level), D)
                       for c in ("u", "s")}
                rows.append({"pair": chi.pair.j, "dim": chi.dim, "degree": i, "x": D.rep, "eta": e,
                             "predicted": pred, "prediction": source, "phi_u": phi["u"], "phi_s": phi["s"]})
    return rows


def suite_eta(G: FiniteGroup, degrees=(1, 2), **_):
    if G.N != 2 or G.kind != "PGL":
        return [_rec("eta", "η extraction", True, status="skipped")]
    out = []
    for r in eta_rows(G, degrees):
        out.append(_rec("eta", f"pair {r['pair']} deg {r['degree']} x={r['x']}: η = {r['prediction']}",
                        r["eta"] == r["predicted"], {"eta": repr(r["eta"]), "predicted": repr(r["predicted"])}))
    return out


# -- Jantzen ----------------------------------------------------------------------------

def random_kappa(G: FiniteGroup, rng: random.Random, max_exp: int = 3, degree: int = 2):
    """x·t^μ·y with x, y polynomial matrices invertible mod t and μ random."""
    from .loophecke import random_loop_group_element
    F = G.F
    mu = sorted((rng.randint(-1, max_exp) for _ in range(G.N)), reverse=True)
    return poly.mat_mul(poly.mat_mul(random_loop_group_element(G, rng, degree), poly.diag_monomials(F, mu)),
                        random_loop_group_element(G, rng, degree))


def jantzen_checks(G: FiniteGroup, kappa, rng: random.Random) -> list[str]:
    """Failures of the three Jantzen properties for one κ (empty list = all hold)."""
    from .loophecke import elementary_divisor_type, jantzen_flag, random_loop_group_element, subspace_image
    F = G.F
    bad = []
    J = jantzen_flag(G, kappa)
    if J.flag_type(F) != elementary_divisor_type(kappa):
        bad.append("flag type ≠ elementary divisors")
    grE, grEp = J.gr_dims(F)
    for i in grE:
        if i in grEp and grE[i] != grEp[i]:
            bad.append(f"dim gr_{i}(E) ≠ dim gr_{-i}(E')")
            break
    x = random_loop_group_element(G, rng, 1)
    y = random_loop_group_element(G, rng, 1)
    J2 = jantzen_flag(G, poly.mat_mul(poly.mat_mul(x, kappa), y))
    yinv = fqlinalg.inverse(F, poly.at_zero(y))
    x0 = poly.at_zero(x)
    n = G.N
    for i in range(min(J.lo, J2.lo), max(J.hi, J2.hi) + 1):
        if fqlinalg.row_space(F, J2.E(i), n) != subspace_image(F, yinv, J.E(i)):
            bad.append(f"E_{i}(xκy) ≠ y(0)^-1 E_{i}(κ)")
            break
        if fqlinalg.row_space(F, J2.Eprime(-i), n) != subspace_image(F, x0, J.Eprime(-i)):
            bad.append(f"E'_{-i}(xκy) ≠ x(0) E'_{-i}(κ)")
            break
    return bad


def suite_jantzen(G: FiniteGroup, samples: int = 500, seed: int = 0, **_):
    rng = random.Random(seed)
    fails = []
    for s in range(samples):
        kappa = random_kappa(G, rng)
        bad = jantzen_checks(G, kappa, rng)
        if bad:
            fails.append({"sample": s, "failures": bad})
    return [_rec("jantzen", f"{samples} random κ", not fails, fails[:1])]


SUITES = {
    "radon": suite_radon,
    "census": suite_census,
    "loc-glob": suite_loc_glob,
    "bimodule": suite_bimodule,
    "cusp": suite_cusp,
    "gl1": suite_gl1,
    "centrality": suite_centrality,
    "orbit": suite_orbit,
    "eta": suite_eta,
    "jantzen": suite_jantzen,
}

ORDER = ["radon", "census", "loc-glob", "jantzen", "bimodule", "cusp", "gl1", "centrality", "orbit", "eta"]
