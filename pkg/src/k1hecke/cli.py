"""Command line harness: run suites, print censuses and character tables, manage the cache.

Exit codes: 0 all checks pass, 2 some check fails, 3 bad configuration or budget.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from sympy import factorint

from . import cache
from .groups import BudgetExceeded, build_group, gl_order, normalize_coweight
from .suites import ORDER, SUITES, census_rows, eta_rows

SCHEMA = 1
KINDS = ("GL", "PGL")
# rough cost model: group order beyond which a suite is refused up front
SUITE_BUDGET = {"radon": 20000, "census": 500, "loc-glob": 500, "jantzen": 20000, "bimodule": 500,
                "cusp": 100, "gl1": 20000, "centrality": 100, "orbit": 500, "eta": 100}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    N: int = 2
    q: int = 2
    kind: str = "GL"
    window: list = field(default_factory=list)
    z: int = 1
    precision: int | None = None
    suites: list | None = None
    cache_dir: str | None = None
    out: str | None = None
    timing: bool = False
    schema: int = SCHEMA

    def validate(self):
        if self.schema != SCHEMA:
            raise ConfigError(f"unsupported config schema {self.schema}")
        if self.kind not in KINDS:
            raise ConfigError(f"kind must be one of {KINDS}")
        if self.N < 1 or self.q < 2:
            raise ConfigError("need N >= 1 and q >= 2")
        if len(factorint(self.q)) != 1:
            raise ConfigError(f"q = {self.q} is not a prime power")
        if not 1 <= self.z < self.q:
            raise ConfigError("z must be a nonzero element code of F_q")
        for lam in self.window:
            if len(lam) != self.N or list(lam) != sorted(lam, reverse=True):
                raise ConfigError(f"window coweight {lam} is not dominant of rank {self.N}")
        bad = [s for s in (self.suites or []) if s not in SUITES]
        if bad:
            raise ConfigError(f"unknown suites {bad}; known: {ORDER}")
        return self

    def coweights(self):
        if self.window:
            return tuple(tuple(w) for w in self.window)
        return (normalize_coweight((1,) + (0,) * (self.N - 1), self.kind),)


def estimate(cfg: RunConfig) -> dict:
    """Group order and the suites it is too large for."""
    order = gl_order(cfg.N, cfg.q)
    if cfg.kind == "PGL":
        order //= cfg.q - 1
    suites = ORDER if cfg.suites is None else [s for s in ORDER if s in cfg.suites]
    return {"group_order": order, "over_budget": [s for s in suites if order > SUITE_BUDGET[s]]}


def _clean(x):
    """JSON-safe, deterministic rendering of check witnesses."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in sorted(x.items(), key=lambda kv: str(kv[0]))}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [_clean(v) for v in x]
        return sorted(items, key=repr) if isinstance(x, (set, frozenset)) else items
    if isinstance(x, (int, float, str, bool)) or x is None:
        return x
    if hasattr(x, "to_dict"):
        return str(x)
    return repr(x)


def run(cfg: RunConfig) -> dict:
    """Run the configured suites in dependency order and return a report."""
    cfg.validate()
    est = estimate(cfg)
    names = ORDER if cfg.suites is None else [s for s in ORDER if s in cfg.suites]
    records = []
    status = "ok"
    G = None
    if names and len(est["over_budget"]) < len(names):
        try:
            G = build_group(cfg.N, cfg.q, cfg.kind)
        except BudgetExceeded as e:
            status = "budget"
            records += [{"suite": s, "check": "*", "status": "skipped", "witness": {"reason": str(e)}}
                        for s in names]
            names = []
    halted = None
    for s in names:
        if s in est["over_budget"]:
            status = "budget"
            records.append({"suite": s, "check": "*", "status": "skipped",
                            "witness": {"reason": f"|G| = {est['group_order']} exceeds the suite budget"}})
            continue
        if halted:
            records.append({"suite": s, "check": "*", "status": "skipped",
                            "witness": {"reason": f"halted after hard error in {halted}"}})
            continue
        t = time.perf_counter()
        try:
            recs = SUITES[s](G, window=cfg.coweights() if cfg.window else None, z=cfg.z,
                             precision=cfg.precision, cache_dir=cfg.cache_dir)
        except BudgetExceeded as e:
            status = "budget"
            recs = [{"suite": s, "check": "*", "status": "skipped", "witness": {"reason": str(e)}}]
        except Exception as e:  # a hard error: record it and stop
            halted = s
            recs = [{"suite": s, "check": "*", "status": "fail",
                     "witness": {"error": f"{type(e).__name__}: {e}"}}]
        if cfg.timing:
            for r in recs:
                r["seconds"] = round(time.perf_counter() - t, 3)
        records += recs
    counts = {k: sum(r["status"] == k for r in records) for k in ("pass", "fail", "skipped")}
    return {
        "schema": SCHEMA,
        "config": {k: v for k, v in asdict(cfg).items() if k not in ("out", "cache_dir", "timing")},
        "records": [_clean(r) for r in records],
        "summary": {**counts, "status": status, "all_pass": counts["fail"] == 0 and status == "ok"},
    }


def exit_code(report: dict) -> int:
    if report["summary"]["fail"]:
        return 2
    if report["summary"]["status"] != "ok":
        return 3
    return 0


# -- rendering ---------------------------------------------------------------------

def _md_table(head, rows) -> str:
    out = ["| " + " | ".join(head) + " |", "|" + "---|" * len(head)]
    out += ["| " + " | ".join(str(c) for c in r) + " |" for r in rows]
    return "\n".join(out)


def report_markdown(rep: dict) -> str:
    c = rep["config"]
    s = rep["summary"]
    head = f"# {c['kind']}({c['N']}, F_{c['q']}) verification\n\n"
    head += f"pass {s['pass']}, fail {s['fail']}, skipped {s['skipped']}, status {s['status']}\n\n"
    rows = [(r["suite"], r["check"], r["status"].upper()) for r in rep["records"]]
    return head + _md_table(["suite", "check", "status"], rows) + "\n"


def census_markdown(doc: dict) -> str:
    c = doc["config"]
    cols = ["lambda", "A", "V", "expected", "local_oracle", "local_oracle_M+1", "global_oracle", "raw_transitions"]
    rows = [[r[k] if r[k] is not None else "-" for k in cols] for r in doc["rows"]]
    return f"# Census for {c['kind']}({c['N']}, F_{c['q']})\n\n" + _md_table(cols, rows) + "\n"


def character_markdown(doc: dict) -> str:
    c = doc["config"]
    out = [f"# Cuspidal characters of {c['kind']}(2, F_{c['q']})\n"]
    out.append(_md_table(["θ exponent", "dim", "χ on elliptic classes"],
                         [(r["pair"], r["dim"], ", ".join(f"{k}: {v}" for k, v in r["elliptic"].items()))
                          for r in doc["characters"]]))
    out.append("\n## η of divisor operators\n")
    out.append("η is extracted from the operator on V_cusp; the prediction column says which closed form it is "
               "compared with. φ_u and φ_s are the parameter-side values with the sign placed in u or in s.\n")
    out.append(_md_table(["θ", "deg D", "x", "η (computed)", "predicted", "prediction", "φ_u", "φ_s", "match"],
                         [(r["pair"], r["degree"], r["x"], r["eta"], r["predicted"], r["prediction"],
                           r["phi_u"], r["phi_s"], "yes" if r["match"] else "NO") for r in doc["eta"]]))
    return "\n".join(out) + "\n"


def character_table(cfg: RunConfig, degrees=(1, 2)) -> dict:
    from .arith import tower
    from .characters import cuspidal_characters
    from .groups import elliptic_class
    cfg.validate()
    if cfg.N != 2:
        raise ConfigError("character tables are implemented for N = 2")
    G = build_group(cfg.N, cfg.q, cfg.kind)
    T = tower(cfg.q, 2)
    ell = [x for x in T.subfield_units(2) if T.degree(x) == 2]
    chars = []
    for chi in cuspidal_characters(G, T):
        chars.append({"pair": chi.pair.j, "dim": chi.dim,
                      "elliptic": {str(x): str(chi(elliptic_class(x, G, T).representative)) for x in ell}})
    rows = []
    if cfg.kind == "PGL":
        for r in eta_rows(G, degrees):
            rows.append({k: (str(v) if k in ("eta", "predicted", "phi_u", "phi_s") else v) for k, v in r.items()}
                        | {"match": r["eta"] == r["predicted"]})
    return {"schema": SCHEMA, "config": {"N": cfg.N, "q": cfg.q, "kind": cfg.kind, "degrees": list(degrees)},
            "characters": chars, "eta": rows}


def census(cfg: RunConfig) -> dict:
    cfg.validate()
    G = build_group(cfg.N, cfg.q, cfg.kind)
    rows = census_rows(G, cfg.coweights(), cfg.precision, cfg.z, cfg.cache_dir, with_zero=True)
    return {"schema": SCHEMA, "config": {"N": cfg.N, "q": cfg.q, "kind": cfg.kind,
                                         "window": [list(w) for w in cfg.coweights()]}, "rows": rows}


# -- argument handling -----------------------------------------------------------------

def _window(text: str) -> list:
    try:
        return [[int(x) for x in part.split(",")] for part in text.split(";") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad window {text!r}; use e.g. '2,0;1,1'")


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="k1hecke", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file; flags override its keys")
        p.add_argument("--n", type=int, dest="N")
        p.add_argument("--q", type=int)
        p.add_argument("--kind", choices=KINDS)
        p.add_argument("--window", type=_window, help="dominant coweights, ';'-separated, e.g. '2,0;1,1'")
        p.add_argument("--z", type=int, help="marked point, an element code of F_q^x")
        p.add_argument("--precision", type=int)
        p.add_argument("--out", help="output stem: writes <out>.json and <out>.md")
        p.add_argument("--cache-dir", dest="cache_dir")

    r = sub.add_parser("run", help="run verification suites")
    common(r)
    r.add_argument("--suite", action="append", dest="suites",
                   help=f"suite name, repeatable or comma-separated ({', '.join(ORDER)})")
    r.add_argument("--timing", action="store_true", help="add wall-clock seconds (breaks byte-identity)")
    c = sub.add_parser("census", help="stratum and double-coset counts side by side")
    common(c)
    t = sub.add_parser("character-table", help="cuspidal characters and η values (N = 2)")
    common(t)
    t.add_argument("--degree", type=int, action="append", dest="degrees", help="divisor degrees (default 1, 2)")
    k = sub.add_parser("cache", help="inspect or clear the census cache")
    k.add_argument("action", choices=("list", "clear"))
    k.add_argument("--cache-dir", dest="cache_dir")
    return ap


def config_from_args(args) -> RunConfig:
    base = {}
    if getattr(args, "config", None):
        try:
            base = json.loads(Path(args.config).read_text())
        except (OSError, ValueError) as e:
            raise ConfigError(f"cannot read config: {e}")
    for k in ("N", "q", "kind", "window", "z", "precision", "out", "cache_dir", "timing"):
        v = getattr(args, k, None)
        if v is not None and v is not False:
            base[k] = v
    if getattr(args, "suites", None) is not None:
        base["suites"] = [s for item in args.suites for s in item.split(",") if s]
    try:
        cfg = RunConfig(**base)
    except TypeError as e:
        raise ConfigError(str(e))
    cfg.cache_dir = str(cache.cache_dir(cfg.cache_dir))
    return cfg.validate()


def _emit(doc: dict, md: str, out):
    text = json.dumps(doc, indent=1, sort_keys=True, ensure_ascii=False) + "\n"
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out + ".json").write_text(text)
        Path(out + ".md").write_text(md)
    sys.stdout.write(md)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.cmd == "cache":
            root = cache.cache_dir(args.cache_dir)
            if args.action == "list":
                ents = cache.entries(root) if root.exists() else []
                print(json.dumps({"cache_dir": str(root), "entries": ents}, indent=1, sort_keys=True))
            else:
                n = cache.clear(root) if root.exists() else 0
                print(f"removed {n} entries from {root}")
            return 0
        cfg = config_from_args(args)
        if args.cmd == "run":
            rep = run(cfg)
            _emit(rep, report_markdown(rep), cfg.out)
            return exit_code(rep)
        if args.cmd == "census":
            doc = census(cfg)
            _emit(doc, census_markdown(doc), cfg.out)
            ok = all(r["A"] == r["expected"] == r["local_oracle"] and r["V"] == r["global_oracle"]
                     for r in doc["rows"])
            return 0 if ok else 2
        doc = character_table(cfg, tuple(args.degrees or (1, 2)))
        _emit(doc, character_markdown(doc), cfg.out)
        return 0 if all(r["match"] for r in doc["eta"]) else 2
    except (ConfigError, BudgetExceeded) as e:
        print(f"error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
