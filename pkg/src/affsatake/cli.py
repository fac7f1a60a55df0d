"""
Command-line driver.

    affsatake satake '{"c":0,"finite":[1],"d":3}' --type A1 --depth 6 --q 3
    affsatake identities --suite all --type A2
    affsatake corpus-check corpus/v1

Settings come from (lowest to highest precedence) built-in defaults, a flat
``key = value`` config file, ``AFFSATAKE_*`` environment variables and
command-line flags.  Output is canonical JSON (sorted keys, fixed term
order), so byte equality of two outputs is semantic equality.

Exit codes: 0 ok, 1 input error, 2 mathematical mismatch, 3 budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path

from . import affroots as AR
from . import hecke as H
from . import polyrep as P
from . import series as S
from . import spherical as SP
from . import weyl as W
from .cartan import Coweight, cartan_type
from .vcoeff import ONE, V, VINV, ZERO, VCoeff

OK, INPUT_ERROR, MISMATCH, BUDGET = 0, 1, 2, 3
ENV_PREFIX = "AFFSATAKE_"
CONFIG_KEYS = ("type", "depth", "vwindow", "q", "shells", "seed", "out")
DEFAULTS = {"type": "A1", "depth": "6", "vwindow": "0:16", "q": "sym", "shells": "40",
            "seed": "0", "out": ""}
ENUM_BUDGET = 200_000


class InputError(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class RunConfig:
    cartanType: str
    depth: int
    vmin: int
    vmax: int
    shellBudget: int
    q: str
    seed: int
    outputPath: str

    def __post_init__(self):
        if self.depth < 0:
            raise InputError("depth must be nonnegative")
        if self.shellBudget < 2:
            raise InputError("shell budget must be at least 2")
        if self.vmin > self.vmax:
            raise InputError("empty v-window")
        if self.q != "sym":
            try:
                qq = Fraction(self.q)
            except (ValueError, ZeroDivisionError):
                raise InputError(f"cannot parse q={self.q!r}") from None
            if qq <= 0:
                raise InputError("q must be positive")
        try:
            cartan_type(self.cartanType)
        except ValueError as e:
            raise InputError(str(e)) from None

    @property
    def ct(self):
        return cartan_type(self.cartanType)

    @property
    def qValue(self):
        return None if self.q == "sym" else Fraction(self.q)


def read_config_file(path) -> dict:
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read config {path}: {e.strerror}") from None
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{path}:{n}: expected key = value")
        k, v = (x.strip() for x in line.split("=", 1))
        if k not in CONFIG_KEYS:
            raise InputError(f"{path}:{n}: unknown key {k!r}")
        out[k] = v
    return out


def resolve_config(args, environ=None) -> RunConfig:
    environ = os.environ if environ is None else environ
    merged = dict(DEFAULTS)
    cfg_path = args.config or environ.get(ENV_PREFIX + "CONFIG")
    if cfg_path:
        merged.update(read_config_file(cfg_path))
    for k in CONFIG_KEYS:
        v = environ.get(ENV_PREFIX + k.upper())
        if v is not None:
            merged[k] = v
    for k in CONFIG_KEYS:
        v = getattr(args, k, None)
        if v is not None:
            merged[k] = str(v)
    try:
        lo, hi = (int(x) for x in merged["vwindow"].split(":"))
        return RunConfig(merged["type"].upper(), int(merged["depth"]), lo, hi,
                         int(merged["shells"]), merged["q"].strip().lower(),
                         int(merged["seed"]), merged["out"])
    except ValueError as e:
        raise InputError(f"bad configuration value: {e}") from None


def canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


def emit(obj, cfg: RunConfig | None, stream=None):
    text = canonical(obj)
    if cfg is not None and cfg.outputPath:
        Path(cfg.outputPath).write_text(text)
    else:
        (stream or sys.stdout).write(text)


def parse_coweight(ct, text: str) -> Coweight:
    """JSON object ``{"c":..,"finite":[..],"d":..}``, JSON list, or ``c,f1,..,d``."""
    text = text.strip()
    if text and text[0] in "{[":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as e:
            raise InputError(f"coweight JSON: {e.msg} at position {e.pos}") from None
    else:
        try:
            obj = [int(x) for x in text.split(",")]
        except ValueError:
            raise InputError(f"cannot parse coweight {text!r}") from None
    try:
        if isinstance(obj, dict):
            cw = ct.coweight(int(obj["c"]), [int(x) for x in obj["finite"]], int(obj["d"]))
        else:
            cw = ct.coweight(int(obj[0]), [int(x) for x in obj[1:-1]], int(obj[-1]))
    except (KeyError, TypeError, IndexError, ValueError) as e:
        raise InputError(f"malformed coweight {text!r}: {e}") from None
    if len(cw) != ct.rank + 2:
        raise InputError(f"coweight needs {ct.rank} finite coordinates for {ct.name}")
    return cw


def parse_word(ct, text: str | None) -> W.WeylElement:
    if not text:
        return W.identity(ct)
    try:
        word = [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise InputError(f"cannot parse word {text!r}") from None
    if any(not 1 <= i <= ct.rank + 1 for i in word):
        raise InputError(f"word letters must lie in 1..{ct.rank + 1}")
    return W.fromWord(ct, word)


def _header(cfg: RunConfig, command: str) -> dict:
    return {"command": command, "type": cfg.ct.name, "depth": cfg.depth}


# ---------------------------------------------------------------------------
# satake / jfun


def satake_envelope(cfg: RunConfig, res: SP.SatakeResult) -> dict:
    """Self-describing golden record: enough to recompute ``res``."""
    return {"type": cfg.ct.name, "depth": cfg.depth, "q": cfg.q,
            "lambda": res.lam.to_json(), "result": res.to_json()}


def cmdSatake(cfg: RunConfig, lam_text: str, golden: bool = False):
    ct = cfg.ct
    lam = parse_coweight(ct, lam_text)
    if not ct.isDominant(lam):
        raise InputError(f"{tuple(lam)} is not dominant")
    try:
        a = SP.satakeByDisassembly(ct, lam, cfg.depth, cfg.qValue, budget=cfg.shellBudget)
    except SP.ShellBudgetExceeded as e:
        raise BudgetExceeded(str(e)) from None
    if golden:
        return OK, satake_envelope(cfg, a)
    b = SP.satakeByMacdonald(ct, lam, cfg.depth, cfg.qValue)
    diff = a.series.diff_within(b.series, cfg.depth)
    rank_one = [{"a": i, "ok": SP.rankOneCheck(ct, lam, i)}
                for i, p in enumerate(ct.simple_pairings(lam), 1) if p > 0]
    defects = SP.wInvarianceDefects(a)
    out = _header(cfg, "satake")
    out.update({"disassembly": a.to_json(), "macdonald": b.to_json(),
                "diff": [mu.to_json() for mu in diff], "rankOne": rank_one,
                "wInvarianceDefects": len(defects), "audit": a.audit})
    ok = not diff and all(r["ok"] for r in rank_one) and not defects
    return (OK if ok else MISMATCH), out


def cmdJfun(cfg: RunConfig, lam_text: str, word: str | None):
    ct = cfg.ct
    lam = parse_coweight(ct, lam_text)
    if not ct.isDominant(lam):
        raise InputError(f"{tuple(lam)} is not dominant")
    w = parse_word(ct, word)
    r = SP.jFunction(ct, w, lam, "recursion")
    d = SP.jFunction(ct, w, lam, "dl")
    agree = r.terms == d.terms
    out = _header(cfg, "jfun")
    out.update({"w": list(w.reduced_word), "lambda": lam.to_json(),
                "recursion": r.to_json(), "dl": d.to_json(), "agree": agree})
    return (OK if agree else MISMATCH), out


# ---------------------------------------------------------------------------
# identity suites


def _suite_cb(cfg, rng):
    ct = cfg.ct
    D = cfg.depth
    vw = (cfg.vmin - 2, cfg.vmax + 2)
    ctx = S.TruncationContext(ct.zero(), D, vw)
    checked = 0
    bad = []
    for g in S.positive_real_coroots(ct, D):
        c, ci = S.expandCT(ct, g, ctx=ctx), S.expandCT(ct, -g, ctx=ctx)
        b, bi = S.expandB(ct, g, ctx=ctx), S.expandB(ct, -g, ctx=ctx)
        vv = S.Series(ct, ctx, {ct.zero(): V})
        vi = S.Series(ct, ctx, {ct.zero(): VINV})
        two = S.Series(ct, ctx, {ct.zero(): V + VINV})
        one = S.Series.one(ct, ctx)
        rels = {"c=v-b": (c, vv + b.scale(-ONE)),
                "c=v^-1+b(inv)": (c, vi + bi),
                "c+c(inv)": (c + ci, two),
                "c*c(inv)": (S.mul(c, ci), one + S.mul(b, bi))}
        for name, (x, y) in rels.items():
            checked += 1
            if x.diff_within(y, D):
                bad.append({"coroot": g.to_json(), "identity": name})
    return {"ok": not bad, "checked": checked, "failures": bad,
            "window": {"depth": D, "vwindow": list(vw)}}


def _random_series(ct, rng, D, nterms=3):
    """Random combination of ``e^{u lam}`` (``l(u) <= 2``) for a dominant ``lam``.

    Orbit points keep every ``w_a``-image below the anchor ``lam``.
    """
    while True:
        lam = ct.coweight(0, [rng.randint(0, 1) for _ in range(ct.rank)], 2)
        if ct.isDominant(lam):
            break
    terms = {}
    for _ in range(nterms):
        mu = H.randomWeyl(ct, rng, 2).act(lam)
        c = VCoeff.monomial(rng.choice([-2, 0, 2]), rng.choice([-1, 1, 2]))
        terms[mu] = terms.get(mu, ZERO) + c
    # T_a e^mu lives on the segment [mu, w_a mu]; a window holding every
    # w_a-image keeps T_a and T_a^2 exact
    D = max(D, *(ct.depth(W.simpleReflection(ct, a).act(mu), lam)
                 for mu in terms for a in range(1, ct.rank + 2)))
    return S.Series(ct, S.TruncationContext(lam, D), terms)


def _suite_quadratic(cfg, rng, n=6):
    """``(T_a + v^{-1})(T_a - v) = 0`` on random series, every simple ``a``."""
    ct = cfg.ct
    D = min(cfg.depth, 4)
    bad = []
    for _ in range(n):
        f = _random_series(ct, rng, D)
        for a in range(1, ct.rank + 2):
            tf = P.dlApply(a, f)
            lhs = P.dlApply(a, tf) + tf.scale(VINV - V) + f.scale(-ONE)
            if lhs.terms:
                bad.append({"a": a})
    return {"ok": not bad, "checked": n * (ct.rank + 1), "failures": bad,
            "window": {"depth": D}}


def _suite_hecke(cfg, rng, n=30):
    ct = cfg.ct
    bad = []
    for i in range(n):
        x, y, z = (H.randomElement(ct, rng) for _ in range(3))
        if (x * y) * z != x * (y * z):
            bad.append({"triple": i})
    for a in range(1, ct.rank + 2):
        Ta = H.HeckeElement.T(ct, W.simpleReflection(ct, a))
        if Ta * Ta != Ta.scale(H.QM1) + H.HeckeElement.one(ct).scale(H.Q):
            bad.append({"quadratic": a})
        if Ta * H.HeckeElement.Tinv(ct, a) != H.HeckeElement.one(ct):
            bad.append({"inverse": a})
    return {"ok": not bad, "checked": n + 2 * (ct.rank + 1), "failures": bad}


def _suite_proportionality(cfg, rng):
    ct = cfg.ct
    D = min(cfg.depth, 3)
    shells = P.symmetrize(ct, cfg.shellBudget, D, 4)
    rep = P.checkProportionality(shells)
    eig = all(P.rightEigenCheck(shells, a) for a in range(1, ct.rank + 2))
    return {"ok": bool(rep.ok and rep.m_invariant and eig), "window": rep.window,
            "checked": len(rep.checked), "mInvariant": rep.m_invariant,
            "rightEigen": eig, "failures": [str(m) for m in rep.mismatches]}


def _suite_h0(cfg, rng):
    """Symmetrizer against the product formula; the reciprocal is reported too."""
    ct = cfg.ct
    r = SP.compareHZero(ct, cfg.depth)
    return {"ok": r.matches_product, "matchesReciprocal": r.matches_reciprocal,
            "central": r.central, "certifiedTDegree": r.certified_tdeg, "shells": r.shells,
            "window": {"depth": cfg.depth},
            "firstDifferences": [{"cw": mu.to_json(), "symmetrizer": str(a), "product": str(b)}
                                 for mu, a, b in r.first_difference]}


def _suite_theta(cfg, rng, n=10):
    ct = cfg.ct
    out = []
    ok = True
    for _ in range(n):
        try:
            mu = H.sampleMultiPath(ct, rng)
        except ValueError:
            mu = H.sampleTitsCone(ct, rng)
        runs = H.thetaPaths(ct, mu)
        same = all(r.verified for r in runs) and all(r.element == runs[0].element for r in runs)
        ok &= same
        out.append({"mu": mu.to_json(), "paths": len(runs), "ok": same})
    return {"ok": ok, "checked": n, "samples": out}


SUITES = {"cb": _suite_cb, "quadratic": _suite_quadratic, "hecke": _suite_hecke,
          "proportionality": _suite_proportionality, "h0": _suite_h0, "theta": _suite_theta}


def cmdIdentities(cfg: RunConfig, suite: str):
    names = list(SUITES) if suite == "all" else [suite]
    for s in names:
        if s not in SUITES:
            raise InputError(f"unknown suite {s!r}; choose from {sorted(SUITES)} or all")
    rng = random.Random(cfg.seed)
    report = {s: SUITES[s](cfg, rng) for s in names}
    out = _header(cfg, "identities")
    out.update({"seed": cfg.seed, "suites": report})
    return (OK if all(r["ok"] for r in report.values()) else MISMATCH), out


# ---------------------------------------------------------------------------
# enumerate / theta


def cmdEnumerate(cfg: RunConfig, what: str, bound: int, word=None, lam_text=None):
    ct = cfg.ct
    out = _header(cfg, "enumerate")
    out.update({"what": what, "bound": bound})
    if bound < 0:
        raise InputError("bound must be nonnegative")
    if what == "weyl":
        est = sum(P.poincareData(ct).series(bound))
        if est > ENUM_BUDGET:
            raise BudgetExceeded(f"{est} elements exceed the enumeration budget")
        els = [{"word": list(w.reduced_word), "length": n} for w, n in W.bfsEnumerate(ct, bound)]
        out.update({"elements": els, "shellCounts": W.shellCounts(ct, bound), "count": len(els)})
    elif what == "roots":
        roots = ct.enumeratePositiveReal(max_m=bound)
        out.update({"roots": [r.to_json() for r in roots], "count": len(roots)})
    elif what == "affroots":
        est = (2 * bound + 1) ** 2 * len(ct.all_finite_roots)
        if est > ENUM_BUDGET:
            raise BudgetExceeded(f"{est} affinized roots exceed the enumeration budget")
        lam = ct.zero() if not lam_text else parse_coweight(ct, lam_text)
        x = W.ExtendedElement(parse_word(ct, word), lam)
        if not x.in_tits_part():
            raise InputError("element is not in the Tits-cone part")
        quad = {q: 0 for q in AR.QUADRANTS}
        for al in AR._bounded_affinized(ct, bound):
            quad[AR.classify(ct, al)] += 1
        rep = AR.inversionSets(x)
        out.update({"quadrantCounts": quad, "inversionSets": rep.to_json(),
                    "element": {"word": list(x.weyl.reduced_word),
                                "coweight": x.coweight.to_json()}})
        if not rep.saturated:
            return MISMATCH, out
    else:
        raise InputError(f"unknown listing {what!r}")
    return OK, out


def cmdTheta(cfg: RunConfig, mu_text: str):
    ct = cfg.ct
    mu = parse_coweight(ct, mu_text)
    if not ct.inTitsCone(mu):
        raise InputError(f"{tuple(mu)} is outside the Tits cone")
    try:
        runs = H.thetaPaths(ct, mu, seeds=(cfg.seed, cfg.seed + 1))
    except H.ThetaBudgetExceeded as e:
        raise BudgetExceeded(str(e)) from None
    same = all(r.verified for r in runs) and all(r.element == runs[0].element for r in runs)
    out = _header(cfg, "theta")
    out.update({"mu": mu.to_json(), "paths": [[[list(m), a] for m, a in r.path_signature()]
                                              for r in runs],
                "element": runs[0].element.to_json(), "independent": same})
    return (OK if same else MISMATCH), out


# ---------------------------------------------------------------------------
# golden corpus


def _recompute_golden(rec: dict) -> str:
    cfg = RunConfig(rec["type"], int(rec["depth"]), 0, 0, 40, str(rec["q"]), 0, "")
    lam = Coweight.from_json(rec["lambda"])
    res = SP.satakeByDisassembly(cfg.ct, lam, cfg.depth, cfg.qValue)
    return canonical(satake_envelope(cfg, res))


def corpusCheck(directory, regenerate: bool = False):
    d = Path(directory)
    if not d.is_dir():
        raise InputError(f"{directory} is not a directory")
    files = []
    bad = False
    for p in sorted(d.glob("*.json")):
        old = p.read_text()
        try:
            rec = json.loads(old)
        except json.JSONDecodeError as e:
            raise InputError(f"{p.name}: {e.msg} at position {e.pos}") from None
        new = _recompute_golden(rec)
        if new == old:
            files.append({"file": p.name, "status": "ok"})
            continue
        if regenerate:
            p.write_text(new)
            files.append({"file": p.name, "status": "regenerated"})
            continue
        bad = True
        files.append({"file": p.name, "status": "stale", "diff": _term_diff(old, new)})
    out = {"command": "corpus-check", "directory": str(d), "files": files}
    return (MISMATCH if bad else OK), out


def _term_diff(old: str, new: str) -> list:
    """Coweights whose coefficient differs between two golden records."""
    try:
        a = {json.dumps(t["cw"], sort_keys=True): t["coeff"]
             for t in json.loads(old)["result"]["terms"]}
    except (json.JSONDecodeError, KeyError, TypeError):
        return ["<unreadable golden record>"]
    b = {json.dumps(t["cw"], sort_keys=True): t["coeff"]
         for t in json.loads(new)["result"]["terms"]}
    return [json.loads(k) for k in sorted(set(a) | set(b)) if a.get(k) != b.get(k)]


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--type", help="Cartan type, e.g. A1, A2")
    common.add_argument("--depth", type=int, help="truncation depth below the anchor")
    common.add_argument("--vwindow", help="v-degree window vmin:vmax")
    common.add_argument("--q", help="'sym' or a positive rational")
    common.add_argument("--shells", type=int, help="shell budget (>= 2)")
    common.add_argument("--out", help="write JSON here instead of stdout")
    common.add_argument("--seed", type=int, help="seed for randomized suites")
    common.add_argument("--config", help="flat key = value config file")

    p = argparse.ArgumentParser(prog="affsatake", description=__doc__.split("\n\n")[0].strip())
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("satake", parents=[common], help="both routes for S(h_lambda)")
    s.add_argument("lam", help="dominant coweight: JSON or c,f1,..,d")
    s.add_argument("--golden", action="store_true", help="emit a golden corpus record")
    s = sub.add_parser("jfun", parents=[common], help="J_w(lambda) by recursion and DL")
    s.add_argument("lam")
    s.add_argument("--word", default="", help="comma-separated simple reflections")
    s = sub.add_parser("identities", parents=[common], help="identity suites")
    s.add_argument("--suite", default="all")
    s = sub.add_parser("enumerate", parents=[common], help="deterministic listings")
    s.add_argument("what", choices=["weyl", "roots", "affroots"])
    s.add_argument("--bound", type=int, default=2)
    s.add_argument("--word", default="")
    s.add_argument("--lam", default="")
    s = sub.add_parser("theta", parents=[common], help="theta_mu along several paths")
    s.add_argument("mu")
    s = sub.add_parser("corpus-check", parents=[common], help="recompute golden files")
    s.add_argument("directory")
    s.add_argument("--regenerate", action="store_true")
    return p


def run(argv=None, environ=None, stream=None) -> int:
    p = build_parser()
    try:
        args = p.parse_args(argv)
    except SystemExit as e:
        return INPUT_ERROR if e.code else OK
    err = sys.stderr
    try:
        cfg = resolve_config(args, environ)
        if args.command == "satake":
            code, out = cmdSatake(cfg, args.lam, args.golden)
        elif args.command == "jfun":
            code, out = cmdJfun(cfg, args.lam, args.word)
        elif args.command == "identities":
            code, out = cmdIdentities(cfg, args.suite)
        elif args.command == "enumerate":
            code, out = cmdEnumerate(cfg, args.what, args.bound, args.word, args.lam)
        elif args.command == "theta":
            code, out = cmdTheta(cfg, args.mu)
        else:
            code, out = corpusCheck(args.directory, args.regenerate)
    except InputError as e:
        err.write(f"input error: {e}\n")
        return INPUT_ERROR
    except BudgetExceeded as e:
        err.write(f"budget exceeded: {e}\n")
        return BUDGET
    if args.command != "corpus-check" and not getattr(args, "golden", False):
        out["config"] = asdict(cfg)
    emit(out, cfg, stream)
    return code


def main() -> None:
    sys.exit(run())
