"""Identity harness over a built-in corpus of small groups.

Each check row records one computed-order identity: the ambient order
formula, derived-subgroup and kernel factorizations, pairing images
against the lower central series, power-order oracles for abelian
entries, divisibility bounds from the quadratic functor, and the
generator-level commutator relation.  Failures are data, not exceptions;
builds that trip a size or scan limit report a skip.
"""

from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product

from .abelian import gamma_whitehead, z_tensor_power
from .actions import ActionPair, check_compatibility
from .coset_enum import EnumLimits
from .errors import LimitExceeded, SizeLimitError
from .homology import h2_via_cocycles, h2_via_wedge
from .permgrp import (PermGroup, PresentedGroup, abelian_invariants,
                      cayley_presentation, perm_commutator, perm_conjugate,
                      perm_inverse, perm_mul, perm_pow, realize)
from .presentation import parse_presentation
from .tensor import (TensorGroup, TensorPowerTower, delta_subgroup,
                     exterior_product, lambda_n_map, tensor_commutator_check,
                     tensor_power, tensor_with_subgroup)

VERIFY_LIMITS = EnumLimits(max_cosets=60_000, scan_budget=120_000_000)

# dual-route homology rows stop here: the cocycle system has |G|^2 columns
# and |G|^3 candidate rows, so larger entries cost minutes, not seconds
H2_ROUTE_CAP = 16

SUITES = ("identity", "schur-baer", "all")


@dataclass(frozen=True)
class CorpusEntry:
    gid: str
    text: str
    order: int
    family: str

    def realize(self) -> PresentedGroup:
        pg = realize(parse_presentation(self.text), name=self.gid)
        if pg.order() != self.order:
            raise ValueError(
                f"corpus entry {self.gid} enumerates to {pg.order()}, "
                f"expected {self.order}")
        return pg


def _cyclic(n: int) -> CorpusEntry:
    rel = "a" if n == 1 else f"a^{n}"
    return CorpusEntry(f"C{n}", f"< a | {rel} >", n, "cyclic")


def _dihedral(n: int) -> CorpusEntry:
    return CorpusEntry(f"D{n}", f"< r, s | r^{n}, s^2, [r, s] r^2 >",
                       2 * n, "dihedral")


_NAMED = [
    CorpusEntry("V4", "< a, b | a^2, b^2, [a, b] >", 4, "named"),
    CorpusEntry("Z2^3", "< a, b, c | a^2, b^2, c^2, [a, b], [a, c], [b, c] >",
                8, "named"),
    CorpusEntry("Q8", "< i, j | i^4, j^2 i^-2, j^-1 i j i >", 8, "named"),
    CorpusEntry("S3", "< s, r | s^2, r^3, (s r)^2 >", 6, "named"),
    CorpusEntry("A4", "< a, b | a^3, b^2, (a b)^3 >", 12, "named"),
    CorpusEntry("S4", "< a, b | a^4, b^2, (a b)^3 >", 24, "named"),
    CorpusEntry("H27", "< a, b, c | a^3, b^3, c^3, [a, b] c^-1, [a, c], "
                "[b, c] >", 27, "named"),
    CorpusEntry("C3:C4", "< a, b | a^3, b^4, b^-1 a b a >", 12, "named"),
]


def builtin_corpus() -> list[CorpusEntry]:
    entries = [_cyclic(n) for n in range(1, 13)]
    entries += [_dihedral(n) for n in range(3, 7)]
    entries += _NAMED
    return entries


def load_corpus(path: str) -> list[CorpusEntry]:
    """Corpus file: a JSON array of {id, presentation, order[, family]}."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, list):
        raise ValueError("corpus file must hold a JSON array")
    out = []
    for item in data:
        out.append(CorpusEntry(item["id"], item["presentation"],
                               int(item["order"]),
                               item.get("family", "custom")))
    return out


@dataclass(frozen=True)
class CheckResult:
    check: str
    group: str
    params: dict
    verdict: str
    witness: dict
    seconds: float

    def verdict_text(self) -> str:
        return "skipped(limit)" if self.verdict == "skipped" else self.verdict

    def sort_key(self) -> tuple:
        return (self.group, self.check,
                json.dumps(self.params, sort_keys=True))

    def to_json(self) -> dict:
        # timing deliberately left out: result files must be byte-stable
        return {"check": self.check, "group": self.group,
                "params": self.params, "verdict": self.verdict,
                "witness": self.witness}


def _run(check: str, group: str, params: dict, fn) -> CheckResult:
    t0 = time.perf_counter()
    try:
        ok, witness = fn()
        verdict = "pass" if ok else "fail"
    except (LimitExceeded, SizeLimitError) as e:
        verdict, witness = "skipped", {"limit": str(e)}
    except Exception as e:  # internal consistency trips count as failures
        verdict, witness = "fail", {"error": f"{type(e).__name__}: {e}"}
    return CheckResult(check, group, params, verdict, witness,
                       time.perf_counter() - t0)


class _GroupContext:
    """Shared expensive objects for one corpus entry: the realized group,
    its power tower, and the exterior square of level 2."""

    def __init__(self, entry: CorpusEntry, limits: EnumLimits):
        self.entry = entry
        self.limits = limits
        self.pg = entry.realize()
        self.lcs = self.pg.group.lower_central_series()
        self.ab = abelian_invariants(self.pg.group)
        self.is_abelian = self.pg.group.is_abelian()
        self.tower = TensorPowerTower(self.pg, limits=limits)
        self._ext = None
        self._level_err: dict[int, Exception] = {}

    def gamma(self, n: int) -> PermGroup:
        return self.lcs[min(n - 1, len(self.lcs) - 1)]

    def level(self, n: int) -> TensorGroup:
        # a level that tripped a limit once will trip it again: replay
        # the exception instead of re-running the estimate machinery
        if n in self._level_err:
            raise self._level_err[n]
        try:
            return self.tower.level(n)
        except (LimitExceeded, SizeLimitError) as e:
            self._level_err[n] = e
            raise

    def square(self) -> TensorGroup:
        return self.level(2)

    def exterior(self):
        if self._ext is None:
            self._ext = exterior_product(self.square())
        return self._ext


def _check_nu_order(ctx: _GroupContext):
    t = ctx.square()
    expected = ctx.pg.order() ** 2 * t.order
    w = {"group_order": ctx.pg.order(), "tensor_order": t.order,
         "ambient_order": t.ambient_order, "expected_ambient": expected}
    return t.ambient_order == expected, w


def _check_nu_derived(ctx: _GroupContext):
    # the ambient group's coset action is faithful here, so the derived
    # order is the ambient order over the abelianization's
    t = ctx.square()
    ab = t.ambient_abelianization().order()
    nu_prime = t.ambient_order // ab
    g_prime = ctx.pg.group.derived_subgroup().order()
    kernel = t.lam_g_idx.count(0)
    w = {"nu_derived": nu_prime, "nu_abelianized": ab,
         "g_derived": g_prime, "kernel_lambda2": kernel,
         "expected": g_prime ** 3 * kernel}
    return nu_prime == g_prime ** 3 * kernel, w


def _check_kernel_factorization(ctx: _GroupContext):
    t = ctx.square()
    kernel = t.lam_g_idx.count(0)
    delta = delta_subgroup(t).order()
    h2 = ctx.exterior().kernel.order()
    w = {"kernel_lambda2": kernel, "delta": delta, "h2": h2,
         "product": delta * h2}
    return kernel == delta * h2, w


def _check_lambda_image(ctx: _GroupContext, n: int):
    t = ctx.level(n)
    hom = lambda_n_map(ctx.tower, n)
    image = hom.image().order()
    gamma = ctx.gamma(n).order()
    w = {"image": image, "gamma": gamma, "kernel": t.order // image,
         "level_order": t.order}
    return image == gamma, w


def _check_kernel_central(ctx: _GroupContext):
    t = ctx.square()
    kernel = t.lam_g_idx.count(0)
    if t.t_group.is_abelian():
        return True, {"kernel": kernel, "center": t.order,
                      "note": "tensor is abelian"}
    kernel_rows = [t.cayley_row(i) for i in range(t.order)
                   if t.lam_g_idx[i] == 0]
    center = t.t_group.center()
    ok = all(row in center for row in kernel_rows)
    w = {"kernel": kernel, "center": center.order()}
    return ok, w


def _check_abelian_power(ctx: _GroupContext, n: int):
    t = ctx.level(n)
    oracle = z_tensor_power(ctx.ab, n)
    w = {"level_order": t.order, "oracle_order": oracle.order(),
         "invariants": t.tensor_abelianization().serialize(),
         "oracle_invariants": oracle.serialize()}
    return t.order == oracle.order(), w


def _check_h2_routes(ctx: _GroupContext):
    wedge = h2_via_wedge(ctx.square())
    cocycles = h2_via_cocycles(ctx.pg.group)
    w = {"wedge": wedge.serialize(), "cocycles": cocycles.serialize()}
    return wedge == cocycles, w


def _index_generators(t: TensorGroup, indices: list[int]) -> list[int]:
    """Greedy generating subset of a subgroup given by element indices,
    closed under the tensor's own multiplication table."""
    want = set(indices)
    gens: list[int] = []
    known = {0}
    for i in indices:
        if i in known:
            continue
        gens.append(i)
        rows = [t.cayley_row(g) for g in gens]
        known = {0}
        frontier = [0]
        while frontier:
            x = frontier.pop()
            for row in rows:
                y = row[x]
                if y not in known:
                    known.add(y)
                    frontier.append(y)
        if known == want:
            break
    return gens


def _check_gamma_divisibility(ctx: _GroupContext, n: int):
    gam_n = ctx.gamma(n)
    gam_next = ctx.gamma(n + 1)
    if gam_n.order() == 1:
        return True, {"gamma_n": 1, "note": "series already trivial"}
    if n == 1:
        t = ctx.square()
        ex = ctx.exterior()
    else:
        t = tensor_with_subgroup(ctx.pg, gam_n, limits=ctx.limits)
        ex = exterior_product(t)
    image = len(set(t.lam_g_idx))
    k_tensor = t.lam_g_idx.count(0)
    k_wedge = ex.kernel.order()
    gens = _index_generators(t, [i for i in range(t.order)
                                 if t.lam_g_idx[i] == 0])
    pushed = PermGroup([ex.onto.apply(t.cayley_row(i)) for i in gens],
                       ex.group.degree)
    surjective = pushed.order() == k_wedge
    quot, _ = gam_n.quotient(gam_next)
    gw = gamma_whitehead(abelian_invariants(quot)).order()
    w = {"bracket_image": image, "gamma_next": gam_next.order(),
         "k_tensor": k_tensor, "k_wedge": k_wedge,
         "gamma_functor": gw, "surjective": surjective}
    ok = (image == gam_next.order() and surjective
          and k_tensor % k_wedge == 0
          and gw % (k_tensor // k_wedge) == 0)
    return ok, w


def _left_normed(perms):
    acc = perms[0]
    for p in perms[1:]:
        acc = perm_commutator(acc, p)
    return acc


def _check_commutator_power(ctx: _GroupContext):
    """Left-normed commutators with a powered last entry agree with the
    powered commutator modulo the next lower central term; for nilpotent
    groups the sweep over generator tuples is exhaustive."""
    gens = ctx.pg.gen_perms
    exponent = ctx.ab.exponent() or 1
    nclass = len([term for term in ctx.lcs if term.order() > 1])
    checked = 0
    for k in range(2, nclass + 2):
        gam_k = ctx.gamma(k)
        for tup in product(gens, repeat=k - 2):
            for last in gens:
                base = _left_normed(list(tup) + [last])
                for m in range(1, exponent + 1):
                    powered = _left_normed(list(tup) + [perm_pow(last, m)])
                    diff = perm_mul(powered,
                                    perm_inverse(perm_pow(base, m)))
                    checked += 1
                    if diff not in gam_k:
                        w = {"k": k, "m": m, "checked": checked}
                        return False, w
    return True, {"checked": checked, "class": nclass,
                  "exponent": exponent}


def _check_tensor_commutator(ctx: _GroupContext):
    rep = tensor_commutator_check(ctx.square())
    w = rep.to_json()
    return rep.ok, w


def finiteness_check(g: PresentedGroup, n: int,
                             limits: EnumLimits | None = None) -> CheckResult:
    """Build the n-th tensor power and record its explicit finite order.
    Only this direction is desk-checkable; the converse is not."""
    limits = limits or VERIFY_LIMITS
    gid = g.name or "g"

    def body():
        tower = tensor_power(g, n, limits=limits)
        orders = {str(k): tower.level(k).order
                  for k in range(2, n + 1)}
        return True, {"order": tower.level(n).order, "by_level": orders}

    return _run("finiteness", gid, {"n": n}, body)


def _finiteness_rows(ctx: _GroupContext) -> list[CheckResult]:
    rows = []
    for n in (2, 3):
        def body(n=n):
            t = ctx.level(n)
            return True, {"order": t.order}
        rows.append(_run("finiteness", ctx.entry.gid, {"n": n}, body))
    return rows


def identity_checks_for_group(entry: CorpusEntry,
                              limits: EnumLimits | None = None
                              ) -> list[CheckResult]:
    gid = entry.gid
    limits = limits or VERIFY_LIMITS
    try:
        ctx = _GroupContext(entry, limits)
    except Exception as e:
        return [CheckResult("corpus-entry", gid, {}, "fail",
                            {"error": f"{type(e).__name__}: {e}"}, 0.0)]
    rows = [
        _run("nu-order", gid, {}, lambda: _check_nu_order(ctx)),
        _run("nu-derived-order", gid, {}, lambda: _check_nu_derived(ctx)),
        _run("kernel-factorization", gid, {},
             lambda: _check_kernel_factorization(ctx)),
        _run("kernel-central", gid, {"n": 2},
             lambda: _check_kernel_central(ctx)),
    ]
    for n in (2, 3, 4):
        rows.append(_run("lambda-image", gid, {"n": n},
                         lambda n=n: _check_lambda_image(ctx, n)))
    if ctx.is_abelian:
        for n in (2, 3):
            rows.append(_run("abelian-power", gid, {"n": n},
                             lambda n=n: _check_abelian_power(ctx, n)))
    if ctx.pg.order() <= H2_ROUTE_CAP:
        rows.append(_run("h2-routes", gid, {},
                         lambda: _check_h2_routes(ctx)))
    for n in (1, 2, 3):
        rows.append(_run("gamma-divisibility", gid, {"n": n},
                         lambda n=n: _check_gamma_divisibility(ctx, n)))
    if ctx.lcs[-1].order() == 1:
        rows.append(_run("commutator-power", gid, {},
                         lambda: _check_commutator_power(ctx)))
    rows.append(_run("tensor-commutator", gid, {},
                     lambda: _check_tensor_commutator(ctx)))
    rows.extend(_finiteness_rows(ctx))
    return rows


def run_identity_suite(corpus: list[CorpusEntry] | None = None,
                       limits: EnumLimits | None = None,
                       jobs: int = 1) -> list[CheckResult]:
    corpus = corpus if corpus is not None else builtin_corpus()
    limits = limits or VERIFY_LIMITS
    if jobs <= 1:
        groups = [identity_checks_for_group(e, limits) for e in corpus]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            groups = list(pool.map(
                lambda e: identity_checks_for_group(e, limits), corpus))
    out = [row for rows in groups for row in rows]
    return sorted(out, key=CheckResult.sort_key)


def schur_baer_divisibility(h: PresentedGroup, n: int,
                            limits: EnumLimits | None = None) -> CheckResult:
    """For N = the n-th upper central term and G = H/N, the (n+1)-st
    tensor power of G surjects onto the (n+1)-st lower central term of H,
    so the term's order must divide the power's order."""
    limits = limits or VERIFY_LIMITS
    gid = h.name or "h"

    def body():
        lcs = h.group.lower_central_series()
        gamma_next = lcs[min(n, len(lcs) - 1)].order()
        ucs = h.group.upper_central_series()
        zn = ucs[min(n, len(ucs) - 1)]
        if zn.order() == h.order():
            ok = gamma_next == 1
            return ok, {"quotient_order": 1, "gamma_next": gamma_next,
                        "tensor_power": 1}
        quot, _ = h.group.quotient(zn)
        qpres = cayley_presentation(quot, prefix="q",
                                    name=f"{gid}/Z{n}")
        tower = tensor_power(qpres, n + 1, limits=limits)
        power = tower.level(n + 1).order
        ok = power % gamma_next == 0
        return ok, {"quotient_order": quot.order(), "z_n": zn.order(),
                    "gamma_next": gamma_next, "tensor_power": power}

    return _run("schur-baer", gid, {"n": n}, body)


SCHUR_BAER_CASES = [("D4", 1), ("D4", 2), ("Q8", 1), ("Q8", 2),
                    ("D6", 1), ("D6", 2), ("H27", 1), ("H27", 2),
                    ("V4", 1), ("C6", 2)]


def run_schur_baer_suite(corpus: list[CorpusEntry] | None = None,
                         limits: EnumLimits | None = None
                         ) -> list[CheckResult]:
    corpus = corpus if corpus is not None else builtin_corpus()
    limits = limits or VERIFY_LIMITS
    by_id = {e.gid: e for e in corpus}
    rows = []
    for gid, n in SCHUR_BAER_CASES:
        if gid not in by_id:
            continue
        rows.append(schur_baer_divisibility(by_id[gid].realize(), n,
                                            limits=limits))
    return sorted(rows, key=CheckResult.sort_key)


def _control_pair() -> tuple[ActionPair, PresentedGroup]:
    v4 = realize(parse_presentation("< a, b | a^2, b^2, [a, b] >"),
                 name="control")
    a, b = v4.gen_perms
    swap = [b, a]
    keep = [a, b]
    pair = ActionPair(v4, v4, [swap, keep], [swap, keep])
    return pair, v4


def control_incompatible_pair() -> CheckResult:
    """Both groups are V4; the first generator of each copy acts by the
    generator swap, the rest trivially.  Each assignment alone is a valid
    automorphism action, but the mutual-action identities fail, and the
    sweep must produce a witness triple."""

    def body():
        pair, _ = _control_pair()
        rep = check_compatibility(pair)
        w = {"detected": not rep.ok,
             "triples_checked": rep.triples_checked}
        if rep.witness is not None:
            w["witness"] = rep.witness.to_json()
        return not rep.ok, w

    return _run("negative-compat", "control", {}, body)


def control_perturbed_commutator(limits: EnumLimits | None = None
                                 ) -> CheckResult:
    """Conjugate the left side of the generator commutator relation by a
    fixed ambient generator.  The tensor square must be nonabelian for
    the relation to have any nontrivial instances, so the control runs
    on the alternating group on four points."""
    limits = limits or VERIFY_LIMITS

    def body():
        pg = realize(parse_presentation("< a, b | a^3, b^2, (a b)^3 >"),
                     name="control-A4")
        t = tensor_power(pg, 2, limits=limits).level(2)
        clean = tensor_commutator_check(t)
        if not clean.ok:
            return False, {"error": "clean relation check failed"}
        z0 = t.amb_gens[0]
        for d1 in t.tensor_gens:
            u = perm_conjugate(t.elements[d1["index"]], z0)
            for d2 in t.tensor_gens:
                v = t.elements[d2["index"]]
                if perm_commutator(u, v) != \
                        perm_commutator(t.elements[d1["index"]], v):
                    w = {"detected": True, "left": d1["label"],
                         "right": d2["label"],
                         "perturbation": "left side conjugated by the "
                                         "first ambient generator"}
                    return True, w
        return False, {"detected": False}

    return _run("negative-commutator", "control", {}, body)


def negative_controls(limits: EnumLimits | None = None) -> list[CheckResult]:
    rows = [control_incompatible_pair(),
            control_perturbed_commutator(limits)]
    return sorted(rows, key=CheckResult.sort_key)


def run_suite(suite: str = "all",
              corpus: list[CorpusEntry] | None = None,
              limits: EnumLimits | None = None,
              jobs: int = 1) -> list[CheckResult]:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}, pick one of {SUITES}")
    rows: list[CheckResult] = []
    if suite in ("identity", "all"):
        rows += run_identity_suite(corpus, limits, jobs)
        rows += negative_controls(limits)
    if suite in ("schur-baer", "all"):
        rows += run_schur_baer_suite(corpus, limits)
    return sorted(rows, key=CheckResult.sort_key)


def results_to_json(results: list[CheckResult]) -> str:
    rows = [r.to_json() for r in sorted(results, key=CheckResult.sort_key)]
    return json.dumps(rows, indent=2, sort_keys=True) + "\n"


def results_to_csv(results: list[CheckResult]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["check", "group", "params", "verdict", "seconds"])
    for r in sorted(results, key=CheckResult.sort_key):
        writer.writerow([r.check, r.group,
                         json.dumps(r.params, sort_keys=True),
                         r.verdict_text(), f"{r.seconds:.3f}"])
    return buf.getvalue()


def summarize(results: list[CheckResult]) -> dict:
    counts = {"pass": 0, "fail": 0, "skipped": 0}
    for r in results:
        counts[r.verdict] += 1
    counts["total"] = len(results)
    return counts


def format_table(results: list[CheckResult]) -> str:
    rows = sorted(results, key=CheckResult.sort_key)
    widths = [max(len(r.group) for r in rows) if rows else 5,
              max(len(r.check) for r in rows) if rows else 5]
    lines = []
    for r in rows:
        params = json.dumps(r.params, sort_keys=True) if r.params else ""
        lines.append(f"{r.group:<{widths[0]}}  {r.check:<{widths[1]}}  "
                     f"{params:<10}  {r.verdict_text()}")
    s = summarize(results)
    lines.append(f"{s['pass']} pass, {s['fail']} fail, "
                 f"{s['skipped']} skipped, {s['total']} total")
    return "\n".join(lines) + "\n"
