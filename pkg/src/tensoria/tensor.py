"""Tensor pairings of groups acting compatibly on each other.

The central construction takes a compatible action pair and builds the
pairing group on the disjoint union of both generator sets: each side
keeps its own relators, and every generator pair is tied by crossed
relators [x, y]^z = [x^z, y^z] in which conjugation by the other side's
letters is rewritten through the given actions.  The subgroup generated
by the commutators [x, y] is the tensor of the pair.  Orders are proved,
not sampled: the build enumerates cosets of one embedded copy, certifies
both copies through retraction homomorphisms, tracks every tensor
element through two regular pairing homomorphisms, and cross-checks the
final count against the exact index formula.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

from .abelian import AbelianGroup, cokernel_invariants, z_tensor
from .actions import (ActionPair, CompatReport, DEFAULT_COMPAT_BUDGET,
                      check_compatibility, conjugation_pair,
                      subgroup_conjugation_pair)
from .coset_enum import CosetTable, EnumLimits, enumerate_cosets
from .errors import LimitExceeded, SizeLimitError
from .permgrp import (GroupHom, Perm, PermGroup, PresentedGroup,
                      abelian_invariants, cayley_presentation, define_hom,
                      identity_perm, perm_commutator, perm_conjugate,
                      perm_inverse, perm_mul, perm_order, word_eval)
from .presentation import Presentation, Word, commutator, cyclic_reduce, gen_word


def _letter(gen: int, parity: int) -> Word:
    return Word(((gen, 1 if parity == 0 else -1),))


def _copy_names(g_names, h_names) -> tuple[str, ...]:
    """Generator names for the pairing group; the second copy is renamed
    with an `f` suffix wherever it would collide with the first."""
    taken = set(g_names)
    out = list(g_names)
    for nm in h_names:
        cand = nm
        while cand in taken:
            cand = cand + "f"
        taken.add(cand)
        out.append(cand)
    return tuple(out)


def _acted(pair: ActionPair, ng: int, letter: int, z: int) -> Word:
    """Ambient word for the conjugate of a single ambient letter by the
    ambient letter z: formal conjugation inside a copy, action images
    across copies."""
    gen, parity = letter // 2, letter % 2
    if gen < ng:
        if z < 2 * ng:
            return _letter(gen, parity).conjugate(_letter(z // 2, z % 2))
        w = pair.image_word("h", z - 2 * ng, gen)
        return w if parity == 0 else w.inverse()
    if z >= 2 * ng:
        return _letter(gen, parity).conjugate(_letter(z // 2, z % 2))
    w = pair.image_word("g", z, gen - ng).shifted(ng)
    return w if parity == 0 else w.inverse()


def eta_presentation(pair: ActionPair) -> Presentation:
    """Presentation of the pairing group: both copies' relators plus one
    crossed relator for every pair of letters conjugated by every letter."""
    gp, hp = pair.g.presentation, pair.h.presentation
    ng, nh = gp.ngens, hp.ngens
    names = _copy_names(gp.generators, hp.generators)
    rels: list[Word] = []
    seen: set[Word] = set()

    def push(w: Word) -> None:
        w = cyclic_reduce(w)
        if not w.is_identity and w not in seen:
            seen.add(w)
            rels.append(w)

    for r in gp.relators:
        push(r)
    for r in hp.relators:
        push(r.shifted(ng))
    for lx in range(2 * ng):
        for ly in range(2 * nh):
            base = commutator(_letter(lx // 2, lx % 2),
                              _letter(ng + ly // 2, ly % 2))
            for z in range(2 * (ng + nh)):
                lhs = base.conjugate(_letter(z // 2, z % 2))
                rhs = commutator(_acted(pair, ng, lx, z),
                                 _acted(pair, ng, 2 * ng + ly, z))
                push(lhs * rhs.inverse())
    return Presentation(names, tuple(rels))


def size_estimate(pair: ActionPair) -> dict:
    """Heuristic forecast of the build: the abelianized tensor times both
    derived subgroup orders caps the usual tensor size, and the coset
    count follows from the exact index formula."""
    ab_g = abelian_invariants(pair.g.group)
    ab_h = abelian_invariants(pair.h.group)
    guess = z_tensor(ab_g, ab_h).order()
    assert guess is not None
    guess *= pair.g.group.derived_subgroup().order()
    guess *= pair.h.group.derived_subgroup().order()
    return {
        "tensor_guess": guess,
        "coset_guess": guess * min(pair.g_order, pair.h_order),
    }


class TensorGroup:
    """A built tensor of a compatible pair: ambient coset action, the
    multiplication table of the tensor subgroup, and exact pairing values
    for every element."""

    def __init__(self, kind: str, name: str, pair: ActionPair,
                 presentation: Presentation, table: CosetTable,
                 enum_side: str, limits: EnumLimits, estimate: dict,
                 compat: CompatReport, elements: list[Perm],
                 thg: list[Perm], thh: list[Perm], labels: dict[int, str],
                 tensor_gens: list[dict], steps: list[int],
                 rows: list[list[int]], build_seconds: float):
        self.kind = kind
        self.name = name
        self.pair = pair
        self.g = pair.g
        self.h = pair.h
        self.presentation = presentation
        self.table = table
        self.enum_side = enum_side
        self.limits = limits
        self.estimate = estimate
        self.compat = compat
        self.m = table.coset_count
        self.amb_gens = table.permutations()
        self.elements = elements
        self.index = {e: i for i, e in enumerate(elements)}
        self.thg = thg
        self.thh = thh
        self.labels = labels
        self.tensor_gens = tensor_gens
        self.steps = steps
        self.order = len(elements)
        self.ambient_order = self.m * (pair.g_order if enum_side == "g"
                                       else pair.h_order)
        self.build_seconds = build_seconds
        self.collapsed = False
        # pairing values: the image of the base point under a tracked
        # regular permutation names the element it represents
        self.lam_g_idx = [p[0] for p in thg]
        self.lam_h_idx = [p[0] for p in thh]
        self.t_gen_rows = [tuple(r) for r in rows]
        self.t_group = PermGroup(self.t_gen_rows, max(self.order, 1))
        if self.t_group.order() != self.order:
            raise RuntimeError("tensor table does not close to its own size")
        self._t_pres: PresentedGroup | None = None
        self._conj: list[list[int]] | None = None
        self._tensor_ab: AbelianGroup | None = None

    def __repr__(self) -> str:
        return f"TensorGroup({self.name}, order={self.order})"

    def element_label(self, i: int) -> str:
        return self.labels.get(i, f"t{i}")

    def lambda_value(self, i: int) -> Perm:
        """Left pairing value of tensor element i, as an element of g."""
        return self.pair.g_side.elements[self.lam_g_idx[i]]

    def lambda_prime_value(self, i: int) -> Perm:
        return self.pair.h_side.elements[self.lam_h_idx[i]]

    def cayley_row(self, i: int) -> Perm:
        """Right multiplication table of tensor element i."""
        e = self.elements[i]
        return tuple(self.index[perm_mul(x, e)] for x in self.elements)

    def t_presentation(self) -> PresentedGroup:
        if self._t_pres is None:
            self._t_pres = cayley_presentation(self.t_group, prefix="t",
                                               name=f"{self.name}.tensor")
        return self._t_pres

    def conj_tables(self) -> list[list[int]]:
        """Index table of conjugation by each ambient generator; existence
        of every entry re-proves normality of the tensor subgroup."""
        if self._conj is None:
            out = []
            for z in self.amb_gens:
                zi = perm_inverse(z)
                tab = []
                for e in self.elements:
                    k = self.index.get(perm_mul(zi, perm_mul(e, z)))
                    if k is None:
                        raise RuntimeError(
                            "conjugation left the tensor subgroup")
                    tab.append(k)
                out.append(tab)
            self._conj = out
        return self._conj

    def tensor_abelianization(self) -> AbelianGroup:
        if self._tensor_ab is None:
            self._tensor_ab = abelian_invariants(self.t_group)
        return self._tensor_ab

    def ambient_abelianization(self) -> AbelianGroup:
        rows = []
        for rel in self.presentation.relators:
            v = [0] * self.presentation.ngens
            for gi, e in rel.syllables:
                v[gi] += e
            rows.append(v)
        return cokernel_invariants(rows, self.presentation.ngens)

    def report(self) -> dict:
        gens = [{"g": d["g"], "h": d["h"], "label": d["label"],
                 "index": d["index"],
                 "order": perm_order(self.elements[d["index"]])}
                for d in self.tensor_gens]
        return {
            "name": self.name,
            "kind": self.kind,
            "g_order": self.pair.g_order,
            "h_order": self.pair.h_order,
            "tensor_order": self.order,
            "ambient_order": self.ambient_order,
            "cosets": self.m,
            "enumerated_copy": self.enum_side,
            "relator_count": len(self.presentation.relators),
            "tensor_abelian": self.tensor_abelianization().serialize(),
            "lambda_image_order": len(set(self.lam_g_idx)),
            "lambda_prime_image_order": len(set(self.lam_h_idx)),
            "lambda_kernel_order": self.lam_g_idx.count(0),
            "generators": gens,
            "estimate": dict(self.estimate),
            "collapsed": self.collapsed,
            "limits": {"max_cosets": self.limits.max_cosets,
                       "scan_budget": self.limits.scan_budget},
            "seconds": round(self.build_seconds, 3),
        }


def _check_hom(pres: Presentation, images: list[Perm], degree: int,
               what: str) -> None:
    ident = identity_perm(degree)
    for rel in pres.relators:
        if word_eval(rel, images, degree) != ident:
            raise RuntimeError(
                f"internal consistency: {what} breaks relator "
                f"{rel.text(pres.generators)}")


def _build_core(pair: ActionPair, kind: str, name: str,
                limits: EnumLimits | None, strategy: str,
                compat: CompatReport) -> TensorGroup:
    t0 = time.perf_counter()
    if limits is None:
        limits = EnumLimits()
    gp, hp = pair.g.presentation, pair.h.presentation
    ng, nh = gp.ngens, hp.ngens
    go, ho = pair.g_order, pair.h_order

    estimate = size_estimate(pair)
    if estimate["coset_guess"] > limits.max_cosets:
        raise LimitExceeded(
            f"{name}: forecast of {estimate['coset_guess']} cosets exceeds "
            f"max_cosets={limits.max_cosets}", "max_cosets",
            limits.max_cosets)
    pres = eta_presentation(pair)
    letters = sum(r.length() for r in pres.relators)
    estimate["relator_letters"] = letters
    estimate["scan_guess"] = estimate["coset_guess"] * letters
    if estimate["scan_guess"] > limits.scan_budget:
        raise LimitExceeded(
            f"{name}: forecast of {estimate['scan_guess']} scan steps "
            f"exceeds scan_budget={limits.scan_budget}", "scan_budget",
            limits.scan_budget)

    # enumerate cosets of the larger embedded copy
    if go >= ho:
        enum_side, enum_order = "g", go
        sub = [gen_word(i) for i in range(ng)]
    else:
        enum_side, enum_order = "h", ho
        sub = [gen_word(ng + j) for j in range(nh)]
    table = enumerate_cosets(pres, sub, limits, strategy)
    m = table.coset_count
    amb = table.permutations()

    # retraction certificates: each copy maps back onto its own group with
    # the other copy killed, so both embed with full order and the tensor
    # subgroup meets the enumerated copy trivially
    idg, idh = identity_perm(pair.g.degree), identity_perm(pair.h.degree)
    pi_g = list(pair.g.gen_perms) + [idg] * nh
    pi_h = [idh] * ng + list(pair.h.gen_perms)
    _check_hom(pres, pi_g, pair.g.degree, "left retraction")
    _check_hom(pres, pi_h, pair.h.degree, "right retraction")

    # regular pairing certificates: one copy by right translation, the
    # other by its action, on each side's element set; commutators of
    # images track the exact pairing value of every tensor element
    gs, hs = pair.g_side, pair.h_side
    theta_g = [tuple(gs.index[perm_mul(e, p)] for e in gs.elements)
               for p in pair.g.gen_perms]
    theta_g += [tuple(pair.letter_table("h", 2 * j)) for j in range(nh)]
    theta_h = [tuple(pair.letter_table("g", 2 * i)) for i in range(ng)]
    theta_h += [tuple(hs.index[perm_mul(e, p)] for e in hs.elements)
                for p in pair.h.gen_perms]
    _check_hom(pres, theta_g, go, "left regular pairing")
    _check_hom(pres, theta_h, ho, "right regular pairing")

    elements: list[Perm] = [identity_perm(m)]
    thg: list[Perm] = [identity_perm(go)]
    thh: list[Perm] = [identity_perm(ho)]
    index: dict[Perm, int] = {elements[0]: 0}
    labels: dict[int, str] = {0: "1"}

    def admit(big: Perm, tg: Perm, th: Perm, label: str) -> int:
        k = index.get(big)
        if k is None:
            k = len(elements)
            index[big] = k
            elements.append(big)
            thg.append(tg)
            thh.append(th)
            labels[k] = label
            return k
        if thg[k] != tg or thh[k] != th:
            raise RuntimeError("pairing values disagree on one coset "
                               "permutation; the coset action is not "
                               "faithful on the tensor subgroup")
        return k

    tensor_gens: list[dict] = []
    for i in range(ng):
        for j in range(nh):
            big = perm_commutator(amb[i], amb[ng + j])
            tg = perm_commutator(theta_g[i], theta_g[ng + j])
            th = perm_commutator(theta_h[i], theta_h[ng + j])
            label = f"{pres.generators[i]}(x){pres.generators[ng + j]}"
            k = admit(big, tg, th, label)
            tensor_gens.append({"g": pres.generators[i],
                                "h": pres.generators[ng + j],
                                "gi": i, "hj": j,
                                "label": label, "index": k})

    # close the generating tensors under conjugation by every ambient
    # generator; the closure is finite and already normal as a set
    amb_inv = [perm_inverse(p) for p in amb]
    thg_inv = [perm_inverse(p) for p in theta_g]
    thh_inv = [perm_inverse(p) for p in theta_h]
    qi = 0
    while qi < len(elements):
        e, tg, th = elements[qi], thg[qi], thh[qi]
        base = labels[qi]
        for z in range(ng + nh):
            big = perm_mul(amb_inv[z], perm_mul(e, amb[z]))
            ctg = perm_mul(thg_inv[z], perm_mul(tg, theta_g[z]))
            cth = perm_mul(thh_inv[z], perm_mul(th, theta_h[z]))
            admit(big, ctg, cth, f"({base})^{pres.generators[z]}")
        qi += 1
    seeds = len(elements)

    # multiplicative closure over the conjugation-closed seed set, with a
    # right multiplication row recorded for every step that is not already
    # generated; the rows become the regular generators of the tensor
    steps: list[int] = []
    rows: list[list[int | None]] = []
    reached = [0]
    in_reached = {0}
    for cand in range(1, seeds):
        if cand in in_reached:
            continue
        steps.append(cand)
        rows.append([None] * len(elements))
        qi = 0
        while qi < len(reached):
            t = reached[qi]
            for si, s in enumerate(steps):
                row = rows[si]
                if len(row) < len(elements):
                    row.extend([None] * (len(elements) - len(row)))
                if row[t] is not None:
                    continue
                big = perm_mul(elements[t], elements[s])
                k = index.get(big)
                if k is None:
                    k = len(elements)
                    index[big] = k
                    elements.append(big)
                    thg.append(perm_mul(thg[t], thg[s]))
                    thh.append(perm_mul(thh[t], thh[s]))
                elif (thg[k] != perm_mul(thg[t], thg[s])
                      or thh[k] != perm_mul(thh[t], thh[s])):
                    raise RuntimeError("pairing values disagree on one "
                                       "coset permutation; the coset "
                                       "action is not faithful on the "
                                       "tensor subgroup")
                row[t] = k
                if k not in in_reached:
                    in_reached.add(k)
                    reached.append(k)
            qi += 1
    if len(reached) != len(elements):
        raise RuntimeError("multiplicative closure missed elements")
    for row in rows:
        if len(row) < len(elements):
            row.extend([None] * (len(elements) - len(row)))
        if any(v is None for v in row):
            raise RuntimeError("incomplete multiplication row")

    # the pairing group is always an extension of g x h by the tensor, so
    # the coset count proves the tensor order on the nose
    total = m * enum_order
    if total % (go * ho):
        raise RuntimeError(
            f"{name}: ambient order {total} is not divisible by |g||h|")
    expected = total // (go * ho)
    if len(elements) != expected:
        raise RuntimeError(
            f"{name}: built {len(elements)} tensor elements, index "
            f"formula demands {expected}")

    return TensorGroup(kind, name, pair, pres, table, enum_side, limits,
                       estimate, compat, elements, thg, thh, labels,
                       tensor_gens, steps, rows,
                       time.perf_counter() - t0)


def build_eta(pair: ActionPair, name: str | None = None,
              limits: EnumLimits | None = None, strategy: str = "hlt",
              compat_budget: int = DEFAULT_COMPAT_BUDGET) -> TensorGroup:
    """Tensor of two groups acting compatibly on each other.  Raises
    ValueError with a witness when the actions are not compatible, and
    LimitExceeded when the forecast or the enumeration overruns."""
    compat = check_compatibility(pair, compat_budget)
    if not compat.ok:
        w = compat.witness
        raise ValueError(f"actions are not compatible: {w.identity} fails "
                         f"at {w.triple}")
    if name is None:
        gn = pair.g.name or "g"
        hn = pair.h.name or "h"
        name = f"eta({gn},{hn})"
    return _build_core(pair, "eta", name, limits, strategy, compat)


def build_nu(g: PresentedGroup, name: str | None = None,
             limits: EnumLimits | None = None, strategy: str = "hlt",
             compat_budget: int = DEFAULT_COMPAT_BUDGET) -> TensorGroup:
    """Tensor square scaffold of one group: both copies act by
    conjugation.  The tensor subgroup is the tensor square."""
    pair = conjugation_pair(g)
    compat = check_compatibility(pair, compat_budget)
    if not compat.ok:
        raise RuntimeError("conjugation pair failed its own compatibility")
    if name is None:
        name = f"nu({g.name or 'g'})"
    t = _build_core(pair, "nu", name, limits, strategy, compat)
    if t.ambient_order != t.pair.g_order ** 2 * t.order:
        raise RuntimeError(f"{name}: order is not |G|^2 times the tensor")
    return t


def derivative(pair: ActionPair, side: str = "g") -> PermGroup:
    """Subgroup of one factor generated by x^(-1) (x acted by the other
    factor): the exact image of the pairing on that side."""
    if side == "g":
        rows = pair.rows_h_on_g()
        side_obj = pair.g_side
    elif side == "h":
        rows = pair.rows_g_on_h()
        side_obj = pair.h_side
    else:
        raise ValueError("side must be 'g' or 'h'")
    els = side_obj.elements
    gens: list[Perm] = []
    seen: set[Perm] = set()
    for row in rows:
        for a, e in enumerate(els):
            q = perm_mul(perm_inverse(e), els[row[a]])
            if q not in seen:
                seen.add(q)
                gens.append(q)
    return PermGroup(gens, side_obj.pg.degree)


def lambda_map(t: TensorGroup) -> GroupHom:
    """Verified homomorphism from the tensor onto the left derivative,
    sending x tensor y to x^(-1) (x acted by y)."""
    tp = t.t_presentation()
    imgs = [t.lambda_value(row[0]) for row in tp.gen_perms]
    hom = define_hom(tp.presentation, tp.group, imgs, tp.gen_perms)
    der = derivative(t.pair, "g")
    img = hom.image()
    if img.order() != der.order() or any(p not in der
                                         for p in img.generators):
        raise RuntimeError(f"{t.name}: pairing image differs from the "
                           f"derivative subgroup")
    return hom


def lambda_prime_map(t: TensorGroup) -> GroupHom:
    """Mirror of lambda_map into the right factor."""
    tp = t.t_presentation()
    imgs = [t.lambda_prime_value(row[0]) for row in tp.gen_perms]
    hom = define_hom(tp.presentation, tp.group, imgs, tp.gen_perms)
    der = derivative(t.pair, "h")
    img = hom.image()
    if img.order() != der.order() or any(p not in der
                                         for p in img.generators):
        raise RuntimeError(f"{t.name}: mirror pairing image differs from "
                           f"the derivative subgroup")
    return hom


def _diagonal_indices(t: TensorGroup) -> list[int]:
    """Tensor indices of the fibre tensors w (x) w, one per element of the
    right factor (which must sit inside the left in the same realization)."""
    gs, hs = t.pair.g_side, t.pair.h_side
    ng = t.pair.g.presentation.ngens
    out: list[int] = []
    seen: set[int] = set()
    for i, e in enumerate(hs.elements):
        gi = gs.index.get(e)
        if gi is None:
            raise ValueError("no canonical diagonal: the right factor is "
                             "not embedded in the left; pass fibre pairs")
        rel = commutator(gs.word(gi), hs.word(i).shifted(ng))
        big = word_eval(rel, t.amb_gens, t.m)
        k = t.index.get(big)
        if k is None:
            raise RuntimeError("fibre tensor escaped the tensor subgroup")
        if t.lam_g_idx[k] != 0 or t.lam_h_idx[k] != 0:
            raise RuntimeError("fibre tensor has a nontrivial pairing "
                               "value")
        if k not in seen:
            seen.add(k)
            out.append(k)
    return out


def delta_subgroup(t: TensorGroup) -> PermGroup:
    """Central subgroup generated by the fibre tensors w (x) w."""
    idxs = _diagonal_indices(t)
    rows = [t.cayley_row(k) for k in idxs]
    return PermGroup(rows, max(t.order, 1))


@dataclass
class ExteriorResult:
    """Exterior quotient of a tensor: the quotient group, the projection,
    the verified pairing map it inherits, and that map's kernel."""
    group: PermGroup
    onto: GroupHom
    lam: GroupHom
    kernel: PermGroup
    fibre_count: int


def exterior_product(t: TensorGroup,
                     fibre: list[tuple[Word, Word]] | None = None
                     ) -> ExteriorResult:
    """Quotient of the tensor by the fibre tensors w (x) w.  A custom
    fibre is a list of word pairs over the two factors' own generators;
    the default runs over the embedded right factor."""
    ng = t.pair.g.presentation.ngens
    if fibre is None:
        idxs = _diagonal_indices(t)
    else:
        idxs = []
        seen: set[int] = set()
        for wg, wh in fibre:
            rel = commutator(wg, wh.shifted(ng))
            big = word_eval(rel, t.amb_gens, t.m)
            k = t.index.get(big)
            if k is None:
                raise RuntimeError("fibre tensor escaped the tensor "
                                   "subgroup")
            if k not in seen:
                seen.add(k)
                idxs.append(k)
    rows = [t.cayley_row(k) for k in idxs]
    sub = PermGroup(rows, max(t.order, 1))
    quot, onto = t.t_group.quotient(sub)
    vals: dict[Perm, Perm] = {}
    for gen, qimg in zip(t.t_group.generators, onto.images):
        lam = t.lambda_value(gen[0])
        prev = vals.get(qimg)
        if prev is not None and prev != lam:
            raise RuntimeError("pairing value is not constant on a fibre "
                               "coset")
        vals[qimg] = lam
    qp = cayley_presentation(quot, prefix="w", name=f"{t.name}.exterior")
    hom = define_hom(qp.presentation, qp.group,
                     [vals[p] for p in qp.gen_perms], qp.gen_perms)
    return ExteriorResult(quot, onto, hom, hom.kernel(), len(idxs))


def tensor_with_subgroup(g: PresentedGroup, n: PermGroup,
                         name: str | None = None,
                         limits: EnumLimits | None = None,
                         strategy: str = "hlt") -> TensorGroup:
    """Tensor of a group with a normal subgroup, both acting by
    conjugation inside the ambient group."""
    sub_name = f"{g.name or 'g'}.sub{n.order()}"
    pair = subgroup_conjugation_pair(g, n, name=sub_name)
    if name is None:
        name = f"eta({g.name or 'g'},{sub_name})"
    return build_eta(pair, name=name, limits=limits, strategy=strategy)


class TensorPowerTower:
    """Iterated tensor powers of one group.  Level 2 is the tensor square;
    each later level pairs the previous tensor with the base through the
    inherited diagonal action and the pairing-conjugation action, and the
    pairing maps compose down to the base at every level."""

    def __init__(self, base: PresentedGroup,
                 limits: EnumLimits | None = None, strategy: str = "hlt",
                 compat_budget: int = DEFAULT_COMPAT_BUDGET):
        self.base = base
        self.limits = limits
        self.strategy = strategy
        self.compat_budget = compat_budget
        self.levels: dict[int, TensorGroup] = {}
        self.lam_values: dict[int, list[Perm]] = {}
        self.pairs: dict[int, ActionPair] = {}

    def top(self) -> int:
        return max(self.levels) if self.levels else 1

    def level(self, n: int) -> TensorGroup:
        if n < 2:
            raise ValueError("tensor powers start at 2")
        self.extend(n)
        return self.levels[n]

    def lambda_values(self, n: int) -> list[Perm]:
        self.extend(n)
        return self.lam_values[n]

    def extend(self, n: int) -> None:
        while self.top() < n:
            self._step()

    def _step(self) -> None:
        base = self.base
        tag = base.name or "g"
        if not self.levels:
            t = build_nu(base, name=f"{tag}.pow2", limits=self.limits,
                         strategy=self.strategy,
                         compat_budget=self.compat_budget)
            gs = t.pair.g_side
            self.levels[2] = t
            self.pairs[2] = t.pair
            self.lam_values[2] = [gs.elements[i] for i in t.lam_g_idx]
            return
        k = self.top()
        tk = self.levels[k]
        # forecast the coset count before paying for the presentation,
        # action tables, and compatibility sweep of the next pair
        limits = self.limits or EnumLimits()
        guess = z_tensor(abelian_invariants(tk.t_group),
                         abelian_invariants(base.group)).order()
        assert guess is not None
        guess *= tk.t_group.derived_subgroup().order()
        guess *= base.group.derived_subgroup().order()
        guess *= min(tk.order, base.order())
        if guess > limits.max_cosets:
            raise LimitExceeded(
                f"tensor power {k + 1} of {tag}: forecast of {guess} "
                f"cosets exceeds max_cosets={limits.max_cosets}",
                "max_cosets", limits.max_cosets)
        tkp = tk.t_presentation()
        n_left = tk.pair.g.presentation.ngens
        prev_lam = self.lam_values[k]
        conj = tk.conj_tables()

        # the base acts on the previous tensor diagonally: conjugation by
        # the base copy inside the previous pairing group, transported
        # into right multiplication rows
        h_on_g: list[list[Perm]] = []
        for c in range(base.presentation.ngens):
            ct = conj[n_left + c]
            imgs: list[Perm] = []
            for row in tkp.gen_perms:
                new = [0] * tk.order
                for i in range(tk.order):
                    new[ct[i]] = ct[row[i]]
                imgs.append(tuple(new))
            h_on_g.append(imgs)

        # the previous tensor acts on the base through its pairing value
        g_on_h: list[list[Perm]] = []
        for row in tkp.gen_perms:
            lam = prev_lam[row[0]]
            g_on_h.append([perm_conjugate(x, lam) for x in base.gen_perms])

        pair = ActionPair(tkp, base, h_on_g, g_on_h)
        compat = check_compatibility(pair, self.compat_budget)
        if not compat.ok:
            raise RuntimeError(f"{tag}.pow{k + 1}: inherited actions "
                               f"failed compatibility, which breaks the "
                               f"tower construction")
        try:
            t = _build_core(pair, "eta", f"{tag}.pow{k + 1}", self.limits,
                            self.strategy, compat)
        except LimitExceeded as e:
            raise LimitExceeded(f"tensor power {k + 1} of {tag}: {e}",
                                e.limit_name, e.limit_value) from e
        side = pair.g_side
        vals = [prev_lam[side.elements[i][0]] for i in t.lam_g_idx]
        self.levels[k + 1] = t
        self.pairs[k + 1] = pair
        self.lam_values[k + 1] = vals


def tensor_power(g: PresentedGroup, n: int,
                 limits: EnumLimits | None = None, strategy: str = "hlt",
                 compat_budget: int = DEFAULT_COMPAT_BUDGET
                 ) -> TensorPowerTower:
    """Tower of tensor powers of g, built up to level n."""
    tower = TensorPowerTower(g, limits, strategy, compat_budget)
    tower.extend(n)
    return tower


def lambda_n_map(tower: TensorPowerTower, n: int) -> GroupHom:
    """Verified homomorphism from the n-th tensor power to the base,
    with image checked against the n-th lower central term and the
    kernel checked central."""
    t = tower.level(n)
    tp = t.t_presentation()
    vals = tower.lambda_values(n)
    hom = define_hom(tp.presentation, tp.group,
                     [vals[row[0]] for row in tp.gen_perms], tp.gen_perms)
    series = tower.base.group.lower_central_series()
    gamma = series[min(n - 1, len(series) - 1)]
    img = hom.image()
    if img.order() != gamma.order() or any(p not in gamma
                                           for p in img.generators):
        raise RuntimeError(f"{t.name}: pairing image differs from the "
                           f"lower central term {n}")
    if not t.t_group.is_abelian():
        ker = hom.kernel()
        for kg in ker.generators:
            for tg in t.t_group.generators:
                if perm_commutator(kg, tg) != t.t_group.identity:
                    raise RuntimeError(f"{t.name}: pairing kernel is not "
                                       f"central")
    return hom


@dataclass(frozen=True)
class CommutatorWitness:
    left: str
    right: str

    def to_json(self) -> dict:
        return {"left": self.left, "right": self.right}


@dataclass
class CommutatorReport:
    ok: bool
    checked: int
    witness: CommutatorWitness | None

    def to_json(self) -> dict:
        return {"ok": self.ok, "checked": self.checked,
                "witness": self.witness.to_json() if self.witness else None}


def tensor_commutator_check(t: TensorGroup) -> CommutatorReport:
    """Check [u, v] = lam(u) (x) lam'(v) over all pairs of generating
    tensors u, v.  Failures are reported with the offending pair, not
    raised."""
    pair = t.pair
    ng = pair.g.presentation.ngens
    checked = 0
    for d1 in t.tensor_gens:
        i, j = d1["gi"], d1["hj"]
        wa = gen_word(i).inverse() * pair.image_word("h", 2 * j, i)
        for d2 in t.tensor_gens:
            i2, j2 = d2["gi"], d2["hj"]
            wb = (pair.image_word("g", 2 * i2, j2).inverse()
                  * gen_word(j2)).shifted(ng)
            lhs = perm_commutator(t.elements[d1["index"]],
                                  t.elements[d2["index"]])
            rhs = word_eval(commutator(wa, wb), t.amb_gens, t.m)
            checked += 1
            if lhs != rhs:
                return CommutatorReport(
                    False, checked,
                    CommutatorWitness(d1["label"], d2["label"]))
    return CommutatorReport(True, checked, None)
