"""Verification harness: replays every library identity over the corpus.

Each suite emits one line per identity with a pass/fail flag; the report
is assembled in sorted order so concurrent execution cannot change the
output.  Exit status is nonzero as soon as any identity fails.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .characters import (
    character_table,
    induce,
    inner_product,
    linear_characters,
    regular_character,
    regular_decomposition_irreducibles,
    restrict,
    tensor,
    trivial_character,
)
from .corpus import CorpusEntry, corpus_entries
from .errors import BrindError
from .groups import DEFAULT_BOUND, PermGroup, abelianization, double_cosets, normalizer
from .lambda_adams import adams, adams_on_class_function, lambda_op, sym_op
from .monomial import MonomialElement, brauer_induction, check_section, evaluate, pair_poset, restrict_monomial
from .perms import identity
from .realeps import (
    EPS,
    ONE_MINUS_EPS,
    AugmentedGroup,
    EpsModuleElement,
    EpsScalar,
    MonoidWord,
    RANK_ONE_LABEL,
    brauer_as_weak_additive,
    rank_one_map,
    theta_rank_one,
    transfer_unit,
    twist_scalar,
    weak_extend,
)

__all__ = ["CheckResult", "VerifyReport", "run_verification"]


@dataclass(frozen=True)
class CheckResult:
    group: str
    suite: str
    identity: str
    ok: bool
    detail: str = ""


@dataclass
class VerifyReport:
    results: list[CheckResult] = field(default_factory=list)
    elapsed: float = 0.0
    warning: str = ""

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def render(self) -> str:
        lines = []
        if self.warning:
            lines.append(f"warning: {self.warning}")
        for r in self.results:
            mark = "ok  " if r.ok else "FAIL"
            detail = f"  [{r.detail}]" if r.detail and not r.ok else ""
            lines.append(f"{mark}  {r.group:<8} {r.suite:<16} {r.identity}{detail}")
        passed = sum(r.ok for r in self.results)
        lines.append(
            f"{passed}/{len(self.results)} identities hold"
            f" ({self.elapsed:.1f}s)"
        )
        return "\n".join(lines)


def _check(results, group, suite, identity, ok, detail=""):
    results.append(CheckResult(group, suite, identity, bool(ok), detail))


def _unit(table, i):
    return table.virtual([1 if j == i else 0 for j in range(len(table.irreducibles))])


# -- group-core ----------------------------------------------------------------


def _suite_group_core(entry: CorpusEntry, G: PermGroup) -> list[CheckResult]:
    out: list[CheckResult] = []
    name = entry.name
    _check(out, name, "group-core", "sum of class sizes = |G|",
           sum(c.size for c in G.conjugacy_classes) == G.order)
    _check(out, name, "group-core", "class sizes divide |G|",
           all(G.order % c.size == 0 for c in G.conjugacy_classes))
    subs = G.all_subgroups
    _check(out, name, "group-core", "subgroup orders divide |G| (Lagrange)",
           all(G.order % H.order == 0 for H in subs))
    ok_mackey = True
    for H in G.subgroup_classes:
        for K in G.subgroup_classes:
            if sum(dc.size for dc in double_cosets(G, H, K)) != G.order:
                ok_mackey = False
    _check(out, name, "group-core", "sum over double cosets of |HgK| = |G|", ok_mackey)
    ok_norm = True
    for H in G.subgroup_classes:
        N = normalizer(G, H)
        if not (H.element_set <= N.element_set):
            ok_norm = False
        for g in N.element_set:
            if frozenset(x.conjugate(g) for x in H.element_set) != H.element_set:
                ok_norm = False
    _check(out, name, "group-core", "H <= N_G(H) and N_G(H) stabilizes H", ok_norm)
    rebuilt = PermGroup(G.generators, degree=G.degree, bound=G.bound)
    _check(out, name, "group-core", "representatives are reproducible",
           [c.representative for c in rebuilt.conjugacy_classes]
           == [c.representative for c in G.conjugacy_classes]
           and [S.key for S in rebuilt.subgroup_classes] == [S.key for S in G.subgroup_classes])
    _check(out, name, "group-core", "chain order equals exhaustive closure count",
           len(G.elements) == G.order)
    ok_ab = True
    for H in G.subgroup_classes:
        ab = abelianization(H)
        size = 1
        for d in ab.invariant_factors:
            size *= d
        derived_index_ok = H.order % size == 0
        divisor_chain = all(
            ab.invariant_factors[i + 1] % ab.invariant_factors[i] == 0
            for i in range(len(ab.invariant_factors) - 1)
        )
        hom_ok = True
        for a in H.element_set:
            for b in H.element_set:
                expect = tuple(
                    (x + y) % d
                    for x, y, d in zip(ab.coordinates[a], ab.coordinates[b], ab.invariant_factors)
                )
                if ab.coordinates[a * b] != expect:
                    hom_ok = False
        kernel = [h for h in H.element_set if all(c == 0 for c in ab.coordinates[h])]
        comms = {
            a.inverse() * b.inverse() * a * b for a in H.element_set for b in H.element_set
        }
        kernel_ok = set(kernel) >= comms and H.order == size * len(kernel)
        ok_ab = ok_ab and derived_index_ok and divisor_chain and hom_ok and kernel_ok
    _check(out, name, "group-core", "abelianization is a homomorphism with kernel [H,H]", ok_ab)
    return out


# -- characters ------------------------------------------------------------------


def _suite_characters(entry: CorpusEntry, G: PermGroup) -> list[CheckResult]:
    out: list[CheckResult] = []
    name = entry.name
    table = character_table(G)
    _check(out, name, "characters", "row orthogonality <chi_i, chi_j> = delta_ij",
           table.row_orthogonality_ok())
    _check(out, name, "characters", "column orthogonality", table.column_orthogonality_ok())
    _check(out, name, "characters", "sum of degree^2 = |G|",
           sum(d * d for d in table.degrees) == G.order)
    _check(out, name, "characters", "first irreducible is trivial",
           table.irreducibles[0] == trivial_character(G))
    oracle = regular_decomposition_irreducibles(G)
    _check(out, name, "characters", "Dixon table equals induced-linear-character oracle",
           list(oracle) == list(table.irreducibles))
    golden = entry.golden_table()
    if golden is not None:
        _check(out, name, "characters", "table matches golden file",
               golden == table.to_json())
    ok_frob = True
    ok_count = True
    for H in G.subgroup_classes:
        chars = linear_characters(H)
        ab = abelianization(H)
        expected = 1
        for d in ab.invariant_factors:
            expected *= d
        if len(chars) != expected or len({c.key() for c in chars}) != expected:
            ok_count = False
        for lam in chars:
            f = lam.as_class_function()
            indf = induce(H, f, G)
            for chi in table.irreducibles:
                if inner_product(indf, chi) != inner_product(f, restrict(chi, H)):
                    ok_frob = False
    _check(out, name, "characters", "exactly |H/[H,H]| distinct linear characters", ok_count)
    _check(out, name, "characters", "Frobenius reciprocity <Ind f, chi> = <f, Res chi>", ok_frob)
    ok_closed = True
    for H in G.subgroup_classes:
        chars = linear_characters(H)
        keys = {c.key() for c in chars}
        for a in chars:
            for b in chars:
                if (a * b).key() not in keys:
                    ok_closed = False
        for g in normalizer(G, H).element_set:
            for a in chars:
                moved = {x: a.value(g.inverse() * x * g) for x in H.element_set}
                if tuple(moved[p].key() for p in H.elements) not in keys:
                    ok_closed = False
    _check(out, name, "characters",
           "linear characters closed under product and N_G(H)-conjugation", ok_closed)
    ok_trans = True
    for H in G.subgroup_classes:
        HG = H.as_group()
        for Kh in HG.subgroup_classes:
            K = G.subgroup_from_elements(Kh.element_set)
            for lam in linear_characters(K):
                inner = lam.restricted_to(Kh).as_class_function()
                via = induce(H, induce(Kh, inner, HG), G)
                if via != induce(K, lam.as_class_function(), G):
                    ok_trans = False
    _check(out, name, "characters", "induction transitivity Ind_K^G = Ind_H^G Ind_K^H", ok_trans)
    ok_mackey = True
    for H in G.subgroup_classes:
        for K in G.subgroup_classes:
            KG = K.as_group()
            for lam in linear_characters(H):
                lhs = restrict(induce(H, lam.as_class_function(), G), K)
                total = None
                for dc in double_cosets(G, K, H):
                    g = dc.representative
                    glam = lam.conjugated(g)
                    L = KG.subgroup_from_elements(dc.intersection.element_set)
                    piece = induce(L, glam.restricted_to(L).as_class_function(), KG)
                    total = piece if total is None else total + piece
                if total != lhs:
                    ok_mackey = False
    _check(out, name, "characters",
           "Mackey formula Res_K Ind_H = sum over K\\G/H of Ind Res conj", ok_mackey)
    return out


# -- lambda/adams ------------------------------------------------------------------


def _suite_lambda_adams(entry: CorpusEntry, G: PermGroup) -> list[CheckResult]:
    out: list[CheckResult] = []
    name = entry.name
    table = character_table(G)
    irr = [_unit(table, i) for i in range(len(table.irreducibles))]
    _check(out, name, "lambda-adams", "psi^1 = id", all(adams(1, x) == x for x in irr))
    ok = True
    for m in range(1, 7):
        for n in range(1, 7):
            for x in irr:
                if adams(m, adams(n, x)) != adams(m * n, x):
                    ok = False
    _check(out, name, "lambda-adams", "psi^m psi^n = psi^mn for m, n <= 6", ok)
    ok = True
    for p in (2, 3, 5, 7):
        for x in irr:
            power = x
            for _ in range(p - 1):
                power = tensor(power, x)
            diff = adams(p, x) - power
            if any(c % p for c in diff.coords):
                ok = False
    _check(out, name, "lambda-adams", "psi^p(x) = x^p mod p for p in {2,3,5,7}", ok)
    ok = True
    for n in (2, 3):
        for x in irr:
            for y in irr:
                if adams(n, x + y) != adams(n, x) + adams(n, y):
                    ok = False
                if adams(n, tensor(x, y)) != tensor(adams(n, x), adams(n, y)):
                    ok = False
    _check(out, name, "lambda-adams", "psi^n is a ring homomorphism", ok)
    ok = True
    for x in irr:
        if adams(2, x) != sym_op(2, x) - lambda_op(2, x):
            ok = False
    _check(out, name, "lambda-adams", "psi^2 = Sym^2 - Lambda^2", ok)
    ok = True
    for i, x in enumerate(irr):
        d = table.degrees[i]
        if lambda_op(0, x).as_class_function() != trivial_character(G):
            ok = False
        if lambda_op(1, x) != x:
            ok = False
        for k in range(d + 1):
            if not lambda_op(k, x).is_honest():
                ok = False
        top = lambda_op(d, x)
        if not (sum(top.coords) == 1 and table.degrees[top.coords.index(1)] == 1):
            ok = False
        for k in range(d + 1, d + 3):
            if any(lambda_op(k, x).coords):
                ok = False
    _check(out, name, "lambda-adams",
           "lambda^k honest, lambda^deg linear, lambda^k = 0 above the degree", ok)
    ok = True
    for x in irr[:3]:
        for y in irr[:3]:
            for k in range(4):
                lhs = lambda_op(k, x + y)
                rhs = None
                for i in range(k + 1):
                    term = tensor(lambda_op(i, x), lambda_op(k - i, y))
                    rhs = term if rhs is None else rhs + term
                if lhs != rhs:
                    ok = False
    _check(out, name, "lambda-adams",
           "lambda^k(x+y) = sum_i lambda^i(x) lambda^(k-i)(y)", ok)
    ok = True
    for x in irr:
        cf = x.as_class_function()
        sq = cf * cf
        p2 = adams_on_class_function(2, cf)
        half = [(a + b) * Fraction(1, 2) for a, b in zip(sq.values, p2.values)]
        if sym_op(2, x).as_class_function().values != tuple(half):
            ok = False
        halfm = [(a - b) * Fraction(1, 2) for a, b in zip(sq.values, p2.values)]
        if lambda_op(2, x).as_class_function().values != tuple(halfm):
            ok = False
    _check(out, name, "lambda-adams",
           "Sym^2 = (x(g)^2 + x(g^2))/2 and Lambda^2 = (x(g)^2 - x(g^2))/2", ok)
    return out


# -- monomial-brauer ----------------------------------------------------------------


def _suite_monomial(entry: CorpusEntry, G: PermGroup) -> list[CheckResult]:
    out: list[CheckResult] = []
    name = entry.name
    table = character_table(G)
    poset = pair_poset(G)
    report = check_section(G)
    _check(out, name, "monomial-brauer", "section: ev(b_G(chi)) = chi for all irreducibles",
           report.ok)
    ok_line = True
    for i, chi in enumerate(table.irreducibles):
        if table.degrees[i] != 1:
            continue
        b = brauer_induction(_unit(table, i))
        if len(b.coeffs) != 1:
            ok_line = False
            continue
        (idx, c), = b.coeffs.items()
        pair = poset.pairs[idx]
        values_match = all(
            pair.character.value(g) == chi.value_at(g) for g in G.elements
        )
        if not (c == 1 and pair.subgroup.order == G.order and values_match):
            ok_line = False
    _check(out, name, "monomial-brauer", "line: b_G(chi) = [G, chi] for linear chi", ok_line)
    _check(out, name, "monomial-brauer", "b_G coefficients are integers (no exception)",
           True)
    ok_nat = True
    for H in G.subgroup_classes:
        HG = H.as_group()
        tH = character_table(HG)
        for i in range(len(table.irreducibles)):
            x = _unit(table, i)
            lhs = restrict_monomial(brauer_induction(x), H)
            rhs = brauer_induction(tH.from_class_function(restrict(x.as_class_function(), H)))
            if lhs != rhs:
                ok_nat = False
    _check(out, name, "monomial-brauer", "naturality: res b_G(x) = b_H(res x)", ok_nat)
    rng = random.Random(f"additivity:{name}")
    ok_add = True
    k = len(table.irreducibles)
    for _ in range(10):
        x = table.virtual([rng.randint(-2, 2) for _ in range(k)])
        y = table.virtual([rng.randint(-2, 2) for _ in range(k)])
        if brauer_induction(x + y) != brauer_induction(x) + brauer_induction(y):
            ok_add = False
    _check(out, name, "monomial-brauer", "additivity b_G(x+y) = b_G(x) + b_G(y)", ok_add)
    ok_conj = True
    for rep in poset.orbit_reps:
        for g in G.generators:
            if poset.orbit_of[poset.conjugate_pair(rep, g)] != rep:
                ok_conj = False
    _check(out, name, "monomial-brauer",
           "conjugation invariance collapses under canonicalization", ok_conj)
    n = len(poset.pairs)
    ok_order = all(poset.leq(i, i) for i in range(n))
    for i in range(n):
        for j in range(n):
            if i != j and poset.leq(i, j) and poset.leq(j, i):
                ok_order = False
            for l in range(n):
                if poset.leq(i, j) and poset.leq(j, l) and not poset.leq(i, l):
                    ok_order = False
    _check(out, name, "monomial-brauer", "pair order is reflexive, antisymmetric, transitive",
           ok_order)
    intervals = [(i, j) for i in range(n) for j in range(n) if poset.leq(i, j)]
    if len(intervals) > 2000:
        rng2 = random.Random(f"moebius:{name}")
        intervals = rng2.sample(intervals, 2000)
    ok_mu = True
    for i, j in intervals:
        total = sum(poset.moebius(i, z) for z in poset.uppers[i] if poset.leq(z, j))
        if total != (1 if i == j else 0):
            ok_mu = False
    _check(out, name, "monomial-brauer", "Moebius delta: sum over [x,y] of mu(x,-) = delta",
           ok_mu)
    ok_ev = True
    for idx in poset.orbit_reps:
        pair = poset.pairs[idx]
        if pair.subgroup.order == G.order:
            ev = evaluate(MonomialElement(poset, {idx: 1}))
            cf = ev.as_class_function()
            if any(cf.value_at(g) != pair.character.value(g) for g in G.elements):
                ok_ev = False
    _check(out, name, "monomial-brauer", "ev([G, chi]) = chi", ok_ev)
    full = G.full_subgroup
    ok_res_id = all(
        restrict_monomial(brauer_induction(_unit(table, i)), full)
        == brauer_induction(_unit(table, i))
        for i in range(len(table.irreducibles))
    )
    _check(out, name, "monomial-brauer", "res_G^G = id on A(T,G)", ok_res_id)
    return out


# -- real-eps (global) ----------------------------------------------------------------


def _suite_real_eps(s3_group: PermGroup) -> list[CheckResult]:
    out: list[CheckResult] = []
    name = "-"

    ok = True
    span = range(-10, 11)
    for a in span:
        for b in span:
            x = EpsScalar(a, b)
            for c in (-10, -3, 0, 1, 7):
                for d in (-10, -1, 0, 2, 10):
                    y = EpsScalar(c, d)
                    if x * y != y * x or x + y != y + x:
                        ok = False
    rng = random.Random("eps-ring")
    for _ in range(2000):
        x = EpsScalar(rng.randint(-10, 10), rng.randint(-10, 10))
        y = EpsScalar(rng.randint(-10, 10), rng.randint(-10, 10))
        z = EpsScalar(rng.randint(-10, 10), rng.randint(-10, 10))
        if (x * y) * z != x * (y * z) or x * (y + z) != x * y + x * z:
            ok = False
        if (x + y) + z != x + (y + z):
            ok = False
    _check(out, name, "real-eps", "Z[eps]/(eps^2-1) ring axioms on [-10,10]", ok)
    _check(out, name, "real-eps", "eps^2 = 1", EPS * EPS == EpsScalar(1, 0))
    _check(out, name, "real-eps", "(1-eps)^2 = 2(1-eps)",
           ONE_MINUS_EPS * ONE_MINUS_EPS == 2 * ONE_MINUS_EPS)
    _check(out, name, "real-eps", "units are exactly +-1, +-eps",
           all(EpsScalar(a, b).is_unit() == (EpsScalar(a, b) in
               (EpsScalar(1, 0), EpsScalar(-1, 0), EPS, EpsScalar(0, -1)))
               for a in span for b in span))

    from .groups import schreier_sims
    from .perms import parse_cycles

    C2 = schreier_sims([parse_cycles("(0 1)", 2)])
    aug = AugmentedGroup(C2, [-1])
    _check(out, name, "real-eps", "transfer unit tr(1) = 1 - eps",
           transfer_unit(aug) == ONE_MINUS_EPS)
    _check(out, name, "real-eps", "twist = 2 for trivial and 1-eps for surjective",
           twist_scalar(AugmentedGroup.trivial(C2)) == EpsScalar(2, 0)
           and twist_scalar(aug) == ONE_MINUS_EPS)

    _check(out, name, "real-eps", "rank-one: theta(1)=1, theta(2)=1-eps, theta(4)=2(1-eps)",
           theta_rank_one(1) == EpsModuleElement({RANK_ONE_LABEL: 1})
           and theta_rank_one(2) == EpsModuleElement({RANK_ONE_LABEL: ONE_MINUS_EPS})
           and theta_rank_one(4) == EpsModuleElement({RANK_ONE_LABEL: 2 * ONE_MINUS_EPS}))
    ok = all(
        theta_rank_one(2 * x + y)
        == theta_rank_one(x).scaled(ONE_MINUS_EPS) + theta_rank_one(y)
        for x in range(-50, 51)
        for y in range(-50, 51)
    )
    _check(out, name, "real-eps", "rank-one law theta(2x+y) = (1-eps)theta(x) + theta(y)", ok)
    _check(out, name, "real-eps", "negation rule theta(-y) = eps * theta(y)",
           all(theta_rank_one(-y) == theta_rank_one(y).scaled(EPS) for y in range(-50, 51)))
    _check(out, name, "real-eps", "setting eps = -1 makes theta additive (quotient to Z)",
           all(
               (theta_rank_one(m).at_minus_one().get(RANK_ONE_LABEL, 0)
                + theta_rank_one(n).at_minus_one().get(RANK_ONE_LABEL, 0))
               == theta_rank_one(m + n).at_minus_one().get(RANK_ONE_LABEL, 0)
               for m in range(-20, 21)
               for n in range(-20, 21)
           ))

    theta = rank_one_map()
    ext = weak_extend(theta)
    rng = random.Random("well-defined")
    ok_wd = True
    ok_ext_law = True
    w = lambda m: MonoidWord({RANK_ONE_LABEL: m})
    for _ in range(500):
        x, y, z = (rng.randint(0, 12) for _ in range(3))
        if ext(w(x), w(y)) != ext(w(x + z), w(y + z)):
            ok_wd = False
        if ext(w(x), w(y)) != theta_rank_one(x - y):
            ok_wd = False
        x2, y2 = rng.randint(-12, 12), rng.randint(-12, 12)
        lhs = theta_rank_one(2 * x2 + y2)
        if lhs != theta_rank_one(x2).scaled(ext.twist) + theta_rank_one(y2):
            ok_ext_law = False
    _check(out, name, "real-eps",
           "extension is well-defined: theta(x-y) independent of presentation", ok_wd)
    _check(out, name, "real-eps",
           "extension satisfies the weak-additivity law on the completion", ok_ext_law)

    btheta = brauer_as_weak_additive(s3_group)
    bext = weak_extend(btheta)
    table = character_table(s3_group)
    k = len(table.irreducibles)
    rng = random.Random("b-wrapper")
    ok_b = True
    for _ in range(200):
        xs = [rng.randint(0, 3) for _ in range(k)]
        ys = [rng.randint(0, 3) for _ in range(k)]
        plus = MonoidWord({f"chi{i}": c for i, c in enumerate(xs)})
        minus = MonoidWord({f"chi{i}": c for i, c in enumerate(ys)})
        expected = brauer_induction(table.virtual([a - b for a, b in zip(xs, ys)]))
        got = bext(plus, minus)
        want = EpsModuleElement({i: EpsScalar(c, 0) for i, c in expected.coeffs.items()})
        if got != want:
            ok_b = False
    _check(out, name, "real-eps",
           "b_G wrapper: twist-2 extension equals the additive extension", ok_b)
    return out


_SUITE_FUNS = {
    "group-core": _suite_group_core,
    "characters": _suite_characters,
    "lambda-adams": _suite_lambda_adams,
    "monomial-brauer": _suite_monomial,
}


def run_verification(
    corpus_dir=None,
    name_filter: str | None = None,
    bound: int = DEFAULT_BOUND,
    parallel: bool = True,
) -> VerifyReport:
    t0 = time.time()
    entries = corpus_entries(corpus_dir)
    if name_filter:
        entries = tuple(e for e in entries if name_filter.lower() in e.name.lower())
    report = VerifyReport()
    if not entries:
        report.warning = "0 suites run (no corpus entry matches the filter)"
        report.elapsed = time.time() - t0
        return report

    def run_group(entry: CorpusEntry) -> list[CheckResult]:
        results: list[CheckResult] = []
        try:
            G = entry.load(bound=bound)
        except BrindError as exc:
            results.append(CheckResult(entry.name, "load", "corpus group loads", False, str(exc)))
            return results
        results.append(CheckResult(entry.name, "load", "corpus group loads", True))
        for suite_name in entry.suites:
            fun = _SUITE_FUNS[suite_name]
            try:
                results.extend(fun(entry, G))
            except BrindError as exc:
                results.append(
                    CheckResult(entry.name, suite_name, "suite completes", False, str(exc))
                )
        return results

    if parallel:
        with ThreadPoolExecutor() as pool:
            chunks = list(pool.map(run_group, entries))
    else:
        chunks = [run_group(e) for e in entries]
    for chunk in chunks:
        report.results.extend(chunk)

    s3 = next((e for e in entries if e.order == 6 and e.name.lower().startswith("s")), None)
    guinea = s3 or entries[0]
    report.results.extend(_suite_real_eps(guinea.load(bound=bound)))

    report.results.sort(key=lambda r: (r.group, r.suite, r.identity))
    report.elapsed = time.time() - t0
    return report
