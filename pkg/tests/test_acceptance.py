"""Acceptance suite: ten criteria, each checked exactly and reported on one line."""
import itertools
import random

import pytest

from albmod.artin_hasse import exp_form_rational, is_p_integral, product_form_rational
from albmod.cft import as_conductor, cover_count_vs_dual, local_conductor, reciprocity_well_defined
from albmod.curve import Divisor, random_ratfun, reciprocity_sums
from albmod.errors import CapError
from albmod.fields import GF, FFElem
from albmod.filtration import (
    as_reduce,
    filF_membership,
    in_fil,
    level_pole_bound,
    nty,
    nty_upper_bound,
)
from albmod.laurent import LaurentSeries
from albmod.modulus import RationalMapData, lemma_equivalence_report, local_class, modulus_of
from albmod.parse import parse_divisor, parse_ratfun
from albmod.places import Place, places_up_to_degree
from albmod.ratfun import RatFun
from albmod.ray_chow import global_fil_sections, rr_dimension, surjection_check, universality_check
from albmod.witt import WittVector, build_universal_polys

from conftest import random_divisor, random_map


@pytest.fixture
def report(capsys):
    def emit(n, title, ok, detail=""):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {n}: {title}" + (f" ({detail})" if detail else ""))
        assert ok, detail

    return emit


def effective_divisors(F, max_degree):
    """All effective divisors of degree 1..max_degree on P^1 over F."""
    places = places_up_to_degree(F, max_degree) + [Place.infinity(F)]
    places = sorted(set(places))
    out = []

    def rec(i, budget, acc):
        if i == len(places):
            if acc:
                out.append(Divisor(F, dict(acc)))
            return
        q = places[i]
        for k in range(budget // q.degree + 1):
            rec(i + 1, budget - k * q.degree, acc + ([(q, k)] if k else []))

    rec(0, max_degree, [])
    return out


# -- 1 ------------------------------------------------------------------------------------


def test_criterion_1_witt_ring(report):
    failures = []
    triples = 0
    for p, r in itertools.product((2, 3), (1, 2, 3)):
        if not build_universal_polys(p, r).verify_ghost_identities():
            failures.append(f"ghost identities p={p} r={r}")
        rng = random.Random(10 * p + r)
        for _ in range(30):
            x = WittVector([rng.randint(-30, 30) for _ in range(r)], p)
            y = WittVector([rng.randint(-30, 30) for _ in range(r)], p)
            gx, gy = x.ghost(), y.ghost()
            if (x + y).ghost() != [a + b for a, b in zip(gx, gy)] or (x * y).ghost() != [a * b for a, b in zip(gx, gy)]:
                failures.append(f"ghost map p={p} r={r}")
        F = GF(p, 2)
        rings = [
            ("F_q", lambda: FFElem(F, rng.randrange(F.order))),
            ("Laurent", lambda: LaurentSeries.from_dict(F, {e: rng.randrange(F.order) for e in range(-2, 2)})),
        ]
        for name, draw in rings:
            for _ in range(84):
                a, b, c = (WittVector([draw() for _ in range(r)], p) for _ in range(3))
                triples += 1
                ok = (
                    a + b == b + a
                    and a * b == b * a
                    and (a + b) + c == a + (b + c)
                    and (a * b) * c == a * (b * c)
                    and a * (b + c) == a * b + a * c
                    and (a + (-a)).is_zero()
                )
                if not ok:
                    failures.append(f"axioms over {name} p={p} r={r}")
    report(1, "Witt ring axioms and ghost oracle", not failures and triples >= 1000, f"{triples} triples, {len(failures)} failures")


# -- 2 ------------------------------------------------------------------------------------


def test_criterion_2_artin_hasse(report):
    bad = []
    for p in (2, 3, 5):
        a, b = exp_form_rational(p, 64), product_form_rational(p, 64)
        if a != b:
            bad.append(f"p={p} formulas differ")
        if not all(is_p_integral(c, p) for c in a):
            bad.append(f"p={p} not integral")
    report(2, "Artin-Hasse exp and product forms agree through t^64", not bad, "; ".join(bad) or "p = 2, 3, 5")


# -- 3 ------------------------------------------------------------------------------------


def _rand_fil(F, rng, r, n):
    comps = []
    for j in range(r):
        b = level_pole_bound(n, F.p, r, j)
        comps.append(LaurentSeries.from_dict(F, {e: rng.randrange(F.order) for e in range(-b, 3)}))
    return WittVector(comps, F.p)


def _r1_corpus():
    """At least 500 (function, place) pairs with poles, over F_2, F_3 and F_4."""
    out = []
    for F in (GF(2), GF(3), GF(2, 2)):
        rng = random.Random(F.order)
        places = places_up_to_degree(F, 2)
        t = RatFun.t(F)
        while len(out) < 175 * (1 + [2, 3, 4].index(F.order)):
            q = rng.choice(places)
            local = 1 / t if q.is_infinite else RatFun.from_poly(q.poly)
            f = RatFun.const(F, 0)
            for e in range(1, rng.randint(1, 10) + 1):
                c = rng.randrange(F.order)
                if c:
                    f = f + RatFun.const(F, c) / local**e
            f = f + RatFun.const(F, rng.randrange(F.order)) * t
            if f and q.valuation(f) < 0:
                out.append((f, q))
    return out


def test_criterion_3_filtration(report):
    bad = []
    rng = random.Random(3)
    for i in range(1000):
        p = (2, 3)[i % 2]
        r = 1 + i % 3
        F = GF(p)
        n = rng.randint(0, 9)
        a, b = _rand_fil(F, rng, r, n), _rand_fil(F, rng, r, n)
        if not in_fil(a + b, n):
            bad.append(f"closure p={p} r={r} n={n}")
    corpus = _r1_corpus()
    queries = 0
    try:
        for f, q in corpus:
            cls = local_class(WittVector([f], f.field.p), q)
            series = cls.comps[0]
            if nty(cls) != as_reduce(series)[0]:
                bad.append(f"nty {f} at {q}")
        for _ in range(60):
            F = GF(rng.choice((2, 3)))
            u = _rand_fil(F, rng, 2, rng.randint(1, 6))
            for n in range(nty_upper_bound(u) + 1):
                cert = filF_membership(u, n)
                queries += 1
                big = filF_membership(u, n, cert.caps.enlarged(F.p), check_stability=False)
                if big.is_in != cert.is_in:
                    bad.append("cap instability")
    except CapError as exc:
        bad.append(str(exc))
    ok = not bad and len(corpus) >= 500
    report(3, "filtration closure, nty = reduction oracle, cap stability", ok, f"1000 sums, {len(corpus)} functions, {queries} re-checked queries, {len(bad)} failures")


# -- 4 ------------------------------------------------------------------------------------


def test_criterion_4_lemma(report):
    pairs = 0
    disagree = []
    verdicts = {True: 0, False: 0}
    for p, r in itertools.product((2, 3), (1, 2)):
        F = GF(p)
        rng = random.Random(40 + 10 * p + r)
        for k in range(55):
            phi = random_map(F, rng, r, max_pole=2 if (p, r) == (3, 2) else 3)
            if k % 3 == 0:
                # near the modulus, where the verdict is decided by a single place
                mod = modulus_of(phi)[0]
                q = rng.choice(mod.support) if mod.support else Place.infinity(F)
                D = mod - Divisor(F, {q: 1}) if mod[q] > 0 else mod
            else:
                D = random_divisor(F, rng)
            rep = lemma_equivalence_report(phi, D)
            pairs += 1
            verdicts[rep["i"]] += 1
            if not rep["agree"]:
                disagree.append(rep["counterexample"])
    ok = not disagree and pairs >= 200 and verdicts[True] and verdicts[False]
    report(4, "modulus bound <=> tau-membership", ok, f"{pairs} pairs, {verdicts[True]} in / {verdicts[False]} out, {len(disagree)} disagreements")


# -- 5 ------------------------------------------------------------------------------------


def test_criterion_5_universality(report):
    total = 0
    bad = []
    for p in (2, 3):
        for D in effective_divisors(GF(p), 4):
            rep = universality_check(D)
            total += 1
            if not rep["ok"]:
                bad.append(f"p={p} {D.format()}")
    named = {("2*inf", 2): [2], ("3*(t)", 2): [4], ("2*(t) + 1*inf", 3): [6]}
    for (text, p), factors in named.items():
        if universality_check(parse_divisor(text, GF(p)))["ray"] != factors:
            bad.append(f"named example {text}")
    report(5, "ray class formula = brute-force Chow group", not bad, f"{total} divisors, {len(bad)} failures")


# -- 6 ------------------------------------------------------------------------------------


def test_criterion_6_reciprocity(report):
    bad = []
    for i in range(1000):
        F = (GF(2), GF(3), GF(2, 2), GF(5))[i % 4]
        rng = random.Random(i)
        g, f = random_ratfun(F, rng, 3), random_ratfun(F, rng, 3)
        if reciprocity_sums(g, f) != (0, 1):
            bad.append(f"sums {g}, {f}")
    branches = {True: 0, False: 0}
    cases = 0
    for p in (2, 3):
        F = GF(p)
        fs = ["t", "1/t", "t^2 + 1/(t+1)", "1/t^2", "t/(t^2+1)"]
        Ds = ["inf", "2*inf", "3*(t)", "2*(t) + 3*inf", "(t) + (t+1) + inf"]
        for ftext, Dtext in itertools.product(fs, Ds):
            rep = reciprocity_well_defined(parse_ratfun(ftext, F), parse_divisor(Dtext, F), samples=10)
            cases += 1
            branches[rep["conductor_le_D"]] += 1
            if not rep["ok"]:
                bad.append(f"p={p} f={ftext} D={Dtext}")
    ok = not bad and cases == 50 and branches[True] and branches[False]
    report(6, "reciprocity laws and CH_0 well-definedness", ok, f"1000 pairs, {cases} grid cases ({branches[True]} pass / {branches[False]} certificates), {len(bad)} failures")


# -- 7 ------------------------------------------------------------------------------------


def test_criterion_7_conductor(report):
    bad = []
    cases = 0
    for F in (GF(2), GF(3), GF(2, 2)):
        p = F.p
        rng = random.Random(70 + F.order)
        places = places_up_to_degree(F, 2)
        t = RatFun.t(F)
        for _ in range(20):
            q = rng.choice(places)
            m = rng.choice([k for k in range(1, 9) if k % p])
            local = 1 / t if q.is_infinite else RatFun.from_poly(q.poly)
            f = RatFun.const(F, rng.randrange(1, F.order)) / local**m
            for e in range(1, m):
                if e % p:
                    f = f + RatFun.const(F, rng.randrange(F.order)) / local**e
            f = f + RatFun.const(F, rng.randrange(F.order)) * (t if not q.is_infinite else 1 / t)
            w = WittVector([f], p)
            cases += 1
            mod = modulus_of(RationalMapData(F, unip=[w]))[0]
            if mod[q] != m + 1 or local_conductor(w, q) != m + 1:
                bad.append(f"{f} at {q}")
            base = as_conductor(f)
            for nu in (1, 2):
                if as_conductor(f ** (p**nu)) != base:
                    bad.append(f"Frobenius {f} nu={nu}")
    report(7, "conductor of reduced Artin-Schreier functions", not bad and cases >= 50, f"{cases} cases, {len(bad)} failures")


# -- 8 ------------------------------------------------------------------------------------


def test_criterion_8_surjection(report):
    grid = []
    for p in (2, 3):
        F = GF(p)
        base = ["2*(t)", "2*inf", "(t) + inf", "2*(t) + 1*(t+1)", "3*inf"]
        bigger = ["3*(t) + inf", "4*inf", "2*(t) + 2*inf", "3*(t) + 2*(t+1)", "4*inf + (t)"]
        for a, b in zip(base, bigger):
            grid.append((parse_divisor(b, F), parse_divisor(a, F)))
            grid.append((parse_divisor(a, F), parse_divisor(a, F)))
    bad = [f"{E.format()} -> {D.format()}" for E, D in grid if not surjection_check(E, D)["ok"]]
    report(8, "ray group reduction maps are surjective", not bad and len(grid) == 20, f"{len(grid)} pairs, {len(bad)} failures")


# -- 9 ------------------------------------------------------------------------------------


def test_criterion_9_sections(report):
    bad = []
    brute = 0
    for p in (2, 3):
        F = GF(p)
        for n in range(9):
            D = parse_divisor(f"{n}*inf", F) if n else Divisor.zero(F)
            for r in (1, 2, 3):
                rep = global_fil_sections(D, r)
                dims = [rr_dimension(D.floor_div(p ** (r - 1 - j))) for j in range(r)]
                if rep["dims"] != dims or rep["dims"] != [n // p ** (r - 1 - j) + 1 for j in range(r)]:
                    bad.append(f"dims p={p} n={n} r={r}")
                if not rep["verschiebung_ok"] or rep["order"] != F.order ** sum(dims):
                    bad.append(f"order p={p} n={n} r={r}")
                if "brute_force_ok" in rep:
                    brute += 1
                    if not rep["brute_force_ok"]:
                        bad.append(f"brute force p={p} n={n} r={r}")
    report(9, "global sections of fil_D W_r", not bad, f"54 cases, {brute} brute-force counts, {len(bad)} failures")


# -- 10 -----------------------------------------------------------------------------------


def test_criterion_10_covers(report):
    bad = []
    total = 0
    for p in (2, 3):
        F = GF(p)
        for D in [Divisor.zero(F)] + effective_divisors(F, 4):
            total += 1
            if not cover_count_vs_dual(D)["ok"]:
                bad.append(f"p={p} {D.format()}")
    report(10, "Artin-Schreier cover census = dual of CH_0^0", not bad, f"{total} conductors, {len(bad)} failures")
