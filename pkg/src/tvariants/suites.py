"""
Named verification sweeps over T_n, shared by the CLI and the test suite.

Each suite runs one statement over every case at degree n (exhaustive) or
over a seeded random sample, and collects failures instead of stopping.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterator

from .constructions import (
    InversePair,
    group_criterion,
    inverse_count,
    inverse_pair_bijections,
    inverses_of,
    lamb_sandwich_witnesses,
    local_as_variant,
    local_submonoid_check,
    random_inverse,
    restriction_witness,
    sandwich_monoids,
    transport_variant,
    variant_as_local,
    variant_embedding,
)
from .oracle import SearchBudget, find_embedding, minimal_degree
from .semigroup import full_tn, variant
from .transformation import Transformation, enumerate_all, sample
from .witness import WitnessError

EXHAUSTIVE_DEGREE_CAP = 4


@dataclass
class SuiteReport:
    suite: str
    n: int
    mode: str
    cases: int = 0
    failures: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures and self.cases > 0

    def to_json(self) -> dict:
        return {"schema": "tvariants.report/1", "suite": self.suite, "n": self.n, "mode": self.mode,
                "cases": self.cases, "passed": self.passed, "failures": self.failures}


@dataclass
class Mode:
    exhaustive: bool = True
    seed: int = 0
    count: int = 100

    def __str__(self) -> str:
        return "exhaustive" if self.exhaustive else f"random(seed={self.seed},count={self.count})"


def _elements(n: int, mode: Mode, pred: Callable[[Transformation], bool] = lambda a: True
              ) -> Iterator[Transformation]:
    if mode.exhaustive:
        yield from (a for a in enumerate_all(n) if pred(a))
        return
    rng = random.Random(mode.seed)
    done = tries = 0
    while done < mode.count and tries < 1000 * mode.count:
        tries += 1
        a = sample(n, rng)
        if pred(a):
            done += 1
            yield a


def _pairs(n: int, mode: Mode) -> Iterator[InversePair]:
    if mode.exhaustive:
        for a in enumerate_all(n):
            for b in inverses_of(a):
                yield InversePair(a, b)
        return
    rng = random.Random(mode.seed)
    for _ in range(mode.count):
        yield random_inverse(sample(n, rng), rng)


def _run(name: str, n: int, mode: Mode, cases, check) -> SuiteReport:
    rep = SuiteReport(name, n, str(mode))
    for case in cases:
        rep.cases += 1
        try:
            problem = check(case)
        except (WitnessError, ValueError) as exc:
            problem = str(exc)
        if problem:
            rep.failures.append({"case": _describe(case), "problem": problem})
    return rep


def _describe(case) -> str:
    if isinstance(case, InversePair):
        return f"a={case.a} b={case.b}"
    return str(case)


# -- individual statements --------------------------------------------------------

def _bijections(pair):
    checks = inverse_pair_bijections(pair)
    return "" if all(c.passed for c in checks) else "bijection failed"


def _submonoids(pair):
    return "" if local_submonoid_check(pair) else "aSb != eSe or bSa != fSf"


def _monoids(pair):
    sandwich_monoids(pair)
    return ""


def _group(pair):
    g = group_criterion(pair)
    return "" if g.consistent else f"conditions disagree: {g}"


def _lamb(pair):
    lamb_sandwich_witnesses(pair)
    return ""


def _restriction(e):
    res = restriction_witness(e)
    T = full_tn(len(res.points))
    rng = random.Random(str(e))
    for g in list(T)[:: max(1, len(T) // 16)]:
        outside = e.degree - len(res.points)
        fill = [rng.randint(1, e.degree) for _ in range(outside)]
        if res.back(g) != res.back(g, fill) or res.witness(res.back(g)) != g:
            return f"extension choice matters for {g}"
    return ""


def _transport(e):
    res = restriction_witness(e)
    src = res.witness.source
    picks = src.elements if len(src) <= 27 else src.elements[:: len(src) // 27]
    for c in picks:
        transport_variant(res.witness, c)
    return ""


def _local_to_variant(a):
    r = local_as_variant(a)
    if r.c.rank != (a * a).rank:
        return "rank(c) != rank(a^2)"
    return ""


def _variant_to_local(a):
    r = variant_as_local(a)
    s = r.scaffold
    if s.b.rank != a.degree or s.degree != 2 * a.degree - a.rank:
        return "scaffold degree or rank(b) wrong"
    if len(r.witness.target) != a.degree ** a.degree:
        return "|bT_Zb| != n^n"
    return ""


def _embedding(a):
    emb = variant_embedding(a)
    m = 2 * a.degree - a.rank
    if emb.degree != m:
        return f"embedding degree {emb.degree} != {m}"
    found = find_embedding(variant(full_tn(a.degree), a), m, SearchBudget(max_seconds=120))
    if found.status != "found":
        return f"independent search at degree {m}: {found.status}"
    return ""


def _corank_one(a):
    b = minimal_degree(variant(full_tn(a.degree), a))
    if not (b.status == "exact" and b.lower == a.degree + 1):
        return f"bounds {b.lower}..{b.upper} ({b.status})"
    return ""


def _inverse_count(f):
    got = len(inverses_of(f))
    want = inverse_count(f)
    return "" if got == want else f"{got} inverses, formula gives {want}"


SUITES: dict[str, tuple[str, Callable]] = {
    "inverse-bijections": ("pairs", _bijections),
    "local-submonoids": ("pairs", _submonoids),
    "sandwich-monoids": ("pairs", _monoids),
    "group-criterion": ("pairs", _group),
    "lamb-sandwich": ("pairs", _lamb),
    "transport": ("idempotents", _transport),
    "restriction": ("idempotents", _restriction),
    "local-to-variant": ("all", _local_to_variant),
    "variant-to-local": ("all", _variant_to_local),
    "embedding": ("all", _embedding),
    "corank-one-degree": ("corank1", _corank_one),
    "inverse-count": ("all", _inverse_count),
}


def run_suite(name: str, n: int, mode: Mode | None = None,
              degree_cap: int = EXHAUSTIVE_DEGREE_CAP) -> SuiteReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    mode = mode or Mode()
    if mode.exhaustive and n > degree_cap:
        raise ValueError(f"exhaustive mode is capped at degree {degree_cap}")
    kind, check = SUITES[name]
    if kind == "pairs":
        cases = _pairs(n, mode)
    elif kind == "idempotents":
        cases = _elements(n, mode, lambda a: a.is_idempotent())
    elif kind == "corank1":
        cases = _elements(n, mode, lambda a: a.rank == n - 1)
    else:
        cases = _elements(n, mode)
    return _run(name, n, mode, cases, check)
