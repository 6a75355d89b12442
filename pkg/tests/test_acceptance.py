"""The ten acceptance criteria, each with its time budget.

Every test records a PASS/FAIL line that is printed in the pytest terminal
summary (and immediately with ``pytest -s``).
"""

import contextlib
import io
import json
import random
import time
from fractions import Fraction as F

from mhpoly import catalog as cat
from mhpoly import poly
from mhpoly.cli import run
from mhpoly.minmodel import (
    build_minimal_model,
    check_dd_zero,
    check_minimality,
    check_quasi_iso,
    homotopy_ranks,
    projective_space_presentation,
    sphere_presentation,
)
from mhpoly.poly import RationalPoint
from mhpoly.recheck import recheck
from mhpoly.verify import (
    cube_threshold,
    euler_compare,
    halfline_threshold,
    hilali,
    margin,
    point_threshold,
)

from conftest import ACCEPTANCE, naive_eval, naive_mul

P1 = cat.projective_space(1)


@contextlib.contextmanager
def criterion(num, title, budget):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        ACCEPTANCE[num] = (False, title)
        print(f"criterion {num}: FAIL  {title}")
        raise
    elapsed = time.perf_counter() - start
    ok = elapsed < budget
    detail = f"{title} ({elapsed:.2f}s, budget {budget}s)"
    ACCEPTANCE[num] = (ok, detail)
    print(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, f"criterion {num} exceeded its time budget: {elapsed:.2f}s"


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue()


# hand-written atom data for the oracle, independent of the catalog constructors
def _atom_tables(name):
    if name == "pt":
        return {(0, 0, 0): 1}, {}
    n = int(name[1:])
    if name[0] == "P":
        return ({(2 * j, j, j): 1 for j in range(n + 1)},
                {(2, 1, 1): 1, (2 * n + 1, n + 1, n + 1): 1})
    pi = {(n, 0, 0): 1}
    if n % 2 == 0:
        pi[(2 * n - 1, 0, 0)] = 1
    return {(0, 0, 0): 1, (n, 0, 0): 1}, pi


class _D(dict):
    """Plain dict usable with the naive convolution helper."""


def _oracle(factors):
    """mh and mh_pi of a product of atom powers by naive convolution and summation."""
    mh, pi = _D({(0, 0, 0): 1}), {}
    for name, e in factors:
        a_mh, a_pi = _atom_tables(name)
        for _ in range(e):
            mh = _D(naive_mul(mh, _D(a_mh)))
            for key, c in a_pi.items():
                pi[key] = pi.get(key, 0) + c
    return dict(mh), pi


CORPUS_ATOMS = ["pt", "P1", "P2", "P3", "S2", "S3", "S4"]


def _corpus(count=200, seed=2024):
    """Random expressions with at most 4 atom factors and powers at most 5."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        k = rng.randint(1, 4)
        atoms = [rng.choice(CORPUS_ATOMS) for _ in range(k)]
        exps = [rng.randint(1, 5) for _ in range(k)]
        pieces, factors, i = [], [], 0
        while i < k:
            if i + 1 < k and rng.random() < 0.25:
                # a grouped pair raised to a common power
                g = rng.randint(1, 5)
                pieces.append(f"({atoms[i]} x {atoms[i + 1]})^{g}")
                factors += [(atoms[i], g), (atoms[i + 1], g)]
                i += 2
            else:
                e = exps[i]
                pieces.append(atoms[i] if e == 1 else f"{atoms[i]}^{e}")
                factors.append((atoms[i], e))
                i += 1
        out.append((" x ".join(pieces), factors))
    return out


CORPUS = _corpus()


def _products(X):
    if isinstance(X, cat.Product):
        yield X
        yield from _products(X.left)
        yield from _products(X.right)
    elif isinstance(X, cat.Power):
        yield from _products(X.base)


def test_criterion_01_show_p1():
    with criterion(1, "show P1 reproduces MH = 1 + t^2uv and MHpi = t^2uv + t^3u^2v^2", 1.0):
        code, out = cli("show", "--space", "P1")
        assert code == 0
        assert "MH: 1 + t^2uv\n" in out
        assert "MHpi: t^2uv + t^3u^2v^2\n" in out
        code, out = cli("show", "--space", "P1", "--format", "json")
        data = json.loads(out)
        assert data["mh"] == [[0, 0, 0, "1"], [2, 1, 1, "1"]]
        assert data["mh_pi"] == [[2, 1, 1, "1"], [3, 2, 2, "1"]]


def test_criterion_02_hilali_equality():
    with criterion(2, "hilali(P1) is 2 = 2 and the strict check exits 2", 5.0):
        c = hilali(P1)
        assert (c.left, c.right, c.relation) == (2, 2, "=")
        code, out = cli("hilali", "--space", "P1", "--format", "json")
        assert code == 2
        assert json.loads(out)["relation"] == "="


def test_criterion_03_margin_failure_near_one():
    with criterion(3, "margin(P1, (11/10,1,1)) = -331/1000 < 0", 5.0):
        m = margin(P1, RationalPoint(F(11, 10), 1, 1))
        assert m == F(-331, 1000) and m < 0
        # rational evaluation by hand: (1 + t^2) - (t^2 + t^3) at t = 11/10
        t = F(11, 10)
        assert (1 + t**2) - (t**2 + t**3) == m


def test_criterion_04_product_laws():
    with criterion(4, f"product laws on {len(CORPUS)} random expressions", 30.0):
        assert len(CORPUS) == 200
        for text, factors in CORPUS:
            X = cat.parse_space_expr(text)
            mh, pi = _oracle(factors)
            assert X.mh == poly.MHPolynomial(mh), text
            assert X.mh_pi == poly.MHPolynomial(pi), text
            for node in _products(X):
                L, R = node.left, node.right
                assert node.mh == poly.mul(L.mh, R.mh)
                assert node.mh_pi == poly.add(L.mh_pi, R.mh_pi)
                assert cat.euler(node) == cat.euler(L) * cat.euler(R)
                assert cat.euler_pi(node) == cat.euler_pi(L) + cat.euler_pi(R)
            # chi from the oracle tables, multiplicative over factors
            chi = 1
            chi_pi = 0
            for name, e in factors:
                a_mh, a_pi = _atom_tables(name)
                chi *= naive_eval(a_mh, -1, 1, 1) ** e
                chi_pi += e * naive_eval(a_pi, -1, 1, 1)
            assert cat.euler(X) == chi and cat.euler_pi(X) == chi_pi, text


def test_criterion_05_euler_comparison():
    with criterion(5, "euler_compare is strict < on the whole corpus", 30.0):
        for text, _ in CORPUS:
            c = euler_compare(cat.parse_space_expr(text))
            assert c.relation == "<" and c.left < c.right, text


def _brute(A, B, upto=50):
    return [n for n in range(1, upto + 1) if not n * B < A ** n]


def test_criterion_06_point_thresholds():
    with criterion(6, "point thresholds P1 at (1,1,1) -> 3 and (2,2,2) -> 2", 1.0):
        c = point_threshold(P1, RationalPoint(1, 1, 1))
        assert c.n0 == 3 and c.minimal
        w = c.minimality_witness
        assert w.n == 2 and w.lhs == w.rhs == 4
        assert _brute(2, 2) == [1, 2]
        c2 = point_threshold(P1, RationalPoint(2, 2, 2))
        assert (c2.n0, c2.A_lo, c2.B_hi) == (2, 17, 144)
        assert 2 * 144 == 288 < 289 == 17**2
        assert _brute(17, 144) == [1]
        for cert in (c, c2):
            fails = _brute(cert.A_lo, cert.B_hi)
            assert max(fails) + 1 == cert.n0


def test_criterion_07_cube_certificate():
    with criterion(7, "cube [1/2,2]^3 for P1 gives n0 = 167; 10x10x10 grid at n0 and n0+5", 60.0):
        c = cube_threshold(P1, F(1, 2), 2, 0)
        assert (c.n0, c.A_lo, c.B_hi) == (167, F(17, 16), 144)
        # scan oracle: integers only, 144 n 16^n < 17^n
        fails = [n for n in range(1, 400) if not 144 * n * 16**n < 17**n]
        assert max(fails) == 166
        grid = [F(1, 2) + F(3, 2) * i / 9 for i in range(10)]
        for t in grid:
            for u in grid:
                for v in grid:
                    A = 1 + t * t * u * v
                    B = t * t * u * v + t**3 * u * u * v * v
                    for n in (c.n0, c.n0 + 5):
                        assert n * B < A ** n, (t, u, v, n)


def test_criterion_08_halfline_certificate():
    with criterion(8, "half-line [1/2, oo) for P1 gives n0 = 3; 1000-point sample up to 100", 60.0):
        c = halfline_threshold(P1, F(1, 2))
        assert c.n0 == 3 and c.minimal
        assert c.tail is not None and c.tail.holds
        leaves = list(c.subdivision.leaves())
        assert leaves and all(leaf.passed for leaf in leaves)
        assert c.subdivision.box.lo.t == F(1, 2) and c.subdivision.box.hi.t == c.tail.t_star
        # the leaves tile [1/2, t*]
        spans = sorted((leaf.box.lo.t, leaf.box.hi.t) for leaf in leaves)
        assert spans[0][0] == F(1, 2) and spans[-1][1] == c.tail.t_star
        assert all(a[1] == b[0] for a, b in zip(spans, spans[1:]))
        rng = random.Random(8)
        samples = [F(1, 2), F(1), F(100)] + [
            F(1, 2) + F(rng.randint(0, 99_500_000), 1_000_000) for _ in range(997)]
        for t in samples:
            P, Ppi = 1 + t * t, t * t + t**3
            for n in (3, 4, 10):
                assert n * Ppi < P ** n, (t, n)


def _emitted_certificates():
    return {
        "point": [point_threshold(P1, RationalPoint(1, 1, 1)), point_threshold(P1, RationalPoint(2, 2, 2))],
        "cube": [cube_threshold(P1, F(1, 2), 2, 0)],
        "halfline": [halfline_threshold(P1, F(1, 2))],
    }


def test_criterion_09_minimal_models():
    with criterion(9, "minimal models of P1..P3 and S2..S7 with all checks", 60.0):
        cases = [(projective_space_presentation(n), {2: 1, 2 * n + 1: 1}) for n in (1, 2, 3)]
        cases += [(sphere_presentation(n), {n: 1} if n % 2 else {n: 1, 2 * n - 1: 1})
                  for n in range(2, 8)]
        for pres, expected in cases:
            mm = build_minimal_model(pres)
            assert homotopy_ranks(mm) == expected
            assert check_dd_zero(mm) and check_minimality(mm)
            assert check_quasi_iso(mm, pres, mm.cutoff).ok


def test_criterion_10_certificate_integrity():
    with criterion(10, "recheck accepts criteria 6-8 certificates and rejects n0 - 1", 60.0):
        for variant, certs in _emitted_certificates().items():
            for cert in certs:
                doc = json.loads(json.dumps(cert.to_json(), sort_keys=True))
                assert doc["variant"] == variant
                result = recheck(doc)
                assert result.ok, result.errors
                plain = json.loads(json.dumps(doc))
                plain["n0"] -= 1
                assert not recheck(plain).ok
                # the same mutation with the bookkeeping fields made consistent
                consistent = json.loads(json.dumps(plain))
                if consistent.get("base_check"):
                    consistent["base_check"]["n"] = consistent["n0"]
                if consistent.get("minimality_witness"):
                    consistent["minimality_witness"]["n"] = consistent["n0"] - 1
                assert not recheck(consistent).ok
