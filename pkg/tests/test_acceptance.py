"""Acceptance gate: eight criteria, each checked exactly.  Each test prints
one PASS/FAIL line; the lines are repeated in the terminal summary.  Run
``python3 tests/test_acceptance.py`` to get only those lines."""

import itertools
import os
import time

import numpy as np
import pytest

import oracles
from corpora import modules_up_to, negative_maps, positive_maps
from algebroids import cli, shipped_example, shipped_examples
from algebroids import linalg as la
from algebroids.algebra import (field_algebra, polynomial_quotient, product_algebra, truncated_polynomial)
from algebroids.comodule import (ComoduleHom, comodule_cokernel, comodule_hom_defect, comodule_hom_space,
                                 comodule_kernel, counit_retraction, extended_comodule, generator_witness,
                                 identity_comodule_hom, make_comodule_hom)
from algebroids.corpus import generate_corpus
from algebroids.descent import (comodule_of_descent, descent_hom_defect, descent_maps, descent_of_comodule,
                               make_descent_datum)
from algebroids.equivariant import (comodule_from_equivariant, cyclic_shift_action, enumerate_comodules,
                                    enumerate_equivariant, equivariant_from_comodule, equivariant_hom_space,
                                    klein_swap_action, sign_module, swap_action, symmetric_action)
from algebroids.fileformat import Workspace, load_text, parse, parse_file, serialize
from algebroids.flat_descent import amitsur_check, cartesian_check
from algebroids.functoriality import (adjunction_check, coinduce, coinduce_map, coinduce_morphism,
                                      coinduced_extended_iso, induce)
from algebroids.groups import trivial_action, trivial_group
from algebroids.hopf import (AXIOMS, group_action_algebroid, group_algebroid_components, group_restriction_hom,
                             identity_algebroid_hom, make_hopf_algebroid, resolve_group_convention,
                             unit_algebroid)
from algebroids.modules import ModuleHom, free_module, ideal_module, is_faithfully_flat, regular_module

SEED = 0
RESULTS = {}


def record(number, title, fn, limit=None):
    t0 = time.perf_counter()
    error = None
    try:
        detail = fn()
    except AssertionError as exc:
        detail, error = str(exc) or "assertion failed", exc
    elapsed = time.perf_counter() - t0
    if error is None and limit is not None and elapsed >= limit:
        error = AssertionError(f"took {elapsed:.1f} s, limit {limit} s")
        detail = str(error)
    line = f"criterion {number} {'PASS' if error is None else 'FAIL'}: {title} ({elapsed:.1f} s) {detail or ''}"
    RESULTS[number] = line.rstrip()
    print(RESULTS[number])
    if error is not None:
        raise error


@pytest.fixture(scope="module")
def corpus():
    return generate_corpus(seed=SEED)


def oracle_hom_dim(s, d):
    p = s.H.p
    return oracles.comodule_hom_dim(s.H.A1.dim, s.M.action.tolist(), d.M.action.tolist(),
                                    la.mm(s.E.section, s.psi, p).tolist(), d.E.projection.tolist(),
                                    d.psi.tolist(), p)


def sample_hom(src, dst, rng):
    basis = comodule_hom_space(src, dst)
    if not basis:
        return None
    p = src.H.p
    m = sum(int(c) * b.matrix for c, b in zip(rng.integers(0, p, len(basis)), basis)) % p
    return ComoduleHom(src, dst, ModuleHom(src.M, dst.M, m, check=False))


# -- 1 ------------------------------------------------------------------------

def criterion_1():
    cases = {f"unit {name}": unit_algebroid(A).report for name, A in (
        ("F2", field_algebra(2)), ("F3", field_algebra(3)), ("F2[x]/x^2", truncated_polynomial(2, 2)),
        ("F3xF3", product_algebra(3, 2)))}
    for name, act in (("Z/2 swap on F3^2", swap_action(3)), ("Z/3 cyclic on F2^3", cyclic_shift_action(2, 3))):
        cases[name] = make_hopf_algebroid(*group_algebroid_components(act), lenient=True)
    h, trials = resolve_group_convention(symmetric_action(5, 3))
    cases["S3 on F5^3"] = h.report
    for name, rep in cases.items():
        assert set(rep.results) == set(AXIOMS), name
        assert rep.ok, (name, rep.failures())
    return f"{len(cases)} algebroids x {len(AXIOMS)} identities; S3 convention {h.report.notes['convention']}"


def test_criterion_1_axioms():
    record(1, "axiom suite", criterion_1, limit=5)


# -- 2 ------------------------------------------------------------------------

def criterion_2(corpus):
    comods = [c for _, c in corpus.comodules]
    assert len(set(comods)) >= 50 and len({id(c.H) for c in comods}) >= 3
    assert all(0 < c.dim <= 8 for c in comods)
    for c in comods:
        d = descent_of_comodule(c)
        assert comodule_of_descent(d) == c
        assert descent_of_comodule(comodule_of_descent(d)) == d
        tau, tau_prime = descent_maps(c)
        eye = la.eye(tau.shape[0])
        assert np.array_equal(la.mm(tau_prime, tau, c.H.p), eye)
        assert np.array_equal(la.mm(tau, tau_prime, c.H.p), eye)
    homs = [f for _, f in corpus.homs]
    assert len(homs) >= 100
    for f in homs:
        d1, d2 = descent_of_comodule(f.src), descent_of_comodule(f.dst)
        assert descent_hom_defect(d1, d2, f.matrix) is None
        assert comodule_hom_defect(comodule_of_descent(d1), comodule_of_descent(d2), f.matrix) is None
    composed = 0
    for f, g in itertools.product(homs, homs):
        if f.dst is g.src and composed < 50:
            fg = g.matrix @ f.matrix % f.src.H.p
            assert descent_hom_defect(descent_of_comodule(f.src), descent_of_comodule(g.dst), fg) is None
            composed += 1
    return f"{len(set(comods))} comodules, {len(homs)} morphisms, {composed} composites"


def test_criterion_2_descent(corpus):
    record(2, "descent and comodules", lambda: criterion_2(corpus), limit=30)


# -- 3 ------------------------------------------------------------------------

def criterion_3():
    swap = group_action_algebroid(swap_action(3))
    res = group_restriction_hom(klein_swap_action(3), [0, 2])
    rng = np.random.default_rng(SEED)
    same = enumerate_comodules(swap, 2)
    small = enumerate_comodules(res.dst, 2)
    kact = res.src.group_action
    signs = [lambda g: 1, lambda g: 1 if g in (0, 1) else -1, lambda g: 1 if g in (0, 2) else -1,
             lambda g: 1 if g in (0, 3) else -1]
    big = [comodule_from_equivariant(sign_module(kact, s), res.src) for s in signs]
    big.append(extended_comodule(res.src, ideal_module(kact.algebra, [[1, 0]])))
    cases = [(identity_algebroid_hom(swap), [same[i] for i in rng.choice(len(same), 6, replace=False)],
              [same[i] for i in rng.choice(len(same), 6, replace=False)]),
             (res, big, [small[i] for i in rng.choice(len(small), 6, replace=False)] + [
                 extended_comodule(res.dst, regular_module(res.dst.A0))])]
    pairs = 0
    for f, Ms, Ps in cases:
        for M, P in itertools.product(Ms, Ps):
            r = adjunction_check(f, M, P)
            assert r.dim_left == r.dim_right, (r.dim_left, r.dim_right)
            assert r.roundtrip_ok, r.witness
            assert r.dim_left == oracle_hom_dim(induce(f, M), P)
            assert r.dim_right == oracle_hom_dim(M, coinduce(f, P))
            pairs += 1
    assert pairs >= 30
    return f"{pairs} pairs over 2 homs"


def test_criterion_3_adjunction():
    record(3, "adjunction", criterion_3, limit=60)


# -- 4 ------------------------------------------------------------------------

def criterion_4():
    res = group_restriction_hom(klein_swap_action(3), [0, 2])
    ident = identity_algebroid_hom(group_action_algebroid(swap_action(3)))
    rng = np.random.default_rng(SEED)
    laws = 0
    for f in (res, ident):
        B, p = f.dst.A0, f.src.p
        Ns = [regular_module(B), ideal_module(B, [[1, 0]]), ideal_module(B, [[0, 1]]), free_module(B, 2)]
        isos = {}
        for k, N in enumerate(Ns):
            iso = coinduced_extended_iso(f, N)
            assert la.rank(iso.matrix, p) == iso.src.dim == iso.dst.dim
            isos[k] = iso
        exts = [extended_comodule(f.dst, N) for N in Ns]
        for e in exts:
            u = coinduce_map(f, identity_comodule_hom(e))
            assert np.array_equal(u.matrix, la.eye(u.src.dim))
        for (a, ea), (b, eb) in itertools.product(enumerate(exts), repeat=2):
            lam = sample_hom(ea, eb, rng)
            if lam is None:
                continue
            # the canonical isomorphism is natural
            lhs = la.mm(coinduce_morphism(f, lam).matrix, isos[a].matrix, p)
            assert np.array_equal(lhs, la.mm(isos[b].matrix, coinduce_map(f, lam).matrix, p))
            for c, ec in enumerate(exts):
                mu = sample_hom(eb, ec, rng)
                if mu is None:
                    continue
                comp = coinduce_map(f, lam.then(mu)).matrix
                assert np.array_equal(comp, la.mm(coinduce_map(f, mu).matrix, coinduce_map(f, lam).matrix, p))
                laws += 1
    assert laws >= 20
    return f"{laws} composites checked"


def test_criterion_4_coinduction():
    record(4, "co-induction of extended comodules", criterion_4)


# -- 5 ------------------------------------------------------------------------

def criterion_5():
    act = swap_action(3)
    H = group_action_algebroid(act)
    cases = [(act, H, oracles.swap_equivariant_count_dim2(3))]
    for B in (field_algebra(2), field_algebra(3), truncated_polynomial(2, 2), product_algebra(2, 2),
              polynomial_quotient(2, [1, 1]), product_algebra(3, 2)):
        ta = trivial_action(trivial_group(), B)
        cases.append((ta, group_action_algebroid(ta), None))
    total = 0
    for a, h, dim2 in cases:
        B = a.algebra
        for d in range(3):
            eqs, cos = enumerate_equivariant(a, d), enumerate_comodules(h, d)
            assert len(eqs) == len(cos)
            if a.group.order == 1 and d:
                assert len(eqs) == oracles.trivial_group_module_count(B.mul.tolist(), B.unit.tolist(), d, B.p)
            if d == 2 and dim2 is not None:
                assert len(eqs) == dim2
            images = [comodule_from_equivariant(e, h) for e in eqs]
            assert set(images) == set(cos)
            assert all(equivariant_from_comodule(c) == e for c, e in zip(images, eqs))
            for (e1, c1), (e2, c2) in itertools.product(zip(eqs, images), repeat=2):
                assert len(equivariant_hom_space(e1, e2)) == len(comodule_hom_space(c1, c2))
            total += len(eqs)
    return f"{len(cases)} actions, {total} structures"


def test_criterion_5_equivariant():
    record(5, "equivariant oracle", criterion_5, limit=120)


# -- 6 ------------------------------------------------------------------------

def criterion_6():
    rng = np.random.default_rng(SEED)
    pos, neg = positive_maps(), negative_maps()
    assert len(pos) >= 5 and {f.p for f in pos.values()} == {2, 3, 5}
    checked = 0
    for name, f in pos.items():
        assert is_faithfully_flat(f), name
        for M in modules_up_to(f.src, 6, rng):
            assert amitsur_check(f, M).equalizer, (name, M)
            checked += 1
    assert len(neg) >= 3
    for name, f in neg.items():
        assert not is_faithfully_flat(f), name
        r = amitsur_check(f, regular_module(f.src))
        assert not r.equalizer and r.witness is not None, name
    return f"{len(pos)} flat maps on {checked} modules, {len(neg)} failures witnessed"


def test_criterion_6_amitsur():
    record(6, "Amitsur equalizer", criterion_6)


# -- 7 ------------------------------------------------------------------------

def criterion_7(corpus):
    comods = [c for _, c in corpus.comodules]
    for c in comods:
        r = counit_retraction(c)
        assert np.array_equal(la.mm(r.matrix, c.psi, c.H.p), la.eye(c.dim))
    for f in [f for _, f in corpus.homs][::4]:
        p = f.src.H.p
        k, ki = comodule_kernel(f)
        q, qc = comodule_cokernel(f)
        assert not np.any(la.mm(f.matrix, ki.matrix, p)) and not np.any(la.mm(qc.matrix, f.matrix, p))
        for g in comodule_hom_space(f.src, f.src):
            if not np.any(la.mm(f.matrix, g.matrix, p)):
                make_comodule_hom(f.src, k, la.solve(ki.matrix, g.matrix, p))
        for g in comodule_hom_space(f.dst, f.dst):
            if not np.any(la.mm(g.matrix, f.matrix, p)):
                make_comodule_hom(q, f.dst, la.solve(qc.matrix.T, g.matrix.T, p).T)
    pairs = 0
    for c in comods:
        for x in itertools.product(range(c.H.p), repeat=c.dim):
            if any(x):
                w = generator_witness(c, x)
                assert np.array_equal(la.mm(w.q.matrix, w.preimage, c.H.p), np.array(x))
                pairs += 1
    return f"{len(comods)} retractions, {pairs} generator witnesses"


def test_criterion_7_comodule_structure(corpus):
    record(7, "retractions and generator witnesses", lambda: criterion_7(corpus))


# -- 8 ------------------------------------------------------------------------

def criterion_8(tmp):
    for path in shipped_examples():
        text = load_text(path)
        assert serialize(parse(text)) == text, path
    z2, klein, flat = shipped_example("z2_swap_f3"), shipped_example("klein_f3"), shipped_example("flat_f2")
    wz, wk, wf = (Workspace(parse_file(x)) for x in (z2, klein, flat))

    def run(cmd, *argv, status=0):
        rep = cli.run(cmd, list(argv))
        assert rep.exit_status == status, (cmd, argv, rep.render())
        return rep

    def derived(path, rep, name, kind):
        return Workspace(parse(load_text(path) + "\n" + rep.derived)).get(name, kind)

    def passed(rep):
        return {c.id: c.passed for c in rep.checks}

    G = wz.get("G", "algebroid")
    assert passed(run("check-algebroid", z2, "--name", "G")) == {k: v[0] for k, v in G.report.results.items()}
    O = wz.get("O", "comodule")
    assert passed(run("check-comodule", z2, "--name", "O")) == {"linear": True, "counit": True,
                                                                 "coassociative": True}
    res = wk.get("res", "algebroid_hom")
    assert passed(run("check-algebroid-hom", klein, "--name", "res")) == {k: v[0] for k, v in
                                                                          res.report.results.items()}
    d_path = os.path.join(tmp, "d.had")
    rep = run("to-descent", z2, "--name", "O", "--as", "D", "--out", d_path)
    D = Workspace(parse_file(d_path)).get("D", "descent")
    assert D == descent_of_comodule(O)
    lib = make_descent_datum(D.H, D.M, D.tau, lenient=True)
    assert passed(run("check-descent", d_path, "--name", "D")) == {k: v[0] for k, v in lib.results.items()}
    rep = run("to-comodule", d_path, "--name", "D", "--as", "C")
    assert derived(d_path, rep, "C", "comodule") == comodule_of_descent(D)
    assert rep.derived.replace("comodule C {", "comodule O {") in load_text(z2)
    OK, OS, extS = (wk.get(n, "comodule") for n in ("OK", "OS", "extS"))
    rep = run("induce", klein, "--name", "OK", "--hom", "res", "--as", "I")
    assert np.array_equal(derived(klein, rep, "I", "comodule").psi, induce(res, OK).psi)
    rep = run("coinduce", klein, "--name", "extS", "--hom", "res", "--as", "U")
    assert np.array_equal(derived(klein, rep, "U", "comodule").psi, coinduce(res, extS).psi)
    rep = run("adjoint-check", klein, "--name", "OK", "--hom", "res", "--with", "OS")
    r = adjunction_check(res, OK, OS)
    assert (rep.data["dim_left"], rep.data["dim_right"]) == (r.dim_left, r.dim_right)
    rep = run("equivariant-to-comodule", klein, "--name", "eqK", "--as", "E")
    GK = wk.get("GK", "algebroid")
    assert derived(klein, rep, "E", "comodule") == comodule_from_equivariant(wk.get("eqK", "equivariant"), GK)
    rep = run("comodule-to-equivariant", klein, "--name", "OK", "--as", "Q")
    assert derived(klein, rep, "Q", "equivariant") == equivariant_from_comodule(OK)
    rep = run("equivariant-enumerate", z2, "--name", "swap", "--dim", "2")
    assert rep.data["counts"][2] == {"equivariant": len(enumerate_equivariant(wz.get("swap", "group_action"), 2)),
                                     "comodule": len(enumerate_comodules(G, 2))}
    rep = run("amitsur", flat, "--name", "inc", "--module", "F2sq")
    assert rep.data["agreement_dim"] == amitsur_check(wf.get("inc", "hom"), wf.get("F2sq", "module")).agreement_dim
    run("amitsur", flat, "--name", "q", "--module", "Dreg", status=1)
    for name, status in (("good", 0), ("bad", 1)):
        rst = wf.get(name, "restriction")
        rep = run("cartesian-check", flat, "--name", name, status=status)
        assert rep.data["rank"] == cartesian_check(rst.arrow, rst.source, rst.target, rst.matrix).rank
    rep = run("generator-witness", z2, "--name", "O", "--vector", "1 2")
    assert rep.data["preimage"] == generator_witness(O, [1, 2]).preimage.tolist()
    broken = os.path.join(tmp, "broken.had")
    with open(broken, "w") as fh:
        fh.write(load_text(z2).replace("psi = [\n    [1 0]", "psi = [\n    [0 0]"))
    assert "NotCounital" in [c.error for c in run("check-comodule", broken, "--name", "O", status=1).checks]
    run("check-comodule", z2, "--name", "missing", status=2)
    run("check-comodule", os.path.join(tmp, "absent.had"), "--name", "O", status=2)
    run("equivariant-enumerate", z2, "--name", "swap", "--ceiling", "10", status=2)
    return f"{len(shipped_examples())} files, {len(cli.COMMANDS)} commands"


def test_criterion_8_cli(tmp_path):
    record(8, "file format and CLI", lambda: criterion_8(str(tmp_path)))


if __name__ == "__main__":
    import tempfile
    c = generate_corpus(seed=SEED)
    with tempfile.TemporaryDirectory() as tmp:
        for fn in (test_criterion_1_axioms, lambda: test_criterion_2_descent(c), test_criterion_3_adjunction,
                   test_criterion_4_coinduction, test_criterion_5_equivariant, test_criterion_6_amitsur,
                   lambda: test_criterion_7_comodule_structure(c), lambda: test_criterion_8_cli(tmp)):
            try:
                fn()
            except AssertionError:
                pass
