import json
import re

import pytest

from engelkit.catalog import (DETERMINED, ExampleSpec, build_cyclic_example, build_p_gt_3_example,
                              catalog, find_example, p_gt_3_parameters, spec_from_file, verify)
from engelkit.cli import EXIT_DISCREPANCY, EXIT_OK, EXIT_USAGE, main
from engelkit.formats import parse_pcp

FAST = ["--engel-samples", "50", "--identity-samples", "20"]


def egcd_inverse(a, m):
    old_r, r, old_s, s = a, m, 1, 0
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
    assert old_r == 1
    return old_s % m


def test_p7_parameters_match_extended_gcd():
    r, s, alpha, gamma = p_gt_3_parameters(7)
    assert r == egcd_inverse(3, 7 ** 9) and (3 * r) % 7 ** 9 == 1
    assert s == egcd_inverse(9, 7 ** 11) and (9 * s) % 7 ** 11 == 1
    assert alpha == (-5 * r) % 7 ** 9 == 26902403
    assert gamma == (-11 * s) % 7 ** 11 == 1098514856
    text = build_p_gt_3_example(7).source
    assert f"a^({alpha}*p^3) c^({gamma}*p^5)" in text


@pytest.mark.parametrize("p", [2, 3, 4, 9])
def test_p_gt_3_rejects(p):
    with pytest.raises(ValueError):
        build_p_gt_3_example(p)


def test_p_gt_3_other_primes():
    spec = build_p_gt_3_example(11)
    assert spec.p == 11 and spec.expected["order"] == DETERMINED


@pytest.mark.parametrize("q,n", [(2, 3), (6, 2), (9, 2), (3, 1)])
def test_cyclic_rejects(q, n):
    with pytest.raises(ValueError):
        build_cyclic_example(q, n)


@pytest.mark.parametrize("q,n,p,log", [(3, 3, 3, 5), (4, 3, 2, 10), (5, 2, 5, 3), (5, 4, 5, 7)])
def test_cyclic_expectations(q, n, p, log):
    spec = build_cyclic_example(q, n)
    assert spec.p == p
    assert spec.expected["order"] == f"{p}^{log}"
    assert spec.expected["class"] == spec.expected["engel_n"] == n
    assert spec.expected["powerful"] is True


@pytest.mark.parametrize("q,n", [(3, 3), (4, 3), (5, 2)])
def test_cyclic_examples_verify(q, n):
    rep = verify(build_cyclic_example(q, n), engel_samples=50, identity_samples=20)
    assert rep.ok, rep.discrepancies
    assert rep.fields["class"] == n
    assert rep.fields["derived_cyclic"]


def test_catalog_contents():
    names = [e.name for e in catalog()]
    assert names == sorted(names)
    assert {"cyclic-3-3", "cyclic-5-4", "cyclic-4-3", "rank3-p2", "rank4-p3", "rank4-p7",
            "lie-5", "lie-16"} == set(names)
    for e in catalog():
        if not e.is_lie:
            assert e.anchors.get("class")
    with pytest.raises(KeyError):
        find_example("nope")


def test_report_is_deterministic_and_ordered():
    spec = build_cyclic_example(3, 3)
    a = verify(spec, seed=5, engel_samples=50, identity_samples=20).to_json()
    b = verify(spec, seed=5, engel_samples=50, identity_samples=20).to_json()
    assert a == b
    d = json.loads(a)
    keys = list(d)
    assert keys[:2] == ["name", "seed"] and keys[-1] == "discrepancies"
    assert re.fullmatch(r"\d+\^\d+", d["order"])


def test_discrepancy_reported_for_wrong_expectation():
    spec = build_cyclic_example(3, 3)
    wrong = ExampleSpec(spec.name, spec.p, spec.source, dict(spec.expected, **{"class": 4}))
    rep = verify(wrong, engel_samples=20, identity_samples=10)
    assert not rep.ok
    assert any(d.startswith("class: computed 3, expected 4") for d in rep.discrepancies)


def test_spec_from_file(tmp_path):
    path = tmp_path / "c9.fp"
    path.write_text("%p 3\ngens x\nrel x^9\n")
    spec = spec_from_file(str(path))
    rep = verify(spec, engel_samples=10, identity_samples=10)
    assert rep.ok and rep.fields["order"] == "3^2"


def test_cli_verify(capsys):
    assert main(["verify", "cyclic-3-3"] + FAST) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["name"] == "cyclic-3-3" and out["discrepancies"] == []


def test_cli_verify_discrepancy(capsys):
    assert main(["verify", "rank4-p3"] + FAST) == EXIT_DISCREPANCY
    err = capsys.readouterr().err
    assert "DISCREPANCY rank4-p3" in err


def test_cli_usage_errors(tmp_path, capsys):
    assert main(["verify", "no-such-example"]) == EXIT_USAGE
    bad = tmp_path / "bad.fp"
    bad.write_text("%p 3\ngens x y\nrel x^3\nrel y^3 z\n")
    assert main(["analyze", str(bad)]) == EXIT_USAGE
    assert "parse error: line 4, column 9" in capsys.readouterr().err
    good = tmp_path / "good.fp"
    good.write_text("%p 3\ngens x\nrel x^9\n")
    assert main(["analyze", str(good), "--policy", "bogus"]) == EXIT_USAGE
    assert main(["lie", "--scale", "7"]) == EXIT_USAGE
    assert main([]) == EXIT_USAGE


def test_cli_nq_writes_pcp(tmp_path, capsys):
    src = tmp_path / "g.fp"
    src.write_text(build_cyclic_example(3, 3).source)
    out = tmp_path / "g.pcp"
    assert main(["nq", str(src), "-o", str(out), "--class-bound", "4"]) == EXIT_OK
    P = parse_pcp(out.read_text())
    assert P.order() == 3 ** 5
    assert "order 3^5" in capsys.readouterr().err


def test_cli_analyze_and_report(tmp_path):
    src = tmp_path / "g.fp"
    src.write_text("%p 2\ngens a b\nrel a^8\nrel b^2\nrel b^-1 a b = a^-1\n")
    rep = tmp_path / "r.json"
    code = main(["--seed", "3", "analyze", str(src), "--engel", "2", "--policy", "exhaustive",
                 "--report", str(rep)] + FAST[:4])
    assert code == EXIT_OK
    d = json.loads(rep.read_text())
    assert d["order"] == "2^4" and d["class"] == 3
    assert d["engel"]["policy"] == "exhaustive" and not d["engel"]["passed"]


def test_cli_lie(tmp_path):
    rep = tmp_path / "lie.json"
    assert main(["lie", "--scale", "5", "--report", str(rep)]) == EXIT_DISCREPANCY
    d = json.loads(rep.read_text())
    assert d["K_rank"] == 23 and d["class"] == 4
    assert main(["lie", "--scale", "16", "--printed-f6"]) == EXIT_DISCREPANCY
