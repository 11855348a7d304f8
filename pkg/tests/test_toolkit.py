from __future__ import annotations

import json
import subprocess
import sys
from fractions import Fraction as F

import pytest

from precubical import (
    CubeChain,
    FormatError,
    KinkSequence,
    Point,
    boundary_cube,
    enumerate_chains,
    full_cube,
    is_non_self_linked,
    is_proper,
    paths_equal,
    validate,
    z_complex,
)
from precubical.dpath import path
from precubical.toolkit import (
    parse_chain,
    parse_cubeset,
    parse_kinks,
    parse_path,
    parse_poset,
    parse_pv,
    pv_to_euclidean,
    write_chain,
    write_cubeset,
    write_kinks,
    write_path,
    write_poset,
)
from precubical.toolkit.cli import main


# -- formats --------------------------------------------------------------------


def test_cubeset_round_trip():
    for X in (full_cube(2), boundary_cube(3), z_complex(2)):
        text = write_cubeset(X)
        Y = parse_cubeset(text)
        assert write_cubeset(Y) == text
        assert sorted(Y.cubes()) == sorted(X.cubes())
        assert all(Y.dim(c) == X.dim(c) for c in X.cubes())


def test_rationals_parse_exactly():
    X = full_cube(2)
    text = write_path(path([("**", [(0, (0, 0)), ("1/3", ("1/3", "1/7")), (1, (1, 1))])]), X)
    p = parse_path(text, X)
    assert p.segments[0].points[1][0] == F(1, 3)
    assert p.segments[0].points[1][1] == (F(1, 3), F(1, 7))
    assert write_path(p, X) == text


def test_floats_rejected_in_documents():
    X = full_cube(2)
    doc = {"segments": [{"cube": "**", "breakpoints": [[0, [0, 0]], [0.5, [1, 1]]]}]}
    with pytest.raises(FormatError):
        parse_path(json.dumps(doc), X)


def test_path_junction_mismatch_names_the_junction():
    from precubical import euclidean

    E = euclidean([((0, 0), (1, 1)), ((1, 0), (2, 1))])
    doc = {
        "segments": [
            {"cube": "0,0|1,1", "breakpoints": [["0", ["0", "0"]], ["1/2", ["1", "1/3"]]]},
            {"cube": "1,0|2,1", "breakpoints": [["1/2", ["0", "2/3"]], ["1", ["1", "1"]]]},
        ]
    }
    with pytest.raises(FormatError, match="junction 1"):
        parse_path(json.dumps(doc), E)


def test_path_start_declaration_checked():
    X = full_cube(2)
    text = write_path(path([("**", [(0, (0, 0)), (1, (1, 1))])]), X)
    assert json.loads(text)["start"] == "v00"
    tampered = text.replace('"v00"', '"v11"')
    with pytest.raises(FormatError, match="declared start"):
        parse_path(tampered, X)


def test_cubeset_validation_on_load():
    X = full_cube(2)
    doc = json.loads(write_cubeset(X))
    for entry in doc["cubes"]:
        if entry["id"] == "0*":
            entry["faces"]["d0_1"] = "v01"
            entry["faces"]["d1_1"] = "v00"
    with pytest.raises(FormatError, match="violation"):
        parse_cubeset(json.dumps(doc))


def test_syntax_error_carries_position():
    with pytest.raises(FormatError) as err:
        parse_cubeset("{bad json")
    assert err.value.line == 1 and err.value.column is not None


def test_chain_and_poset_round_trip():
    B = boundary_cube(3)
    chain = CubeChain("v000", "v111", ("**0", "11*"))
    assert parse_chain(write_chain(chain), B) == chain
    poset = enumerate_chains(B, "v000", "v111", 3)
    text = write_poset(poset, proper_non_self_linked=True)
    back, guarantee = parse_poset(text)
    assert guarantee and back == poset
    assert write_poset(back) == text


def test_kinks_round_trip():
    C3 = full_cube(3)
    ks = KinkSequence(
        (
            Point("v000", ()),
            Point("***", (F(1, 3), F(1, 3), F(1, 3))),
            Point("***", (F(2, 3), F(2, 3), F(2, 3))),
            Point("v111", ()),
        )
    )
    assert parse_kinks(write_kinks(ks), C3).points == ks.points


# -- PV programs ------------------------------------------------------------------


def test_pv_mutex_is_the_boundary_square():
    prog = parse_pv("A = P(a).V(a); B = P(a).V(a)")
    assert prog.semaphores == {"a": 1}
    X, start, end = pv_to_euclidean(prog)
    assert validate(X) == []
    assert is_proper(X)[0] and is_non_self_linked(X)[0]
    assert len(X.cubes_of_dim(0)) == 8
    assert len(X.cubes_of_dim(1)) == 8
    assert len(X.cubes_of_dim(2)) == 0
    assert start == "0,0|0,0" and end == "2,2|2,2"


def test_pv_single_process_interval():
    X, start, end = pv_to_euclidean(parse_pv("P(a).V(a)"))
    assert len(X.cubes_of_dim(0)) == 3 and len(X.cubes_of_dim(1)) == 2
    assert start == "0|0" and end == "2|2"


def test_pv_empty_program_is_a_point():
    X, start, end = pv_to_euclidean(parse_pv(""))
    assert len(X) == 1 and start == end


def test_pv_independent_semaphores_leave_full_grid():
    X, _, _ = pv_to_euclidean(parse_pv("A = P(a).V(a); B = P(b).V(b)"))
    assert len(X.cubes_of_dim(2)) == 4  # nothing forbidden


def test_pv_rejects_malformed_programs():
    with pytest.raises(FormatError):
        parse_pv("A = P(a).P(a)")
    with pytest.raises(FormatError):
        parse_pv("A = V(a)")
    with pytest.raises(FormatError):
        parse_pv("A = P(a)")
    with pytest.raises(FormatError):
        parse_pv("A = hop(a)")


def test_pv_three_philosophers_not_deadlock_free_geometry():
    # three processes sharing one mutex: the grid minus a 3d block column
    X, start, end = pv_to_euclidean(parse_pv("P(a).V(a); P(a).V(a); P(a).V(a)"))
    assert validate(X) == []
    assert len(X.cubes_of_dim(3)) == 0


# -- CLI ---------------------------------------------------------------------------


def run_cli(args: list[str], stdin: str = "") -> subprocess.CompletedProcess:
    return subprocess.run(
        [sys.executable, "-m", "precubical.toolkit.cli", *args],
        input=stdin,
        capture_output=True,
        text=True,
    )


def test_cli_pipeline_boundary_cube(tmp_path):
    gen = run_cli(["gen", "boundary-cube", "3"])
    assert gen.returncode == 0
    chains = run_cli(["chains", "--from", "v000", "--to", "v111", "--max-len", "3"], gen.stdout)
    assert chains.returncode == 0
    nerve = run_cli(["nerve", "--order"], chains.stdout)
    assert nerve.returncode == 0
    hom = run_cli(["homology"], nerve.stdout)
    assert hom.returncode == 0
    assert json.loads(hom.stdout)["betti"] == [1, 1]


def test_cli_outputs_are_deterministic():
    a = run_cli(["gen", "full-cube", "2"]).stdout
    b = run_cli(["gen", "full-cube", "2"]).stdout
    assert a == b


def test_cli_check_reports_z_complex():
    gen = run_cli(["gen", "z-complex", "2"])
    check = run_cli(["check"], gen.stdout)
    assert check.returncode == 0
    report = json.loads(check.stdout)
    assert report["valid"] and not report["proper"] and not report["non_self_linked"]


def test_cli_pv_to_homology(tmp_path):
    pv_file = tmp_path / "mutex.pv"
    pv_file.write_text("A = P(a).V(a)\nB = P(a).V(a)\n")
    built = run_cli(["pv", "build", str(pv_file)])
    assert built.returncode == 0
    chains = run_cli(["chains", "--max-len", "4"], built.stdout)
    assert chains.returncode == 0
    hom = run_cli(["homology"], run_cli(["nerve", "--order"], chains.stdout).stdout)
    assert json.loads(hom.stdout)["betti"] == [2]


def test_cli_strictify_tame_finest_roundtrip(tmp_path):
    X = full_cube(2)
    cubeset_file = tmp_path / "square.json"
    cubeset_file.write_text(write_cubeset(X))
    bent = path([("**", [(0, (0, 0)), (F(1, 2), (F(4, 5), F(1, 10))), (1, (1, 1))])])
    path_text = write_path(bent, X)

    finest = run_cli(["finest", "-", "--cubeset", str(cubeset_file)], path_text)
    assert finest.returncode == 0
    assert json.loads(finest.stdout)["cubes"] == ["*0", "1*"]

    chain_file = tmp_path / "chain.json"
    chain_file.write_text(finest.stdout)
    tamed = run_cli(["tame", "--chain", str(chain_file), "--cubeset", str(cubeset_file)], path_text)
    assert tamed.returncode == 0
    q = parse_path(tamed.stdout, X)
    assert [s.cube for s in q.segments] == ["*0", "1*"]

    strictified = run_cli(["strictify", "--flow", "rational", "--samples", "4", "--cubeset", str(cubeset_file)], path_text)
    assert strictified.returncode == 0

    paper = run_cli(["strictify", "--flow", "paper", "--samples", "4", "--cubeset", str(cubeset_file)], path_text)
    assert paper.returncode == 0


def test_cli_naturalize_and_seq(tmp_path):
    C3 = full_cube(3)
    cubeset_file = tmp_path / "cube3.json"
    cubeset_file.write_text(write_cubeset(C3))
    diag = path([("***", [(0, (0, 0, 0)), (1, (1, 1, 1))])])
    nat = run_cli(["naturalize", "--cubeset", str(cubeset_file)], write_path(diag, C3))
    assert nat.returncode == 0
    kinks = run_cli(["seq", "to", "--cubeset", str(cubeset_file)], nat.stdout)
    assert kinks.returncode == 0
    assert len(json.loads(kinks.stdout)["points"]) == 4
    back = run_cli(["seq", "from", "--cubeset", str(cubeset_file)], kinks.stdout)
    assert back.returncode == 0
    assert paths_equal(C3, parse_path(back.stdout, C3), parse_path(nat.stdout, C3))


def test_cli_exit_codes(tmp_path):
    # syntax error -> 2
    bad = run_cli(["check"], "{not json")
    assert bad.returncode == 2
    # domain error -> 1 (taming a non-subordinate path)
    X = full_cube(2)
    cubeset_file = tmp_path / "square.json"
    cubeset_file.write_text(write_cubeset(X))
    chain_file = tmp_path / "chain.json"
    chain_file.write_text(write_chain(CubeChain("v00", "v11", ("0*", "*1"))))
    bent = write_path(path([("**", [(0, (0, 0)), (F(1, 2), (F(4, 5), F(1, 10))), (1, (1, 1))])]), X)
    r = run_cli(["tame", "--chain", str(chain_file), "--cubeset", str(cubeset_file)], bent)
    assert r.returncode == 1
    # missing file -> 2
    r = run_cli(["pv", "build", str(tmp_path / "missing.pv")])
    assert r.returncode == 2


def test_cli_output_and_input_flags(tmp_path):
    out = tmp_path / "cube.json"
    r = run_cli(["gen", "full-cube", "2", "--output", str(out)])
    assert r.returncode == 0 and r.stdout == ""
    r2 = run_cli(["check", "--input", str(out)])
    assert r2.returncode == 0
    assert json.loads(r2.stdout)["valid"]


def test_cli_covering_nerve_flags_from_truncated_loop_complex():
    gen = run_cli(["gen", "z-complex", "2"])
    chains = run_cli(["chains", "--from", "c0", "--to", "c0", "--max-len", "2"], gen.stdout)
    assert chains.returncode == 0
    assert json.loads(chains.stdout)["truncated"] is True
    assert json.loads(chains.stdout)["proper_non_self_linked"] is False
    nerve = run_cli(["nerve", "--covering"], chains.stdout)
    assert nerve.returncode == 0
    flags = set(json.loads(nerve.stdout)["flags"])
    assert {"truncated-approximation", "no-nerve-lemma-guarantee"} <= flags
    hom = run_cli(["homology"], nerve.stdout)
    assert {"truncated-approximation", "no-nerve-lemma-guarantee"} <= set(json.loads(hom.stdout)["flags"])


def test_pv_two_semaphore_deadlock_geometry():
    # the classic crossed-locks program: forbidden region is a plus-shaped
    # cross, leaving two schedule classes around it
    from precubical import (
        covering_nerve,
        enumerate_chains,
        homology,
        is_non_self_linked,
        order_complex,
    )

    prog = parse_pv("A = P(a).P(b).V(b).V(a); B = P(b).P(a).V(a).V(b)")
    X, start, end = pv_to_euclidean(prog)
    assert validate(X) == []
    assert is_proper(X)[0] and is_non_self_linked(X)[0]
    assert len(X.cubes_of_dim(0)) == 20  # 5x5 grid minus the 5 cross vertices
    assert len(X.cubes_of_dim(2)) == 4   # only the four corner cells survive
    poset = enumerate_chains(X, start, end, 8)
    assert not poset.truncated
    ho = homology(order_complex(poset))
    assert ho.betti[0] == 2 and all(b == 0 for b in ho.betti[1:])
    assert ho.equivalent(homology(covering_nerve(X, poset)))
