import json
import subprocess
import sys

import pytest

from finemix import cli, lozenge as lz, render, subdivision as sd, systems
from finemix.errors import BadBounds, UnsupportedDimension
from finemix.render import RenderSpec
from finemix.systems import system_from_triangle


def run_cli(argv, stdin_data=None, capsys=None, monkeypatch=None, tmp_path=None):
    """Run the CLI in-process via files, returning (exit, stdout_text)."""
    out_file = tmp_path / "out.json"
    in_file = tmp_path / "in.json"
    args = list(argv)
    if stdin_data is not None:
        in_file.write_text(json.dumps(stdin_data))
        args += ["--input", str(in_file)]
    args += ["--output", str(out_file)]
    code = cli.main(args)
    text = out_file.read_text() if out_file.exists() else ""
    return code, text


SYSTEM_FIG7 = {
    "n": 3,
    "d": 3,
    "perms": {"1,2": [1, 3, 2], "2,3": [2, 1, 3], "3,1": [2, 3, 1]},
}

CYCLIC = {"n": 2, "d": 3, "perms": {"1,2": [1, 2], "2,3": [1, 2], "3,1": [1, 2]}}


def test_acyclic_rejects_smallest_cycle(tmp_path):
    code, text = run_cli(["acyclic"], CYCLIC, tmp_path=tmp_path)
    assert code == 1
    data = json.loads(text)
    assert data["acyclic"] is False
    assert sorted(data["colors"]) == [1, 2]
    assert len(data["cycle"]) == 3


def test_acyclic_accepts(tmp_path):
    code, text = run_cli(["acyclic"], SYSTEM_FIG7, tmp_path=tmp_path)
    assert code == 0 and json.loads(text) == {"acyclic": True}


def test_perms_of_realized_subdivision(tmp_path):
    sigma = systems.SystemOfPermutations.from_json(SYSTEM_FIG7)
    sub = lz.to_subdivision(lz.realize(sigma))
    code, text = run_cli(["perms"], sub.to_json(), tmp_path=tmp_path)
    assert code == 0
    assert systems.SystemOfPermutations.from_json(json.loads(text)) == sigma


def test_validate_empty_cells_is_volume_mismatch(tmp_path, capsys):
    code, _ = run_cli(
        ["validate"], {"n": 2, "d": 3, "cells": []}, tmp_path=tmp_path
    )
    assert code == 1
    err = capsys.readouterr().err
    assert "VolumeMismatch" in err


def test_validate_tiling_and_subdivision(tmp_path):
    tiling = next(lz.enumerate_tilings(3))
    code, text = run_cli(["validate"], tiling.to_json(), tmp_path=tmp_path)
    assert code == 0 and json.loads(text)["ok"] is True
    sub = lz.to_subdivision(tiling)
    code, text = run_cli(["validate"], sub.to_json(), tmp_path=tmp_path)
    assert code == 0 and json.loads(text)["kind"] == "subdivision"


def test_dual_subcommand_matches_library(tmp_path):
    code, text = run_cli(["dual"], SYSTEM_FIG7, tmp_path=tmp_path)
    assert code == 0
    expected = systems.dual(systems.SystemOfPermutations.from_json(SYSTEM_FIG7))
    assert systems.SystemOfPermutations.from_json(json.loads(text)) == expected


def test_delete_contract_round_trip(tmp_path):
    code, text = run_cli(["delete", "2"], SYSTEM_FIG7, tmp_path=tmp_path)
    assert code == 0
    data = json.loads(text)
    assert data["n"] == 2 and data["color_map"] == {"1": 1, "3": 2}
    code, text = run_cli(["contract", "1"], SYSTEM_FIG7, tmp_path=tmp_path)
    assert code == 0
    assert json.loads(text)["d"] == 2


def test_positions_and_spread(tmp_path):
    code, text = run_cli(["positions"], SYSTEM_FIG7, tmp_path=tmp_path)
    assert code == 0
    data = json.loads(text)
    assert len(data["positions"]) == 3
    assert all(sum(x) == 2 for x in data["positions"])
    code, text = run_cli(["spread"], {"positions": data["positions"]}, tmp_path=tmp_path)
    assert code == 0 and json.loads(text)["spread_out"] is True
    code, text = run_cli(
        ["spread"], {"positions": [[0, 1], [0, 1]]}, tmp_path=tmp_path
    )
    assert code == 1 and json.loads(text)["witness"] == {"k": 1, "m": [0, 1]}


def test_realize2d_pipeline(tmp_path):
    code, text = run_cli(["realize2d"], SYSTEM_FIG7, tmp_path=tmp_path)
    assert code == 0
    tiling = lz.LozengeTiling.from_json(json.loads(text))
    assert lz.extract_system(tiling) == systems.SystemOfPermutations.from_json(
        SYSTEM_FIG7
    )


def test_realize_n3_cli(tmp_path):
    fig12 = {
        "n": 3,
        "d": 4,
        "perms": {
            "1,2": [1, 3, 2], "1,3": [1, 2, 3], "1,4": [1, 2, 3],
            "2,3": [1, 2, 3], "2,4": [1, 2, 3], "3,4": [1, 2, 3],
        },
    }
    code, text = run_cli(["realize-n3"], fig12, tmp_path=tmp_path)
    assert code == 0
    sub = sd.FineMixedSubdivision.from_json(json.loads(text))
    assert sub.n == 3 and sub.d == 4


def test_enumerate_limit_and_jsonl(tmp_path):
    code, text = run_cli(
        ["enumerate", "--kind", "tilings", "-n", "3", "-d", "3", "--limit", "5",
         "--format", "jsonl"],
        tmp_path=tmp_path,
    )
    assert code == 0
    lines = [l for l in text.splitlines() if l]
    assert len(lines) == 5
    for line in lines:
        lz.LozengeTiling.from_json(json.loads(line))
    code, text = run_cli(
        ["enumerate", "--kind", "systems", "-n", "2", "-d", "3"],
        tmp_path=tmp_path,
    )
    assert code == 0 and json.loads(text)["count"] == 6


def test_enumerate_scale_cap(tmp_path, capsys):
    code, _ = run_cli(
        ["enumerate", "--kind", "systems", "-n", "3", "-d", "3",
         "--seed-scale", "2,3"],
        tmp_path=tmp_path,
    )
    assert code == 1
    assert "seed-scale" in capsys.readouterr().err


def test_verify_cli_deterministic(tmp_path):
    code1, text1 = run_cli(["verify", "-n", "2", "-d", "3"], tmp_path=tmp_path)
    code2, text2 = run_cli(["verify", "-n", "2", "-d", "3"], tmp_path=tmp_path)
    assert code1 == code2 == 0
    assert text1 == text2
    data = json.loads(text1)
    assert all(c["passed"] for c in data["checks"])


def test_usage_error_exits_2():
    with pytest.raises(SystemExit) as info:
        cli.main(["enumerate", "--kind", "nonsense", "-n", "2", "-d", "3"])
    assert info.value.code == 2


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "finemix.cli", "verify", "-n", "1", "-d", "2"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["counts"]


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

def test_render_svg_deterministic(tmp_path):
    tiling = next(lz.enumerate_tilings(4))
    data = tiling.to_json()
    _, first = run_cli(["render", "--show-dual"], data, tmp_path=tmp_path)
    _, second = run_cli(["render", "--show-dual"], data, tmp_path=tmp_path)
    assert first == second
    assert first.startswith("<svg")
    assert first.count("<polygon") == 4 + 6  # triangles + rhombi


def test_render_ascii_shape(tmp_path):
    tiling = lz.LozengeTiling(2, [(0, 1, 0), (0, 0, 1)], [((1, 0, 0), 1)])
    code, text = run_cli(
        ["render", "--format", "ascii"], tiling.to_json(), tmp_path=tmp_path
    )
    assert code == 0
    lines = text.splitlines()
    assert len(lines) == 2
    assert "1" in text and "2" in text


def test_render_system_svg():
    sigma = system_from_triangle((1, 4, 2, 3), (3, 1, 2, 4), (4, 3, 2, 1))
    spec = RenderSpec(format="svg", scale=40)
    svg = render.render(sigma, spec)
    assert svg.startswith("<svg") and "u=1423" in svg


def test_render_rejects_high_dimension():
    perms4 = {e: (1, 2) for e in [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]}
    sigma = systems.SystemOfPermutations(n=2, d=4, perms=perms4)
    with pytest.raises(UnsupportedDimension):
        render.render(sigma, RenderSpec(format="svg"))


def test_render_spec_validation():
    with pytest.raises(BadBounds):
        RenderSpec(format="png")
    with pytest.raises(BadBounds):
        RenderSpec(scale=0)
    spec = RenderSpec(palette={1: "#112233"})
    assert spec.color(1) == "#112233"
    assert spec.color(2).startswith("#")


def test_render_palette_cli(tmp_path):
    tiling = lz.LozengeTiling(1, [(0, 0, 0)], [])
    code, text = run_cli(
        ["render", "--palette", "1=#abcdef"], tiling.to_json(), tmp_path=tmp_path
    )
    assert code == 0 and "#abcdef" in text
