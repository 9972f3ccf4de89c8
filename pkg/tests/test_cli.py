import cmath
import io
import json
import math
import os
import subprocess
import sys

import pytest

from qdvolume.cli import main, parse_complex


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


@pytest.mark.parametrize("text,want", [("1.2", 1.2), ("0.3i", 0.3j), ("1+2i", 1 + 2j),
                                       ("-i", -1j), ("2-0.5j", 2 - 0.5j), ("1e-3i", 1e-3j)])
def test_parse_complex(text, want):
    assert parse_complex(text) == want


@pytest.mark.parametrize("text", ["", "x", "1+2", "nan", "inf", "i1", "1ii"])
def test_parse_complex_rejects(text):
    with pytest.raises(ValueError):
        parse_complex(text)


def test_phi_at_origin():
    code, out = run("phi", "--gamma", "0.5", "--point", "0", "--format", "json")
    assert code == 0
    d = json.loads(out)
    want = cmath.exp(1j * (math.pi ** 2 + 0.25) / 12)
    assert abs(complex(d["re"], d["im"]) - want) < 1e-12


def test_phi_text_and_json_agree():
    _, js = run("phi", "--gamma", "0.5", "--point", "1.2", "--format", "json")
    d = json.loads(js)
    assert set(d) >= {"re", "im", "err"}
    _, txt = run("phi", "--gamma", "0.5", "--point", "1.2")
    assert repr(d["re"]) in txt and repr(d["err"]) in txt


def test_phi_strip_error(capsys):
    code, _ = run("phi", "--gamma", "0.5", "--point", "10i")
    assert code == 2
    assert "strip" in capsys.readouterr().err


def test_phi_bad_point():
    assert run("phi", "--point", "abc")[0] == 2


def test_check_exit_codes():
    assert run("check", "classical", "--tol", "1e-11")[0] == 0
    assert run("check", "quantum", "--tol", "1e-8")[0] == 0
    code, out = run("check", "all", "--tol", "1e-30")
    assert code == 1 and "FAIL" in out


def test_check_json():
    code, out = run("check", "quantum", "--format", "json")
    d = json.loads(out)
    assert d["passed"] and code == 0
    assert "quantum.duality" in d["residuals"]


def test_volume_figure_eight():
    code, out = run("volume", "--braid", "1 -2 1 -2", "--format", "json")
    assert code == 0
    d = json.loads(out)
    assert abs(d["principal"]["volume"] - 2.02988) < 1e-4
    _, txt = run("volume", "--braid", "1 -2 1 -2")
    assert repr(d["principal"]["volume"]) in txt


def test_volume_trefoil_exit_3():
    code, out = run("volume", "--braid", "1 1 1", "--format", "json")
    assert code == 3
    d = json.loads(out)
    assert d["principal_index"] is None
    assert d["solutions"]


def test_volume_parse_error():
    assert run("volume", "--braid", "x y")[0] == 2


def test_volume_seed_reproducible():
    a = run("volume", "--braid", "1 -2 1 -2", "--seed", "4", "--format", "json")[1]
    b = run("volume", "--braid", "1 -2 1 -2", "--seed", "4", "--format", "json")[1]
    assert a == b


def test_system_dump():
    code, out = run("system", "--braid", "1 -2 1 -2")
    assert code == 0
    d = json.loads(out)
    assert len(d["free_vars"]) == 8 and len(d["crossings"]) == 4
    assert "segment_map" in d


def test_show_defaults():
    code, out = run("--show-defaults")
    assert code == 0
    assert "starts" in out and "panel_tol" in out


def test_unknown_flag():
    with pytest.raises(SystemExit) as e:
        main(["phi", "--point", "0", "--bogus"])
    assert e.value.code == 2


def test_env_override(monkeypatch):
    monkeypatch.setenv("QDVOLUME_CHECK_TOL", "1e-30")
    assert run("check", "classical")[0] == 1
    monkeypatch.setenv("QDVOLUME_CHECK_TOL", "nope")
    assert run("check", "classical")[0] == 2


def test_numpy_backend_same_volume():
    env = dict(os.environ, QDVOLUME_NUMBA="0")
    code = ("import qdvolume, json, sys; from qdvolume.cli import main; "
            "assert qdvolume.BACKEND == 'numpy'; "
            "sys.exit(main(['volume', '--braid', '1 -2 1 -2', '--format', 'json']))")
    p = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                       timeout=300)
    assert p.returncode == 0, p.stderr
    d = json.loads(p.stdout)
    assert abs(d["principal"]["volume"] - 2 * 1.0149416064096536) < 1e-9
