import io
import json
import subprocess
import sys

import numpy as np
import pytest

from quaddec.cli import RunConfig, run

CARDIOID = {"map": {"num": {"coeffs": [[0, 0], [1, 0], [0.4, 0]]}, "den": {"coeffs": [[1, 0]]}}}
DISC = {"map": {"num": {"coeffs": [[0, 0], [1, 0]]}, "den": {"coeffs": [[1, 0]]}}}
ZBAR = {"num": {"coeffs": [[[0, 0], [1, 0]]]}, "den": {"coeffs": [[[1, 0]]]}}
WORKED = {"num": {"coeffs": [[[1, 0]]]}, "den": {"coeffs": [[[2.5, 0], [-1, 0]], [[-1, 0], [0, 0]]]}}
X_XY = {"var_order": "x,y", "num": {"coeffs": [[[0, 0]], [[1, 0]]]}}


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, obj in {"card": CARDIOID, "disc": DISC, "zbar": ZBAR, "worked": WORKED, "x": X_XY}.items():
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(obj))
        out[name] = str(p)
    out["g"] = str(tmp_path / "g.json")
    (tmp_path / "g.json").write_text(json.dumps({"series": [[0, 0], [1, 0], [0.5, 0], [0.25, 0], [0.125, 0]]}))
    out["bad"] = str(tmp_path / "bad.json")
    (tmp_path / "bad.json").write_text("{not json")
    return out


def _run(**kw):
    so, se = io.StringIO(), io.StringIO()
    code = run(RunConfig(**kw), so, se)
    return code, so.getvalue(), se.getvalue()


def test_decompose_circle_json(files):
    code, out, _ = _run(subcommand="decompose-circle", data=files["worked"])
    assert code == 0
    obj = json.loads(out)
    assert all(g["ok"] for g in obj["gates"].values())


def test_decompose_cardioid_zbar(files):
    code, out, _ = _run(subcommand="decompose", domain=files["card"], data=files["zbar"], form="k_lambda")
    assert code == 0
    obj = json.loads(out)
    coeffs = sorted((t["m"], complex(*t["coeff"])) for t in obj["lambda_terms"])
    assert abs(coeffs[0][1] + np.pi * 1.32) < 1e-10 and abs(coeffs[1][1] + np.pi * 0.4) < 1e-10


@pytest.mark.parametrize(
    "kw",
    [
        {"subcommand": "schwarz"},
        {"subcommand": "implicitize"},
        {"subcommand": "quadrature"},
        {"subcommand": "kernels", "point": "0.1,0.2", "degree": 1},
        {"subcommand": "boundary-eq", "point": "1.4,0"},
    ],
)
def test_domain_only_subcommands(files, kw):
    code, out, err = _run(domain=files["card"], **kw)
    assert code == 0, err
    json.loads(out)


@pytest.mark.parametrize("sub", ["dirichlet", "dtn"])
def test_data_subcommands_csv(files, sub):
    code, out, err = _run(subcommand=sub, domain=files["card"], data=files["x"], format="csv")
    assert code == 0, err
    lines = out.strip().splitlines()
    assert len(lines) > 2 and "," in lines[0]


def test_approximate_area(files, tmp_path):
    target = tmp_path / "out.json"
    code, out, _ = _run(subcommand="approximate", data=files["g"], degree=4, output=str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["kind"] == "area"


def test_exit_codes(files):
    assert _run(subcommand="decompose", domain=files["bad"], data=files["zbar"])[0] == 2
    assert _run(subcommand="decompose", domain=files["card"])[0] == 2
    assert _run(subcommand="schwarz", domain=files["card"], samples=4)[0] == 2
    assert _run(subcommand="kernels", domain=files["card"], point="nonsense")[0] == 2
    # boundary pole: domain error, exit 1
    code, _, err = _run(subcommand="boundary-eq", domain=files["card"], point="0.1,0")
    assert code == 1 and "FAILED" in err


def test_deterministic_output(files):
    a = _run(subcommand="dtn", domain=files["card"], data=files["worked"], seed=3)[1]
    b = _run(subcommand="dtn", domain=files["card"], data=files["worked"], seed=3)[1]
    assert a == b


def test_module_entry_point(files):
    proc = subprocess.run(
        [sys.executable, "-m", "quaddec", "schwarz", "--domain", files["disc"], "--format", "csv", "--samples", "16"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0, proc.stderr
    assert len(proc.stdout.strip().splitlines()) == 17


def test_selftest_passes():
    code, out, err = _run(subcommand="selftest", seed=7)
    assert code == 0, err
    assert all(s["ok"] for s in json.loads(out)["suites"])
