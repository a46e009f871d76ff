import cmath
import json
import math

import numpy as np
import pytest

from radkernel.cli import main, random_multipoles
from radkernel.errors import DomainError
from radkernel.methods import available_methods, crosscheck, evaluate, evaluate_many, scan
from radkernel.reports import CSV_COLUMNS, ScanConfig, cells_from_csv, cells_to_csv
from radkernel.types import GeomPoint, KernelParams


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# ---------------------------------------------------------------- methods


def test_available_methods():
    assert available_methods(KernelParams(2, 2)) == ["series", "closed", "laplace", "integral", "saddle"]
    assert "lift" in available_methods(KernelParams(4, 4))
    assert "closed" not in available_methods(KernelParams(3, 3))


def test_evaluate_rejects_unavailable_method():
    with pytest.raises(DomainError):
        evaluate(KernelParams(3, 3), GeomPoint(1.0, 0.2), "closed")
    with pytest.raises(DomainError):
        evaluate(KernelParams(3, 3), GeomPoint(1.0, 0.2), "magic")


def test_evaluate_auto_uses_saddle_at_large_z():
    ev = evaluate(KernelParams(8, 2), GeomPoint(100.0, -0.3))
    assert ev.method == "saddle" and math.isfinite(abs(ev.value))


def test_evaluate_many_matches_pointwise():
    zs, xis = np.meshgrid(np.linspace(0, 4, 5), np.linspace(-1, 1, 4), indexing="ij")
    for a, m in ((3.0, 3), (2.0, 2), (1.0, 4)):
        p = KernelParams(a, m)
        vals = evaluate_many(p, zs, xis)
        for z, x, v in zip(zs.ravel(), xis.ravel(), vals.ravel()):
            assert abs(v - evaluate(p, GeomPoint(z, x)).value) < 1e-9


def test_crosscheck_four_way_a2():
    rep = crosscheck(KernelParams(2, 2), [0.5, 1.5], [0.3, 2.0], ["series", "closed", "laplace", "integral"])
    assert not rep.violations
    assert all(r["pass"] for r in rep.config["pairs"].values())


def test_scan_is_reproducible():
    cfg = ScanConfig(a=3.0, m=2, z_max=3.0, z_count=4, theta_count=3)
    assert scan(cfg).to_csv() == scan(cfg).to_csv()
    assert scan(cfg, jobs=2).to_csv() == scan(cfg).to_csv()


def test_random_multipoles_are_valid():
    cfgs = random_multipoles(np.random.default_rng(1), 20)
    assert len(cfgs) == 20
    assert all(isinstance(k, int) and 1 <= k <= 3 for c in cfgs for k in c.alpha_list)


# ---------------------------------------------------------------- eval


def test_cli_eval_a2(capsys):
    code, out, _ = run(capsys, "eval", "--a", "2", "--m", "2", "--z", "1", "--xi", "0.3", "--format", "json")
    assert code == 0
    rec = json.loads(out)
    assert abs(complex(rec["re"], rec["im"]) - cmath.exp(-0.3j)) < 1e-12


def test_cli_eval_origin_csv(capsys):
    code, out, _ = run(capsys, "eval", "--a", "4", "--m", "2", "--z", "0")
    assert code == 0
    header, row = out.strip().splitlines()
    assert tuple(header.split(",")) == CSV_COLUMNS
    assert float(row.split(",")[2]) == 1.0


def test_cli_eval_closed_vs_series_a6(capsys):
    vals = {}
    for meth in ("closed", "series"):
        code, out, _ = run(capsys, "eval", "--a", "6", "--m", "2", "--z", "1.2", "--theta", "0.7",
                           "--method", meth, "--format", "json")
        assert code == 0
        rec = json.loads(out)
        vals[meth] = (complex(rec["re"], rec["im"]), rec["err"])
    assert abs(vals["closed"][0] - vals["series"][0]) <= 1e-9 + vals["closed"][1] + vals["series"][1]


def test_cli_eval_fraction_and_usage_errors(capsys):
    assert run(capsys, "eval", "--a", "1/2", "--m", "2", "--z", "1")[0] == 0
    code, _, err = run(capsys, "eval", "--a", "3", "--m", "3", "--z", "1", "--method", "closed")
    assert code == 2 and "available" in err
    assert run(capsys, "eval", "--a", "3", "--m", "3")[0] == 2
    assert run(capsys, "eval", "--a", "3", "--m", "3", "--z", "1", "--xi", "0", "--theta", "1")[0] == 2
    assert run(capsys, "eval", "--a", "-1", "--m", "3", "--z", "1")[0] == 2


def test_cli_eval_accuracy_exit(capsys):
    code, _, _ = run(capsys, "eval", "--a", "8", "--m", "3", "--z", "40", "--method", "series")
    assert code == 3


def test_cli_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# point\na = 2\nm = 2\nz = 1\nxi = 0.5\nformat = json\n")
    code, out, _ = run(capsys, "eval", "--config", str(cfg))
    assert code == 0
    assert json.loads(out)["xi"] == 0.5
    code, out, _ = run(capsys, "eval", "--config", str(cfg), "--xi", "0.1")
    assert json.loads(out)["xi"] == 0.1
    cfg.write_text("bogus = 1\n")
    assert run(capsys, "eval", "--config", str(cfg))[0] == 2


# ---------------------------------------------------------------- scan / fit


def test_cli_scan_csv_round_trip(tmp_path, capsys):
    out = tmp_path / "scan.csv"
    code, _, _ = run(capsys, "scan", "--a", "3", "--m", "3", "--z-max", "3", "--z-count", "5",
                     "--theta-count", "4", "--family", "POLY", "--exponent", "1", "--out", str(out))
    assert code == 0
    text = out.read_text()
    assert text.splitlines()[0] == ",".join(CSV_COLUMNS)
    assert cells_to_csv(cells_from_csv(text)) == text


def test_cli_scan_hankel_bounded_by_one(capsys):
    code, out, _ = run(capsys, "scan", "--a", "1", "--m", "3", "--z-max", "50", "--z-count", "30",
                       "--format", "json", "--bound", "1.000000001")
    rep = json.loads(out)
    assert code == 0 and rep["sup"] <= 1 + 1e-9


def test_cli_scan_poly_family_on_growth_ray(capsys):
    common = ("scan", "--a", "4", "--m", "4", "--xi", "1", "--z-min", "10", "--z-max", "200",
              "--z-count", "12", "--z-log", "--family", "POLY", "--format", "json")
    code, out, _ = run(capsys, *common, "--exponent", "1")
    assert code == 0 and math.isfinite(json.loads(out)["sup"])
    code, out, _ = run(capsys, *common, "--exponent", "0.5")
    assert code == 1
    assert any(v["kind"] == "growth" for v in json.loads(out)["violations"])


def test_cli_scan_a_half_bounded(capsys):
    code, out, _ = run(capsys, "scan", "--a", "1/2", "--m", "2", "--z-min", "1", "--z-max", "1000", "--z-log",
                       "--z-count", "10", "--theta-count", "7", "--format", "json")
    assert code == 0 and json.loads(out)["sup"] < 2


@pytest.mark.parametrize("m,slope", [(2, 0.0), (4, 1.0)])
def test_cli_fit(capsys, m, slope):
    code, out, err = run(capsys, "fit", "--a", "4", "--m", str(m), "--xi", "1", "--expect", str(slope),
                         "--format", "json")
    assert code == 0
    assert json.loads(out)["slope"] == pytest.approx(slope, abs=0.05)
    assert "slope=" in err


def test_cli_fit_wrong_expectation(capsys):
    code, _, _ = run(capsys, "fit", "--a", "4", "--m", "4", "--xi", "1", "--expect", "0")
    assert code == 1


# ---------------------------------------------------------------- crosscheck / audit / transform


@pytest.mark.parametrize("a,m,methods", [("4", "4", "series,closed,lift"), ("1", "3", "series,closed,laplace")])
def test_cli_crosscheck(capsys, a, m, methods):
    code, _, err = run(capsys, "crosscheck", "--a", a, "--m", m, "--z-max", "2", "--z-count", "3",
                       "--theta-count", "3", "--method", methods)
    assert code == 0
    assert err.count("pass") == 3


def test_cli_crosscheck_needs_two_methods(capsys):
    assert run(capsys, "crosscheck", "--a", "3", "--m", "3", "--method", "series")[0] == 2


def test_cli_audits(capsys):
    code, out, _ = run(capsys, "audit", "lemma31", "--configs", "10", "--format", "json")
    assert code == 0 and json.loads(out)["sup"] <= 1 + 1e-8
    code, out, _ = run(capsys, "audit", "factorization", "--p", "3", "--q", "2", "--format", "json")
    assert code == 0 and json.loads(out)["sup"] < 1e-10
    code, out, _ = run(capsys, "audit", "kernel-sector", "--a", "8", "--m", "2", "--mu", "0.5",
                       "--z-count", "9", "--theta-count", "7", "--format", "json")
    assert code == 0 and math.isfinite(json.loads(out)["sup"])
    assert run(capsys, "audit", "kernel-sector", "--a", "8", "--m", "2", "--mu", "0.2")[0] == 2


def test_cli_transform(capsys):
    code, out, err = run(capsys, "transform", "--a", "2", "--m", "2", "--y", "0.5,0.2", "--y", "1,-1",
                         "--format", "json")
    assert code == 0
    rows = json.loads(out)["points"]
    assert max(r["abs_err"] for r in rows) < 1e-6
    assert run(capsys, "transform", "--a", "2", "--m", "2", "--y", "1,2,3")[0] == 2
