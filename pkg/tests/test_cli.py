import csv
import io

import pytest

from usedev.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_report_contains_benefits(capsys):
    code, out, _ = run(capsys, "report", "--paper-compat")
    assert code == 0
    assert "10.13" in out and "113.92" in out


def test_flags_before_subcommand(capsys):
    code, out, _ = run(capsys, "--format", "csv", "emissions")
    assert code == 0
    assert out.startswith(next(iter(out.splitlines())))
    assert "," in out.splitlines()[0]


def test_rebin_credit_zero_is_identity(capsys):
    code, out, _ = run(capsys, "rebin", "--credit", "0", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    before = [(r["bracket_lo"], r["pathway"], r["count"]) for r in rows if r["stage"] == "before"]
    after = [(r["bracket_lo"], r["pathway"], r["count"]) for r in rows if r["stage"] == "after"]
    assert before and before == after


def test_sweep_eleven_rows(capsys):
    code, out, _ = run(capsys, "sweep", "--param", "incidence", "--from", "0", "--to", "1", "--steps", "11")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 11
    values = [float(r["value"]) for r in rows]
    assert values == sorted(values) and values[0] == 0 and values[-1] == 1


def test_eligibility_single_purchase(capsys):
    code, out, _ = run(capsys, "eligibility", "--price", "20000", "--pathway", "used_private")
    assert code == 0
    assert "not a dealer purchase" in out
    code, out, _ = run(capsys, "eligibility", "--price", "10000")
    assert "$3,000" in out


def test_eligibility_table(capsys):
    code, out, _ = run(capsys, "eligibility")
    assert code == 0 and "7,951,744" in out


def test_price_cap(capsys):
    code, out, _ = run(capsys, "price-cap", "--point", "2019:21493", "--point", "2021:25891", "--point", "2023:26700")
    assert code == 0
    assert "1,301.75" in out or "1301.75" in out
    assert "2022" in out


def test_svg_out_dir(tmp_path, capsys):
    code, out, _ = run(capsys, "report", "--format", "svg", "--out", str(tmp_path))
    assert code == 0
    assert sorted(p.name for p in tmp_path.iterdir()) == ["fig1a.svg", "fig1b.svg", "fig1c.svg"]


def test_outputs_byte_identical(tmp_path, capsys):
    for d in ("a", "b"):
        assert main(["report", "--format", "svg", "--out", str(tmp_path / d)]) == 0
    capsys.readouterr()
    for name in ("fig1a.svg", "fig1b.svg", "fig1c.svg"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


@pytest.mark.parametrize(
    "argv",
    [
        ["frobnicate"],
        ["sweep", "--param", "incidence"],
        ["sweep", "--param", "incidence", "--values", "0,2"],
        ["sweep", "--param", "incidence", "--values", "a,b"],
        ["price-cap", "--point", "2020"],
        ["rebin", "--incidence", "3"],
    ],
)
def test_usage_and_validation_errors_exit_1(capsys, argv):
    try:
        code = main(argv)
    except SystemExit as exc:  # argparse-level errors
        code = exc.code
    assert code == 1


def test_bad_config_exits_1(tmp_path, capsys):
    p = tmp_path / "c.toml"
    p.write_text("incidnce = 0.5\n")
    code, _, err = run(capsys, "report", "--config", str(p))
    assert code == 1 and "incidnce" in err


def test_missing_survey_exits_2(tmp_path, capsys):
    code, _, err = run(capsys, "report", "--survey", str(tmp_path / "nope.csv"))
    assert code == 2 and "I/O" in err


def test_bad_survey_exits_1(tmp_path, capsys):
    p = tmp_path / "s.csv"
    p.write_text("bracket_lo,bracket_hi,pathway,count\n0,inf,used_dealer,-3\n")
    code, _, err = run(capsys, "report", "--survey", str(p))
    assert code == 1 and "negative" in err
