import csv
import json
import os
import sys

import pytest

sys.path.append(os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))
from cli.main import CSV_COLUMNS, initialize_processor, main
from core.config import configure, get_settings

GROUPS_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "groups")


@pytest.fixture
def restore_settings():
    original = get_settings()
    yield
    configure(original)


@pytest.mark.asyncio
async def test_genfun_partial_fractions():
    processor = await initialize_processor()
    report = await processor.execute_command(
        "genfun", {"group": "Gamma3:p=2", "which": "A", "partial_fractions": True}
    )
    assert report.passed
    pf = report.results["A"]["partial_fractions"]
    assert pf["terms"] == [[1, 2, 4, 1], [3, 8, 8, 1], [1, 8, 16, 1]]
    assert "B" not in report.results


@pytest.mark.asyncio
async def test_genfun_coefficients_and_closed_forms():
    processor = await initialize_processor()
    report = await processor.execute_command("genfun", {"group": "symmetric:degree=3", "coefficients": 4})
    assert report.results["A"]["coefficients"] == [1, 3, 11, 49]
    assert report.results["B"]["coefficients"] == [1, 3, 8, 21]

    report = await processor.execute_command("genfun", {"group": "dihedral:order=16", "closed_form": True})
    assert report.passed
    assert len(report.results["closed_forms"]) == 3
    assert len(report.checks) == 6


@pytest.mark.asyncio
async def test_genfun_normalized():
    processor = await initialize_processor()
    report = await processor.execute_command("genfun", {"group": "dihedral:order=8", "which": "A", "normalized": True})
    assert report.results["A"]["normalized"]["function"]["denominator"] == [["1/2", 1], [1, 1]]


@pytest.mark.asyncio
async def test_equivalences():
    processor = await initialize_processor()
    report = await processor.execute_command("equiv", {"group1": "dihedral:order=8", "group2": "quaternion:order=8"})
    assert report.passed
    assert report.results["equivalent"] is True

    report = await processor.execute_command(
        "equiv", {"group1": "cyclic:order=6", "group2": "symmetric:degree=3", "mode": "B"}
    )
    assert report.passed
    assert report.results["equivalent"] is False

    report = await processor.execute_command(
        "equiv",
        {"group1": os.path.join(GROUPS_DIR, "d8.yaml"), "group2": os.path.join(GROUPS_DIR, "q8.yaml"), "mode": "isoclinic"},
    )
    assert report.passed
    assert report.results["equivalent"] is True
    assert report.checks[0].name == "witness diagram commutes"


@pytest.mark.asyncio
async def test_oracle_command():
    processor = await initialize_processor()
    report = await processor.execute_command("oracle", {"group": os.path.join(GROUPS_DIR, "s3.yaml")})
    assert report.passed
    assert len(report.results["rows"]) == 8
    assert {(r["mode"], r["n"]): r["brute"] for r in report.results["rows"]}[("alpha", 2)] == 11


@pytest.mark.asyncio
async def test_oracle_skips_cells_over_the_tuple_cap(restore_settings):
    processor = await initialize_processor()
    configure(tuple_cap=100)
    report = await processor.execute_command("oracle", {"group": "symmetric:degree=3", "n_max": 3})
    assert report.passed
    skipped = [c.name for c in report.checks if c.skipped]
    assert skipped == ["alpha_3", "beta_3"]


@pytest.mark.asyncio
async def test_verify_table_rejects_unsupported_primes():
    processor = await initialize_processor()
    report = await processor.execute_command("verify_table", {"primes": [7]})
    assert report.status == "error"
    assert report.error_type == "InvalidParameters"


@pytest.mark.asyncio
async def test_verify_table_for_two_and_three():
    processor = await initialize_processor()
    report = await processor.execute_command("verify_table", {"primes": [2, 3]})
    assert report.passed, [c.to_dict() for c in report.failures()]
    families = {(row["family"], row["p"]) for row in report.results["rows"]}
    assert ("Gamma5", 2) in families and ("Phi10", 3) in families
    assert len(families) == 18
    names = {c.name for c in report.checks}
    assert "Phi3 and Phi4 rows agree at p=3" in names
    assert "Phi7 and Phi8 rows agree at p=3" in names


@pytest.mark.slow
@pytest.mark.asyncio
async def test_verify_table_for_five():
    processor = await initialize_processor()
    report = await processor.execute_command("verify_table", {"primes": [5]})
    assert report.passed, [c.to_dict() for c in report.failures()]


@pytest.mark.asyncio
async def test_bench_writes_csv(tmp_path):
    processor = await initialize_processor()
    path = tmp_path / "bench.csv"
    report = await processor.execute_command(
        "bench", {"groups": ["symmetric:degree=3", "dihedral:order=8"], "n_max": 2, "csv": str(path)}
    )
    assert report.passed
    assert len(report.results["rows"]) == 16
    assert all("nanos" not in row for row in report.results["rows"])
    with open(path) as f:
        rows = list(csv.DictReader(f))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert len(rows) == 16


@pytest.mark.asyncio
async def test_certify_command():
    processor = await initialize_processor()
    report = await processor.execute_command("certify", {"group": os.path.join(GROUPS_DIR, "klein4.yaml")})
    assert report.passed
    assert report.results["summary"]["order"] == 4
    assert report.results["certificate"]["passed"]


def test_main_json_output(capsys):
    code = main(["--json", "equiv", "dihedral:order=8", "quaternion:order=8", "--mode", "isoclinic"])
    assert code == 0
    data = json.loads(capsys.readouterr().out)
    assert data["status"] == "passed"
    assert data["results"]["equivalent"] is True
    assert "timing" not in data


def test_main_text_output(capsys):
    code = main(["genfun", "quaternion:order=8", "--which", "B"])
    assert code == 0
    assert "(1 - t)/((1 - 2t)(1 - 4t))" in capsys.readouterr().out


def test_main_usage_errors(capsys):
    assert main(["genfun", "missing-group.yaml"]) == 2
    assert main(["--json", "genfun", "dihedral:order=7"]) == 2
    assert main(["--json", "genfun", "Gamma2:p=2", "--coefficients", "0"]) == 2
    capsys.readouterr()


def test_malformed_group_file_is_reported(tmp_path, capsys):
    ragged = tmp_path / "ragged.yaml"
    ragged.write_text("kind: cayley\ntable: [[0, 1], [1]]\n")
    assert main(["--json", "certify", str(ragged)]) == 1
    data = json.loads(capsys.readouterr().out)
    assert data["status"] == "error"
    assert data["error_type"] == "NotAGroup"

    bad_pair = tmp_path / "bad_pair.yaml"
    bad_pair.write_text("kind: pcp\nrelative_orders: [3, 3, 3]\ncommutator_words:\n  - pair: [1, 0, 2]\n    word: [0, 0, 1]\n")
    assert main(["--json", "certify", str(bad_pair)]) == 2
    assert json.loads(capsys.readouterr().out)["error_type"] == "GroupSpecError"


def test_recursion_and_histogram_beat_brute_force():
    from cli.main import bench_cell

    rows = {row["strategy"]: row for row in bench_cell(("dihedral:order=32", 3))}
    assert rows["eq1"]["count"] == rows["brute_alpha"]["count"]
    assert rows["eq4"]["count"] == rows["brute_beta"]["count"]
    # 11 classes read 2 * 32 entries each, then 3 histogram terms
    assert rows["eq1"]["work"] == 2 * 32 * 11 + 3
    assert rows["brute_alpha"]["work"] >= 100 * rows["eq1"]["work"]
    assert rows["brute_beta"]["work"] > rows["eq4"]["work"]

    smaller = {row["strategy"]: row for row in bench_cell(("dihedral:order=32", 2))}
    assert smaller["eq1"]["work"] == rows["eq1"]["work"]
    assert smaller["eq4"]["work"] == rows["eq4"]["work"]
    assert smaller["brute_alpha"]["work"] < rows["brute_alpha"]["work"]
