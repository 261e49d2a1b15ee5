import csv
import json

import numpy as np
import pytest

from hypercomm.bench import (
    EvalReport,
    benchmark,
    check_methods,
    format_table,
    replication_seed,
    workers_from_env,
    write_csv,
    write_json,
)

FAST = dict(max_outer=15)


@pytest.fixture(scope="module")
def small_run():
    return benchmark([(2, 30, 0.5)], reps=2, seed=1, K=2, m=3, r=2, fit_options=FAST)


class TestBenchmark:
    def test_rows(self, small_run):
        methods = [rep.method for rep in small_run]
        assert methods == ["hem", "wptg", "shp", "tensor-score"]
        for rep in small_run[:3]:
            assert len(rep.errors) == 2 and all(0 <= e <= 0.5 for e in rep.errors)
        gap = small_run[3]
        assert not gap.implemented and gap.row()["mean"] == ""

    def test_single_replication_sd_zero(self):
        reps = benchmark([(1, 20, 0.5)], methods=["wptg"], reps=1, r=2, include_gaps=False)
        assert len(reps) == 1 and reps[0].sd == 0.0

    def test_seed_streams(self):
        assert replication_seed(0, 0, 1) != replication_seed(0, 0, 2)
        assert replication_seed(0, 1, 0) != replication_seed(0, 0, 1)
        assert replication_seed(3, 2, 1) == replication_seed(3, 2, 1)

    def test_parallel_matches_serial(self):
        kw = dict(methods=["hem", "shp"], reps=2, seed=4, r=2, fit_options=FAST, include_gaps=False)
        serial = benchmark([(2, 24, 0.5)], workers=0, **kw)
        parallel = benchmark([(2, 24, 0.5)], workers=2, **kw)
        assert [r.errors for r in serial] == [r.errors for r in parallel]

    def test_method_validation(self):
        with pytest.raises(ValueError, match="not supported"):
            check_methods(["tensor-score"])
        with pytest.raises(ValueError, match="unknown"):
            check_methods(["nope"])
        with pytest.raises(ValueError):
            benchmark([(1, 20, 0.5)], reps=0)

    def test_failures_are_recorded(self):
        # an invalid fit option makes every fit fail; the grid still completes
        reps = benchmark([(1, 10, 0.5)], methods=["hem"], reps=1, r=2, fit_options=dict(tol=-1.0),
                         include_gaps=False)
        assert reps[0].errors == [None] and reps[0].failures[0]
        assert np.isnan(reps[0].mean)

    def test_workers_from_env(self, monkeypatch):
        monkeypatch.delenv("HYPERCOMM_THREADS", raising=False)
        assert workers_from_env() == 0
        monkeypatch.setenv("HYPERCOMM_THREADS", "3")
        assert workers_from_env() == 3


class TestOutput:
    def test_csv_full_precision(self, small_run, tmp_path):
        write_csv(small_run, tmp_path / "t.csv")
        rows = list(csv.DictReader(open(tmp_path / "t.csv")))
        assert [r["method"] for r in rows] == ["hem", "wptg", "shp", "tensor-score"]
        assert float(rows[1]["mean"]) == small_run[1].mean
        assert rows[3]["mean"] == ""

    def test_json(self, small_run, tmp_path):
        write_json(small_run, tmp_path / "t.json")
        data = json.load(open(tmp_path / "t.json"))
        assert data[0]["errors"] == small_run[0].errors
        assert data[3]["mean"] is None

    def test_table_rounds(self):
        rep = EvalReport(1, 300, 0.1, "hem", errors=[0.123456, 0.2])
        table = format_table([rep, EvalReport(1, 300, 0.1, "tensor-score", implemented=False)])
        assert "0.1617" in table and "--" in table
