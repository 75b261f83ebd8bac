import csv
import io
from fractions import Fraction

import pytest

from gridtester.errors import UsageError
from gridtester.experiment import COLUMNS, ExperimentSpec, rows_to_csv, run_experiment, trial_seed
from gridtester.properties import PropertyParams

MONO = PropertyParams.monotone()


def spec(**kw):
    base = dict(generator="corrupted-monotone", n=2, k=3, params=MONO, epsilons=(Fraction(1, 4), Fraction(1, 2)), trials=4, master_seed=5)
    base.update(kw)
    return ExperimentSpec(**base)


def test_rows_and_schema():
    rows = run_experiment(spec())
    assert len(rows) == 8
    text = rows_to_csv(rows)
    assert text.splitlines()[0] == ",".join(COLUMNS)
    parsed = list(csv.DictReader(io.StringIO(text)))
    assert [r["epsilon"] for r in parsed[:2]] == ["1/4", "1/2"]
    assert parsed[0]["seed"] == str(trial_seed(5, 0))
    for r in parsed:
        assert r["verdict"] in ("accept", "reject")
        assert int(r["queries_used"]) <= int(r["budget"])
        if Fraction(r["eps_f"]) == 0:
            assert r["verdict"] == "accept"


def test_parallel_rows_match_serial_rows():
    s = spec(trials=6)
    assert run_experiment(s, workers=3) == run_experiment(s)


def test_large_instances_report_na():
    rows = run_experiment(spec(n=2, k=6, trials=1))
    assert rows[0]["eps_f"] == "NA"


def test_trial_seeds_differ():
    assert len({trial_seed(0, t) for t in range(100)}) == 100
    assert trial_seed(1, 0) != trial_seed(0, 1)


@pytest.mark.parametrize(
    "kw", [{"trials": 0}, {"epsilons": (Fraction(3, 2),)}, {"epsilons": ()}, {"generator": "x"}, {"master_seed": -1}]
)
def test_spec_validation(kw):
    with pytest.raises(UsageError):
        spec(**kw)
