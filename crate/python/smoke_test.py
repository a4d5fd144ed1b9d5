"""Smoke test for the gp_majority extension module.

Build first:

    cargo build --release -p gp-majority-py --features extension-module

then run `python3 python/smoke_test.py`. The script imports an installed
`gp_majority` if there is one, otherwise it loads the freshly built library
from target/release.
"""

import csv
import importlib.util
import math
import os
import sys
import tempfile

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def load():
    try:
        import gp_majority

        return gp_majority
    except ImportError:
        pass
    for profile in ("release", "debug"):
        path = os.path.join(ROOT, "target", profile, "libgp_majority_py.so")
        if os.path.exists(path):
            spec = importlib.util.spec_from_file_location("gp_majority", path)
            module = importlib.util.module_from_spec(spec)
            spec.loader.exec_module(module)
            return module
    sys.exit("gp_majority not built; see the module docstring")


def main():
    gm = load()

    ind = gm.Individual(3, ["x1", "x1", "x2", "~x3"])
    assert ind.size == 4 and len(ind) == 4
    assert ind.counts(1) == (2, 0)
    assert gm.evaluate(ind, "two-thirds-majority") == (2, 0, 4)
    assert gm.evaluate(ind, "plus-c-majority", 2) == (1, 0, 4)
    assert gm.Individual.parse(3, ind.tree()) == ind

    sup = gm.Individual(1, ["x1"] * 3)
    num, exp, _ = gm.evaluate(sup, "two-thirds-super-majority")
    assert num / 2**exp == 2 - 2**-3

    one = gm.Individual(1, ["x1", "x1", "~x1"])
    assert gm.classify(one, "two-thirds-majority") == ["positive_critical", "positive_critical", "redundant"]
    assert not gm.deletion_stable(one, "two-thirds-majority")

    big = gm.Individual.random(20, 300, 7)
    for problem in ("majority", "two-thirds-majority", "two-thirds-super-majority"):
        assert gm.evaluate(big, problem) == gm.brute_force_score(big, problem)

    child, op = gm.hvl_prime(big, 1)
    assert op in ("substitute", "insert", "delete")
    assert abs(child.size - big.size) <= 1
    assert gm.local_search_budget(2) == 125

    rec = gm.run(problem="two-thirds-majority", n=30, seed=5)
    assert rec["success"] and rec["unexpressed"] == 0

    hist = gm.literal_histogram(gm.Individual.random(20_000, 20_000, 3))
    assert sum(hist.values()) == 20_000
    assert abs(hist[(0, 0)] / 20_000 - gm.poisson_reference(1.0, 0, 0)) < 0.02

    stats = gm.summarize([1, 2, 3, 4])
    assert (stats["q1"], stats["median"], stats["q3"]) == (1.75, 2.5, 3.25)

    w, ratios = gm.fit_nlogn({100: 9 * 100 * math.log(100), 400: 9 * 400 * math.log(400)})
    assert abs(w - 9) < 1e-9 and set(ratios) == {100, 400}

    with tempfile.TemporaryDirectory() as tmp:
        out = os.path.join(tmp, "sweep.csv")
        gm.run_experiment(problem="majority", n_values=[10, 20], repetitions=3, output=out)
        with open(out, newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 6 and rows[0]["problem"] == "majority"
        groups = gm.summarize_csv(out)
        assert [g["n"] for g in groups] == [10, 20]

    try:
        gm.run(problem="no-such-problem", n=3)
    except ValueError:
        pass
    else:
        raise AssertionError("bad problem name accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
