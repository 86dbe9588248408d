"""Smoke test for the pymonoset extension module.

Build and install first:  pip install --no-build-isolation ./crates/python
"""
import itertools
import json
import sys

import pymonoset


def members(doc):
    return {frozenset(m) for m in doc["members"]}


def up_closure(n, fam):
    return {
        frozenset(c)
        for r in range(n + 1)
        for c in itertools.combinations(range(1, n + 1), r)
        if any(s <= frozenset(c) for s in fam)
    }


def main():
    system = {"n": 3, "members": [[1], [2, 3]]}
    text = json.dumps(system)

    cut2 = json.loads(pymonoset.ops(text, "cut cut"))
    assert members(cut2) == up_closure(3, members(system)), cut2
    assert members(json.loads(pymonoset.ops(text, "comp comp"))) == members(system)

    report = json.loads(pymonoset.approx(text, "upper"))
    assert members(report["outer"]) == up_closure(3, members(system))
    assert report["exact_inner"] is False
    bim = json.loads(pymonoset.approx(text, "bimonotone", [1]))
    assert bim["split"] == [1]
    try:
        pymonoset.approx(text, "bimonotone")
    except ValueError:
        pass
    else:
        raise AssertionError("missing split accepted")

    table, equal = pymonoset.demo("shortest-path")
    assert equal and "{{e1,e3},{e2,e3}}" in table, table

    model = {"n": 3, "sense": "max", "costs": [2, 3, 4],
             "cuts": [{"pos": [], "neg": [1, 2, 3], "rhs": 2}]}
    solved = json.loads(pymonoset.solve(json.dumps(model)))
    assert solved["status"] == "optimal" and solved["objective_value"] == 4, solved

    inst = json.loads(pymonoset.instance(8, 0.3, "0.1", 20, 1))
    assert inst["graph"]["n"] == 8 and len(inst["scenarios"]) == 8

    csv = pymonoset.casestudy(8, 0.3, "0.1", 20, [1])
    rows = [line.split(",") for line in csv.strip().splitlines()[1:]]
    assert len(rows) == 4 and len({r[4] for r in rows}) == 1, csv

    print(f"pymonoset {pymonoset.__version__}: smoke test passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
