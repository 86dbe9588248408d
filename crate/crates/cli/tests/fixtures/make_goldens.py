"""Regenerates the approx goldens by brute force over all subsets.

Run from this directory: python3 make_goldens.py
"""
import itertools
import json


def subsets(n):
    for r in range(n + 1):
        for c in itertools.combinations(range(1, n + 1), r):
            yield frozenset(c)


def canon(n, family):
    return sorted((sorted(t) for t in family), key=lambda t: (len(t), t))


def closure(n, members, up_part, down_part):
    """T with some S in members, S agreeing with T outside the parts,
    S & up_part <= T & up_part and S & down_part >= T & down_part."""
    out = set()
    for t in subsets(n):
        for s in members:
            if s & up_part <= t & up_part and s & down_part >= t & down_part:
                out.add(t)
                break
    return out


def report(n, members, mode, split=None):
    full = frozenset(range(1, n + 1))
    all_sets = list(subsets(n))
    doc = {"mode": mode}
    if mode == "upper":
        inner = {t for t in all_sets if all(s in members for s in all_sets if s >= t)}
        outer = {t for t in all_sets if any(s <= t for s in members)}
    elif mode == "lower":
        inner = {t for t in all_sets if all(s in members for s in all_sets if s <= t)}
        outer = {t for t in all_sets if any(s >= t for s in members)}
    elif mode == "interval":
        inner = None
        outer = {t for t in all_sets if any(s <= t for s in members) and any(s >= t for s in members)}
    else:
        part_i = frozenset(split)
        part_j = full - part_i
        inner = None
        outer = closure(n, members, part_i, part_j)
        doc["split"] = sorted(part_i)
        ext = set()
        for t in outer:
            if all(t - {i} not in outer for i in t & part_i) and all(t | {j} not in outer for j in part_j - t):
                ext.add(t)
        doc["extremals"] = {"n": n, "members": canon(n, ext)}
    if inner is not None:
        doc["inner"] = {"n": n, "members": canon(n, inner)}
        doc["exact_inner"] = inner == members
    doc["outer"] = {"n": n, "members": canon(n, outer)}
    doc["exact_outer"] = outer == members
    return doc


def main():
    with open("sample_system.json") as f:
        sample = json.load(f)
    n = sample["n"]
    members = {frozenset(m) for m in sample["members"]}
    goldens = {
        "upper": report(n, members, "upper"),
        "lower": report(n, members, "lower"),
        "interval": report(n, members, "interval"),
        "bimonotone": report(n, members, "bimonotone", split=[1, 3]),
    }
    for name, doc in goldens.items():
        with open(f"approx_{name}.golden.json", "w") as f:
            json.dump(doc, f, indent=2)
            f.write("\n")


if __name__ == "__main__":
    main()
