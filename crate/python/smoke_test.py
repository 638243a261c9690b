"""Smoke test for the compiled `borsuk` extension module.

Build first with `cargo build -p borsuk-py`, then run
`python3 python/smoke_test.py`. Set BORSUK_LIB to point at a specific
shared library; otherwise target/{release,debug}/libborsuk.so is used.
Set SAT_SOLVER to also exercise the solver path.
"""

import importlib.util
import os
import pathlib
import shutil
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    candidates = [os.environ.get("BORSUK_LIB")] + [
        str(ROOT / "target" / profile / "libborsuk.so") for profile in ("release", "debug")
    ]
    lib = next((c for c in candidates if c and os.path.exists(c)), None)
    if lib is None:
        sys.exit("libborsuk.so not found; run `cargo build -p borsuk-py` first")
    tmp = tempfile.mkdtemp()
    target = os.path.join(tmp, "borsuk.so")
    shutil.copy(lib, target)
    spec = importlib.util.spec_from_file_location("borsuk", target)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def main():
    b = load()

    assert b.distance("0000001111", "0000110011") == 4
    assert b.group_order(10) == 3_715_891_200

    origin = b.VertexSet(["0000000000"])
    assert len(b.trim(10, 2, origin)) == 56
    assert len(b.trim(10, 4, b.VertexSet(["0000000000", "1111000000"]))) == 190

    k4 = b.representative("K4'")
    g = b.Isometry.random(10, 3)
    image = g.apply(k4)
    assert image.canonical_form() == k4.canonical_form()
    assert image.contains_copy_of(k4)
    assert not image.contains_copy_of(b.representative("K4''"))

    sizes = {label: len(s) for label, s in b.cover_10_4()}
    print("cover sets:", sizes)

    dimacs = b.coloring_dimacs(b.VertexSet(["000", "011"]), 2, 1)
    assert dimacs.startswith("p cnf 2 "), dimacs

    outcome, colors = b.color(b.trim(10, 2, origin), 2, 11)
    assert outcome == "colored" and max(colors) < 11

    solver = os.environ.get("SAT_SOLVER")
    if solver:
        report = b.case(1, solver=solver)
        print("row 1:", report)
    else:
        print("SAT_SOLVER not set; skipping case run")

    try:
        b.VertexSet(["01x"])
    except ValueError as e:
        print("bad input rejected:", e)
    else:
        raise AssertionError("malformed bitstring accepted")

    print("ok")


if __name__ == "__main__":
    main()
