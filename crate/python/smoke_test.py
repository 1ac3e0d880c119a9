"""Smoke test for the maghom extension module.

Build and install it first, e.g.

    pip install maturin
    maturin develop -m crates/py/Cargo.toml --release
"""

import maghom


def rank(cells, k, l):
    return next(c["rank"] for c in cells if c["k"] == k and c["l"] == l)


def main():
    n, edges = maghom.parse("C(5)")
    assert n == 5 and len(edges) == 5

    cells = maghom.homology("C(5)", lmax=5, torsion=True, method="exact")
    assert rank(cells, 0, 0) == 5
    assert rank(cells, 2, 3) == 10
    assert rank(cells, 3, 4) == 30
    assert all(c["torsion"] == [] for c in cells)
    assert all(c["method"] == "exact" for c in cells)

    guarded = maghom.homology("C(5)", lmax=8, max_trails=1000)
    assert any(c["rank"] is None for c in guarded)

    counts = maghom.chains("C(5)", lmax=4)
    assert counts[4] == [0, 0, 20, 120, 80]

    want = [5, -10, 10, 0, -20, 40]
    for method in ("counting", "inverse", "euler"):
        assert maghom.magnitude("C(5)", lmax=5, method=method) == want, method

    report = maghom.check("kunneth", ["K(2)", "K(2)"], lmax=4)
    assert report["verdict"]["verdict"] == "pass", report
    report = maghom.check("diagonal", ["C(5)"], lmax=4)
    assert report["verdict"]["verdict"] == "fail"

    for bad in (lambda: maghom.parse("C("), lambda: maghom.homology("C(5)", method="x")):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    print("maghom smoke test passed")


if __name__ == "__main__":
    main()
