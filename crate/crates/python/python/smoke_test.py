"""Smoke test for the compiled `paretail` module.

Build and run from the repository root:

    cargo build --release -p paretail-py
    cp target/release/libparetail_py.so crates/python/python/paretail.so
    python3 crates/python/python/smoke_test.py
"""
import math
import os
import sys

sys.path.insert(0, os.environ.get("PARETAIL_MODULE_DIR") or os.path.dirname(os.path.abspath(__file__)))

import paretail  # noqa: E402


def main():
    e = math.e
    data = [1.0, e, e * e, e ** 3]
    assert paretail.hill(data, 3) == 2.0
    assert [round(t, 12) for t in paretail.log_spacings(data, 3)] == [1.0, 2.0, 3.0]

    d = paretail.Distribution.frechet(2.0)
    assert abs(d.gamma - 0.5) < 1e-15 and d.rho == -1.0
    x = d.sample(500, seed=7)
    assert len(x) == 500 and x == sorted(x) and x == d.sample(500, seed=7)

    so = paretail.second_order(x)
    assert so.rho < 0 and math.isfinite(so.beta)

    for name in paretail.ESTIMATORS:
        r = paretail.estimate(x, 50, estimator=name, second_order=so, seed=1)
        assert r["estimator"] == name and math.isfinite(r["gamma_hat"]), r

    path = paretail.tail_path(x, 10, 100, estimator="rwls", seed=1)
    assert [p["k"] for p in path] == list(range(10, 101))

    fixed = paretail.SecondOrder(-1.0, 0.0)
    bc = paretail.estimate(x, 40, estimator="bchill", second_order=fixed)
    assert bc["gamma_hat"] == paretail.hill(x, 40)

    qq = paretail.qq_data([1.0, e], kind="pareto")
    assert abs(qq[0][0] + math.log(2 / 3)) < 1e-15 and qq[1][1] == 1.0

    for bad in (lambda: paretail.hill(data, 4), lambda: paretail.Distribution.frechet(-1.0)):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    print("python smoke test passed")


if __name__ == "__main__":
    main()
