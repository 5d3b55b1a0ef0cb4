"""Smoke test for the compiled extension.

Build and run:
    cargo build --release -p subkit-py
    cp target/release/libsubkit.so python/subkit.so
    python3 python/smoke_test.py
"""

import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import subkit  # noqa: E402

S4 = [[1, 2, 3, 0], [1, 0, 2, 3]]


def main():
    assert subkit.order(4, S4) == 24
    s = subkit.sylow(4, S4, 2)
    assert subkit.order(4, s) == 8
    subs = subkit.subnormal_subgroups(4, S4)
    assert len(subs) == 7
    assert subkit.is_subnormal(4, S4, [[1, 0, 3, 2]])
    assert not subkit.is_subnormal(4, S4, [[1, 0, 2, 3]])

    root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    s4_file = os.path.join(root, "crates", "core", "corpus", "s4.json")
    reports = subkit.verify([s4_file], ["meierfrankenfeld", "series"])
    assert reports and all(r["status"] == "pass" for r in reports)
    assert list(reports[0]) == ["group", "check", "prime", "status", "witness", "ms"]

    inst = {"h1": [[1, 0, 3, 2]], "h2": [[2, 3, 0, 1]]}
    r = subkit.verify_identity(s4_file, 2, "tgroups", inst)
    assert r["status"] == "pass", r

    claims = subkit.example_e1()
    assert [c["witness"]["instance"]["claim"] for c in claims] == [1, 2, 3, 4, 5]
    assert all(c["status"] == "pass" for c in claims)

    try:
        subkit.order(3, [[0, 0, 1]])
    except ValueError:
        pass
    else:
        raise AssertionError("malformed permutation accepted")
    print("ok")


if __name__ == "__main__":
    main()
