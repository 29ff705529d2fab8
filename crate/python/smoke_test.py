"""Smoke test for the mfact_py extension.

Build and install first:

    pip install --no-build-isolation ./crates/python
    python python/smoke_test.py
"""

import json
from fractions import Fraction

import mfact_py as mf


def check_spin14():
    z0 = mf.Spinor.z0()
    assert mf.j8(z0) == 576
    assert mf.j8(z0.scale(2)) == 576 * 2**8
    assert mf.j8(mf.Spinor.z1()) == 0
    m = mf.m_z(z0)
    assert len(m) == 14 and all(len(row) == 14 for row in m)
    assert m[0][0] == -24
    assert all(isinstance(x, Fraction) for row in m for x in row)
    # round trip through the JSON point format
    assert mf.Spinor.from_json(z0.to_json()) == z0
    split = json.loads(mf.split(z0))
    assert split["m"]["a"] == "24"


def check_spin10():
    z = mf.PairSpinor.generic_point()
    assert mf.j4(z) == 36
    m = mf.m10(z)
    trace = sum(m[i][i] for i in range(10))
    assert trace == 36


def check_three_forms():
    star = mf.ThreeForm.associative()
    assert mf.j7(star) == -24
    p, r = mf.heptic_matrices(star)
    assert p[0][0] == 1 and r[0][0] == -24
    assert mf.j7(mf.ThreeForm(7, [((1, 2, 3), 1)])) == 0
    w = mf.ThreeForm.random(8, 3, 3)
    j = mf.j16(w)
    assert mf.j16(w.scale(Fraction(1, 2))) == j / 2**16


def check_reports():
    state, value = mf.rng_next(2024)
    assert value == 11487996472437173461
    cal = json.loads(mf.calibrate("sedecic"))
    assert cal["verdict"] == "all_lambda" and cal["lambda"] == "0"
    report = json.loads(mf.verify("heptic", trials=3))
    assert report["verdict"] == "pass"
    assert [t["index"] for t in report["trials"]] == [0, 1, 2]
    swap = json.loads(mf.swap_check())
    assert swap["b_orthogonal"] and not swap["exchanges"]
    try:
        mf.verify("e8")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown case accepted")


if __name__ == "__main__":
    check_spin14()
    check_spin10()
    check_three_forms()
    check_reports()
    print("mfact_py smoke test passed")
