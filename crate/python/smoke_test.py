"""Smoke test for the pyktour extension module.

Build and install first, for example:
    maturin build --release -m crates/py/Cargo.toml -o dist && pip install dist/pyktour-*.whl
"""

import json

import pyktour


def main():
    v = pyktour.classify([3, 8])
    assert not v.tourable and v.reason == "Small3xN", v
    assert pyktour.Board([6, 6, 6]).classify()

    t = pyktour.construct([6, 5, 4])
    assert len(t) == 120 and t.closed and t.is_valid()
    t.verify()
    assert t.is_bisited()
    a, b = t.disjoint_sites()
    assert a.is_disjoint(b) and len(a.cells) == 4

    back = pyktour.Tour.from_json(t.to_json())
    assert back.same_cycle(t)
    assert json.loads(t.to_json())["dims"] == [6, 5, 4]

    flat = pyktour.construct([6, 6])
    assert len(flat.grid().split()) == 36
    lifted = pyktour.lift(flat, 3)
    assert lifted.dims == [6, 6, 3] and lifted.is_valid()

    cells = flat.cells()
    cells[5] = cells[0]
    try:
        pyktour.Tour([6, 6], cells)
    except pyktour.KtourError as e:
        assert "repeats" in str(e)
    else:
        raise AssertionError("a duplicate cell must be rejected")

    r = pyktour.solve([3, 4])
    assert r.outcome == "proved_none" and r.tour is None
    r = pyktour.solve([5, 5], closed=False, start=[1, 1], seed=3)
    assert r.outcome == "found" and r.tour.cells()[0] == [1, 1]

    mp = pyktour.MoveParams(3, 2)
    r = pyktour.solve([10, 10], moves=mp)
    assert r.outcome == "found"
    for k in (4, 5, 6):
        assert r.tour.lift_generalized(k).is_valid()

    print("pyktour smoke test passed")


if __name__ == "__main__":
    main()
