"""Smoke test for the anline_py extension.

Uses an installed module when there is one (maturin develop), otherwise
loads the newest target/{release,debug}/libanline_py.so from a `cargo build -p
anline-python`.
"""

import importlib.util
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    try:
        import anline_py
        return anline_py
    except ImportError:
        pass
    builds = [ROOT / "target" / p / "libanline_py.so" for p in ("release", "debug")]
    builds = [b for b in builds if b.exists()]
    if not builds:
        sys.exit("anline_py not found; run `cargo build -p anline-python` first")
    lib = max(builds, key=lambda b: b.stat().st_mtime)
    spec = importlib.util.spec_from_file_location("anline_py", lib)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    return mod


def main():
    a = load()

    s = a.Series("0:1 1:1 r=2")
    assert s.norm() == 3.0 and s.norm_text() == "3", s.norm_text()
    p = s * s
    assert p.terms() == [(0, 1 + 0j), (1, 2 + 0j), (2, 1 + 0j)], p.terms()
    assert p.norm() <= s.norm() ** 2
    assert abs(s.eval(1j) - (1 + 1j)) < 1e-15

    f, g, ok = a.laurent_split("1:1 0:1 -1:1", "2", "1/2")
    assert ok and f.norm() == 3.0 and g.norm() == 2.0

    q, nb, nc, bound, within = a.divide(["1:1", "0:-1"], "1/2")
    assert q == ["0:1 r=1/2"] and within and nc <= bound, (q, nb, nc, bound)

    rts = a.roots("T^2+1")
    assert len(rts) == 2 and all(r <= 1e-10 for _, r in rts)
    assert sorted(round(z.imag) for z in a.spectrum("T^2+1")) == [-1, 1]

    disc = a.Region("|T| <= 1")
    assert disc.contains(0j) is True and disc.contains(2 + 0j) is False
    band = disc & a.Region("|T| >= 1")
    assert band.contains(1j) is True and band.contains(0.5 + 0j) is False

    items = a.axioms(grid_step="1/4", random_points=200)
    assert len(items) == 6 and not any(c for _, c, _ in items), items
    neg = a.axioms(grid_step="1/8", random_points=0, negate=True)
    assert neg[5][1], neg[5]

    base = a.HuberPair.polynomial_ring()
    cover = base.two_piece_cover("T")
    assert len(cover.members()) == 2
    assert cover.refines(cover) == [0, 1]
    v = a.Valuation("order:0:1/2")
    assert v.value("T^2") == "1/4"
    assert base.spa(v, ["T"], "1") == "member"
    assert "1 =" in base.unit_ideal(["T", "T-1"])
    try:
        base.unit_ideal(["T", "T^2"])
    except ValueError:
        pass
    else:
        raise AssertionError("proper ideal accepted")

    passed, report = a.selftest(
        cap=3, trials=5, grid_step="1/2", random_points=50, gaga_configs=3, lattice_triples=5
    )
    assert passed, report
    print("anline_py smoke test: ok")


if __name__ == "__main__":
    main()
