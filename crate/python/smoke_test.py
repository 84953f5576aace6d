"""Smoke test for the pyprolate extension.

Build first with `cargo build --release -p prolate-python`; the script copies
target/release/libpyprolate.so next to a temporary import path.
"""

import math
import pathlib
import shutil
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    for profile in ("release", "debug"):
        for name in ("libpyprolate.so", "libpyprolate.dylib", "pyprolate.dll"):
            lib = ROOT / "target" / profile / name
            if lib.exists():
                tmp = pathlib.Path(tempfile.mkdtemp())
                suffix = ".pyd" if name.endswith(".dll") else ".so"
                shutil.copy(lib, tmp / f"pyprolate{suffix}")
                sys.path.insert(0, str(tmp))
                import pyprolate

                return pyprolate
    sys.exit("extension not built: run `cargo build --release -p prolate-python`")


def main():
    p = load()
    c = 10 * math.pi

    assert abs(p.sqrt_q_tilde(10, 10.0) - 0.782942846) < 1e-8
    assert 0.5 <= p.phi_inverse(0.5) <= math.pi / 4
    assert abs(p.log_lambda_hat(40, c) - p.log_lambda_tilde(40, c) - math.log(2)) < 1e-12

    best = p.log_lambda(90, c)
    assert best["method"] == "integral"
    mu = math.exp(0.5 * (math.log(2 * math.pi / c) + best["log_value"]))
    assert abs(mu / 7.544039e-58 - 1) < 1e-5, mu

    ratio = p.log_lambda(30, c, tier="ratio")
    integral = p.log_lambda(30, c, tier="integral")
    assert abs(ratio["log_value"] - integral["log_value"]) < 1e-6

    bundle = p.approx_bundle(3, 20.0)
    assert bundle["q_valid"] is False and bundle["sqrt_q_tilde"] is None

    pair = p.prolate_solve(5, 1e-8)
    assert abs(pair["chi"] - 30) < 1e-9
    assert abs(sum(b * b for b in pair["beta"]) - 1) < 1e-12

    cs = p.c_star(10)
    assert math.pi * 9 / 2 <= cs <= math.pi * 11 / 2
    assert abs(p.log_lambda(10, cs, tier="nystrom")["log_value"] - math.log(0.5)) < 1e-9

    assert abs(p.j_integral(1e-3) - math.log(4 / (math.e * 1e-3))) < 1e-6
    assert p.delta_kappa(12.0) > 0

    table = p.run_table(3)
    assert table["pass"] and len(table["rows"]) == 15

    try:
        p.log_lambda(3, -1.0)
    except ValueError:
        pass
    else:
        raise AssertionError("negative bandwidth accepted")

    print("pyprolate smoke test passed")


if __name__ == "__main__":
    main()
