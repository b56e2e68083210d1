"""Build the extension module, import it, and check a few values.

    python3 python/smoke_test.py [--no-build]
"""

import math
import os
import shutil
import subprocess
import sys
import tempfile

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def build():
    subprocess.run(
        ["cargo", "build", "-p", "udwsim-py", "--release", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )


def stage():
    target = os.environ.get("CARGO_TARGET_DIR", os.path.join(ROOT, "target"))
    lib = os.path.join(target, "release", "libudwsim_py.so")
    out = tempfile.mkdtemp(prefix="udwsim-py-")
    shutil.copy(lib, os.path.join(out, "udwsim.so"))
    sys.path.insert(0, out)
    return out


def close(a, b, tol):
    assert abs(a - b) <= tol, f"{a} != {b} (tol {tol})"


def main():
    if "--no-build" not in sys.argv:
        build()
    stage()
    import udwsim

    close(udwsim.bessel_j0(1.0), 0.7651976865579665, 1e-15)
    close(udwsim.total_response(-1.0, 1.0), 1.7651976865579665, 1e-12)
    close(udwsim.response_offdiag_fourier(-1.0, 1.0), 0.5 * udwsim.bessel_j0(1.0), 1e-3)
    close(udwsim.mu_sq_sql(), 2 * math.sqrt(2 / 3), 1e-12)
    close(udwsim.snr(-1e-9, 1.0), 2 * (math.sqrt(10) + 2), 1e-6)
    close(udwsim.sql_optimize()["mu_sq_numeric"], udwsim.mu_sq_sql(), 1e-8)

    model = udwsim.PsdModel("sum", 1.0)
    close(model.witness(-1.0), udwsim.mu_sq_sql() * udwsim.bessel_j0(1.0), 1e-12)
    nu, est, analytic, se = model.monte_carlo_witness(1 << 16, 4.0, 1 << 10, 3)
    beyond = sum(1 for e, a, s in zip(est, analytic, se) if s > 0 and abs(e - a) > 3 * s)
    assert beyond / len(nu) < 0.01, beyond

    geom = udwsim.DetectorGeometry.from_points([0.0, 0.0], [3.0, 4.0], 2.5)
    close(geom.delta_over_cs, 2.0, 1e-15)

    p = udwsim.CondensateLaserParams.cs133()
    try:
        p.sound_speed()
        raise AssertionError("missing g2d should raise")
    except ValueError:
        pass
    p.g2d = 1e-38
    close(p.sound_speed(), 6.731379145833781, 1e-12)

    print(f"udwsim {udwsim.__version__}: python smoke test passed")


if __name__ == "__main__":
    main()
