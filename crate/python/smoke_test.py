#!/usr/bin/env python3
"""Smoke test for the Python bindings.

Builds the extension module with cargo if needed, loads it, and checks a
few end-to-end facts: sphere counts, the quartic solution family, slopes,
and Jones polynomials across two build routes.

Run from the repository root:  python3 python/smoke_test.py
"""

import json
import shutil
import subprocess
import sys
import sysconfig
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def build_module() -> Path:
    subprocess.run(
        ["cargo", "build", "--release", "-p", "orthoweave-py"],
        cwd=ROOT,
        check=True,
    )
    lib = ROOT / "target" / "release" / "liborthoweave_py.so"
    if not lib.exists():  # macOS fallback
        lib = ROOT / "target" / "release" / "liborthoweave_py.dylib"
    suffix = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    stage = Path(tempfile.mkdtemp(prefix="orthoweave-py-"))
    target = stage / f"orthoweave_py{suffix}"
    shutil.copyfile(lib, target)
    return stage


def main() -> int:
    sys.path.insert(0, str(build_module()))
    import orthoweave_py as ow

    # sphere/crossing counts of the standard builds
    assert ow.build_counts("N(t(2,2))") == (16, 4)
    assert ow.build_counts("N(t(3))") == (12, 3)
    assert ow.build_counts("N(t(2))") == (8, 2)
    assert ow.braid_counts("aaaa") == (18, 4, 2)
    assert ow.braid_counts("aaaa", halfspace_closure=True) == (16, 4, 2)

    # slope arithmetic
    assert ow.slope_of("t(2,-2,-3)") == "11/7"
    assert ow.cf_expand(11, 7) == [1, 1, 1, 3]
    assert ow.cf_eval([2, 2]) == "5/2"

    # the quartic family contains the small tuples
    sols = ow.diophantine(5)
    assert (3, 2, 1, 7, False) in sols
    assert (1, 1, 0, 1, True) in sols

    pt = ow.orthocubic_point(3, 2)
    assert pt["coordinates"] == "9, 4, 1, 7√2"

    # Jones polynomial agreement between the tangle and braid routes
    j_tangle = ow.jones_polynomial("N(t(3))")
    j_braid = ow.jones_polynomial('braid("aaa")')
    mirror = {-k: v for k, v in j_tangle.items()}
    assert j_braid == j_tangle or j_braid == mirror

    # necklace documents verify after a JSON round trip
    doc = ow.necklace_json("N(t(2,2))")
    assert ow.verify_necklace_json(doc) == 16
    parsed = json.loads(doc)
    assert parsed["counts"] == {"spheres": 16, "crossings": 4}

    print("smoke test: all checks passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
