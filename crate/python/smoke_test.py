#!/usr/bin/env python3
"""Builds the grasspole_py extension and exercises the main bindings.

Run from anywhere:  python3 python/smoke_test.py
"""
import json
import pathlib
import shutil
import subprocess
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent
HERE = pathlib.Path(__file__).resolve().parent


def build_extension():
    subprocess.run(
        ["cargo", "build", "-p", "grasspole-py", "--release"],
        cwd=ROOT,
        check=True,
    )
    built = ROOT / "target" / "release" / "libgrasspole_py.so"
    shutil.copyfile(built, HERE / "grasspole_py.so")


def main():
    build_extension()
    sys.path.insert(0, str(HERE))
    import grasspole_py as gp

    # Counting: generic fiber sizes and subspace counts are exact ints.
    assert gp.schubert_number(3, 3) == 42
    assert gp.schubert_number(2, 4) == gp.schubert_number(4, 2) == 14
    assert gp.gaussian_binomial(4, 2, 2) == 35

    # Field arithmetic on element strings.
    f5 = gp.Field("5")
    assert f5.add("3", "4") == "2"
    assert f5.inv("2") == "3"
    assert f5.characteristic() == 5
    assert len(f5.elements()) == 5
    f4 = gp.Field("2^2:modulus=1,1,1")
    assert f4.order() == 4 and f4.extension_degree() == 2
    qq = gp.Field("QQ")
    assert qq.div("1", "3") == "1/3" and not qq.is_finite()

    # A nondegenerate Cauchy system and its quartic fibers over F_101.
    f101 = gp.Field("101")
    sys101 = gp.cauchy_system(f101, 2, 2)
    assert sys101.degree() == 4
    assert sys101.degeneracy_exact() == "nondegenerate"
    fiber = json.loads(sys101.fiber(["1", "2", "3", "4", "1"]))
    assert fiber["total_multiplicity"] == 2

    # The binary 2x4 example: minors, census, degeneracy.
    f2 = gp.Field("2")
    binary = gp.System.factored(
        f2,
        [[[], ["0", "1"]], [["1"], ["1", "0", "1"]]],
        [[["1", "1"], ["0", "0", "1"]], [["1"], ["0", "1"]]],
    )
    assert binary.degree() == 4 and binary.is_coprime()
    assert len(binary.minors()) == 6
    assert binary.degeneracy_exact() == "nondegenerate"
    assert binary.degeneracy_scan() is None
    census = json.loads(binary.census("projective"))
    assert census["image_size"] == 25 and census["target_size"] == 31

    # JSON round trip preserves the system.
    again = gp.System.from_json(binary.to_json())
    assert again.to_json() == binary.to_json()

    # A degenerate monomial system over F_5 and its annihilating scan.
    mono = gp.monomial_system(
        f5,
        [["1", "1", "1", "1"], ["0", "1", "2", "3"]],
        [[0, 1, 1, 2], [0, 0, 0, 1]],
    )
    assert mono.degeneracy_exact() == "degenerate"
    witness = mono.degeneracy_scan()
    assert witness is not None and len(witness) == 2
    assert gp.mds_check(f5, [["1", "1", "1", "1"], ["0", "1", "2", "3"]])
    assert gp.superregular_check(gp.Field("7"), [["1", "2"], ["2", "1"]])

    # State space in, closed-loop characteristic polynomial out.
    plant = gp.System.state_space(
        qq,
        [["0", "1"], ["0", "0"]],
        [["0"], ["1"]],
        [["1", "0"]],
    )
    assert plant.degree() == 2
    # K = [[-2]] places det(sI - A - BKC) = s^2 + 2.
    assert plant.charpoly([["-2"]]) == ["2", "0", "1"]

    # Osculating curves: small fields force degeneracy, large ones do not.
    assert gp.onc(f2, 2, 2, hasse=True).degeneracy_exact() == "degenerate"
    assert gp.onc(gp.Field("7"), 2, 2, hasse=True).degeneracy_exact() == "nondegenerate"

    # The binary nonsurjectivity certificate.
    cert = json.loads(gp.verify_f2())
    assert cert["all_nonsurjective"] and cert["off_quadric_points"] == 28

    print("smoke test passed")


if __name__ == "__main__":
    main()
