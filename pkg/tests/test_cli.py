import pytest

from qtoric import example_path
from qtoric.cli import main, run

WPS = example_path("wps")
SPHERE = example_path("quasisphere")


def ok(*argv):
    status, out, err = run(argv)
    assert status == 0, err
    assert err == ""
    return out


def write(tmp_path, text, name="f.qtx"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return str(p)


def test_validate():
    assert ok("validate", WPS).startswith("valid: dimension 2, 3 rays, 3 maximal cones, field Q(a)")


def test_dual_basis_output():
    out = ok("dual", "--cone", "tau", WPS)
    assert "alpha_v1 = (1, -1/a)" in out and "alpha_v2 = (0, -1/a)" in out
    assert "v3 = (-1/a, -1/a)" in out


def test_gamma_and_specialized_gamma(tmp_path):
    assert "Gamma of tau: infinite" in ok("gamma", "--cone", "tau", WPS)
    special = write(tmp_path, ok("specialize", "--set", "a=3", WPS))
    assert "finite, order 3" in ok("gamma", "--cone", "tau", special)
    assert "Gamma of sigma: trivial" in ok("gamma", "--cone", "sigma", special)


def test_chart_and_orbits():
    out = ok("chart", "--cone", "v1", "--ambient", "tau", WPS)
    assert "(C x C*)/Gamma" in out and "C[xi1, xi2, xi2^-1]" in out
    rows = ok("orbits", "--cone", "tau", WPS).splitlines()
    assert rows == [
        "0: (C* x C*)/Gamma  zero: none",
        "{v1}: ({0} x C*)/Gamma  zero: z1",
        "{v2}: (C* x {0})/Gamma  zero: z2",
        "tau: ({0} x {0})/Gamma  zero: z1, z2",
    ]


def test_transition():
    out = ok("transition", "--from", "sigma", "--to", "tau", WPS)
    assert out.splitlines()[1:] == ["E = [[1, -1/a], [0, -1/a]]", "[z1*z3^(-1/a) : z3^(-1/a)]"]


def test_atlas():
    out = ok("atlas", SPHERE)
    assert "sigma -> tau: E = [[-a]]  [z1^(-a)]" in out
    assert "verified: 1 inverse pairs, 0 cocycles" in out


def test_morphism_blow_down():
    out = ok("morphism", "--map", "[[1, 0], [0, 1]]", "--target", WPS, example_path("hirzebruch"))
    assert "X[eta in eta] -> X[tau in tau]: E = [[0, 1/a], [1, 1/a]]  [z4^(1/a) : z2*z4^(1/a)]" in out
    assert out.rstrip().endswith("compatibility squares verified: 12")


def test_blowup_output_parses(tmp_path):
    out = ok("blowup", "--ray", "(0, -1)", "--id", "v4", WPS)
    assert "# exceptional: z4 = 0 in tau_v1 maps into {z1 = 0, z2 = 0} of tau" in out
    assert ok("validate", write(tmp_path, out)).startswith("valid: dimension 2, 4 rays, 4 maximal cones")


def test_check_numeric_is_seed_deterministic():
    args = ("check", "--numeric", "--samples", "20", "--seed", "7", WPS)
    first = ok(*args)
    assert first == ok(*args)
    assert first.rstrip().endswith("all checks passed")
    assert first != ok("check", "--numeric", "--samples", "20", "--seed", "8", WPS)


def test_render(tmp_path):
    target = tmp_path / "wps.svg"
    assert ok("render", "--svg", str(target), WPS) == f"wrote {target}\n"
    assert target.read_text().count("<line") == 3
    status, _, err = run(["render", "--svg", str(target), SPHERE])
    assert status == 1 and "UnsupportedDimension" in err


@pytest.mark.parametrize("argv", [
    ["gamma", "--cone", "nope", WPS],
    ["validate", "/nonexistent/file.qtx"],
    ["specialize", "--set", "a=x", WPS],
    ["specialize", "--set", "b=2", WPS],
    ["morphism", "--map", "[[1, 0], [0, 1]]", "--target", SPHERE, WPS],
    ["blowup", "--ray", "(1,", "--id", "w", WPS],
    ["transition", "--from", "sigma", "--to", "v1", WPS],
])
def test_usage_errors_exit_2(argv):
    status, out, err = run(argv)
    assert status == 2 and out == "" and err.startswith("qtx: error: ")


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["check", "--seed", "-1", WPS], ["check", "--samples", "0", WPS]])
def test_argument_errors_exit_2(argv, capsys):
    assert run(argv)[0] == 2


def test_parse_error_exit_2(tmp_path):
    path = write(tmp_path, "ray v1 (1, 0\n")
    status, _, err = run(["validate", path])
    assert status == 2 and err.startswith(f"{path}:1:13: syntax error")


def test_validation_error_exit_1(tmp_path):
    path = write(tmp_path, "ray v1 (1, 0)\nray v2 (0, 1)\nray v3 (1, 1)\ncone s v1 v2\ncone t v1 v3\n")
    status, _, err = run(["validate", path])
    assert status == 1 and "overlap" in err and err.startswith(f"{path}:")


def test_domain_failure_exit_1():
    status, _, err = run(["blowup", "--ray", "(1, 0)", "--id", "w", WPS])
    assert status == 1 and "NotInteriorPoint" in err


def test_main_writes_streams(capsys):
    assert main(["validate", WPS]) == 0
    assert capsys.readouterr().out.startswith("valid:")
