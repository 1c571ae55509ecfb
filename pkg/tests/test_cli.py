import json
import math

import pytest

from mulint import cli
from mulint.errors import ToleranceNotMetError
from mulint.service import handlers


def run_cli(capsys, *argv):
    code = cli.run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestIntegrate:
    def test_e66_all_values_one(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "integrate",
            "--function",
            "exp(1/z)",
            "--curve",
            "circle 0 0 1",
            "--n",
            "-2..2",
        )
        assert code == 0
        body = json.loads(out)
        assert body["cardinality"] == "single"
        for v in body["values"]:
            assert abs(complex(v["re"], v["im"]) - 1.0) < 1e-9

    def test_window_spec_with_negative_lo(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "integrate",
            "--function", "exp(z)",
            "--curve", "segment 0 0 1 0",
            "--n", "-3..3",
        )
        assert code == 0
        assert [v["n"] for v in json.loads(out)["values"]] == list(range(-3, 4))

    def test_byte_identical_reruns(self, capsys):
        argv = [
            "integrate",
            "--function", "exp(c*exp(z))",
            "--const", "c=0.3+0.2i",
            "--curve", "circle 0 0 1",
        ]
        code1, out1, _ = run_cli(capsys, *argv)
        code2, out2, _ = run_cli(capsys, *argv)
        assert code1 == code2 == 0
        assert out1 == out2

    def test_zero_on_curve_exit_1(self, capsys):
        code, _, err = run_cli(
            capsys, "integrate", "--function", "z-1", "--curve", "circle 0 0 1"
        )
        assert code == 1
        assert "[track]" in err

    def test_function_not_vanishing_on_circle_ok(self, capsys):
        code, _, _ = run_cli(
            capsys, "integrate", "--function", "z", "--curve", "circle 0 0 1"
        )
        assert code == 0

    def test_parse_error_exit_2(self, capsys):
        code, _, err = run_cli(
            capsys, "integrate", "--function", "exp(", "--curve", "circle 0 0 1"
        )
        assert code == 2
        assert "[parse]" in err

    def test_bad_n_window_exit_2(self, capsys):
        code, _, _ = run_cli(
            capsys,
            "integrate",
            "--function", "exp(z)",
            "--curve", "segment 0 0 1 0",
            "--n", "junk",
        )
        assert code == 2

    def test_usage_error_exit_2(self, capsys):
        assert cli.run(["integrate", "--curve", "circle 0 0 1"]) == 2
        capsys.readouterr()

    def test_tolerance_not_met_exit_3(self, capsys, monkeypatch):
        def boom(req):
            raise ToleranceNotMetError("no convergence", estimate=0j, est_error=1.0)

        monkeypatch.setattr(handlers, "handle_integrate", boom)
        code, _, err = run_cli(
            capsys, "integrate", "--function", "exp(z)", "--curve", "segment 0 0 1 0"
        )
        assert code == 3
        assert "[quadrature]" in err

    def test_csv_format(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "integrate",
            "--function", "exp(z)",
            "--curve", "segment 0 0 1 0",
            "--n", "0..1",
            "--format", "csv",
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "n,re,im"
        assert len(lines) == 3

    def test_output_file(self, capsys, tmp_path):
        path = tmp_path / "result.json"
        code, out, _ = run_cli(
            capsys,
            "integrate",
            "--function", "exp(z)",
            "--curve", "segment 0 0 1 0",
            "--output", str(path),
        )
        assert code == 0
        assert out == ""
        assert json.loads(path.read_text())["cardinality"] == "single"


def test_star_deriv_example(capsys):
    code, out, _ = run_cli(
        capsys,
        "star-deriv",
        "--function", "exp(c*z)",
        "--const", "c=1+2i",
        "--at", "0.5+0.5i",
    )
    assert code == 0
    value = json.loads(out)["value"]
    import cmath

    assert cmath.isclose(complex(value["re"], value["im"]), cmath.exp(1 + 2j), rel_tol=1e-12)


def test_line_integrate_example(capsys):
    code, out, _ = run_cli(
        capsys,
        "line-integrate",
        "--function", "2",
        "--curve", "segment 0 0 1 0",
        "--diff", "dx",
    )
    assert code == 0
    assert math.isclose(json.loads(out)["value"], 2.0, rel_tol=1e-12)


def test_riemann_subcommand(capsys):
    code, out, _ = run_cli(
        capsys,
        "riemann",
        "--function", "exp(1/z)",
        "--curve", "circle 0 0 1",
        "--m", "4096",
    )
    assert code == 0
    value = json.loads(out)["value"]
    assert abs(complex(value["re"], value["im"]) - 1.0) < 1e-5


def test_sample_csv_header(capsys):
    code, out, _ = run_cli(
        capsys, "sample", "--function", "z", "--curve", "circle 0 0 1"
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "t,re_z,im_z,re_f,im_f,abs_f,theta_unwrapped"
    # unwrapped phase reaches 2*pi at the end of the loop
    assert math.isclose(float(lines[-1].split(",")[6]), 2 * math.pi, abs_tol=1e-9)


def test_verify_subcommand(capsys):
    code, out, _ = run_cli(capsys, "verify", "--suite", "line-ftc")
    assert code == 0
    body = json.loads(out)
    assert body["reports"][0]["passed"] is True


def test_verify_failure_exit_code(capsys, monkeypatch):
    from mulint.service.schemas import SuiteReport, VerifyResponse

    def fake(req):
        return VerifyResponse(
            reports=[
                SuiteReport(
                    suite="ftc",
                    fixtures=1,
                    max_residual=1.0,
                    tolerance=1e-8,
                    passed=False,
                    failures=[],
                )
            ]
        )

    monkeypatch.setattr(handlers, "handle_verify", fake)
    code, _, _ = run_cli(capsys, "verify", "--suite", "ftc")
    assert code == 1


def test_unknown_subcommand_exit_2(capsys):
    assert cli.run(["frobnicate"]) == 2
    capsys.readouterr()


class TestRemote:
    """--url mode routes the same requests over HTTP."""

    @pytest.fixture()
    def fake_httpx(self, monkeypatch):
        from fastapi.testclient import TestClient

        from mulint.service import app

        test_client = TestClient(app)

        def fake_post(url, json=None, timeout=None):
            path = url.replace("http://server", "")
            return test_client.post(path, json=json)

        import httpx

        monkeypatch.setattr(httpx, "post", fake_post)

    def test_integrate_remote_matches_local(self, capsys, fake_httpx):
        argv = [
            "integrate",
            "--function", "exp(1/z)",
            "--curve", "circle 0 0 1",
            "--n", "0..1",
        ]
        code_local, out_local, _ = run_cli(capsys, *argv)
        code_remote, out_remote, _ = run_cli(capsys, *argv, "--url", "http://server")
        assert code_local == code_remote == 0
        assert out_local == out_remote

    def test_remote_domain_error_exit_1(self, capsys, fake_httpx):
        code, _, err = run_cli(
            capsys,
            "integrate",
            "--function", "z-1",
            "--curve", "circle 0 0 1",
            "--url", "http://server",
        )
        assert code == 1

    def test_remote_sample_passthrough(self, capsys, fake_httpx):
        code, out, _ = run_cli(
            capsys,
            "sample",
            "--function", "z",
            "--curve", "arc 0 0 1 0 pi/2",
            "--url", "http://server",
        )
        assert code == 0
        assert out.splitlines()[0] == "t,re_z,im_z,re_f,im_f,abs_f,theta_unwrapped"
