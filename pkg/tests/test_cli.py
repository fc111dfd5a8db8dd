"""Command-line interface: JSON shapes, exit codes, error reporting."""

import json

from padiclie.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    payload = json.loads(out) if out.strip() else None
    error = json.loads(err) if err.strip() else None
    return code, payload, error


def test_classify_json_shape(capsys):
    code, out, err = run(
        capsys, "classify", "--prime", "5", "--matrix", "1,0,0;0,0,2;0,2,0"
    )
    assert code == 0 and err is None
    assert out["family"] == 4
    assert out["s"] == [0, 0, 0]
    assert out["eps"] == [None, None]
    assert out["eta"] == 0
    assert out["qp_type"] == "sl2"
    assert out["canonical_matrix"][0][0] == "1*p^0"
    assert out["canonical_matrix"][0][1] == "0"


def test_classify_roundtrip_of_emitted_matrix(capsys):
    code, out, _ = run(
        capsys, "classify", "--prime", "3", "--matrix", "3,0,0;0,-6,0;0,0,27"
    )
    assert code == 0
    rows = out["canonical_matrix"]
    literal = ";".join(",".join(row) for row in rows)
    code2, out2, _ = run(capsys, "classify", "--prime", "3", "--matrix", literal)
    assert code2 == 0 and out2 == out


def test_eta_reports_both_ingredients(capsys):
    code, out, _ = run(
        capsys, "eta", "--prime", "7", "--matrix", "1,0,0;0,-3,0;0,0,7"
    )
    assert code == 0
    assert out["eta"] == 1
    assert out["eta"] == (out["disc_valuation_parity"] + out["hilbert_sum"]) % 2
    assert out["qp_type"] == "sl1d"


def test_selfsim_yes_carries_certificate(capsys):
    code, out, _ = run(
        capsys, "selfsim", "--prime", "5", "--matrix", "1,0,0;0,0,2;0,2,0"
    )
    assert code == 0
    assert out["selfsim"]["index_p_self_similar"] is True
    assert out["selfsim"]["sigma_lower_exponent"] == 1
    assert out["selfsim"]["sigma_upper_exponent"] == 1
    cert = out["certificate"]
    assert cert["is_morphism"] is True
    assert len(cert["domain"]) == 3 and len(cert["phi"]) == 3


def test_selfsim_no_carries_obstruction(capsys):
    code, out, _ = run(
        capsys, "selfsim", "--prime", "5", "--matrix", "1,0,0;0,-2,0;0,0,25"
    )
    assert code == 0
    assert out["selfsim"]["index_p_self_similar"] is False
    assert out["selfsim"]["sigma_lower_exponent"] == 2
    assert out["selfsim"]["sigma_upper_exponent"] == 2
    assert out["selfsim"]["table_row"] == 5
    assert out["selfsim"]["witness_exponents"] == [0, 0, 1]
    assert "certificate" not in out
    assert "index-p subalgebra" in out["obstruction"]


def test_selfsim_eta1_sentinel(capsys):
    code, out, _ = run(
        capsys, "selfsim", "--prime", "3", "--matrix=-1,0,0;0,2,0;0,0,3"
    )
    assert code == 0
    assert out["selfsim"]["sigma_lower_exponent"] == 2
    assert out["selfsim"]["sigma_upper_exponent"] == "conjectured_infinite"


def test_named_positional_with_conjecture_flag(capsys):
    code, out, _ = run(capsys, "named", "sl1_delta", "--prime", "7")
    assert code == 0
    diag = [out["canonical"]["canonical_matrix"][i][i] for i in range(3)]
    assert diag == ["1*p^0", "-3*p^0", "1*p^1"]
    assert out["canonical"]["eta"] == 1
    assert out["selfsim"]["index_p_self_similar"] is False
    assert out["conjectured"] is True


def test_named_congruence_level(capsys):
    code, out, _ = run(
        capsys, "named", "sl2_congruence", "--prime", "3", "--k", "2"
    )
    assert code == 0
    assert out["canonical"]["family"] == 4
    assert out["canonical"]["s"] == [2, 2, 2]
    assert out["selfsim"]["index_p_self_similar"] is True
    assert out["conjectured"] is False


def test_named_lowdim(capsys):
    code, out, _ = run(
        capsys, "named", "dim2", "--prime", "3", "--k", "1", "--s", "0"
    )
    assert code == 0
    assert out["dim"] == 2
    assert out["is_morphism"] is True
    assert out["invariant_ideal_found"] is False
    assert out["domain"] == [["1*p^1", "0"], ["0", "1*p^0"]]
    code, out, _ = run(capsys, "named", "dim1", "--prime", "5", "--k", "3")
    assert code == 0
    assert out["dim"] == 1 and out["k"] == 3
    assert out["invariant_ideal_found"] is False


def test_lcs_command(capsys):
    code, out, _ = run(
        capsys, "lcs", "--prime", "3", "--matrix", "1,0,0;0,3,0;0,0,-3",
        "--depth", "3",
    )
    assert code == 0
    assert out["s"] == [0, 1, 1]
    assert out["gamma_exponents"] == [[0, 1, 1], [1, 1, 1], [1, 2, 2]]


def test_lcs_abelian_saturates(capsys):
    code, out, _ = run(
        capsys, "lcs", "--prime", "3", "--matrix", "1,0,0;0,1,0;0,0,1",
        "--depth", "2",
    )
    assert code == 0
    assert out["gamma_exponents"][0] == [0, 0, 0]


def test_subalgebras_count(capsys):
    code, out, _ = run(
        capsys, "subalgebras", "--prime", "3", "--matrix", "1,0,0;0,3,0;0,0,-3"
    )
    assert code == 0
    assert out["count"] == 13
    assert len(out["subalgebras"]) == 13
    closed = [r for r in out["subalgebras"] if r["is_subalgebra"]]
    assert closed and all(r["sub_s_invariants"] for r in closed)


def test_report_includes_group_section(capsys):
    code, out, _ = run(
        capsys, "report", "--prime", "3", "--matrix", "3,0,0;0,-6,0;0,0,27"
    )
    assert code == 0
    assert out["group"]["name"] == "G2(1, 3, 1)"
    assert out["group"]["threshold_met"] is False
    assert out["group"]["prime_threshold"] == 5
    assert out["canonical"]["family"] == 2
    assert out["selfsim"]["index_p_self_similar"] is False


def test_exit_codes_and_error_json(capsys):
    # composite prime
    code, out, err = run(
        capsys, "classify", "--prime", "9", "--matrix", "1,0,0;0,1,0;0,0,1"
    )
    assert code == 2 and err["error"] == "InvalidParameters"
    # p = 2 unsupported
    code, _, err = run(
        capsys, "classify", "--prime", "2", "--matrix", "1,0,0;0,1,0;0,0,1"
    )
    assert code == 4 and err["error"] == "UnsupportedPrime"
    # malformed matrix literal
    code, _, err = run(capsys, "classify", "--prime", "3", "--matrix", "1,2;3")
    assert code == 2
    # non-Lie input
    code, _, err = run(
        capsys, "classify", "--prime", "3", "--matrix", "0,1,0;0,0,1;1,0,0"
    )
    assert code == 5 and err["error"] == "NotLie"
    # degenerate input
    code, _, err = run(
        capsys, "classify", "--prime", "3", "--matrix", "1,0,0;0,1,0;0,0,0"
    )
    assert code == 5 and err["error"] == "Degenerate"
    # missing matrix and name
    code, _, err = run(capsys, "classify", "--prime", "3")
    assert code == 2 and err["error"] == "InvalidInput"


def test_endo_check_chain_search(capsys):
    args = [
        "--prime", "3",
        "--matrix", "1,0,0;0,0,2;0,2,0",
        "--domain", "1,0,0;0,3,0;0,0,1",
        "--phi", "1,0,0;0,1,0;0,0,3",
    ]
    code, out, _ = run(capsys, "endo", "check", *args)
    assert code == 0
    assert out["is_morphism"] is True
    assert out["index_exponent"] == 1
    code, out, _ = run(capsys, "endo", "chain", *args, "--depth", "4")
    assert code == 0
    assert out["regular"] is True
    assert out["index_exponents"] == [1, 1, 1, 1]
    assert len(out["chain"]) == 5
    code, out, _ = run(capsys, "endo", "search", *args, "--search-bound", "4")
    assert code == 0
    assert out["witness"] is None
    assert out["simple_up_to_bound"] is True
    assert out["bound_exponent"] == 4


def test_selftest_command(capsys):
    code, out, _ = run(capsys, "selftest", "--prime", "3", "--seed", "7")
    assert code == 0
    assert out["passed"] is True
    res = out["results"]
    assert res["orbit_invariance"]["passed"] == res["orbit_invariance"]["trials"]
    assert res["eta_dual_route"]["passed"] == res["eta_dual_route"]["trials"]


def test_pretty_flag_emits_indented_json(capsys):
    code = main(
        ["classify", "--prime", "5", "--matrix", "1,0,0;0,0,2;0,2,0", "--pretty"]
    )
    out, _ = capsys.readouterr()
    assert code == 0
    assert out.startswith("{\n  ")
