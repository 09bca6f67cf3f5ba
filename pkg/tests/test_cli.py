"""Command-line interface: formats, flags, and exit codes."""

import json

import pytest

from defq.cli import main

from conftest import (
    CONFLICT_KB_TEXT,
    RESIDENCE_KB_TEXT,
    TAXES_KB_TEXT,
)

UNSAT_KB_TEXT = "true |~ a\ntrue |~ !a\n"


@pytest.fixture
def kb_file(tmp_path):
    def write(text, name="kb.txt"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestRank:
    def test_taxes_kb_listing(self, kb_file, capsys):
        code, out, _ = run(capsys, "rank", kb_file(TAXES_KB_TEXT))
        assert code == 0
        assert "0: rank 0" in out
        assert "1: rank 0" in out
        assert "2: rank 1" in out
        assert "order k: 2" in out
        assert "C0: {0, 1, 2}" in out
        assert "C1: {2}" in out
        assert "C2: {}" in out

    def test_infinite_ranks_render_as_inf(self, kb_file, capsys):
        code, out, _ = run(capsys, "rank", kb_file(RESIDENCE_KB_TEXT))
        assert code == 0
        for index in (2, 3, 4):
            assert f"{index}: rank inf" in out

    def test_empty_file(self, kb_file, capsys):
        code, out, _ = run(capsys, "rank", kb_file("# nothing here\n"))
        assert code == 0
        assert "order k: 0" in out

    def test_json_rank_marks_infinite(self, kb_file, capsys):
        code, out, _ = run(capsys, "rank", kb_file(RESIDENCE_KB_TEXT), "--json")
        assert code == 0
        payload = json.loads(out)
        by_index = {d["index"]: d for d in payload["defaults"]}
        assert by_index[0] == {
            "index": 0,
            "conditional": "Italian |~ Residence_in_Italy",
            "rank": 0,
            "infinite": False,
        }
        assert by_index[4]["rank"] is None
        assert by_index[4]["infinite"] is True
        assert payload["order_k"] == 1


class TestQuery:
    def test_mp_accepts_and_rc_rejects(self, kb_file, capsys):
        path = kb_file(TAXES_KB_TEXT)
        code, out, _ = run(capsys, "query", path, "Employee & Student |~ Young", "--method", "mp")
        assert (code, out.strip()) == (0, "yes")
        code, out, _ = run(capsys, "query", path, "Employee & Student |~ Young", "--method", "rc")
        assert (code, out.strip()) == (0, "no")

    def test_lc_and_mp_split_on_swimmers(self, kb_file, capsys):
        from conftest import SWIMMER_KB_TEXT

        path = kb_file(SWIMMER_KB_TEXT)
        query = "Olympic_Swimmer & Adult & Employee |~ !Young"
        code, out, _ = run(capsys, "query", path, query, "--method", "lc")
        assert (code, out.strip()) == (0, "yes")
        code, out, _ = run(capsys, "query", path, query, "--method", "mp")
        assert (code, out.strip()) == (0, "no")

    def test_json_result_contains_evidence(self, kb_file, capsys):
        path = kb_file(CONFLICT_KB_TEXT)
        code, out, _ = run(
            capsys, "query", path, "Employee & Student |~ Busy", "--method", "mp", "--json"
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["answer"] is True
        assert payload["method"] == "mp"
        assert payload["query"] == "Employee & Student |~ Busy"
        assert payload["evidence"]["bases"] == [[0, 1, 3], [2, 3]]
        assert "elapsed_ms" in payload

    def test_json_output_is_stable(self, kb_file, capsys):
        path = kb_file(CONFLICT_KB_TEXT)
        outputs = []
        for _ in range(2):
            _, out, _ = run(
                capsys, "query", path, "Employee & Student |~ Busy", "--method", "mpr", "--json"
            )
            payload = json.loads(out)
            payload.pop("elapsed_ms")
            outputs.append(json.dumps(payload, sort_keys=True))
        assert outputs[0] == outputs[1]

    def test_explain_lists_relevant_trace(self, kb_file, capsys):
        path = kb_file(RESIDENCE_KB_TEXT)
        code, out, _ = run(
            capsys,
            "query",
            path,
            "Italian & German |~ Has_Residence",
            "--method",
            "basic-relevant",
            "--explain",
        )
        assert code == 0
        assert out.splitlines()[0] == "no"
        assert "justifications: [[0, 1, 4]]" in out
        assert "removed: [0, 1]" in out

    def test_parse_error_exits_2(self, kb_file, capsys):
        path = kb_file(TAXES_KB_TEXT)
        code, _, err = run(capsys, "query", path, "Employee & |~ Young", "--method", "rc")
        assert code == 2
        assert "parse error" in err

    def test_kb_error_reports_line_number(self, kb_file, capsys):
        path = kb_file("Student |~ Young\nbroken line\n")
        code, _, err = run(capsys, "rank", path)
        assert code == 2
        assert "line 2" in err

    def test_missing_file_exits_2(self, capsys):
        code, _, err = run(capsys, "rank", "/nonexistent/kb.txt")
        assert code == 2

    def test_unsatisfiable_kb_exits_3_for_model_methods(self, kb_file, capsys):
        path = kb_file(UNSAT_KB_TEXT)
        code, _, err = run(capsys, "query", path, "a |~ a", "--method", "mpr")
        assert code == 3
        assert "unsatisfiable" in err

    def test_unsatisfiable_kb_is_fine_for_syntactic_methods(self, kb_file, capsys):
        path = kb_file(UNSAT_KB_TEXT)
        code, out, _ = run(capsys, "query", path, "a |~ a", "--method", "rc")
        assert (code, out.strip()) == (0, "yes")

    def test_atom_cap_exits_4(self, kb_file, capsys):
        path = kb_file(TAXES_KB_TEXT)
        code, _, err = run(
            capsys, "query", path, "Student |~ Young", "--method", "rc", "--max-atoms", "2"
        )
        assert code == 4
        assert "size cap" in err

    def test_default_cap_exits_4(self, kb_file, capsys):
        path = kb_file(TAXES_KB_TEXT)
        code, _, err = run(capsys, "rank", path, "--max-defaults", "2")
        assert code == 4


class TestBases:
    def test_conflict_kb_set_ordering_bases(self, kb_file, capsys):
        path = kb_file(CONFLICT_KB_TEXT)
        code, out, _ = run(capsys, "bases", path, "Employee & Student", "--method", "mp")
        assert code == 0
        assert out.splitlines() == ["{0, 1, 3}", "{2, 3}"]

    def test_conflict_kb_count_ordering_basis(self, kb_file, capsys):
        path = kb_file(CONFLICT_KB_TEXT)
        code, out, _ = run(capsys, "bases", path, "Employee & Student", "--method", "lc")
        assert code == 0
        assert out.splitlines() == ["{0, 1, 3}"]

    def test_infinite_rank_antecedent(self, kb_file, capsys):
        path = kb_file(RESIDENCE_KB_TEXT)
        code, out, _ = run(
            capsys, "bases", path, "Residence_in_Italy & !Has_Residence", "--method", "mp"
        )
        assert code == 0
        assert "infinite rank" in out


class TestModel:
    def test_taxes_kb_dump_matches_strata(self, kb_file, capsys):
        path = kb_file(TAXES_KB_TEXT)
        code, out, _ = run(capsys, "model", path)
        assert code == 0
        lines = out.splitlines()
        assert len(lines) == 16
        assert sum("rc=0" in line for line in lines) == 9
        assert sum("rc=1" in line for line in lines) == 5
        assert sum("rc=2" in line for line in lines) == 2
        atom_lists = [
            tuple(part for part in line.split("}")[0].strip("{").split(", ") if part)
            for line in lines
        ]
        assert atom_lists == sorted(atom_lists)  # sorted by true-atom list

    def test_dump_carries_violations_and_heights(self, kb_file, capsys):
        path = kb_file(TAXES_KB_TEXT)
        code, out, _ = run(capsys, "model", path, "--which", "mpr")
        assert code == 0
        line = next(
            l for l in out.splitlines()
            if l.startswith("{Employee, Pay_Taxes, Student}")
        )
        assert "rc=1" in line and "fr=2" in line and "violated={0, 1}" in line

    def test_unsatisfiable_kb_exits_3(self, kb_file, capsys):
        code, _, err = run(capsys, "model", kb_file(UNSAT_KB_TEXT))
        assert code == 3


class TestCompare:
    def test_renders_all_six_methods(self, kb_file, capsys):
        path = kb_file(CONFLICT_KB_TEXT)
        code, out, _ = run(capsys, "compare", path, "Employee & Student |~ Young & !Pay_Taxes")
        assert code == 0
        assert out.splitlines() == [
            "rc: no",
            "mp: no",
            "lc: yes",
            "basic-relevant: no",
            "minimal-relevant: no",
            "mpr: yes",
        ]

    def test_redundant_kb_split_between_lc_and_mpr(self, kb_file, capsys):
        from conftest import REDUNDANT_KB_TEXT

        path = kb_file(REDUNDANT_KB_TEXT)
        code, out, _ = run(capsys, "compare", path, "a & c |~ e")
        rows = dict(line.split(": ") for line in out.splitlines())
        assert rows["lc"] == "yes"
        assert rows["mpr"] == "no"


class TestCheck:
    def test_random_mode_reports_clean_summary(self, capsys):
        code, out, _ = run(capsys, "check", "--random", "--seed", "7", "--count", "3")
        assert code == 0
        lines = out.splitlines()
        assert sum(line.startswith("trial=") for line in lines) == 3
        assert lines[-1].startswith("summary trials=3")
        assert "violations=0" in lines[-1]

    def test_file_mode_runs_generated_queries(self, kb_file, capsys):
        path = kb_file(CONFLICT_KB_TEXT)
        code, out, _ = run(capsys, "check", path, "--count", "4")
        assert code == 0
        lines = out.splitlines()
        assert sum(line.startswith("query ") for line in lines) == 4
        assert lines[-1].startswith("summary queries=4 violations=0")

    def test_check_requires_file_or_random(self, capsys):
        with pytest.raises(SystemExit):
            main(["check"])
