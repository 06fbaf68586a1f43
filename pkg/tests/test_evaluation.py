from __future__ import annotations

import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from agentlab.core.types import Trajectory
from agentlab.errors import ConfigError, InsufficientRuns, SchemaError
from agentlab.evaluation.cli import main, parse_metric
from agentlab.evaluation.config import HarnessConfig, client_factory
from agentlab.evaluation.dataset import Question, load_dataset, parse_record
from agentlab.evaluation.metrics import (
    AggregateReport, RunResult, aggregate, majority_vote, pass_at_1_avg, pass_at_k, round_half_up,
)
from agentlab.evaluation.runner import bench, group_results, load_results, run_question
from agentlab.evaluation.scoring import exact_match, is_retryable, normalize_text, parse_number
from helpers import run_golden, tree_bytes


# dataset

def test_load_golden_dataset(fixtures):
    qs = load_dataset(fixtures / "golden" / "dataset.jsonl")
    assert [q.task_id for q in qs] == ["q1", "q2", "q3", "q4", "q5", "q6"]
    assert [q.level for q in qs] == [1, 1, 1, 2, 2, 3]
    assert qs[3].file_name == "q4.txt" and qs[0].file_name is None


def test_parse_problem_answer_shape():
    q = parse_record({"problem": "Who?", "answer": "Ada"}, 7)
    assert (q.task_id, q.level, q.true_answer) == ("bc-7", 1, "Ada")


@pytest.mark.parametrize(
    "lines",
    [
        ['{"task_id": "a", "Question": "q", "Level": 4, "Final answer": "x"}'],
        ['{"task_id": "a", "Question": "q", "Level": 1, "Final answer": ""}'],
        ['{"task_id": "a", "Question": "q", "Level": true, "Final answer": "x"}'],
        ['{"task_id": "a", "Question": "q", "Level": 1}'],
        ["[1, 2]"],
        ["{not json"],
        ['{"task_id": "a", "Question": "q", "Level": 1, "Final answer": "x"}'] * 2,
    ],
)
def test_dataset_schema_errors(tmp_path, lines):
    p = tmp_path / "d.jsonl"
    p.write_text("\n".join(lines) + "\n")
    with pytest.raises(SchemaError):
        load_dataset(p)


# scoring

@pytest.mark.parametrize(
    "answer,truth,expected",
    [
        ("Paris", "paris", True),
        ("  New   York ", "new york", True),
        ("1,234", "1234", True),
        ("$1,234", "1234", True),
        ("50%", "50", True),
        ("42.0", "42", True),
        ("3", "4", False),
        ("a, b", "a; b", True),
        ("b; a", "a; b", False),
        ("1,000; 2", "1000; 2", False),
        ("a", "a, b", False),
        ("Paris", "Lyon", False),
        ("", "x", False),
        ("inf", "inf", True),
    ],
)
def test_exact_match_examples(answer, truth, expected):
    assert exact_match(answer, truth) is expected


answers = st.one_of(
    st.text(max_size=20),
    st.integers(-10**6, 10**6).map(lambda n: f"{n:,}"),
    st.lists(st.sampled_from(["a", "B", " 1", "2.0"]), min_size=1, max_size=3).map("; ".join),
)


@given(answers, answers)
def test_exact_match_symmetric(a, b):
    assert exact_match(a, b) == exact_match(b, a)


@given(answers)
def test_exact_match_reflexive(a):
    assert exact_match(a, a)


def test_parse_number_and_normalize():
    assert parse_number(" 1e3 ") == 1000.0
    assert parse_number("nan") is None and parse_number("12abc") is None
    assert normalize_text("  A\tB  ") == "a b"


@pytest.mark.parametrize(
    "answer,expected",
    [("", True), ("   ", True), (None, True), ("Unable to determine", True),
     ("I was UNABLE TO DETERMINE it", True), ("42", False), ("wrong", False)],
)
def test_is_retryable(answer, expected):
    assert is_retryable(answer) is expected


# run_question

Q = Question(task_id="t", question="q", level=2, true_answer="42")


def scripted(outputs):
    calls = []

    def solve(question, run_index, attempt):
        calls.append(attempt)
        out = outputs[min(attempt, len(outputs) - 1)]
        if isinstance(out, Exception):
            raise out
        return out

    return solve, calls


def test_retry_until_definite_answer():
    solve, calls = scripted(["", "Unable to determine", "42"])
    r = run_question(Q, solve, max_retries=2)
    assert r.correct and r.retries_used == 2 and calls == [0, 1, 2]


def test_wrong_answer_is_not_retried():
    solve, calls = scripted(["41", "42"])
    r = run_question(Q, solve)
    assert not r.correct and r.answer == "41" and calls == [0]


def test_retry_budget_exhausted():
    solve, calls = scripted([""])
    r = run_question(Q, solve, max_retries=2)
    assert calls == [0, 1, 2] and r.answer == "" and not r.correct


def test_solver_exception_counts_as_empty():
    solve, calls = scripted([RuntimeError("boom"), "42"])
    assert run_question(Q, solve).correct and calls == [0, 1]


def test_negative_retries_rejected():
    with pytest.raises(ValueError):
        run_question(Q, scripted(["x"])[0], max_retries=-1)


def test_trajectories_written_per_attempt(tmp_path):
    traj = Trajectory(task_id="t", final_answer="42", stop_reason="final_answer")
    r = run_question(Q, lambda q, run, att: traj, run_index=1, out_dir=tmp_path, config_hash="h")
    assert r.trajectory_path == "trajectories/t.run1.attempt0.jsonl"
    assert (tmp_path / r.trajectory_path).is_file()


@given(st.lists(st.sampled_from(["", "  ", "unable to determine", "42", "7", "x"]), min_size=1, max_size=6),
       st.integers(0, 4))
def test_retry_protocol_property(outputs, max_retries):
    solve, calls = scripted(outputs)
    r = run_question(Q, solve, max_retries=max_retries)
    seen = [outputs[min(a, len(outputs) - 1)] for a in calls]
    # every attempt but the last was retryable, and the last is final
    assert all(is_retryable(o) for o in seen[:-1])
    assert len(calls) == max_retries + 1 or not is_retryable(seen[-1])
    assert r.answer == seen[-1] and r.retries_used == len(calls) - 1


# metrics

def rr(tid, flags, level=1, answers=None, truth="x"):
    answers = answers or ["x" if f else "y" for f in flags]
    return [RunResult(tid, i, a, f, level=level, true_answer=truth) for i, (a, f) in enumerate(zip(answers, flags))]


def test_pass_at_k_examples():
    res = {"a": [False, True, False], "b": [False, False, False], "c": [True, True, True]}
    assert pass_at_k(res, 1) == pytest.approx(100 / 3)
    assert pass_at_k(res, 2) == pytest.approx(200 / 3)
    with pytest.raises(InsufficientRuns):
        pass_at_k(res, 4)
    assert pass_at_1_avg(res, 3) == pytest.approx(400 / 9)


def test_majority_vote_examples():
    assert majority_vote(["Paris", "paris", "Lyon"]) == "Paris"
    assert majority_vote(["a", "b"]) == "a"
    assert majority_vote(["1,000", "7", "1000"]) == "1,000"
    with pytest.raises(ValueError):
        majority_vote([])


def test_round_half_up():
    assert round_half_up(0.125) == 0.13
    assert round_half_up(200 / 3) == 66.67
    assert round_half_up(Fraction(2675, 1000)) == 2.68
    assert round_half_up(2.675) == 2.67  # the float is just below 2.675


def test_aggregate_per_level():
    grouped = {
        "a": rr("a", [True, False]), "b": rr("b", [False, False]),
        "c": rr("c", [True, True], level=3),
    }
    rep = aggregate(grouped, "pass@k", 2)
    assert rep.per_level == {1: 50.0, 3: 100.0} and rep.average == 66.67 and rep.counts == {1: 2, 3: 1}
    assert rep.label == "pass@2 (correct in any of 2 runs)"
    vote = aggregate(grouped, "majority_vote", 2)
    assert vote.average == 66.67  # "a" ties x/y and the earlier "x" wins
    with pytest.raises(ValueError):
        aggregate(grouped, "best", 2)


def test_report_rejects_bad_percentages():
    with pytest.raises(ValueError):
        AggregateReport("pass@k", 1, 101.0, {})


@given(st.dictionaries(st.text("abcdef", min_size=1, max_size=3),
                       st.tuples(st.integers(1, 3), st.lists(st.booleans(), min_size=3, max_size=3)),
                       min_size=1, max_size=12),
       st.sampled_from(["pass@1_avg", "pass@k", "majority_vote"]))
def test_average_is_weighted_mean_of_levels(table, metric):
    grouped = {tid: rr(tid, flags, level) for tid, (level, flags) in table.items()}
    rep = aggregate(grouped, metric, 3)
    weighted = sum(rep.per_level[lv] * n for lv, n in rep.counts.items()) / rep.n_questions
    assert abs(rep.average - weighted) <= 0.01
    assert rep.n_questions == len(table) == sum(rep.counts.values())


# bench

def test_bench_in_memory(tmp_path):
    qs = [Question("a", "q", 1, "1"), Question("b", "q", 2, "2")]
    out = bench(qs, lambda q, run, att: q.true_answer if run == 0 else "0", runs=2, metric="pass@k",
                out_dir=tmp_path, workers=2)
    assert out.primary.average == 100.0 and out.reports[0].average == 50.0
    lines = (tmp_path / "results.jsonl").read_text().splitlines()
    assert [(json.loads(x)["task_id"], json.loads(x)["run_index"]) for x in lines] == [("a", 0), ("a", 1), ("b", 0), ("b", 1)]
    assert group_results(load_results(tmp_path / "results.jsonl")).keys() == {"a", "b"}


def test_bench_argument_checks():
    qs = [Question("a", "q", 1, "1")]
    with pytest.raises(ValueError):
        bench(qs, lambda *a: "1", runs=0)
    with pytest.raises(ValueError):
        bench(qs, lambda *a: "1", runs=2, k=3)
    with pytest.raises(ValueError):
        bench(qs, lambda *a: "1", metric="top1")


# config

@pytest.mark.parametrize(
    "text",
    [
        "[nonsense]\nx = 1\n",
        "[agent]\nmax_stepz = 3\n",
        "[agent]\nmax_steps = many\n",
        "[model]\nprovider = magic\n",
        "[model]\nprovider = script\n",
        "[tts]\ngamma = 0\n",
        "[eval]\nworkers = 0\n",
        "[agent]\nmax_steps = 0\n",
        "not an ini",
    ],
)
def test_config_errors(text):
    with pytest.raises(ConfigError):
        HarnessConfig.from_text(text).agent_config()


def test_config_hash_and_paths(tmp_path):
    a = HarnessConfig.from_text("[agent]\nseed = 1\n", base_dir=tmp_path)
    b = HarnessConfig.from_text("[agent]\nseed=1\n", base_dir="/elsewhere")
    assert a.config_hash == b.config_hash != HarnessConfig.default().config_hash
    c = HarnessConfig.from_text("[search]\ncassettes = tapes\n", base_dir=tmp_path)
    assert c.path("search", "cassettes") == tmp_path / "tapes"


def test_script_client_factory(tmp_path):
    (tmp_path / "s.json").write_text(json.dumps({"tasks": {"t": [[["A"], ["B"]], [["C"]]]}, "default": ["D"]}))
    make = client_factory(HarnessConfig.from_text("[model]\nprovider = script\nscript = s.json\n", tmp_path))
    reply = lambda tid, run, att: make(tid, run, att).complete([{"role": "user", "content": "x"}], None)
    assert [reply("t", 0, 0), reply("t", 0, 1), reply("t", 0, 5), reply("t", 1, 0), reply("t", 9, 0), reply("u", 0, 0)] == [
        "A", "B", "B", "C", "C", "D"]


def test_parse_metric():
    assert parse_metric("pass@1", None, 3) == ("pass@1_avg", 3)
    assert parse_metric("pass@k", None, 3) == ("pass@k", 3)
    assert parse_metric("pass@2", None, 3) == ("pass@k", 2)
    assert parse_metric("vote", None, 3) == ("majority_vote", 3)


# CLI

def test_cli_golden_matches_expected(fixtures, tmp_path, capsys):
    assert run_golden(fixtures, tmp_path / "out") == 0
    assert "primary: pass@3 (correct in any of 3 runs)" in capsys.readouterr().out
    assert tree_bytes(tmp_path / "out") == tree_bytes(fixtures / "golden" / "expected")


def test_cli_report_recomputes(fixtures, tmp_path, capsys):
    assert main(["report", "--in", str(fixtures / "golden" / "expected")]) == 0
    out = capsys.readouterr().out
    assert "questions: 6 (level 1: 3, level 2: 2, level 3: 1)" in out and "83.33" in out
    assert main(["report", "--in", str(fixtures / "golden" / "expected"), "--metric", "vote"]) == 0
    assert "primary: majority vote over 3 runs" in capsys.readouterr().out


def test_cli_report_write_round_trip(fixtures, tmp_path):
    out = tmp_path / "out"
    run_golden(fixtures, out)
    before = tree_bytes(out)
    assert main(["report", "--in", str(out), "--write"]) == 0
    assert tree_bytes(out) == before


def test_cli_run(tmp_path, capsys):
    (tmp_path / "s.json").write_text(json.dumps({"default": ["FINAL ANSWER: 12"]}))
    cfg = tmp_path / "c.ini"
    cfg.write_text("[model]\nprovider = script\nscript = s.json\n[agent]\nplanning = false\n")
    traj = tmp_path / "t.jsonl"
    assert main(["run", "--task", "6 times 2?", "--config", str(cfg), "--trajectory", str(traj)]) == 0
    assert capsys.readouterr().out.strip() == "12"
    assert traj.read_text().strip()


def test_cli_errors_exit_2(tmp_path, capsys):
    assert main(["bench", "--dataset", str(tmp_path / "none.jsonl"), "--out", str(tmp_path / "o")]) == 2
    assert main(["report", "--in", str(tmp_path)]) == 2
    assert "error:" in capsys.readouterr().err


def test_config_inline_comments():
    c = HarnessConfig.from_text("[agent]\nrevision_n = 3   ; revise every 3 steps\n")
    assert c["agent"]["revision_n"] == 3 and c.raw["agent"]["revision_n"] == "3"
