import json

import pytest

import lengthgen as lg


def test_solve_parity_and_program():
    assert lg.solve("> > > 0 1 1 0 1 ==") == ("1", "0 1 0 0 1")
    answer, trace = lg.solve("a = True\nb = False\nb = a\nb = not b\nprint(b)")
    assert answer == "False"
    assert trace.endswith("print(b)\n# b = False")


def test_generators_are_seeded_and_valid():
    a = lg.gen_parity(3, 20, 50, seed=4)
    assert a == lg.gen_parity(3, 20, 50, seed=4)
    assert all(3 <= x.metrics.num_steps <= 20 for x in a)
    progs = lg.gen_boolprog(50, seed=1, split="diverse", min_ops=16, max_ops=32)
    coins = lg.gen_parity(3, 9, 20, seed=2, format="coinflip")
    ones = lg.gen_parity_ones(30, 1, 30, 40, seed=3, format="padded")
    assert lg.validate(a + progs + coins + ones) == []
    for p in progs:
        assert lg.exec_program(p.input_text) == (p.answer == "True")
        assert lg.graph_depth(p.input_text) == p.metrics.graph_depth


def test_json_round_trip(tmp_path):
    data = lg.gen_boolprog(10, seed=8, shuffled=True)
    path = str(tmp_path / "d.jsonl")
    assert lg.write_dataset(data, path) == 10
    assert lg.read_dataset(path) == data
    assert lg.TaskInstance.from_json(data[0].to_json()) == data[0]
    assert json.loads(data[0].to_json())["task"] == "boolprog"


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        lg.gen_parity(5, 3, 1)
    with pytest.raises(lg.SemanticError):
        lg.exec_program("b = a\nprint(b)")
    with pytest.raises(lg.ConfigError):
        lg.evaluate([], adapter="nonsense")


def test_perfect_and_noisy_evaluation():
    data = lg.gen_parity(3, 30, 400, seed=5)
    records = lg.evaluate(data, "perfect", parallelism=4, shots=2)
    assert len(records) == 400 and all(r["final_correct"] for r in records)

    data = lg.gen_parity(10, 10, 3000, seed=6)
    text = lg.eval_jsonl(data, "noisy:eps=0.1", parallelism=4)
    (row,) = lg.accuracy_table(text, "num_steps")
    assert abs(row["final_acc"] - lg.parity_closed_form(0.1, 10)) < 0.03
    assert abs(row["prefix"][4] - lg.prefix_closed_form(0.1, 5)) < 0.03


def test_fit_recovers_epsilon():
    data = [x for n in (4, 8, 12, 16) for x in lg.gen_parity(n, n, 1000, seed=n)]
    eps, _ = lg.fit_step_error(lg.eval_jsonl(data, "noisy:eps=0.1,seed=3"))
    assert abs(eps - 0.1) < 0.02


def test_direct_style_shortcut():
    data = lg.gen_parity_ones(30, 10, 20, 200, seed=9)
    records = lg.evaluate(data, "shortcut:10-20", style="direct")
    assert all(r["final_correct"] for r in records)
