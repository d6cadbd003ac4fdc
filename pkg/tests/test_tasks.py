import itertools
import json
from fractions import Fraction

import numpy as np
import pytest

from sfebounds import tasks
from sfebounds.tasks import (
    MATERIALIZE_CAP,
    SfeTask,
    TaskError,
    a_rand,
    answer_vector,
    b_rand_bruteforce,
    b_rand_closed_form,
    make_family,
    validate_task,
)

ALL_FAMILY_INSTANCES = [
    ("ot", dict(alphabet=2, n=2)),
    ("ot", dict(alphabet=2, n=3)),
    ("ot", dict(alphabet=3, n=2)),
    ("ot", dict(alphabet=2, n=4)),
    ("knot", dict(alphabet=2, n=3, k=2)),
    ("knot", dict(alphabet=2, n=4, k=2)),
    ("knot", dict(alphabet=2, n=4, k=3)),
    ("knot", dict(alphabet=3, n=4, k=2)),
    ("xot", dict(n=1)),
    ("xot", dict(n=2)),
    ("eq", dict(n=3)),
    ("eq", dict(n=5)),
    ("ip", dict(n=2)),
    ("ip", dict(n=3)),
    ("mp", dict(n=4)),
    ("mp", dict(n=10)),
]


def random_table_task(x_size, y_size, b_size, seed, name="random"):
    rng = np.random.default_rng(seed)
    table = tuple(
        tuple(int(v) for v in row) for row in rng.integers(0, b_size, size=(x_size, y_size))
    )
    return SfeTask(name=name, x_size=x_size, y_size=y_size, b_size=b_size, table=table)


def exhaustive_single_query_value(task):
    """Independent oracle: enumerate every deterministic single-query
    strategy (query, observation -> guessed answer tuple) outright."""
    all_vectors = list(itertools.product(range(task.b_size), repeat=task.y_size))
    best = Fraction(0)
    for ystar in range(task.y_size):
        for mapping in itertools.product(all_vectors, repeat=task.b_size):
            wins = sum(
                1
                for x in range(task.x_size)
                if mapping[task.table[x][ystar]] == task.table[x]
            )
            best = max(best, Fraction(wins, task.x_size))
    return best


class TestConstructors:
    def test_xot_n1_table_matches_definition(self):
        task = make_family("xot", n=1)
        assert (task.x_size, task.y_size, task.b_size) == (4, 3, 2)
        for x in range(4):
            x1, x2 = x >> 1, x & 1
            assert task.f(x, 0) == x1
            assert task.f(x, 1) == x2
            assert task.f(x, 2) == x1 ^ x2

    def test_millionaire_huge_is_parametric_only(self):
        task = make_family("mp", n=10**9)
        assert not task.materialized
        assert task.y_size == 10**9 - 1
        assert task.f(0, 0) == 1  # poorest sender: any receiver is at least as rich
        assert task.f(10**9 - 1, 10**9 - 2) == 0

    def test_equality_n2_full_learning(self):
        task = make_family("eq", n=2)
        assert b_rand_bruteforce(task) == 1
        assert b_rand_closed_form(task) == 1

    def test_ot_component_convention(self):
        task = make_family("ot", alphabet=3, n=2)
        # x = 3*x_0 + x_1 with component 0 most significant
        assert task.f(5, 0) == 1 and task.f(5, 1) == 2

    def test_knot_subsets_lexicographic(self):
        task = make_family("knot", alphabet=2, n=4, k=2)
        assert task.y_size == 6
        # y=0 is subset {0,1}: for x = 0b1000 the packed output is (1,0) -> 2
        x = 0b1000
        assert task.f(x, 0) == 2

    def test_ip_skips_zero_string(self):
        task = make_family("ip", n=2)
        assert task.y_size == 3
        # y index 0 stands for string 01
        assert task.f(0b01, 0) == 1
        assert task.f(0b10, 0) == 0

    def test_mp_comparison(self):
        task = make_family("mp", n=4)
        for x in range(4):
            for y in range(3):
                assert task.f(x, y) == int(y >= x)

    @pytest.mark.parametrize(
        "family,params",
        [
            ("knot", dict(alphabet=2, n=3, k=3)),
            ("knot", dict(alphabet=2, n=3, k=4)),
            ("eq", dict(n=1)),
            ("mp", dict(n=1)),
            ("ot", dict(alphabet=0, n=2)),
            ("ot", dict(alphabet=2, n=-1)),
        ],
    )
    def test_invalid_parameters_rejected(self, family, params):
        with pytest.raises(TaskError):
            make_family(family, **params)

    def test_unknown_family_rejected(self):
        with pytest.raises(TaskError):
            make_family("nope", n=3)

    def test_wrong_parameter_names_rejected(self):
        with pytest.raises(TaskError):
            make_family("eq", n=3, alphabet=2)

    def test_materialization_cap_respected(self):
        small = make_family("eq", n=1000)
        assert small.materialized and small.x_size * small.y_size == 10**6
        assert small.x_size * small.y_size <= MATERIALIZE_CAP
        big = make_family("ot", alphabet=2, n=40)
        assert not big.materialized


class TestValidation:
    def test_constructor_output_valid(self):
        task = make_family("eq", n=3)
        assert validate_task(task) == []
        assert sum(len(row) for row in task.table) == 9

    def test_missing_entry_reported(self):
        task = SfeTask("broken", 2, 2, 2, table=((0, 1), (0,)))
        violations = validate_task(task)
        assert any("not total at x=1" in v for v in violations)

    def test_none_entry_reported(self):
        task = SfeTask("broken", 2, 2, 2, table=((0, 1), (0, None)))
        assert any("not total at (1, 1)" in v for v in validate_task(task))

    def test_family_table_mismatch_reported(self):
        good = make_family("ot", alphabet=2, n=2)
        rows = [list(r) for r in good.table]
        rows[0][1] ^= 1
        bad = SfeTask(
            good.name, good.x_size, good.y_size, good.b_size,
            table=tuple(tuple(r) for r in rows), family=good.family,
        )
        violations = validate_task(bad)
        assert any("family/table mismatch at (0, 1)" in v for v in violations)

    def test_out_of_range_entry_reported(self):
        task = SfeTask("broken", 2, 2, 2, table=((0, 1), (0, 5)))
        assert any("outside [0, 2)" in v for v in validate_task(task))

    def test_empty_task_reported(self):
        assert validate_task(SfeTask("empty", 2, 2, 2)) != []

    def test_unmaterialized_family_validates_quickly(self):
        assert validate_task(make_family("mp", n=10**9)) == []

    def test_family_size_mismatch_reported(self):
        good = make_family("eq", n=3)
        bad = SfeTask(good.name, 4, good.y_size, good.b_size, family=good.family)
        assert any("family implies sizes" in v for v in validate_task(bad))


class TestBaselines:
    def test_a_rand_values(self):
        assert a_rand(make_family("ot", alphabet=2, n=2)) == Fraction(1, 2)
        single = SfeTask("one-query", 3, 1, 3, table=((0,), (1,), (2,)))
        assert a_rand(single) == 1
        assert a_rand(make_family("mp", n=10)) == Fraction(1, 9)

    def test_a_rand_times_y_size_is_one(self):
        for family, params in ALL_FAMILY_INSTANCES:
            task = make_family(family, **params)
            assert a_rand(task) * task.y_size == 1

    def test_bruteforce_known_values(self):
        assert b_rand_bruteforce(make_family("ot", alphabet=2, n=3)) == Fraction(1, 4)
        assert b_rand_bruteforce(make_family("eq", n=3)) == Fraction(2, 3)

    def test_bruteforce_random_table_matches_exhaustive_oracle(self):
        task = random_table_task(4, 3, 2, seed=7)
        value = b_rand_bruteforce(task)
        assert value == exhaustive_single_query_value(task)
        assert value == Fraction(3, 4)  # frozen from the oracle

    def test_bruteforce_more_random_tables_match_oracle(self):
        for seed in range(5):
            task = random_table_task(5, 3, 2, seed=100 + seed)
            assert b_rand_bruteforce(task) == exhaustive_single_query_value(task)

    def test_bruteforce_requires_table(self):
        with pytest.raises(TaskError):
            b_rand_bruteforce(make_family("mp", n=10**9))

    def test_closed_form_known_values(self):
        assert b_rand_closed_form(make_family("knot", alphabet=2, n=4, k=2)) == Fraction(1, 4)
        assert b_rand_closed_form(make_family("mp", n=10)) == Fraction(1, 5)
        assert b_rand_closed_form(make_family("ip", n=3)) == Fraction(1, 4)

    def test_closed_form_requires_family(self):
        with pytest.raises(TaskError):
            b_rand_closed_form(random_table_task(2, 2, 2, seed=0))

    def test_families_brute_equals_closed(self):
        for family, params in ALL_FAMILY_INSTANCES:
            task = make_family(family, **params)
            assert b_rand_bruteforce(task) == b_rand_closed_form(task), task.name

    def test_bruteforce_range_and_determination(self):
        for family, params in ALL_FAMILY_INSTANCES:
            task = make_family(family, **params)
            value = b_rand_bruteforce(task)
            assert Fraction(1, task.x_size) <= value <= 1

        # value 1 exactly when some query's answer pins the whole tuple
        eq2 = make_family("eq", n=2)
        assert b_rand_bruteforce(eq2) == 1
        determined = any(
            len({answer_vector(eq2, x) for x in range(eq2.x_size) if eq2.f(x, y) == b}) <= 1
            for y in range(eq2.y_size)
            for b in range(eq2.b_size)
        )
        assert determined

    def test_permuting_inputs_preserves_bruteforce(self):
        rng = np.random.default_rng(3)
        task = random_table_task(6, 4, 3, seed=11)
        base = b_rand_bruteforce(task)
        for _ in range(5):
            perm = rng.permutation(task.x_size)
            shuffled = SfeTask(
                task.name, task.x_size, task.y_size, task.b_size,
                table=tuple(task.table[i] for i in perm),
            )
            assert b_rand_bruteforce(shuffled) == base

    def test_knot_observation_classes_pin_the_answer(self):
        # learning any k components pins the full input, so every
        # observation class holds pairwise-distinct answer tuples
        for params in [dict(alphabet=2, n=4, k=2), dict(alphabet=2, n=3, k=2)]:
            task = make_family("knot", **params)
            for ystar in range(task.y_size):
                classes = {}
                for x in range(task.x_size):
                    classes.setdefault(task.f(x, ystar), []).append(answer_vector(task, x))
                for vectors in classes.values():
                    assert len(set(vectors)) == len(vectors)


class TestAnswerVector:
    def test_row_and_length(self):
        task = make_family("eq", n=4)
        for x in range(4):
            vec = answer_vector(task, x)
            assert len(vec) == task.y_size
            assert vec == tuple(task.f(x, y) for y in range(task.y_size))

    def test_requires_table(self):
        with pytest.raises(TaskError):
            answer_vector(make_family("mp", n=10**9), 0)


class TestSerialization:
    def test_family_form_round_trip(self, tmp_path):
        task = make_family("knot", alphabet=2, n=4, k=2)
        path = tmp_path / "task.json"
        tasks.dump_task(task, path)
        loaded = tasks.load_task(path)
        assert loaded == task

    def test_explicit_form_round_trip(self, tmp_path):
        task = random_table_task(3, 2, 2, seed=5, name="explicit")
        path = tmp_path / "task.json"
        tasks.dump_task(task, path)
        loaded = tasks.load_task(path)
        assert loaded.table == task.table
        assert (loaded.x_size, loaded.y_size, loaded.b_size) == (3, 2, 2)

    def test_explicit_form_schema(self, tmp_path):
        path = tmp_path / "task.json"
        path.write_text(
            json.dumps(
                {
                    "name": "tiny",
                    "x_size": 2,
                    "y_size": 2,
                    "b_size": 2,
                    "table": [[0, 1], [1, 0]],
                }
            )
        )
        task = tasks.load_task(path)
        assert task.f(0, 1) == 1 and task.f(1, 0) == 1

    def test_malformed_documents_rejected(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        with pytest.raises(TaskError):
            tasks.load_task(bad)
        with pytest.raises(TaskError):
            tasks.task_from_jsonable({"name": "x"})
        with pytest.raises(TaskError):
            tasks.task_from_jsonable({"family": "eq", "params": "nope"})
        with pytest.raises(TaskError):
            tasks.task_from_jsonable([1, 2])
