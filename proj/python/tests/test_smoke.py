import numpy as np
import pytest

import fermirep


def test_ladders_anticommute():
    n = 3
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            ac = fermirep.anticommutator(fermirep.annihilation(n, i), fermirep.creation(n, j))
            expected = np.eye(2**n) if i == j else np.zeros((2**n, 2**n))
            assert np.array_equal(ac.to_dense(), expected)


def test_selective_polynomial():
    f = fermirep.selective_function(4, 2)
    assert str(f) == "-x^2 + 4x - 3"
    assert [f(x) for x in (1, 2, 3)] == [0.0, 1.0, 0.0]


def test_quartic_forms_close():
    gens = fermirep.gell_mann()
    ops = fermirep.nssfr_un(gens, 3)
    c = fermirep.structure_constants(gens)
    worst = 0.0
    for i in range(8):
        for j in range(8):
            rhs = sum((c.at(i, j, k) * ops[k] for k in range(8)), fermirep.FockOperator.zero(3))
            worst = max(worst, fermirep.max_abs_diff(fermirep.commutator(ops[i], ops[j]), rhs))
    assert worst < 1e-10


def test_expression_matches_builder():
    ops = fermirep.nssfr_un(fermirep.gell_mann(), 3)
    typed = fermirep.eval_expression("(adag(1)*a(3) + adag(3)*a(1)) * (1 - 2*N(2))", 3)
    assert typed == ops[3]


def test_errors_map_to_python():
    with pytest.raises(fermirep.ParseError):
        fermirep.eval_expression("a(1) +", 3)
    with pytest.raises(ValueError):
        fermirep.annihilation(3, 4)


def test_suite_report():
    report = fermirep.run_suite(3)
    assert report["overall"] is True
    assert all(check["pass"] for check in report["checks"])
