from __future__ import annotations

import pytest

from hallrud import suites as S


@pytest.mark.parametrize("name", S.SUITES)
def test_suites_build(name):
    cases = S.suite_cases(name, q=2)
    assert cases
    assert len({c.label for c in cases}) == len(cases)


def test_unknown_suite():
    with pytest.raises(S.UnknownSuite):
        S.suite_cases("nope")


def test_case_record():
    case = S.szanto_cases(2, 1)[0]
    rec = case.run()
    assert rec["holds"] is True and rec["suite"] == "szanto" and rec["description"]
    assert case.label.endswith("@q=2")


def test_polynomial_params_are_serialised():
    case = next(c for c in S.relsummary_cases(2, 0) if "phi" in c.params)
    assert isinstance(case.run()["params"]["phi"], str)


def test_failing_case_is_reported():
    rec = S.Case("custom", "always-false", {}, None, lambda: False).run()
    assert rec["holds"] is False
