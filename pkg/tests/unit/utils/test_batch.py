"""
Tests for the job runner.

These tests ensure that:
1. Outcomes come back in input order
2. Errors are raised or recorded depending on on_error
3. Statistics are counted correctly
4. The process pool gives the same results as the in-process loop
"""

import pytest

from soliton_lab.utils.batch import JobOutcome, run_jobs


def _square(x):
    return x * x


def _fail_on_three(x):
    if x == 3:
        raise ValueError("three")
    return x


class TestRunJobs:
    """Tests for run_jobs()."""

    def test_results_in_input_order(self):
        outcomes, stats = run_jobs([3, 1, 2], _square)

        assert [o.result for o in outcomes] == [9, 1, 4]
        assert [o.item for o in outcomes] == [3, 1, 2]
        assert stats == {"total": 3, "succeeded": 3, "failed": 0}

    def test_empty_input(self):
        outcomes, stats = run_jobs([], _square)

        assert outcomes == []
        assert stats["total"] == 0

    def test_raise_on_error_by_default(self):
        with pytest.raises(ValueError, match="three"):
            run_jobs([1, 2, 3, 4], _fail_on_three)

    def test_continue_records_errors(self):
        outcomes, stats = run_jobs([1, 3, 4], _fail_on_three, on_error="continue")

        assert [o.ok for o in outcomes] == [True, False, True]
        assert isinstance(outcomes[1].error, ValueError)
        assert outcomes[1].result is None
        assert stats == {"total": 3, "succeeded": 2, "failed": 1}

    def test_process_pool_matches_sequential(self):
        sequential, _ = run_jobs(list(range(6)), _square)
        pooled, stats = run_jobs(list(range(6)), _square, max_workers=2)

        assert [o.result for o in pooled] == [o.result for o in sequential]
        assert stats["succeeded"] == 6

    def test_process_pool_continue(self):
        outcomes, stats = run_jobs([1, 3], _fail_on_three, max_workers=2, on_error="continue")

        assert outcomes[0].result == 1
        assert not outcomes[1].ok
        assert stats["failed"] == 1


class TestJobOutcome:
    """Tests for JobOutcome."""

    def test_ok_without_error(self):
        assert JobOutcome(item=1, result=2).ok

    def test_not_ok_with_error(self):
        assert not JobOutcome(item=1, error=RuntimeError("x")).ok
