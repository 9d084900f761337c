# Shared numeric assertions for the photocount suite

import math


class NumericAssertions:
    @staticmethod
    def assert_rel_close(actual, expected, rel: float, label: str = ""):
        """
        Relative closeness; an exact zero expectation falls back to an absolute check.
        """
        actual = float(actual)
        expected = float(expected)
        assert math.isfinite(actual), f"{label}: got non-finite value {actual!r}"
        scale = abs(expected) if expected != 0 else 1.0
        err = abs(actual - expected) / scale
        assert err <= rel, f"{label}: {actual!r} vs {expected!r} (relative error {err:.3g} > {rel:.1g})"

    @staticmethod
    def assert_within_stderr(estimate, expected, k: float = 3.0, slack: float = 0.0, label: str = ""):
        """
        |estimate.value − expected| <= k·stderr + slack.
        """
        diff = abs(estimate.value - float(expected))
        allowed = k * estimate.stderr + slack
        assert diff <= allowed, (
            f"{label}: MC {estimate.value!r} ± {estimate.stderr:.3g} vs {float(expected)!r} "
            f"(|diff| {diff:.3g} > {allowed:.3g})"
        )

    @staticmethod
    def assert_strictly_decreasing(values, label: str = ""):
        values = [float(v) for v in values]
        for a, b in zip(values, values[1:]):
            assert b < a, f"{label}: sequence not strictly decreasing: {values}"
