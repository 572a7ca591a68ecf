import pytest

from twomode.config import DEFAULT_SETTINGS, Settings, settings_from_options
from twomode.errors import ConfigurationError, InvalidArgumentError
from twomode.util import Cutoffs, check_cutoff, check_xi, parse_complex, parse_cutoffs


class TestCutoffParsing:
    @pytest.mark.parametrize(
        "cutoff_string, expected",
        [
            ("30", Cutoffs(30, 30)),
            ("30x40", Cutoffs(30, 40)),
            ("30X40", Cutoffs(30, 40)),
            ("30,40", Cutoffs(30, 40)),
            (" 12 x 7 ", Cutoffs(12, 7)),
        ],
    )
    def test_valid(self, cutoff_string, expected):
        assert parse_cutoffs(cutoff_string) == expected

    @pytest.mark.parametrize("cutoff_string", ["", "x30", "30x", "3.5", "ten", "1x2x3"])
    def test_invalid(self, cutoff_string):
        with pytest.raises(ValueError, match="couldn't parse cutoff string"):
            parse_cutoffs(cutoff_string)

    def test_zero(self):
        with pytest.raises(ValueError, match="cutoffs must be at least 1"):
            parse_cutoffs("0x4")

    def test_not_a_string(self):
        with pytest.raises(ValueError):
            parse_cutoffs(30)

    def test_cutoffs(self):
        cutoffs = Cutoffs(3, 4)

        assert cutoffs.dimension == 12
        assert cutoffs.grown(2, 1) == Cutoffs(5, 5)
        assert str(cutoffs) == "3x4"


class TestArgumentChecks:
    @pytest.mark.parametrize("xi", [0.0, 1.0, -0.3, 1.5, float("nan"), "0.5", None])
    def test_xi_out_of_range(self, xi):
        with pytest.raises(InvalidArgumentError, match="strictly inside"):
            check_xi(xi)

    def test_xi(self):
        assert check_xi(0.5) == 0.5
        assert isinstance(check_xi(0.5), float)

    @pytest.mark.parametrize("cutoff", [0, -1, 2.5])
    def test_cutoff(self, cutoff):
        with pytest.raises(InvalidArgumentError, match="cutoff must be an integer"):
            check_cutoff(cutoff)

    @pytest.mark.parametrize(
        "value, expected",
        [
            ("1", 1 + 0j),
            ("0.5j", 0.5j),
            ("1+0.5j", 1 + 0.5j),
            ("1 + 0.5i", 1 + 0.5j),
            ("-0.2-1i", -0.2 - 1j),
            (0.25, 0.25 + 0j),
            (1 - 1j, 1 - 1j),
        ],
    )
    def test_parse_complex(self, value, expected):
        assert parse_complex(value) == expected

    def test_parse_complex_invalid(self):
        with pytest.raises(ValueError):
            parse_complex("one")


class TestSettings:
    def test_defaults(self):
        assert DEFAULT_SETTINGS.truncation_tolerance == 1e-12
        assert DEFAULT_SETTINGS.verdict_margin == 1e-9
        assert DEFAULT_SETTINGS.dense_limit == 4096

    def test_replace(self):
        loose = DEFAULT_SETTINGS.replace(truncation_tolerance=1e-9)

        assert loose.truncation_tolerance == 1e-9
        assert loose.dense_limit == DEFAULT_SETTINGS.dense_limit
        assert DEFAULT_SETTINGS.truncation_tolerance == 1e-12

    def test_from_options(self):
        settings = settings_from_options(dense_limit=64, witness_bound=3)

        assert settings == Settings(dense_limit=64, witness_bound=3)

    def test_unknown_option(self):
        with pytest.raises(
            ConfigurationError, match="unknown settings : bogus, tolerance"
        ):
            settings_from_options(tolerance=1e-3, bogus=1)

    def test_negative_value(self):
        with pytest.raises(
            ConfigurationError, match="truncation_tolerance must be non-negative"
        ):
            DEFAULT_SETTINGS.replace(truncation_tolerance=-1.0)

    @pytest.mark.parametrize("value", ["1e-9", None, True])
    def test_non_numeric(self, value):
        with pytest.raises(ConfigurationError, match="must be numeric"):
            Settings(truncation_tolerance=value)

    def test_dense_limit(self):
        with pytest.raises(ConfigurationError, match="dense_limit must be at least 1"):
            Settings(dense_limit=0)

    def test_as_dict(self):
        echo = DEFAULT_SETTINGS.as_dict()

        assert echo["sigma_margin"] == 12.0
        assert set(echo) >= {"truncation_tolerance", "amplitude_cap", "expm_margin"}
