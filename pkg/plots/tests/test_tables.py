from fractions import Fraction

import pytest

from prdm_plots import TableError, load_residuals, load_sweep

F = Fraction


class TestLoadSweep:
    def test_reference_fixture(self, sweep_csv):
        table = load_sweep(sweep_csv)
        assert len(table.rows) == 38
        assert table.scenarios == ("all-children", "without-4")
        first = table.series("all-children")
        assert first[0] == (F(1, 2), F(2125, 99))
        assert first[-1] == (F(19, 2), F(775, 81))
        assert len(first) == len(table.series("without-4")) == 19

    def test_rational_columns_win_over_decimals(self, tmp_path):
        path = tmp_path / "s.csv"
        path.write_text(
            "scenario,delta,utility,delta_rational,utility_rational\n"
            "a,0.333333333333,0.666666666667,1/3,2/3\n"
        )
        table = load_sweep(path)
        assert table.rows[0].delta == F(1, 3)
        assert table.rows[0].utility == F(2, 3)

    def test_plain_decimal_files_parse(self, tmp_path):
        path = tmp_path / "s.csv"
        path.write_text("scenario,delta,utility\na,0.5,21.25\na,1,20\n")
        table = load_sweep(path)
        assert table.series("a") == ((F(1, 2), F(85, 4)), (F(1), F(20)))

    def test_bad_value_names_the_row(self, tmp_path):
        path = tmp_path / "s.csv"
        path.write_text("scenario,delta,utility\na,0.5,20\na,1.0,oops\n")
        with pytest.raises(TableError, match="row 3"):
            load_sweep(path)

    def test_non_increasing_delta_names_the_row(self, tmp_path):
        path = tmp_path / "s.csv"
        path.write_text(
            "scenario,delta,utility\na,0.5,20\na,0.5,19\n"
        )
        with pytest.raises(TableError, match="row 3.*does not increase"):
            load_sweep(path)

    def test_scenarios_interleave_independently(self, tmp_path):
        path = tmp_path / "s.csv"
        path.write_text(
            "scenario,delta,utility\na,1,5\nb,1,4\na,2,3\nb,2,2\n"
        )
        table = load_sweep(path)
        assert table.scenarios == ("a", "b")
        assert table.series("a") == ((F(1), F(5)), (F(2), F(3)))

    def test_header_only_is_an_error(self, tmp_path):
        path = tmp_path / "s.csv"
        path.write_text("scenario,delta,utility\n")
        with pytest.raises(TableError, match="no data rows"):
            load_sweep(path)

    def test_missing_columns(self, tmp_path):
        path = tmp_path / "s.csv"
        path.write_text("scenario,delta\na,0.5\n")
        with pytest.raises(TableError, match="needs columns"):
            load_sweep(path)

    def test_empty_scenario_rejected(self, tmp_path):
        path = tmp_path / "s.csv"
        path.write_text("scenario,delta,utility\n,0.5,20\n")
        with pytest.raises(TableError, match="row 2.*scenario"):
            load_sweep(path)


class TestLoadResiduals:
    def test_reference_fixture(self, residuals_csv):
        table = load_residuals(residuals_csv)
        assert table.points == (
            (F(1), F(20)),
            (F(10), F(100, 41)),
            (F(100), F(100, 401)),
            (F(1000), F(100, 4001)),
        )

    def test_duplicate_scale_names_the_row(self, tmp_path):
        path = tmp_path / "r.csv"
        path.write_text("scale,residual\n1,20\n1,19\n")
        with pytest.raises(TableError, match="row 3.*does not increase"):
            load_residuals(path)

    def test_single_point_is_fine(self, tmp_path):
        path = tmp_path / "r.csv"
        path.write_text("scale,residual\n1,20\n")
        assert load_residuals(path).points == ((F(1), F(20)),)

    def test_header_only_is_an_error(self, tmp_path):
        path = tmp_path / "r.csv"
        path.write_text("scale,residual\n")
        with pytest.raises(TableError, match="no data rows"):
            load_residuals(path)
