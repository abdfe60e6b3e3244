import csv
import io

import numpy as np
import pytest
from pydantic import ValidationError

from harmap.catalog import log_shear
from harmap.plotting import CSV_HEADER, PlotSpec, circle_radii, plot_command, render_csv, render_svg, sample_curves
from harmap.radius_analysis import R_CONVEX, convex_test_at_radius, starlike_test_at_radius


def _rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_identity_maps_circles_to_circles(identity_map):
    spec = PlotSpec(function="g_alpha:0,0", radii=[0.3, 0.8], n_rays=4, n_circles=2, samples_per_curve=64)
    for curve in sample_curves(identity_map, spec):
        if curve.kind == "circle":
            assert np.allclose(np.abs(curve.w), curve.param, atol=1e-12)


def test_circle_radii():
    spec = PlotSpec(function="F", radii=[0.5, 0.9], n_circles=3)
    assert circle_radii(spec) == pytest.approx([0.5, 0.9, 0.3, 0.6]), "0.9 is requested and spaced, drawn once"
    assert circle_radii(PlotSpec(function="F", radii=[0.5, 0.5], n_circles=2)) == pytest.approx([0.5, 0.25])


def test_csv_layout_is_deterministic(F):
    spec = PlotSpec(function="F", radii=[0.5], n_rays=3, n_circles=1, samples_per_curve=64, output_format="csv")
    first = render_csv(sample_curves(F, spec))
    second = render_csv(sample_curves(F, spec))
    assert first == second, "identical specs must give byte-identical CSV"
    rows = _rows(first)
    assert rows[0] == CSV_HEADER
    assert len(rows) == 1 + (1 + 3) * 64
    assert {r[1] for r in rows[1:]} == {"circle", "ray"}


def test_svg_has_one_polyline_per_curve(L):
    spec = PlotSpec(function="L", radii=[0.9], n_rays=6, n_circles=2)
    svg = render_svg(sample_curves(L, spec), title="L")
    assert svg.count("<polyline") == 2 + 6
    assert "viewBox" in svg


@pytest.mark.parametrize("kwargs", [{"radii": [1.0]}, {"radii": [0.0]}, {"samples_per_curve": 32}, {"output_format": "png"}])
def test_plot_spec_validation(kwargs):
    with pytest.raises(ValidationError):
        PlotSpec(function="F", **kwargs)


def test_plot_command_writes_file(F, tmp_path):
    spec = PlotSpec(function="F", radii=[R_CONVEX, 0.5], output_format="svg")
    out = plot_command(F, spec, tmp_path / "F.svg")
    assert out.read_text(encoding="utf-8").startswith("<svg")
    assert convex_test_at_radius(F, R_CONVEX - 1e-6).passed
    assert not convex_test_at_radius(F, 0.5).passed


@pytest.mark.slow
def test_log_shear_circle_is_not_starlike():
    f = log_shear(64)
    assert not starlike_test_at_radius(f, 0.95).passed
    spec = PlotSpec(function="example22", radii=[0.95], n_rays=0, n_circles=0, samples_per_curve=4096, output_format="csv")
    rows = _rows(render_csv(sample_curves(f, spec)))[1:]
    w = np.array([complex(float(r[4]), float(r[5])) for r in rows])
    turning = np.diff(np.unwrap(np.angle(w)))
    assert turning.min() < 0, "arg f decreases somewhere along the image of |z| = 0.95"
