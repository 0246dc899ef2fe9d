import re

import pytest

from hipm_lab.errors import ParseError
from hipm_lab.plot import emit_svg_plot

FIG1 = "n,estimator,mean,std,stderr,replications\n"
FIG2 = "x,approximation,d_lip_estimate,d_lip_std,upper_bound,replications\n"


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return path


@pytest.mark.parametrize("text", ["", FIG1, "a,b\n1,2\n", FIG1 + "16,wow,abc,0,0,8\n",
                                  FIG1 + "16,wow,0.5,0\n", FIG1 + "16,wow,nan,0,0,8\n"])
def test_bad_csv_writes_nothing(tmp_path, text):
    src = write(tmp_path, "in.csv", text)
    out = tmp_path / "out.svg"
    with pytest.raises(ParseError):
        emit_svg_plot(src, out)
    assert not out.exists()


def test_single_point(tmp_path):
    src = write(tmp_path, "in.csv", FIG1 + "16,wow,0.5,0.1,0.05,8\n")
    svg = (emit_svg_plot(src, tmp_path / "out.svg") and (tmp_path / "out.svg").read_text())
    assert svg.count('class="marker"') == 1
    assert 'class="band"' not in svg


def test_fig1_left_reference_line(tmp_path):
    rows = "".join(f"{n},{e},{v},0.02,0.01,8\n" for n in (16, 32, 64)
                   for e, v in (("wow", 0.7), ("hipm", 0.6), ("mean_lower_bound", 0.3),
                                ("reference", 0.625)))
    src = write(tmp_path, "fig1-left.csv", FIG1 + rows.replace("0.625,0.02,0.01", "0.625,0,0"))
    svg = emit_svg_plot(src, tmp_path / "fig1-left.svg").read_text()
    ref = re.findall(r'<line class="reference" x1="[\d.]+" y1="([\d.]+)" x2="[\d.]+" y2="([\d.]+)"[^>]*'
                     r'data-value="([^"]+)"', svg)
    assert len(ref) == 1
    y1, y2, value = ref[0]
    assert y1 == y2 and float(value) == 0.625
    assert svg.count('class="band"') == 3
    assert svg.count('class="marker"') == 9


def test_fig2_bounds_dashed(tmp_path):
    rows = "".join(f"{x},{a},0.1,0.01,{0.5 / x},4\n" for x in (1, 10, 50)
                   for a in ("dirichlet_multinomial", "stick_breaking", "hierarchical_empirical"))
    svg = emit_svg_plot(write(tmp_path, "fig2-N.csv", FIG2 + rows), tmp_path / "o.svg").read_text()
    assert svg.count('class="bound"') == 3


def test_loglog_auto_and_title(tmp_path):
    rows = "".join(f"{n},hipm,{n ** -0.5},0.01,0.005,8\n" for n in (16, 64, 256))
    src = write(tmp_path, "fig1-right.csv", FIG1 + rows)
    svg = emit_svg_plot(src, tmp_path / "r.svg", title="a<b").read_text()
    assert "a&lt;b" in svg
    # equal spacing in log x: 16, 64, 256
    xs = [float(x) for x in re.findall(r'<circle class="marker" cx="([\d.]+)"', svg)]
    assert xs[1] - xs[0] == pytest.approx(xs[2] - xs[1], abs=0.02)
